//! Dense complex Hermitian matrices and a cyclic Jacobi eigensolver.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::scalar::Real;

/// Largest supported dimension.
pub const MAX_DIM: usize = 64;
pub const MAX_SWEEPS: usize = 100;
/// Eigenvalues below this are treated as kernel by [`HermitianMatrix::inv_sqrt_on_support`].
pub const KERNEL_THRESHOLD: f64 = 1e-12;

/// Row-major complex matrix, conjugate-symmetric by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix<T: Real> {
    dim: usize,
    data: Vec<Complex<T>>,
}

/// Eigenvalues (descending) and matching orthonormal eigenvectors, stored
/// as the columns of a row-major `dim × dim` array.
#[derive(Debug, Clone)]
pub struct Eigen<T: Real> {
    pub values: Vec<T>,
    pub vectors: Vec<Complex<T>>,
    dim: usize,
}

impl<T: Real> Eigen<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Component `i` of eigenvector `k`.
    pub fn vector(&self, i: usize, k: usize) -> Complex<T> {
        self.vectors[i * self.dim + k]
    }

    /// `Σ_k f(λ_k) v_k v_k†`.
    pub fn reconstruct(&self, f: impl Fn(T) -> T) -> HermitianMatrix<T> {
        let n = self.dim;
        let mut out = vec![Complex::new(T::zero(), T::zero()); n * n];
        for k in 0..n {
            let fk = f(self.values[k]);
            if fk == T::zero() {
                continue;
            }
            for i in 0..n {
                let vi = self.vector(i, k) * fk;
                for j in 0..n {
                    out[i * n + j] = out[i * n + j] + vi * self.vector(j, k).conj();
                }
            }
        }
        HermitianMatrix::from_raw(n, out)
    }
}

fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

impl<T: Real> HermitianMatrix<T> {
    /// Symmetrizes `(A + A†)/2` so the stored matrix is exactly Hermitian.
    pub fn from_entries(dim: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return domain(format!("dimension {dim} outside 1..={MAX_DIM}"));
        }
        if entries.len() != dim * dim {
            return domain(format!("expected {} entries, got {}", dim * dim, entries.len()));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numerical("non-finite matrix entry".into()));
        }
        Ok(Self::from_raw(dim, entries))
    }

    fn from_raw(dim: usize, mut data: Vec<Complex<T>>) -> Self {
        let half = T::lit(0.5);
        for i in 0..dim {
            data[i * dim + i] = Complex::new(data[i * dim + i].re, T::zero());
            for j in i + 1..dim {
                let avg = (data[i * dim + j] + data[j * dim + i].conj()) * half;
                data[i * dim + j] = avg;
                data[j * dim + i] = avg.conj();
            }
        }
        HermitianMatrix { dim, data }
    }

    pub fn zeros(dim: usize) -> Self {
        HermitianMatrix { dim, data: vec![czero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![T::one(); dim])
    }

    pub fn diagonal(diag: &[T]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = Complex::new(d, T::zero());
        }
        m
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn projector(psi: &[Complex<T>]) -> Self {
        let n = psi.len();
        let data = (0..n * n).map(|k| psi[k / n] * psi[k % n].conj()).collect();
        HermitianMatrix { dim: n, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.dim + j]
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.data
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return domain(format!("dimension mismatch: {} vs {}", self.dim, other.dim));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(HermitianMatrix { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(HermitianMatrix { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() })
    }

    pub fn scale(&self, c: T) -> Self {
        HermitianMatrix { dim: self.dim, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn trace(&self) -> T {
        (0..self.dim).map(|i| self.data[i * self.dim + i].re).sum()
    }

    /// `Tr(A B)`, real for Hermitian arguments.
    pub fn trace_product(&self, other: &Self) -> Result<T> {
        self.same_dim(other)?;
        let n = self.dim;
        let mut acc = T::zero();
        for i in 0..n {
            for j in 0..n {
                acc = acc + (self.data[i * n + j] * other.data[j * n + i]).re;
            }
        }
        Ok(acc)
    }

    /// `S A S` for Hermitian `S`.
    pub fn congruence(&self, s: &Self) -> Result<Self> {
        self.same_dim(s)?;
        let n = self.dim;
        let mul = |a: &[Complex<T>], b: &[Complex<T>]| {
            let mut out = vec![czero::<T>(); n * n];
            for i in 0..n {
                for k in 0..n {
                    let aik = a[i * n + k];
                    if aik == czero() {
                        continue;
                    }
                    for j in 0..n {
                        out[i * n + j] = out[i * n + j] + aik * b[k * n + j];
                    }
                }
            }
            out
        };
        let sa = mul(&s.data, &self.data);
        Ok(HermitianMatrix::from_raw(n, mul(&sa, &s.data)))
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn off_diagonal_norm(&self) -> T {
        let n = self.dim;
        let mut acc = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    acc = acc + self.data[i * n + j].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }

    /// Largest deviation from conjugate symmetry.
    pub fn hermiticity_defect(&self) -> T {
        let n = self.dim;
        let mut worst = T::zero();
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.data[i * n + j] - self.data[j * n + i].conj()).norm());
            }
        }
        worst
    }

    /// Cyclic complex Jacobi: rotate away every off-diagonal pair until the
    /// off-diagonal Frobenius norm drops below `max(1e-12, n·ε_mach)·max(1, ‖A‖_F)`.
    pub fn eigh(&self) -> Result<Eigen<T>> {
        let n = self.dim;
        if n > MAX_DIM {
            return domain(format!("dimension {n} exceeds {MAX_DIM}"));
        }
        let mut a = self.data.clone();
        let mut v = vec![czero::<T>(); n * n];
        for i in 0..n {
            v[i * n + i] = Complex::new(T::one(), T::zero());
        }
        let scale = self.frobenius_norm().max(T::one());
        let tol = T::lit(1e-12).max(T::from_usize(n).unwrap() * T::epsilon()) * scale;
        let off = |a: &[Complex<T>]| {
            let mut acc = T::zero();
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        acc = acc + a[i * n + j].norm_sqr();
                    }
                }
            }
            acc.sqrt()
        };
        let mut sweeps = 0;
        while off(&a) >= tol {
            if sweeps == MAX_SWEEPS {
                return Err(Error::Numerical(format!("Jacobi did not converge in {MAX_SWEEPS} sweeps")));
            }
            sweeps += 1;
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[p * n + q];
                    let r = apq.norm();
                    if r <= T::min_positive_value().sqrt() * scale * T::epsilon() {
                        continue;
                    }
                    let phase = apq / r; // e^{iφ}
                    let app = a[p * n + p].re;
                    let aqq = a[q * n + q].re;
                    let theta = (aqq - app) / (T::lit(2.0) * r);
                    let t = if theta == T::zero() {
                        T::one()
                    } else {
                        theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt())
                    };
                    let c = T::one() / (t * t + T::one()).sqrt();
                    let s = t * c;
                    let gpp = Complex::new(c, T::zero());
                    let gpq = Complex::new(s, T::zero());
                    let gqp = -phase.conj() * s;
                    let gqq = phase.conj() * c;
                    // A ← A G
                    for k in 0..n {
                        let akp = a[k * n + p];
                        let akq = a[k * n + q];
                        a[k * n + p] = akp * gpp + akq * gqp;
                        a[k * n + q] = akp * gpq + akq * gqq;
                    }
                    // A ← G† A
                    for k in 0..n {
                        let apk = a[p * n + k];
                        let aqk = a[q * n + k];
                        a[p * n + k] = gpp.conj() * apk + gqp.conj() * aqk;
                        a[q * n + k] = gpq.conj() * apk + gqq.conj() * aqk;
                    }
                    a[p * n + q] = czero();
                    a[q * n + p] = czero();
                    a[p * n + p] = Complex::new(a[p * n + p].re, T::zero());
                    a[q * n + q] = Complex::new(a[q * n + q].re, T::zero());
                    // V ← V G
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = vkp * gpp + vkq * gqp;
                        v[k * n + q] = vkp * gpq + vkq * gqq;
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[j * n + j].re.partial_cmp(&a[i * n + i].re).unwrap_or(std::cmp::Ordering::Equal));
        let values = order.iter().map(|&i| a[i * n + i].re).collect();
        let mut vectors = vec![czero::<T>(); n * n];
        for (k, &src) in order.iter().enumerate() {
            for i in 0..n {
                vectors[i * n + k] = v[i * n + src];
            }
        }
        Ok(Eigen { values, vectors, dim: n })
    }

    pub fn min_eigenvalue(&self) -> Result<T> {
        Ok(*self.eigh()?.values.last().unwrap())
    }

    /// Largest absolute eigenvalue.
    pub fn operator_norm(&self) -> Result<T> {
        Ok(self.eigh()?.values.iter().fold(T::zero(), |m, v| m.max(v.abs())))
    }

    /// `Σ |λ|`.
    pub fn trace_norm(&self) -> Result<T> {
        Ok(self.eigh()?.values.iter().map(|v| v.abs()).sum())
    }

    /// Projector onto the span of eigenvectors with positive eigenvalue.
    pub fn positive_projector(&self) -> Result<Self> {
        Ok(self.eigh()?.reconstruct(|l| if l > T::zero() { T::one() } else { T::zero() }))
    }

    /// Generalized `A^{-1/2}`: eigenvalues above [`KERNEL_THRESHOLD`] are
    /// inverted, the rest mapped to zero.
    pub fn inv_sqrt_on_support(&self) -> Result<Self> {
        let thr = T::lit(KERNEL_THRESHOLD);
        Ok(self.eigh()?.reconstruct(|l| if l > thr { T::one() / l.sqrt() } else { T::zero() }))
    }

    pub fn map_real<U: Real>(&self, f: impl Fn(T) -> U) -> HermitianMatrix<U> {
        HermitianMatrix { dim: self.dim, data: self.data.iter().map(|z| Complex::new(f(z.re), f(z.im))).collect() }
    }
}

/// `½‖ρ − σ‖₁`.
pub fn trace_distance<T: Real>(rho: &HermitianMatrix<T>, sigma: &HermitianMatrix<T>) -> Result<T> {
    Ok(rho.sub(sigma)?.trace_norm()? * T::lit(0.5))
}

/// JSON form of a matrix: rows of `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson(pub Vec<Vec<[f64; 2]>>);

impl<T: Real> HermitianMatrix<T> {
    pub fn to_json(&self) -> MatrixJson {
        let n = self.dim;
        MatrixJson(
            (0..n)
                .map(|i| (0..n).map(|j| {
                    let z = self.get(i, j);
                    [z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN)]
                }).collect())
                .collect(),
        )
    }

    pub fn from_json(m: &MatrixJson) -> Result<Self> {
        let n = m.0.len();
        if m.0.iter().any(|row| row.len() != n) {
            return domain("matrix rows must be square");
        }
        let entries = m.0.iter().flatten().map(|&[re, im]| Complex::new(T::lit(re), T::lit(im))).collect();
        Self::from_entries(n, entries)
    }
}
