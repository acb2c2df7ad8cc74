//! Classical-quantum states as label-indexed PSD blocks.

use num_complex::Complex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::linalg::{HermitianMatrix, MatrixJson};
use crate::error::{domain, Error, Result};
use crate::scalar::Real;

pub const PSD_TOLERANCE: f64 = 1e-10;
pub const TRACE_TOLERANCE: f64 = 1e-10;

/// `ρ_XE = Σ_x |x⟩⟨x| ⊗ ρ_E^x`.
#[derive(Debug, Clone, PartialEq)]
pub struct CqState<T: Real> {
    blocks: Vec<HermitianMatrix<T>>,
    d_e: usize,
}

/// `ρ_{X0 X E}` with block `(x0, x)` stored at `x0·d_x + x`.
#[derive(Debug, Clone, PartialEq)]
pub struct CcqState<T: Real> {
    joint: CqState<T>,
    d_x0: usize,
    d_x: usize,
}

fn validate<T: Real>(blocks: &[HermitianMatrix<T>]) -> Result<usize> {
    let Some(first) = blocks.first() else {
        return domain("a cq state needs at least one label");
    };
    let d_e = first.dim();
    // loosened for single precision
    let tol = |base: f64| T::lit(base).max(T::epsilon() * T::lit(100.0));
    let mut total = T::zero();
    for (x, b) in blocks.iter().enumerate() {
        if b.dim() != d_e {
            return domain(format!("block {x} has dimension {}, expected {d_e}", b.dim()));
        }
        let min = b.min_eigenvalue()?;
        if min < -tol(PSD_TOLERANCE) {
            return Err(Error::Numerical(format!("block {x} has eigenvalue {min}")));
        }
        total = total + b.trace();
    }
    if (total - T::one()).abs() > tol(TRACE_TOLERANCE) {
        return Err(Error::Numerical(format!("total trace {total} differs from 1")));
    }
    Ok(d_e)
}

fn gaussian_block<T: Real, R: Rng + ?Sized>(d_e: usize, rank: usize, rng: &mut R) -> HermitianMatrix<T> {
    // A A† with A a d_e × rank standard complex Gaussian matrix
    let a: Vec<Complex<f64>> = (0..d_e * rank)
        .map(|_| Complex::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect();
    let mut out = vec![Complex::new(T::zero(), T::zero()); d_e * d_e];
    for i in 0..d_e {
        for j in 0..d_e {
            let s: Complex<f64> = (0..rank).map(|k| a[i * rank + k] * a[j * rank + k].conj()).sum();
            out[i * d_e + j] = Complex::new(T::lit(s.re), T::lit(s.im));
        }
    }
    HermitianMatrix::from_entries(d_e, out).expect("finite Gaussian block")
}

impl<T: Real> CqState<T> {
    pub fn new(blocks: Vec<HermitianMatrix<T>>) -> Result<Self> {
        let d_e = validate(&blocks)?;
        Ok(CqState { blocks, d_e })
    }

    /// Diagonal state from a joint pmf `p[x][e]`.
    pub fn classical(pmf: &[Vec<T>]) -> Result<Self> {
        CqState::new(pmf.iter().map(|row| HermitianMatrix::diagonal(row)).collect())
    }

    /// Blocks `A_x A_x†` with independent complex Gaussian `A_x` of shape
    /// `d_e × rank`, normalized to unit total trace.
    pub fn random<R: Rng + ?Sized>(d_x: usize, d_e: usize, rank: usize, rng: &mut R) -> Result<Self> {
        if d_x == 0 || d_e == 0 || rank == 0 {
            return domain("random states need positive dimensions and rank");
        }
        let blocks: Vec<HermitianMatrix<T>> = (0..d_x).map(|_| gaussian_block(d_e, rank, rng)).collect();
        let total: T = blocks.iter().map(|b| b.trace()).sum();
        CqState::new(blocks.iter().map(|b| b.scale(T::one() / total)).collect())
    }

    /// `U_X ⊗ ρ_E`.
    pub fn uniform_over(d_x: usize, rho_e: &HermitianMatrix<T>) -> Result<Self> {
        let b = rho_e.scale(T::one() / T::from_usize(d_x).unwrap());
        CqState::new(vec![b; d_x])
    }

    pub fn d_x(&self) -> usize {
        self.blocks.len()
    }

    pub fn d_e(&self) -> usize {
        self.d_e
    }

    pub fn blocks(&self) -> &[HermitianMatrix<T>] {
        &self.blocks
    }

    pub fn block(&self, x: usize) -> &HermitianMatrix<T> {
        &self.blocks[x]
    }

    /// `ρ_E = Σ_x ρ_E^x`.
    pub fn rho_e(&self) -> HermitianMatrix<T> {
        self.blocks.iter().skip(1).fold(self.blocks[0].clone(), |acc, b| acc.add(b).unwrap())
    }

    /// `p(x) = Tr ρ_E^x`.
    pub fn probabilities(&self) -> Vec<T> {
        self.blocks.iter().map(|b| b.trace()).collect()
    }

    /// Pushes labels through `f: x -> z`, summing blocks that collide.
    pub fn relabel(&self, d_z: usize, f: impl Fn(usize) -> usize) -> Result<Self> {
        let mut out = vec![HermitianMatrix::zeros(self.d_e); d_z];
        for (x, b) in self.blocks.iter().enumerate() {
            let z = f(x);
            if z >= d_z {
                return domain(format!("label {x} mapped to {z}, outside [0, {d_z})"));
            }
            out[z] = out[z].add(b)?;
        }
        Ok(CqState { blocks: out, d_e: self.d_e })
    }

    /// Every block diagonal to within `tol`.
    pub fn is_diagonal(&self, tol: T) -> bool {
        self.blocks.iter().all(|b| b.off_diagonal_norm() <= tol)
    }

    pub fn to_json(&self) -> StateJson {
        StateJson {
            kind: "cq".into(),
            dims: vec![self.d_x(), self.d_e],
            labels: (0..self.d_x()).map(|x| vec![x]).collect(),
            blocks: self.blocks.iter().map(|b| b.to_json()).collect(),
        }
    }
}

impl<T: Real> CcqState<T> {
    pub fn new(d_x0: usize, d_x: usize, blocks: Vec<HermitianMatrix<T>>) -> Result<Self> {
        if blocks.len() != d_x0 * d_x {
            return domain(format!("expected {} blocks, got {}", d_x0 * d_x, blocks.len()));
        }
        Ok(CcqState { joint: CqState::new(blocks)?, d_x0, d_x })
    }

    pub fn from_joint(d_x0: usize, d_x: usize, joint: CqState<T>) -> Result<Self> {
        if joint.d_x() != d_x0 * d_x {
            return domain(format!("joint state has {} labels, expected {}", joint.d_x(), d_x0 * d_x));
        }
        Ok(CcqState { joint, d_x0, d_x })
    }

    pub fn random<R: Rng + ?Sized>(d_x0: usize, d_x: usize, d_e: usize, rank: usize, rng: &mut R) -> Result<Self> {
        CcqState::from_joint(d_x0, d_x, CqState::random(d_x0 * d_x, d_e, rank, rng)?)
    }

    /// `U_{X0} ⊗ ρ_{XE}`.
    pub fn with_uniform_x0(d_x0: usize, rho_xe: &CqState<T>) -> Result<Self> {
        let w = T::one() / T::from_usize(d_x0).unwrap();
        let blocks = (0..d_x0).flat_map(|_| rho_xe.blocks().iter().map(|b| b.scale(w))).collect();
        CcqState::new(d_x0, rho_xe.d_x(), blocks)
    }

    pub fn d_x0(&self) -> usize {
        self.d_x0
    }

    pub fn d_x(&self) -> usize {
        self.d_x
    }

    pub fn d_e(&self) -> usize {
        self.joint.d_e()
    }

    pub fn block(&self, x0: usize, x: usize) -> &HermitianMatrix<T> {
        self.joint.block(x0 * self.d_x + x)
    }

    /// The state over the joint label `(x0, x)`.
    pub fn joint(&self) -> &CqState<T> {
        &self.joint
    }

    /// `ρ_{XE}` with `X0` traced out.
    pub fn marginal_x(&self) -> CqState<T> {
        let d_x = self.d_x;
        self.joint.relabel(d_x, |i| i % d_x).expect("in range")
    }

    pub fn rho_e(&self) -> HermitianMatrix<T> {
        self.joint.rho_e()
    }

    pub fn to_json(&self) -> StateJson {
        StateJson {
            kind: "ccq".into(),
            dims: vec![self.d_x0, self.d_x, self.d_e()],
            labels: (0..self.d_x0).flat_map(|a| (0..self.d_x).map(move |b| vec![a, b])).collect(),
            blocks: self.joint.blocks().iter().map(|b| b.to_json()).collect(),
        }
    }
}

/// JSON interchange form. `dims` is `[d_x, d_e]` for cq states and
/// `[d_x0, d_x, d_e]` for ccq states; `labels[i]` names block `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    pub kind: String,
    pub dims: Vec<usize>,
    pub labels: Vec<Vec<usize>>,
    pub blocks: Vec<MatrixJson>,
}

impl StateJson {
    fn blocks<T: Real>(&self) -> Result<Vec<HermitianMatrix<T>>> {
        if self.labels.len() != self.blocks.len() {
            return domain("labels and blocks differ in length");
        }
        self.blocks.iter().map(HermitianMatrix::from_json).collect()
    }

    pub fn to_cq<T: Real>(&self) -> Result<CqState<T>> {
        if self.kind != "cq" || self.dims.len() != 2 {
            return domain("expected a cq state with dims [d_x, d_e]");
        }
        // blocks are placed by label so files may list them in any order
        let mut slots: Vec<Option<HermitianMatrix<T>>> = vec![None; self.dims[0]];
        for (label, b) in self.labels.iter().zip(self.blocks::<T>()?) {
            match label.as_slice() {
                [x] if *x < self.dims[0] && slots[*x].is_none() => slots[*x] = Some(b),
                _ => return domain(format!("bad or repeated label {label:?}")),
            }
        }
        let blocks = slots.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| Error::Domain("missing labels".into()))?;
        let state = CqState::new(blocks)?;
        if state.d_e() != self.dims[1] {
            return domain("block dimension does not match dims");
        }
        Ok(state)
    }

    pub fn to_ccq<T: Real>(&self) -> Result<CcqState<T>> {
        if self.kind != "ccq" || self.dims.len() != 3 {
            return domain("expected a ccq state with dims [d_x0, d_x, d_e]");
        }
        let (d0, d1) = (self.dims[0], self.dims[1]);
        let mut slots: Vec<Option<HermitianMatrix<T>>> = vec![None; d0 * d1];
        for (label, b) in self.labels.iter().zip(self.blocks::<T>()?) {
            match label.as_slice() {
                [a, x] if *a < d0 && *x < d1 && slots[a * d1 + x].is_none() => slots[a * d1 + x] = Some(b),
                _ => return domain(format!("bad or repeated label {label:?}")),
            }
        }
        let blocks = slots.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| Error::Domain("missing labels".into()))?;
        let state = CcqState::new(d0, d1, blocks)?;
        if state.d_e() != self.dims[2] {
            return domain("block dimension does not match dims");
        }
        Ok(state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn random_states_are_valid() {
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(4);
        for rank in 1..=3 {
            let s: CqState<f64> = CqState::random(3, 4, rank, &mut rng).unwrap();
            assert!((s.rho_e().trace() - 1.0).abs() < 1e-12);
            assert!(s.blocks().iter().all(|b| b.min_eigenvalue().unwrap() > -1e-12));
        }
    }

    #[test]
    fn validation() {
        let half = HermitianMatrix::<f64>::diagonal(&[0.5]);
        assert!(CqState::new(vec![half.clone(), half.clone()]).is_ok());
        assert!(CqState::new(vec![half.clone()]).is_err());
        assert!(CqState::new(vec![HermitianMatrix::diagonal(&[1.5]), HermitianMatrix::diagonal(&[-0.5])]).is_err());
        assert!(CqState::new(vec![half.clone(), HermitianMatrix::diagonal(&[0.25, 0.25])]).is_err());
        assert!(CcqState::new(2, 2, vec![half.clone(), half]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(9);
        let s: CcqState<f64> = CcqState::random(2, 3, 2, 2, &mut rng).unwrap();
        let text = serde_json::to_string(&s.to_json()).unwrap();
        let back: StateJson = serde_json::from_str(&text).unwrap();
        let t = back.to_ccq::<f64>().unwrap();
        for i in 0..6 {
            assert!(t.joint().block(i).sub(s.joint().block(i)).unwrap().frobenius_norm() < 1e-15);
        }
        assert!(back.to_cq::<f64>().is_err());
        let cq = s.marginal_x();
        assert_eq!(cq.to_json().to_cq::<f64>().unwrap().d_x(), 3);
    }
}
