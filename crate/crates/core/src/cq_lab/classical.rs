//! Exact classical counterparts of the lab quantities.
//!
//! A classical ccq state is a joint pmf `p(x0, x, e)`; everything here is
//! generic over [`Scalar`] so the same code runs in `f64` or in exact
//! rationals.

use super::linalg::HermitianMatrix;
use super::state::CcqState;
use super::xor::{digits, XorVariant};
use crate::error::{domain, Result};
use crate::scalar::{Real, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalCcq<S> {
    d_x0: usize,
    d_x: usize,
    d_e: usize,
    probs: Vec<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalXorCheck<S> {
    pub lhs: S,
    pub eps: S,
    /// `2·lhs² ≤ p^k·ε` with `k = t` (uniform) or `t + 1` (nonuniform).
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalSandwich<S> {
    pub eps: S,
    pub middle: S,
    pub lower: S,
    pub upper: S,
    pub holds: bool,
}

fn from_usize<S: Scalar>(v: usize) -> S {
    S::from_ratio(v as u64, 1)
}

impl<S: Scalar> ClassicalCcq<S> {
    /// `probs` is indexed by `(x0·d_x + x)·d_e + e`.
    pub fn new(d_x0: usize, d_x: usize, d_e: usize, probs: Vec<S>) -> Result<Self> {
        if d_x0 == 0 || d_x == 0 || d_e == 0 || probs.len() != d_x0 * d_x * d_e {
            return domain("pmf length does not match dimensions");
        }
        if probs.iter().any(|q| q.is_negative()) {
            return domain("negative probability");
        }
        Ok(ClassicalCcq { d_x0, d_x, d_e, probs })
    }

    /// Normalized integer weights.
    pub fn from_weights(d_x0: usize, d_x: usize, d_e: usize, weights: &[u64]) -> Result<Self> {
        let total: u64 = weights.iter().sum();
        if total == 0 {
            return domain("weights sum to zero");
        }
        ClassicalCcq::new(d_x0, d_x, d_e, weights.iter().map(|&w| S::from_ratio(w, total)).collect())
    }

    pub fn d_x0(&self) -> usize {
        self.d_x0
    }

    pub fn d_x(&self) -> usize {
        self.d_x
    }

    pub fn d_e(&self) -> usize {
        self.d_e
    }

    pub fn prob(&self, x0: usize, x: usize, e: usize) -> &S {
        &self.probs[(x0 * self.d_x + x) * self.d_e + e]
    }

    /// `p(x, e)` with `X0` summed out.
    pub fn marginal(&self, x: usize, e: usize) -> S {
        (0..self.d_x0).fold(S::zero(), |acc, x0| acc + self.prob(x0, x, e).clone())
    }

    pub fn p_e(&self, e: usize) -> S {
        (0..self.d_x).fold(S::zero(), |acc, x| acc + self.marginal(x, e))
    }

    /// Diagonal matrix state with the same distribution.
    pub fn to_state<T: Real>(&self) -> Result<CcqState<T>> {
        let blocks = (0..self.d_x0 * self.d_x)
            .map(|i| {
                let diag: Vec<T> = (0..self.d_e)
                    .map(|e| T::from_f64(self.probs[i * self.d_e + e].to_f64().unwrap_or(f64::NAN)).unwrap())
                    .collect();
                HermitianMatrix::diagonal(&diag)
            })
            .collect();
        CcqState::new(self.d_x0, self.d_x, blocks)
    }

    /// `½ Σ_{x,e} |p(x,e) − p(e)/d_X|`.
    pub fn distance_from_uniform(&self) -> S {
        let d = from_usize::<S>(self.d_x);
        let mut acc = S::zero();
        for e in 0..self.d_e {
            let u = self.p_e(e) / d.clone();
            for x in 0..self.d_x {
                acc = acc + (self.marginal(x, e) - u.clone()).abs();
            }
        }
        acc / from_usize(2)
    }

    /// `½ Σ |p(x0,x,e) − p(x,e)/d_X0|`.
    pub fn ccq_distance_from_uniform(&self) -> S {
        let d0 = from_usize::<S>(self.d_x0);
        let mut acc = S::zero();
        for x in 0..self.d_x {
            for e in 0..self.d_e {
                let u = self.marginal(x, e) / d0.clone();
                for x0 in 0..self.d_x0 {
                    acc = acc + (self.prob(x0, x, e).clone() - u.clone()).abs();
                }
            }
        }
        acc / from_usize(2)
    }

    pub fn premise_distance(&self, p: u32, a: &[u32], variant: XorVariant) -> Result<S> {
        if crate::extractors::pow_sat(p, a.len()) != self.d_x as u128 {
            return domain("X is not F_p^t");
        }
        if variant == XorVariant::Nonuniform && self.d_x0 != p as usize {
            return domain("X0 is not F_p");
        }
        let pu = p as usize;
        let mut z = vec![S::zero(); pu * self.d_e];
        for x0 in 0..self.d_x0 {
            for x in 0..self.d_x {
                let dot: u64 = digits(x, p, a.len()).zip(a).map(|(xi, &ai)| xi * ai as u64).sum();
                let base = if variant == XorVariant::Nonuniform { x0 as u64 } else { 0 };
                let zi = ((base + dot) % p as u64) as usize;
                for e in 0..self.d_e {
                    z[zi * self.d_e + e] = z[zi * self.d_e + e].clone() + self.prob(x0, x, e).clone();
                }
            }
        }
        let dz = from_usize::<S>(pu);
        let mut acc = S::zero();
        for e in 0..self.d_e {
            let u = self.p_e(e) / dz.clone();
            for zi in 0..pu {
                acc = acc + (z[zi * self.d_e + e].clone() - u.clone()).abs();
            }
        }
        Ok(acc / from_usize(2))
    }

    pub fn xor_check(&self, p: u32, t: usize, variant: XorVariant) -> Result<ClassicalXorCheck<S>> {
        let count = p.pow(t as u32) as usize;
        let mut eps = S::zero();
        for i in 0..count {
            let a: Vec<u32> = digits(i, p, t).map(|d| d as u32).collect();
            if variant == XorVariant::Uniform && i == 0 {
                continue;
            }
            let e = self.premise_distance(p, &a, variant)?;
            if e > eps {
                eps = e;
            }
        }
        let (lhs, k) = match variant {
            XorVariant::Uniform => (self.distance_from_uniform(), t),
            XorVariant::Nonuniform => (self.ccq_distance_from_uniform(), t + 1),
        };
        let scale = from_usize::<S>(p.pow(k as u32) as usize);
        let holds = from_usize::<S>(2) * lhs.clone() * lhs.clone() <= scale * eps.clone();
        Ok(ClassicalXorCheck { lhs, eps, holds })
    }

    /// `Σ_{x,e} p(x,e)² / p(e)` over the `X` marginal.
    pub fn collision(&self) -> S {
        let mut acc = S::zero();
        for e in 0..self.d_e {
            let pe = self.p_e(e);
            if pe.is_zero() {
                continue;
            }
            for x in 0..self.d_x {
                let q = self.marginal(x, e);
                acc = acc + q.clone() * q / pe.clone();
            }
        }
        acc
    }

    /// `Σ_{x0,x,e} p(x0,x,e)² / p(e)`.
    pub fn joint_collision(&self) -> S {
        let mut acc = S::zero();
        for e in 0..self.d_e {
            let pe = self.p_e(e);
            if pe.is_zero() {
                continue;
            }
            for x0 in 0..self.d_x0 {
                for x in 0..self.d_x {
                    let q = self.prob(x0, x, e).clone();
                    acc = acc + q.clone() * q / pe.clone();
                }
            }
        }
        acc
    }

    pub fn sandwich(&self, variant: XorVariant) -> ClassicalSandwich<S> {
        let two = from_usize::<S>(2);
        let four = from_usize::<S>(4);
        let (eps, middle, lower, d) = match variant {
            XorVariant::Uniform => {
                let d = from_usize::<S>(self.d_x);
                let eps = self.distance_from_uniform();
                let middle = self.collision() - S::one() / d.clone();
                let lower = four * eps.clone() * eps.clone() / d.clone();
                (eps, middle, lower, d)
            }
            XorVariant::Nonuniform => {
                let d0 = from_usize::<S>(self.d_x0);
                let eps = self.ccq_distance_from_uniform();
                let middle = self.joint_collision() - self.collision() / d0.clone();
                let lower = four * eps.clone() * eps.clone() / (d0.clone() * from_usize(self.d_x));
                (eps, middle, lower, d0)
            }
        };
        let upper = two * eps.clone() * (S::one() - S::one() / d);
        let holds = lower <= middle && middle <= upper;
        ClassicalSandwich { eps, middle, lower, upper, holds }
    }

    /// `Σ_e max_x p(x, e)` over the `X` marginal.
    pub fn guessing_probability(&self) -> S {
        let mut acc = S::zero();
        for e in 0..self.d_e {
            let mut best = S::zero();
            for x in 0..self.d_x {
                let q = self.marginal(x, e);
                if q > best {
                    best = q;
                }
            }
            acc = acc + best;
        }
        acc
    }
}
