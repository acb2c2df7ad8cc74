//! XOR lemmas and the collision-probability sandwich bounds.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::collision::{ccq_collision_record, collision_record};
use super::state::{CcqState, CqState};
use crate::error::{check_budget, domain, Error, Result};
use crate::scalar::Real;

/// Largest register size `p^t` accepted by the lemma checks.
pub const XOR_REGISTER_LIMIT: u128 = 1 << 10;
pub const XOR_ENV_LIMIT: u128 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum XorVariant {
    /// `Z = ⟨a, X⟩`, compared against `U_X ⊗ ρ_E`.
    Uniform,
    /// `Z = X0 + ⟨a, X⟩`, compared against `U_{X0} ⊗ ρ_{XE}`.
    Nonuniform,
}

impl XorVariant {
    pub const ALL: [XorVariant; 2] = [XorVariant::Uniform, XorVariant::Nonuniform];
}

impl fmt::Display for XorVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            XorVariant::Uniform => "uniform",
            XorVariant::Nonuniform => "nonuniform",
        })
    }
}

impl FromStr for XorVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(XorVariant::Uniform),
            "nonuniform" => Ok(XorVariant::Nonuniform),
            other => domain(format!("unknown variant {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XorReport<T> {
    pub variant: XorVariant,
    pub p: u32,
    pub t: usize,
    pub lhs: T,
    /// Largest premise distance over the relevant `a`.
    pub eps: T,
    pub rhs: T,
    pub margin: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SandwichReport<T> {
    pub variant: XorVariant,
    pub eps: T,
    /// `Γ_c − 1/d_X`, or `Γ_c(ρ_{X0XE}|ρ_E) − Γ_c(ρ_{XE}|ρ_E)/d_X0`.
    pub middle: T,
    pub lower: T,
    pub upper: T,
    pub gamma: T,
    pub identity_residual: T,
}

impl<T: Real> SandwichReport<T> {
    pub fn margin(&self) -> T {
        (self.middle - self.lower).min(self.upper - self.middle)
    }
}

/// `½‖ρ_XE − U_X ⊗ ρ_E‖₁`.
pub fn distance_from_uniform<T: Real>(state: &CqState<T>) -> Result<T> {
    let u = state.rho_e().scale(T::one() / T::from_usize(state.d_x()).unwrap());
    let mut acc = T::zero();
    for b in state.blocks() {
        acc = acc + b.sub(&u)?.trace_norm()?;
    }
    Ok(acc * T::lit(0.5))
}

/// `½‖ρ_{X0XE} − U_{X0} ⊗ ρ_{XE}‖₁`.
pub fn ccq_distance_from_uniform<T: Real>(state: &CcqState<T>) -> Result<T> {
    let marginal = state.marginal_x();
    let w = T::one() / T::from_usize(state.d_x0()).unwrap();
    let mut acc = T::zero();
    for x0 in 0..state.d_x0() {
        for x in 0..state.d_x() {
            acc = acc + state.block(x0, x).sub(&marginal.block(x).scale(w))?.trace_norm()?;
        }
    }
    Ok(acc * T::lit(0.5))
}

/// Digits of `x` in base `p`, least significant first.
pub(crate) fn digits(x: usize, p: u32, t: usize) -> impl Iterator<Item = u64> {
    let p = p as usize;
    (0..t).scan(x, move |rest, _| {
        let d = *rest % p;
        *rest /= p;
        Some(d as u64)
    })
}

fn check_register<T: Real>(state: &CcqState<T>, p: u32, t: usize, variant: XorVariant) -> Result<()> {
    let size = crate::extractors::pow_sat(p, t);
    if size != state.d_x() as u128 {
        return domain(format!("X has {} labels but F_{p}^{t} has {size}", state.d_x()));
    }
    if variant == XorVariant::Nonuniform && state.d_x0() != p as usize {
        return domain(format!("X0 has {} labels, expected {p}", state.d_x0()));
    }
    Ok(())
}

/// `ε_a`: distance of `Z` from uniform given `E`.
pub fn xor_premise_distance<T: Real>(state: &CcqState<T>, p: u32, a: &[u32], variant: XorVariant) -> Result<T> {
    let t = a.len();
    check_register(state, p, t, variant)?;
    if let Some(c) = a.iter().find(|&&c| c >= p) {
        return domain(format!("coefficient {c} is not in F_{p}"));
    }
    let d_x = state.d_x();
    let z_state = state.joint().relabel(p as usize, |i| {
        let (x0, x) = (i / d_x, i % d_x);
        let base = if variant == XorVariant::Nonuniform { x0 as u64 } else { 0 };
        let dot: u64 = digits(x, p, t).zip(a).map(|(xi, &ai)| xi * ai as u64).sum();
        ((base + dot) % p as u64) as usize
    })?;
    distance_from_uniform(&z_state)
}

/// All `a ∈ F_p^t` in index order.
fn coefficient_vectors(p: u32, t: usize) -> impl Iterator<Item = Vec<u32>> {
    let count = p.pow(t as u32) as usize;
    (0..count).map(move |i| digits(i, p, t).map(|d| d as u32).collect())
}

pub fn check_xor_lemma<T: Real>(state: &CcqState<T>, p: u32, t: usize, variant: XorVariant) -> Result<XorReport<T>> {
    check_budget(crate::extractors::pow_sat(p, t), XOR_REGISTER_LIMIT)?;
    check_budget(state.d_e() as u128, XOR_ENV_LIMIT)?;
    check_register(state, p, t, variant)?;
    let mut eps = T::zero();
    for a in coefficient_vectors(p, t) {
        if variant == XorVariant::Uniform && a.iter().all(|&c| c == 0) {
            continue;
        }
        eps = eps.max(xor_premise_distance(state, p, &a, variant)?);
    }
    let (lhs, exponent) = match variant {
        XorVariant::Uniform => (distance_from_uniform(&state.marginal_x())?, t as i32),
        XorVariant::Nonuniform => (ccq_distance_from_uniform(state)?, t as i32 + 1),
    };
    let pf = T::from_u32(p).unwrap();
    let rhs = pf.powi(exponent).sqrt() / T::lit(2.0).sqrt() * eps.sqrt();
    Ok(XorReport { variant, p, t, lhs, eps, rhs, margin: rhs - lhs })
}

pub fn check_collision_sandwich<T: Real>(state: &CcqState<T>, variant: XorVariant) -> Result<SandwichReport<T>> {
    check_budget(state.d_e() as u128, XOR_ENV_LIMIT)?;
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    match variant {
        XorVariant::Uniform => {
            let cq = state.marginal_x();
            let d = T::from_usize(cq.d_x()).unwrap();
            let eps = distance_from_uniform(&cq)?;
            let rec = collision_record(&cq)?;
            Ok(SandwichReport {
                variant,
                eps,
                middle: rec.gamma - T::one() / d,
                lower: four * eps * eps / d,
                upper: two * eps * (T::one() - T::one() / d),
                gamma: rec.gamma,
                identity_residual: rec.residual,
            })
        }
        XorVariant::Nonuniform => {
            let d0 = T::from_usize(state.d_x0()).unwrap();
            let dx = T::from_usize(state.d_x()).unwrap();
            let eps = ccq_distance_from_uniform(state)?;
            let rec = ccq_collision_record(state)?;
            Ok(SandwichReport {
                variant,
                eps,
                middle: rec.middle,
                lower: four * eps * eps / (d0 * dx),
                upper: two * eps * (T::one() - T::one() / d0),
                gamma: rec.gamma_joint,
                identity_residual: rec.residual,
            })
        }
    }
}
