//! Collision probability conditioned on `ρ_E`.

use serde::Serialize;

use super::linalg::HermitianMatrix;
use super::state::{CcqState, CqState};
use crate::error::Result;
use crate::scalar::Real;

/// `Γ_c(ρ_XE|ρ_E)` together with the expanded-square identity check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CollisionRecord<T> {
    pub gamma: T,
    /// `Tr((ρ_XE − U_X⊗ρ_E)(I⊗ρ_E^{-1/2}))²`.
    pub identity_lhs: T,
    /// `|identity_lhs − (Γ_c − 1/d_X)|`.
    pub residual: T,
}

/// Same for a ccq state, with `X0` the register compared against uniform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CcqCollisionRecord<T> {
    /// `Γ_c(ρ_{X0XE}|ρ_E)`.
    pub gamma_joint: T,
    /// `Γ_c(ρ_{XE}|ρ_E)`.
    pub gamma_marginal: T,
    /// `gamma_joint − gamma_marginal / d_X0`.
    pub middle: T,
    pub identity_lhs: T,
    pub residual: T,
}

/// `Σ_i Tr(A_i S A_i S)` for Hermitian `A_i` and `S`.
fn sandwiched_square_sum<T: Real>(blocks: impl IntoIterator<Item = HermitianMatrix<T>>, s: &HermitianMatrix<T>) -> Result<T> {
    let mut acc = T::zero();
    for a in blocks {
        acc = acc + a.trace_product(&a.congruence(s)?)?;
    }
    Ok(acc)
}

pub fn collision_prob<T: Real>(state: &CqState<T>) -> Result<T> {
    let s = state.rho_e().inv_sqrt_on_support()?;
    sandwiched_square_sum(state.blocks().iter().cloned(), &s)
}

pub fn collision_record<T: Real>(state: &CqState<T>) -> Result<CollisionRecord<T>> {
    let rho_e = state.rho_e();
    let s = rho_e.inv_sqrt_on_support()?;
    let d = T::from_usize(state.d_x()).unwrap();
    let gamma = sandwiched_square_sum(state.blocks().iter().cloned(), &s)?;
    let u = rho_e.scale(T::one() / d);
    let deltas = state.blocks().iter().map(|b| b.sub(&u)).collect::<Result<Vec<_>>>()?;
    let identity_lhs = sandwiched_square_sum(deltas, &s)?;
    Ok(CollisionRecord { gamma, identity_lhs, residual: (identity_lhs - (gamma - T::one() / d)).abs() })
}

pub fn ccq_collision_record<T: Real>(state: &CcqState<T>) -> Result<CcqCollisionRecord<T>> {
    let s = state.rho_e().inv_sqrt_on_support()?;
    let marginal = state.marginal_x();
    let d0 = T::from_usize(state.d_x0()).unwrap();
    let gamma_joint = sandwiched_square_sum(state.joint().blocks().iter().cloned(), &s)?;
    let gamma_marginal = sandwiched_square_sum(marginal.blocks().iter().cloned(), &s)?;
    let mut deltas = Vec::with_capacity(state.d_x0() * state.d_x());
    for x0 in 0..state.d_x0() {
        for x in 0..state.d_x() {
            deltas.push(state.block(x0, x).sub(&marginal.block(x).scale(T::one() / d0))?);
        }
    }
    let identity_lhs = sandwiched_square_sum(deltas, &s)?;
    let middle = gamma_joint - gamma_marginal / d0;
    Ok(CcqCollisionRecord { gamma_joint, gamma_marginal, middle, identity_lhs, residual: (identity_lhs - middle).abs() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn examples() {
        let trivial = CqState::<f64>::classical(&[vec![0.25], vec![0.25], vec![0.25], vec![0.25]]).unwrap();
        assert!((collision_prob(&trivial).unwrap() - 0.25).abs() < 1e-15);
        let copy = CqState::<f64>::classical(&[vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap();
        let rec = collision_record(&copy).unwrap();
        assert!((rec.gamma - 1.0).abs() < 1e-12);
        assert!(rec.residual < 1e-12);
    }

    #[test]
    fn random_states_obey_identity_and_upper_bound() {
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(31);
        for rank in 1..=4 {
            let s: CqState<f64> = CqState::random(3, 4, rank, &mut rng).unwrap();
            let rec = collision_record(&s).unwrap();
            assert!(rec.gamma <= 1.0 + 1e-9 && rec.residual <= 1e-9);
            let c: CcqState<f64> = CcqState::random(2, 3, 3, rank, &mut rng).unwrap();
            let rec = ccq_collision_record(&c).unwrap();
            assert!(rec.gamma_joint <= 1.0 + 1e-9 && rec.residual <= 1e-9);
        }
    }
}
