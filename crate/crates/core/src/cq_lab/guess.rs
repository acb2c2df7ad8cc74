//! Guessing measurement built from a distance-to-uniform witness.

use super::linalg::{HermitianMatrix, MAX_DIM};
use super::state::CqState;
use super::xor::distance_from_uniform;
use crate::error::{check_budget, Result};
use crate::scalar::Real;

#[derive(Debug, Clone)]
pub struct GuessMeasurement<T: Real> {
    pub operators: Vec<HermitianMatrix<T>>,
    /// `Σ_x Tr(M_x ρ^x)`.
    pub success: T,
    /// `ε = ½‖ρ_XE − U_X ⊗ ρ_E‖₁`.
    pub distance: T,
}

impl<T: Real> GuessMeasurement<T> {
    /// `1/d_X + ε/d_X`.
    pub fn predicted(&self) -> T {
        let d = T::from_usize(self.operators.len()).unwrap();
        (T::one() + self.distance) / d
    }

    /// `(most negative eigenvalue over all operators, ‖Σ_x M_x − I‖_F)`.
    pub fn validity_defect(&self) -> Result<(T, T)> {
        let dim = self.operators[0].dim();
        let mut min = T::infinity();
        let mut sum = HermitianMatrix::zeros(dim);
        for m in &self.operators {
            min = min.min(m.min_eigenvalue()?);
            sum = sum.add(m)?;
        }
        Ok((min, sum.sub(&HermitianMatrix::identity(dim))?.frobenius_norm()))
    }
}

/// `M_x = (1/d)(M'_x + I − M'/d)` where `M'_x` projects onto the positive
/// part of `ρ^x − ρ_E/d` and `M' = Σ_x M'_x`.
pub fn guess_measurement_from_distance<T: Real>(state: &CqState<T>) -> Result<GuessMeasurement<T>> {
    check_budget((state.d_x() * state.d_e()) as u128, MAX_DIM as u128)?;
    let d = T::from_usize(state.d_x()).unwrap();
    let rho_e = state.rho_e();
    let u = rho_e.scale(T::one() / d);
    let projectors = state.blocks().iter().map(|b| b.sub(&u)?.positive_projector()).collect::<Result<Vec<_>>>()?;
    let mut total = HermitianMatrix::zeros(state.d_e());
    for pr in &projectors {
        total = total.add(pr)?;
    }
    let rest = HermitianMatrix::identity(state.d_e()).sub(&total.scale(T::one() / d))?;
    let operators = projectors.iter().map(|pr| Ok(pr.add(&rest)?.scale(T::one() / d))).collect::<Result<Vec<_>>>()?;
    let mut success = T::zero();
    for (m, b) in operators.iter().zip(state.blocks()) {
        success = success + m.trace_product(b)?;
    }
    Ok(GuessMeasurement { operators, success, distance: distance_from_uniform(state)? })
}
