//! Min-entropy: exact on classical states, bracketed on quantum ones.

use serde::Serialize;

use super::linalg::KERNEL_THRESHOLD;
use super::state::CqState;
use crate::error::{domain, Result};
use crate::scalar::Real;

/// Bounds on the optimal guessing probability `2^{-H_min(X|E)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GuessBounds<T> {
    /// Success of the pretty-good measurement.
    pub lower: T,
    /// `max_x ‖ρ_E^{-1/2} ρ^x ρ_E^{-1/2}‖_∞`, from the feasible choice `σ_E = ρ_E`.
    pub upper: T,
}

impl<T: Real> GuessBounds<T> {
    /// `(H_min lower bound, H_min upper bound)`.
    pub fn min_entropy_range(&self) -> (T, T) {
        (-self.upper.log2(), -self.lower.log2())
    }
}

/// `-log₂ Σ_e max_x p(x,e)` for a state with diagonal blocks.
pub fn classical_min_entropy<T: Real>(state: &CqState<T>) -> Result<T> {
    if !state.is_diagonal(T::lit(KERNEL_THRESHOLD)) {
        return domain("exact min-entropy needs diagonal blocks");
    }
    let guess: T = (0..state.d_e())
        .map(|e| state.blocks().iter().map(|b| b.get(e, e).re).fold(T::zero(), T::max))
        .sum();
    Ok(-guess.log2())
}

pub fn quantum_guess_bounds<T: Real>(state: &CqState<T>) -> Result<GuessBounds<T>> {
    let s = state.rho_e().inv_sqrt_on_support()?;
    let mut lower = T::zero();
    let mut upper = T::zero();
    for b in state.blocks() {
        let m = b.congruence(&s)?;
        lower = lower + b.trace_product(&m)?;
        upper = upper.max(m.operator_norm()?);
    }
    Ok(GuessBounds { lower, upper })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let uniform = CqState::<f64>::classical(&[vec![0.25], vec![0.25], vec![0.25], vec![0.25]]).unwrap();
        assert!((classical_min_entropy(&uniform).unwrap() - 2.0).abs() < 1e-12);
        // E = X mod 2
        let parity = CqState::<f64>::classical(&[vec![0.25, 0.0], vec![0.0, 0.25], vec![0.25, 0.0], vec![0.0, 0.25]]).unwrap();
        assert!((classical_min_entropy(&parity).unwrap() - 1.0).abs() < 1e-12);
        let copy = CqState::<f64>::classical(&[vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap();
        assert!(classical_min_entropy(&copy).unwrap().abs() < 1e-12);
        let b = quantum_guess_bounds(&copy).unwrap();
        assert!((b.lower - 1.0).abs() < 1e-12 && (b.upper - 1.0).abs() < 1e-12);
        let b = quantum_guess_bounds(&parity).unwrap();
        assert!(b.lower <= 0.5 + 1e-12 && b.upper >= 0.5 - 1e-12);
    }
}
