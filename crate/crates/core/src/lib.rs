//! Quantum-proof non-malleable extraction at desk scale: finite fields,
//! the inner-product extractor `⟨X, Y‖Y²⟩`, a polynomial MAC, two privacy
//! amplification protocols with pluggable tampering, and a numerical lab
//! for classical-quantum states.

pub mod cq_lab;
pub mod error;
pub mod extractors;
pub mod field;
pub mod mac;
pub mod nmscan;
pub mod protocol;
pub mod scalar;
pub mod source;

pub use error::{Error, Result};
pub use field::{ExtFieldSpec, FieldSpec, FpVector};
pub use scalar::{Exact, Real, Scalar};

/// Double-precision instantiations of the lab types.
pub type Hermitian = cq_lab::HermitianMatrix<f64>;
pub type Cq = cq_lab::CqState<f64>;
pub type Ccq = cq_lab::CcqState<f64>;
/// Classical ccq distribution in exact rationals.
pub type ExactCcq = cq_lab::classical::ClassicalCcq<Exact>;
