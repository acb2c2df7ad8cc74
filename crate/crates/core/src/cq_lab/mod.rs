//! Numerical lab for classical-quantum states: trace distance, conditional
//! collision probability, min-entropy bounds, XOR lemmas, the guessing
//! measurement and the classical communication game.
//!
//! Matrix code is generic over [`Real`](crate::Real); the classical
//! oracles in [`classical`] and [`game`] are generic over
//! [`Scalar`](crate::Scalar) and run in exact rationals.

pub mod classical;
pub mod collision;
pub mod entropy;
pub mod game;
pub mod guess;
pub mod linalg;
pub mod state;
pub mod xor;

pub use collision::{ccq_collision_record, collision_prob, collision_record, CcqCollisionRecord, CollisionRecord};
pub use entropy::{classical_min_entropy, quantum_guess_bounds, GuessBounds};
pub use game::{game_best_classical, leak_scan, GameOutcome, GameTable, LeakCoverage, LeakScanReport};
pub use guess::{guess_measurement_from_distance, GuessMeasurement};
pub use linalg::{trace_distance, Eigen, HermitianMatrix, MatrixJson};
pub use state::{CcqState, CqState, StateJson};
pub use xor::{
    check_collision_sandwich, check_xor_lemma, distance_from_uniform, xor_premise_distance, SandwichReport,
    XorReport, XorVariant,
};
