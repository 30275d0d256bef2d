//! Tikhonov regularization with heuristic parameter choice from local
//! minimizers of the quasi-optimality function.
//!
//! The crate decomposes a discrete ill-posed problem `Au = f` once and
//! evaluates every parameter-choice functional in O(n) per grid point:
//!
//! * the noise-level (δ-) rules: discrepancy principle, modified
//!   discrepancy, monotone error rule (plus its post-estimated variant),
//!   rule R1 and the balancing principle ([`rules::delta`]);
//! * the heuristic rules: quasi-optimality `ψ_Q` and its discrete and
//!   damped variants, Hanke–Raus, heuristic monotone error, Reginska
//!   ([`rules::heuristic`]);
//! * extraction of the local minimizers of `ψ_Q` over a geometric grid,
//!   the two-phase restriction to a reliable subset, and the computable
//!   a-posteriori constants attached to it ([`extrema`]);
//! * the final selection step with its three algorithms and two
//!   simplified standalone rules ([`selection`]);
//! * the classic ill-posed test problems with seeded noise generation
//!   ([`testproblems`]).
//!
//! Core math is generic over the scalar type via [`scalar::Real`];
//! `f64` aliases are exported at the crate root.

pub mod error;
// pub mod extrema;
pub mod grid;
// pub mod io;
pub mod oracle;
pub mod problem;
// pub mod rules;
pub mod scalar;
// pub mod selection;
pub mod spectral;
// pub mod testproblems;

pub use error::{CoreError, Result};
pub use grid::ParameterGrid;
pub use problem::Problem;
pub use scalar::Real;
pub use spectral::{
    decompose, exact_error_terms, ExactOracle, GridSweep, SingularSystem,
    TikhonovEvaluation, DEFAULT_RANK_TOLERANCE,
};

/// Concrete `f64` aliases (the reference scalar of the harness).
pub type Problem64 = Problem<f64>;
pub type ParameterGrid64 = ParameterGrid<f64>;
pub type SingularSystem64 = SingularSystem<f64>;
pub type TikhonovEvaluation64 = TikhonovEvaluation<f64>;

/// Concrete `f32` aliases; usable for well-scaled problems only (the
/// default grid floor squared underflows `f32`).
pub type Problem32 = Problem<f32>;
pub type ParameterGrid32 = ParameterGrid<f32>;
pub type SingularSystem32 = SingularSystem<f32>;
