//! Root finding for the two-dimensional spectral system
//! `F(ω, E) = (angular residual, radial residual) = 0`, continuation of roots
//! in the rotation parameter and rejection of spurious roots.

mod modes;
mod point;
mod track;

pub use modes::{enumerate_candidates, enumerate_modes, SeedGrid};
pub use point::{solve_point, stability_filter, SolveDiagnostics, SolverOptions, SpectralPoint};
pub use track::{continue_in_a, ContinuationTrack};
