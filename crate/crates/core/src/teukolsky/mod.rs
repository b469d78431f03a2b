//! Teukolsky angular and radial equations and their local Heun solutions.

pub mod angular;
pub mod config;
pub mod local;
pub mod radial;

pub use angular::{
    build_tae_solution, build_tae_solution_with, tae_local_solution, tae_residual,
    tae_residual_samples, AngularAnchor, TaeExponents, RESIDUAL_SAMPLES, RESIDUAL_TOL,
};
pub use config::{
    horizons, tre_coefficients, Horizons, PhysicalConfig, SpectralUnknowns, TreCoefficients,
};
pub use local::{
    halton, Anchor, Equation, LocalEval, LocalSolution, PrefactorTerm, ResidualSample, VariableMap,
};
pub use radial::{
    build_tre_solution, build_tre_solution_with, tre_local_solution, tre_residual,
    tre_residual_samples, RadialBranch, TreExponents,
};
