//! Confluent Heun functions and the quasinormal, quasi-bound and jet spectra
//! of electromagnetic perturbations of Kerr black holes.
//!
//! The numerical core is generic over [`Real`] (`f32`, `f64`); the aliases
//! below fix it to `f64`.

// Negated comparisons are used on purpose so that NaN fails every check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boundary;
pub mod error;
pub mod heun;
pub mod oracle;
pub mod scalar;
pub mod solver;
pub mod teukolsky;

pub use boundary::BoundaryKind;
pub use error::{Error, Result};
pub use scalar::{c64, cx, Cx, Real};

pub type C64 = Cx<f64>;
pub type CanonicalParams = heun::CanonicalHeunParams<f64>;
pub type MapleParams = heun::MapleHeunParams<f64>;
pub type Config = teukolsky::PhysicalConfig<f64>;
pub type Unknowns = teukolsky::SpectralUnknowns<f64>;
pub type Numerics = boundary::Numerics<f64>;
pub type SolverOptions = solver::SolverOptions<f64>;
pub type SpectralPoint = solver::SpectralPoint<f64>;
pub type ContinuationTrack = solver::ContinuationTrack<f64>;
pub type SeedGrid = solver::SeedGrid<f64>;
