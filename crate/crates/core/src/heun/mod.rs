//! Confluent Heun functions: parameter conventions, series and continuation
//! evaluators, and singularity classification.

pub mod eval;
pub mod ode;
pub mod params;
pub mod singularity;

pub use eval::{
    eval_continued, eval_continued_with, eval_maple_auto, eval_maple_continued, eval_maple_series,
    eval_series, SERIES_MARGIN,
};
pub use ode::{AsymptoticSum, ContinuationOptions, HeunEval, HeunOde};
pub use params::{
    canonical_to_maple, exponential_shift, maple_to_canonical, CanonicalHeunParams,
    GeneralHeunParams, MapleHeunParams, SqrtBranch,
};
pub use singularity::{
    classify_polynomial_ode, classify_singularities, HeunFamily, Location, PolynomialOde,
    SingularPoint, SingularityKind, SingularityReport,
};
