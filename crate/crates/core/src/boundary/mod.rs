//! Spectral conditions: angular regularity, the jet-mode polynomial
//! conditions, radial branch validity and the radial connection residual.

pub mod angular;
pub mod jet;
pub mod radial;

use crate::error::Result;
use crate::heun::ContinuationOptions;
use crate::scalar::{Cx, Real};
use crate::teukolsky::{PhysicalConfig, RadialBranch, SpectralUnknowns};

pub use angular::{angular_qnm_residual, solve_angular_eigenvalue};
pub use jet::{
    jet_accessory_roots, jet_determinant, jet_factor, jet_mode_conditions, jet_residual, JetFactor,
};
pub use radial::{radial_branch_valid, radial_residual, radial_residual_detailed, ray_angle, RadialDiagnostics};

/// Which pair of boundary conditions defines the spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryKind {
    /// Angular regularity with black-hole radial conditions.
    Qnm,
    /// Angular polynomial (jet) condition with black-hole radial conditions.
    JetPrimary,
    /// Angular regularity with quasi-bound radial conditions.
    QuasiBound,
}

impl BoundaryKind {
    pub fn radial_branch(self) -> RadialBranch {
        match self {
            BoundaryKind::Qnm | BoundaryKind::JetPrimary => RadialBranch::R2,
            BoundaryKind::QuasiBound => RadialBranch::R1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BoundaryKind::Qnm => "QNM",
            BoundaryKind::JetPrimary => "JetPrimary",
            BoundaryKind::QuasiBound => "QuasiBound",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "qnm" => Some(BoundaryKind::Qnm),
            "jet" | "jetprimary" => Some(BoundaryKind::JetPrimary),
            "quasibound" => Some(BoundaryKind::QuasiBound),
            _ => None,
        }
    }
}

impl std::fmt::Display for BoundaryKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Numerical knobs shared by the residuals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Numerics<T: Real> {
    /// Relative tolerance for series sums and Taylor steps.
    pub series_tol: T,
    /// Heun variable `z₁` of the angular matching point; the other anchor uses `1 - z₁`.
    pub angular_match: T,
    /// Radial matching radius in units of `M`.
    pub r_match: T,
    /// Distance of the far boundary from the origin in units of `M`.
    pub r_far: T,
    /// Horizon-side series are summed at this `|z|` before continuation.
    pub horizon_start: T,
    pub continuation: ContinuationOptions<T>,
}

impl<T: Real> Default for Numerics<T> {
    fn default() -> Self {
        Self {
            series_tol: T::lit(1e-14).max(T::epsilon() * T::lit(8.0)),
            angular_match: T::lit(0.75),
            r_match: T::lit(4.0),
            r_far: T::lit(40.0),
            horizon_start: T::lit(0.5),
            continuation: ContinuationOptions::default(),
        }
    }
}

/// Both components of the two-dimensional spectral system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralResidual<T: Real> {
    pub angular: Cx<T>,
    pub radial: Cx<T>,
    pub diagnostics: RadialDiagnostics<T>,
}

impl<T: Real> SpectralResidual<T> {
    pub fn norm(&self) -> T {
        self.angular.norm().hypot(self.radial.norm())
    }
}

/// Angular and radial residuals for the given kind.
pub fn spectral_residual<T: Real>(
    cfg: &PhysicalConfig<T>,
    unk: &SpectralUnknowns<T>,
    kind: BoundaryKind,
    num: &Numerics<T>,
) -> Result<SpectralResidual<T>> {
    let angular = match kind {
        BoundaryKind::Qnm | BoundaryKind::QuasiBound => angular_qnm_residual(cfg, unk, num)?,
        BoundaryKind::JetPrimary => jet_residual(cfg, unk)?,
    };
    let (radial, diagnostics) = radial_residual_detailed(cfg, unk, kind, num)?;
    Ok(SpectralResidual {
        angular,
        radial,
        diagnostics,
    })
}
