//! Radial connection residual.
//!
//! The horizon-anchored solution is summed as a Frobenius series and carried
//! to the matching radius `r_m` by Taylor re-expansion. The solution with the
//! required behavior at infinity is started from its asymptotic expansion at
//! a far point on a complex ray along which it is subdominant, then carried
//! inward to `r_m`. Both share the prefactor, so
//!
//! ```text
//! W = (r_m / d) (y_h'/y_h - y_∞'/y_∞)     at z(r_m),   d = r₋ - r₊
//! ```
//!
//! vanishes exactly on the spectrum.

use crate::boundary::{BoundaryKind, Numerics};
use crate::error::{Error, Result};
use crate::heun::{eval_maple_series, HeunEval};
use crate::scalar::{imag_unit, is_finite, real, Cx, Real};
use crate::teukolsky::{
    horizons, tre_local_solution, PhysicalConfig, RadialBranch, SpectralUnknowns, TreExponents,
};

/// Numerical context of one radial residual evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialDiagnostics<T: Real> {
    /// Angle of the far ray measured from the positive real `r` axis.
    pub ray_angle: T,
    /// Far point in `r`.
    pub r_far: Cx<T>,
    /// Terms kept in the asymptotic sum and its estimated relative error.
    pub asymptotic_terms: usize,
    pub asymptotic_err: T,
    /// Horizon-side error estimate, relative to `|y_h|`.
    pub horizon_err: T,
    /// Total Taylor and series terms on both sides.
    pub terms_used: usize,
}

fn wrap_angle<T: Real>(mut t: T) -> T {
    let pi = T::PI();
    let two_pi = pi + pi;
    while t > pi {
        t -= two_pi;
    }
    while t <= -pi {
        t += two_pi;
    }
    t
}

/// Direction in the `r` plane along which the solution required at infinity
/// decays fastest, kept at least `0.6` away from the negative real axis.
pub fn ray_angle<T: Real>(omega: Cx<T>, branch: RadialBranch) -> T {
    let half_pi = T::PI() * T::lit(0.5);
    let t = match branch {
        RadialBranch::R2 => -half_pi - omega.arg(),
        RadialBranch::R1 => half_pi - omega.arg(),
    };
    let limit = T::PI() - T::lit(0.6);
    wrap_angle(t).max(-limit).min(limit)
}

/// Whether the branch's far-field condition selects a subdominant solution
/// at the probe point `r_probe`, and `Re ω` avoids the interval between `0`
/// and the horizon frequency `-ma/(2M r₊)`.
pub fn radial_branch_valid<T: Real>(
    omega: Cx<T>,
    cfg: &PhysicalConfig<T>,
    branch: RadialBranch,
    r_probe: Cx<T>,
) -> bool {
    let Ok(h) = horizons(cfg) else { return false };
    let edge = -cfg.m_real() * cfg.a / (T::lit(2.0) * cfg.mass * h.r_plus);
    let (lo, hi) = if edge < T::zero() { (edge, T::zero()) } else { (T::zero(), edge) };
    if omega.re > lo && omega.re < hi {
        return false;
    }
    let phase = (omega.arg() + r_probe.arg()).sin();
    match branch {
        RadialBranch::R2 => phase < T::zero(),
        RadialBranch::R1 => phase > T::zero(),
    }
}

/// Radial residual for the boundary conditions of `kind`.
pub fn radial_residual<T: Real>(
    cfg: &PhysicalConfig<T>,
    unk: &SpectralUnknowns<T>,
    kind: BoundaryKind,
    num: &Numerics<T>,
) -> Result<Cx<T>> {
    radial_residual_detailed(cfg, unk, kind, num).map(|(w, _)| w)
}

fn log_derivative<T: Real>(h: &HeunEval<T>) -> Result<Cx<T>> {
    if h.value.norm() <= T::epsilon() * (T::one() + h.derivative.norm()) {
        return Err(Error::PoleAtMatchPoint);
    }
    Ok(h.derivative / h.value)
}

/// [`radial_residual`] together with its [`RadialDiagnostics`].
pub fn radial_residual_detailed<T: Real>(
    cfg: &PhysicalConfig<T>,
    unk: &SpectralUnknowns<T>,
    kind: BoundaryKind,
    num: &Numerics<T>,
) -> Result<(Cx<T>, RadialDiagnostics<T>)> {
    let branch = kind.radial_branch();
    let sol = tre_local_solution(cfg, unk, branch, TreExponents::default())?;
    let ode = sol.heun_params.ode();
    let map = sol.variable_map;
    let d = map.scale;
    let tol = num.series_tol;
    let opts = &num.continuation;

    let r_match = num.r_match * cfg.mass;
    let z_match = map.z(real(r_match));

    // Horizon side.
    let horizon = if z_match.norm() <= num.horizon_start {
        eval_maple_series(&sol.heun_params, z_match, tol).map_err(Error::evaluation)?
    } else {
        let z0 = z_match * (num.horizon_start / z_match.norm());
        let s = eval_maple_series(&sol.heun_params, z0, tol).map_err(Error::evaluation)?;
        let out = ode
            .continue_along(z0, s.value, s.derivative, &[z_match], tol, opts)
            .map_err(Error::evaluation)?;
        HeunEval {
            terms_used: out.terms_used + s.terms_used,
            err_estimate: out.err_estimate + s.err_estimate,
            ..out
        }
    };

    // Far side.
    let theta = ray_angle(unk.omega, branch);
    let reach = num.r_far * cfg.mass - r_match;
    let r_far = real(r_match) + Cx::from_polar(reach, theta);
    if !radial_branch_valid(unk.omega, cfg, branch, r_far) {
        return Err(Error::BranchInvalid);
    }
    let i = imag_unit::<T>();
    let target = match branch {
        RadialBranch::R2 => -i * unk.omega,
        RadialBranch::R1 => i * unk.omega,
    };
    let lambda = ode
        .exponential_rates()
        .into_iter()
        .min_by(|x, y| {
            let dx = (sol.exp_rate + *x / d - target).norm();
            let dy = (sol.exp_rate + *y / d - target).norm();
            dx.partial_cmp(&dy).unwrap_or(std::cmp::Ordering::Equal)
        })
        .expect("two rates");
    let z_far = map.z(r_far);
    let asym = ode.asymptotic(lambda, z_far, tol).map_err(Error::evaluation)?;
    let far = ode
        .continue_along(z_far, real(T::one()), asym.log_derivative, &[z_match], tol, opts)
        .map_err(Error::evaluation)?;

    let w = (log_derivative(&horizon)? - log_derivative(&far)?) * real(r_match) / d;
    if !is_finite(w) {
        return Err(Error::EvaluationFailure("non-finite radial residual".into()));
    }
    let diag = RadialDiagnostics {
        ray_angle: theta,
        r_far,
        asymptotic_terms: asym.terms_used,
        asymptotic_err: asym.rel_err,
        horizon_err: horizon.err_estimate / horizon.value.norm(),
        terms_used: horizon.terms_used + far.terms_used + asym.terms_used,
    };
    Ok((w, diag))
}
