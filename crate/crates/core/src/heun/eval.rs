//! Evaluation of the normalized confluent Heun function.

use crate::error::{Error, Result};
use crate::heun::ode::{ContinuationOptions, HeunEval, HeunOde, DEFAULT_MAX_TERMS};
use crate::heun::params::{CanonicalHeunParams, MapleHeunParams};
use crate::scalar::{is_finite, Cx, Real};

/// Points with `|z| ≥ 1 - SERIES_MARGIN` are refused by the series evaluators.
pub const SERIES_MARGIN: f64 = 0.05;

fn check_series_point<T: Real>(z: Cx<T>, tol: T) -> Result<()> {
    if !is_finite(z) {
        return Err(Error::NonFinite("evaluation point"));
    }
    if !(tol > T::zero()) {
        return Err(Error::InvalidConfig("tolerance must be positive".into()));
    }
    if z.norm() >= T::one() - T::lit(SERIES_MARGIN) {
        return Err(Error::OutsideSeriesDisk(z.norm().to_f64().unwrap_or(f64::NAN)));
    }
    Ok(())
}

fn series<T: Real>(ode: &HeunOde<T>, z: Cx<T>, tol: T) -> Result<HeunEval<T>> {
    check_series_point(z, tol)?;
    if !ode.is_finite() {
        return Err(Error::NonFinite("Heun parameters"));
    }
    ode.sum_series(z, tol, DEFAULT_MAX_TERMS)
}

/// Frobenius series of the canonical confluent Heun function about `z = 0`.
pub fn eval_series<T: Real>(p: &CanonicalHeunParams<T>, z: Cx<T>, tol: T) -> Result<HeunEval<T>> {
    if p.gamma_degenerate() {
        return Err(Error::DegenerateGamma(format!("{}", p.gamma)));
    }
    series(&p.ode(), z, tol)
}

/// Frobenius series of Maple's `HeunC(α, β, γ, δ, η, z)` about `z = 0`.
pub fn eval_maple_series<T: Real>(p: &MapleHeunParams<T>, z: Cx<T>, tol: T) -> Result<HeunEval<T>> {
    series(&p.ode(), z, tol)
}

fn continued<T: Real>(
    ode: &HeunOde<T>,
    z: Cx<T>,
    path: &[Cx<T>],
    tol: T,
    opts: &ContinuationOptions<T>,
) -> Result<HeunEval<T>> {
    let (&first, rest) = path
        .split_first()
        .ok_or_else(|| Error::InvalidConfig("continuation path is empty".into()))?;
    let start = series(ode, first, tol)?;
    let mut waypoints: Vec<Cx<T>> = rest.to_vec();
    if waypoints.last().copied().unwrap_or(first) != z {
        waypoints.push(z);
    }
    if waypoints.is_empty() {
        return Ok(start);
    }
    let out = ode.continue_along(first, start.value, start.derivative, &waypoints, tol, opts)?;
    Ok(HeunEval {
        err_estimate: out.err_estimate + start.err_estimate,
        terms_used: out.terms_used + start.terms_used,
        ..out
    })
}

/// Evaluates the canonical function at `z` by summing the series at `path[0]`
/// and integrating the equation through the remaining waypoints and on to `z`.
pub fn eval_continued<T: Real>(
    p: &CanonicalHeunParams<T>,
    z: Cx<T>,
    path: &[Cx<T>],
    tol: T,
) -> Result<HeunEval<T>> {
    eval_continued_with(p, z, path, tol, &ContinuationOptions::default())
}

pub fn eval_continued_with<T: Real>(
    p: &CanonicalHeunParams<T>,
    z: Cx<T>,
    path: &[Cx<T>],
    tol: T,
    opts: &ContinuationOptions<T>,
) -> Result<HeunEval<T>> {
    if p.gamma_degenerate() {
        return Err(Error::DegenerateGamma(format!("{}", p.gamma)));
    }
    continued(&p.ode(), z, path, tol, opts)
}

/// Maple-convention counterpart of [`eval_continued_with`].
pub fn eval_maple_continued<T: Real>(
    p: &MapleHeunParams<T>,
    z: Cx<T>,
    path: &[Cx<T>],
    tol: T,
    opts: &ContinuationOptions<T>,
) -> Result<HeunEval<T>> {
    continued(&p.ode(), z, path, tol, opts)
}

/// Evaluates `HeunC` anywhere: directly when `z` is well inside the series
/// disk, otherwise by a straight path from a point on the segment `[0, z]`
/// (bent around `z = 1` when the segment runs past it).
pub fn eval_maple_auto<T: Real>(
    p: &MapleHeunParams<T>,
    z: Cx<T>,
    tol: T,
    opts: &ContinuationOptions<T>,
) -> Result<HeunEval<T>> {
    let r0 = T::lit(0.5);
    if z.norm() <= r0 {
        return eval_maple_series(p, z, tol);
    }
    let start = z * (r0 / z.norm());
    let mut path = vec![start];
    let one = Cx::new(T::one(), T::zero());
    let clear = opts.min_clearance * T::lit(4.0);
    let passes = crate::heun::ode::point_segment_distance(one, start, z);
    if passes < clear && passes < (z - one).norm() {
        // The segment runs past z = 1: detour through the half plane of z.
        let side = if z.im >= T::zero() { T::one() } else { -T::one() };
        path.push(Cx::new(T::one(), side * T::lit(0.5)));
    }
    path.push(z);
    eval_maple_continued(p, z, &path, tol, opts)
}
