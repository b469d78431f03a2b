//! Angular regularity through the matching condition of the two pole-anchored
//! solutions.
//!
//! With `S₁ = P₁(u) y₁(z₁)`, `z₁ = (1-u)/2` and `S₂ = P₂(u) y₂(z₂)`,
//! `z₂ = (1+u)/2`, the two solutions are proportional iff their logarithmic
//! derivatives agree at the common point. Dividing by `dz₁/du` gives
//!
//! ```text
//! W = y₁'/y₁ + y₂'/y₂ + p,   p = -2 (P₁'/P₁ - P₂'/P₂)
//! ```

use crate::boundary::Numerics;
use crate::error::{Error, Result};
use crate::heun::{eval_maple_series, HeunEval};
use crate::scalar::{is_finite, real, Cx, Real};
use crate::teukolsky::{
    tae_local_solution, AngularAnchor, LocalSolution, PhysicalConfig, SpectralUnknowns, TaeExponents,
};

fn log_derivative<T: Real>(h: &HeunEval<T>) -> Result<Cx<T>> {
    let scale = T::one() + h.derivative.norm();
    if h.value.norm() <= T::epsilon() * scale {
        return Err(Error::PoleAtMatchPoint);
    }
    Ok(h.derivative / h.value)
}

fn heun_at<T: Real>(sol: &LocalSolution<T>, z: Cx<T>, tol: T) -> Result<HeunEval<T>> {
    eval_maple_series(&sol.heun_params, z, tol).map_err(Error::evaluation)
}

/// Matching residual of the two regular angular solutions.
pub fn angular_qnm_residual<T: Real>(
    cfg: &PhysicalConfig<T>,
    unk: &SpectralUnknowns<T>,
    num: &Numerics<T>,
) -> Result<Cx<T>> {
    let t = num.angular_match;
    if !(t > T::zero() && t < T::one()) {
        return Err(Error::InvalidConfig(format!("angular matching point {t} outside (0, 1)")));
    }
    let s1 = tae_local_solution(cfg, unk, AngularAnchor::Plus, TaeExponents::default());
    let s2 = tae_local_solution(cfg, unk, AngularAnchor::Minus, TaeExponents::default());
    let z1 = real(t);
    let u = s1.variable_map.x(z1);
    let z2 = s2.variable_map.z(u);
    let d1 = log_derivative(&heun_at(&s1, z1, num.series_tol)?)?;
    let d2 = log_derivative(&heun_at(&s2, z2, num.series_tol)?)?;
    let j1 = s1.variable_map.jacobian();
    let j2 = s2.variable_map.jacobian();
    let p = (s1.log_prefactor_derivative(u) - s2.log_prefactor_derivative(u)) / j1;
    let w = d1 - d2 * (j2 / j1) + p;
    if !is_finite(w) {
        return Err(Error::EvaluationFailure("non-finite angular residual".into()));
    }
    Ok(w)
}

/// Newton iteration in `E` on the angular residual at fixed `ω`.
pub fn solve_angular_eigenvalue<T: Real>(
    cfg: &PhysicalConfig<T>,
    omega: Cx<T>,
    guess: Cx<T>,
    num: &Numerics<T>,
    tol: T,
) -> Result<Cx<T>> {
    let f = |e: Cx<T>| angular_qnm_residual(cfg, &SpectralUnknowns::new(omega, e), num);
    let mut e = guess;
    for it in 0..60 {
        let fe = f(e)?;
        let h = (T::one() + e.norm()) * T::lit(1e-7);
        let slope = (f(e + real(h))? - fe) / h;
        if slope.norm() == T::zero() {
            return Err(Error::JacobianSingular);
        }
        let mut step = fe / slope;
        let cap = T::one() + e.norm() * T::lit(0.25);
        if step.norm() > cap {
            step = step * (cap / step.norm());
        }
        e -= step;
        if step.norm() <= tol * (T::one() + e.norm()) {
            return Ok(e);
        }
        if it == 59 {
            break;
        }
    }
    Err(Error::NoConvergence {
        what: "angular eigenvalue Newton iteration",
        iterations: 60,
    })
}
