use crate::boundary::{
    jet_residual, solve_angular_eigenvalue, spectral_residual, BoundaryKind, Numerics,
};
use crate::error::{Error, Result};
use crate::scalar::{is_finite, real, Cx, Real};
use crate::teukolsky::{PhysicalConfig, SpectralUnknowns};

/// Tolerances and numerical knobs of the root finder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions<T: Real> {
    pub numerics: Numerics<T>,
    /// Converged points satisfy `‖F‖ < root_tol`.
    pub root_tol: T,
    pub max_iter: usize,
    /// Relative step of the forward-difference Jacobian.
    pub fd_step: T,
    /// Largest `|Δω|` accepted between neighbouring points of a track.
    pub jump_cap: T,
    /// `ω` may move less than this under every perturbation of a stable point.
    pub stability_tol: T,
    /// Compare each accepted Jacobian with central differences at half step.
    pub check_jacobian: bool,
}

impl<T: Real> Default for SolverOptions<T> {
    fn default() -> Self {
        Self {
            numerics: Numerics::default(),
            root_tol: T::lit(1e-10).max(T::epsilon() * T::lit(1e4)),
            max_iter: 60,
            fd_step: T::lit(1e-7).max(T::epsilon().sqrt()),
            jump_cap: T::lit(0.1),
            stability_tol: T::lit(1e-5),
            check_jacobian: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SolveDiagnostics<T: Real> {
    pub iterations: usize,
    /// 2-norm condition number of the last Jacobian.
    pub condition: T,
    /// Largest relative forward/central Jacobian discrepancy, when checked.
    pub jacobian_check: Option<T>,
    /// The nested Müller iteration produced the root.
    pub used_fallback: bool,
}

/// One root of the spectral system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint<T: Real> {
    pub cfg: PhysicalConfig<T>,
    pub unk: SpectralUnknowns<T>,
    /// Overtone index, assigned when a spectrum is enumerated.
    pub n: Option<usize>,
    pub kind: BoundaryKind,
    pub residual_norm: T,
    /// `None` until [`stability_filter`] has run.
    pub stable: Option<bool>,
    pub diagnostics: SolveDiagnostics<T>,
}

type Vec2<T> = [Cx<T>; 2];

fn norm2<T: Real>(v: &Vec2<T>) -> T {
    v[0].norm().hypot(v[1].norm())
}

fn eval<T: Real>(cfg: &PhysicalConfig<T>, kind: BoundaryKind, num: &Numerics<T>, x: Vec2<T>) -> Result<Vec2<T>> {
    let r = spectral_residual(cfg, &SpectralUnknowns::new(x[0], x[1]), kind, num)?;
    Ok([r.angular, r.radial])
}

/// Columns `∂F/∂ω`, `∂F/∂E` by differences with steps `h_j`.
fn jacobian<T: Real>(
    f: &impl Fn(Vec2<T>) -> Result<Vec2<T>>,
    x: Vec2<T>,
    fx: Option<Vec2<T>>,
    rel: T,
) -> Result<[Vec2<T>; 2]> {
    let mut cols = [[real(T::zero()); 2]; 2];
    for j in 0..2 {
        let h = rel * T::one().max(x[j].norm());
        let mut xp = x;
        xp[j] += real(h);
        let fp = f(xp)?;
        let base = match fx {
            Some(v) => v,
            None => {
                let mut xm = x;
                xm[j] -= real(h);
                let fm = f(xm)?;
                cols[j] = [(fp[0] - fm[0]) / (h + h), (fp[1] - fm[1]) / (h + h)];
                continue;
            }
        };
        cols[j] = [(fp[0] - base[0]) / h, (fp[1] - base[1]) / h];
    }
    Ok(cols)
}

/// Ratio of the singular values of a complex 2×2 matrix.
fn condition<T: Real>(j: &[Vec2<T>; 2]) -> T {
    let fro = j.iter().flatten().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b);
    let det = (j[0][0] * j[1][1] - j[1][0] * j[0][1]).norm();
    // σ₁² + σ₂² = ‖J‖_F², σ₁σ₂ = |det J|.
    let disc = (fro * fro - T::lit(4.0) * det * det).max(T::zero()).sqrt();
    let s1 = ((fro + disc) * T::lit(0.5)).sqrt();
    let s2 = ((fro - disc) * T::lit(0.5)).max(T::zero()).sqrt();
    if s2 > T::zero() {
        s1 / s2
    } else {
        T::infinity()
    }
}

fn newton<T: Real>(
    f: &impl Fn(Vec2<T>) -> Result<Vec2<T>>,
    guess: Vec2<T>,
    opts: &SolverOptions<T>,
) -> Result<(Vec2<T>, T, SolveDiagnostics<T>)> {
    let mut x = guess;
    let mut fx = f(x)?;
    let mut diag = SolveDiagnostics::default();
    for it in 0..opts.max_iter {
        let fnorm = norm2(&fx);
        if fnorm < opts.root_tol {
            diag.iterations = it;
            return Ok((x, fnorm, diag));
        }
        let j = jacobian(f, x, Some(fx), opts.fd_step)?;
        let [[a, c], [b, d]] = j; // columns (a, c) and (b, d)
        let det = a * d - b * c;
        let scale = (a.norm() + c.norm()) * (b.norm() + d.norm());
        if !(det.norm() > scale * T::epsilon() * T::lit(16.0)) {
            return Err(Error::JacobianSingular);
        }
        diag.condition = condition(&j);
        if opts.check_jacobian {
            let central = jacobian(f, x, None, opts.fd_step * T::lit(0.5))?;
            let size = j.iter().flatten().map(|z| z.norm()).fold(T::zero(), T::max);
            let gap = j
                .iter()
                .flatten()
                .zip(central.iter().flatten())
                .map(|(p, q)| (*p - *q).norm())
                .fold(T::zero(), T::max)
                / size;
            diag.jacobian_check = Some(diag.jacobian_check.map_or(gap, |g| g.max(gap)));
        }
        let mut step = [(d * fx[0] - b * fx[1]) / det, (a * fx[1] - c * fx[0]) / det];
        let cap = T::lit(0.25) * (T::one() + x[0].norm().max(x[1].norm()));
        let len = norm2(&step);
        if len > cap {
            step = [step[0] * (cap / len), step[1] * (cap / len)];
        }
        // Backtracking on ‖F‖.
        let mut t = T::one();
        let mut accepted = None;
        for _ in 0..12 {
            let trial = [x[0] - step[0] * t, x[1] - step[1] * t];
            if let Ok(ft) = f(trial) {
                if norm2(&ft) < fnorm {
                    accepted = Some((trial, ft));
                    break;
                }
            }
            t *= T::lit(0.5);
        }
        match accepted {
            Some((xn, fn_)) => {
                x = xn;
                fx = fn_;
            }
            None => break,
        }
    }
    let fnorm = norm2(&fx);
    if fnorm < opts.root_tol {
        diag.iterations = opts.max_iter;
        return Ok((x, fnorm, diag));
    }
    Err(Error::NoConvergence {
        what: "spectral Newton iteration",
        iterations: opts.max_iter,
    })
}

/// Newton iteration in one complex unknown with a forward-difference slope.
fn newton_1d<T: Real>(f: impl Fn(Cx<T>) -> Result<Cx<T>>, guess: Cx<T>, tol: T, max_iter: usize) -> Result<Cx<T>> {
    let mut x = guess;
    for _ in 0..max_iter {
        let fx = f(x)?;
        let h = T::lit(1e-7) * T::one().max(x.norm());
        let slope = (f(x + real(h))? - fx) / h;
        if slope.norm() == T::zero() {
            return Err(Error::JacobianSingular);
        }
        let step = fx / slope;
        x -= step;
        if step.norm() <= tol * (T::one() + x.norm()) {
            return Ok(x);
        }
    }
    Err(Error::NoConvergence {
        what: "one-dimensional Newton iteration",
        iterations: max_iter,
    })
}

/// Angular eigenvalue `E(ω)` for the kind's angular condition.
pub(crate) fn angular_root<T: Real>(
    cfg: &PhysicalConfig<T>,
    kind: BoundaryKind,
    omega: Cx<T>,
    guess: Cx<T>,
    num: &Numerics<T>,
) -> Result<Cx<T>> {
    let tol = T::lit(1e-13).max(T::epsilon() * T::lit(16.0));
    match kind {
        BoundaryKind::JetPrimary => newton_1d(
            |e| jet_residual(cfg, &SpectralUnknowns::new(omega, e)),
            guess,
            tol,
            60,
        ),
        _ => solve_angular_eigenvalue(cfg, omega, guess, num, tol),
    }
}

/// Müller iteration on `ω ↦ radial(ω, E(ω))` with `E(ω)` from the angular condition.
fn muller<T: Real>(
    cfg: &PhysicalConfig<T>,
    kind: BoundaryKind,
    guess: Vec2<T>,
    opts: &SolverOptions<T>,
) -> Result<Vec2<T>> {
    let num = &opts.numerics;
    let e_cell = std::cell::Cell::new(guess[1]);
    let g = |w: Cx<T>| -> Result<Cx<T>> {
        let e = angular_root(cfg, kind, w, e_cell.get(), num)?;
        e_cell.set(e);
        eval(cfg, kind, num, [w, e]).map(|v| v[1])
    };
    let w0 = guess[0];
    let h = T::lit(1e-3) * T::one().max(w0.norm());
    let mut xs = [w0 - real(h), w0 + real(h), w0];
    let mut fs = [g(xs[0])?, g(xs[1])?, g(xs[2])?];
    for _ in 0..opts.max_iter {
        let (h1, h2) = (xs[1] - xs[0], xs[2] - xs[1]);
        let (d1, d2) = ((fs[1] - fs[0]) / h1, (fs[2] - fs[1]) / h2);
        let a = (d2 - d1) / (h2 + h1);
        let b = a * h2 + d2;
        let disc = (b * b - a * fs[2] * T::lit(4.0)).sqrt();
        let den = if (b + disc).norm() > (b - disc).norm() { b + disc } else { b - disc };
        if den.norm() == T::zero() {
            return Err(Error::JacobianSingular);
        }
        let dx = fs[2] * T::lit(-2.0) / den;
        let xn = xs[2] + dx;
        let fnew = g(xn)?;
        xs = [xs[1], xs[2], xn];
        fs = [fs[1], fs[2], fnew];
        if dx.norm() <= opts.root_tol * (T::one() + xn.norm()) || fnew.norm() < opts.root_tol * T::lit(0.1) {
            let e = angular_root(cfg, kind, xn, e_cell.get(), num)?;
            return Ok([xn, e]);
        }
    }
    Err(Error::NoConvergence {
        what: "nested Müller iteration",
        iterations: opts.max_iter,
    })
}

/// Solves the spectral system from `guess` by damped Newton iteration, with a
/// nested Müller iteration in `ω` as fallback.
pub fn solve_point<T: Real>(
    cfg: &PhysicalConfig<T>,
    kind: BoundaryKind,
    guess: SpectralUnknowns<T>,
    opts: &SolverOptions<T>,
) -> Result<SpectralPoint<T>> {
    if !is_finite(guess.omega) || !is_finite(guess.e) {
        return Err(Error::NonFinite("initial guess"));
    }
    if !(opts.root_tol > T::zero()) {
        return Err(Error::InvalidConfig("root_tol must be positive".into()));
    }
    cfg.validate()?;
    let f = |x: Vec2<T>| eval(cfg, kind, &opts.numerics, x);
    let x0 = [guess.omega, guess.e];
    let (x, residual_norm, diagnostics) = match newton(&f, x0, opts) {
        Ok(v) => v,
        Err(first) => {
            let x = muller(cfg, kind, x0, opts).map_err(|_| first.clone())?;
            let fx = f(x)?;
            let r = norm2(&fx);
            if !(r < opts.root_tol) {
                return Err(first);
            }
            let j = jacobian(&f, x, Some(fx), opts.fd_step)?;
            let diag = SolveDiagnostics {
                iterations: opts.max_iter,
                condition: condition(&j),
                jacobian_check: None,
                used_fallback: true,
            };
            (x, r, diag)
        }
    };
    Ok(SpectralPoint {
        cfg: *cfg,
        unk: SpectralUnknowns::new(x[0], x[1]),
        n: None,
        kind,
        residual_norm,
        stable: None,
        diagnostics,
    })
}

/// Perturbed numerics used by [`stability_filter`].
fn perturbations<T: Real>(num: &Numerics<T>) -> Vec<Numerics<T>> {
    let step = T::lit(0.05);
    let ten = T::lit(10.0);
    vec![
        Numerics { series_tol: num.series_tol * ten, ..*num },
        Numerics { series_tol: num.series_tol / ten, ..*num },
        Numerics { angular_match: num.angular_match + step, ..*num },
        Numerics { angular_match: num.angular_match - step, ..*num },
        Numerics { r_match: num.r_match + step, ..*num },
        Numerics { r_match: num.r_match - step, ..*num },
        Numerics { r_far: num.r_far * T::lit(2.0), ..*num },
    ]
}

/// Re-solves the point under perturbed numerics; stable iff `ω` moves by
/// less than `stability_tol` under every perturbation.
pub fn stability_filter<T: Real>(point: &SpectralPoint<T>, opts: &SolverOptions<T>) -> bool {
    perturbations(&opts.numerics).into_iter().all(|numerics| {
        let o = SolverOptions { numerics, ..*opts };
        match solve_point(&point.cfg, point.kind, point.unk, &o) {
            Ok(p) => (p.unk.omega - point.unk.omega).norm() < opts.stability_tol,
            Err(_) => false,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c64 as cx;

    #[test]
    fn condition_of_diagonal_matrix() {
        let j = [[cx(2.0, 0.0), cx(0.0, 0.0)], [cx(0.0, 0.0), cx(0.0, 0.5)]];
        assert!((condition(&j) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn newton_solves_a_polynomial_system() {
        // (ω² - E, E - 4) = 0 → ω = 2, E = 4.
        let f = |x: Vec2<f64>| Ok([x[0] * x[0] - x[1], x[1] - 4.0]);
        let (x, r, d) = newton(&f, [cx(1.5, 0.1), cx(3.0, 0.0)], &SolverOptions::default()).unwrap();
        assert!((x[0] - cx(2.0, 0.0)).norm() < 1e-9 && r < 1e-10, "{x:?} {d:?}");
    }
}
