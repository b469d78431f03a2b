//! Heun form of the angular equation
//!
//! ```text
//! d/du[(1-u²) S'] + ((cu)² + 2csu + E - s² - (m+su)²/(1-u²)) S = 0,   c = aω
//! ```
//!
//! Anchored at `u = +1` with `z = (1-u)/2`, the substitution
//! `S = (1-u)^A (1+u)^B e^{σcu} y(z)` with `A² = (m+s)²/4`, `B² = (m-s)²/4`,
//! `σ = ±1` turns the equation into `HeunC(α, β, γ, δ, η, z)` with
//!
//! ```text
//! α = -4σc,  β = 2A,  γ = 2B,  δ = 4cs
//! μ = c² + 2cs + E - s² - (m² - s²)/2 - (A + B) - 2σc - 2AB - 4σcA
//! ```
//!
//! and `η` fixed by `μ`. The anchor `u = -1` follows from `u ↦ -u`, under
//! which the equation keeps its form with `s ↦ -s`.

use crate::error::{Error, Result};
use crate::heun::{ContinuationOptions, MapleHeunParams};
use crate::scalar::{real, Cx, Real};
use crate::teukolsky::config::{PhysicalConfig, SpectralUnknowns};
use crate::teukolsky::local::{
    halton, Anchor, Equation, LocalEval, LocalSolution, PrefactorTerm, ResidualSample, VariableMap,
};

/// Pole of the angular equation a solution is anchored at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AngularAnchor {
    /// `u = +1`.
    Plus,
    /// `u = -1`.
    Minus,
}

/// Sign choices in the angular substitution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TaeExponents {
    /// Sign of the exponential rate in the anchor's own variable.
    pub sigma: i8,
    /// `+1` selects the non-negative exponent at the anchor (the regular branch).
    pub near: i8,
    /// Same for the opposite pole.
    pub far: i8,
}

impl Default for TaeExponents {
    fn default() -> Self {
        Self {
            sigma: 1,
            near: 1,
            far: 1,
        }
    }
}

fn sign<T: Real>(x: i8) -> T {
    if x < 0 {
        -T::one()
    } else {
        T::one()
    }
}

/// Heun parameters for the anchor-`+1` substitution with exponents `(A, B)`.
pub(crate) fn tae_maple_params<T: Real>(
    c: Cx<T>,
    s: T,
    m: T,
    e: Cx<T>,
    exp_a: T,
    exp_b: T,
    sigma: T,
) -> MapleHeunParams<T> {
    let two = T::lit(2.0);
    let mu = c * c + c * (two * s) + e - real(s * s) - real((m * m - s * s) / two)
        - real(exp_a + exp_b)
        - c * (two * sigma)
        - real(two * exp_a * exp_b)
        - c * (T::lit(4.0) * sigma * exp_a);
    let alpha = -c * (T::lit(4.0) * sigma);
    let beta = real(two * exp_a);
    let gamma = real(two * exp_b);
    let delta = c * (T::lit(4.0) * s);
    let eta = (alpha - beta - gamma + alpha * beta - beta * gamma) * T::lit(0.5) - mu;
    MapleHeunParams::new(alpha, beta, gamma, delta, eta)
}

/// Assembles the anchored angular solution without the residual check.
pub fn tae_local_solution<T: Real>(
    cfg: &PhysicalConfig<T>,
    unk: &SpectralUnknowns<T>,
    anchor: AngularAnchor,
    exps: TaeExponents,
) -> LocalSolution<T> {
    let c = unk.omega * cfg.a;
    let s = cfg.s_real();
    let m = cfg.m_real();
    let half = T::lit(0.5);
    let plus_abs = (m + s).abs() * half;
    let minus_abs = (m - s).abs() * half;
    let sigma = sign::<T>(exps.sigma);
    let one = real(T::one());
    let (s_local, near, far, rate, map, tag) = match anchor {
        AngularAnchor::Plus => (
            s,
            sign::<T>(exps.near) * plus_abs,
            sign::<T>(exps.far) * minus_abs,
            c * sigma,
            VariableMap {
                origin: one,
                scale: real(-T::lit(2.0)),
            },
            Anchor::NorthPole,
        ),
        AngularAnchor::Minus => (
            -s,
            sign::<T>(exps.near) * minus_abs,
            sign::<T>(exps.far) * plus_abs,
            -c * sigma,
            VariableMap {
                origin: -one,
                scale: real(T::lit(2.0)),
            },
            Anchor::SouthPole,
        ),
    };
    let params = tae_maple_params(c, s_local, m, unk.e, near, far, sigma);
    // (1-u)^{·} and (1+u)^{·}: exponent `near` sits on the anchor's own pole.
    let (exp_north, exp_south) = match anchor {
        AngularAnchor::Plus => (near, far),
        AngularAnchor::Minus => (far, near),
    };
    LocalSolution {
        equation: Equation::Angular,
        anchor: tag,
        heun_params: params,
        prefactor_exponents: vec![
            PrefactorTerm {
                base: one,
                orientation: -T::one(),
                exponent: real(exp_north),
            },
            PrefactorTerm {
                base: -one,
                orientation: T::one(),
                exponent: real(exp_south),
            },
        ],
        exp_rate: rate,
        variable_map: map,
    }
}

/// Left-hand side of the angular equation for an evaluated solution.
pub fn tae_residual<T: Real>(
    cfg: &PhysicalConfig<T>,
    unk: &SpectralUnknowns<T>,
    u: Cx<T>,
    f: &LocalEval<T>,
) -> ResidualSample<T> {
    let c = unk.omega * cfg.a;
    let s = cfg.s_real();
    let m = cfg.m_real();
    let one = real(T::one());
    let w = one - u * u;
    let t2 = w * f.second_derivative;
    let t1 = u * f.derivative * T::lit(-2.0);
    let ms = u * s + m;
    let pots = [
        c * c * u * u,
        c * u * (T::lit(2.0) * s),
        unk.e,
        real(-s * s),
        -ms * ms / w,
    ];
    let mut scale = t2.norm().max(t1.norm());
    let mut total = t2 + t1;
    for p in pots {
        let term = p * f.value;
        scale = scale.max(term.norm());
        total += term;
    }
    ResidualSample {
        x: u,
        residual: total,
        scale,
    }
}

/// Residual samples at `n` Halton points of the anchor's half interval.
pub fn tae_residual_samples<T: Real>(
    cfg: &PhysicalConfig<T>,
    unk: &SpectralUnknowns<T>,
    sol: &LocalSolution<T>,
    n: usize,
    tol: T,
) -> Result<Vec<ResidualSample<T>>> {
    let opts = ContinuationOptions::default();
    (1..=n)
        .map(|i| {
            // z ∈ [0.02, 0.75]: from next to the anchor up to the matching point.
            let z = real(T::lit(0.02) + T::lit(0.73) * halton::<T>(i, 2));
            let u = sol.variable_map.x(z);
            let f = sol.evaluate(u, tol, &opts)?;
            Ok(tae_residual(cfg, unk, u, &f))
        })
        .collect()
}

/// Relative residual bound enforced by the checked constructors.
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Number of Halton points used by the checked constructors.
pub const RESIDUAL_SAMPLES: usize = 20;

/// Builds the regular angular solution anchored at `anchor` and verifies it
/// against the angular equation at twenty sample points.
pub fn build_tae_solution<T: Real>(
    cfg: &PhysicalConfig<T>,
    unk: &SpectralUnknowns<T>,
    anchor: AngularAnchor,
) -> Result<LocalSolution<T>> {
    build_tae_solution_with(cfg, unk, anchor, TaeExponents::default())
}

pub fn build_tae_solution_with<T: Real>(
    cfg: &PhysicalConfig<T>,
    unk: &SpectralUnknowns<T>,
    anchor: AngularAnchor,
    exps: TaeExponents,
) -> Result<LocalSolution<T>> {
    cfg.validate()?;
    let sol = tae_local_solution(cfg, unk, anchor, exps);
    let tol = T::epsilon() * T::lit(16.0);
    let worst = tae_residual_samples(cfg, unk, &sol, RESIDUAL_SAMPLES, tol)?
        .iter()
        .map(|r| r.relative())
        .fold(T::zero(), T::max);
    if !(worst < T::lit(RESIDUAL_TOL)) {
        return Err(Error::DerivationFailure {
            residual: worst.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(sol)
}
