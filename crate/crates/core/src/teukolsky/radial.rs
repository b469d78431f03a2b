//! Heun form of the radial equation
//!
//! ```text
//! R'' + (1+s)(1/(r-r₊) + 1/(r-r₋)) R'
//!     + (K²/Δ - is(1/(r-r₊) + 1/(r-r₋))K - λ - 4isωr) R/Δ = 0
//! ```
//!
//! With `d = r₋ - r₊`, `z = (r - r₊)/d` and
//! `R = (r-r₊)^{ρ₊} (r-r₋)^{ρ₋} e^{σr} y(z)`, where `ρ±` solve the indicial
//! equations at the horizons and `σ = ±iω`, the factor `y` solves
//! `HeunC(α, β, γ, δ, η, z)` with `α = 2σd`, `β = s + 2ρ₊`, `γ = s + 2ρ₋`.
//! The remaining two parameters follow from the residues `μ/d`, `ν/d` of the
//! transformed potential at `r₊` and `r₋`.

use crate::error::{Error, Result};
use crate::heun::{ContinuationOptions, MapleHeunParams};
use crate::scalar::{imag_unit, real, Cx, Real};
use crate::teukolsky::config::{
    horizons, kerr_k, kerr_lambda, spin_frequency_term, PhysicalConfig, SpectralUnknowns,
};
use crate::teukolsky::local::{
    halton, Anchor, Equation, LocalEval, LocalSolution, PrefactorTerm, ResidualSample, VariableMap,
};

/// Horizon behavior of a radial solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RadialBranch {
    /// `ρ₊ = ik₊`; paired with quasi-bound boundary conditions.
    R1,
    /// `ρ₊ = -s - ik₊`; paired with black-hole boundary conditions.
    R2,
}

/// Auxiliary sign choices that do not change the solution, only its Heun representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreExponents {
    /// `false`: `ρ₋ = ik₋`; `true`: `ρ₋ = -s - ik₋`.
    pub inner_flipped: bool,
    /// Sign in `σ = ±iω`.
    pub sigma: i8,
}

impl Default for TreExponents {
    fn default() -> Self {
        Self {
            inner_flipped: false,
            sigma: 1,
        }
    }
}

/// Assembles the horizon-anchored radial solution without the residual check.
pub fn tre_local_solution<T: Real>(
    cfg: &PhysicalConfig<T>,
    unk: &SpectralUnknowns<T>,
    branch: RadialBranch,
    exps: TreExponents,
) -> Result<LocalSolution<T>> {
    let h = horizons(cfg)?;
    let i = imag_unit::<T>();
    let s = cfg.s_real();
    let w = unk.omega;
    let two = T::lit(2.0);
    let rp = real(h.r_plus);
    let rm = real(h.r_minus);
    let dd = real(h.r_plus - h.r_minus); // D = r₊ - r₋
    let d = -dd;
    let lam = kerr_lambda(cfg, unk);

    let k_plus = kerr_k(cfg, w, rp);
    let k_minus = kerr_k(cfg, w, rm);
    let kp_plus = -w * rp * two;
    let kp_minus = -w * rm * two;
    let kap_plus = k_plus / dd;
    let kap_minus = k_minus / d;
    let rho_p = match branch {
        RadialBranch::R1 => i * kap_plus,
        RadialBranch::R2 => -real(s) - i * kap_plus,
    };
    let rho_m = if exps.inner_flipped {
        -real(s) - i * kap_minus
    } else {
        i * kap_minus
    };
    let sigma = if exps.sigma < 0 { -i * w } else { i * w };

    let is = i * s;
    let n_p = k_plus * k_plus - is * dd * k_plus;
    let np_p = k_plus * kp_plus * two - is * k_plus * two - is * dd * kp_plus
        - (lam + is * w * rp * T::lit(4.0)) * dd;
    let n_m = k_minus * k_minus + is * dd * k_minus;
    let np_m = k_minus * kp_minus * two - is * k_minus * two + is * dd * kp_minus
        + (lam + is * w * rm * T::lit(4.0)) * dd;
    let one_s = T::one() + s;
    let d2 = dd * dd;
    let d3 = d2 * dd;
    let res_p = np_p / d2 - n_p * two / d3
        + ((rho_p + rho_m) / dd + sigma) * one_s
        + rho_p * rho_m * two / dd
        + sigma * rho_p * two;
    let res_m = np_m / d2 + n_m * two / d3
        + (-(rho_p + rho_m) / dd + sigma) * one_s
        - rho_p * rho_m * two / dd
        + sigma * rho_m * two;
    let mu = d * res_p;
    let nu = d * res_m;
    let alpha = sigma * d * two;
    let beta = real(s) + rho_p * two;
    let gamma = real(s) + rho_m * two;
    let params = MapleHeunParams::from_potential(alpha, beta, gamma, mu, nu);
    if !params.is_finite() {
        return Err(Error::NonFinite("radial Heun parameters"));
    }
    Ok(LocalSolution {
        equation: Equation::Radial,
        anchor: Anchor::OuterHorizon,
        heun_params: params,
        prefactor_exponents: vec![
            PrefactorTerm {
                base: rp,
                orientation: T::one(),
                exponent: rho_p,
            },
            PrefactorTerm {
                base: rm,
                orientation: T::one(),
                exponent: rho_m,
            },
        ],
        exp_rate: sigma,
        variable_map: VariableMap {
            origin: rp,
            scale: d,
        },
    })
}

/// Left-hand side of the radial equation for an evaluated solution.
pub fn tre_residual<T: Real>(
    cfg: &PhysicalConfig<T>,
    unk: &SpectralUnknowns<T>,
    r: Cx<T>,
    f: &LocalEval<T>,
) -> Result<ResidualSample<T>> {
    let h = horizons(cfg)?;
    let s = cfg.s_real();
    let i = imag_unit::<T>();
    let xp = r - real(h.r_plus);
    let xm = r - real(h.r_minus);
    let delta = xp * xm;
    let sum = xp.inv() + xm.inv();
    let k = kerr_k(cfg, unk.omega, r);
    let lam = kerr_lambda(cfg, unk);
    let t2 = f.second_derivative;
    let t1 = sum * f.derivative * (T::one() + s);
    let pots = [
        k * k / delta,
        -i * sum * k * s,
        -lam,
        spin_frequency_term(cfg, unk.omega, r),
    ];
    let mut scale = t2.norm().max(t1.norm());
    let mut total = t2 + t1;
    for p in pots {
        let term = p * f.value / delta;
        scale = scale.max(term.norm());
        total += term;
    }
    Ok(ResidualSample {
        x: r,
        residual: total,
        scale,
    })
}

/// Residual samples at `n` Halton points of `(r₊, 4M]`.
pub fn tre_residual_samples<T: Real>(
    cfg: &PhysicalConfig<T>,
    unk: &SpectralUnknowns<T>,
    sol: &LocalSolution<T>,
    n: usize,
    tol: T,
) -> Result<Vec<ResidualSample<T>>> {
    let h = horizons(cfg)?;
    let span = cfg.mass * T::lit(4.0) - h.r_plus;
    let opts = ContinuationOptions::default();
    (1..=n)
        .map(|k| {
            let r = real(h.r_plus + span * (T::lit(0.02) + T::lit(0.98) * halton::<T>(k, 3)));
            let f = sol.evaluate(r, tol, &opts)?;
            tre_residual(cfg, unk, r, &f)
        })
        .collect()
}

/// Builds the horizon-anchored radial solution of the given branch and
/// verifies it against the radial equation at twenty sample points.
pub fn build_tre_solution<T: Real>(
    cfg: &PhysicalConfig<T>,
    unk: &SpectralUnknowns<T>,
    branch: RadialBranch,
) -> Result<LocalSolution<T>> {
    build_tre_solution_with(cfg, unk, branch, TreExponents::default())
}

pub fn build_tre_solution_with<T: Real>(
    cfg: &PhysicalConfig<T>,
    unk: &SpectralUnknowns<T>,
    branch: RadialBranch,
    exps: TreExponents,
) -> Result<LocalSolution<T>> {
    cfg.validate()?;
    if unk.omega.norm() == T::zero() {
        return Err(Error::InvalidConfig("frequency must be non-zero".into()));
    }
    let sol = tre_local_solution(cfg, unk, branch, exps)?;
    let tol = T::epsilon() * T::lit(16.0);
    let worst = tre_residual_samples(cfg, unk, &sol, super::angular::RESIDUAL_SAMPLES, tol)?
        .iter()
        .map(|r| r.relative())
        .fold(T::zero(), T::max);
    if !(worst < T::lit(super::angular::RESIDUAL_TOL)) {
        return Err(Error::DerivationFailure {
            residual: worst.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(sol)
}
