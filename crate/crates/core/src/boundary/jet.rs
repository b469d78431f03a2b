//! Jet-mode conditions: the angular Heun factor must be a polynomial.
//!
//! `HeunC(α, β, γ, δ, η, z)` reduces to a polynomial of degree `N` when
//!
//! ```text
//! δ/α + (β + γ)/2 + N + 1 = 0          (the series coefficient chain breaks)
//! Δ_{N+1}(η) = 0                       (c_{N+1} vanishes)
//! ```
//!
//! where `Δ_{N+1}` is the determinant of the tridiagonal system
//! `A_k c_{k+1} + B_k c_k + C_k c_{k-1} = 0`, `k = 0..N`, with
//! `A_k = (k+1)(a₀-k)`, `B_k = k(k-1) + a₁k + b₀`, `C_k = α(k-1) + b₁`.
//! Rows are divided by `(k+1)²` before expansion, which leaves the zero set
//! unchanged and keeps the value bounded for large `N`.
//!
//! A polynomial factor can only occur when the exponent at the far pole is
//! the singular one, so jet modes use the substitution with `far = -1`.

use crate::error::{Error, Result};
use crate::heun::{HeunOde, MapleHeunParams};
use crate::scalar::{real, Cx, Real};
use crate::teukolsky::{
    tae_local_solution, AngularAnchor, PhysicalConfig, SpectralUnknowns, TaeExponents,
};

/// Substitution whose Heun factor can terminate, with its polynomial degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JetFactor {
    pub anchor: AngularAnchor,
    pub exps: TaeExponents,
    pub degree: usize,
}

/// `δ/α + (β+γ)/2 + 1` for a substitution, from the exponents alone
/// (`δ/α = -s/σ` in the anchor's own variable).
fn chain_offset(cfg: &PhysicalConfig<f64>, anchor: AngularAnchor, exps: TaeExponents) -> f64 {
    let s = cfg.s as f64;
    let m = cfg.m as f64;
    let (s_local, near_abs, far_abs) = match anchor {
        AngularAnchor::Plus => (s, (m + s).abs() / 2.0, (m - s).abs() / 2.0),
        AngularAnchor::Minus => (-s, (m - s).abs() / 2.0, (m + s).abs() / 2.0),
    };
    let sigma = exps.sigma as f64;
    -s_local / sigma + exps.near as f64 * near_abs + exps.far as f64 * far_abs + 1.0
}

/// Picks the first substitution (north pole first, `σ = -1` first) whose
/// chain-break condition holds for some degree `N ≥ 0`.
pub fn jet_factor<T: Real>(cfg: &PhysicalConfig<T>) -> Option<JetFactor> {
    let cfg64 = PhysicalConfig {
        mass: cfg.mass.to_f64()?,
        a: cfg.a.to_f64()?,
        s: cfg.s,
        l: cfg.l,
        m: cfg.m,
    };
    for anchor in [AngularAnchor::Plus, AngularAnchor::Minus] {
        for sigma in [-1, 1] {
            let exps = TaeExponents {
                sigma,
                near: 1,
                far: -1,
            };
            let n = -chain_offset(&cfg64, anchor, exps);
            if n >= -1e-12 && (n - n.round()).abs() < 1e-12 {
                return Some(JetFactor {
                    anchor,
                    exps,
                    degree: n.round() as usize,
                });
            }
        }
    }
    None
}

/// Row-scaled `Δ_{size}` for the Heun factor `p`.
pub fn jet_determinant<T: Real>(p: &MapleHeunParams<T>, size: usize) -> Cx<T> {
    let ode = p.ode();
    let (mut prev, mut cur) = (real(T::zero()), real(T::one()));
    for k in 0..size {
        let (a_prev, b_k, c_k) = tridiagonal_entries(&ode, k);
        let next = if k == 0 { b_k * cur } else { b_k * cur - a_prev * c_k * prev };
        prev = cur;
        cur = next;
    }
    cur
}

/// `(A_{k-1}, B_k, C_k)` after row scaling.
fn tridiagonal_entries<T: Real>(ode: &HeunOde<T>, k: usize) -> (Cx<T>, Cx<T>, Cx<T>) {
    let kk = T::idx(k);
    let row = |j: usize| T::idx((j + 1) * (j + 1)).recip();
    let a_prev = if k == 0 {
        real(T::zero())
    } else {
        (ode.a[0] - (kk - T::one())) * kk * row(k - 1)
    };
    let b = (real(kk * (kk - T::one())) + ode.a[1] * kk + ode.b[0]) * row(k);
    let c = (ode.a[2] * (kk - T::one()) + ode.b[1]) * row(k);
    (a_prev, b, c)
}

fn jet_params<T: Real>(cfg: &PhysicalConfig<T>, unk: &SpectralUnknowns<T>, f: &JetFactor) -> Result<MapleHeunParams<T>> {
    let sol = tae_local_solution(cfg, unk, f.anchor, f.exps);
    if sol.heun_params.alpha.norm() == T::zero() {
        return Err(Error::AlphaZero);
    }
    Ok(sol.heun_params)
}

fn default_factor<T: Real>(cfg: &PhysicalConfig<T>) -> JetFactor {
    jet_factor(cfg).unwrap_or(JetFactor {
        anchor: AngularAnchor::Plus,
        exps: TaeExponents {
            sigma: -1,
            near: 1,
            far: -1,
        },
        degree: 0,
    })
}

/// `(c₁, Δ_{N+1})` for the jet substitution of the angular equation.
pub fn jet_mode_conditions<T: Real>(
    cfg: &PhysicalConfig<T>,
    unk: &SpectralUnknowns<T>,
    n: usize,
) -> Result<(Cx<T>, Cx<T>)> {
    let f = default_factor(cfg);
    let p = jet_params(cfg, unk, &f)?;
    let c1 = p.delta / p.alpha + (p.beta + p.gamma) * T::lit(0.5) + real(T::idx(n + 1));
    Ok((c1, jet_determinant(&p, n + 1)))
}

/// The angular component of the jet spectral system, `Δ_{N+1}` at the degree
/// fixed by the chain-break condition.
pub fn jet_residual<T: Real>(cfg: &PhysicalConfig<T>, unk: &SpectralUnknowns<T>) -> Result<Cx<T>> {
    let f = jet_factor(cfg).ok_or_else(|| {
        Error::InvalidConfig(format!("no terminating angular substitution for s = {}, m = {}", cfg.s, cfg.m))
    })?;
    let p = jet_params(cfg, unk, &f)?;
    Ok(jet_determinant(&p, f.degree + 1))
}

/// All Maple parameter sets with the given `α, β, γ` whose Heun function is a
/// polynomial of degree `n`: `δ` from the chain-break condition and each
/// root `η` of `Δ_{n+1}(η)`.
pub fn jet_accessory_roots(
    alpha: Cx<f64>,
    beta: Cx<f64>,
    gamma: Cx<f64>,
    n: usize,
) -> Result<Vec<MapleHeunParams<f64>>> {
    if alpha.norm() == 0.0 {
        return Err(Error::AlphaZero);
    }
    let delta = -alpha * ((n + 1) as f64 + (beta + gamma) * 0.5);
    let base = MapleHeunParams::new(alpha, beta, gamma, delta, Cx::new(0.0, 0.0));
    let ode0 = base.ode();
    // b₀ = -μ = η - μ|_{η=0}; every other entry is independent of η.
    let mut prev: Vec<Cx<f64>> = vec![];
    let mut cur: Vec<Cx<f64>> = vec![Cx::new(1.0, 0.0)];
    for k in 0..=n {
        let (a_prev, b_k, c_k) = tridiagonal_entries(&ode0, k);
        let slope = Cx::new(1.0 / ((k + 1) * (k + 1)) as f64, 0.0);
        let mut next = poly_mul_linear(&cur, b_k, slope);
        if k > 0 {
            let coupling = a_prev * c_k;
            for (i, c) in prev.iter().enumerate() {
                next[i] -= coupling * c;
            }
        }
        prev = cur;
        cur = next;
    }
    let roots = poly_roots(&cur)?;
    Ok(roots
        .into_iter()
        .map(|eta| {
            let eta = polish_accessory_root(&base, eta, n + 1);
            MapleHeunParams::new(alpha, beta, gamma, delta, eta)
        })
        .collect())
}

/// `Δ_size(η)` and `dΔ_size/dη` by the determinant recursion.
fn determinant_with_slope(base: &MapleHeunParams<f64>, eta: Cx<f64>, size: usize) -> (Cx<f64>, Cx<f64>) {
    let ode = MapleHeunParams { eta, ..*base }.ode();
    let zero = Cx::new(0.0, 0.0);
    let (mut prev, mut cur) = (zero, Cx::new(1.0, 0.0));
    let (mut dprev, mut dcur) = (zero, zero);
    for k in 0..size {
        let (a_prev, b_k, c_k) = tridiagonal_entries(&ode, k);
        let db = 1.0 / ((k + 1) * (k + 1)) as f64;
        let coupling = if k == 0 { zero } else { a_prev * c_k };
        let next = b_k * cur - coupling * prev;
        let dnext = b_k * dcur + cur * db - coupling * dprev;
        (prev, cur, dprev, dcur) = (cur, next, dcur, dnext);
    }
    (cur, dcur)
}

/// Newton refinement on the recursion itself, which is better conditioned
/// than the expanded coefficients near clustered roots.
fn polish_accessory_root(base: &MapleHeunParams<f64>, mut eta: Cx<f64>, size: usize) -> Cx<f64> {
    let (mut best, mut best_abs) = (eta, determinant_with_slope(base, eta, size).0.norm());
    for _ in 0..8 {
        let (d, slope) = determinant_with_slope(base, eta, size);
        if slope.norm() == 0.0 {
            break;
        }
        eta -= d / slope;
        let abs = determinant_with_slope(base, eta, size).0.norm();
        if abs < best_abs {
            (best, best_abs) = (eta, abs);
        } else {
            break;
        }
    }
    best
}

/// `p(η)·(b + slope·η)`.
fn poly_mul_linear(p: &[Cx<f64>], b: Cx<f64>, slope: Cx<f64>) -> Vec<Cx<f64>> {
    let mut out = vec![Cx::new(0.0, 0.0); p.len() + 1];
    for (i, c) in p.iter().enumerate() {
        out[i] += c * b;
        out[i + 1] += c * slope;
    }
    out
}

/// Roots of an ascending-coefficient polynomial (Aberth–Ehrlich iteration).
fn poly_roots(c: &[Cx<f64>]) -> Result<Vec<Cx<f64>>> {
    let deg = c.len() - 1;
    let lead = c[deg];
    let monic: Vec<Cx<f64>> = c.iter().map(|x| x / lead).collect();
    let eval = |z: Cx<f64>| {
        let mut p = Cx::new(0.0, 0.0);
        let mut dp = Cx::new(0.0, 0.0);
        let mut bound = 0.0;
        for k in (0..=deg).rev() {
            dp = dp * z + p;
            p = p * z + monic[k];
            bound = bound * z.norm() + monic[k].norm();
        }
        (p, dp, bound)
    };
    // Every root is accepted once |p(z)| is at the rounding level of Horner's rule.
    let settled = |z: &[Cx<f64>]| {
        z.iter().all(|&x| {
            let (p, _, bound) = eval(x);
            p.norm() <= 16.0 * f64::EPSILON * (deg as f64) * bound
        })
    };
    let radius = 1.0 + monic[..deg].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut z: Vec<Cx<f64>> = (0..deg)
        .map(|k| Cx::from_polar(radius, 0.4 + std::f64::consts::TAU * k as f64 / deg as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let (p, dp, _) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Cx<f64> = (0..deg).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let step = ratio / (Cx::new(1.0, 0.0) - ratio * repulsion);
            z[i] -= step;
            moved = moved.max(step.norm() / (1.0 + z[i].norm()));
        }
        if moved < 1e-15 || settled(&z) {
            return Ok(z);
        }
    }
    if settled(&z) {
        return Ok(z);
    }
    Err(Error::NoConvergence {
        what: "accessory-parameter root finding",
        iterations: 500,
    })
}
