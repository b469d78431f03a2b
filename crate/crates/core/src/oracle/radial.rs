//! Schwarzschild quasinormal frequencies by shooting on the radial equation.
//!
//! The solution ingoing at the horizon is started from its Frobenius series
//! and integrated out to a matching radius; the outgoing solution is started
//! from its leading asymptotics far out on the complex ray where it decays
//! fastest, and integrated inward, which suppresses any admixture of the
//! growing solution.

use num_complex::Complex64;

use crate::error::Result;
use crate::oracle::frobenius::{frobenius_value, indicial_roots, Poly};
use crate::oracle::rk::{integrate_segment, RkOptions};
use crate::oracle::secant;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialOracleOptions {
    pub mass: f64,
    /// Distance from the horizon where integration starts.
    pub offset: f64,
    /// Matching radius in units of `M`.
    pub r_match: f64,
    /// `|ω|·L` for the length `L` of the inward ray.
    pub far_decay: f64,
    pub rk: RkOptions,
    pub root_tol: f64,
}

impl Default for RadialOracleOptions {
    fn default() -> Self {
        Self {
            mass: 0.5,
            offset: 1e-6,
            r_match: 4.0,
            far_decay: 40.0,
            rk: RkOptions::default(),
            root_tol: 1e-12,
        }
    }
}

struct Tre {
    mass: f64,
    s: f64,
    lambda: Complex64,
    omega: Complex64,
}

impl Tre {
    fn k(&self, r: Complex64) -> Complex64 {
        -self.omega * r * r
    }

    fn rhs(&self, r: Complex64, y: &[Complex64; 2]) -> [Complex64; 2] {
        let i = Complex64::new(0.0, 1.0);
        let delta = r * (r - 2.0 * self.mass);
        let dp = r * 2.0 - 2.0 * self.mass;
        let k = self.k(r);
        let pot = k * k - i * self.s * dp * k - (self.lambda + i * self.s * self.omega * r * 4.0) * delta;
        let ypp = -((1.0 + self.s) * dp * delta * y[1] + pot * y[0]) / (delta * delta);
        [y[1], ypp]
    }

    /// The equation times `Δ²` in `x = r - 2M`.
    fn horizon_local(&self) -> (Poly, Poly, Poly) {
        let i = Complex64::new(0.0, 1.0);
        let c = |x: f64| Complex64::new(x, 0.0);
        let rh = 2.0 * self.mass;
        let r = Poly::linear(c(rh), c(1.0));
        let xp = Poly::linear(c(rh), c(1.0)); // Δ/x
        let dp = Poly::linear(c(rh), c(2.0));
        let q2 = xp.mul(&xp);
        let q1 = xp.mul(&dp).scale(c(1.0 + self.s));
        let k = r.mul(&r).scale(-self.omega);
        let delta = Poly(vec![c(0.0), c(rh), c(1.0)]);
        let q0 = k
            .mul(&k)
            .add(&dp.mul(&k).scale(-i * self.s))
            .add(&Poly::constant(self.lambda).add(&r.scale(i * self.s * self.omega * 4.0)).mul(&delta).scale(c(-1.0)));
        (q2, q1, q0)
    }

    /// Log-derivative mismatch at the matching radius.
    fn mismatch(&self, opts: &RadialOracleOptions) -> Result<Complex64> {
        let i = Complex64::new(0.0, 1.0);
        let rh = 2.0 * self.mass;
        let r_match = Complex64::new(opts.r_match * self.mass, 0.0);

        let (q2, q1, q0) = self.horizon_local();
        let roots = indicial_roots(&q2, &q1, &q0);
        // Ingoing at the horizon: Δ^{-s} e^{iωr*}, r* ≈ 2M ln(r - 2M).
        let target = -self.s + i * self.omega * rh;
        let rho = if (roots[0] - target).norm() <= (roots[1] - target).norm() { roots[0] } else { roots[1] };
        let x0 = Complex64::new(opts.offset, 0.0);
        let start = frobenius_value(&q2, &q1, &q0, rho, x0)?;
        let near = integrate_segment(|r, y| self.rhs(r, y), x0 + rh, r_match, start, &opts.rk)?;

        // Outgoing: r^{-1-2s} e^{-iωr*} decays fastest where arg ω + arg r = -π/2.
        let theta = (-std::f64::consts::FRAC_PI_2 - self.omega.arg()).clamp(-2.5, 2.5);
        let len = opts.far_decay / self.omega.norm();
        let r_far = r_match + Complex64::from_polar(len, theta);
        let delta = r_far * (r_far - rh);
        let dlog = (-1.0 - 2.0 * self.s) / r_far - i * self.omega * r_far * r_far / delta;
        let far = integrate_segment(
            |r, y| self.rhs(r, y),
            r_far,
            r_match,
            [Complex64::new(1.0, 0.0), dlog],
            &opts.rk,
        )?;
        Ok(r_match * (near[1] / near[0] - far[1] / far[0]))
    }
}

/// Radial mismatch at frequency `omega` for a Schwarzschild hole.
pub fn schwarzschild_mismatch(l: i32, s: i32, omega: Complex64, opts: &RadialOracleOptions) -> Result<Complex64> {
    let s = s as f64;
    let e = (l * (l + 1)) as f64;
    Tre {
        mass: opts.mass,
        s,
        lambda: Complex64::new(e - s * (s + 1.0), 0.0),
        omega,
    }
    .mismatch(opts)
}

/// Eikonal estimate `((l + ½) + i(n + ½))/(3√3 M)` of a damped mode.
pub fn eikonal_guess(l: i32, n: u32, mass: f64) -> Complex64 {
    Complex64::new(l as f64 + 0.5, n as f64 + 0.5) / (3.0 * 3f64.sqrt() * mass)
}

/// The `n`-th quasinormal frequency (ordered by damping) with `Re ω > 0`.
///
/// Frequencies use the `e^{iωt}` time dependence, so damped modes have
/// `Im ω > 0`. Overtones are found by deflating all lower ones.
pub fn schwarzschild_qnm(l: i32, n: u32, s: i32) -> Result<Complex64> {
    schwarzschild_qnm_with(l, n, s, &RadialOracleOptions::default())
}

pub fn schwarzschild_qnm_with(l: i32, n: u32, s: i32, opts: &RadialOracleOptions) -> Result<Complex64> {
    let mut found: Vec<Complex64> = Vec::new();
    for _ in 0..=n {
        // Overtones: step from the previous root by the latest spacing.
        let g = match found.len() {
            0 => eikonal_guess(l, 0, opts.mass),
            1 => found[0] + eikonal_guess(l, 1, opts.mass) - eikonal_guess(l, 0, opts.mass),
            j => found[j - 1] * 2.0 - found[j - 2],
        };
        let lower = found.clone();
        let f = |w: Complex64| -> Result<Complex64> {
            let base = schwarzschild_mismatch(l, s, w, opts)?;
            Ok(lower.iter().fold(base, |acc, r| acc / (w - r)))
        };
        let root = secant(f, g, g * Complex64::new(1.02, 0.01), opts.root_tol, 100)?;
        found.push(root);
    }
    Ok(found[n as usize])
}
