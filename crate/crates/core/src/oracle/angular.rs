//! Angular eigenvalues by shooting from both poles.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::oracle::frobenius::{frobenius_value, indicial_roots, Poly};
use crate::oracle::rk::{integrate_segment, RkOptions};
use crate::oracle::secant;
use crate::teukolsky::PhysicalConfig;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularOracleOptions {
    /// Distance from each pole where integration starts.
    pub offset: f64,
    /// Matching point.
    pub u_match: f64,
    pub rk: RkOptions,
    pub root_tol: f64,
}

impl Default for AngularOracleOptions {
    fn default() -> Self {
        Self {
            offset: 1e-6,
            u_match: 0.0,
            rk: RkOptions::default(),
            root_tol: 1e-13,
        }
    }
}

struct Tae {
    c: Complex64,
    s: f64,
    m: f64,
    e: Complex64,
}

impl Tae {
    fn rhs(&self, u: Complex64, y: &[Complex64; 2]) -> [Complex64; 2] {
        let w = 1.0 - u * u;
        let ms = self.m + u * self.s;
        let v = self.c * self.c * u * u + self.c * u * (2.0 * self.s) + self.e - self.s * self.s - ms * ms / w;
        [y[1], (u * y[1] * 2.0 - v * y[0]) / w]
    }

    /// The equation times `x(2-x)` in `x = 1 ∓ u`, as `x²Q₂y'' + xQ₁y' + Q₀y`.
    fn local(&self, pole: f64) -> (Poly, Poly, Poly) {
        let one = Complex64::new(1.0, 0.0);
        let two = Complex64::new(2.0, 0.0);
        let two_minus_x = Poly::linear(two, -one);
        let q2 = two_minus_x.mul(&two_minus_x);
        let q1 = Poly::linear(one, -one).mul(&two_minus_x).scale(two);
        // u = pole - pole·x
        let u = Poly::linear(Complex64::new(pole, 0.0), Complex64::new(-pole, 0.0));
        let core = u
            .mul(&u)
            .scale(self.c * self.c)
            .add(&u.scale(self.c * (2.0 * self.s)))
            .add(&Poly::constant(self.e - self.s * self.s));
        let x_two = Poly(vec![Complex64::default(), two, -one]);
        let ms = u.scale(Complex64::new(self.s, 0.0)).add(&Poly::constant(Complex64::new(self.m, 0.0)));
        let q0 = core.mul(&x_two).add(&ms.mul(&ms).scale(-one));
        (q2, q1, q0)
    }

    /// Solution regular at `u = pole`, integrated to `u_match`; returns `(S, dS/du)`.
    fn regular_from(&self, pole: f64, opts: &AngularOracleOptions) -> Result<[Complex64; 2]> {
        let (q2, q1, q0) = self.local(pole);
        let roots = indicial_roots(&q2, &q1, &q0);
        // The regular branch has the exponent with the larger real part.
        let rho = if roots[0].re >= roots[1].re { roots[0] } else { roots[1] };
        let x = Complex64::new(opts.offset, 0.0);
        let [y, dy] = frobenius_value(&q2, &q1, &q0, rho, x)?;
        // du = -pole dx
        let start = [y, -dy * pole];
        let u0 = Complex64::new(pole * (1.0 - opts.offset), 0.0);
        integrate_segment(|u, y| self.rhs(u, y), u0, Complex64::new(opts.u_match, 0.0), start, &opts.rk)
    }

    fn wronskian(&self, opts: &AngularOracleOptions) -> Result<Complex64> {
        let a = self.regular_from(1.0, opts)?;
        let b = self.regular_from(-1.0, opts)?;
        Ok(a[0] * b[1] - a[1] * b[0])
    }
}

/// Matching-point Wronskian of the two pole-regular solutions at given `E`.
pub fn angular_wronskian(
    cfg: &PhysicalConfig<f64>,
    omega: Complex64,
    e: Complex64,
    opts: &AngularOracleOptions,
) -> Result<Complex64> {
    Tae {
        c: omega * cfg.a,
        s: cfg.s as f64,
        m: cfg.m as f64,
        e,
    }
    .wronskian(opts)
}

/// Angular eigenvalue `E` connected to `l(l+1)` for the given frequency.
pub fn angular_eigenvalue(cfg: &PhysicalConfig<f64>, omega: Complex64, l: i32) -> Result<Complex64> {
    let guess = Complex64::new((l * (l + 1)) as f64, 0.0);
    angular_eigenvalue_from(cfg, omega, guess, &AngularOracleOptions::default())
}

/// Secant iteration on the Wronskian starting at `guess`.
pub fn angular_eigenvalue_from(
    cfg: &PhysicalConfig<f64>,
    omega: Complex64,
    guess: Complex64,
    opts: &AngularOracleOptions,
) -> Result<Complex64> {
    cfg.validate()?;
    let f = |e: Complex64| angular_wronskian(cfg, omega, e, opts);
    let root = secant(f, guess + 0.05, guess - 0.03, opts.root_tol, 80)?;
    if !(root.re.is_finite() && root.im.is_finite()) {
        return Err(Error::NonFinite("angular oracle eigenvalue"));
    }
    Ok(root)
}
