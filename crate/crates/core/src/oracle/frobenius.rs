//! Frobenius starting values for `x² Q₂ y'' + x Q₁ y' + Q₀ y = 0` with
//! polynomial `Qᵢ`, written independently of the Heun machinery.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Ascending-coefficient complex polynomial.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly(pub Vec<Complex64>);

impl Poly {
    pub fn constant(c: Complex64) -> Self {
        Poly(vec![c])
    }

    /// `c₀ + c₁ x`.
    pub fn linear(c0: Complex64, c1: Complex64) -> Self {
        Poly(vec![c0, c1])
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.0.get(k).copied().unwrap_or_default()
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.0.is_empty() || o.0.is_empty() {
            return Poly(Vec::new());
        }
        let mut v = vec![Complex64::default(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly(v)
    }

    pub fn scale(&self, c: Complex64) -> Poly {
        Poly(self.0.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.0.iter().rev().fold(Complex64::default(), |acc, c| acc * x + c)
    }
}

/// Roots of the indicial polynomial `q₂(0) t(t-1) + q₁(0) t + q₀(0)`.
pub fn indicial_roots(q2: &Poly, q1: &Poly, q0: &Poly) -> [Complex64; 2] {
    let a = q2.coeff(0);
    let b = q1.coeff(0) - a;
    let c = q0.coeff(0);
    let d = (b * b - a * c * 4.0).sqrt();
    [(-b + d) / (a * 2.0), (-b - d) / (a * 2.0)]
}

/// Value and derivative of `Σ cₖ x^{k+ρ}` with `c₀ = 1`.
pub fn frobenius_value(q2: &Poly, q1: &Poly, q0: &Poly, rho: Complex64, x: Complex64) -> Result<[Complex64; 2]> {
    let f = |j: usize, t: Complex64| q2.coeff(j) * t * (t - 1.0) + q1.coeff(j) * t + q0.coeff(j);
    let width = q2.0.len().max(q1.0.len()).max(q0.0.len());
    let mut c = vec![Complex64::new(1.0, 0.0)];
    let mut sum = Complex64::new(1.0, 0.0);
    let mut dsum = rho;
    let mut xp = Complex64::new(1.0, 0.0);
    let mut small = 0;
    for n in 1..400 {
        let mut acc = Complex64::default();
        for j in 1..width.min(n + 1) {
            acc += c[n - j] * f(j, rho + (n - j) as f64);
        }
        let lead = f(0, rho + n as f64);
        if lead.norm() < 1e-300 {
            return Err(Error::EvaluationFailure("resonant Frobenius exponents".into()));
        }
        let cn = -acc / lead;
        c.push(cn);
        xp *= x;
        let term = cn * xp;
        sum += term;
        dsum += term * (rho + n as f64);
        small = if term.norm() < 1e-18 * sum.norm() { small + 1 } else { 0 };
        if n > width && small >= 2 {
            let xr = x.powc(rho);
            return Ok([sum * xr, dsum * xr / x]);
        }
    }
    Err(Error::NoConvergence {
        what: "oracle Frobenius series",
        iterations: 400,
    })
}
