//! Series machinery for equations of the form
//!
//! ```text
//! z(z-1) y'' + (a₂z² + a₁z + a₀) y' + (b₂z² + b₁z + b₀) y = 0
//! ```
//!
//! which covers both the canonical and the Maple form of the confluent Heun
//! equation. Three expansions are provided:
//!
//! * the Frobenius series with exponent 0 about `z = 0`,
//! * Taylor re-expansion about an ordinary point, used to continue a solution
//!   step by step along a path,
//! * the formal (asymptotic) expansion `e^{λz} z^ρ Σ aₙ z^{-n}` about `z = ∞`.
//!
//! Substituting `Σ cₖ zᵏ` gives the recurrence
//!
//! ```text
//! (k+1)(k-a₀) c_{k+1} = [k(k-1) + a₁k + b₀] cₖ + [a₂(k-1) + b₁] c_{k-1} + b₂ c_{k-2}
//! ```
//!
//! which is three-term in the Maple form (`b₂ = 0`) and four-term in the
//! canonical form (`b₂ = q`).

use crate::error::{Error, Result};
use crate::scalar::{is_finite, real, Cx, Real};

/// Polynomial-coefficient form of a confluent Heun equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeunOde<T: Real> {
    /// `[a₀, a₁, a₂]`, coefficients of the `y'` polynomial.
    pub a: [Cx<T>; 3],
    /// `[b₀, b₁, b₂]`, coefficients of the `y` polynomial.
    pub b: [Cx<T>; 3],
}

/// Value and derivatives of a solution at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeunEval<T: Real> {
    pub value: Cx<T>,
    pub derivative: Cx<T>,
    pub second_derivative: Cx<T>,
    /// Estimated absolute truncation error of `value`.
    pub err_estimate: T,
    pub terms_used: usize,
}

/// Step-size controls for [`HeunOde::continue_along`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuationOptions<T: Real> {
    /// Minimum distance every path segment keeps from `z = 0` and `z = 1`.
    pub min_clearance: T,
    /// Largest step as a fraction of the distance to the nearest singularity.
    pub step_fraction: T,
    /// Bound on `|h|·rate`, where `rate` is the largest exponential growth rate.
    pub exp_cap: T,
    pub max_steps: usize,
    pub max_terms: usize,
}

impl<T: Real> Default for ContinuationOptions<T> {
    fn default() -> Self {
        Self {
            min_clearance: T::lit(0.05),
            step_fraction: T::lit(0.5),
            exp_cap: T::lit(3.0),
            max_steps: 200_000,
            max_terms: 400,
        }
    }
}

impl<T: Real> ContinuationOptions<T> {
    /// Same options with every step halved.
    pub fn refined(mut self) -> Self {
        self.step_fraction *= T::lit(0.5);
        self.exp_cap *= T::lit(0.5);
        self
    }
}

/// Truncated asymptotic expansion about `z = ∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticSum<T: Real> {
    /// Exponential rate `λ`.
    pub lambda: Cx<T>,
    /// Power `ρ` multiplying `z^ρ`.
    pub rho: Cx<T>,
    /// `Σ aₙ z^{-n}` (normalized with `a₀ = 1`).
    pub series: Cx<T>,
    /// `y'/y` of the full solution `e^{λz} z^ρ Σ aₙ z^{-n}`.
    pub log_derivative: Cx<T>,
    /// Relative size of the smallest retained term.
    pub rel_err: T,
    pub terms_used: usize,
}

pub(crate) const DEFAULT_MAX_TERMS: usize = 20_000;

impl<T: Real> HeunOde<T> {
    pub fn new(a: [Cx<T>; 3], b: [Cx<T>; 3]) -> Self {
        Self { a, b }
    }

    pub fn is_finite(&self) -> bool {
        self.a.iter().chain(self.b.iter()).all(|z| is_finite(*z))
    }

    /// `a₂z² + a₁z + a₀`.
    pub fn p1(&self, z: Cx<T>) -> Cx<T> {
        (self.a[2] * z + self.a[1]) * z + self.a[0]
    }

    /// `b₂z² + b₁z + b₀`.
    pub fn p0(&self, z: Cx<T>) -> Cx<T> {
        (self.b[2] * z + self.b[1]) * z + self.b[0]
    }

    /// `y''` from the equation at an ordinary point.
    pub fn second_derivative(&self, z: Cx<T>, y: Cx<T>, yp: Cx<T>) -> Cx<T> {
        let lead = z * (z - real(T::one()));
        -(self.p1(z) * yp + self.p0(z) * y) / lead
    }

    /// `z(z-1)y'' + p₁y' + p₀y`, with the magnitude of the largest term.
    pub fn residual(&self, z: Cx<T>, y: Cx<T>, yp: Cx<T>, ypp: Cx<T>) -> (Cx<T>, T) {
        let t2 = z * (z - real(T::one())) * ypp;
        let t1 = self.p1(z) * yp;
        let t0 = self.p0(z) * y;
        let scale = t2.norm().max(t1.norm()).max(t0.norm());
        (t2 + t1 + t0, scale)
    }

    /// True when the exponent-0 Frobenius solution at `z = 0` does not exist,
    /// i.e. `a₀` is a non-negative integer.
    pub fn frobenius_degenerate(&self) -> bool {
        crate::heun::params::is_nonpositive_integer(-self.a[0])
    }

    /// `(k+1)(k - a₀)`, the leading coefficient of the recurrence.
    fn frobenius_lead(&self, k: usize) -> Cx<T> {
        (real(T::idx(k)) - self.a[0]) * T::idx(k + 1)
    }

    fn frobenius_mid(&self, k: usize) -> (Cx<T>, Cx<T>) {
        let kk = T::idx(k);
        let diag = real(kk * (kk - T::one())) + self.a[1] * kk + self.b[0];
        let sub = self.a[2] * (kk - T::one()) + self.b[1];
        (diag, sub)
    }

    /// The first `n` Frobenius coefficients with `c₀ = 1`.
    pub fn frobenius_coefficients(&self, n: usize) -> Result<Vec<Cx<T>>> {
        if self.frobenius_degenerate() {
            return Err(Error::DegenerateGamma(format!("{}", -self.a[0])));
        }
        let zero = real(T::zero());
        let mut c = Vec::with_capacity(n);
        if n == 0 {
            return Ok(c);
        }
        c.push(real(T::one()));
        for k in 0..n.saturating_sub(1) {
            let (diag, sub) = self.frobenius_mid(k);
            let cm1 = if k >= 1 { c[k - 1] } else { zero };
            let cm2 = if k >= 2 { c[k - 2] } else { zero };
            let next = (diag * c[k] + sub * cm1 + self.b[2] * cm2) / self.frobenius_lead(k);
            c.push(next);
        }
        Ok(c)
    }

    /// Sums the Frobenius series at `z`.
    ///
    /// Summation stops once `k²(|tₖ| + |t_{k-1}|) < tol·|S|` holds for three
    /// consecutive `k` (the `k²` weight makes the derivative sums converge as
    /// well); the error estimate is the geometric tail from the last ratio.
    pub fn sum_series(&self, z: Cx<T>, tol: T, max_terms: usize) -> Result<HeunEval<T>> {
        if self.frobenius_degenerate() {
            return Err(Error::DegenerateGamma(format!("{}", -self.a[0])));
        }
        let zero = real(T::zero());
        let one = real(T::one());
        if z == zero {
            let c = self.frobenius_coefficients(3)?;
            return Ok(HeunEval {
                value: one,
                derivative: c[1],
                second_derivative: c[2] * T::lit(2.0),
                err_estimate: T::zero(),
                terms_used: 1,
            });
        }
        let z2 = z * z;
        let z3 = z2 * z;
        // Scaled terms eₖ = cₖ zᵏ.
        let (mut em2, mut em1, mut e) = (zero, zero, one);
        let mut sum = one;
        let mut sum1 = zero; // Σ k eₖ = z S'
        let mut sum2 = zero; // Σ k(k-1) eₖ = z² S''
        let mut hits = 0;
        let mut ratios = [T::zero(); 3];
        for k in 0..max_terms {
            let (diag, sub) = self.frobenius_mid(k);
            let next =
                (diag * e * z + sub * em1 * z2 + self.b[2] * em2 * z3) / self.frobenius_lead(k);
            let k1 = T::idx(k + 1);
            sum += next;
            sum1 += next * k1;
            sum2 += next * (k1 * T::idx(k));
            let (an, ae) = (next.norm(), e.norm());
            if ae > T::zero() {
                ratios[k % 3] = an / ae;
            }
            em2 = em1;
            em1 = e;
            e = next;
            if !is_finite(sum) {
                return Err(Error::NoConvergence {
                    what: "Frobenius series (overflow)",
                    iterations: k,
                });
            }
            let weight = k1 * k1;
            let scale = sum.norm().max(T::min_positive_value());
            if (an + ae) * weight < tol * scale {
                hits += 1;
            } else {
                hits = 0;
            }
            if hits >= 3 {
                let rho = ratios
                    .iter()
                    .copied()
                    .fold(z.norm(), T::max)
                    .min(T::lit(0.999));
                let err = an * rho / (T::one() - rho);
                return Ok(HeunEval {
                    value: sum,
                    derivative: sum1 / z,
                    second_derivative: sum2 / z2,
                    err_estimate: err,
                    terms_used: k + 2,
                });
            }
        }
        Err(Error::NoConvergence {
            what: "Frobenius series",
            iterations: max_terms,
        })
    }

    /// One Taylor step from the ordinary point `z0` to `z0 + h`.
    ///
    /// Returns `None` when the re-expanded series does not settle within
    /// `max_terms` terms, which signals the caller to shorten the step.
    pub fn taylor_step(
        &self,
        z0: Cx<T>,
        y0: Cx<T>,
        yp0: Cx<T>,
        h: Cx<T>,
        tol: T,
        max_terms: usize,
    ) -> Option<HeunEval<T>> {
        let zero = real(T::zero());
        let one = real(T::one());
        let two = real(T::lit(2.0));
        // z(z-1) = w² + (2z₀-1)w + z₀(z₀-1)
        let s1 = z0 * two - one;
        let s0 = z0 * (z0 - one);
        let [a0, a1, a2] = self.a;
        let [b0, b1, b2] = self.b;
        let t2 = a2;
        let t1 = a2 * z0 * two + a1;
        let t0 = (a2 * z0 + a1) * z0 + a0;
        let u2 = b2;
        let u1 = b2 * z0 * two + b1;
        let u0 = (b2 * z0 + b1) * z0 + b0;
        let (h2, h3, h4) = (h * h, h * h * h, h * h * h * h);

        // Scaled coefficients eₖ = dₖ hᵏ.
        let mut e: Vec<Cx<T>> = Vec::with_capacity(64);
        e.push(y0);
        e.push(yp0 * h);
        let mut value = e[0] + e[1];
        let mut dh = e[1];
        let mut ddh2 = zero;
        let mut hits = 0;
        for k in 0..max_terms {
            let kk = T::idx(k);
            let ek1 = e[k + 1];
            let ek = e[k];
            let ekm1 = if k >= 1 { e[k - 1] } else { zero };
            let ekm2 = if k >= 2 { e[k - 2] } else { zero };
            let c1 = s1 * (kk * (kk + T::one())) + t0 * (kk + T::one());
            let c0 = real(kk * (kk - T::one())) + t1 * kk + u0;
            let cm1 = t2 * (kk - T::one()) + u1;
            let num = c1 * ek1 * h + c0 * ek * h2 + cm1 * ekm1 * h3 + u2 * ekm2 * h4;
            let next = -num / (s0 * ((kk + T::lit(2.0)) * (kk + T::one())));
            if !is_finite(next) {
                return None;
            }
            let k2 = kk + T::lit(2.0);
            value += next;
            dh += next * k2;
            ddh2 += next * (k2 * (k2 - T::one()));
            e.push(next);
            let scale = value.norm() + dh.norm();
            let weight = k2 * k2;
            if (next.norm() + ek1.norm()) * weight <= tol * scale {
                hits += 1;
            } else {
                hits = 0;
            }
            if hits >= 3 {
                let err = (next.norm() + ek1.norm()) * weight;
                return Some(HeunEval {
                    value,
                    derivative: dh / h,
                    second_derivative: ddh2 / h2,
                    err_estimate: err,
                    terms_used: k + 3,
                });
            }
        }
        None
    }

    /// Largest exponential growth rate of solutions near `∞`.
    pub fn growth_rate(&self) -> T {
        self.exponential_rates()
            .iter()
            .map(|l| l.norm())
            .fold(T::zero(), T::max)
    }

    /// The two roots of `λ² + a₂λ + b₂ = 0`; solutions behave like `e^{λz}`.
    pub fn exponential_rates(&self) -> [Cx<T>; 2] {
        let half = T::lit(0.5);
        let d = (self.a[2] * self.a[2] - self.b[2] * T::lit(4.0)).sqrt();
        [(-self.a[2] + d) * half, (-self.a[2] - d) * half]
    }

    /// Continues `(y, y')` from `start` through every waypoint of `path` by
    /// Taylor re-expansion about successive ordinary points.
    pub fn continue_along(
        &self,
        start: Cx<T>,
        y0: Cx<T>,
        yp0: Cx<T>,
        path: &[Cx<T>],
        tol: T,
        opts: &ContinuationOptions<T>,
    ) -> Result<HeunEval<T>> {
        let one = real(T::one());
        let mut prev = start;
        for &p in path {
            let d = segment_clearance(prev, p);
            if d < opts.min_clearance {
                return Err(Error::PathTooClose {
                    distance: d.to_f64().unwrap_or(f64::NAN),
                    min_clearance: opts.min_clearance.to_f64().unwrap_or(f64::NAN),
                });
            }
            prev = p;
        }

        let rate = self.growth_rate().max(T::lit(1e-6));
        let mut z = start;
        let mut y = y0;
        let mut yp = yp0;
        let mut ypp = self.second_derivative(z, y, yp);
        let mut rel_err = T::zero();
        let mut terms = 0usize;
        let mut steps = 0usize;
        for &target in path {
            loop {
                let remaining = target - z;
                let dist = remaining.norm();
                if dist <= T::epsilon() * (T::one() + target.norm()) {
                    z = target;
                    break;
                }
                let radius = z.norm().min((z - one).norm());
                let hmax = (opts.step_fraction * radius).min(opts.exp_cap / rate);
                let mut len = dist.min(hmax);
                let dir = remaining / dist;
                let mut attempt = 0;
                let out = loop {
                    let h = dir * len;
                    if let Some(out) = self.taylor_step(z, y, yp, h, tol, opts.max_terms) {
                        break out;
                    }
                    attempt += 1;
                    len *= T::lit(0.5);
                    if attempt > 40 {
                        return Err(Error::NoConvergence {
                            what: "Taylor continuation (step underflow)",
                            iterations: steps,
                        });
                    }
                };
                let scale = out.value.norm() + out.derivative.norm() * len;
                if scale > T::zero() {
                    rel_err += out.err_estimate / scale;
                }
                terms += out.terms_used;
                steps += 1;
                if steps > opts.max_steps {
                    return Err(Error::NoConvergence {
                        what: "Taylor continuation (too many steps)",
                        iterations: steps,
                    });
                }
                z = if len >= dist { target } else { z + dir * len };
                y = out.value;
                yp = out.derivative;
                ypp = out.second_derivative;
                if !is_finite(y) || !is_finite(yp) {
                    return Err(Error::NoConvergence {
                        what: "Taylor continuation (overflow)",
                        iterations: steps,
                    });
                }
            }
        }
        Ok(HeunEval {
            value: y,
            derivative: yp,
            second_derivative: ypp,
            err_estimate: rel_err * y.norm(),
            terms_used: terms,
        })
    }

    /// Formal expansion `e^{λz} z^ρ Σ aₙ z^{-n}` at large `|z|`, truncated at
    /// the smallest term. `lambda` must be one of [`Self::exponential_rates`].
    pub fn asymptotic(&self, lambda: Cx<T>, z: Cx<T>, tol: T) -> Result<AsymptoticSum<T>> {
        let zero = real(T::zero());
        let two = T::lit(2.0);
        let [a0, a1, a2] = self.a;
        let [b0, b1, b2] = self.b;
        let p12 = lambda * two + a2;
        if p12.norm() <= T::epsilon() * (T::one() + a2.norm()) {
            return Err(Error::EvaluationFailure(
                "coincident exponential rates at infinity".into(),
            ));
        }
        let p11 = a1 - lambda * two;
        let p10 = a0;
        let p01 = -lambda * lambda + lambda * a1 + b1;
        let p00 = lambda * a0 + b0;
        let rho = -p01 / p12;
        let _ = b2;
        let zinv = z.inv();

        let mut am1 = zero;
        let mut an = real(T::one());
        let mut sum = an;
        let mut dsum = zero; // Σ -n aₙ z^{-n-1}
        let mut zpow = real(T::one()); // z^{-n}
        let mut last = T::one();
        let mut terms = 1;
        let mut rel_err = T::zero();
        for n in 0..400usize {
            let nn = T::idx(n);
            let rn = rho - nn;
            let c0 = rn * (rn - T::one()) + p11 * rn + p00;
            let c1 = (rn + T::one()) * (p10 - rn);
            let next = (c0 * an + c1 * am1) / (p12 * T::idx(n + 1));
            let znext = zpow * zinv;
            let term = next * znext;
            let mag = term.norm();
            if n >= 2 && mag > last {
                rel_err = last / sum.norm();
                break;
            }
            sum += term;
            dsum += term * zinv * (-T::idx(n + 1));
            terms += 1;
            am1 = an;
            an = next;
            zpow = znext;
            last = mag;
            rel_err = mag / sum.norm();
            if mag <= tol * sum.norm() {
                break;
            }
        }
        Ok(AsymptoticSum {
            lambda,
            rho,
            series: sum,
            log_derivative: lambda + rho * zinv + dsum / sum,
            rel_err,
            terms_used: terms,
        })
    }
}

/// Distance from the segment `[p, q]` to the nearer of `0` and `1`.
pub fn segment_clearance<T: Real>(p: Cx<T>, q: Cx<T>) -> T {
    let d0 = point_segment_distance(real(T::zero()), p, q);
    let d1 = point_segment_distance(real(T::one()), p, q);
    d0.min(d1)
}

pub(crate) fn point_segment_distance<T: Real>(x: Cx<T>, p: Cx<T>, q: Cx<T>) -> T {
    let d = q - p;
    let len2 = d.norm_sqr();
    if len2 == T::zero() {
        return (x - p).norm();
    }
    let t = ((x - p) * d.conj()).re / len2;
    let t = t.max(T::zero()).min(T::one());
    (x - (p + d * t)).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c64 as cx;

    // Hypergeometric-like test equation with b₂ = a₂ = 0:
    // z(z-1)y'' + ((a+b+1)z - c)y' + ab·y = 0, solved by ₂F₁(a, b; c; z).
    fn hyp(a: f64, b: f64, c: f64) -> HeunOde<f64> {
        HeunOde::new(
            [cx(-c, 0.0), cx(a + b + 1.0, 0.0), cx(0.0, 0.0)],
            [cx(a * b, 0.0), cx(0.0, 0.0), cx(0.0, 0.0)],
        )
    }

    #[test]
    fn series_reproduces_elementary_hypergeometric() {
        // ₂F₁(1, 1; 2; z) = -ln(1-z)/z
        let ode = hyp(1.0, 1.0, 2.0);
        for &x in &[0.1, 0.5, -0.7, 0.9] {
            let z = cx(x, 0.0);
            let v = ode.sum_series(z, 1e-15, DEFAULT_MAX_TERMS).unwrap();
            let exact = -(cx(1.0, 0.0) - z).ln() / z;
            assert!((v.value - exact).norm() < 1e-13, "{x}: {v:?} vs {exact}");
        }
    }

    #[test]
    fn continuation_matches_closed_form_outside_disk() {
        // ₂F₁(1, 1; 2; z) continued to z = -3 along the negative axis.
        let ode = hyp(1.0, 1.0, 2.0);
        let start = cx(-0.5, 0.0);
        let s = ode.sum_series(start, 1e-15, DEFAULT_MAX_TERMS).unwrap();
        let target = cx(-3.0, 0.0);
        let out = ode
            .continue_along(start, s.value, s.derivative, &[target], 1e-15, &Default::default())
            .unwrap();
        let exact = -(cx(1.0, 0.0) - target).ln() / target;
        assert!((out.value - exact).norm() < 1e-13);
    }

    #[test]
    fn clearance_violation_is_reported() {
        let ode = hyp(1.0, 1.0, 2.0);
        let r = ode.continue_along(
            cx(0.5, 0.2),
            cx(1.0, 0.0),
            cx(0.0, 0.0),
            &[cx(1.5, -0.2)],
            1e-12,
            &Default::default(),
        );
        assert!(matches!(r, Err(Error::PathTooClose { .. })));
    }

    #[test]
    fn asymptotic_expansion_of_exponential_solution() {
        // y = e^{-z}: z(z-1)y'' + (z² - z)y' = 0 with a = [0, -1, 1], b = 0.
        let ode = HeunOde::new(
            [cx(0.0, 0.0), cx(-1.0, 0.0), cx(1.0, 0.0)],
            [cx(0.0, 0.0); 3],
        );
        let rates = ode.exponential_rates();
        let lam = if rates[0].norm() > 0.5 { rates[0] } else { rates[1] };
        let s = ode.asymptotic(lam, cx(20.0, 5.0), 1e-15).unwrap();
        assert!((s.log_derivative + cx(1.0, 0.0)).norm() < 1e-13);
    }
}
