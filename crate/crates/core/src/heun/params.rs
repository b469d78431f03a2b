//! Parameter conventions for the confluent Heun equation.
//!
//! The canonical form used throughout the crate is
//!
//! ```text
//! H'' - (ε - δ/(z-1) - γ/z) H' - ((αβ - q z)/(z-1) + q/z) H = 0,   H(0) = 1
//! ```
//!
//! and the Maple form `HeunC(α, β, γ, δ, η, z)` solves
//!
//! ```text
//! y'' + (α + (β+1)/z + (γ+1)/(z-1)) y' + (μ/z + ν/(z-1)) y = 0
//! μ = (α - β - γ + αβ - βγ)/2 - η
//! ν = (α + β + γ + αγ + βγ)/2 + δ + η
//! ```
//!
//! The two are related by `H(z) = exp(κ z) · HeunC(z)` with `κ = (ε + α)/2`
//! where `α = -(ε² - 4q)^{1/2}`.

use crate::error::{Error, Result};
use crate::heun::ode::HeunOde;
use crate::scalar::{is_finite, real, sqrt, Cx, Real};

/// Parameters of the canonical confluent Heun equation.
///
/// Only the product `αβ` enters the equation, so it is stored as one field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalHeunParams<T: Real> {
    pub gamma: Cx<T>,
    pub delta: Cx<T>,
    pub epsilon: Cx<T>,
    pub alpha_beta: Cx<T>,
    pub q: Cx<T>,
}

impl<T: Real> CanonicalHeunParams<T> {
    pub fn new(gamma: Cx<T>, delta: Cx<T>, epsilon: Cx<T>, alpha_beta: Cx<T>, q: Cx<T>) -> Self {
        Self {
            gamma,
            delta,
            epsilon,
            alpha_beta,
            q,
        }
    }

    /// Builds the parameters from separate `α` and `β`.
    pub fn from_factors(
        gamma: Cx<T>,
        delta: Cx<T>,
        epsilon: Cx<T>,
        alpha: Cx<T>,
        beta: Cx<T>,
        q: Cx<T>,
    ) -> Self {
        Self::new(gamma, delta, epsilon, alpha * beta, q)
    }

    pub fn is_finite(&self) -> bool {
        [self.gamma, self.delta, self.epsilon, self.alpha_beta, self.q]
            .iter()
            .all(|z| is_finite(*z))
    }

    /// True when `γ` is zero or a negative integer.
    pub fn gamma_degenerate(&self) -> bool {
        is_nonpositive_integer(self.gamma)
    }

    /// The equation multiplied through by `z(z-1)`.
    pub fn ode(&self) -> HeunOde<T> {
        let Self {
            gamma,
            delta,
            epsilon,
            alpha_beta,
            q,
        } = *self;
        HeunOde::new(
            [-gamma, epsilon + gamma + delta, -epsilon],
            [q, -(alpha_beta + q), q],
        )
    }
}

/// Parameters of Maple's `HeunC(α, β, γ, δ, η, z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapleHeunParams<T: Real> {
    pub alpha: Cx<T>,
    pub beta: Cx<T>,
    pub gamma: Cx<T>,
    pub delta: Cx<T>,
    pub eta: Cx<T>,
}

impl<T: Real> MapleHeunParams<T> {
    pub fn new(alpha: Cx<T>, beta: Cx<T>, gamma: Cx<T>, delta: Cx<T>, eta: Cx<T>) -> Self {
        Self {
            alpha,
            beta,
            gamma,
            delta,
            eta,
        }
    }

    pub fn is_finite(&self) -> bool {
        [self.alpha, self.beta, self.gamma, self.delta, self.eta]
            .iter()
            .all(|z| is_finite(*z))
    }

    /// Coefficient of `y/z` in the normalized equation.
    pub fn mu(&self) -> Cx<T> {
        let half = T::lit(0.5);
        let Self {
            alpha,
            beta,
            gamma,
            eta,
            ..
        } = *self;
        (alpha - beta - gamma + alpha * beta - beta * gamma) * half - eta
    }

    /// Coefficient of `y/(z-1)` in the normalized equation.
    pub fn nu(&self) -> Cx<T> {
        let half = T::lit(0.5);
        let Self {
            alpha,
            beta,
            gamma,
            delta,
            eta,
        } = *self;
        (alpha + beta + gamma + alpha * gamma + beta * gamma) * half + delta + eta
    }

    /// Recovers `(δ, η)` from the potential coefficients `(μ, ν)`.
    pub fn from_potential(alpha: Cx<T>, beta: Cx<T>, gamma: Cx<T>, mu: Cx<T>, nu: Cx<T>) -> Self {
        let half = T::lit(0.5);
        let one = real(T::one());
        let delta = mu + nu - alpha * (one + (beta + gamma) * half);
        let eta = (alpha - beta - gamma + alpha * beta - beta * gamma) * half - mu;
        Self::new(alpha, beta, gamma, delta, eta)
    }

    /// The equation multiplied through by `z(z-1)`.
    pub fn ode(&self) -> HeunOde<T> {
        let one = real(T::one());
        let two = real(T::lit(2.0));
        let mu = self.mu();
        let nu = self.nu();
        HeunOde::new(
            [
                -(self.beta + one),
                -self.alpha + self.beta + self.gamma + two,
                self.alpha,
            ],
            [-mu, mu + nu, Cx::new(T::zero(), T::zero())],
        )
    }
}

/// Which square root to take when inverting the Maple map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SqrtBranch {
    #[default]
    Principal,
    Negated,
}

/// Forward map from the canonical equation to Maple's convention.
///
/// `α = -(ε² - 4q)^{1/2}` on the principal branch, `β = γ₀ - 1`,
/// `γ = δ₀ - 1`, `δ = -α₀β₀ + ε₀(γ₀ + δ₀)/2`,
/// `η = q₀ + 1/2 - γ₀(δ₀ + ε₀)/2`.
pub fn canonical_to_maple<T: Real>(p: &CanonicalHeunParams<T>) -> Result<MapleHeunParams<T>> {
    if !p.is_finite() {
        return Err(Error::NonFinite("canonical Heun parameters"));
    }
    let half = T::lit(0.5);
    let one = real(T::one());
    let four = T::lit(4.0);
    let alpha = -sqrt(p.epsilon * p.epsilon - p.q * four);
    let beta = p.gamma - one;
    let gamma = p.delta - one;
    let delta = -p.alpha_beta + p.delta * p.epsilon * half + p.epsilon * p.gamma * half;
    let eta = -(p.delta * p.gamma) * half - p.epsilon * p.gamma * half + p.q + half;
    Ok(MapleHeunParams::new(alpha, beta, gamma, delta, eta))
}

/// Partial inverse of [`canonical_to_maple`].
///
/// `γ₀` and `δ₀` follow linearly; `ε₀` solves the quadratic
/// `ε₀² - 2γ₀ε₀ - (α² + 4η - 2 + 2γ₀δ₀) = 0`, whose two roots are
/// `γ₀ ± D^{1/2}` and are selected by `branch`. Only `α₀β₀` is recovered.
pub fn maple_to_canonical<T: Real>(
    p: &MapleHeunParams<T>,
    branch: SqrtBranch,
) -> Result<CanonicalHeunParams<T>> {
    if !p.is_finite() {
        return Err(Error::NonFinite("Maple Heun parameters"));
    }
    let half = T::lit(0.5);
    let one = real(T::one());
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let gamma0 = p.beta + one;
    let delta0 = p.gamma + one;
    let disc = gamma0 * gamma0 + p.alpha * p.alpha + p.eta * four - two + gamma0 * delta0 * two;
    let root = match branch {
        SqrtBranch::Principal => sqrt(disc),
        SqrtBranch::Negated => -sqrt(disc),
    };
    let epsilon0 = gamma0 + root;
    let q0 = p.eta - half + gamma0 * (delta0 + epsilon0) * half;
    let alpha_beta0 = epsilon0 * (gamma0 + delta0) * half - p.delta;
    let out = CanonicalHeunParams::new(gamma0, delta0, epsilon0, alpha_beta0, q0);
    if !out.is_finite() {
        return Err(Error::NonInvertible("non-finite canonical parameters"));
    }
    // The forward map fixes α = -sqrt(ε₀² - 4q₀); an α on the other sheet has no preimage.
    let alpha_back = -sqrt(epsilon0 * epsilon0 - q0 * four);
    if (alpha_back + p.alpha).norm() < (alpha_back - p.alpha).norm() {
        return Err(Error::NonInvertible(
            "alpha is not on the branch -(ε² - 4q)^{1/2}",
        ));
    }
    Ok(out)
}

/// `κ` with `H_canonical(z) = exp(κ z) · HeunC(z)`.
pub fn exponential_shift<T: Real>(p: &CanonicalHeunParams<T>) -> Result<Cx<T>> {
    let maple = canonical_to_maple(p)?;
    Ok((p.epsilon + maple.alpha) * T::lit(0.5))
}

/// Parameters of the general Heun equation with singularities `0, 1, a, ∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralHeunParams<T: Real> {
    pub a_sing: Cx<T>,
    pub q: Cx<T>,
    pub alpha: Cx<T>,
    pub beta: Cx<T>,
    pub gamma: Cx<T>,
    pub delta: Cx<T>,
    pub epsilon: Cx<T>,
}

impl<T: Real> GeneralHeunParams<T> {
    /// Builds the parameters with `ε = α + β - γ - δ + 1`.
    pub fn new(
        a_sing: Cx<T>,
        q: Cx<T>,
        alpha: Cx<T>,
        beta: Cx<T>,
        gamma: Cx<T>,
        delta: Cx<T>,
    ) -> Result<Self> {
        let epsilon = alpha + beta - gamma - delta + real(T::one());
        Self::with_epsilon(a_sing, q, alpha, beta, gamma, delta, epsilon)
    }

    /// Builds the parameters with an explicit `ε`, rejecting any violation of
    /// the Fuchs relation larger than `1e-13`.
    pub fn with_epsilon(
        a_sing: Cx<T>,
        q: Cx<T>,
        alpha: Cx<T>,
        beta: Cx<T>,
        gamma: Cx<T>,
        delta: Cx<T>,
        epsilon: Cx<T>,
    ) -> Result<Self> {
        let all = [a_sing, q, alpha, beta, gamma, delta, epsilon];
        if !all.iter().all(|z| is_finite(*z)) {
            return Err(Error::NonFinite("general Heun parameters"));
        }
        let one = real(T::one());
        if a_sing.norm() <= T::epsilon() || (a_sing - one).norm() <= T::epsilon() {
            return Err(Error::CoincidentSingularity);
        }
        let violation = (epsilon - (alpha + beta - gamma - delta + one)).norm();
        if violation > T::lit(1e-13).max(T::epsilon() * T::lit(4.0)) {
            return Err(Error::EpsilonRelation(violation.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self {
            a_sing,
            q,
            alpha,
            beta,
            gamma,
            delta,
            epsilon,
        })
    }
}

pub(crate) fn is_nonpositive_integer<T: Real>(z: Cx<T>) -> bool {
    let tiny = T::epsilon() * T::lit(64.0) * (T::one() + z.re.abs());
    z.im.abs() <= tiny && z.re <= tiny && (z.re - z.re.round()).abs() <= tiny
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c64 as cx;

    fn close(a: Cx<f64>, b: Cx<f64>, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn forward_map_small_integer_case() {
        let p = CanonicalHeunParams::new(
            cx(1.0, 0.0),
            cx(1.0, 0.0),
            cx(2.0, 0.0),
            cx(0.0, 0.0),
            cx(0.0, 0.0),
        );
        let m = canonical_to_maple(&p).unwrap();
        assert!(close(m.alpha, cx(-2.0, 0.0), 1e-15));
        assert!(close(m.beta, cx(0.0, 0.0), 1e-15));
        assert!(close(m.gamma, cx(0.0, 0.0), 1e-15));
        assert!(close(m.delta, cx(2.0, 0.0), 1e-15));
        assert!(close(m.eta, cx(-1.0, 0.0), 1e-15));
        // ε₀ - γ₀ = 1 lies on the principal branch.
        let back = maple_to_canonical(&m, SqrtBranch::Principal).unwrap();
        assert!(close(back.epsilon, p.epsilon, 1e-15));
        assert!(close(back.q, p.q, 1e-15));
        assert!(close(back.alpha_beta, p.alpha_beta, 1e-15));
    }

    #[test]
    fn all_zero_maple_parameters() {
        let p = CanonicalHeunParams::new(
            cx(1.0, 0.0),
            cx(1.0, 0.0),
            cx(0.0, 0.0),
            cx(0.0, 0.0),
            cx(0.0, 0.0),
        );
        let m = canonical_to_maple(&p).unwrap();
        for z in [m.alpha, m.beta, m.gamma, m.delta, m.eta] {
            assert!(close(z, cx(0.0, 0.0), 1e-15), "{m:?}");
        }
        // ε₀ - γ₀ = -1: the negated root recovers ε₀ = 0.
        let back = maple_to_canonical(&m, SqrtBranch::Negated).unwrap();
        assert!(close(back.epsilon, cx(0.0, 0.0), 1e-15));
        assert!(close(back.q, cx(0.0, 0.0), 1e-15));
        // The principal root gives the other preimage ε₀ = 2γ₀ - ε₀ = 2.
        let other = maple_to_canonical(&m, SqrtBranch::Principal).unwrap();
        assert!(close(other.epsilon, cx(2.0, 0.0), 1e-15));
    }

    #[test]
    fn eta_one_half_preimages() {
        let m = MapleHeunParams::new(
            cx(0.0, 0.0),
            cx(0.0, 0.0),
            cx(0.0, 0.0),
            cx(0.0, 0.0),
            cx(0.5, 0.0),
        );
        // D = 3, so ε₀ = 1 ± √3 and q₀ = 1 ± √3/2; both keep ε₀² - 4q₀ = 0.
        let r3 = 3f64.sqrt();
        let c = maple_to_canonical(&m, SqrtBranch::Principal).unwrap();
        assert!(close(c.gamma, cx(1.0, 0.0), 1e-15));
        assert!(close(c.delta, cx(1.0, 0.0), 1e-15));
        assert!(close(c.epsilon, cx(1.0 + r3, 0.0), 1e-14));
        assert!(close(c.q, cx(1.0 + r3 / 2.0, 0.0), 1e-14));
        for branch in [SqrtBranch::Principal, SqrtBranch::Negated] {
            let c = maple_to_canonical(&m, branch).unwrap();
            let fwd = canonical_to_maple(&c).unwrap();
            for (x, y) in [(fwd.alpha, m.alpha), (fwd.beta, m.beta), (fwd.gamma, m.gamma), (fwd.delta, m.delta), (fwd.eta, m.eta)] {
                assert!(close(x, y, 1e-7), "{fwd:?}");
            }
        }
    }

    #[test]
    fn alpha_on_wrong_sheet_is_rejected() {
        let m = MapleHeunParams::new(
            cx(2.0, 0.5),
            cx(0.3, 0.0),
            cx(0.1, 0.0),
            cx(0.0, 0.0),
            cx(0.2, 0.0),
        );
        assert!(matches!(
            maple_to_canonical(&m, SqrtBranch::Principal),
            Err(Error::NonInvertible(_))
        ));
    }

    #[test]
    fn degenerate_gamma_detection() {
        let mk = |g: Cx<f64>| {
            CanonicalHeunParams::new(g, cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0))
        };
        assert!(mk(cx(0.0, 0.0)).gamma_degenerate());
        assert!(mk(cx(-3.0, 0.0)).gamma_degenerate());
        assert!(!mk(cx(-3.0, 1e-3)).gamma_degenerate());
        assert!(!mk(cx(2.0, 0.0)).gamma_degenerate());
        assert!(!mk(cx(-0.5, 0.0)).gamma_degenerate());
    }

    #[test]
    fn general_heun_enforces_fuchs_relation() {
        let (a, q) = (cx(3.0, 0.0), cx(0.2, 0.1));
        let (al, be, ga, de) = (cx(1.0, 0.0), cx(2.0, 0.0), cx(0.5, 0.0), cx(0.25, 0.0));
        let p = GeneralHeunParams::new(a, q, al, be, ga, de).unwrap();
        assert!(close(p.epsilon, cx(3.25, 0.0), 1e-15));
        assert!(GeneralHeunParams::with_epsilon(a, q, al, be, ga, de, cx(3.25 + 5e-14, 0.0)).is_ok());
        assert!(matches!(
            GeneralHeunParams::with_epsilon(a, q, al, be, ga, de, cx(3.25 + 1e-12, 0.0)),
            Err(Error::EpsilonRelation(_))
        ));
        assert!(matches!(
            GeneralHeunParams::new(cx(1.0, 0.0), q, al, be, ga, de),
            Err(Error::CoincidentSingularity)
        ));
    }
}
