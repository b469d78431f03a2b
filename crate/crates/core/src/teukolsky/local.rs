//! Local solutions of the Teukolsky equations assembled from a Heun factor.
//!
//! A local solution has the form
//!
//! ```text
//! f(x) = Π (oᵢ (x - bᵢ))^{pᵢ} · e^{κ x} · HeunC(α, β, γ, δ, η; z(x)),   z = (x - x₀)/ℓ
//! ```
//!
//! where `x` is the physical variable (`u = cos θ` or `r`).

use crate::error::Result;
use crate::heun::{eval_maple_auto, ContinuationOptions, HeunEval, MapleHeunParams};
use crate::scalar::{real, Cx, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Equation {
    Angular,
    Radial,
}

/// Singular point a local solution is anchored at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Anchor {
    /// `u = +1` (`θ = 0`).
    NorthPole,
    /// `u = -1` (`θ = π`).
    SouthPole,
    /// The outer horizon `r = r₊`.
    OuterHorizon,
}

/// Affine map `z = (x - origin)/scale` from the physical variable to the Heun variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariableMap<T: Real> {
    pub origin: Cx<T>,
    pub scale: Cx<T>,
}

impl<T: Real> VariableMap<T> {
    pub fn z(&self, x: Cx<T>) -> Cx<T> {
        (x - self.origin) / self.scale
    }

    pub fn x(&self, z: Cx<T>) -> Cx<T> {
        self.origin + z * self.scale
    }

    /// `dz/dx`.
    pub fn jacobian(&self) -> Cx<T> {
        self.scale.inv()
    }
}

/// One factor `(orientation · (x - base))^exponent` of the prefactor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrefactorTerm<T: Real> {
    pub base: Cx<T>,
    /// `±1`, chosen so the factor's argument is positive on the physical domain.
    pub orientation: T,
    pub exponent: Cx<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalSolution<T: Real> {
    pub equation: Equation,
    pub anchor: Anchor,
    pub heun_params: MapleHeunParams<T>,
    pub prefactor_exponents: Vec<PrefactorTerm<T>>,
    /// Rate `κ` of the exponential factor `e^{κx}`.
    pub exp_rate: Cx<T>,
    pub variable_map: VariableMap<T>,
}

/// Value and physical-variable derivatives of a [`LocalSolution`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalEval<T: Real> {
    pub value: Cx<T>,
    pub derivative: Cx<T>,
    pub second_derivative: Cx<T>,
    pub heun: HeunEval<T>,
}

impl<T: Real> LocalSolution<T> {
    pub fn prefactor(&self, x: Cx<T>) -> Cx<T> {
        let mut log = self.exp_rate * x;
        for t in &self.prefactor_exponents {
            log += t.exponent * ((x - t.base) * t.orientation).ln();
        }
        log.exp()
    }

    /// `d/dx log(prefactor)`.
    pub fn log_prefactor_derivative(&self, x: Cx<T>) -> Cx<T> {
        self.prefactor_exponents
            .iter()
            .fold(self.exp_rate, |acc, t| acc + t.exponent / (x - t.base))
    }

    fn log_prefactor_second(&self, x: Cx<T>) -> Cx<T> {
        self.prefactor_exponents
            .iter()
            .fold(real(T::zero()), |acc, t| acc - t.exponent / ((x - t.base) * (x - t.base)))
    }

    /// Evaluates the Heun factor at the Heun variable `z`.
    pub fn heun_at(&self, z: Cx<T>, tol: T, opts: &ContinuationOptions<T>) -> Result<HeunEval<T>> {
        eval_maple_auto(&self.heun_params, z, tol, opts)
    }

    /// Evaluates the full solution at the physical point `x`.
    pub fn evaluate(&self, x: Cx<T>, tol: T, opts: &ContinuationOptions<T>) -> Result<LocalEval<T>> {
        let z = self.variable_map.z(x);
        let h = self.heun_at(z, tol, opts)?;
        Ok(self.assemble(x, h))
    }

    /// Combines a Heun evaluation at `z(x)` with the prefactor.
    pub fn assemble(&self, x: Cx<T>, h: HeunEval<T>) -> LocalEval<T> {
        let p = self.prefactor(x);
        let l1 = self.log_prefactor_derivative(x);
        let l2 = self.log_prefactor_second(x) + l1 * l1;
        let j = self.variable_map.jacobian();
        let y1 = h.derivative * j;
        let y2 = h.second_derivative * j * j;
        LocalEval {
            value: p * h.value,
            derivative: p * (l1 * h.value + y1),
            second_derivative: p * (l2 * h.value + l1 * y1 * T::lit(2.0) + y2),
            heun: h,
        }
    }
}

/// Radical-inverse (Halton) sequence in base `b`, index starting at 1.
pub fn halton<T: Real>(mut index: usize, base: usize) -> T {
    let mut f = T::one();
    let mut r = T::zero();
    let b = T::idx(base);
    while index > 0 {
        f /= b;
        r += f * T::idx(index % base);
        index /= base;
    }
    r
}

/// Absolute residual and the size of the largest term, relative check helper.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualSample<T: Real> {
    pub x: Cx<T>,
    pub residual: Cx<T>,
    pub scale: T,
}

impl<T: Real> ResidualSample<T> {
    pub fn relative(&self) -> T {
        if self.scale > T::zero() {
            self.residual.norm() / self.scale
        } else {
            self.residual.norm()
        }
    }
}
