//! Physical parameters of a Kerr perturbation problem.

use crate::error::{Error, Result};
use crate::scalar::{imag_unit, real, Cx, Real};

/// Black-hole and perturbation parameters in geometric units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConfig<T: Real> {
    pub mass: T,
    /// Rotation parameter, `0 ≤ a < M`.
    pub a: T,
    /// Spin weight.
    pub s: i32,
    pub l: i32,
    pub m: i32,
}

impl<T: Real> PhysicalConfig<T> {
    pub fn new(mass: T, a: T, s: i32, l: i32, m: i32) -> Result<Self> {
        let cfg = Self { mass, a, s, l, m };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Electromagnetic perturbation (`s = -1`) of a hole with `M = 1/2`.
    pub fn electromagnetic(a: T, l: i32, m: i32) -> Result<Self> {
        Self::new(T::lit(0.5), a, -1, l, m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mass > T::zero()) || !self.mass.is_finite() {
            return Err(Error::InvalidConfig(format!("mass must be positive, got {}", self.mass)));
        }
        if !(self.a >= T::zero()) || !self.a.is_finite() {
            return Err(Error::InvalidConfig(format!("rotation must be non-negative, got {}", self.a)));
        }
        if self.a >= self.mass {
            return Err(Error::ExtremalNotSupported);
        }
        if self.l < self.s.abs() {
            return Err(Error::InvalidConfig(format!("l = {} is below |s| = {}", self.l, self.s.abs())));
        }
        if self.m.abs() > self.l {
            return Err(Error::InvalidConfig(format!("|m| = {} exceeds l = {}", self.m.abs(), self.l)));
        }
        Ok(())
    }

    /// Same configuration at another rotation.
    pub fn with_a(&self, a: T) -> Result<Self> {
        Self::new(self.mass, a, self.s, self.l, self.m)
    }

    pub fn s_real(&self) -> T {
        T::int(self.s as i64)
    }

    pub fn m_real(&self) -> T {
        T::int(self.m as i64)
    }

    /// Largest rotation reached by continuation, `0.9999 M`.
    pub fn a_max(&self) -> T {
        self.mass * T::lit(0.9999)
    }
}

/// Outer and inner horizon radii.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Horizons<T: Real> {
    pub r_plus: T,
    pub r_minus: T,
}

/// `r± = M ± (M² - a²)^{1/2}`.
pub fn horizons<T: Real>(cfg: &PhysicalConfig<T>) -> Result<Horizons<T>> {
    if cfg.a >= cfg.mass {
        return Err(Error::ExtremalNotSupported);
    }
    let root = (cfg.mass * cfg.mass - cfg.a * cfg.a).sqrt();
    // r₋ via r₊r₋ = a² avoids cancellation at small a.
    let r_plus = cfg.mass + root;
    Ok(Horizons {
        r_plus,
        r_minus: cfg.a * cfg.a / r_plus,
    })
}

/// Unknowns of the spectral problem: frequency and separation constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralUnknowns<T: Real> {
    pub omega: Cx<T>,
    pub e: Cx<T>,
}

impl<T: Real> SpectralUnknowns<T> {
    pub fn new(omega: Cx<T>, e: Cx<T>) -> Self {
        Self { omega, e }
    }
}

/// `K`, `λ` and `Δ` of the radial equation at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreCoefficients<T: Real> {
    pub k: Cx<T>,
    pub lambda: Cx<T>,
    pub delta: Cx<T>,
}

/// `K = -ω(r² + a²) - ma`, `λ = E - s(s+1) + a²ω² + 2amω`, `Δ = (r - r₋)(r - r₊)`.
pub fn tre_coefficients<T: Real>(
    cfg: &PhysicalConfig<T>,
    unk: &SpectralUnknowns<T>,
    r: Cx<T>,
) -> Result<TreCoefficients<T>> {
    let h = horizons(cfg)?;
    Ok(TreCoefficients {
        k: kerr_k(cfg, unk.omega, r),
        lambda: kerr_lambda(cfg, unk),
        delta: (r - real(h.r_minus)) * (r - real(h.r_plus)),
    })
}

pub(crate) fn kerr_k<T: Real>(cfg: &PhysicalConfig<T>, omega: Cx<T>, r: Cx<T>) -> Cx<T> {
    let a = cfg.a;
    -omega * (r * r + real(a * a)) - real(cfg.m_real() * a)
}

pub(crate) fn kerr_lambda<T: Real>(cfg: &PhysicalConfig<T>, unk: &SpectralUnknowns<T>) -> Cx<T> {
    let s = cfg.s_real();
    let a = cfg.a;
    let w = unk.omega;
    unk.e - real(s * (s + T::one())) + w * w * (a * a) + w * (T::lit(2.0) * a * cfg.m_real())
}

/// `-4isωr`, the last potential term of the radial equation.
pub(crate) fn spin_frequency_term<T: Real>(cfg: &PhysicalConfig<T>, omega: Cx<T>, r: Cx<T>) -> Cx<T> {
    -imag_unit::<T>() * omega * r * (T::lit(4.0) * cfg.s_real())
}
