//! Classification of singular points of `P y'' + Q y' + R y = 0` with
//! polynomial coefficients.
//!
//! A point `x₀` is a regular singularity when `Q/P` has at most a simple pole
//! and `R/P` at most a double pole there; otherwise it is irregular. The rank
//! of an irregular point is `⌈max(k_Q - 1, k_R/2 - 1)⌉`, where `k_Q` and `k_R`
//! are the pole orders. Infinity is examined through `x = 1/z`.

use crate::heun::params::{CanonicalHeunParams, GeneralHeunParams};
use crate::scalar::{real, Cx, Real};

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Location<T: Real> {
    Finite(Cx<T>),
    Infinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularityKind {
    Regular,
    Irregular { rank: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularPoint<T: Real> {
    pub location: Location<T>,
    pub kind: SingularityKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularityReport<T: Real> {
    pub points: Vec<SingularPoint<T>>,
}

impl<T: Real> SingularityReport<T> {
    /// Kind of the singular point nearest to `z`, if one lies within `1e-9`.
    pub fn at(&self, z: Cx<T>) -> Option<SingularityKind> {
        self.points.iter().find_map(|p| match p.location {
            Location::Finite(w) if (w - z).norm() <= T::lit(1e-9) => Some(p.kind),
            _ => None,
        })
    }

    pub fn at_infinity(&self) -> Option<SingularityKind> {
        self.points
            .iter()
            .find(|p| p.location == Location::Infinity)
            .map(|p| p.kind)
    }
}

/// `P y'' + Q y' + R y = 0` with `P = lead · Π (z - rootᵢ)` and `Q`, `R`
/// given by ascending coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialOde<T: Real> {
    pub p_lead: Cx<T>,
    pub p_roots: Vec<Cx<T>>,
    pub q: Vec<Cx<T>>,
    pub r: Vec<Cx<T>>,
}

/// Which family [`classify_singularities`] receives.
#[derive(Debug, Clone, Copy)]
pub enum HeunFamily<'a, T: Real> {
    General(&'a GeneralHeunParams<T>),
    Confluent(&'a CanonicalHeunParams<T>),
}

fn trim<T: Real>(c: &[Cx<T>]) -> Vec<Cx<T>> {
    let scale = c.iter().map(|z| z.norm()).fold(T::zero(), T::max);
    let tiny = scale * T::epsilon() * T::lit(16.0);
    let mut v = c.to_vec();
    while v.last().is_some_and(|z| z.norm() <= tiny) {
        v.pop();
    }
    v
}

fn mul<T: Real>(a: &[Cx<T>], b: &[Cx<T>]) -> Vec<Cx<T>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![real(T::zero()); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += *x * *y;
        }
    }
    out
}

fn add<T: Real>(a: &[Cx<T>], b: &[Cx<T>]) -> Vec<Cx<T>> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            a.get(i).copied().unwrap_or(real(T::zero())) + b.get(i).copied().unwrap_or(real(T::zero()))
        })
        .collect()
}

fn scale<T: Real>(a: &[Cx<T>], s: Cx<T>) -> Vec<Cx<T>> {
    a.iter().map(|x| *x * s).collect()
}

fn linear<T: Real>(root: Cx<T>) -> Vec<Cx<T>> {
    vec![-root, real(T::one())]
}

/// Multiplicity of `x₀` as a root of `c`, by repeated synthetic division.
fn root_multiplicity<T: Real>(c: &[Cx<T>], x0: Cx<T>) -> usize {
    let mut poly = trim(c);
    let mut mult = 0;
    while poly.len() > 1 {
        let size = poly.iter().map(|z| z.norm()).fold(T::zero(), T::max);
        let radius = T::one().max(x0.norm());
        // Horner division by (z - x₀).
        let n = poly.len();
        let mut quotient = vec![real(T::zero()); n - 1];
        let mut acc = real(T::zero());
        for k in (0..n).rev() {
            acc = acc * x0 + poly[k];
            if k > 0 {
                quotient[k - 1] = acc;
            }
        }
        let bound = size * radius.powi(n as i32) * T::lit(1e-12);
        if acc.norm() > bound {
            break;
        }
        mult += 1;
        poly = trim(&quotient);
    }
    mult
}

fn kind_from_orders(k_q: i64, k_r: i64) -> Option<SingularityKind> {
    if k_q <= 0 && k_r <= 0 {
        return None;
    }
    if k_q <= 1 && k_r <= 2 {
        return Some(SingularityKind::Regular);
    }
    // ⌈max(k_Q - 1, k_R/2 - 1)⌉ computed in halves.
    let twice = (2 * (k_q - 1)).max(k_r - 2);
    let rank = ((twice + 1) / 2).max(1) as u32;
    Some(SingularityKind::Irregular { rank })
}

/// Classifies every finite singular point and the point at infinity.
pub fn classify_polynomial_ode<T: Real>(ode: &PolynomialOde<T>) -> SingularityReport<T> {
    let q = trim(&ode.q);
    let r = trim(&ode.r);
    let mut points = Vec::new();

    let mut distinct: Vec<(Cx<T>, usize)> = Vec::new();
    for &root in &ode.p_roots {
        match distinct
            .iter_mut()
            .find(|(x, _)| (*x - root).norm() <= T::lit(1e-12) * (T::one() + root.norm()))
        {
            Some(entry) => entry.1 += 1,
            None => distinct.push((root, 1)),
        }
    }
    for (x0, mult_p) in distinct {
        let order = |c: &[Cx<T>]| {
            if c.is_empty() {
                0
            } else {
                mult_p as i64 - root_multiplicity(c, x0) as i64
            }
        };
        if let Some(kind) = kind_from_orders(order(&q), order(&r)) {
            points.push(SingularPoint {
                location: Location::Finite(x0),
                kind,
            });
        }
    }

    // At infinity: ỹ'' + (2/x - p(1/x)/x²) ỹ' + q(1/x)/x⁴ ỹ = 0.
    let dp = ode.p_roots.len() as i64;
    let k_q = if q.is_empty() {
        1
    } else {
        let dq = q.len() as i64 - 1;
        let excess = dq - dp;
        if excess >= 0 {
            excess + 2
        } else if excess == -1 {
            let ratio = q[q.len() - 1] / ode.p_lead;
            if (ratio - real(T::lit(2.0))).norm() <= T::lit(1e-12) {
                0
            } else {
                1
            }
        } else {
            1
        }
    };
    let k_r = if r.is_empty() {
        0
    } else {
        (r.len() as i64 - 1) - dp + 4
    };
    if let Some(kind) = kind_from_orders(k_q, k_r) {
        points.push(SingularPoint {
            location: Location::Infinity,
            kind,
        });
    }
    SingularityReport { points }
}

impl<T: Real> PolynomialOde<T> {
    /// General Heun equation multiplied by `z(z-1)(z-a)`.
    pub fn general_heun(p: &GeneralHeunParams<T>) -> Self {
        let zero = real(T::zero());
        let one = real(T::one());
        let z = vec![zero, one];
        let zm1 = linear(one);
        let zma = linear(p.a_sing);
        let q = add(
            &add(
                &scale(&mul(&zm1, &zma), p.gamma),
                &scale(&mul(&z, &zma), p.delta),
            ),
            &scale(&mul(&z, &zm1), p.epsilon),
        );
        let r = vec![-p.q, p.alpha * p.beta];
        Self {
            p_lead: one,
            p_roots: vec![zero, one, p.a_sing],
            q,
            r,
        }
    }

    /// Canonical confluent Heun equation multiplied by `z(z-1)`.
    pub fn confluent_heun(p: &CanonicalHeunParams<T>) -> Self {
        let ode = p.ode();
        Self {
            p_lead: real(T::one()),
            p_roots: vec![real(T::zero()), real(T::one())],
            q: ode.a.to_vec(),
            r: ode.b.to_vec(),
        }
    }

    /// Gauss hypergeometric equation `z(1-z)y'' + [c - (a+b+1)z]y' - ab·y = 0`.
    pub fn hypergeometric(a: Cx<T>, b: Cx<T>, c: Cx<T>) -> Self {
        let one = real(T::one());
        Self {
            p_lead: -one,
            p_roots: vec![real(T::zero()), one],
            q: vec![c, -(a + b + one)],
            r: vec![-(a * b)],
        }
    }
}

/// Classifies the singular points of the general or confluent Heun equation.
pub fn classify_singularities<T: Real>(family: HeunFamily<'_, T>) -> SingularityReport<T> {
    match family {
        HeunFamily::General(p) => classify_polynomial_ode(&PolynomialOde::general_heun(p)),
        HeunFamily::Confluent(p) => classify_polynomial_ode(&PolynomialOde::confluent_heun(p)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c64 as cx;

    #[test]
    fn general_heun_has_four_regular_points() {
        let p = GeneralHeunParams::new(
            cx(3.0, 0.0),
            cx(0.3, 0.0),
            cx(0.7, 0.0),
            cx(1.1, 0.0),
            cx(0.4, 0.0),
            cx(0.6, 0.0),
        )
        .unwrap();
        let rep = classify_singularities(HeunFamily::General(&p));
        assert_eq!(rep.points.len(), 4);
        for z in [0.0, 1.0, 3.0] {
            assert_eq!(rep.at(cx(z, 0.0)), Some(SingularityKind::Regular));
        }
        assert_eq!(rep.at_infinity(), Some(SingularityKind::Regular));
    }

    #[test]
    fn confluent_heun_has_rank_one_irregular_infinity() {
        let p = CanonicalHeunParams::new(
            cx(0.5, 0.0),
            cx(1.5, 0.0),
            cx(2.0, 0.0),
            cx(0.3, 0.0),
            cx(0.2, 0.0),
        );
        let rep = classify_singularities(HeunFamily::Confluent(&p));
        assert_eq!(rep.points.len(), 3);
        assert_eq!(rep.at(cx(0.0, 0.0)), Some(SingularityKind::Regular));
        assert_eq!(rep.at(cx(1.0, 0.0)), Some(SingularityKind::Regular));
        assert_eq!(rep.at_infinity(), Some(SingularityKind::Irregular { rank: 1 }));
    }

    #[test]
    fn hypergeometric_has_three_regular_points() {
        let ode = PolynomialOde::hypergeometric(cx(0.3, 0.0), cx(1.7, 0.0), cx(0.5, 0.0));
        let rep = classify_polynomial_ode(&ode);
        assert_eq!(rep.points.len(), 3);
        assert!(rep.points.iter().all(|p| p.kind == SingularityKind::Regular));
    }

    #[test]
    fn double_confluence_raises_rank() {
        // z²y'' + y' = 0: Q/P = 1/z² is a double pole at 0, rank 1.
        let ode = PolynomialOde {
            p_lead: cx(1.0, 0.0),
            p_roots: vec![cx(0.0, 0.0), cx(0.0, 0.0)],
            q: vec![cx(1.0, 0.0)],
            r: vec![],
        };
        let rep = classify_polynomial_ode(&ode);
        assert_eq!(rep.at(cx(0.0, 0.0)), Some(SingularityKind::Irregular { rank: 1 }));
    }
}
