//! Independent reference values from direct numerical integration.
//!
//! Nothing here uses the Heun machinery: local behavior at singular points
//! comes from a separate Frobenius routine and the equations are integrated
//! with an embedded Runge–Kutta scheme, so agreement with the Heun pipeline
//! is genuine evidence.

pub mod angular;
pub mod frobenius;
pub mod radial;
pub mod rk;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use angular::{angular_eigenvalue, angular_eigenvalue_from, angular_wronskian, AngularOracleOptions};
pub use radial::{
    eikonal_guess, schwarzschild_mismatch, schwarzschild_qnm, schwarzschild_qnm_with, RadialOracleOptions,
};

/// Complex secant iteration; stops when the update falls below `tol·(1 + |x|)`.
pub(crate) fn secant<F>(f: F, mut x0: Complex64, mut x1: Complex64, tol: f64, max_iter: usize) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let mut f0 = f(x0)?;
    let mut f1 = f(x1)?;
    for _ in 0..max_iter {
        if f1.norm() == 0.0 {
            return Ok(x1);
        }
        let denom = f1 - f0;
        if denom.norm() == 0.0 {
            break;
        }
        let mut step = f1 * (x1 - x0) / denom;
        // Keep wild steps from leaving the region of interest.
        let cap = 0.1 * (1.0 + x1.norm());
        if step.norm() > cap {
            step *= cap / step.norm();
        }
        x0 = x1;
        f0 = f1;
        x1 -= step;
        f1 = f(x1)?;
        if step.norm() <= tol * (1.0 + x1.norm()) {
            return Ok(x1);
        }
    }
    Err(Error::NoConvergence {
        what: "oracle secant iteration",
        iterations: max_iter,
    })
}
