//! Embedded Dormand–Prince 5(4) integration of complex second-order systems
//! along straight segments of the complex plane.

use num_complex::Complex64;

use crate::error::{Error, Result};

type State = [Complex64; 2];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RkOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for RkOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-12,
            atol: 1e-300,
            max_steps: 1_000_000,
        }
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates `dy/dx = f(x, y)` from `x0` to `x1` along the straight segment
/// between them; the real parameter `t ∈ [0, 1]` carries the step control.
pub fn integrate_segment<F>(f: F, x0: Complex64, x1: Complex64, y0: State, opts: &RkOptions) -> Result<State>
where
    F: Fn(Complex64, &State) -> State,
{
    let span = x1 - x0;
    if span.norm() == 0.0 {
        return Ok(y0);
    }
    let g = |t: f64, y: &State| -> State {
        let d = f(x0 + span * t, y);
        [d[0] * span, d[1] * span]
    };
    let mut t = 0.0;
    let mut y = y0;
    let mut h = 1e-3;
    let mut k1 = g(t, &y);
    let mut steps = 0;
    while t < 1.0 {
        if steps > opts.max_steps {
            return Err(Error::NoConvergence {
                what: "oracle integrator",
                iterations: steps,
            });
        }
        steps += 1;
        if t + h > 1.0 {
            h = 1.0 - t;
        }
        let mut k = [[Complex64::new(0.0, 0.0); 2]; 7];
        k[0] = k1;
        for i in 1..7 {
            let mut yi = y;
            for (j, kj) in k.iter().enumerate().take(i) {
                let a = A[i][j] * h;
                if a != 0.0 {
                    yi[0] += kj[0] * a;
                    yi[1] += kj[1] * a;
                }
            }
            k[i] = g(t + C[i] * h, &yi);
        }
        let mut y5 = y;
        let mut err = 0.0f64;
        for c in 0..2 {
            let mut e = Complex64::new(0.0, 0.0);
            for i in 0..7 {
                y5[c] += k[i][c] * (B5[i] * h);
                e += k[i][c] * ((B5[i] - B4[i]) * h);
            }
            let sc = opts.atol + opts.rtol * y[c].norm().max(y5[c].norm());
            err = err.max(e.norm() / sc);
        }
        if !err.is_finite() {
            h *= 0.1;
            if h < 1e-16 {
                return Err(Error::NoConvergence {
                    what: "oracle integrator (non-finite state)",
                    iterations: steps,
                });
            }
            continue;
        }
        if err <= 1.0 {
            t += h;
            y = y5;
            k1 = k[6];
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h < 1e-15 {
            return Err(Error::NoConvergence {
                what: "oracle integrator (step underflow)",
                iterations: steps,
            });
        }
    }
    Ok(y)
}

/// Integrates through a polyline of waypoints.
pub fn integrate_path<F>(f: F, path: &[Complex64], y0: State, opts: &RkOptions) -> Result<State>
where
    F: Fn(Complex64, &State) -> State,
{
    let mut y = y0;
    for w in path.windows(2) {
        y = integrate_segment(&f, w[0], w[1], y, opts)?;
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_along_complex_segment() {
        // y'' = -y, y(0) = 0, y'(0) = 1 → sin x.
        let f = |_x: Complex64, y: &State| [y[1], -y[0]];
        let x1 = Complex64::new(2.0, 1.5);
        let y = integrate_segment(f, Complex64::new(0.0, 0.0), x1, [0.0.into(), 1.0.into()], &RkOptions::default()).unwrap();
        assert!((y[0] - x1.sin()).norm() < 1e-10);
        assert!((y[1] - x1.cos()).norm() < 1e-10);
    }
}
