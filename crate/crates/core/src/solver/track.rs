use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::solver::point::{solve_point, SolverOptions, SpectralPoint};
use crate::teukolsky::SpectralUnknowns;

/// A root followed through a sequence of rotation parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuationTrack<T: Real> {
    /// Points ordered along the direction of continuation.
    pub points: Vec<SpectralPoint<T>>,
    /// Largest step in `a` the track was allowed to take.
    pub da0: T,
    /// Steps that were rejected and retried with half the step.
    pub rejected_steps: usize,
}

/// Follows `seed` to `a_end` by linear prediction and correction.
///
/// The step halves whenever the corrector fails or `ω` jumps by more than
/// `jump_cap`, and doubles (up to `da0`) after three consecutive easy steps.
pub fn continue_in_a<T: Real>(
    seed: &SpectralPoint<T>,
    a_end: T,
    da0: T,
    opts: &SolverOptions<T>,
) -> Result<ContinuationTrack<T>> {
    if !(da0 > T::zero()) {
        return Err(Error::InvalidConfig("da0 must be positive".into()));
    }
    seed.cfg.with_a(a_end)?;
    let min_da = T::lit(1e-7) * seed.cfg.mass;
    let dir = if a_end >= seed.cfg.a { T::one() } else { -T::one() };
    let mut points = vec![*seed];
    let mut da = da0;
    let mut easy = 0;
    let mut rejected = 0;
    loop {
        let last = *points.last().expect("non-empty");
        let left = (a_end - last.cfg.a) * dir;
        if left <= T::epsilon() * T::lit(16.0) {
            break;
        }
        let a_new = if da >= left { a_end } else { last.cfg.a + dir * da };
        let guess = match points.len() {
            1 => last.unk,
            n => {
                let prev = points[n - 2];
                let t = (a_new - last.cfg.a) / (last.cfg.a - prev.cfg.a);
                SpectralUnknowns::new(
                    last.unk.omega + (last.unk.omega - prev.unk.omega) * t,
                    last.unk.e + (last.unk.e - prev.unk.e) * t,
                )
            }
        };
        let cfg = last.cfg.with_a(a_new)?;
        let accepted = solve_point(&cfg, last.kind, guess, opts)
            .ok()
            .filter(|p| (p.unk.omega - last.unk.omega).norm() <= opts.jump_cap);
        match accepted {
            Some(p) => {
                easy = if p.diagnostics.iterations <= 4 { easy + 1 } else { 0 };
                if easy >= 3 {
                    da = (da * T::lit(2.0)).min(da0);
                    easy = 0;
                }
                points.push(p);
            }
            None => {
                rejected += 1;
                easy = 0;
                da *= T::lit(0.5);
                if da < min_da {
                    return Err(Error::TrackLost(last.cfg.a.to_f64().unwrap_or(f64::NAN)));
                }
            }
        }
    }
    Ok(ContinuationTrack {
        points,
        da0,
        rejected_steps: rejected,
    })
}
