use rayon::prelude::*;

use crate::boundary::BoundaryKind;
use crate::scalar::{real, Cx, Real};
use crate::solver::point::{angular_root, solve_point, stability_filter, SolverOptions, SpectralPoint};
use crate::teukolsky::{PhysicalConfig, SpectralUnknowns};

/// Starting frequencies for [`enumerate_modes`].
#[derive(Debug, Clone, PartialEq)]
pub struct SeedGrid<T: Real> {
    pub seeds: Vec<Cx<T>>,
}

impl<T: Real> SeedGrid<T> {
    /// `n_re × n_im` nodes spanning the closed rectangle `re × im`.
    pub fn rectangle(re: (T, T), im: (T, T), n_re: usize, n_im: usize) -> Self {
        let node = |(lo, hi): (T, T), k: usize, n: usize| {
            if n <= 1 {
                (lo + hi) * T::lit(0.5)
            } else {
                lo + (hi - lo) * T::idx(k) / T::idx(n - 1)
            }
        };
        let seeds = (0..n_im)
            .flat_map(|j| (0..n_re).map(move |i| Cx::new(node(re, i, n_re), node(im, j, n_im))))
            .collect();
        Self { seeds }
    }

    /// `Re ω ∈ [0.1, 2.5]`, `Im ω ∈ [0.01, 1.5]` in units of `1/(2M)`, 20 × 15 nodes.
    pub fn default_for(mass: T) -> Self {
        let unit = (T::lit(2.0) * mass).recip();
        Self::rectangle(
            (T::lit(0.1) * unit, T::lit(2.5) * unit),
            (T::lit(0.01) * unit, T::lit(1.5) * unit),
            20,
            15,
        )
    }

    pub fn is_empty(&self) -> bool {
        self.seeds.is_empty()
    }

    /// Bounding box enlarged by a quarter of its span on each side.
    fn window(&self) -> Option<(T, T, T, T)> {
        let first = self.seeds.first()?;
        let (mut x0, mut x1, mut y0, mut y1) = (first.re, first.re, first.im, first.im);
        for s in &self.seeds {
            x0 = x0.min(s.re);
            x1 = x1.max(s.re);
            y0 = y0.min(s.im);
            y1 = y1.max(s.im);
        }
        let q = T::lit(0.25);
        let (dx, dy) = ((x1 - x0) * q, (y1 - y0) * q);
        // The window never crosses an axis the seeds stay on, which keeps
        // mirror images such as -conj(ω) out.
        let slack = T::lit(1e-8);
        let lower = |lo: T, d: T| if lo >= T::zero() { (lo - d).max(-slack) } else { lo - d };
        let upper = |hi: T, d: T| if hi <= T::zero() { (hi + d).min(slack) } else { hi + d };
        Some((lower(x0, dx), upper(x1, dx), lower(y0, dy), upper(y1, dy)))
    }
}

/// Every distinct root reached from the seeds that lies in the seed window
/// (the bounding box of the seeds, enlarged by a quarter of its span),
/// each with its stability flag, sorted by `|Im ω|`. Stable points carry
/// their overtone index.
pub fn enumerate_candidates<T: Real>(
    cfg: &PhysicalConfig<T>,
    kind: BoundaryKind,
    grid: &SeedGrid<T>,
    opts: &SolverOptions<T>,
) -> Vec<SpectralPoint<T>> {
    let Some((x0, x1, y0, y1)) = grid.window() else {
        return Vec::new();
    };
    let e0 = real(T::int(i64::from(cfg.l) * i64::from(cfg.l + 1)));
    let found: Vec<SpectralPoint<T>> = grid
        .seeds
        .par_iter()
        .filter_map(|&w| {
            let e = angular_root(cfg, kind, w, e0, &opts.numerics).unwrap_or(e0);
            solve_point(cfg, kind, SpectralUnknowns::new(w, e), opts).ok()
        })
        .filter(|p| {
            let w = p.unk.omega;
            w.re >= x0 && w.re <= x1 && w.im >= y0 && w.im <= y1
        })
        .collect();

    let radius = T::lit(1e-6);
    let mut distinct: Vec<SpectralPoint<T>> = Vec::new();
    for p in found {
        match distinct
            .iter_mut()
            .find(|q| (q.unk.omega - p.unk.omega).norm() < radius)
        {
            Some(q) if p.residual_norm < q.residual_norm => *q = p,
            Some(_) => {}
            None => distinct.push(p),
        }
    }
    let mut out: Vec<SpectralPoint<T>> = distinct
        .into_par_iter()
        .map(|mut p| {
            p.stable = Some(stability_filter(&p, opts));
            p
        })
        .collect();
    out.sort_by(|a, b| {
        a.unk
            .omega
            .im
            .abs()
            .partial_cmp(&b.unk.omega.im.abs())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    for (n, p) in out.iter_mut().filter(|p| p.stable == Some(true)).enumerate() {
        p.n = Some(n);
    }
    out
}

/// Up to `n_max + 1` stable roots, ordered by increasing damping.
pub fn enumerate_modes<T: Real>(
    cfg: &PhysicalConfig<T>,
    kind: BoundaryKind,
    n_max: usize,
    grid: &SeedGrid<T>,
    opts: &SolverOptions<T>,
) -> Vec<SpectralPoint<T>> {
    enumerate_candidates(cfg, kind, grid, opts)
        .into_iter()
        .filter(|p| p.stable == Some(true))
        .take(n_max + 1)
        .collect()
}
