//! Execution of each mode.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use heun_spectra_core::heun::{
    canonical_to_maple, eval_maple_auto, eval_series, exponential_shift, ContinuationOptions, HeunEval,
};
use heun_spectra_core::oracle::schwarzschild_qnm;
use heun_spectra_core::solver::{continue_in_a, enumerate_candidates, stability_filter};
use heun_spectra_core::{CanonicalParams, MapleParams, SpectralPoint, C64};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{c, EvalParams, Mode, PlotStyle, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{csv_bytes, num, read_rows_csv, write_atomic, write_json, write_rows_csv, ModeRow, TIME_CONVENTION};

/// What a run produced: files written and one summary line per result.
#[derive(Debug, Default)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
    pub lines: Vec<String>,
}

#[derive(Serialize)]
struct Metadata<'a> {
    program: &'static str,
    version: &'static str,
    mode: &'a str,
    time_convention: &'static str,
    mass: f64,
    s: i32,
    kind: &'a str,
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    metadata: Metadata<'a>,
    points: &'a [T],
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    mode: Mode,
    dir: &'a Path,
    report: RunReport,
}

impl Ctx<'_> {
    fn metadata(&self) -> Metadata<'_> {
        Metadata {
            program: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            mode: mode_name(self.mode),
            time_convention: TIME_CONVENTION,
            mass: self.cfg.physical.mass,
            s: self.cfg.physical.s,
            kind: &self.cfg.kind,
        }
    }

    fn emit_rows(&mut self, stem: &str, rows: &[ModeRow]) -> CliResult<()> {
        if self.cfg.wants("csv") {
            let path = self.dir.join(format!("{stem}.csv"));
            write_rows_csv(&path, rows)?;
            self.report.files.push(path);
        }
        if self.cfg.wants("json") {
            let path = self.dir.join(format!("{stem}.json"));
            write_json(&path, &Document { metadata: self.metadata(), points: rows })?;
            self.report.files.push(path);
        }
        Ok(())
    }

    fn emit_table<T: Serialize>(&mut self, stem: &str, header: &[&str], records: Vec<Vec<String>>, points: &[T]) -> CliResult<()> {
        if self.cfg.wants("csv") {
            let path = self.dir.join(format!("{stem}.csv"));
            write_atomic(&path, &csv_bytes(header, records))?;
            self.report.files.push(path);
        }
        if self.cfg.wants("json") {
            let path = self.dir.join(format!("{stem}.json"));
            write_json(&path, &Document { metadata: self.metadata(), points })?;
            self.report.files.push(path);
        }
        Ok(())
    }
}

pub fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Eval => "eval",
        Mode::Spectrum => "spectrum",
        Mode::Continue => "continue",
        Mode::Oracle => "oracle",
        Mode::EmitPlot => "emit-plot",
    }
}

/// Validates `cfg` and executes `mode`, writing results below `dir`.
pub fn run(mode: Mode, cfg: &RunConfig, dir: &Path) -> CliResult<RunReport> {
    cfg.validate(mode)?;
    let mut ctx = Ctx { cfg, mode, dir, report: RunReport::default() };
    match mode {
        Mode::Eval => eval(&mut ctx)?,
        Mode::Spectrum => spectrum(&mut ctx)?,
        Mode::Continue => track(&mut ctx)?,
        Mode::Oracle => oracle(&mut ctx)?,
        Mode::EmitPlot => emit_plot(&mut ctx)?,
    }
    Ok(ctx.report)
}

#[derive(Serialize)]
struct EvalPoint {
    z: [f64; 2],
    value: [f64; 2],
    derivative: [f64; 2],
    err_estimate: f64,
    terms_used: usize,
}

fn eval_one(params: &EvalParams, z: C64, tol: f64) -> CliResult<HeunEval<f64>> {
    let opts = ContinuationOptions::default();
    match params {
        EvalParams::Maple { alpha, beta, gamma, delta, eta } => {
            let p = MapleParams::new(c(*alpha), c(*beta), c(*gamma), c(*delta), c(*eta));
            Ok(eval_maple_auto(&p, z, tol, &opts)?)
        }
        EvalParams::Canonical { gamma, delta, epsilon, alpha_beta, q } => {
            let p = CanonicalParams::new(c(*gamma), c(*delta), c(*epsilon), c(*alpha_beta), c(*q));
            if z.norm() <= 0.5 {
                return Ok(eval_series(&p, z, tol)?);
            }
            // Outside the half disk, go through the Maple form, whose
            // evaluator already routes paths around z = 1.
            let m = canonical_to_maple(&p)?;
            let kappa = exponential_shift(&p)?;
            let y = eval_maple_auto(&m, z, tol, &opts)?;
            let f = (kappa * z).exp();
            Ok(HeunEval {
                value: f * y.value,
                derivative: f * (kappa * y.value + y.derivative),
                second_derivative: f * (kappa * kappa * y.value + kappa * 2.0 * y.derivative + y.second_derivative),
                ..y
            })
        }
    }
}

fn eval(ctx: &mut Ctx<'_>) -> CliResult<()> {
    let block = ctx.cfg.eval.as_ref().expect("validated");
    let points = block
        .z
        .par_iter()
        .map(|&z| {
            let v = eval_one(&block.params, c(z), block.tol)?;
            Ok(EvalPoint {
                z,
                value: [v.value.re, v.value.im],
                derivative: [v.derivative.re, v.derivative.im],
                err_estimate: v.err_estimate,
                terms_used: v.terms_used,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    let records = points
        .iter()
        .map(|p| {
            vec![
                num(p.z[0]),
                num(p.z[1]),
                num(p.value[0]),
                num(p.value[1]),
                num(p.derivative[0]),
                num(p.derivative[1]),
                num(p.err_estimate),
            ]
        })
        .collect();
    for p in &points {
        ctx.report.lines.push(format!(
            "z = {} {:+}i: H = {} {:+}i, H' = {} {:+}i",
            p.z[0], p.z[1], p.value[0], p.value[1], p.derivative[0], p.derivative[1]
        ));
    }
    let header = ["re_z", "im_z", "re_value", "im_value", "re_deriv", "im_deriv", "err_estimate"];
    ctx.emit_table("eval", &header, records, &points)
}

/// All candidates for every `(l, m)` at rotation `a`, in configuration order.
fn candidates(cfg: &RunConfig, a: f64) -> CliResult<Vec<Vec<SpectralPoint>>> {
    let kind = cfg.kind()?;
    let grid = cfg.seed_grid();
    let opts = cfg.solver_options();
    let configs = cfg.configs(a)?;
    Ok(configs
        .par_iter()
        .map(|pc| enumerate_candidates(pc, kind, &grid, &opts))
        .collect())
}

fn stable_modes(all: &[SpectralPoint], n_max: usize) -> Vec<SpectralPoint> {
    all.iter()
        .filter(|p| p.stable == Some(true))
        .take(n_max + 1)
        .copied()
        .collect()
}

fn spectrum(ctx: &mut Ctx<'_>) -> CliResult<()> {
    let cfg = ctx.cfg;
    let found = candidates(cfg, cfg.a_range()[0])?;
    let mut modes = Vec::new();
    let mut all = Vec::new();
    for set in &found {
        modes.extend(stable_modes(set, cfg.solver.n_max).iter().map(ModeRow::from));
        all.extend(set.iter().map(ModeRow::from));
    }
    if modes.is_empty() {
        return Err(CliError::Compute("no stable root found in the seed window".into()));
    }
    ctx.report.lines.extend(modes.iter().map(ModeRow::summary));
    ctx.emit_rows("spectrum", &modes)?;
    ctx.emit_rows("candidates", &all)
}

fn track(ctx: &mut Ctx<'_>) -> CliResult<()> {
    let cfg = ctx.cfg;
    let [a_min, a_max] = cfg.a_range();
    cfg.configs(a_max)?;
    let opts = cfg.solver_options();
    let seeds: Vec<_> = candidates(cfg, a_min)?
        .iter()
        .flat_map(|set| stable_modes(set, cfg.solver.n_max))
        .collect();
    if seeds.is_empty() {
        return Err(CliError::Compute("no stable root found at a_min".into()));
    }
    let results: Vec<_> = seeds
        .par_iter()
        .map(|seed| continue_in_a(seed, a_max, cfg.solver.da0, &opts))
        .collect();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (seed, res) in seeds.iter().zip(results) {
        match res {
            Ok(t) => {
                let mut points = t.points;
                for p in points.iter_mut() {
                    p.n = seed.n;
                }
                if cfg.solver.filter_tracks {
                    points.par_iter_mut().skip(1).for_each(|p| p.stable = Some(stability_filter(p, &opts)));
                }
                if let Some(last) = points.last() {
                    ctx.report.lines.push(ModeRow::from(last).summary());
                }
                rows.extend(points.iter().map(ModeRow::from));
            }
            Err(e) => failures.push(format!("l={} m={} n={:?}: {e}", seed.cfg.l, seed.cfg.m, seed.n)),
        }
    }
    ctx.emit_rows("track", &rows)?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Compute(format!("{} track(s) lost: {}", failures.len(), failures.join("; "))))
    }
}

#[derive(Serialize)]
struct OracleRow {
    l: i32,
    n: u32,
    omega: [f64; 2],
}

fn oracle(ctx: &mut Ctx<'_>) -> CliResult<()> {
    let cfg = ctx.cfg;
    if cfg.a_range().iter().any(|&a| a != 0.0) || cfg.physical.mass != 0.5 {
        return Err(CliError::Config("the reference oracle covers a = 0 and M = 1/2 only".into()));
    }
    let jobs: Vec<(i32, u32)> = cfg
        .physical
        .l
        .iter()
        .flat_map(|&l| (0..=cfg.solver.n_max as u32).map(move |n| (l, n)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(l, n)| {
            let w = schwarzschild_qnm(l, n, cfg.physical.s)?;
            Ok(OracleRow { l, n, omega: [w.re, w.im] })
        })
        .collect::<CliResult<Vec<_>>>()?;
    for r in &rows {
        ctx.report.lines.push(format!("oracle l={} n={}: omega = {:.10} {:+.10}i", r.l, r.n, r.omega[0], r.omega[1]));
    }
    let records = rows
        .iter()
        .map(|r| vec![r.l.to_string(), r.n.to_string(), num(r.omega[0]), num(r.omega[1])])
        .collect();
    ctx.emit_table("oracle", &["l", "n", "re_omega", "im_omega"], records, &rows)
}

fn series_name(stable: Option<bool>) -> &'static str {
    match stable {
        Some(true) => "stable",
        Some(false) => "spurious",
        None => "unchecked",
    }
}

/// Groups rows into one file per `(l, m, kind)`, each holding its stable,
/// spurious and unchecked points as separate series.
pub fn emit_plot_data(rows: &[ModeRow], style: PlotStyle, dir: &Path) -> CliResult<Vec<PathBuf>> {
    let mut groups: BTreeMap<(i32, i32, String), Vec<&ModeRow>> = BTreeMap::new();
    for r in rows {
        groups.entry((r.l, r.m, r.kind.clone())).or_default().push(r);
    }
    let mut files = Vec::new();
    for ((l, m, kind), mut pts) in groups {
        pts.sort_by(|a, b| {
            let key = |r: &ModeRow| (series_rank(r.stable), r.n.unwrap_or(usize::MAX));
            key(a).cmp(&key(b)).then(a.a.total_cmp(&b.a))
        });
        let (header, records): (&[&str], Vec<Vec<String>>) = match style {
            PlotStyle::ComplexPlane => (
                &["series", "re_omega", "im_omega"],
                pts.iter()
                    .map(|r| vec![series_name(r.stable).to_string(), num(r.omega[0]), num(r.omega[1])])
                    .collect(),
            ),
            PlotStyle::TrackVsA => (
                &["series", "n", "a", "re_omega", "im_omega"],
                pts.iter()
                    .map(|r| {
                        vec![
                            series_name(r.stable).to_string(),
                            r.n.map(|n| n.to_string()).unwrap_or_default(),
                            num(r.a),
                            num(r.omega[0]),
                            num(r.omega[1]),
                        ]
                    })
                    .collect(),
            ),
        };
        let path = dir.join(format!("{kind}_l{l}_m{m}.csv"));
        write_atomic(&path, &csv_bytes(header, records))?;
        files.push(path);
    }
    Ok(files)
}

fn series_rank(stable: Option<bool>) -> u8 {
    match stable {
        Some(true) => 0,
        Some(false) => 1,
        None => 2,
    }
}

fn emit_plot(ctx: &mut Ctx<'_>) -> CliResult<()> {
    let block = ctx.cfg.plot.as_ref().expect("validated");
    let rows = read_rows_csv(&block.input)?;
    if rows.is_empty() {
        return Err(CliError::EmptyInput(block.input.display().to_string()));
    }
    let files = emit_plot_data(&rows, block.style, ctx.dir)?;
    for f in &files {
        ctx.report.lines.push(format!("wrote {}", f.display()));
    }
    ctx.report.files.extend(files);
    Ok(())
}
