//! JSON run configuration. Complex numbers are written as `[re, im]`.

use std::path::{Path, PathBuf};

use heun_spectra_core::boundary::{BoundaryKind, Numerics};
use heun_spectra_core::solver::{SeedGrid, SolverOptions};
use heun_spectra_core::teukolsky::PhysicalConfig;
use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Eval,
    Spectrum,
    Continue,
    Oracle,
    EmitPlot,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Optional; must agree with the mode given on the command line.
    pub mode: Option<Mode>,
    #[serde(default)]
    pub physical: Physical,
    #[serde(default = "default_kind")]
    pub kind: String,
    #[serde(default)]
    pub solver: SolverBlock,
    pub eval: Option<EvalBlock>,
    pub plot: Option<PlotBlock>,
    #[serde(default)]
    pub output: OutputBlock,
}

fn default_kind() -> String {
    "QNM".into()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Physical {
    pub mass: f64,
    /// Single rotation parameter; ignored when `a_range` is given.
    pub a: f64,
    /// `[a_min, a_max]` for continuation runs.
    pub a_range: Option<[f64; 2]>,
    pub s: i32,
    pub l: Vec<i32>,
    pub m: Vec<i32>,
}

impl Default for Physical {
    fn default() -> Self {
        Self {
            mass: 0.5,
            a: 0.0,
            a_range: None,
            s: -1,
            l: vec![1],
            m: vec![0],
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverBlock {
    pub root_tol: f64,
    pub series_tol: f64,
    pub max_iter: usize,
    pub n_max: usize,
    pub seed_grid: Option<GridBlock>,
    pub da0: f64,
    pub jump_cap: f64,
    pub stability_tol: f64,
    /// Matching radius and far boundary in units of `M`.
    pub r_match: f64,
    pub r_far: f64,
    pub angular_match: f64,
    /// Run the stability filter on every continuation point.
    pub filter_tracks: bool,
}

impl Default for SolverBlock {
    fn default() -> Self {
        let o = SolverOptions::<f64>::default();
        let n = o.numerics;
        Self {
            root_tol: o.root_tol,
            series_tol: n.series_tol,
            max_iter: o.max_iter,
            n_max: 2,
            seed_grid: None,
            da0: 0.05,
            jump_cap: o.jump_cap,
            stability_tol: o.stability_tol,
            r_match: n.r_match,
            r_far: n.r_far,
            angular_match: n.angular_match,
            filter_tracks: false,
        }
    }
}

/// Rectangle of starting frequencies in absolute units of `ω`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridBlock {
    pub re: [f64; 2],
    pub im: [f64; 2],
    pub n_re: usize,
    pub n_im: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalParams {
    Canonical {
        gamma: [f64; 2],
        delta: [f64; 2],
        epsilon: [f64; 2],
        alpha_beta: [f64; 2],
        q: [f64; 2],
    },
    Maple {
        alpha: [f64; 2],
        beta: [f64; 2],
        gamma: [f64; 2],
        delta: [f64; 2],
        eta: [f64; 2],
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalBlock {
    pub params: EvalParams,
    pub z: Vec<[f64; 2]>,
    #[serde(default = "default_eval_tol")]
    pub tol: f64,
}

fn default_eval_tol() -> f64 {
    1e-15
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlotStyle {
    ComplexPlane,
    TrackVsA,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlotBlock {
    /// A CSV written by the `spectrum` or `continue` mode.
    pub input: PathBuf,
    pub style: PlotStyle,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputBlock {
    pub dir: PathBuf,
    pub formats: Vec<String>,
}

impl Default for OutputBlock {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            formats: vec!["csv".into(), "json".into()],
        }
    }
}

pub fn c(v: [f64; 2]) -> Complex64 {
    Complex64::new(v[0], v[1])
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| config_err(e.to_string()))
    }

    pub fn kind(&self) -> CliResult<BoundaryKind> {
        BoundaryKind::parse(&self.kind).ok_or_else(|| config_err(format!("unknown kind `{}`", self.kind)))
    }

    pub fn wants(&self, format: &str) -> bool {
        self.output.formats.iter().any(|f| f.eq_ignore_ascii_case(format))
    }

    /// `[a_min, a_max]`, degenerate when only `a` is given.
    pub fn a_range(&self) -> [f64; 2] {
        self.physical.a_range.unwrap_or([self.physical.a, self.physical.a])
    }

    /// Every `(l, m)` pair, each validated at every rotation the run uses.
    pub fn configs(&self, a: f64) -> CliResult<Vec<PhysicalConfig<f64>>> {
        let p = &self.physical;
        let mut out = Vec::new();
        for &l in &p.l {
            for &m in &p.m {
                let cfg = PhysicalConfig::new(p.mass, a, p.s, l, m).map_err(|e| config_err(e.to_string()))?;
                out.push(cfg);
            }
        }
        Ok(out)
    }

    pub fn validate(&self, mode: Mode) -> CliResult<()> {
        if let Some(m) = self.mode {
            if m != mode {
                return Err(config_err(format!("config is for mode {m:?}, command line asks for {mode:?}")));
            }
        }
        let p = &self.physical;
        if !(p.mass > 0.0) {
            return Err(config_err("mass must be positive"));
        }
        let [lo, hi] = self.a_range();
        if !(lo <= hi) {
            return Err(config_err(format!("a_range [{lo}, {hi}] is not ordered")));
        }
        if lo < 0.0 || hi > 0.9999 * p.mass {
            return Err(config_err(format!("rotation must lie in [0, 0.9999 M], got [{lo}, {hi}]")));
        }
        if p.l.is_empty() || p.m.is_empty() {
            return Err(config_err("l and m lists must be non-empty"));
        }
        let s = &self.solver;
        for (name, v) in [
            ("root_tol", s.root_tol),
            ("series_tol", s.series_tol),
            ("da0", s.da0),
            ("jump_cap", s.jump_cap),
            ("stability_tol", s.stability_tol),
            ("r_match", s.r_match),
            ("r_far", s.r_far),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(config_err(format!("{name} must be positive")));
            }
        }
        if !(s.angular_match > 0.0 && s.angular_match < 1.0) {
            return Err(config_err("angular_match must lie in (0, 1)"));
        }
        if s.r_far <= s.r_match {
            return Err(config_err("r_far must exceed r_match"));
        }
        self.kind()?;
        self.configs(lo)?;
        match mode {
            Mode::Eval if self.eval.is_none() => Err(config_err("eval mode needs an `eval` block")),
            Mode::EmitPlot if self.plot.is_none() => Err(config_err("emit-plot mode needs a `plot` block")),
            _ => Ok(()),
        }
    }

    pub fn solver_options(&self) -> SolverOptions<f64> {
        let s = &self.solver;
        SolverOptions {
            numerics: Numerics {
                series_tol: s.series_tol,
                angular_match: s.angular_match,
                r_match: s.r_match,
                r_far: s.r_far,
                ..Numerics::default()
            },
            root_tol: s.root_tol,
            max_iter: s.max_iter,
            jump_cap: s.jump_cap,
            stability_tol: s.stability_tol,
            ..SolverOptions::default()
        }
    }

    pub fn seed_grid(&self) -> SeedGrid<f64> {
        match &self.solver.seed_grid {
            Some(g) => SeedGrid::rectangle((g.re[0], g.re[1]), (g.im[0], g.im[1]), g.n_re, g.n_im),
            None => SeedGrid::default_for(self.physical.mass),
        }
    }
}
