//! Table rows, number formatting and atomic file output.

use std::io::Write;
use std::path::Path;

use heun_spectra_core::SpectralPoint;
use serde::Serialize;

use crate::error::{CliError, CliResult};

/// Column order of every spectrum and track table.
pub const HEADER: [&str; 11] = [
    "l", "m", "n", "a", "kind", "re_omega", "im_omega", "re_E", "im_E", "residual", "stable",
];

pub const TIME_CONVENTION: &str = "e^{+i omega t}; damped modes have Im omega > 0";

/// 17 significant digits, enough to recover every `f64` exactly.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub iterations: usize,
    pub condition: f64,
    pub used_fallback: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeRow {
    pub l: i32,
    pub m: i32,
    pub n: Option<usize>,
    pub a: f64,
    pub kind: String,
    pub omega: [f64; 2],
    #[serde(rename = "E")]
    pub e: [f64; 2],
    pub residual: f64,
    pub stable: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<Diagnostics>,
}

impl From<&SpectralPoint> for ModeRow {
    fn from(p: &SpectralPoint) -> Self {
        Self {
            l: p.cfg.l,
            m: p.cfg.m,
            n: p.n,
            a: p.cfg.a,
            kind: p.kind.label().to_string(),
            omega: [p.unk.omega.re, p.unk.omega.im],
            e: [p.unk.e.re, p.unk.e.im],
            residual: p.residual_norm,
            stable: p.stable,
            diagnostics: Some(Diagnostics {
                iterations: p.diagnostics.iterations,
                condition: p.diagnostics.condition,
                used_fallback: p.diagnostics.used_fallback,
            }),
        }
    }
}

impl ModeRow {
    pub fn record(&self) -> Vec<String> {
        vec![
            self.l.to_string(),
            self.m.to_string(),
            self.n.map(|n| n.to_string()).unwrap_or_default(),
            num(self.a),
            self.kind.clone(),
            num(self.omega[0]),
            num(self.omega[1]),
            num(self.e[0]),
            num(self.e[1]),
            num(self.residual),
            self.stable.map(|s| s.to_string()).unwrap_or_default(),
        ]
    }

    fn parse(rec: &csv::StringRecord) -> Result<Self, String> {
        let f = |i: usize| -> Result<f64, String> {
            rec[i].trim().parse::<f64>().map_err(|e| format!("column {}: {e}", HEADER[i]))
        };
        let i = |i: usize| -> Result<i32, String> {
            rec[i].trim().parse::<i32>().map_err(|e| format!("column {}: {e}", HEADER[i]))
        };
        let n = match rec[2].trim() {
            "" => None,
            t => Some(t.parse::<usize>().map_err(|e| format!("column n: {e}"))?),
        };
        let stable = match rec[10].trim() {
            "" => None,
            "true" => Some(true),
            "false" => Some(false),
            t => return Err(format!("column stable: unexpected `{t}`")),
        };
        Ok(Self {
            l: i(0)?,
            m: i(1)?,
            n,
            a: f(3)?,
            kind: rec[4].trim().to_string(),
            omega: [f(5)?, f(6)?],
            e: [f(7)?, f(8)?],
            residual: f(9)?,
            stable,
            diagnostics: None,
        })
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        let n = self.n.map(|n| n.to_string()).unwrap_or_else(|| "-".into());
        let flag = match self.stable {
            Some(true) => "stable",
            Some(false) => "spurious",
            None => "unchecked",
        };
        format!(
            "{} l={} m={} n={} a={}: omega = {:.10} {:+.10}i, E = {:.10} {:+.10}i, residual {:.1e}, {}",
            self.kind, self.l, self.m, n, self.a, self.omega[0], self.omega[1], self.e[0], self.e[1], self.residual, flag
        )
    }
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

pub fn csv_bytes<S: AsRef<str>>(header: &[&str], records: impl IntoIterator<Item = Vec<S>>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in records {
        w.write_record(r.iter().map(|s| s.as_ref())).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

pub fn write_rows_csv(path: &Path, rows: &[ModeRow]) -> CliResult<()> {
    write_atomic(path, &csv_bytes(&HEADER, rows.iter().map(ModeRow::record)))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::Compute(e.to_string()))?;
    bytes.push(b'\n');
    write_atomic(path, &bytes)
}

/// Reads a table written by [`write_rows_csv`]; the header must match exactly.
pub fn read_rows_csv(path: &Path) -> CliResult<Vec<ModeRow>> {
    let bad = |msg: String| CliError::Config(format!("{}: {msg}", path.display()));
    let mut r = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let header = r.headers().map_err(|e| bad(e.to_string()))?.clone();
    if header.iter().ne(HEADER.iter().copied()) {
        return Err(bad(format!("unexpected header `{}`", header.iter().collect::<Vec<_>>().join(","))));
    }
    r.records()
        .enumerate()
        .map(|(k, rec)| {
            let rec = rec.map_err(|e| bad(e.to_string()))?;
            ModeRow::parse(&rec).map_err(|e| bad(format!("row {}: {e}", k + 1)))
        })
        .collect()
}
