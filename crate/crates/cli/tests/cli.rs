use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use heun_spectra::output::{num, read_rows_csv, write_rows_csv, ModeRow, HEADER};
use heun_spectra::{emit_plot_data, PlotStyle};
use proptest::prelude::*;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_heun-spectra"))
}

fn run_mode(mode: &str, config: &str, dir: &Path, extra: &[&str]) -> Output {
    let cfg = dir.join(format!("{mode}.config.json"));
    std::fs::write(&cfg, config).unwrap();
    bin()
        .arg(mode)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("out"))
        .args(extra)
        .output()
        .unwrap()
}

fn read(path: PathBuf) -> String {
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

const SPECTRUM: &str = r#"{"physical": {"a": 0.0, "l": [1], "m": [0]}, "kind": "QNM", "solver": {"n_max": 2}}"#;

#[test]
fn spectrum_at_zero_rotation_lists_three_overtones() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_mode("spectrum", SPECTRUM, tmp.path(), &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(stdout.lines().count(), 3, "{stdout}");

    let text = read(tmp.path().join("out/spectrum.csv"));
    assert_eq!(text.lines().next().unwrap(), HEADER.join(","));
    let rows = read_rows_csv(&tmp.path().join("out/spectrum.csv")).unwrap();
    assert_eq!(rows.len(), 3);
    for (k, r) in rows.iter().enumerate() {
        assert_eq!(r.n, Some(k));
        assert_eq!(r.stable, Some(true));
        assert!((r.e[0] - 2.0).abs() < 1e-10 && r.e[1].abs() < 1e-10);
        assert!(r.omega[1] > 0.0);
    }

    // CSV and JSON carry bit-identical numbers.
    let json: serde_json::Value = serde_json::from_str(&read(tmp.path().join("out/spectrum.json"))).unwrap();
    assert!(json["metadata"]["time_convention"].as_str().unwrap().contains("Im omega > 0"));
    for (r, p) in rows.iter().zip(json["points"].as_array().unwrap()) {
        assert_eq!(r.omega[0].to_bits(), p["omega"][0].as_f64().unwrap().to_bits());
        assert_eq!(r.omega[1].to_bits(), p["omega"][1].as_f64().unwrap().to_bits());
        assert!(p["diagnostics"]["iterations"].as_u64().is_some());
    }
}

#[test]
fn thread_count_does_not_change_output() {
    let one = tempfile::tempdir().unwrap();
    let two = tempfile::tempdir().unwrap();
    assert!(run_mode("spectrum", SPECTRUM, one.path(), &["--jobs", "1"]).status.success());
    assert!(run_mode("spectrum", SPECTRUM, two.path(), &["--jobs", "3"]).status.success());
    for f in ["spectrum.csv", "candidates.csv"] {
        assert_eq!(read(one.path().join("out").join(f)), read(two.path().join("out").join(f)));
    }
}

#[test]
fn degenerate_continuation_reproduces_spectrum() {
    let tmp = tempfile::tempdir().unwrap();
    let single = r#"{"physical": {"a": 0.1, "l": [1], "m": [1]}, "solver": {"n_max": 0}, "output": {"formats": ["csv"]}}"#;
    let cont = r#"{"physical": {"a_range": [0.1, 0.1], "l": [1], "m": [1]}, "solver": {"n_max": 0}, "output": {"formats": ["csv"]}}"#;
    assert!(run_mode("spectrum", single, tmp.path(), &[]).status.success());
    let out = run_mode("continue", cont, tmp.path(), &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let spectrum = read(tmp.path().join("out/spectrum.csv"));
    let track = read(tmp.path().join("out/track.csv"));
    assert_eq!(track, spectrum);
    assert_eq!(track.lines().count(), 2);
}

#[test]
fn continuation_tracks_the_fundamental() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = r#"{"physical": {"a_range": [0.0, 0.1], "l": [1], "m": [1]}, "solver": {"n_max": 0, "da0": 0.05}}"#;
    let out = run_mode("continue", cfg, tmp.path(), &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = read_rows_csv(&tmp.path().join("out/track.csv")).unwrap();
    assert!(rows.len() >= 3);
    assert_eq!(rows[0].a, 0.0);
    assert_eq!(rows.last().unwrap().a, 0.1);
    assert!(rows.windows(2).all(|w| w[1].a > w[0].a));
    assert!(rows.iter().all(|r| r.n == Some(0) && r.residual < 1e-9));
}

#[test]
fn eval_at_origin_prints_one() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = r#"{"eval": {"params": {"canonical": {"gamma": [1.5, 0], "delta": [0.5, 0],
        "epsilon": [0.2, 0.1], "alpha_beta": [0.3, 0], "q": [0.7, 0]}}, "z": [[0, 0], [0.8, 0.3]]}}"#;
    let out = run_mode("eval", cfg, tmp.path(), &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.lines().next().unwrap().contains("H = 1 +0i"), "{stdout}");
    let csv = read(tmp.path().join("out/eval.csv"));
    let first: Vec<f64> = csv.lines().nth(1).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(&first[2..4], &[1.0, 0.0]);
}

#[test]
fn canonical_and_maple_eval_agree_beyond_series_disk() {
    use heun_spectra_core::heun::{canonical_to_maple, exponential_shift};
    use heun_spectra_core::{c64, CanonicalParams};
    let tmp = tempfile::tempdir().unwrap();
    let p = CanonicalParams::new(c64(1.5, 0.0), c64(0.5, 0.0), c64(0.2, 0.1), c64(0.3, 0.0), c64(0.7, 0.0));
    let m = canonical_to_maple(&p).unwrap();
    let kappa = exponential_shift(&p).unwrap();
    let z = c64(1.4, 0.6);
    let canon = format!(
        r#"{{"eval": {{"params": {{"canonical": {{"gamma": [1.5, 0], "delta": [0.5, 0], "epsilon": [0.2, 0.1], "alpha_beta": [0.3, 0], "q": [0.7, 0]}}}}, "z": [[{}, {}]]}}}}"#,
        z.re, z.im
    );
    let maple = format!(
        r#"{{"eval": {{"params": {{"maple": {{"alpha": [{}, {}], "beta": [{}, {}], "gamma": [{}, {}], "delta": [{}, {}], "eta": [{}, {}]}}}}, "z": [[{}, {}]]}}, "output": {{"dir": "unused"}}}}"#,
        m.alpha.re, m.alpha.im, m.beta.re, m.beta.im, m.gamma.re, m.gamma.im, m.delta.re, m.delta.im, m.eta.re, m.eta.im, z.re, z.im
    );
    let value = |cfg: &str, sub: &str| {
        let d = tmp.path().join(sub);
        std::fs::create_dir_all(&d).unwrap();
        assert!(run_mode("eval", cfg, &d, &[]).status.success());
        let line = read(d.join("out/eval.csv")).lines().nth(1).unwrap().to_string();
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        c64(v[2], v[3])
    };
    let h = value(&canon, "c");
    let y = value(&maple, "m");
    assert!((h - (kappa * z).exp() * y).norm() < 1e-9 * h.norm(), "{h} vs {y}");
}

#[test]
fn oracle_mode_reproduces_reference_table() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = r#"{"physical": {"l": [1]}, "solver": {"n_max": 1}, "output": {"formats": ["csv"]}}"#;
    let out = run_mode("oracle", cfg, tmp.path(), &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let got = read(tmp.path().join("out/oracle.csv"));
    let fixture = include_str!("../../core/tests/fixtures/schwarzschild_qnm.csv");
    for line in got.lines().skip(1) {
        assert!(fixture.lines().any(|f| f == line), "{line} not in fixture");
    }
    assert_eq!(got.lines().count(), 3);
}

fn exit_code(mode: &str, cfg: &str) -> i32 {
    let tmp = tempfile::tempdir().unwrap();
    run_mode(mode, cfg, tmp.path(), &[]).status.code().unwrap()
}

#[test]
fn invalid_configurations_exit_with_two() {
    for cfg in [
        r#"{"physical": {"a": 0.5}}"#,
        r#"{"physical": {"a_range": [0.3, 0.1]}}"#,
        r#"{"physical": {"l": [0]}}"#,
        r#"{"physical": {"l": [1], "m": [2]}}"#,
        r#"{"physical": {"mass": -1}}"#,
        r#"{"solver": {"root_tol": 0}}"#,
        r#"{"solver": {"r_far": 3}}"#,
        r#"{"kind": "whatever"}"#,
        r#"{"mode": "oracle"}"#,
        r#"{"unknown_block": 1}"#,
        "not json",
    ] {
        assert_eq!(exit_code("spectrum", cfg), 2, "{cfg}");
    }
    assert_eq!(exit_code("eval", "{}"), 2);
    assert_eq!(exit_code("emit-plot", "{}"), 2);
    let missing = bin().args(["spectrum", "--config", "/nonexistent/cfg.json"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn computation_failure_exits_with_one() {
    // A seed window far from any root.
    let cfg = r#"{"solver": {"seed_grid": {"re": [5.0, 5.0], "im": [0.01, 0.01], "n_re": 1, "n_im": 1}}}"#;
    assert_eq!(exit_code("spectrum", cfg), 1);
}

fn row(l: i32, kind: &str, n: Option<usize>, omega: [f64; 2], stable: Option<bool>) -> ModeRow {
    ModeRow {
        l,
        m: 0,
        n,
        a: 0.2,
        kind: kind.into(),
        omega,
        e: [2.0, 0.0],
        residual: 1e-12,
        stable,
        diagnostics: None,
    }
}

#[test]
fn plot_data_is_split_by_kind() {
    let tmp = tempfile::tempdir().unwrap();
    let mut rows = Vec::new();
    for k in 0..7 {
        rows.push(row(1, "QNM", Some(k), [0.5, 0.2 + 0.4 * k as f64], Some(true)));
        rows.push(row(1, "JetPrimary", Some(k), [0.0, 0.48 * (k + 1) as f64], Some(true)));
    }
    let files = emit_plot_data(&rows, PlotStyle::ComplexPlane, tmp.path()).unwrap();
    assert_eq!(files.len(), 2);
    for f in files {
        let text = read(f);
        assert_eq!(text.lines().next().unwrap(), "series,re_omega,im_omega");
        assert_eq!(text.lines().count(), 8);
    }
}

#[test]
fn spurious_points_form_their_own_series() {
    let tmp = tempfile::tempdir().unwrap();
    let rows = vec![
        row(1, "QNM", None, [0.9, 0.05], Some(false)),
        row(1, "QNM", Some(0), [0.5, 0.18], Some(true)),
        row(1, "QNM", Some(1), [0.43, 0.58], Some(true)),
    ];
    let files = emit_plot_data(&rows, PlotStyle::TrackVsA, tmp.path()).unwrap();
    let text = read(files[0].clone());
    let series: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(series, ["stable", "stable", "spurious"]);
    assert_eq!(text.lines().next().unwrap(), "series,n,a,re_omega,im_omega");
}

#[test]
fn emit_plot_from_spectrum_output_and_empty_input() {
    let tmp = tempfile::tempdir().unwrap();
    let table = tmp.path().join("table.csv");
    write_rows_csv(&table, &[row(2, "QNM", Some(0), [0.9, 0.19], Some(true))]).unwrap();
    let cfg = format!(r#"{{"plot": {{"input": "{}", "style": "complex-plane"}}}}"#, table.display());
    let out = run_mode("emit-plot", &cfg, tmp.path(), &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(tmp.path().join("out/QNM_l2_m0.csv").exists());

    write_rows_csv(&table, &[]).unwrap();
    let out = run_mode("emit-plot", &cfg, tmp.path(), &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no points"));
}

#[test]
fn outputs_leave_no_temporary_files() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("rows.csv");
    write_rows_csv(&path, &[row(1, "QNM", Some(0), [0.5, 0.2], Some(true))]).unwrap();
    write_rows_csv(&path, &[row(1, "QNM", Some(0), [0.6, 0.2], Some(true))]).unwrap();
    let names: Vec<_> = std::fs::read_dir(tmp.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names, ["rows.csv"]);
    assert_eq!(read_rows_csv(&path).unwrap()[0].omega[0], 0.6);
}

proptest! {
    #[test]
    fn written_numbers_round_trip_exactly(bits in any::<u64>()) {
        let x = f64::from_bits(bits);
        prop_assume!(x.is_finite());
        prop_assert_eq!(num(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
    }

    #[test]
    fn rows_round_trip_through_csv(re in -10.0f64..10.0, im in 0.0f64..5.0, a in 0.0f64..0.49,
                                   n in proptest::option::of(0usize..20), stable in proptest::option::of(any::<bool>())) {
        let tmp = tempfile::tempdir().unwrap();
        let path = tmp.path().join("r.csv");
        let mut r = row(3, "QuasiBound", n, [re, im], stable);
        r.a = a;
        write_rows_csv(&path, std::slice::from_ref(&r)).unwrap();
        prop_assert_eq!(read_rows_csv(&path).unwrap(), vec![r]);
    }
}
