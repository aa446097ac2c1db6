use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use catscale_cli::analysis::{analyze_table, Analysis};
use catscale_cli::commands::sweep_table;
use catscale_cli::config::JobConfig;
use catscale_cli::tables::{fmt_float, SWEEP_HEADER, TRACE_HEADER};
use tempfile::TempDir;

const LAMBDA: f64 = 2.649265;

fn catscale(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catscale"))
        .args(args)
        .current_dir(dir)
        .env("RUST_LOG", "warn")
        .output()
        .expect("spawn catscale")
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn run_writes_trace_and_summary() {
    let dir = TempDir::new().unwrap();
    write(
        dir.path(),
        "job.json",
        &format!(r#"{{"mode": "run", "n": 32, "d": 1e-3, "t_m": 12, "lambda2": {LAMBDA}}}"#),
    );
    let out = catscale(
        dir.path(),
        &["run", "--config", "job.json", "--out", "res", "--seed", "7"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let trace = fs::read_to_string(dir.path().join("res/trace.csv")).unwrap();
    let mut lines = trace.lines();
    assert_eq!(lines.next().unwrap(), TRACE_HEADER.join(","));
    assert_eq!(lines.count(), 13);
    let s = json(&dir.path().join("res/summary.json"));
    for key in ["N", "hbar", "D", "Lambda", "zeta", "K1m", "DChi2m"] {
        assert!(s.get(key).is_some(), "missing {key}");
    }
    assert_eq!(s["N"], 32);
    assert_eq!(s["Lambda"].as_f64().unwrap(), LAMBDA);
    let hbar = 1.0 / (std::f64::consts::TAU * 32.0);
    assert!((s["zeta"].as_f64().unwrap() - hbar * hbar * LAMBDA / 1e-3).abs() < 1e-12);
}

#[test]
fn high_noise_run_relaxes() {
    let dir = TempDir::new().unwrap();
    write(
        dir.path(),
        "job.json",
        &format!(r#"{{"n": 32, "d": 0.1, "lambda2": {LAMBDA}}}"#),
    );
    let out = catscale(dir.path(), &["run", "--config", "job.json", "--out", "."]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let s = json(&dir.path().join("summary.json"));
    assert!(s["K1m"].as_f64().unwrap() < 1e-3);
}

#[test]
fn invalid_dimension_is_config_error() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "one.json", r#"{"n": 1, "lambda2": 2.6}"#);
    let out = catscale(dir.path(), &["run", "--config", "one.json"]);
    assert_eq!(code(&out), 1);
    assert!(
        stderr(&out).contains("Hilbert dimension must be at least 2"),
        "{}",
        stderr(&out)
    );

    write(dir.path(), "window.json", r#"{"n": 16, "k_max": 16, "lambda2": 2.6}"#);
    let out = catscale(dir.path(), &["run", "--config", "window.json"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("must lie in [1, N)"), "{}", stderr(&out));

    write(dir.path(), "map.json", r#"{"map": [[2, 1], [1, 1]]}"#);
    let out = catscale(dir.path(), &["run", "--config", "map.json"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("parity"), "{}", stderr(&out));
}

#[test]
fn config_and_usage_errors() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "bad.json", r#"{"n": 32,"#);
    assert_eq!(code(&catscale(dir.path(), &["run", "--config", "bad.json"])), 1);
    write(dir.path(), "mode.json", r#"{"mode": "sweep"}"#);
    assert_eq!(code(&catscale(dir.path(), &["run", "--config", "mode.json"])), 1);
    assert_eq!(code(&catscale(dir.path(), &["sweep", "--workers", "0"])), 1);
    assert_eq!(code(&catscale(dir.path(), &["frobnicate"])), 1);
    assert_eq!(code(&catscale(dir.path(), &["run", "--config", "missing.json"])), 2);
    assert_eq!(code(&catscale(dir.path(), &["--help"])), 0);
}

#[test]
fn empty_grid_gives_header_only() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "job.json", r#"{"n_list": [], "lambda2": 2.6}"#);
    let out = catscale(dir.path(), &["sweep", "--config", "job.json", "--out", "res"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = fs::read_to_string(dir.path().join("res/sweep.csv")).unwrap();
    assert_eq!(text, format!("{}\n", SWEEP_HEADER.join(",")));
}

#[test]
fn failed_points_are_flagged() {
    let dir = TempDir::new().unwrap();
    write(
        dir.path(),
        "job.json",
        r#"{"n_list": [8, 24], "d_list": [1e-2, 1e-1], "k_max": 8, "t_m": 6, "lambda2": 2.6}"#,
    );
    let out = catscale(
        dir.path(),
        &["sweep", "--config", "job.json", "--out", ".", "--workers", "2"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[0].starts_with("8,") && rows[0].contains("error:"), "{}", rows[0]);
    assert!(rows[2].starts_with("24,") && rows[2].ends_with(",ok"));
}

fn assert_close(what: &str, a: f64, b: f64) {
    assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0), "{what}: {a} vs {b}");
}

#[test]
fn analyze_round_trip_matches_memory() {
    let dir = TempDir::new().unwrap();
    let text = format!(r#"{{"n_list": [16, 23, 32], "lambda2": {LAMBDA}}}"#);
    write(dir.path(), "job.json", &text);
    let out = catscale(
        dir.path(),
        &["sweep", "--config", "job.json", "--out", "res", "--workers", "2"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let out = catscale(dir.path(), &["analyze", "--config", "job.json", "--out", "res"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let disk: Analysis = serde_json::from_value(json(&dir.path().join("res/analysis.json"))).unwrap();

    let config: JobConfig = serde_json::from_str(&text).unwrap();
    let table = sweep_table(&config, 1).unwrap();
    assert_eq!(table.len(), 27);
    let memory = analyze_table(&table, &config).unwrap();
    assert_close("gamma", disk.gamma, memory.gamma);
    assert_close("spread_at_best", disk.spread_at_best, memory.spread_at_best);
    assert_close(
        "spread_at_reference",
        disk.spread_at_reference,
        memory.spread_at_reference,
    );
    assert_close("ln_zeta_star", disk.ln_zeta_star, memory.ln_zeta_star);
    assert_close("width", disk.width, memory.width);
    assert_close("a_prime", disk.eq6.a_prime, memory.eq6.a_prime);
    assert_close("b", disk.eq6.b, memory.eq6.b);
    assert_close("c", disk.eq6.c, memory.eq6.c);
    assert_close("residual", disk.eq6.residual, memory.eq6.residual);

    let raw = json(&dir.path().join("res/analysis.json"));
    for key in ["gamma", "spread_at_best", "spread_at_(2,1,-1)", "ln_zeta_star", "width"] {
        assert!(raw.get(key).is_some(), "missing {key}");
    }
    for key in ["a_prime", "b", "c", "residual"] {
        assert!(raw["eq6"].get(key).is_some(), "missing eq6.{key}");
    }
}

/// Rows on a quasi-random log-uniform cover of N in [16, 128] and D in
/// [1e-5, 1e-1], with a logistic K1m in ln zeta at gamma = -1 and an exact
/// small-zeta expansion of the structure ratio.
fn synthetic_csv(rows: usize, d_values: Option<f64>) -> String {
    const PHI: [f64; 2] = [0.754_877_666_246_692_7, 0.569_840_290_998_053_2];
    let mut text = SWEEP_HEADER.join(",");
    text.push('\n');
    for i in 0..rows {
        let u = (0.5 + PHI[0] * i as f64).fract();
        let v = (0.5 + PHI[1] * i as f64).fract();
        let n = (16f64.ln() + u * 8f64.ln()).exp();
        let d = d_values.unwrap_or(10f64.powf(-5.0 + 4.0 * v));
        let hbar = 1.0 / (std::f64::consts::TAU * n);
        let zeta = hbar * hbar * LAMBDA / d;
        let k1 = 3.0 / (1.0 + (-(zeta.ln() - 0.3) / 0.8).exp());
        let ratio = 1.0 - 0.25 * zeta.sqrt() + 2.4 * zeta - 1.2 * zeta.powf(1.5);
        let fields = [hbar, d, LAMBDA, zeta, k1, 0.5 * k1, ratio].map(fmt_float);
        text.push_str(&format!("{},{},ok\n", n as usize, fields.join(",")));
    }
    text
}

#[test]
fn synthetic_collapse_recovers_exponent_and_fits() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "synthetic.csv", &synthetic_csv(500, None));
    let out = catscale(dir.path(), &["analyze", "--input", "synthetic.csv", "--out", "."]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let a: Analysis = serde_json::from_value(json(&dir.path().join("analysis.json"))).unwrap();
    assert!((a.gamma + 1.0).abs() <= 0.1, "gamma {}", a.gamma);
    assert!(a.spread_at_reference < 0.05, "{}", a.spread_at_reference);
    assert!((a.ln_zeta_star - 0.3).abs() < 1e-4, "{}", a.ln_zeta_star);
    assert!((a.width - 0.8).abs() < 1e-4, "{}", a.width);
    assert!((a.eq6.a_prime + 0.25).abs() < 1e-8);
    assert!((a.eq6.b - 2.4).abs() < 1e-8);
    assert!((a.eq6.c + 1.2).abs() < 1e-8);
}

#[test]
fn single_noise_value_is_unidentifiable() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "one_d.csv", &synthetic_csv(60, Some(1e-3)));
    let out = catscale(dir.path(), &["analyze", "--input", "one_d.csv"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("unidentifiable"), "{}", stderr(&out));
}

#[test]
fn analyze_input_errors() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "garbage.csv", "N,hbar\n1,2\n");
    assert_eq!(code(&catscale(dir.path(), &["analyze", "--input", "garbage.csv"])), 1);
    let mut bad = synthetic_csv(3, None);
    bad.push_str("16,oops,1,1,1,1,1,1,ok\n");
    write(dir.path(), "bad_number.csv", &bad);
    assert_eq!(
        code(&catscale(dir.path(), &["analyze", "--input", "bad_number.csv"])),
        1
    );
    assert_eq!(code(&catscale(dir.path(), &["analyze", "--input", "absent.csv"])), 2);
}

#[test]
fn plot_sweep_has_two_panels() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "sweep.csv", &synthetic_csv(40, None));
    let out = catscale(dir.path(), &["plot", "--input", "sweep.csv", "--out", "fig"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let svg = fs::read_to_string(dir.path().join("fig/plot.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<g>").count(), 2);
    assert!(svg.contains(">ln(zeta)</text>"));
    assert!(svg.contains(">D</text>"));
}

#[test]
fn plot_trace_and_empty_inputs() {
    let dir = TempDir::new().unwrap();
    write(
        dir.path(),
        "job.json",
        &format!(r#"{{"n": 16, "d": 1e-3, "t_m": 5, "lambda2": {LAMBDA}}}"#),
    );
    assert_eq!(
        code(&catscale(dir.path(), &["run", "--config", "job.json", "--out", "r"])),
        0
    );
    let out = catscale(dir.path(), &["plot", "--out", "r"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(dir.path().join("r/plot.svg").exists());

    write(dir.path(), "empty.csv", &format!("{}\n", SWEEP_HEADER.join(",")));
    assert_eq!(code(&catscale(dir.path(), &["plot", "--input", "empty.csv"])), 3);
    write(dir.path(), "empty_trace.csv", &format!("{}\n", TRACE_HEADER.join(",")));
    assert_eq!(code(&catscale(dir.path(), &["plot", "--input", "empty_trace.csv"])), 3);
}
