use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use catscale::dynamics::evolve;
use catscale::measures::track_extrema;
use catscale::sweep::{composite_parameter, run_sweep, Measure};
use catscale::{RunTrace64, SweepTable64};
use serde::Serialize;

use crate::analysis::{analyze_table, Analysis};
use crate::config::{JobConfig, Mode};
use crate::error::{CliResult, Context, Failure, Kind};
use crate::svg::{render, Panel, Series};
use crate::tables::{read_table, write_sweep, write_trace, Loaded};

/// Contents of `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    #[serde(rename = "N")]
    pub n: usize,
    pub hbar: f64,
    #[serde(rename = "D")]
    pub d: f64,
    #[serde(rename = "Lambda")]
    pub lambda: f64,
    /// Absent when undefined (D = 0).
    pub zeta: Option<f64>,
    #[serde(rename = "K1m")]
    pub k1m: f64,
    #[serde(rename = "DChi2m")]
    pub d_chi2m: f64,
    pub chi2_ratio: f64,
    pub k1_argmax: usize,
    pub d_chi2_argmax: usize,
    pub excluded_infinite: usize,
    pub k_max: usize,
    pub t_m: usize,
    pub t_burn: usize,
}

fn create_dir(out: &Path) -> CliResult<()> {
    fs::create_dir_all(out).kind(Kind::Io, format!("creating output directory {}", out.display()))
}

fn create_file(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .kind(Kind::Io, format!("creating {}", path.display()))
}

fn write_json<S: Serialize>(path: &Path, value: &S) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).kind(Kind::Io, "encoding JSON")?;
    text.push('\n');
    fs::write(path, text).kind(Kind::Io, format!("writing {}", path.display()))
}

/// One paired run; returns the trace and its summary without touching disk.
pub fn run_single(config: &JobConfig) -> CliResult<(RunTrace64, Summary)> {
    let map = config.map()?;
    let base = config.sweep_base(map);
    let run = base.run_config(config.n, config.d)?;
    log::info!("run N={} D={} k_max={} steps={}", run.n, config.d, run.k_max, run.t_m);
    let trace = evolve(&run)?;
    let extrema = track_extrema(&trace, run.t_burn)?;
    let rate = base.rate();
    let summary = Summary {
        n: run.n,
        hbar: run.hbar(),
        d: config.d,
        lambda: rate,
        zeta: composite_parameter(run.hbar(), rate, config.d, &base.exponents).ok(),
        k1m: extrema.k1_max,
        d_chi2m: extrema.d_chi2_max,
        chi2_ratio: extrema.chi2_ratio,
        k1_argmax: extrema.k1_argmax,
        d_chi2_argmax: extrema.d_chi2_argmax,
        excluded_infinite: extrema.excluded_infinite,
        k_max: run.k_max,
        t_m: run.t_m,
        t_burn: run.t_burn,
    };
    Ok((trace, summary))
}

pub fn cmd_run(config: &JobConfig, out: &Path) -> CliResult<Summary> {
    config.check_mode(Mode::Run)?;
    let (trace, summary) = run_single(config)?;
    create_dir(out)?;
    write_trace(create_file(&out.join("trace.csv"))?, &trace)?;
    write_json(&out.join("summary.json"), &summary)?;
    Ok(summary)
}

/// Runs the configured grid in memory.
pub fn sweep_table(config: &JobConfig, workers: usize) -> CliResult<SweepTable64> {
    let grid = config.grid()?;
    if grid.is_empty() {
        log::warn!("sweep grid is empty");
        return Ok(SweepTable64::new(Vec::new()));
    }
    let base = config.sweep_base(config.map()?);
    log::info!("sweeping {} points on {workers} workers", grid.len());
    Ok(run_sweep(&grid, &base, workers)?)
}

pub fn cmd_sweep(config: &JobConfig, out: &Path, workers: usize) -> CliResult<SweepTable64> {
    config.check_mode(Mode::Sweep)?;
    let table = sweep_table(config, workers)?;
    let failed = table.points.iter().filter(|p| p.flag.is_failed()).count();
    if failed > 0 {
        log::warn!("{failed} of {} sweep points failed and are flagged", table.len());
    }
    create_dir(out)?;
    write_sweep(create_file(&out.join("sweep.csv"))?, &table)?;
    Ok(table)
}

/// Input table for `analyze` and `plot`: the flag wins over the config,
/// then the first existing default under `out`.
fn input_path(flag: Option<&Path>, config: &JobConfig, out: &Path, defaults: &[&str]) -> PathBuf {
    if let Some(p) = flag.map(Path::to_path_buf).or_else(|| config.input.clone()) {
        return p;
    }
    let candidates: Vec<PathBuf> = defaults.iter().map(|d| out.join(d)).collect();
    candidates.iter().find(|p| p.exists()).unwrap_or(&candidates[0]).clone()
}

fn load(path: &Path) -> CliResult<Loaded> {
    let file = File::open(path).kind(Kind::Io, format!("opening {}", path.display()))?;
    read_table(file).map_err(|f| Failure::new(f.kind, f.error.context(format!("reading {}", path.display()))))
}

pub fn cmd_analyze(config: &JobConfig, input: Option<&Path>, out: &Path) -> CliResult<Analysis> {
    config.check_mode(Mode::Analyze)?;
    config.validate_analysis()?;
    let path = input_path(input, config, out, &["sweep.csv"]);
    let table = match load(&path)? {
        Loaded::Sweep(t) => t,
        Loaded::Trace(_) => {
            return Err(Failure::config(format!(
                "{} is a trace, not a sweep table",
                path.display()
            )))
        }
    };
    let analysis = analyze_table(&table, config)?;
    create_dir(out)?;
    write_json(&out.join("analysis.json"), &analysis)?;
    Ok(analysis)
}

fn measure_label(m: Measure) -> &'static str {
    match m {
        Measure::K1Max => "K1 max",
        Measure::DChi2Max => "D chi2 max",
    }
}

/// Raw measure against D (log axis) and the same rows against ln(zeta),
/// one series per N.
pub fn sweep_panels(table: &SweepTable64, config: &JobConfig) -> Vec<Panel> {
    let measure: Measure = config.plot.measure.into();
    let e = config.exponents.triple();
    let mut ns: Vec<usize> = table.points.iter().map(|p| p.n).collect();
    ns.sort_unstable();
    ns.dedup();
    let by_n = |f: &dyn Fn(&catscale::SweepPoint64) -> Option<f64>| -> Vec<Series> {
        ns.iter()
            .map(|&n| Series {
                label: format!("N = {n}"),
                points: table
                    .points
                    .iter()
                    .filter(|p| p.n == n && !p.flag.is_failed())
                    .filter_map(|p| f(p).map(|x| (x, p.measure(measure))))
                    .collect(),
            })
            .collect()
    };
    let y_label = measure_label(measure).to_string();
    vec![
        Panel {
            title: format!("{y_label} over the (hbar, D) plane"),
            x_label: "D".into(),
            y_label: y_label.clone(),
            log_x: true,
            log_y: config.plot.log_y,
            series: by_n(&|p| Some(p.d)),
        },
        Panel {
            title: format!("collapse at ({}, {}, {})", e.alpha, e.beta, e.gamma),
            x_label: "ln(zeta)".into(),
            y_label,
            log_x: false,
            log_y: config.plot.log_y,
            series: by_n(&|p| p.ln_zeta(&e).ok()),
        },
    ]
}

pub fn trace_panels(rows: &[[f64; 5]], config: &JobConfig) -> Vec<Panel> {
    let column = |i: usize| rows.iter().map(|r| (r[0], r[i])).collect::<Vec<_>>();
    vec![
        Panel {
            title: "quantum-classical distance".into(),
            x_label: "t".into(),
            y_label: "K1".into(),
            log_x: false,
            log_y: config.plot.log_y,
            series: vec![Series {
                label: "K1".into(),
                points: column(1),
            }],
        },
        Panel {
            title: "structure".into(),
            x_label: "t".into(),
            y_label: "chi2".into(),
            log_x: false,
            log_y: true,
            series: vec![
                Series {
                    label: "classical".into(),
                    points: column(2),
                },
                Series {
                    label: "quantum".into(),
                    points: column(3),
                },
            ],
        },
    ]
}

pub fn cmd_plot(config: &JobConfig, input: Option<&Path>, out: &Path) -> CliResult<PathBuf> {
    config.check_mode(Mode::Plot)?;
    let path = input_path(input, config, out, &["sweep.csv", "trace.csv"]);
    let panels = match load(&path)? {
        Loaded::Sweep(t) => sweep_panels(&t, config),
        Loaded::Trace(rows) => trace_panels(&rows, config),
    };
    if panels.iter().any(|p| p.point_count() == 0) {
        return Err(Failure::analysis(format!("{} has no plottable data", path.display())));
    }
    create_dir(out)?;
    let target = out.join("plot.svg");
    fs::write(&target, render(&panels)).kind(Kind::Io, format!("writing {}", target.display()))?;
    Ok(target)
}
