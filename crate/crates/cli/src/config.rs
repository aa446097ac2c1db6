use std::path::{Path, PathBuf};

use catscale::dynamics::{CatMapSpec, RunConfig};
use catscale::measures::measure_lambda2;
use catscale::sweep::{default_grid, ExponentTriple, Measure, RateChoice, SweepBase, DEFAULT_BINS, DEFAULT_ZETA_CUT};
use catscale::CatMapSpec64;
use serde::Deserialize;

use crate::error::{CliResult, Context, Failure, Kind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Run,
    Sweep,
    Analyze,
    Plot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RateSetting {
    #[default]
    Lambda2,
    Lyapunov,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum MeasureSetting {
    #[default]
    K1Max,
    DChi2Max,
}

impl From<MeasureSetting> for Measure {
    fn from(m: MeasureSetting) -> Self {
        match m {
            MeasureSetting::K1Max => Measure::K1Max,
            MeasureSetting::DChi2Max => Measure::DChi2Max,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Exponents {
    #[serde(default = "two")]
    pub alpha: f64,
    #[serde(default = "one")]
    pub beta: f64,
    #[serde(default = "minus_one")]
    pub gamma: f64,
}

impl Default for Exponents {
    fn default() -> Self {
        Self {
            alpha: 2.0,
            beta: 1.0,
            gamma: -1.0,
        }
    }
}

impl Exponents {
    pub fn triple(&self) -> ExponentTriple<f64> {
        if self.alpha == 2.0 && self.beta == 1.0 {
            ExponentTriple::pinned(self.gamma)
        } else {
            ExponentTriple::new(self.alpha, self.beta, self.gamma)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalysisSettings {
    pub n_bins: usize,
    pub zeta_cut: f64,
    pub measure: MeasureSetting,
}

impl Default for AnalysisSettings {
    fn default() -> Self {
        Self {
            n_bins: DEFAULT_BINS,
            zeta_cut: DEFAULT_ZETA_CUT,
            measure: MeasureSetting::K1Max,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct PlotSettings {
    pub measure: MeasureSetting,
    /// Logarithmic y axis on every panel.
    pub log_y: bool,
}

/// One JSON job description. Every field is optional.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct JobConfig {
    /// If present, must agree with the subcommand.
    pub mode: Option<Mode>,
    pub map: [[i64; 2]; 2],
    pub n: usize,
    pub d: f64,
    /// Sweep axes; a missing list falls back to the default grid's axis.
    pub n_list: Option<Vec<usize>>,
    pub d_list: Option<Vec<f64>>,
    pub k_max: Option<usize>,
    pub t_m: usize,
    pub t_burn: usize,
    pub center: [f64; 2],
    pub exponents: Exponents,
    pub rate: RateSetting,
    /// Growth rate override; measured when absent.
    pub lambda2: Option<f64>,
    pub lambda2_k_max: usize,
    pub lambda2_steps: usize,
    pub analysis: AnalysisSettings,
    pub plot: PlotSettings,
    /// Input table for `analyze` and `plot`, relative to the config file.
    pub input: Option<PathBuf>,
}

impl Default for JobConfig {
    fn default() -> Self {
        Self {
            mode: None,
            map: [[2, 1], [3, 2]],
            n: 64,
            d: 1e-3,
            n_list: None,
            d_list: None,
            k_max: None,
            t_m: RunConfig::<f64>::DEFAULT_STEPS,
            t_burn: RunConfig::<f64>::DEFAULT_BURN,
            center: [0.5, 0.5],
            exponents: Exponents::default(),
            rate: RateSetting::Lambda2,
            lambda2: None,
            lambda2_k_max: 256,
            lambda2_steps: 12,
            analysis: AnalysisSettings::default(),
            plot: PlotSettings::default(),
            input: None,
        }
    }
}

fn two() -> f64 {
    2.0
}

fn one() -> f64 {
    1.0
}

fn minus_one() -> f64 {
    -1.0
}

impl JobConfig {
    /// Reads the config file, or returns defaults when no path is given.
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).kind(Kind::Io, format!("reading config {}", path.display()))?;
        let mut config: JobConfig =
            serde_json::from_str(&text).kind(Kind::Config, format!("parsing config {}", path.display()))?;
        if let Some(input) = config.input.take() {
            let base = path.parent().unwrap_or(Path::new("."));
            config.input = Some(if input.is_absolute() { input } else { base.join(input) });
        }
        Ok(config)
    }

    pub fn check_mode(&self, mode: Mode) -> CliResult<()> {
        match self.mode {
            Some(m) if m != mode => Err(Failure::config(format!(
                "config declares mode {m:?} but the {mode:?} subcommand was invoked"
            ))),
            _ => Ok(()),
        }
    }

    /// Map with its growth rate attached, measured unless overridden.
    pub fn map(&self) -> CliResult<CatMapSpec64> {
        let map = CatMapSpec::new(self.map)?;
        let rate = match self.lambda2 {
            Some(r) => r,
            None => {
                let r = measure_lambda2(&map, self.lambda2_k_max, self.lambda2_steps)?;
                log::info!("measured growth rate Lambda = {r:.6}");
                r
            }
        };
        Ok(map.with_lambda2(rate)?)
    }

    pub fn rate_choice(&self) -> RateChoice {
        match self.rate {
            RateSetting::Lambda2 => RateChoice::Lambda2,
            RateSetting::Lyapunov => RateChoice::Lyapunov,
        }
    }

    pub fn sweep_base(&self, map: CatMapSpec64) -> SweepBase<f64> {
        let mut base = SweepBase::new(map);
        base.t_m = self.t_m;
        base.t_burn = self.t_burn;
        base.center = (self.center[0], self.center[1]);
        base.k_max = self.k_max;
        base.exponents = self.exponents.triple();
        base.rate = self.rate_choice();
        base
    }

    /// Grid in row order: N outer, D inner.
    pub fn grid(&self) -> CliResult<Vec<(usize, f64)>> {
        let default = default_grid::<f64>();
        let mut ns: Vec<usize> = default.iter().map(|p| p.0).collect();
        ns.dedup();
        let ds: Vec<f64> = default.iter().take_while(|p| p.0 == ns[0]).map(|p| p.1).collect();
        let ns = self.n_list.clone().unwrap_or(ns);
        let ds = self.d_list.clone().unwrap_or(ds);
        for &n in &ns {
            if n < 2 {
                return Err(Failure::config(format!(
                    "n_list entry {n}: Hilbert dimension must be at least 2"
                )));
            }
        }
        if let Some(&d) = ds.iter().find(|d| !(**d >= 0.0 && d.is_finite())) {
            return Err(Failure::config(format!(
                "d_list entry {d}: noise strength must be finite and non-negative"
            )));
        }
        Ok(ns.iter().flat_map(|&n| ds.iter().map(move |&d| (n, d))).collect())
    }

    pub fn validate_analysis(&self) -> CliResult<()> {
        if self.analysis.n_bins < 4 {
            return Err(Failure::config(format!(
                "analysis.n_bins must be at least 4, got {}",
                self.analysis.n_bins
            )));
        }
        if !(self.analysis.zeta_cut > 0.0) {
            return Err(Failure::config("analysis.zeta_cut must be positive"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults() {
        let c: JobConfig = serde_json::from_str("{}").unwrap();
        assert_eq!(c, JobConfig::default());
        assert_eq!(c.grid().unwrap().len(), 63);
    }

    #[test]
    fn unknown_field_rejected() {
        assert!(serde_json::from_str::<JobConfig>(r#"{"nn": 3}"#).is_err());
    }

    #[test]
    fn explicit_axes_order() {
        let c: JobConfig = serde_json::from_str(r#"{"n_list": [8, 9], "d_list": [0.1, 0.2, 0.3]}"#).unwrap();
        let g = c.grid().unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g[0], (8, 0.1));
        assert_eq!(g[3], (9, 0.1));
    }

    #[test]
    fn empty_axis_empty_grid() {
        let c: JobConfig = serde_json::from_str(r#"{"n_list": []}"#).unwrap();
        assert!(c.grid().unwrap().is_empty());
    }

    #[test]
    fn bad_axis_entries() {
        let c: JobConfig = serde_json::from_str(r#"{"n_list": [1]}"#).unwrap();
        assert_eq!(c.grid().unwrap_err().kind, Kind::Config);
        let c: JobConfig = serde_json::from_str(r#"{"d_list": [-1.0]}"#).unwrap();
        assert_eq!(c.grid().unwrap_err().kind, Kind::Config);
    }

    #[test]
    fn mode_mismatch() {
        let c: JobConfig = serde_json::from_str(r#"{"mode": "sweep"}"#).unwrap();
        assert!(c.check_mode(Mode::Sweep).is_ok());
        assert_eq!(c.check_mode(Mode::Run).unwrap_err().kind, Kind::Config);
    }
}
