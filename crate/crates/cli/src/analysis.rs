use catscale::sweep::{collapse_spread, fit_chi_expansion, fit_transition, search_exponents, ExponentTriple, Measure};
use catscale::SweepTable64;
use serde::{Deserialize, Serialize};

use crate::config::JobConfig;
use crate::error::CliResult;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eq6 {
    pub a_prime: f64,
    pub b: f64,
    pub c: f64,
    pub residual: f64,
}

/// Contents of `analysis.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Analysis {
    pub gamma: f64,
    pub spread_at_best: f64,
    #[serde(rename = "spread_at_(2,1,-1)")]
    pub spread_at_reference: f64,
    pub ln_zeta_star: f64,
    pub width: f64,
    pub eq6: Eq6,
    pub rows: usize,
    pub eq6_rows: usize,
}

/// Exponent search, reference collapse, transition fit and small-`zeta`
/// expansion of one table. The transition fit uses the configured
/// exponents; the expansion reads the `zeta` column as stored.
pub fn analyze_table(table: &SweepTable64, config: &JobConfig) -> CliResult<Analysis> {
    config.validate_analysis()?;
    let settings = &config.analysis;
    let measure: Measure = settings.measure.into();
    let best = search_exponents(table, measure, settings.n_bins)?;
    let reference = collapse_spread(table, measure, &ExponentTriple::pinned(-1.0), settings.n_bins)?;
    let transition = fit_transition(table, measure, &config.exponents.triple())?;
    let expansion = fit_chi_expansion(table, settings.zeta_cut)?;
    Ok(Analysis {
        gamma: best.exponents.gamma,
        spread_at_best: best.spread,
        spread_at_reference: reference,
        ln_zeta_star: transition.ln_zeta_star,
        width: transition.width,
        eq6: Eq6 {
            a_prime: expansion.a_prime,
            b: expansion.b,
            c: expansion.c,
            residual: expansion.residual,
        },
        rows: table.len(),
        eq6_rows: expansion.rows,
    })
}
