//! Parameter-plane sweeps and the analyses run on their tables: composite
//! parameter, collapse quality, exponent search, transition fit and the
//! small-`zeta` expansion of the structure ratio.

mod collapse;
mod fit;
mod run;
mod table;

pub use collapse::{
    binned_medians, collapse_spread, noise_monotonicity_violations, search_exponents, top_decade_variation,
    ExponentSearch, DEFAULT_BINS,
};
pub use fit::{fit_chi_expansion, fit_transition, ChiExpansionFit, TransitionFit, DEFAULT_ZETA_CUT};
pub use run::{default_grid, run_point, run_sweep, SweepBase};
pub use table::{
    composite_parameter, ln_composite, ExponentTriple, Measure, PointFlag, RateChoice, SweepPoint, SweepTable,
};
