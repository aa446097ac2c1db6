//! Quantum-classical distances, structure measures, their time extrema, and
//! the growth-rate estimator.

mod distance;
mod growth;
mod trace;

pub use distance::{chi_squared, k1_distance, k1_distance_grid, k_epsilon, overlap};
pub use growth::{measure_lambda2, LAMBDA2_SIGMA_SQ};
pub use trace::{track_extrema, Extrema, RunTrace, CHI2_RESOLUTION};
