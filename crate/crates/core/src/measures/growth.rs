use crate::dynamics::{classical_step, CatMapSpec};
use crate::error::{Error, Result};
use crate::phase_space::gaussian_density;
use crate::Real;

use super::chi_squared;

/// Variance of the Gaussian used as the starting density for growth-rate runs.
pub const LAMBDA2_SIGMA_SQ: f64 = 0.01;

/// Growth rate of `ln chi^2` under noiseless classical evolution.
///
/// A centered Gaussian of variance [`LAMBDA2_SIGMA_SQ`] is iterated for up to
/// `steps` steps, stopping before `chi^2` reaches `(2 pi K)^2 / 4`. The fit
/// uses the longest run of consecutive log-differences staying within 10% of
/// the run mean (at least two differences); later runs win ties. The rate is
/// the least-squares slope of `ln chi^2` over that run.
pub fn measure_lambda2<T: Real>(map: &CatMapSpec<T>, k_max: usize, steps: usize) -> Result<T> {
    let saturation = {
        let r = T::TAU() * T::int(k_max as i64);
        r * r / T::lit(4.0)
    };
    let center = (T::lit(0.5), T::lit(0.5));
    let mut rho = gaussian_density(center, T::lit(LAMBDA2_SIGMA_SQ), k_max)?;
    let mut log_chi = Vec::with_capacity(steps + 1);
    for t in 0..=steps {
        if t > 0 {
            rho = classical_step(&rho, map);
        }
        let chi = chi_squared(rho.field())?;
        if !(chi > T::zero()) || chi >= saturation {
            break;
        }
        log_chi.push(chi.ln());
    }
    let diffs: Vec<T> = log_chi.windows(2).map(|w| w[1] - w[0]).collect();
    let (start, len) = longest_steady_run(&diffs, T::lit(0.1)).ok_or(Error::NoLinearSegment)?;
    let slope = ls_slope(&log_chi[start..=start + len]);
    if !(slope > T::zero()) {
        return Err(Error::NoLinearSegment);
    }
    Ok(slope)
}

/// (start, length) of the longest run of `diffs` within `tol` of its running
/// mean, requiring length >= 2.
fn longest_steady_run<T: Real>(diffs: &[T], tol: T) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for start in 0..diffs.len() {
        let mut sum = diffs[start];
        let mut len = 1;
        while start + len < diffs.len() {
            let next = diffs[start + len];
            let mean = (sum + next) / T::int(len as i64 + 1);
            let steady = diffs[start..=start + len]
                .iter()
                .all(|d| (*d - mean).abs() <= tol * mean.abs());
            if !steady {
                break;
            }
            sum += next;
            len += 1;
        }
        if len >= 2 && best.is_none_or(|(_, l)| len >= l) {
            best = Some((start, len));
        }
    }
    best
}

fn ls_slope<T: Real>(y: &[T]) -> T {
    let n = T::int(y.len() as i64);
    let x_mean = (n - T::one()) / T::lit(2.0);
    let y_mean = y.iter().fold(T::zero(), |a, &v| a + v) / n;
    let mut sxy = T::zero();
    let mut sxx = T::zero();
    for (i, &v) in y.iter().enumerate() {
        let dx = T::int(i as i64) - x_mean;
        sxy += dx * (v - y_mean);
        sxx += dx * dx;
    }
    sxy / sxx
}
