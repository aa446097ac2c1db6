use crate::error::{invalid, Error, Result};
use crate::Real;

use super::table::{ExponentTriple, Measure, SweepTable};

/// Bins used when scoring collapse; one bin is roughly one grid step in ln D.
pub const DEFAULT_BINS: usize = 12;

fn variance<T: Real>(ys: impl Iterator<Item = T> + Clone) -> (usize, T) {
    let (n, sum) = ys.clone().fold((0usize, T::zero()), |(n, s), y| (n + 1, s + y));
    if n == 0 {
        return (0, T::zero());
    }
    let mean = sum / T::int(n as i64);
    let ss = ys.fold(T::zero(), |acc, y| acc + (y - mean) * (y - mean));
    (n, ss / T::int(n as i64))
}

/// Equal-width bins over the sample x-range; index per sample.
fn bin_indices<T: Real>(xs: &[T], n_bins: usize) -> Vec<usize> {
    let lo = xs.iter().fold(T::infinity(), |a, &x| a.min(x));
    let hi = xs.iter().fold(T::neg_infinity(), |a, &x| a.max(x));
    let width = (hi - lo) / T::int(n_bins as i64);
    xs.iter()
        .map(|&x| {
            if !(width > T::zero()) {
                return 0;
            }
            ((x - lo) / width).floor().to_usize().unwrap_or(0).min(n_bins - 1)
        })
        .collect()
}

/// Count-weighted within-bin variance of the measure over `ln zeta` bins,
/// divided by its total variance. 0 means the rows fall on one curve, 1 means
/// `zeta` explains nothing. Bins holding fewer than two rows are ignored.
pub fn collapse_spread<T: Real>(
    table: &SweepTable<T>,
    measure: Measure,
    e: &ExponentTriple<T>,
    n_bins: usize,
) -> Result<T> {
    if n_bins < 4 {
        return Err(invalid(format!("need at least 4 bins, got {n_bins}")));
    }
    let (n_hbar, n_d) = table.distinct_axes();
    if n_hbar < 2 || n_d < 2 {
        return Err(invalid(format!(
            "collapse needs at least two distinct hbar and D values, got {n_hbar} and {n_d}"
        )));
    }
    let samples = table.samples(measure, e)?;
    let (_, total) = variance(samples.iter().map(|s| s.1));
    let scale = samples.iter().fold(T::zero(), |a, s| a.max(s.1.abs()));
    if !(total.sqrt() > T::tolerance(1e-12) * scale) {
        log::warn!("measure is constant across the table; collapse spread is trivially 0");
        return Ok(T::zero());
    }
    let xs: Vec<T> = samples.iter().map(|s| s.0).collect();
    let bins = bin_indices(&xs, n_bins);
    let mut weighted = T::zero();
    let mut counted = 0usize;
    for b in 0..n_bins {
        let ys = samples.iter().zip(&bins).filter(|(_, &i)| i == b).map(|(s, _)| s.1);
        let (n, var) = variance(ys);
        if n >= 2 {
            weighted += T::int(n as i64) * var;
            counted += n;
        }
    }
    if counted == 0 {
        return Ok(T::one());
    }
    Ok(weighted / T::int(counted as i64) / total)
}

/// Bin centers in `ln zeta` with the median measure of each nonempty bin.
pub fn binned_medians<T: Real>(
    table: &SweepTable<T>,
    measure: Measure,
    e: &ExponentTriple<T>,
    n_bins: usize,
) -> Result<Vec<(T, T)>> {
    if n_bins == 0 {
        return Err(invalid("need at least one bin"));
    }
    let samples = table.samples(measure, e)?;
    if samples.is_empty() {
        return Ok(Vec::new());
    }
    let xs: Vec<T> = samples.iter().map(|s| s.0).collect();
    let lo = xs.iter().fold(T::infinity(), |a, &x| a.min(x));
    let hi = xs.iter().fold(T::neg_infinity(), |a, &x| a.max(x));
    let width = (hi - lo) / T::int(n_bins as i64);
    let bins = bin_indices(&xs, n_bins);
    let mut out = Vec::new();
    for b in 0..n_bins {
        let mut ys: Vec<T> = samples
            .iter()
            .zip(&bins)
            .filter(|(_, &i)| i == b)
            .map(|(s, _)| s.1)
            .collect();
        if ys.is_empty() {
            continue;
        }
        ys.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
        let m = ys.len();
        let median = if m % 2 == 1 {
            ys[m / 2]
        } else {
            (ys[m / 2 - 1] + ys[m / 2]) / T::lit(2.0)
        };
        let center = lo + width * (T::int(b as i64) + T::lit(0.5));
        out.push((center, median));
    }
    Ok(out)
}

/// Spread of the measure among rows within one decade of the largest `zeta`,
/// as a fraction of the measure's full range.
pub fn top_decade_variation<T: Real>(table: &SweepTable<T>, measure: Measure, e: &ExponentTriple<T>) -> Result<T> {
    let samples = table.samples(measure, e)?;
    if samples.is_empty() {
        return Err(Error::Domain("no usable rows".into()));
    }
    let range = |it: &mut dyn Iterator<Item = T>| {
        let (lo, hi) = it.fold((T::infinity(), T::neg_infinity()), |(l, h), y| (l.min(y), h.max(y)));
        hi - lo
    };
    let full = range(&mut samples.iter().map(|s| s.1));
    if !(full > T::zero()) {
        return Ok(T::zero());
    }
    let x_max = samples.iter().fold(T::neg_infinity(), |a, s| a.max(s.0));
    let cut = x_max - T::LN_10();
    let top = range(&mut samples.iter().filter(|s| s.0 >= cut).map(|s| s.1));
    Ok(top / full)
}

/// Pairs `(N, D_lo, D_hi)` of adjacent noise values at fixed `N` where the
/// measure rises by more than `tol` as `D` increases.
pub fn noise_monotonicity_violations<T: Real>(table: &SweepTable<T>, measure: Measure, tol: T) -> Vec<(usize, T, T)> {
    let mut ns: Vec<usize> = table.points.iter().map(|p| p.n).collect();
    ns.sort_unstable();
    ns.dedup();
    let mut out = Vec::new();
    for n in ns {
        let mut rows: Vec<(T, T)> = table
            .points
            .iter()
            .filter(|p| p.n == n && !p.flag.is_failed() && p.measure(measure).is_finite())
            .map(|p| (p.d, p.measure(measure)))
            .collect();
        rows.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite noise"));
        for w in rows.windows(2) {
            if w[1].1 > w[0].1 + tol {
                out.push((n, w[0].0, w[1].0));
            }
        }
    }
    out
}

/// Best exponents found by [`search_exponents`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentSearch<T> {
    pub exponents: ExponentTriple<T>,
    pub spread: T,
}

const GAMMA_LO: f64 = -3.0;
const GAMMA_HI: f64 = 1.0;
const SCAN_POINTS: usize = 41;

/// Minimizes [`collapse_spread`] over `gamma in [-3, 1]` with `alpha = 2`,
/// `beta = 1` pinned: a 41-point scan, then golden-section refinement inside
/// the bracket around the scan minimum. The refined point is kept only if it
/// improves on the scan.
pub fn search_exponents<T: Real>(table: &SweepTable<T>, measure: Measure, n_bins: usize) -> Result<ExponentSearch<T>> {
    let (n_hbar, n_d) = table.distinct_axes();
    if n_hbar < 2 || n_d < 2 {
        return Err(Error::Unidentifiable(format!(
            "table has {n_hbar} distinct hbar and {n_d} distinct D values"
        )));
    }
    warn_if_narrow(table);
    let objective = |g: T| collapse_spread(table, measure, &ExponentTriple::pinned(g), n_bins);

    let lo = T::lit(GAMMA_LO);
    let step = T::lit((GAMMA_HI - GAMMA_LO) / (SCAN_POINTS - 1) as f64);
    let mut scan = Vec::with_capacity(SCAN_POINTS);
    for i in 0..SCAN_POINTS {
        let g = lo + step * T::int(i as i64);
        scan.push((g, objective(g)?));
    }
    let (min_i, &(g_best, s_best)) = scan
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.partial_cmp(&b.1 .1).expect("finite spread"))
        .expect("non-empty scan");
    let s_max = scan.iter().fold(T::neg_infinity(), |a, s| a.max(s.1));
    if s_max - s_best < T::lit(1e-3) {
        return Err(Error::Unidentifiable(format!(
            "collapse spread varies by {} over the gamma scan",
            s_max - s_best
        )));
    }

    let a = scan[min_i.saturating_sub(1)].0;
    let b = scan[(min_i + 1).min(SCAN_POINTS - 1)].0;
    let (g_ref, s_ref) = golden_section(a, b, T::lit(1e-4), objective)?;
    let (gamma, spread) = if s_ref < s_best {
        (g_ref, s_ref)
    } else {
        (g_best, s_best)
    };
    Ok(ExponentSearch {
        exponents: ExponentTriple::pinned(gamma),
        spread,
    })
}

fn warn_if_narrow<T: Real>(table: &SweepTable<T>) {
    let span = |vals: Vec<T>| {
        let lo = vals.iter().fold(T::infinity(), |a, &v| a.min(v));
        let hi = vals.iter().fold(T::neg_infinity(), |a, &v| a.max(v));
        (hi / lo).log10()
    };
    let rows = table.points.iter().filter(|p| !p.flag.is_failed());
    let hbar_decades = span(rows.clone().map(|p| p.hbar).collect());
    let d_decades = span(rows.map(|p| p.d).collect());
    if hbar_decades < T::lit(2.0) || d_decades < T::lit(2.0) {
        log::warn!(
            "exponent search over {hbar_decades:.2} decades of hbar and {d_decades:.2} of D; \
             fewer than two decades weakens identifiability"
        );
    }
}

fn golden_section<T: Real>(mut a: T, mut b: T, tol: T, mut f: impl FnMut(T) -> Result<T>) -> Result<(T, T)> {
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let mut c = b - (b - a) * inv_phi;
    let mut d = a + (b - a) * inv_phi;
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = f(d)?;
        }
    }
    Ok(if fc <= fd { (c, fc) } else { (d, fd) })
}
