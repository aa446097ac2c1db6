use crate::error::{invalid, Error, Result};
use crate::Real;

/// Per-step record of one paired run, sampled at t = 0..=steps.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace<T> {
    d: T,
    k1_distance: Vec<T>,
    chi2_classical: Vec<T>,
    chi2_quantum: Vec<T>,
    d_chi2_quantum: Vec<T>,
}

impl<T: Real> RunTrace<T> {
    pub fn new(d: T) -> Self {
        Self::with_capacity(d, 0)
    }

    pub fn with_capacity(d: T, steps: usize) -> Self {
        let cap = steps + 1;
        Self {
            d,
            k1_distance: Vec::with_capacity(cap),
            chi2_classical: Vec::with_capacity(cap),
            chi2_quantum: Vec::with_capacity(cap),
            d_chi2_quantum: Vec::with_capacity(cap),
        }
    }

    /// Appends one sample; `D chi^2_q` is derived from the stored `D`.
    pub fn push(&mut self, k1: T, chi2_classical: T, chi2_quantum: T) {
        self.k1_distance.push(k1);
        self.chi2_classical.push(chi2_classical);
        self.chi2_quantum.push(chi2_quantum);
        self.d_chi2_quantum.push(self.d * chi2_quantum);
    }

    /// Number of completed steps (one less than the sample count).
    pub fn steps(&self) -> usize {
        self.k1_distance.len().saturating_sub(1)
    }

    pub fn d(&self) -> T {
        self.d
    }

    pub fn k1_distance(&self) -> &[T] {
        &self.k1_distance
    }

    pub fn chi2_classical(&self) -> &[T] {
        &self.chi2_classical
    }

    pub fn chi2_quantum(&self) -> &[T] {
        &self.chi2_quantum
    }

    pub fn d_chi2_quantum(&self) -> &[T] {
        &self.d_chi2_quantum
    }
}

/// Classical `chi^2` below this is roundoff-level structure and leaves the
/// quantum/classical ratio undefined.
pub const CHI2_RESOLUTION: f64 = 1e-20;

/// Time maxima of a trace after burn-in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrema<T> {
    pub k1_max: T,
    pub k1_argmax: usize,
    pub d_chi2_max: T,
    pub d_chi2_argmax: usize,
    /// `chi^2_q / chi^2_c` at `d_chi2_argmax`; NaN when the classical value is
    /// below [`CHI2_RESOLUTION`].
    pub chi2_ratio: T,
    /// Samples with infinite K1 left out of `k1_max`.
    pub excluded_infinite: usize,
}

/// Maxima of K1 and `D chi^2_q` over `t in (t_burn, steps]`. Infinite K1
/// samples are skipped and counted.
pub fn track_extrema<T: Real>(trace: &RunTrace<T>, t_burn: usize) -> Result<Extrema<T>> {
    let steps = trace.steps();
    if trace.k1_distance.is_empty() || t_burn >= steps {
        return Err(invalid(format!(
            "burn-in {t_burn} must be below the step count {steps}"
        )));
    }
    let range = t_burn + 1..=steps;

    let mut excluded = 0;
    let mut k1: Option<(usize, T)> = None;
    for t in range.clone() {
        let v = trace.k1_distance[t];
        if !v.is_finite() {
            excluded += 1;
            continue;
        }
        if k1.is_none_or(|(_, best)| v > best) {
            k1 = Some((t, v));
        }
    }
    let (k1_argmax, k1_max) = k1.ok_or(Error::AllSamplesInfinite)?;
    if excluded > 0 {
        log::warn!("{excluded} infinite K1 samples excluded from the maximum");
    }

    let mut d_chi2_argmax = t_burn + 1;
    for t in range {
        if trace.d_chi2_quantum[t] > trace.d_chi2_quantum[d_chi2_argmax] {
            d_chi2_argmax = t;
        }
    }
    let classical = trace.chi2_classical[d_chi2_argmax];
    let chi2_ratio = if classical > T::tolerance(CHI2_RESOLUTION) {
        trace.chi2_quantum[d_chi2_argmax] / classical
    } else {
        T::nan()
    };
    Ok(Extrema {
        k1_max,
        k1_argmax,
        d_chi2_max: trace.d_chi2_quantum[d_chi2_argmax],
        d_chi2_argmax,
        chi2_ratio,
        excluded_infinite: excluded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace_from(k1: &[f64], chi_q: &[f64]) -> RunTrace<f64> {
        let mut t = RunTrace::new(0.5);
        for (&a, &b) in k1.iter().zip(chi_q) {
            t.push(a, 2.0, b);
        }
        t
    }

    #[test]
    fn monotone_series_peaks_at_end() {
        let t = trace_from(&[0.0, 0.1, 0.2, 0.3, 0.4], &[1.0, 2.0, 3.0, 4.0, 5.0]);
        let e = track_extrema(&t, 1).unwrap();
        assert_eq!((e.k1_max, e.k1_argmax), (0.4, 4));
        assert_eq!((e.d_chi2_max, e.d_chi2_argmax), (2.5, 4));
        assert_eq!(e.chi2_ratio, 2.5);
    }

    #[test]
    fn constant_series() {
        let t = trace_from(&[0.7; 6], &[3.0; 6]);
        let e = track_extrema(&t, 2).unwrap();
        assert_eq!(e.k1_max, 0.7);
        assert_eq!(e.d_chi2_max, 1.5);
    }

    #[test]
    fn burn_in_excludes_early_peak() {
        let t = trace_from(&[0.0, 9.0, 9.0, 0.2, 0.1], &[9.0, 9.0, 9.0, 1.0, 0.5]);
        let e = track_extrema(&t, 2).unwrap();
        assert_eq!((e.k1_max, e.k1_argmax), (0.2, 3));
        assert_eq!(e.d_chi2_argmax, 3);
    }

    #[test]
    fn infinite_samples_skipped() {
        let t = trace_from(&[0.0, 0.1, f64::INFINITY, 0.3, f64::INFINITY], &[1.0; 5]);
        let e = track_extrema(&t, 0).unwrap();
        assert_eq!(e.k1_max, 0.3);
        assert_eq!(e.excluded_infinite, 2);
        let all = trace_from(&[0.0, f64::INFINITY, f64::INFINITY], &[1.0; 3]);
        assert_eq!(track_extrema(&all, 0).unwrap_err(), Error::AllSamplesInfinite);
    }

    #[test]
    fn unresolved_classical_structure_has_no_ratio() {
        let mut t = RunTrace::<f64>::new(0.1);
        for chi_c in [1.0, 1e-3, 1e-30] {
            t.push(0.0, chi_c, 1e-29);
        }
        assert!(track_extrema(&t, 1).unwrap().chi2_ratio.is_nan());
    }

    #[test]
    fn burn_in_must_leave_samples() {
        let t = trace_from(&[0.0, 0.1, 0.2], &[1.0; 3]);
        assert!(track_extrema(&t, 2).is_err());
        assert!(track_extrema(&RunTrace::<f64>::new(1.0), 0).is_err());
    }
}
