use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::Real;

/// Exponents of `zeta = hbar^alpha rate^beta D^gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentTriple<T> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
    /// `alpha` held fixed during searches; any common power of `zeta`
    /// collapses identically, so one exponent has to be pinned.
    pub alpha_pinned: bool,
}

impl<T: Real> ExponentTriple<T> {
    pub fn new(alpha: T, beta: T, gamma: T) -> Self {
        Self {
            alpha,
            beta,
            gamma,
            alpha_pinned: false,
        }
    }

    /// `(2, 1, gamma)` with `alpha` pinned.
    pub fn pinned(gamma: T) -> Self {
        Self {
            alpha: T::lit(2.0),
            beta: T::one(),
            gamma,
            alpha_pinned: true,
        }
    }
}

impl<T: Real> Default for ExponentTriple<T> {
    fn default() -> Self {
        Self::pinned(-T::one())
    }
}

/// Which rate stands in for `lambda` inside `zeta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RateChoice {
    /// Measured growth rate of `ln chi^2`.
    #[default]
    Lambda2,
    /// Lyapunov exponent of the map.
    Lyapunov,
}

/// `ln zeta = alpha ln hbar + beta ln rate + gamma ln D`, evaluated in log
/// space so that large exponents do not overflow.
pub fn ln_composite<T: Real>(hbar: T, rate: T, d: T, e: &ExponentTriple<T>) -> Result<T> {
    if !(hbar > T::zero() && rate > T::zero() && d > T::zero()) {
        return Err(invalid(format!(
            "composite parameter needs positive inputs, got hbar={hbar}, rate={rate}, D={d}"
        )));
    }
    Ok(e.alpha * hbar.ln() + e.beta * rate.ln() + e.gamma * d.ln())
}

/// `hbar^alpha rate^beta D^gamma`.
pub fn composite_parameter<T: Real>(hbar: T, rate: T, d: T, e: &ExponentTriple<T>) -> Result<T> {
    ln_composite(hbar, rate, d, e)?;
    Ok(hbar.powf(e.alpha) * rate.powf(e.beta) * d.powf(e.gamma))
}

/// Outcome marker of one sweep point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointFlag {
    Ok,
    /// Valid, but this many infinite K1 samples were skipped.
    InfiniteExcluded(usize),
    /// The point could not be computed; its measures are NaN.
    Failed(String),
}

impl PointFlag {
    pub fn is_failed(&self) -> bool {
        matches!(self, PointFlag::Failed(_))
    }
}

impl fmt::Display for PointFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointFlag::Ok => f.write_str("ok"),
            PointFlag::InfiniteExcluded(n) => write!(f, "k1_inf_excluded:{n}"),
            PointFlag::Failed(msg) => write!(f, "error:{msg}"),
        }
    }
}

impl FromStr for PointFlag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "ok" {
            return Ok(PointFlag::Ok);
        }
        if let Some(n) = s.strip_prefix("k1_inf_excluded:") {
            let n = n.parse().map_err(|_| invalid(format!("bad flag count in {s:?}")))?;
            return Ok(PointFlag::InfiniteExcluded(n));
        }
        if let Some(msg) = s.strip_prefix("error:") {
            return Ok(PointFlag::Failed(msg.to_string()));
        }
        Err(invalid(format!("unknown point flag {s:?}")))
    }
}

/// One `(N, D)` result.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint<T> {
    pub n: usize,
    pub hbar: T,
    pub d: T,
    /// Value substituted for `lambda` in `zeta`.
    pub rate: T,
    pub zeta: T,
    pub k1_max: T,
    pub d_chi2_max: T,
    pub chi2_ratio: T,
    pub flag: PointFlag,
}

/// Measure column selected for analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    K1Max,
    DChi2Max,
}

impl<T: Real> SweepPoint<T> {
    pub fn measure(&self, m: Measure) -> T {
        match m {
            Measure::K1Max => self.k1_max,
            Measure::DChi2Max => self.d_chi2_max,
        }
    }

    pub fn ln_zeta(&self, e: &ExponentTriple<T>) -> Result<T> {
        ln_composite(self.hbar, self.rate, self.d, e)
    }
}

/// Sweep rows in grid order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepTable<T> {
    pub points: Vec<SweepPoint<T>>,
}

impl<T: Real> SweepTable<T> {
    pub fn new(points: Vec<SweepPoint<T>>) -> Self {
        Self { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `(ln zeta, measure)` for rows that computed and have a finite measure.
    pub fn samples(&self, m: Measure, e: &ExponentTriple<T>) -> Result<Vec<(T, T)>> {
        let mut out = Vec::with_capacity(self.points.len());
        for p in self.points.iter().filter(|p| !p.flag.is_failed()) {
            let y = p.measure(m);
            if y.is_finite() {
                out.push((p.ln_zeta(e)?, y));
            }
        }
        Ok(out)
    }

    /// Number of distinct `hbar` and `D` values among usable rows.
    pub fn distinct_axes(&self) -> (usize, usize) {
        let mut hbar: Vec<T> = Vec::new();
        let mut d: Vec<T> = Vec::new();
        for p in self.points.iter().filter(|p| !p.flag.is_failed()) {
            if !hbar.contains(&p.hbar) {
                hbar.push(p.hbar);
            }
            if !d.contains(&p.d) {
                d.push(p.d);
            }
        }
        (hbar.len(), d.len())
    }
}
