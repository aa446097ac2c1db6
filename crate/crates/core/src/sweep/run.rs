use rayon::prelude::*;

use crate::dynamics::{evolve, CatMapSpec, RunConfig};
use crate::error::{Error, Result};
use crate::measures::track_extrema;
use crate::phase_space::hbar_for;
use crate::Real;

use super::table::{composite_parameter, ExponentTriple, PointFlag, RateChoice, SweepPoint, SweepTable};

/// Settings shared by every point of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepBase<T> {
    /// Map with its measured growth rate attached.
    pub map: CatMapSpec<T>,
    pub t_m: usize,
    pub t_burn: usize,
    pub center: (T, T),
    /// Fixed window half-width; `None` picks the per-point default.
    pub k_max: Option<usize>,
    pub exponents: ExponentTriple<T>,
    pub rate: RateChoice,
}

impl<T: Real> SweepBase<T> {
    pub fn new(map: CatMapSpec<T>) -> Self {
        Self {
            map,
            t_m: RunConfig::<T>::DEFAULT_STEPS,
            t_burn: RunConfig::<T>::DEFAULT_BURN,
            center: (T::lit(0.5), T::lit(0.5)),
            k_max: None,
            exponents: ExponentTriple::default(),
            rate: RateChoice::default(),
        }
    }

    pub fn rate(&self) -> T {
        match self.rate {
            RateChoice::Lambda2 => self.map.lambda2(),
            RateChoice::Lyapunov => self.map.lyapunov(),
        }
    }

    pub fn run_config(&self, n: usize, d: T) -> Result<RunConfig<T>> {
        let mut config = RunConfig::new(n, d, self.map)?;
        config.t_m = self.t_m;
        config.t_burn = self.t_burn;
        config.center = self.center;
        if let Some(k) = self.k_max {
            config.k_max = k;
        }
        config.validate()?;
        Ok(config)
    }
}

/// Seven dimensions in roughly half-decade steps of `hbar`, crossed with nine
/// log-spaced noise strengths from 1e-5 to 1e-1.
pub fn default_grid<T: Real>() -> Vec<(usize, T)> {
    let ns = [16, 23, 32, 45, 64, 91, 128];
    let ds: Vec<T> = (0..9).map(|i| T::lit(10f64.powf(-5.0 + 0.5 * i as f64))).collect();
    ns.iter().flat_map(|&n| ds.iter().map(move |&d| (n, d))).collect()
}

/// Computes one row. Failures become flagged rows with NaN measures.
pub fn run_point<T: Real>(n: usize, d: T, base: &SweepBase<T>) -> SweepPoint<T> {
    let hbar = hbar_for::<T>(n);
    let rate = base.rate();
    let zeta = composite_parameter(hbar, rate, d, &base.exponents).unwrap_or_else(|_| T::nan());
    let computed = base
        .run_config(n, d)
        .and_then(|config| evolve(&config))
        .and_then(|trace| track_extrema(&trace, base.t_burn));
    let mut point = SweepPoint {
        n,
        hbar,
        d,
        rate,
        zeta,
        k1_max: T::nan(),
        d_chi2_max: T::nan(),
        chi2_ratio: T::nan(),
        flag: PointFlag::Ok,
    };
    match computed {
        Ok(e) => {
            point.k1_max = e.k1_max;
            point.d_chi2_max = e.d_chi2_max;
            point.chi2_ratio = e.chi2_ratio;
            if e.excluded_infinite > 0 {
                point.flag = PointFlag::InfiniteExcluded(e.excluded_infinite);
            }
        }
        Err(err) => {
            log::warn!("sweep point N={n}, D={d} failed: {err}");
            point.flag = PointFlag::Failed(err.to_string());
        }
    }
    point
}

/// Runs every grid point on a pool of `workers` threads; rows come back in
/// grid order regardless of completion order.
pub fn run_sweep<T: Real>(grid: &[(usize, T)], base: &SweepBase<T>, workers: usize) -> Result<SweepTable<T>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::ThreadPool(e.to_string()))?;
    let points = pool.install(|| grid.par_iter().map(|&(n, d)| run_point(n, d, base)).collect());
    Ok(SweepTable::new(points))
}
