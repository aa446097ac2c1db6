use crate::error::{invalid, Result};
use crate::measures::{chi_squared, k1_distance, RunTrace};
use crate::phase_space::{
    hbar_for, make_coherent_classical, make_coherent_quantum, ChordEngine, ModeWindow, SpectralDensity,
};
use crate::Real;

use super::catmap::{classical_step, quantized_unitary, quantum_step, CatMapSpec};
use super::noise::{classical_diffusion, NoiseSpec};

/// Window half-width covering four times the metastable structure radius
/// `sqrt(lambda2 / 2D)`, at least 32, and below `N / 2` so that every window
/// mode has a distinct chord label.
pub fn default_k_max<T: Real>(n: usize, lambda2: T, d: T) -> usize {
    let cap = ((n.saturating_sub(1)) / 2).max(1);
    let radius = (lambda2 / (T::lit(2.0) * d)).sqrt() * T::lit(4.0);
    let wanted = match radius.ceil().to_usize() {
        Some(r) if radius.is_finite() => r.max(32),
        _ => usize::MAX,
    };
    wanted.min(cap)
}

/// Parameters of one paired classical/quantum run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig<T> {
    pub n: usize,
    pub noise: NoiseSpec<T>,
    pub map: CatMapSpec<T>,
    pub k_max: usize,
    pub t_m: usize,
    pub t_burn: usize,
    pub center: (T, T),
}

impl<T: Real> RunConfig<T> {
    pub const DEFAULT_STEPS: usize = 40;
    pub const DEFAULT_BURN: usize = 2;

    /// Defaults: 40 steps, burn-in 2, centered at (0.5, 0.5), window from
    /// [`default_k_max`] using the map's growth rate.
    pub fn new(n: usize, d: T, map: CatMapSpec<T>) -> Result<Self> {
        let noise = NoiseSpec::new(d)?;
        let config = Self {
            n,
            noise,
            k_max: default_k_max(n, map.lambda2(), d),
            map,
            t_m: Self::DEFAULT_STEPS,
            t_burn: Self::DEFAULT_BURN,
            center: (T::lit(0.5), T::lit(0.5)),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn hbar(&self) -> T {
        hbar_for(self.n)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(invalid(format!("Hilbert dimension must be at least 2, got {}", self.n)));
        }
        if self.k_max == 0 || self.k_max >= self.n {
            return Err(crate::Error::Configuration(format!(
                "mode window half-width {} must lie in [1, N) with N = {}",
                self.k_max, self.n
            )));
        }
        if self.t_m <= self.t_burn {
            return Err(invalid(format!(
                "run length {} must exceed burn-in {}",
                self.t_m, self.t_burn
            )));
        }
        let (q, p) = self.center;
        if !(q.is_finite() && p.is_finite()) {
            return Err(invalid("initial center must be finite"));
        }
        Ok(())
    }
}

/// Runs the paired evolution, recording after every full (map, noise) step.
pub fn evolve<T: Real>(config: &RunConfig<T>) -> Result<RunTrace<T>> {
    config.validate()?;
    let n = config.n;
    let window = ModeWindow::new(config.k_max)?;
    let u = quantized_unitary(&config.map, n)?;
    let engine = ChordEngine::new(n);

    let mut classical = make_coherent_classical(config.center, config.hbar(), config.k_max)?;
    let mut quantum = make_coherent_quantum(config.center, n)?;
    let mut full = engine.forward(&quantum);
    let mut trace = RunTrace::with_capacity(config.noise.d(), config.t_m);

    for t in 0..=config.t_m {
        if t > 0 {
            quantum = quantum_step(&quantum, &u);
            full = engine.forward(&quantum);
            config.noise.damp_full(&mut full);
            quantum = engine.inverse(&full);
            classical = classical_diffusion(&classical_step(&classical, &config.map), &config.noise);
        }
        let chords = full.window(window.k_max())?;
        trace.push(
            k1_distance(chords.field(), classical.field())?,
            chi_squared(classical.field())?,
            chi_squared(chords.field())?,
        );
    }
    Ok(trace)
}

/// Classical-only run returning `chi^2` at t = 0..=steps.
pub fn evolve_classical<T: Real>(
    initial: &SpectralDensity<T>,
    map: &CatMapSpec<T>,
    noise: &NoiseSpec<T>,
    steps: usize,
) -> Result<Vec<T>> {
    let mut rho = initial.clone();
    let mut out = Vec::with_capacity(steps + 1);
    out.push(chi_squared(rho.field())?);
    for _ in 0..steps {
        rho = classical_diffusion(&classical_step(&rho, map), noise);
        out.push(chi_squared(rho.field())?);
    }
    Ok(out)
}
