use crate::error::{invalid, Result};
use crate::phase_space::{ChordEngine, DensityMatrix, FullChordField, ModeField, ModeIndex, SpectralDensity};
use crate::Real;

/// Isotropic phase-space diffusion applied once per map period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec<T> {
    d: T,
}

impl<T: Real> NoiseSpec<T> {
    pub fn new(d: T) -> Result<Self> {
        if !(d >= T::zero() && d.is_finite()) {
            return Err(invalid(format!(
                "diffusion coefficient must be finite and >= 0, got {d}"
            )));
        }
        Ok(Self { d })
    }

    pub fn d(&self) -> T {
        self.d
    }

    /// `exp(-4 pi^2 D |k|^2)`.
    pub fn damping(&self, k: ModeIndex) -> T {
        let four_pi_sq = T::lit(4.0) * T::PI() * T::PI();
        (-four_pi_sq * self.d * T::int(k.norm_sq())).exp()
    }

    pub(crate) fn damp_full(&self, field: &mut FullChordField<T>) {
        if self.d > T::zero() {
            field.scale_by(|k| self.damping(k));
        }
    }
}

pub fn classical_diffusion<T: Real>(rho: &SpectralDensity<T>, noise: &NoiseSpec<T>) -> SpectralDensity<T> {
    let field = ModeField::from_fn(rho.window(), |k| rho.get(k) * noise.damping(k));
    SpectralDensity::from_field_unchecked(field)
}

/// Damps every chord `W_k` over the full `Z_N x Z_N` label set by the factor
/// of its symmetric representative and transforms back.
pub fn decoherence_step<T: Real>(rho: &DensityMatrix<T>, noise: &NoiseSpec<T>) -> DensityMatrix<T> {
    let engine = ChordEngine::new(rho.dim());
    let mut full = engine.forward(rho);
    noise.damp_full(&mut full);
    engine.inverse(&full)
}
