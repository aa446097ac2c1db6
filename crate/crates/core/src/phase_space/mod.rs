//! Classical densities and quantum states on the unit torus, in matrix and
//! Fourier (chord) form.
//!
//! Every mode-space object lives on a square window `[-K, K]^2` of integer
//! wavenumbers, stored row-major with `k_q` as the slow index.

mod field;
mod matrix;
mod quantum;
mod spectral;

pub use field::{ModeField, ModeIndex, ModeWindow};
pub use matrix::CMatrix;
pub(crate) use quantum::ChordEngine;
pub use quantum::{
    chord_transform, full_chord_transform, inverse_chord, make_coherent_quantum, translation_operator, ChordField,
    DensityMatrix, FullChordField,
};
pub use spectral::{gaussian_density, make_coherent_classical, real_space_sample, RealGrid, SpectralDensity};

use crate::Real;

/// Effective Planck constant of an `n`-dimensional torus quantization.
pub fn hbar_for<T: Real>(n: usize) -> T {
    T::one() / (T::TAU() * T::int(n as i64))
}
