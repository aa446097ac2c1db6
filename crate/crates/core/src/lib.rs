//! Paired classical and quantum evolution of the noisy cat map on the unit
//! torus, quantum-classical distance measures, and the scaling analysis that
//! collapses the `(hbar, D)` surface onto a composite parameter.
//!
//! The numerics are generic over [`Real`] (`f32` or `f64`); the `*64` aliases
//! below fix the precision used by the command-line tool.

// NaN must fail validation, so `!(x > 0)` is deliberate
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod measures;
pub mod phase_space;
pub mod scalar;
pub mod sweep;

pub use error::{Error, Result};
pub use scalar::Real;

pub type SpectralDensity64 = phase_space::SpectralDensity<f64>;
pub type DensityMatrix64 = phase_space::DensityMatrix<f64>;
pub type ChordField64 = phase_space::ChordField<f64>;
pub type ModeField64 = phase_space::ModeField<f64>;
pub type CatMapSpec64 = dynamics::CatMapSpec<f64>;
pub type RunConfig64 = dynamics::RunConfig<f64>;
pub type RunTrace64 = measures::RunTrace<f64>;
pub type SweepPoint64 = sweep::SweepPoint<f64>;
pub type SweepTable64 = sweep::SweepTable<f64>;
pub type ExponentTriple64 = sweep::ExponentTriple<f64>;
