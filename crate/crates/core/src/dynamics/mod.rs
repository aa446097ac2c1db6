//! One-step propagators and the paired classical/quantum evolution loop.
//!
//! Each time step applies the map first and the noise second, identically on
//! both sides.

mod catmap;
mod evolve;
mod noise;

pub use catmap::{classical_step, egorov_deviation, quantized_unitary, quantum_step, CatMapSpec};
pub use evolve::{default_k_max, evolve, evolve_classical, RunConfig};
pub use noise::{classical_diffusion, decoherence_step, NoiseSpec};
