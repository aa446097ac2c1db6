use std::ops::Deref;

use num_complex::Complex;
use rustfft::FftPlanner;

#[cfg(test)]
use super::ModeIndex;
use super::{ModeField, ModeWindow};
use crate::error::{invalid, Error, Result};
use crate::Real;

/// Classical phase-space density on the unit torus, held as truncated Fourier
/// coefficients `rho(x) = sum_k c_k exp(2 pi i k.x)`.
///
/// The zero mode is exactly one and the field is hermitian-symmetric. Pointwise
/// positivity is not enforced: truncation may leave small negative values.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDensity<T> {
    field: ModeField<T>,
}

impl<T: Real> SpectralDensity<T> {
    /// Wraps a field, checking normalization and hermitian symmetry.
    pub fn new(field: ModeField<T>) -> Result<Self> {
        let tol = T::tolerance(1e-10);
        let zero = field.zero_mode();
        if (zero.re - T::one()).abs() > tol || zero.im.abs() > tol {
            return Err(Error::Domain(format!("zero mode must be 1, got {zero}")));
        }
        let dev = field.hermitian_deviation();
        if dev > tol {
            return Err(Error::Domain(format!(
                "density is not real: hermitian deviation {dev:e}"
            )));
        }
        let mut field = field;
        let c = field.window().center();
        field.coeffs_mut()[c] = Complex::new(T::one(), T::zero());
        Ok(Self { field })
    }

    /// Uniform density: only the zero mode.
    pub fn uniform(window: ModeWindow) -> Self {
        let mut field = ModeField::zeros(window);
        let c = window.center();
        field.coeffs_mut()[c] = Complex::new(T::one(), T::zero());
        Self { field }
    }

    pub(crate) fn from_field_unchecked(field: ModeField<T>) -> Self {
        debug_assert!(field.hermitian_deviation() <= T::tolerance(1e-9));
        Self { field }
    }

    pub fn field(&self) -> &ModeField<T> {
        &self.field
    }

    pub fn into_field(self) -> ModeField<T> {
        self.field
    }
}

impl<T> Deref for SpectralDensity<T> {
    type Target = ModeField<T>;

    fn deref(&self) -> &ModeField<T> {
        &self.field
    }
}

/// Periodized isotropic Gaussian with variance `hbar / 2` per coordinate,
/// centered at `center`.
pub fn make_coherent_classical<T: Real>(center: (T, T), hbar: T, k_max: usize) -> Result<SpectralDensity<T>> {
    if !(hbar > T::zero()) {
        return Err(invalid("hbar must be positive"));
    }
    gaussian_density(center, hbar / T::lit(2.0), k_max)
}

/// Periodized Gaussian of variance `sigma_sq` per coordinate.
pub fn gaussian_density<T: Real>(center: (T, T), sigma_sq: T, k_max: usize) -> Result<SpectralDensity<T>> {
    let window = ModeWindow::new(k_max)?;
    let two_pi_sq = T::lit(2.0) * T::PI() * T::PI();
    let (q0, p0) = center;
    let field = ModeField::from_fn(window, |k| {
        let envelope = (-two_pi_sq * sigma_sq * T::int(k.norm_sq())).exp();
        // reduce the phase argument before multiplying by 2 pi
        let turns = (T::int(k.kq) * q0 + T::int(k.kp) * p0).fract();
        let phase = -T::TAU() * turns;
        Complex::from_polar(envelope, phase)
    });
    let mut density = SpectralDensity { field };
    let c = window.center();
    density.field.coeffs_mut()[c] = Complex::new(T::one(), T::zero());
    Ok(density)
}

/// Real-valued samples of a density on a uniform `size x size` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RealGrid<T> {
    size: usize,
    values: Vec<T>,
}

impl<T: Real> RealGrid<T> {
    pub fn from_vec(size: usize, values: Vec<T>) -> Result<Self> {
        if values.len() != size * size || size == 0 {
            return Err(Error::Configuration(format!(
                "grid of side {size} needs {} values, got {}",
                size * size,
                values.len()
            )));
        }
        Ok(Self { size, values })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Sample at `(q, p) = (a / size, b / size)`.
    pub fn get(&self, a: usize, b: usize) -> T {
        self.values[a * self.size + b]
    }

    /// Grid average, the trace over the unit torus.
    pub fn mean(&self) -> T {
        let sum = self.values.iter().fold(T::zero(), |acc, &v| acc + v);
        sum / T::int(self.values.len() as i64)
    }

    pub fn min(&self) -> T {
        self.values.iter().fold(T::infinity(), |acc, &v| acc.min(v))
    }
}

/// Inverse Fourier synthesis of `density` on a `grid x grid` lattice.
pub fn real_space_sample<T: Real>(density: &SpectralDensity<T>, grid: usize) -> Result<RealGrid<T>> {
    let k_max = density.k_max();
    if grid < 2 * k_max + 1 {
        return Err(Error::Configuration(format!(
            "grid {grid} aliases a window of half-width {k_max}; need at least {}",
            2 * k_max + 1
        )));
    }
    let mut buf = vec![Complex::new(T::zero(), T::zero()); grid * grid];
    for (i, &c) in density.coeffs().iter().enumerate() {
        let k = density.window().mode_at(i);
        let a = k.kq.rem_euclid(grid as i64) as usize;
        let b = k.kp.rem_euclid(grid as i64) as usize;
        buf[a * grid + b] = c;
    }
    let mut planner = FftPlanner::<T>::new();
    let fft = planner.plan_fft_inverse(grid);
    // rows (p direction)
    for row in buf.chunks_exact_mut(grid) {
        fft.process(row);
    }
    // columns (q direction)
    let mut col = vec![Complex::new(T::zero(), T::zero()); grid];
    for b in 0..grid {
        for a in 0..grid {
            col[a] = buf[a * grid + b];
        }
        fft.process(&mut col);
        for a in 0..grid {
            buf[a * grid + b] = col[a];
        }
    }
    let scale = density.norm_sq().sqrt().max(T::one());
    debug_assert!(buf.iter().all(|z| z.im.abs() <= T::tolerance(1e-10) * scale));
    RealGrid::from_vec(grid, buf.into_iter().map(|z| z.re).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_mode_is_one() {
        let rho = make_coherent_classical((0.5, 0.5), 0.01, 6).unwrap();
        assert_eq!(rho.get(ModeIndex::ZERO), Complex::new(1.0, 0.0));
    }

    #[test]
    fn first_mode_closed_form() {
        let hbar = 1.0 / (std::f64::consts::TAU * 64.0);
        let rho = make_coherent_classical((0.0, 0.0), hbar, 4).unwrap();
        let c = rho.get(ModeIndex::new(1, 0));
        let expected = (-std::f64::consts::PI / 128.0).exp();
        assert!((c.re - expected).abs() < 1e-14);
        assert!((expected - 0.97576).abs() < 1e-5);
        assert!(c.im.abs() < 1e-15);
    }

    #[test]
    fn half_period_center_flips_sign() {
        let rho = make_coherent_classical::<f64>((0.5, 0.0), 0.01, 4).unwrap();
        let c = rho.get(ModeIndex::new(1, 0));
        assert!(c.re < 0.0);
        assert!(c.im.abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_hbar_and_window() {
        assert!(make_coherent_classical((0.5, 0.5), 0.0, 4).is_err());
        assert!(make_coherent_classical((0.5, 0.5), 0.01, 0).is_err());
    }

    #[test]
    fn uniform_samples_to_one() {
        let rho = SpectralDensity::<f64>::uniform(ModeWindow::new(3).unwrap());
        let grid = real_space_sample(&rho, 8).unwrap();
        assert!(grid.values().iter().all(|&v| (v - 1.0).abs() < 1e-14));
    }

    #[test]
    fn single_mode_pair_cosine() {
        let w = ModeWindow::new(2).unwrap();
        let field = ModeField::from_fn(w, |k| match (k.kq, k.kp) {
            (0, 0) => Complex::new(1.0, 0.0),
            (1, 0) | (-1, 0) => Complex::new(0.25, 0.0),
            _ => Complex::new(0.0, 0.0),
        });
        let rho = SpectralDensity::new(field).unwrap();
        let g = 8;
        let grid = real_space_sample(&rho, g).unwrap();
        for a in 0..g {
            for b in 0..g {
                let q = a as f64 / g as f64;
                let expected = 1.0 + 0.5 * (std::f64::consts::TAU * q).cos();
                assert!((grid.get(a, b) - expected).abs() < 1e-13);
            }
        }
        assert!((grid.mean() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn small_grid_rejected() {
        let rho = SpectralDensity::<f64>::uniform(ModeWindow::new(3).unwrap());
        assert!(matches!(real_space_sample(&rho, 6), Err(Error::Configuration(_))));
    }

    #[test]
    fn gaussian_is_nonnegative_on_grid() {
        let hbar = 1.0 / (std::f64::consts::TAU * 16.0);
        let rho = make_coherent_classical((0.5, 0.5), hbar, 12).unwrap();
        let grid = real_space_sample(&rho, 32).unwrap();
        assert!(grid.min() >= -1e-6);
    }

    #[test]
    fn parseval() {
        let rho = make_coherent_classical((0.3, 0.7), 0.004, 10).unwrap();
        let g = 21;
        let grid = real_space_sample(&rho, g).unwrap();
        let grid_sq = grid.values().iter().map(|v| v * v).sum::<f64>() / (g * g) as f64;
        let modes = rho.norm_sq();
        assert!(((grid_sq - modes) / modes).abs() < 1e-8);
    }

    #[test]
    fn non_hermitian_rejected() {
        let w = ModeWindow::new(1).unwrap();
        let field = ModeField::from_fn(w, |k| {
            if k == ModeIndex::ZERO {
                Complex::new(1.0, 0.0)
            } else if k == ModeIndex::new(1, 0) {
                Complex::new(0.1, 0.0)
            } else {
                Complex::new(0.0, 0.0)
            }
        });
        assert!(SpectralDensity::new(field).is_err());
    }
}
