use std::fmt;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::Real;

/// Integer wavenumber pair on the unit torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ModeIndex {
    pub kq: i64,
    pub kp: i64,
}

impl ModeIndex {
    pub const ZERO: ModeIndex = ModeIndex { kq: 0, kp: 0 };

    pub const fn new(kq: i64, kp: i64) -> Self {
        Self { kq, kp }
    }

    pub fn norm_sq(self) -> i64 {
        self.kq * self.kq + self.kp * self.kp
    }
}

impl std::ops::Neg for ModeIndex {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(-self.kq, -self.kp)
    }
}

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.kq, self.kp)
    }
}

/// Square window `[-k_max, k_max]^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeWindow {
    k_max: usize,
}

impl ModeWindow {
    pub fn new(k_max: usize) -> Result<Self> {
        if k_max == 0 {
            return Err(Error::InvalidParameter("mode window half-width must be >= 1".into()));
        }
        Ok(Self { k_max })
    }

    pub fn k_max(self) -> usize {
        self.k_max
    }

    pub fn side(self) -> usize {
        2 * self.k_max + 1
    }

    pub fn len(self) -> usize {
        self.side() * self.side()
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn contains(self, k: ModeIndex) -> bool {
        let m = self.k_max as i64;
        k.kq.abs() <= m && k.kp.abs() <= m
    }

    pub fn index_of(self, k: ModeIndex) -> Option<usize> {
        if !self.contains(k) {
            return None;
        }
        let m = self.k_max as i64;
        Some(((k.kq + m) as usize) * self.side() + (k.kp + m) as usize)
    }

    pub fn mode_at(self, index: usize) -> ModeIndex {
        let m = self.k_max as i64;
        let side = self.side();
        ModeIndex::new((index / side) as i64 - m, (index % side) as i64 - m)
    }

    pub fn center(self) -> usize {
        self.len() / 2
    }

    /// Modes in storage order.
    pub fn modes(self) -> impl Iterator<Item = ModeIndex> {
        (0..self.len()).map(move |i| self.mode_at(i))
    }
}

/// Complex coefficients over a [`ModeWindow`].
///
/// Both the classical Fourier coefficients and the quantum chord values are
/// mode fields, so every distance measure accepts this type.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeField<T> {
    window: ModeWindow,
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> ModeField<T> {
    pub fn zeros(window: ModeWindow) -> Self {
        Self {
            window,
            coeffs: vec![Complex::new(T::zero(), T::zero()); window.len()],
        }
    }

    pub fn from_vec(window: ModeWindow, coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.len() != window.len() {
            return Err(Error::Configuration(format!(
                "window of half-width {} needs {} coefficients, got {}",
                window.k_max(),
                window.len(),
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::Domain("non-finite mode coefficient".into()));
        }
        Ok(Self { window, coeffs })
    }

    /// Builds a field by evaluating `f` on every mode.
    pub fn from_fn(window: ModeWindow, mut f: impl FnMut(ModeIndex) -> Complex<T>) -> Self {
        let coeffs = window.modes().map(&mut f).collect();
        Self { window, coeffs }
    }

    pub fn window(&self) -> ModeWindow {
        self.window
    }

    pub fn k_max(&self) -> usize {
        self.window.k_max()
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.coeffs
    }

    /// Coefficient at `k`; zero outside the window.
    pub fn get(&self, k: ModeIndex) -> Complex<T> {
        self.window
            .index_of(k)
            .map(|i| self.coeffs[i])
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    pub fn zero_mode(&self) -> Complex<T> {
        self.coeffs[self.window.center()]
    }

    /// `sum_k |c_k|^2`.
    pub fn norm_sq(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, c| acc + c.norm_sqr())
    }

    /// Largest `|c(-k) - conj(c(k))|` over the window.
    pub fn hermitian_deviation(&self) -> T {
        let n = self.coeffs.len();
        (0..n).fold(T::zero(), |acc, i| {
            // storage is point-symmetric: index of -k is n - 1 - i
            let d = (self.coeffs[n - 1 - i] - self.coeffs[i].conj()).norm();
            acc.max(d)
        })
    }

    /// Restriction to a smaller centered window.
    pub fn restrict(&self, window: ModeWindow) -> Result<Self> {
        if window.k_max() > self.k_max() {
            return Err(Error::Configuration(format!(
                "cannot restrict window {} to larger window {}",
                self.k_max(),
                window.k_max()
            )));
        }
        Ok(Self::from_fn(window, |k| self.get(k)))
    }
}
