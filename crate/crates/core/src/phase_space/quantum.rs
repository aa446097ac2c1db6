use std::ops::Deref;
use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::{hbar_for, CMatrix, ModeField, ModeIndex, ModeWindow};
use crate::error::{invalid, Error, Result};
use crate::scalar::symmetric_rep;
use crate::Real;

/// Density matrix of an `N`-level torus quantization, `hbar = 1 / (2 pi N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    matrix: CMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates hermiticity and unit trace to 1e-10.
    pub fn new(matrix: CMatrix<T>) -> Result<Self> {
        if matrix.dim() < 2 {
            return Err(invalid("Hilbert dimension must be at least 2"));
        }
        let tol = T::tolerance(1e-10);
        let herm = matrix.hermitian_deviation();
        if herm > tol {
            return Err(Error::Domain(format!(
                "density matrix not hermitian (deviation {herm:e})"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::Domain(format!("density matrix trace is {tr}, expected 1")));
        }
        Ok(Self { matrix })
    }

    /// Maximally mixed state `I / N`.
    pub fn maximally_mixed(n: usize) -> Result<Self> {
        let mut m = CMatrix::identity(n);
        m.scale(Complex::new(T::one() / T::int(n as i64), T::zero()));
        Self::new(m)
    }

    pub fn from_pure(psi: &[Complex<T>]) -> Result<Self> {
        let norm = psi.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
        if !(norm > T::zero()) {
            return Err(invalid("state vector has zero norm"));
        }
        let normalized: Vec<_> = psi.iter().map(|z| z / norm).collect();
        Self::new(CMatrix::outer(&normalized))
    }

    pub(crate) fn from_matrix_unchecked(matrix: CMatrix<T>) -> Self {
        debug_assert!(matrix.hermitian_deviation() <= T::tolerance(1e-8));
        Self { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn hbar(&self) -> T {
        hbar_for(self.dim())
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn trace(&self) -> Complex<T> {
        self.matrix.trace()
    }

    /// `Tr[rho^2]`.
    pub fn purity(&self) -> T {
        self.matrix.frobenius_sq()
    }
}

fn unit<T: Real>(angle: T) -> Complex<T> {
    Complex::from_polar(T::one(), angle)
}

/// Phase `exp(i pi num / n)` with `num` reduced mod `2n` first.
fn half_turn_phase<T: Real>(num: i64, n: usize) -> Complex<T> {
    let r = num.rem_euclid(2 * n as i64);
    unit(T::PI() * T::int(r) / T::int(n as i64))
}

/// Torus coherent state `|psi><psi|` centered at `(q0, p0)`.
///
/// Position amplitudes are the Gaussian of width `hbar` periodized over
/// `|m| <= 3` images, each carrying the momentum phase at its unwrapped
/// position.
pub fn make_coherent_quantum<T: Real>(center: (T, T), n: usize) -> Result<DensityMatrix<T>> {
    if n < 2 {
        return Err(invalid("Hilbert dimension must be at least 2"));
    }
    let (q0, p0) = center;
    let nf = T::int(n as i64);
    let psi: Vec<Complex<T>> = (0..n)
        .map(|j| {
            let q = T::int(j as i64) / nf;
            (-3..=3).fold(Complex::new(T::zero(), T::zero()), |acc, m| {
                let x = q - q0 + T::int(m);
                let envelope = (-T::PI() * nf * x * x).exp();
                let turns = (p0 * T::int(j as i64 + m * n as i64)).fract();
                acc + unit::<T>(T::TAU() * turns) * envelope
            })
        })
        .collect();
    DensityMatrix::from_pure(&psi)
}

/// Discrete phase-space displacement `T(k)`, the Weyl operator of
/// `exp(2 pi i (k_q q + k_p p))`:
/// `T(k)[j', j] = exp(-i pi k_q k_p / N) exp(2 pi i k_q j / N) delta(j', j - k_p mod N)`.
pub fn translation_operator<T: Real>(n: usize, k: ModeIndex) -> Result<CMatrix<T>> {
    if n < 2 {
        return Err(invalid("Hilbert dimension must be at least 2"));
    }
    let mut t = CMatrix::zeros(n);
    let global = half_turn_phase::<T>(-k.kq * k.kp, n);
    for j in 0..n {
        let row = (j as i64 - k.kp).rem_euclid(n as i64) as usize;
        t[(row, j)] = global * half_turn_phase::<T>(2 * k.kq * j as i64, n);
    }
    Ok(t)
}

/// Chord values `W_k = Tr[rho T(k)^dag]` over a mode window.
#[derive(Debug, Clone, PartialEq)]
pub struct ChordField<T> {
    n: usize,
    field: ModeField<T>,
}

impl<T: Real> ChordField<T> {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &ModeField<T> {
        &self.field
    }
}

impl<T> Deref for ChordField<T> {
    type Target = ModeField<T>;

    fn deref(&self) -> &ModeField<T> {
        &self.field
    }
}

/// Chord values on all `N^2` displacement labels.
///
/// Storage index `(iq, ip)` in `[0, N)^2` stands for the label with symmetric
/// representatives `(sym(iq), sym(ip))`; those representatives fix the phase
/// convention of `T(k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FullChordField<T> {
    n: usize,
    values: Vec<Complex<T>>,
}

impl<T: Real> FullChordField<T> {
    pub fn new(n: usize, values: Vec<Complex<T>>) -> Result<Self> {
        if n < 2 {
            return Err(invalid("Hilbert dimension must be at least 2"));
        }
        if values.len() != n * n {
            return Err(Error::IncompleteField {
                expected: n * n,
                got: values.len(),
            });
        }
        Ok(Self { n, values })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    fn slot(&self, k: ModeIndex) -> usize {
        let n = self.n as i64;
        (k.kq.rem_euclid(n) * n + k.kp.rem_euclid(n)) as usize
    }

    /// `W` at the label `k` reduced mod N.
    pub fn get(&self, k: ModeIndex) -> Complex<T> {
        self.values[self.slot(k)]
    }

    /// Symmetric-representative label stored at slot `(iq, ip)`.
    pub fn label(&self, iq: usize, ip: usize) -> ModeIndex {
        ModeIndex::new(symmetric_rep(iq as i64, self.n), symmetric_rep(ip as i64, self.n))
    }

    /// Multiplies every value by `f(label)`.
    pub fn scale_by(&mut self, mut f: impl FnMut(ModeIndex) -> T) {
        let n = self.n;
        for iq in 0..n {
            for ip in 0..n {
                let s = f(self.label(iq, ip));
                self.values[iq * n + ip] *= s;
            }
        }
    }

    /// Restriction to a window, labels reduced mod N.
    pub fn window(&self, k_max: usize) -> Result<ChordField<T>> {
        if k_max >= self.n {
            return Err(Error::Configuration(format!(
                "mode window half-width {k_max} must be below N = {}",
                self.n
            )));
        }
        let window = ModeWindow::new(k_max)?;
        let field = ModeField::from_fn(window, |k| self.get(k));
        Ok(ChordField { n: self.n, field })
    }
}

struct ChordPlans<T> {
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: Real> ChordPlans<T> {
    fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }
}

/// Chord transform onto all N^2 labels, O(N^2 log N).
///
/// `W_k = sum_b rho[b - k_p, b] exp(i pi k_q k_p / N) exp(-2 pi i k_q b / N)`,
/// one FFT per momentum label.
pub fn full_chord_transform<T: Real>(rho: &DensityMatrix<T>) -> FullChordField<T> {
    let n = rho.dim();
    let plans = ChordPlans::new(n);
    full_chord_with(rho.matrix(), &plans)
}

fn full_chord_with<T: Real>(m: &CMatrix<T>, plans: &ChordPlans<T>) -> FullChordField<T> {
    let n = m.dim();
    let mut values = vec![Complex::new(T::zero(), T::zero()); n * n];
    let mut line = vec![Complex::new(T::zero(), T::zero()); n];
    for ip in 0..n {
        let kp = symmetric_rep(ip as i64, n);
        for (b, slot) in line.iter_mut().enumerate() {
            let a = (b as i64 - kp).rem_euclid(n as i64) as usize;
            *slot = m[(a, b)];
        }
        plans.forward.process(&mut line);
        for (iq, &v) in line.iter().enumerate() {
            let kq = symmetric_rep(iq as i64, n);
            values[iq * n + ip] = v * half_turn_phase::<T>(kq * kp, n);
        }
    }
    FullChordField { n, values }
}

/// Windowed chord field of `rho`.
pub fn chord_transform<T: Real>(rho: &DensityMatrix<T>, k_max: usize) -> Result<ChordField<T>> {
    if k_max >= rho.dim() {
        return Err(Error::Configuration(format!(
            "mode window half-width {k_max} must be below N = {}",
            rho.dim()
        )));
    }
    full_chord_transform(rho).window(k_max)
}

/// `rho = (1/N) sum_k W_k T(k)` over all N^2 labels.
pub fn inverse_chord<T: Real>(field: &FullChordField<T>) -> Result<DensityMatrix<T>> {
    let plans = ChordPlans::new(field.n);
    DensityMatrix::new(inverse_chord_with(field, &plans))
}

fn inverse_chord_with<T: Real>(field: &FullChordField<T>, plans: &ChordPlans<T>) -> CMatrix<T> {
    let n = field.n;
    let inv_n = T::one() / T::int(n as i64);
    let mut m = CMatrix::zeros(n);
    let mut line = vec![Complex::new(T::zero(), T::zero()); n];
    for ip in 0..n {
        let kp = symmetric_rep(ip as i64, n);
        for (iq, slot) in line.iter_mut().enumerate() {
            let kq = symmetric_rep(iq as i64, n);
            *slot = field.values[iq * n + ip] * half_turn_phase::<T>(-kq * kp, n);
        }
        plans.inverse.process(&mut line);
        for (b, &v) in line.iter().enumerate() {
            let a = (b as i64 - kp).rem_euclid(n as i64) as usize;
            m[(a, b)] = v * inv_n;
        }
    }
    m
}

/// Reusable FFT plans for repeated chord round trips at a fixed dimension.
pub(crate) struct ChordEngine<T> {
    plans: ChordPlans<T>,
}

impl<T: Real> ChordEngine<T> {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            plans: ChordPlans::new(n),
        }
    }

    pub(crate) fn forward(&self, rho: &DensityMatrix<T>) -> FullChordField<T> {
        full_chord_with(rho.matrix(), &self.plans)
    }

    pub(crate) fn inverse(&self, field: &FullChordField<T>) -> DensityMatrix<T> {
        DensityMatrix::from_matrix_unchecked(inverse_chord_with(field, &self.plans))
    }
}
