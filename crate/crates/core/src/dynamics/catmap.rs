use num_complex::Complex;

use crate::error::{invalid, Error, Result};
use crate::phase_space::{translation_operator, CMatrix, DensityMatrix, ModeField, ModeIndex, SpectralDensity};
use crate::scalar::symmetric_rep;
use crate::Real;

/// Linear hyperbolic automorphism of the torus, `x -> M x` with
/// `M = [[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatMapSpec<T> {
    matrix: [[i64; 2]; 2],
    lambda: T,
    lambda2: Option<T>,
}

impl<T: Real> CatMapSpec<T> {
    /// Validates `det M = 1`, `|tr M| > 2` and the parity condition
    /// (`ab` and `cd` even) required by the Gauss-sum quantization.
    pub fn new(matrix: [[i64; 2]; 2]) -> Result<Self> {
        let [[a, b], [c, d]] = matrix;
        if a * d - b * c != 1 {
            return Err(invalid(format!("map determinant must be 1, got {}", a * d - b * c)));
        }
        let tr = a + d;
        if tr.abs() <= 2 {
            return Err(invalid(format!("map must be hyperbolic (|trace| > 2), got trace {tr}")));
        }
        if (a * b) % 2 != 0 || (c * d) % 2 != 0 {
            return Err(invalid(
                "map violates the quantization parity condition: a*b and c*d must be even",
            ));
        }
        let trf = T::int(tr.abs());
        let lambda = ((trf + (trf * trf - T::lit(4.0)).sqrt()) / T::lit(2.0)).ln();
        Ok(Self {
            matrix,
            lambda,
            lambda2: None,
        })
    }

    /// The trace-4 map `[[2, 1], [3, 2]]`.
    pub fn default_map() -> Self {
        Self::new([[2, 1], [3, 2]]).expect("default map is valid")
    }

    pub fn matrix(&self) -> [[i64; 2]; 2] {
        self.matrix
    }

    pub fn trace(&self) -> i64 {
        self.matrix[0][0] + self.matrix[1][1]
    }

    /// Lyapunov exponent, `ln` of the expanding eigenvalue.
    pub fn lyapunov(&self) -> T {
        self.lambda
    }

    /// Attaches a measured second-order growth rate of `ln chi^2`.
    pub fn with_lambda2(mut self, lambda2: T) -> Result<Self> {
        if !(lambda2 > T::zero() && lambda2.is_finite()) {
            return Err(invalid(format!(
                "growth rate must be positive and finite, got {lambda2}"
            )));
        }
        self.lambda2 = Some(lambda2);
        Ok(self)
    }

    /// Measured growth rate if attached, otherwise `2 lambda`.
    pub fn lambda2(&self) -> T {
        self.lambda2.unwrap_or(self.lambda + self.lambda)
    }

    pub fn lambda2_measured(&self) -> Option<T> {
        self.lambda2
    }

    pub fn apply(&self, k: ModeIndex) -> ModeIndex {
        let [[a, b], [c, d]] = self.matrix;
        ModeIndex::new(a * k.kq + b * k.kp, c * k.kq + d * k.kp)
    }

    /// `M^T k`: the wavevector whose old coefficient lands on `k` after one step.
    pub fn transpose_apply(&self, k: ModeIndex) -> ModeIndex {
        let [[a, b], [c, d]] = self.matrix;
        ModeIndex::new(a * k.kq + c * k.kp, b * k.kq + d * k.kp)
    }
}

/// `c'(k) = c(M^T k)`; coefficients pulled from outside the window are zero.
pub fn classical_step<T: Real>(rho: &SpectralDensity<T>, map: &CatMapSpec<T>) -> SpectralDensity<T> {
    let field = ModeField::from_fn(rho.window(), |k| rho.get(map.transpose_apply(k)));
    SpectralDensity::from_field_unchecked(field)
}

/// Quantized cat map in the position basis,
/// `U[j', j] = (i b N)^{-1/2} sum_{m=0}^{|b|-1} exp(i pi (a x^2 - 2 x j' + d j'^2) / (b N))`
/// with `x = j + m N`. For `b = 1` the sum has the single term `x = j`.
///
/// The result is checked to be unitary to 1e-8.
pub fn quantized_unitary<T: Real>(map: &CatMapSpec<T>, n: usize) -> Result<CMatrix<T>> {
    if n < 2 {
        return Err(invalid("Hilbert dimension must be at least 2"));
    }
    let [[a, b], [_, d]] = map.matrix();
    if b == 0 {
        return Err(invalid("map with b = 0 has no Gauss-sum quantization"));
    }
    let ni = n as i64;
    let bn = b * ni;
    let modulus = 2 * bn.abs();
    let prefactor = (Complex::new(T::zero(), T::int(bn))).sqrt().inv();
    let u = CMatrix::from_fn(n, |jp, j| {
        let (j, jp) = (j as i64, jp as i64);
        let mut sum = Complex::new(T::zero(), T::zero());
        for m in 0..b.abs() {
            let x = j + m * ni;
            // phase = pi * num / (b N), num reduced mod 2 b N
            let num = (a * x * x - 2 * x * jp + d * jp * jp).rem_euclid(modulus);
            sum += Complex::from_polar(T::one(), T::PI() * T::int(num) / T::int(bn));
        }
        prefactor * sum
    });
    check_unitary(&u, b)?;
    Ok(u)
}

fn check_unitary<T: Real>(u: &CMatrix<T>, b: i64) -> Result<()> {
    let deviation = u.unitarity_deviation();
    if !(deviation <= T::tolerance(1e-8)) {
        return Err(Error::NonUnitary {
            n: u.dim(),
            b,
            deviation: deviation.to_f64_lossy(),
        });
    }
    Ok(())
}

/// `U rho U^dag`.
pub fn quantum_step<T: Real>(rho: &DensityMatrix<T>, u: &CMatrix<T>) -> DensityMatrix<T> {
    DensityMatrix::from_matrix_unchecked(u.conjugate(rho.matrix()))
}

/// Largest elementwise violation of `U^dag T(k) U = s_k T(M^T k mod N)` over
/// `labels`, with `s_k` the best unit-modulus phase for each label.
pub fn egorov_deviation<T: Real>(
    map: &CatMapSpec<T>,
    u: &CMatrix<T>,
    labels: impl IntoIterator<Item = ModeIndex>,
) -> Result<T> {
    let n = u.dim();
    let ud = u.adjoint();
    let mut worst = T::zero();
    for k in labels {
        let t = translation_operator::<T>(n, k)?;
        let conj = ud.matmul(&t.matmul(u));
        let image = map.transpose_apply(k);
        let reduced = ModeIndex::new(symmetric_rep(image.kq, n), symmetric_rep(image.kp, n));
        let target = translation_operator::<T>(n, reduced)?;
        // T(k') has exactly one unit entry per column; read the phase off column 0
        let row = (-reduced.kp).rem_euclid(n as i64) as usize;
        let phase = conj[(row, 0)] / target[(row, 0)];
        let phase_err = (phase.norm() - T::one()).abs();
        let mut scaled = target;
        scaled.scale(phase);
        worst = worst.max(conj.max_abs_diff(&scaled)).max(phase_err);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_space::{make_coherent_classical, ModeWindow};

    #[test]
    fn default_map_properties() {
        let m = CatMapSpec::<f64>::default_map();
        assert_eq!(m.trace(), 4);
        assert!((m.lyapunov() - (2.0 + 3f64.sqrt()).ln()).abs() < 1e-14);
        assert!((m.lyapunov() - 1.3170).abs() < 1e-4);
    }

    #[test]
    fn invalid_maps_rejected() {
        assert!(CatMapSpec::<f64>::new([[2, 1], [1, 1]]).is_err()); // odd a*b... det 1 but c*d odd
        assert!(CatMapSpec::<f64>::new([[1, 1], [0, 1]]).is_err()); // shear
        assert!(CatMapSpec::<f64>::new([[2, 1], [3, 3]]).is_err()); // det 3
        assert!(CatMapSpec::<f64>::new([[3, 2], [4, 3]]).is_ok());
    }

    #[test]
    fn classical_step_relabels() {
        let map = CatMapSpec::<f64>::default_map();
        let rho = make_coherent_classical((0.3, 0.6), 0.01, 6).unwrap();
        let next = classical_step(&rho, &map);
        assert_eq!(next.get(ModeIndex::new(1, 0)), rho.get(ModeIndex::new(2, 1)));
        assert_eq!(next.zero_mode(), rho.zero_mode());
        // (3, 0) pulls from (6, 3), inside; (3, 3) pulls from (15, 9), outside
        assert_eq!(next.get(ModeIndex::new(3, 0)), rho.get(ModeIndex::new(6, 3)));
        assert_eq!(next.get(ModeIndex::new(3, 3)).norm(), 0.0);
    }

    #[test]
    fn uniform_is_fixed() {
        let map = CatMapSpec::<f64>::default_map();
        let u = SpectralDensity::uniform(ModeWindow::new(4).unwrap());
        assert_eq!(classical_step(&u, &map), u);
    }

    #[test]
    fn unitary_for_default_map() {
        let map = CatMapSpec::<f64>::default_map();
        for n in [2, 7, 16, 23, 64] {
            let u = quantized_unitary(&map, n).unwrap();
            assert!(u.unitarity_deviation() < 1e-10, "N = {n}");
        }
    }

    #[test]
    fn unitary_for_b_two() {
        let map = CatMapSpec::<f64>::new([[3, 2], [4, 3]]).unwrap();
        for n in [7, 8, 9] {
            let u = quantized_unitary(&map, n).unwrap();
            assert!(u.unitarity_deviation() < 1e-10, "N = {n}");
            let labels = (0..n as i64).flat_map(|q| (0..n as i64).map(move |p| ModeIndex::new(q, p)));
            assert!(egorov_deviation(&map, &u, labels).unwrap() < 1e-10, "N = {n}");
        }
    }

    #[test]
    fn non_unitary_rejected() {
        let mut u = CMatrix::<f64>::identity(6);
        u[(2, 2)] = Complex::new(0.5, 0.0);
        let err = check_unitary(&u, 2).unwrap_err();
        assert!(matches!(err, Error::NonUnitary { n: 6, b: 2, .. }), "{err}");
        assert!(err.to_string().contains("coprime"));
    }

    #[test]
    fn egorov_small_dimensions() {
        let map = CatMapSpec::<f64>::default_map();
        for n in [8, 9, 16] {
            let u = quantized_unitary(&map, n).unwrap();
            let labels = (0..n as i64).flat_map(|q| (0..n as i64).map(move |p| ModeIndex::new(q, p)));
            assert!(egorov_deviation(&map, &u, labels).unwrap() < 1e-10);
        }
    }

    #[test]
    fn egorov_rejects_wrong_direction() {
        // conjugating with U^dag instead of U maps k -> M^{-T} k; the check must notice
        let map = CatMapSpec::<f64>::default_map();
        let u = quantized_unitary(&map, 8).unwrap().adjoint();
        let dev = egorov_deviation(&map, &u, [ModeIndex::new(1, 0)]).unwrap();
        assert!(dev > 0.5);
    }
}
