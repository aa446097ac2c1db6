use num_complex::Complex;

use crate::error::{Error, Result};
use crate::phase_space::{ModeField, RealGrid};
use crate::Real;

/// `Tr[A B]` for two real densities given by their Fourier coefficients:
/// `sum_k A_k conj(B_k)` by Parseval on the unit torus.
///
/// Both fields must be hermitian-symmetric; a non-negligible imaginary part
/// is reported as an error.
pub fn overlap<T: Real>(a: &ModeField<T>, b: &ModeField<T>) -> Result<T> {
    if a.window() != b.window() {
        return Err(Error::WindowMismatch {
            left: a.k_max(),
            right: b.k_max(),
        });
    }
    let sum = a
        .coeffs()
        .iter()
        .zip(b.coeffs())
        .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + x * y.conj());
    let bound = T::tolerance(1e-8) * (a.norm_sq() * b.norm_sq()).sqrt().max(T::one());
    if !(sum.im.abs() <= bound) {
        return Err(Error::ImaginaryResidue {
            residue: sum.im.abs().to_f64_lossy(),
            bound: bound.to_f64_lossy(),
        });
    }
    Ok(sum.re)
}

fn distance_from_overlaps<T: Real>(pp: T, qq: T, pq: T) -> Result<T> {
    if !(pp > T::zero() && qq > T::zero()) {
        return Err(Error::Domain(format!(
            "self-overlaps must be positive, got {pp} and {qq}"
        )));
    }
    if !(pq > T::zero()) {
        return Ok(T::infinity());
    }
    // written so that swapping P and Q is bitwise symmetric
    let d = pp.ln() + qq.ln() - (pq.ln() + pq.ln());
    Ok(d.max(T::zero()))
}

/// `ln[Tr(P^2) Tr(Q^2) / Tr(PQ)^2]`, the negated epsilon = 1 distance.
///
/// Nonnegative by Cauchy-Schwarz and zero exactly when `P` is proportional to
/// `Q`. A nonpositive cross overlap yields `+inf`.
pub fn k1_distance<T: Real>(p: &ModeField<T>, q: &ModeField<T>) -> Result<T> {
    let pp = overlap(p, p)?;
    let qq = overlap(q, q)?;
    let pq = overlap(p, q)?;
    distance_from_overlaps(pp, qq, pq)
}

fn check_grids<T: Real>(p: &RealGrid<T>, q: &RealGrid<T>) -> Result<()> {
    if p.size() != q.size() {
        return Err(Error::Configuration(format!(
            "grid sizes differ: {} vs {}",
            p.size(),
            q.size()
        )));
    }
    Ok(())
}

fn grid_trace<T: Real>(p: &RealGrid<T>, q: &RealGrid<T>, f: impl Fn(T, T) -> T) -> T {
    let sum = p
        .values()
        .iter()
        .zip(q.values())
        .fold(T::zero(), |acc, (&a, &b)| acc + f(a, b));
    sum / T::int(p.values().len() as i64)
}

/// Grid-space counterpart of [`k1_distance`], traces taken as grid means.
pub fn k1_distance_grid<T: Real>(p: &RealGrid<T>, q: &RealGrid<T>) -> Result<T> {
    check_grids(p, q)?;
    let pp = grid_trace(p, p, |a, b| a * b);
    let qq = grid_trace(q, q, |a, b| a * b);
    let pq = grid_trace(p, q, |a, b| a * b);
    distance_from_overlaps(pp, qq, pq)
}

/// Generalized Kullback-Leibler distance of order `epsilon` between strictly
/// positive grid densities:
///
/// `(1/e) [ln Tr(P Q^e) - ln Tr(P^{1+e}) + ln Tr(P^e Q) - ln Tr(Q^{1+e})]`.
///
/// Nonpositive; at `e = 1` it equals `-k1_distance_grid(P, Q)`.
pub fn k_epsilon<T: Real>(p: &RealGrid<T>, q: &RealGrid<T>, epsilon: T) -> Result<T> {
    check_grids(p, q)?;
    if !(epsilon > T::zero() && epsilon <= T::one()) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0, 1], got {epsilon}"
        )));
    }
    if let Some(v) = p.values().iter().chain(q.values()).find(|v| !(**v > T::zero())) {
        return Err(Error::Domain(format!(
            "fractional powers need strictly positive densities, found {v}"
        )));
    }
    let one_e = T::one() + epsilon;
    let pq_e = grid_trace(p, q, |a, b| a * b.powf(epsilon));
    let p_1e = grid_trace(p, p, |a, _| a.powf(one_e));
    let p_eq = grid_trace(p, q, |a, b| a.powf(epsilon) * b);
    let q_1e = grid_trace(q, q, |a, _| a.powf(one_e));
    Ok((pq_e.ln() - p_1e.ln() + p_eq.ln() - q_1e.ln()) / epsilon)
}

/// Mean-square Fourier radius `sum 4 pi^2 |k|^2 |F_k|^2 / sum |F_k|^2`.
pub fn chi_squared<T: Real>(f: &ModeField<T>) -> Result<T> {
    let window = f.window();
    let mut weighted = T::zero();
    let mut total = T::zero();
    for (i, c) in f.coeffs().iter().enumerate() {
        let m = c.norm_sqr();
        total += m;
        weighted += T::int(window.mode_at(i).norm_sq()) * m;
    }
    if !(total > T::zero()) {
        return Err(Error::Domain("chi^2 of an empty field".into()));
    }
    Ok(T::lit(4.0) * T::PI() * T::PI() * weighted / total)
}
