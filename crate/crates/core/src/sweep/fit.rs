#![allow(clippy::needless_range_loop)]

use crate::error::{invalid, Error, Result};
use crate::Real;

use super::table::{ExponentTriple, Measure, SweepTable};

/// Largest `zeta` admitted into the small-`zeta` expansion fit by default.
pub const DEFAULT_ZETA_CUT: f64 = 4.0;

const MAX_ITERATIONS: usize = 500;
const STEP_TOL: f64 = 1e-6;

/// Logistic step `c0 + c1 / (1 + exp(-(x - x0) / w))` fitted in `x = ln zeta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionFit<T> {
    pub ln_zeta_star: T,
    pub width: T,
    pub c0: T,
    pub c1: T,
    /// Root-mean-square residual.
    pub residual: T,
    pub iterations: usize,
}

/// Coefficients of `chi_q^2 / chi_c^2 - 1 = a' zeta^{1/2} + b zeta + c zeta^{3/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiExpansionFit<T> {
    pub a_prime: T,
    pub b: T,
    pub c: T,
    /// Root-mean-square residual.
    pub residual: T,
    pub rows: usize,
}

fn logistic<T: Real>(p: &[T; 4], x: T) -> (T, [T; 4]) {
    let [c0, c1, x0, w] = *p;
    let s = T::one() / (T::one() + (-(x - x0) / w).exp());
    let ds = s * (T::one() - s);
    // derivatives with respect to c0, c1, x0, w
    let grad = [T::one(), s, -c1 * ds / w, -c1 * ds * (x - x0) / (w * w)];
    (c0 + c1 * s, grad)
}

fn sum_sq<T: Real>(p: &[T; 4], data: &[(T, T)]) -> T {
    data.iter().fold(T::zero(), |acc, &(x, y)| {
        let r = logistic(p, x).0 - y;
        acc + r * r
    })
}

/// Solves the small dense system `a x = b` by Gaussian elimination with
/// partial pivoting; `None` if singular.
fn solve<T: Real, const K: usize>(mut a: [[T; K]; K], mut b: [T; K]) -> Option<[T; K]> {
    for col in 0..K {
        let pivot = (col..K).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if !(a[pivot][col].abs() > T::zero()) {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..K {
            let f = a[row][col] / a[col][col];
            for k in col..K {
                let v = a[col][k];
                a[row][k] -= f * v;
            }
            let v = b[col];
            b[row] -= f * v;
        }
    }
    let mut x = [T::zero(); K];
    for row in (0..K).rev() {
        let mut s = b[row];
        for k in row + 1..K {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    Some(x)
}

/// Least-squares logistic fit of the measure against `ln zeta` by
/// Levenberg-Marquardt.
///
/// Starts from `x0` = median x, `w` = 1 and `c0`, `c1` spanning the data
/// range with the sign of the trend. The width is kept within
/// `[1e-3, 1] x span(x)` and the center within one span of the data, so data
/// with no visible step still converge (to a poor fit with a large residual).
pub fn fit_transition<T: Real>(
    table: &SweepTable<T>,
    measure: Measure,
    e: &ExponentTriple<T>,
) -> Result<TransitionFit<T>> {
    let mut data = table.samples(measure, e)?;
    if data.len() < 4 {
        return Err(invalid(format!(
            "transition fit needs at least 4 rows, got {}",
            data.len()
        )));
    }
    data.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite ln zeta"));
    let x_lo = data[0].0;
    let x_hi = data[data.len() - 1].0;
    let span = (x_hi - x_lo).max(T::lit(1e-12));
    let median = {
        let m = data.len();
        if m % 2 == 1 {
            data[m / 2].0
        } else {
            (data[m / 2 - 1].0 + data[m / 2].0) / T::lit(2.0)
        }
    };
    let (y_lo, y_hi) = data
        .iter()
        .fold((T::infinity(), T::neg_infinity()), |(l, h), s| (l.min(s.1), h.max(s.1)));
    let half = data.len() / 2;
    let mean = |s: &[(T, T)]| s.iter().fold(T::zero(), |a, p| a + p.1) / T::int(s.len() as i64);
    let rising = mean(&data[half..]) >= mean(&data[..half]);
    let (c0, c1) = if rising {
        (y_lo, y_hi - y_lo)
    } else {
        (y_hi, y_lo - y_hi)
    };

    let lower = [T::neg_infinity(), T::neg_infinity(), x_lo - span, span * T::lit(1e-3)];
    let upper = [T::infinity(), T::infinity(), x_hi + span, span];
    let clamp = |p: [T; 4]| {
        let mut q = p;
        for i in 0..4 {
            q[i] = q[i].max(lower[i]).min(upper[i]);
        }
        q
    };

    let mut p = clamp([c0, c1, median, T::one()]);
    let mut cost = sum_sq(&p, &data);
    let mut mu = T::lit(1e-3);
    let tol = T::lit(STEP_TOL);
    for iteration in 1..=MAX_ITERATIONS {
        let mut jtj = [[T::zero(); 4]; 4];
        let mut jtr = [T::zero(); 4];
        for &(x, y) in &data {
            let (f, g) = logistic(&p, x);
            let r = f - y;
            for i in 0..4 {
                jtr[i] -= g[i] * r;
                for j in 0..4 {
                    jtj[i][j] += g[i] * g[j];
                }
            }
        }
        let mut damped = jtj;
        for i in 0..4 {
            damped[i][i] += mu * jtj[i][i].max(T::lit(1e-12));
        }
        // parameters pinned at a bound with the descent direction pointing
        // outward are held fixed for this step
        for i in 0..4 {
            let outward = (p[i] >= upper[i] && jtr[i] > T::zero()) || (p[i] <= lower[i] && jtr[i] < T::zero());
            if outward {
                for j in 0..4 {
                    damped[i][j] = T::zero();
                    damped[j][i] = T::zero();
                }
                damped[i][i] = T::one();
                jtr[i] = T::zero();
            }
        }
        let Some(delta) = solve(damped, jtr) else {
            mu *= T::lit(10.0);
            continue;
        };
        let trial = clamp([p[0] + delta[0], p[1] + delta[1], p[2] + delta[2], p[3] + delta[3]]);
        let step_small = (0..4).all(|i| (trial[i] - p[i]).abs() <= tol * (T::one() + p[i].abs()));
        let trial_cost = sum_sq(&trial, &data);
        if trial_cost <= cost {
            p = trial;
            cost = trial_cost;
            mu = (mu / T::lit(3.0)).max(T::lit(1e-12));
        } else {
            mu *= T::lit(4.0);
        }
        if step_small {
            let residual = (cost / T::int(data.len() as i64)).sqrt();
            return Ok(TransitionFit {
                ln_zeta_star: p[2],
                width: p[3],
                c0: p[0],
                c1: p[1],
                residual,
                iterations: iteration,
            });
        }
    }
    Err(Error::NonConvergence(MAX_ITERATIONS))
}

/// Linear least squares of `chi2_ratio - 1` on `(sqrt zeta, zeta, zeta^{3/2})`
/// over rows with `0 < zeta <= zeta_cut` and a finite ratio, solved by
/// Householder QR.
pub fn fit_chi_expansion<T: Real>(table: &SweepTable<T>, zeta_cut: T) -> Result<ChiExpansionFit<T>> {
    let rows: Vec<(T, T)> = table
        .points
        .iter()
        .filter(|p| !p.flag.is_failed() && p.zeta > T::zero() && p.zeta <= zeta_cut && p.chi2_ratio.is_finite())
        .map(|p| (p.zeta, p.chi2_ratio - T::one()))
        .collect();
    if rows.len() < 8 {
        return Err(invalid(format!(
            "expansion fit needs at least 8 rows with zeta <= {zeta_cut} and a finite ratio, got {}",
            rows.len()
        )));
    }
    let design: Vec<[T; 3]> = rows.iter().map(|&(z, _)| [z.sqrt(), z, z * z.sqrt()]).collect();
    let target: Vec<T> = rows.iter().map(|r| r.1).collect();
    let coef = qr_least_squares(design.clone(), target.clone())?;
    let ss = design.iter().zip(&target).fold(T::zero(), |acc, (row, &y)| {
        let r = row[0] * coef[0] + row[1] * coef[1] + row[2] * coef[2] - y;
        acc + r * r
    });
    Ok(ChiExpansionFit {
        a_prime: coef[0],
        b: coef[1],
        c: coef[2],
        residual: (ss / T::int(rows.len() as i64)).sqrt(),
        rows: rows.len(),
    })
}

fn qr_least_squares<T: Real>(mut a: Vec<[T; 3]>, mut y: Vec<T>) -> Result<[T; 3]> {
    let m = a.len();
    let col_norm =
        |a: &[[T; 3]], j: usize, from: usize| a[from..].iter().fold(T::zero(), |s, r| s + r[j] * r[j]).sqrt();
    let scale: [T; 3] = std::array::from_fn(|j| col_norm(&a, j, 0));
    for j in 0..3 {
        let norm = col_norm(&a, j, j);
        if !(norm > T::tolerance(1e-10) * scale[j]) || !(scale[j] > T::zero()) {
            return Err(Error::RankDeficient);
        }
        let alpha = if a[j][j] > T::zero() { -norm } else { norm };
        // Householder vector v = x - alpha e_j, stored in a temporary
        let mut v: Vec<T> = (j..m).map(|i| a[i][j]).collect();
        v[0] -= alpha;
        let vnorm_sq = v.iter().fold(T::zero(), |s, &x| s + x * x);
        if vnorm_sq > T::zero() {
            for k in j..3 {
                let dot = (j..m).fold(T::zero(), |s, i| s + v[i - j] * a[i][k]);
                let f = T::lit(2.0) * dot / vnorm_sq;
                for i in j..m {
                    a[i][k] -= f * v[i - j];
                }
            }
            let dot = (j..m).fold(T::zero(), |s, i| s + v[i - j] * y[i]);
            let f = T::lit(2.0) * dot / vnorm_sq;
            for i in j..m {
                y[i] -= f * v[i - j];
            }
        }
    }
    let mut x = [T::zero(); 3];
    for j in (0..3).rev() {
        let mut s = y[j];
        for k in j + 1..3 {
            s -= a[j][k] * x[k];
        }
        x[j] = s / a[j][j];
    }
    Ok(x)
}
