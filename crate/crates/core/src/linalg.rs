//! Dense complex `C x C` matrix helpers for the per-frequency channel algebra.
//! Matrices are row-major slices of length `n * n`.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::real::Real;

/// Inverse by Gauss-Jordan elimination with partial pivoting. `None` when a
/// pivot is exactly zero.
pub(crate) fn invert<T: Real>(a: &[Complex<T>], n: usize) -> Option<Vec<Complex<T>>> {
    let mut m = a.to_vec();
    let mut inv = vec![Complex::<T>::zero(); n * n];
    for i in 0..n {
        inv[i * n + i] = Complex::one();
    }
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&p, &q| {
                m[p * n + col]
                    .norm()
                    .partial_cmp(&m[q * n + col].norm())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("non-empty range");
        if m[pivot * n + col].is_zero() {
            return None;
        }
        if pivot != col {
            for j in 0..n {
                m.swap(pivot * n + j, col * n + j);
                inv.swap(pivot * n + j, col * n + j);
            }
        }
        let d = m[col * n + col].inv();
        for j in 0..n {
            m[col * n + j] = m[col * n + j] * d;
            inv[col * n + j] = inv[col * n + j] * d;
        }
        for row in (0..n).filter(|&r| r != col) {
            let f = m[row * n + col];
            if f.is_zero() {
                continue;
            }
            for j in 0..n {
                m[row * n + j] = m[row * n + j] - f * m[col * n + j];
                inv[row * n + j] = inv[row * n + j] - f * inv[col * n + j];
            }
        }
    }
    Some(inv)
}

/// Singular values by one-sided (Hestenes) Jacobi rotations on the columns.
/// Returned in no particular order.
pub(crate) fn singular_values<T: Real>(a: &[Complex<T>], n: usize) -> Vec<T> {
    // column-major working copy
    let mut cols: Vec<Vec<Complex<T>>> = (0..n)
        .map(|j| (0..n).map(|i| a[i * n + j]).collect())
        .collect();
    let eps = T::epsilon();
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: T = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: T = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex<T> = cols[p]
                    .iter()
                    .zip(&cols[q])
                    .map(|(x, y)| x.conj() * y)
                    .fold(Complex::zero(), |acc, v| acc + v);
                let g = gamma.norm();
                if g.is_zero() || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // rotate a_q by the phase of gamma so the pair's inner product is real
                let phase = gamma / g;
                let zeta = (beta - alpha) / (g + g);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                #[allow(clippy::needless_range_loop)] // two columns at once
                for i in 0..n {
                    let xp = cols[p][i];
                    let xq = cols[q][i] * phase.conj();
                    cols[p][i] = xp * c - xq * s;
                    cols[q][i] = (xp * s + xq * c) * phase;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    cols.iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt())
        .collect()
}

/// `sigma_min / sigma_max`, or 0 for the zero matrix.
pub(crate) fn condition_ratio<T: Real>(a: &[Complex<T>], n: usize) -> f64 {
    let sv = singular_values(a, n);
    let max = sv.iter().fold(T::zero(), |m, &v| m.max(v));
    if max.is_zero() {
        return 0.0;
    }
    let min = sv.iter().fold(T::infinity(), |m, &v| m.min(v));
    (min / max).to_f()
}
