//! Minimum-norm real least squares through a one-sided Jacobi SVD.

use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquares<T> {
    pub solution: Vec<T>,
    /// Number of singular values above `rank_tol · σ_max`.
    pub rank: usize,
    pub singular_values: Vec<T>,
}

/// Minimum-norm solution of `min ‖Ax − b‖₂` for a dense row-major `A`.
///
/// Singular values at or below `rank_tol · σ_max` are treated as zero.
pub fn min_norm_lstsq<T: Real>(a: &[Vec<T>], b: &[T], rank_tol: T) -> Result<LeastSquares<T>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    if m == 0 || n == 0 || a.iter().any(|r| r.len() != n) || b.len() != m {
        return Err(Error::Shape(format!("least squares with {m} rows, {n} columns, rhs {}", b.len())));
    }
    // Zero rows leave the solution unchanged and give the column rotations
    // room when the system is wide.
    let rows = m.max(n);
    let mut cols: Vec<Vec<T>> = (0..n)
        .map(|j| (0..rows).map(|i| if i < m { a[i][j] } else { T::zero() }).collect())
        .collect();
    let mut v: Vec<Vec<T>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { T::one() } else { T::zero() }).collect())
        .collect();
    let dot = |x: &[T], y: &[T]| x.iter().zip(y).map(|(&p, &q)| p * q).sum::<T>();
    let eps = T::epsilon();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                if gamma == T::zero() || gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::lit(2.0) * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = (T::one() + t * t).sqrt().recip();
                let s = c * t;
                for k in 0..rows {
                    let (x, y) = (cols[p][k], cols[q][k]);
                    cols[p][k] = c * x - s * y;
                    cols[q][k] = s * x + c * y;
                }
                for k in 0..n {
                    let (x, y) = (v[p][k], v[q][k]);
                    v[p][k] = c * x - s * y;
                    v[q][k] = s * x + c * y;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numerical("one-sided Jacobi SVD did not converge".into()));
    }

    let sigma: Vec<T> = cols.iter().map(|col| dot(col, col).sqrt()).collect();
    let sigma_max = sigma.iter().copied().fold(T::zero(), T::max);
    let cutoff = rank_tol * sigma_max;
    let mut solution = vec![T::zero(); n];
    let mut rank = 0;
    for j in 0..n {
        if sigma[j] > cutoff && sigma[j] > T::zero() {
            rank += 1;
            let w = dot(&cols[j][..m], b) / (sigma[j] * sigma[j]);
            for (x, &vk) in solution.iter_mut().zip(&v[j]) {
                *x = *x + w * vk;
            }
        }
    }
    Ok(LeastSquares {
        solution,
        rank,
        singular_values: sigma,
    })
}
