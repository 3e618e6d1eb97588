//! Small dense least-squares solves via one-sided Jacobi orthogonalization.
//! Sized for probe collocation systems (tens of rows, a handful of columns);
//! also reports the condition number so ill-posed probe sets can be rejected.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

pub(crate) struct LstsqSolution {
    pub x: Vec<f64>,
    pub residual_norm: f64,
    pub condition: f64,
}

/// Minimise `||A x - b||_2` for a dense row-major `m x n` matrix, `m >= n`.
/// Returns the solution, the residual norm, and `sigma_max / sigma_min`.
pub(crate) fn least_squares(a: &[f64], m: usize, n: usize, b: &[f64]) -> LstsqSolution {
    debug_assert_eq!(a.len(), m * n);
    debug_assert_eq!(b.len(), m);

    // Column-major working copy of A; V accumulates the right rotations.
    let mut w = alloc::vec![0.0_f64; m * n];
    for i in 0..m {
        for j in 0..n {
            w[j * m + i] = a[i * n + j];
        }
    }
    let mut v = alloc::vec![0.0_f64; n * n];
    for j in 0..n {
        v[j * n + j] = 1.0;
    }

    // One-sided Jacobi: rotate column pairs until mutually orthogonal.
    for _sweep in 0..60 {
        let mut off = 0.0_f64;
        for p in 0..n {
            for q in p + 1..n {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = 0.0;
                for i in 0..m {
                    let x = w[p * m + i];
                    let y = w[q * m + i];
                    app += x * x;
                    aqq += y * y;
                    apq += x * y;
                }
                if apq.abs() <= 1e-30 + 1e-16 * (app * aqq).sqrt() {
                    continue;
                }
                off = off.max(apq.abs() / (app * aqq).sqrt().max(1e-300));
                let tau = (aqq - app) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let x = w[p * m + i];
                    let y = w[q * m + i];
                    w[p * m + i] = c * x - s * y;
                    w[q * m + i] = s * x + c * y;
                }
                for i in 0..n {
                    let x = v[p * n + i];
                    let y = v[q * n + i];
                    v[p * n + i] = c * x - s * y;
                    v[q * n + i] = s * x + c * y;
                }
            }
        }
        if off < 1e-14 {
            break;
        }
    }

    let mut sigma = alloc::vec![0.0_f64; n];
    for j in 0..n {
        let mut s = 0.0;
        for i in 0..m {
            s += w[j * m + i] * w[j * m + i];
        }
        sigma[j] = s.sqrt();
    }
    let smax = sigma.iter().cloned().fold(0.0_f64, f64::max);
    let smin = sigma.iter().cloned().fold(f64::INFINITY, f64::min);
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };

    // x = V diag(1/sigma) U^T b, with U column j = w_j / sigma_j, so the
    // coefficient on column j is (w_j . b) / sigma_j^2.
    let cutoff = smax * 1e-14;
    let mut utb = alloc::vec![0.0_f64; n];
    for j in 0..n {
        if sigma[j] <= cutoff {
            continue;
        }
        let mut dot = 0.0;
        for i in 0..m {
            dot += w[j * m + i] * b[i];
        }
        utb[j] = dot / (sigma[j] * sigma[j]);
    }
    let mut x = alloc::vec![0.0_f64; n];
    for i in 0..n {
        let mut s = 0.0;
        for j in 0..n {
            s += v[j * n + i] * utb[j];
        }
        x[i] = s;
    }

    let mut residual = 0.0;
    for i in 0..m {
        let mut ax = 0.0;
        for j in 0..n {
            ax += a[i * n + j] * x[j];
        }
        let r = ax - b[i];
        residual += r * r;
    }

    LstsqSolution {
        x,
        residual_norm: residual.sqrt(),
        condition,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_exact_square_system() {
        // [[2, 1], [1, 3]] x = [5, 10] -> x = [1, 3]
        let a = [2.0, 1.0, 1.0, 3.0];
        let sol = least_squares(&a, 2, 2, &[5.0, 10.0]);
        assert!((sol.x[0] - 1.0).abs() < 1e-12);
        assert!((sol.x[1] - 3.0).abs() < 1e-12);
        assert!(sol.residual_norm < 1e-12);
    }

    #[test]
    fn overdetermined_consistent() {
        // columns [1, 1, 1] and [0, 1, 2]; b = 2*col0 - col1
        let a = [1.0, 0.0, 1.0, 1.0, 1.0, 2.0];
        let b = [2.0, 1.0, 0.0];
        let sol = least_squares(&a, 3, 2, &b);
        assert!((sol.x[0] - 2.0).abs() < 1e-12);
        assert!((sol.x[1] + 1.0).abs() < 1e-12);
        assert!(sol.residual_norm < 1e-12);
        assert!(sol.condition < 10.0);
    }

    #[test]
    fn inconsistent_residual_reported() {
        // Overdetermined without exact solution: fit constant to [0, 1].
        let a = [1.0, 1.0];
        let sol = least_squares(&a, 2, 1, &[0.0, 1.0]);
        assert!((sol.x[0] - 0.5).abs() < 1e-12);
        assert!((sol.residual_norm - (0.5_f64).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn condition_number_of_scaled_columns() {
        // Orthogonal columns scaled 1 and 1e-6: condition 1e6.
        let a = [1.0, 0.0, 0.0, 1e-6];
        let sol = least_squares(&a, 2, 2, &[1.0, 1e-6]);
        assert!((sol.condition - 1e6).abs() / 1e6 < 1e-10);
        assert!((sol.x[0] - 1.0).abs() < 1e-9);
        assert!((sol.x[1] - 1.0).abs() < 1e-6);
    }
}
