//! Dense symmetric eigenvalues by cyclic Jacobi rotations.

use ndarray::Array2;

use crate::error::{Error, Result};

/// Largest `|M[i][j] - M[j][i]|` tolerated by [`symmetric_eigenvalues`].
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

const MAX_SWEEPS: usize = 100;

/// Largest absolute difference between mirrored entries.
pub fn max_asymmetry(m: &Array2<f64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((m[[i, j]] - m[[j, i]]).abs());
        }
    }
    worst
}

/// Eigenvalues of a real symmetric matrix in ascending order.
///
/// Rotations are applied in a fixed row-by-row order, so results are
/// reproducible bit for bit.
pub fn symmetric_eigenvalues(m: &Array2<f64>) -> Result<Vec<f64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::invalid(
            "matrix",
            format!("expected a square matrix, got {}x{}", m.nrows(), m.ncols()),
        ));
    }
    let asym = max_asymmetry(m);
    if asym > SYMMETRY_TOLERANCE {
        return Err(Error::NotSymmetric(asym));
    }

    let n = m.nrows();
    let mut a = m.clone();
    // symmetrize so rounding-level asymmetry cannot bias the rotations
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (a[[i, j]] + a[[j, i]]);
            a[[i, j]] = v;
            a[[j, i]] = v;
        }
    }

    let scale = a.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if n <= 1 || scale == 0.0 {
        let mut d: Vec<f64> = (0..n).map(|i| a[[i, i]]).collect();
        d.sort_by(f64::total_cmp);
        return Ok(d);
    }

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| a[[i, j]] * a[[i, j]])
            .sum();
        if off.sqrt() <= f64::EPSILON * scale * 1e-2 {
            let mut d: Vec<f64> = (0..n).map(|i| a[[i, i]]).collect();
            d.sort_by(f64::total_cmp);
            return Ok(d);
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[[p, q]];
                if apq.abs() < f64::MIN_POSITIVE {
                    continue;
                }
                let app = a[[p, p]];
                let aqq = a[[q, q]];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[[k, p]];
                    let akq = a[[k, q]];
                    let new_kp = c * akp - s * akq;
                    let new_kq = s * akp + c * akq;
                    a[[k, p]] = new_kp;
                    a[[p, k]] = new_kp;
                    a[[k, q]] = new_kq;
                    a[[q, k]] = new_kq;
                }
                a[[p, p]] = app - t * apq;
                a[[q, q]] = aqq + t * apq;
                a[[p, q]] = 0.0;
                a[[q, p]] = 0.0;
            }
        }
    }
    Err(Error::NoConvergence(MAX_SWEEPS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn two_by_two() {
        let m = array![[2.0, 1.0], [1.0, 2.0]];
        let ev = symmetric_eigenvalues(&m).unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-14);
        assert!((ev[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn diagonal_is_sorted() {
        let m = array![[3.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 2.0]];
        assert_eq!(symmetric_eigenvalues(&m).unwrap(), vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn rejects_asymmetric_and_rectangular() {
        let m = array![[1.0, 2.0], [0.0, 1.0]];
        assert!(matches!(
            symmetric_eigenvalues(&m),
            Err(Error::NotSymmetric(_))
        ));
        let r = Array2::<f64>::zeros((2, 3));
        assert!(symmetric_eigenvalues(&r).is_err());
    }

    #[test]
    fn second_difference_matrix() {
        // tridiagonal [-1, 2, -1]: eigenvalues 2 - 2 cos(k pi / (n + 1))
        let n = 30;
        let mut m = Array2::<f64>::zeros((n, n));
        for i in 0..n {
            m[[i, i]] = 2.0;
            if i + 1 < n {
                m[[i, i + 1]] = -1.0;
                m[[i + 1, i]] = -1.0;
            }
        }
        let ev = symmetric_eigenvalues(&m).unwrap();
        for (k, v) in ev.iter().enumerate() {
            let exact = 2.0 - 2.0 * (std::f64::consts::PI * (k + 1) as f64 / (n + 1) as f64).cos();
            assert!((v - exact).abs() < 1e-12, "k={k}: {v} vs {exact}");
        }
    }
}
