//! Extreme eigenvalues of small Hermitian matrices.
//!
//! A complex Hermitian `H = S + iK` is embedded as the real symmetric matrix
//! `[[S, -K], [K, S]]`, whose spectrum is that of `H` with every eigenvalue
//! doubled. A cyclic Jacobi sweep then diagonalizes the embedding.

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 64;

/// `(lambda_min, lambda_max)` of a Hermitian matrix.
pub fn hermitian_extremes(h: &ComplexMatrix) -> Result<(f64, f64)> {
    let eig = hermitian_eigenvalues(h)?;
    let lo = eig.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((lo, hi))
}

/// All eigenvalues (each listed once), unsorted.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    let n = h.dim();
    let m = 2 * n;
    let mut a = vec![0.0_f64; m * m];
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            a[i * m + j] = z.re;
            a[(i + n) * m + (j + n)] = z.re;
            a[i * m + (j + n)] = -z.im;
            a[(i + n) * m + j] = z.im;
        }
    }
    // Symmetrize away any rounding-level non-Hermiticity.
    for i in 0..m {
        for j in (i + 1)..m {
            let v = 0.5 * (a[i * m + j] + a[j * m + i]);
            a[i * m + j] = v;
            a[j * m + i] = v;
        }
    }

    jacobi_diagonalize(&mut a, m)?;

    let mut diag: Vec<f64> = (0..m).map(|i| a[i * m + i]).collect();
    diag.sort_by(|x, y| x.total_cmp(y));
    // Eigenvalues come in equal pairs; keep one of each.
    Ok(diag.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect())
}

fn jacobi_diagonalize(a: &mut [f64], m: usize) -> Result<()> {
    let scale = a.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(());
    }
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..m)
            .flat_map(|i| ((i + 1)..m).map(move |j| (i, j)))
            .map(|(i, j)| a[i * m + j] * a[i * m + j])
            .sum();
        if off.sqrt() <= 1e-15 * scale {
            return Ok(());
        }
        for p in 0..m {
            for q in (p + 1)..m {
                let apq = a[p * m + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = a[p * m + p];
                let aqq = a[q * m + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..m {
                    let akp = a[k * m + p];
                    let akq = a[k * m + q];
                    a[k * m + p] = c * akp - s * akq;
                    a[k * m + q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let apk = a[p * m + k];
                    let aqk = a[q * m + k];
                    a[p * m + k] = c * apk - s * aqk;
                    a[q * m + k] = s * apk + c * aqk;
                }
            }
        }
    }
    Err(Error::Numeric("Jacobi eigenvalue sweep did not converge".into()))
}
