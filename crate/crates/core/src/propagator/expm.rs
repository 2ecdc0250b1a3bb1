//! Matrix exponentials `exp(-i H dt / ħ)` of Hermitian time-slice Hamiltonians.
//!
//! [`expm_chebyshev`] is the production route. With `A = -i H dt / ħ` and the
//! spectrum of `H` lying in `[λ_min, λ_max]`, the shifted exponent is scaled
//! to `Ã = 2 (A - ā) / (μ_max - μ_min)` where `μ = -i λ dt/ħ`, giving
//!
//! ```text
//! e^A = e^ā · Σ_n a_n(α) φ_n(Ã),   a_0 = J_0(α),  a_n = 2 J_n(α),
//! φ_0 = I,  φ_1 = Ã,  φ_n = 2 Ã φ_{n-1} + φ_{n-2},
//! α = dt (λ_max - λ_min) / (2ħ).
//! ```
//!
//! Because `Ã = -i X` with `X` Hermitian and spectrum in `[-1, 1]`, the
//! recurrence yields `φ_n = (-i)^n T_n(X)`, so the real Bessel coefficients
//! reproduce the Jacobi–Anger expansion of `exp(-i α X)` exactly.
//!
//! [`expm_eig_oracle`] is an independent check via full eigendecomposition.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::bessel::bessel_j_sequence;
use super::matrix::ComplexMatrix;
use super::spectrum::hermitian_extremes;
use crate::error::{Error, Result};
use crate::units::HBAR;

/// Hard cap on Chebyshev terms.
pub const DEFAULT_TERM_CAP: usize = 512;

/// `exp(-i H dt / ħ)` by Chebyshev expansion; terms are added until the
/// largest entry of the latest correction falls below `tol`.
pub fn expm_chebyshev(h: &ComplexMatrix, dt: f64, tol: f64) -> Result<ComplexMatrix> {
    expm_chebyshev_capped(h, dt, tol, DEFAULT_TERM_CAP)
}

pub fn expm_chebyshev_capped(
    h: &ComplexMatrix,
    dt: f64,
    tol: f64,
    term_cap: usize,
) -> Result<ComplexMatrix> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Parameter(format!("time step must be positive, got {dt}")));
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::Parameter(format!("tolerance must lie in (0, 1), got {tol}")));
    }
    let n = h.dim();
    let (lo, hi) = hermitian_extremes(h)?;
    let centre = 0.5 * (hi + lo);
    let half_range = 0.5 * (hi - lo);
    let phase = Complex64::from_polar(1.0, -centre * dt / HBAR);

    if half_range <= 1e-15 * centre.abs().max(1e-300) || half_range == 0.0 {
        // Degenerate spectrum: H is a multiple of the identity.
        return Ok(ComplexMatrix::identity(n).scale(phase));
    }

    let alpha = half_range * dt / HBAR;

    // Ã = -i (H - centre) / half_range
    let mut a_tilde = ComplexMatrix::zeros(n);
    let minus_i = Complex64::new(0.0, -1.0);
    for i in 0..n {
        for j in 0..n {
            let mut v = h[(i, j)];
            if i == j {
                v -= centre;
            }
            a_tilde[(i, j)] = minus_i * v / half_range;
        }
    }

    let mut n_coeffs = ((alpha + 25.0 + 8.0 * alpha.cbrt()).ceil() as usize).min(term_cap);
    let mut coeffs = bessel_j_sequence(n_coeffs, alpha)?;

    // Σ a_n φ_n, accumulated with two-term recurrence buffers.
    let mut sum = ComplexMatrix::identity(n).scale(Complex64::new(coeffs[0], 0.0));
    let mut phi_prev = ComplexMatrix::identity(n);
    let mut phi = a_tilde.clone();
    let mut scratch = ComplexMatrix::zeros(n);
    let mut residual = f64::INFINITY;

    let mut k = 1;
    loop {
        if k > n_coeffs {
            if n_coeffs >= term_cap {
                return Err(Error::Convergence {
                    terms: k,
                    residual,
                });
            }
            n_coeffs = (2 * n_coeffs).min(term_cap);
            coeffs = bessel_j_sequence(n_coeffs, alpha)?;
        }
        let a_k = 2.0 * coeffs[k];
        let mut change = 0.0_f64;
        for (s, p) in sum.data_mut().iter_mut().zip(phi.as_slice()) {
            let d = p * a_k;
            *s += d;
            change = change.max(d.norm());
        }
        residual = change;
        // Past the turning point n > α the coefficients decay monotonically,
        // so a small correction there is a genuine convergence signal.
        if k as f64 > alpha && change < tol {
            break;
        }
        if k + 1 > term_cap {
            return Err(Error::Convergence {
                terms: k,
                residual,
            });
        }
        // φ_{k+1} = 2 Ã φ_k + φ_{k-1}
        scratch.mul_into(&a_tilde, &phi);
        for (s, p) in scratch.data_mut().iter_mut().zip(phi_prev.as_slice()) {
            *s = *s * 2.0 + p;
        }
        std::mem::swap(&mut phi_prev, &mut phi);
        std::mem::swap(&mut phi, &mut scratch);
        k += 1;
    }

    Ok(sum.scale(phase))
}

/// `exp(-i H dt / ħ)` via a full Hermitian eigendecomposition.
pub fn expm_eig_oracle(h: &ComplexMatrix, dt: f64) -> Result<ComplexMatrix> {
    let n = h.dim();
    if n > 8 {
        return Err(Error::Contract(format!("oracle supports dim <= 8, got {n}")));
    }
    let m = DMatrix::from_fn(n, n, |i, j| h[(i, j)]);
    // Hermitian part only; guards against rounding asymmetry.
    let m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = m.symmetric_eigen();
    if eig.eigenvalues.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("eigensolver produced non-finite values".into()));
    }
    let v = &eig.eigenvectors;
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|lam| Complex64::from_polar(1.0, -lam * dt / HBAR)));
    let u = v * phases * v.adjoint();
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = u[(i, j)];
        }
    }
    Ok(out)
}
