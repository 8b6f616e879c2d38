//! Small dense linear algebra for 4×4 complex matrices.
//!
//! The Hermitian eigensolver is a cyclic Jacobi iteration with complex
//! Givens rotations. For 4×4 Hermitian matrices it converges in a handful
//! of sweeps and is simple enough to verify directly; an independent
//! non-Hermitian solver used for cross-checks lives in the test suites.

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::{Result, SimError};

pub type C64 = Complex64;
pub type Mat4 = Matrix4<Complex64>;
pub type CVec4 = Vector4<Complex64>;

pub const ZERO: C64 = Complex64::new(0.0, 0.0);
pub const ONE: C64 = Complex64::new(1.0, 0.0);

/// (m + m†)/2.
pub fn hermitize(m: &Mat4) -> Mat4 {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Real part of the trace.
pub fn trace_re(m: &Mat4) -> f64 {
    m.trace().re
}

/// Largest entrywise deviation from Hermiticity, max |m[i][j] − conj(m[j][i])|.
pub fn hermiticity_deviation(m: &Mat4) -> f64 {
    let mut dev = 0.0_f64;
    for i in 0..4 {
        for j in 0..4 {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            dev = dev.max(d);
        }
    }
    // each off-diagonal pair is counted twice; the max is unaffected
    dev
}

/// Largest entry magnitude.
pub fn max_abs_entry(m: &Mat4) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn off_diagonal_norm(m: &Mat4) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                s += m[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigendecomposition of a Hermitian 4×4 matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in ascending order together with the matrix whose
/// columns are the corresponding orthonormal eigenvectors.
pub fn jacobi_hermitian_eigen(m: &Mat4) -> Result<(Vector4<f64>, Mat4)> {
    let mut a = hermitize(m);
    let mut v = Mat4::identity();
    let scale = max_abs_entry(&a).max(1.0);
    let tol = 1e-15 * scale;

    const MAX_SWEEPS: usize = 60;
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= tol {
            converged = true;
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= tol * 1e-2 {
                    continue;
                }
                let phase = apq / mag; // e^{iφ}
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                let mut j = Mat4::identity();
                j[(p, p)] = Complex64::new(c, 0.0);
                j[(q, q)] = Complex64::new(c, 0.0);
                j[(p, q)] = phase * s;
                j[(q, p)] = -phase.conj() * s;

                a = j.adjoint() * a * j;
                v *= j;
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > tol * 10.0 {
        return Err(SimError::EigenSolver(format!(
            "Jacobi iteration stalled, off-diagonal norm {:.3e}",
            off_diagonal_norm(&a)
        )));
    }

    // sort ascending, permuting eigenvector columns alongside
    let mut idx = [0usize, 1, 2, 3];
    let evals = [a[(0, 0)].re, a[(1, 1)].re, a[(2, 2)].re, a[(3, 3)].re];
    idx.sort_by(|&i, &j| evals[i].partial_cmp(&evals[j]).unwrap());

    let mut lambda = Vector4::zeros();
    let mut vecs = Mat4::zeros();
    for (k, &i) in idx.iter().enumerate() {
        lambda[k] = evals[i];
        for row in 0..4 {
            vecs[(row, k)] = v[(row, i)];
        }
    }
    Ok((lambda, vecs))
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &Mat4) -> Result<f64> {
    let (lambda, _) = jacobi_hermitian_eigen(m)?;
    Ok(lambda[0])
}

/// Hermitian square root via eigendecomposition.
///
/// Eigenvalues below zero are clamped to zero before the square root;
/// `neg_tol` bounds how negative they may be before this is treated as an
/// error rather than roundoff.
pub fn hermitian_sqrt(m: &Mat4, neg_tol: f64) -> Result<Mat4> {
    let (lambda, v) = jacobi_hermitian_eigen(m)?;
    if lambda[0] < -neg_tol {
        return Err(SimError::InvalidState(format!(
            "matrix eigenvalue {:.3e} below -{:.1e}, not PSD up to roundoff",
            lambda[0], neg_tol
        )));
    }
    let mut d = Mat4::zeros();
    for k in 0..4 {
        d[(k, k)] = Complex64::new(lambda[k].max(0.0).sqrt(), 0.0);
    }
    Ok(v * d * v.adjoint())
}
