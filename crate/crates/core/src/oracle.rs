//! Dense reference computations.
//!
//! Everything here works directly on the matrix: regularized solves via
//! `(αI + AᵀA) u = Aᵀ f`, the smoothing operator `B_α` via an
//! eigendecomposition of `AAᵀ`. No singular-value shortcuts. These
//! routines are the independent route the spectral implementation is
//! checked against; they are O(n³) per call and meant for validation,
//! not for grid sweeps.

use nalgebra::{DMatrix, DVector, RealField};
use num_traits::Float;

use crate::error::{CoreError, Result};
use crate::scalar::Real;

/// Solves `(αI + AᵀA) u = Aᵀ f` with a dense Cholesky factorization.
pub fn dense_solution<T: Real + RealField>(
    a: &DMatrix<T>,
    f: &DVector<T>,
    alpha: T,
) -> Result<DVector<T>> {
    if !(alpha > T::zero()) {
        return Err(CoreError::NonPositiveAlpha {
            alpha: alpha.to_f64().unwrap_or(f64::NAN),
        });
    }
    let n = a.ncols();
    let gram = a.transpose() * a + DMatrix::identity(n, n) * alpha;
    let rhs = a.transpose() * f;
    let chol = gram
        .cholesky()
        .ok_or(CoreError::DecompositionFailed)?;
    Ok(chol.solve(&rhs))
}

/// Applies `B_α^power` to `r`, where `B_α = α^{1/2}(αI + AAᵀ)^{-1/2}`,
/// through a symmetric eigendecomposition of `AAᵀ`.
pub fn dense_b_apply<T: Real + RealField>(
    a: &DMatrix<T>,
    r: &DVector<T>,
    alpha: T,
    power: i32,
) -> DVector<T> {
    let gram = a * a.transpose();
    let eig = gram.symmetric_eigen();
    // eigenvalue of B_α on the eigenvector with AAᵀ-eigenvalue λ is
    // sqrt(α/(α+λ)); numerical λ slightly below zero clamps to zero.
    let coords = eig.eigenvectors.transpose() * r;
    let mut scaled = coords;
    for (i, lam) in eig.eigenvalues.iter().enumerate() {
        let lam = if *lam > T::zero() { *lam } else { T::zero() };
        let factor = Float::powi(Float::sqrt(alpha / (alpha + lam)), power);
        scaled[i] *= factor;
    }
    &eig.eigenvectors * scaled
}

/// Residual `A u_α − f` from the dense solve.
pub fn dense_residual<T: Real + RealField>(
    a: &DMatrix<T>,
    f: &DVector<T>,
    alpha: T,
) -> Result<DVector<T>> {
    Ok(a * dense_solution(a, f, alpha)? - f)
}

/// `ψ_Q(α) = α⁻¹ ‖Aᵀ B_α² (A u_α − f)‖` evaluated densely.
pub fn dense_psi_q<T: Real + RealField>(
    a: &DMatrix<T>,
    f: &DVector<T>,
    alpha: T,
) -> Result<T> {
    let r = dense_residual(a, f, alpha)?;
    let b2r = dense_b_apply(a, &r, alpha, 2);
    Ok((a.transpose() * b2r).norm() / alpha)
}

/// 2-iterated Tikhonov approximation
/// `u_{2,α} = (αI + AᵀA)^{-1}(α u_α + Aᵀ f)` via dense solves.
pub fn dense_iterated2<T: Real + RealField>(
    a: &DMatrix<T>,
    f: &DVector<T>,
    alpha: T,
) -> Result<DVector<T>> {
    let u1 = dense_solution(a, f, alpha)?;
    let n = a.ncols();
    let gram = a.transpose() * a + DMatrix::identity(n, n) * alpha;
    let rhs = u1 * alpha + a.transpose() * f;
    let chol = gram.cholesky().ok_or(CoreError::DecompositionFailed)?;
    Ok(chol.solve(&rhs))
}
