//! Singular system of the problem matrix and all per-α quantities.
//!
//! The matrix is decomposed once; every functional of the Tikhonov
//! approximation `u_α = (αI + AᵀA)^{-1}Aᵀf` then costs O(n) per α via
//! filter factors in singular coordinates. With `A = UΣVᵀ`,
//! `β_i = ⟨u_i, f⟩` and `ρ_⊥ = ‖f − P_{R(A)} f‖`:
//!
//! ```text
//! u_α        = Σ σ_i β_i/(α+σ_i²) v_i
//! ‖Au_α−f‖²  = Σ [α/(α+σ_i²)]² β_i²  + ρ_⊥²
//! ‖B_α r‖²   = Σ α³β_i²/(α+σ_i²)³    + ρ_⊥²
//! ‖B_α²r‖²   = Σ α⁴β_i²/(α+σ_i²)⁴    + ρ_⊥²
//! ψ_Q(α)     = α √(Σ σ_i²β_i²/(α+σ_i²)⁴)
//! ```
//!
//! `B_α = α^{1/2}(αI + AAᵀ)^{-1/2}` acts as the identity on the
//! orthogonal complement of the range, which is why `ρ_⊥` enters the
//! residual-type norms unchanged. The closed forms are validated against
//! the dense routines in [`crate::oracle`].

use std::sync::Arc;

use nalgebra::{DMatrix, DVector, RealField};
use num_traits::Float;

use crate::error::{CoreError, Result};
use crate::grid::ParameterGrid;
use crate::problem::Problem;
use crate::scalar::Real;

/// Data-independent part of the decomposition, shared between the
/// systems built for different right-hand sides of the same matrix.
#[derive(Debug)]
struct SpectralBasis<T: Real + nalgebra::Scalar> {
    /// Retained singular values, strictly positive, descending.
    sigma: Vec<T>,
    /// Left singular vectors of the retained triplets (m × r).
    u: DMatrix<T>,
    /// Right singular vectors of the retained triplets (n × r).
    v: DMatrix<T>,
    /// Full computed spectrum before rank truncation (diagnostics).
    all_sigma: Vec<T>,
    m: usize,
    n: usize,
}

/// Spectral decomposition of a problem together with the coefficients of
/// its right-hand side.
#[derive(Debug, Clone)]
pub struct SingularSystem<T: Real + nalgebra::Scalar> {
    basis: Arc<SpectralBasis<T>>,
    beta: Vec<T>,
    rho_perp: T,
    f_norm: T,
}

/// All per-α quantities of one Tikhonov evaluation.
#[derive(Debug, Clone)]
pub struct TikhonovEvaluation<T: Real + nalgebra::Scalar> {
    pub alpha: T,
    pub u_alpha: DVector<T>,
    pub norm_u: T,
    pub residual_norm: T,
    pub b_residual_norm: T,
    pub b2_residual_norm: T,
    pub psi_q: T,
    /// Coordinates of `u_α` in the right singular basis; differences of
    /// solutions reduce to differences of these.
    pub(crate) coeffs: Vec<T>,
}

/// Default relative rank tolerance: singular values `≤ tol·σ₁` are
/// dropped into the null-space part.
pub const DEFAULT_RANK_TOLERANCE: f64 = 1e-14;

/// Decomposes the problem matrix and projects the right-hand side.
pub fn decompose<T: Real + RealField>(
    problem: &Problem<T>,
    rank_tolerance: T,
) -> Result<SingularSystem<T>> {
    if rank_tolerance < T::zero() {
        return Err(CoreError::InvalidRule(format!(
            "rank tolerance must be >= 0, got {rank_tolerance}"
        )));
    }
    if !problem.a.iter().all(|x| Float::is_finite(*x)) {
        return Err(CoreError::NonFiniteInput);
    }
    let (m, n) = problem.a.shape();
    let svd = problem
        .a
        .clone()
        .try_svd(true, true, <T as Float>::epsilon(), 100_000)
        .ok_or(CoreError::DecompositionFailed)?;
    let u_full = svd.u.ok_or(CoreError::DecompositionFailed)?;
    let vt_full = svd.v_t.ok_or(CoreError::DecompositionFailed)?;

    // sort descending; nalgebra does not guarantee an order for try_svd
    let k = svd.singular_values.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| {
        svd.singular_values[j]
            .partial_cmp(&svd.singular_values[i])
            .expect("singular values are finite")
    });
    let all_sigma: Vec<T> = order.iter().map(|&i| svd.singular_values[i]).collect();

    let sigma1 = all_sigma.first().copied().unwrap_or_else(T::zero);
    let cutoff = rank_tolerance * sigma1;
    let r = all_sigma.iter().take_while(|&&s| s > cutoff).count();
    if r == 0 {
        return Err(CoreError::DecompositionFailed);
    }

    let mut u = DMatrix::<T>::zeros(m, r);
    let mut v = DMatrix::<T>::zeros(n, r);
    for (col, &src) in order.iter().take(r).enumerate() {
        u.set_column(col, &u_full.column(src));
        v.set_column(col, &vt_full.row(src).transpose());
    }

    let basis = Arc::new(SpectralBasis {
        sigma: all_sigma[..r].to_vec(),
        u,
        v,
        all_sigma,
        m,
        n,
    });
    Ok(project_data(basis, &problem.f))
}

fn project_data<T: Real + nalgebra::Scalar + RealField>(
    basis: Arc<SpectralBasis<T>>,
    f: &DVector<T>,
) -> SingularSystem<T> {
    let beta_vec = basis.u.transpose() * f;
    let residual = f - &basis.u * &beta_vec;
    let rho_perp = residual.norm();
    SingularSystem {
        beta: beta_vec.iter().copied().collect(),
        rho_perp,
        f_norm: f.norm(),
        basis,
    }
}

impl<T: Real + RealField> SingularSystem<T> {
    /// Rebuilds the data-dependent coefficients for a new right-hand
    /// side over the same (shared) decomposition.
    pub fn with_data(&self, f: &DVector<T>) -> Result<Self> {
        if f.len() != self.basis.m {
            return Err(CoreError::DimensionMismatch {
                context: "right-hand side length",
                expected: self.basis.m,
                got: f.len(),
            });
        }
        if !f.iter().all(|x| Float::is_finite(*x)) {
            return Err(CoreError::NonFiniteInput);
        }
        Ok(project_data(Arc::clone(&self.basis), f))
    }

    pub fn nrows(&self) -> usize {
        self.basis.m
    }

    pub fn ncols(&self) -> usize {
        self.basis.n
    }

    /// Number of retained singular triplets.
    pub fn rank(&self) -> usize {
        self.basis.sigma.len()
    }

    /// Retained singular values, descending.
    pub fn sigma(&self) -> &[T] {
        &self.basis.sigma
    }

    /// Full computed spectrum before rank truncation, descending.
    pub fn all_sigma(&self) -> &[T] {
        &self.basis.all_sigma
    }

    /// Coefficients `β_i = ⟨u_i, f⟩`.
    pub fn beta(&self) -> &[T] {
        &self.beta
    }

    /// Norm of the component of `f` orthogonal to the retained range.
    pub fn rho_perp(&self) -> T {
        self.rho_perp
    }

    pub fn f_norm(&self) -> T {
        self.f_norm
    }

    /// `λ₁ = σ₁² = ‖AᵀA‖`.
    pub fn lambda1(&self) -> T {
        let s = self.basis.sigma[0];
        s * s
    }

    /// Smallest retained eigenvalue `λ_min = σ_r²` of `AᵀA`.
    pub fn lambda_min(&self) -> T {
        let s = *self.basis.sigma.last().unwrap();
        s * s
    }

    /// Right singular vectors (n × r).
    pub fn right_vectors(&self) -> &DMatrix<T> {
        &self.basis.v
    }

    /// Left singular vectors (m × r).
    pub fn left_vectors(&self) -> &DMatrix<T> {
        &self.basis.u
    }

    /// Coordinates of `u_α` in the right singular basis.
    pub fn solution_coeffs(&self, alpha: T) -> Result<Vec<T>> {
        self.check_alpha(alpha)?;
        Ok(self
            .basis
            .sigma
            .iter()
            .zip(&self.beta)
            .map(|(&s, &b)| s * b / (alpha + s * s))
            .collect())
    }

    fn check_alpha(&self, alpha: T) -> Result<()> {
        if !(alpha > T::zero()) || !Float::is_finite(alpha) {
            return Err(CoreError::NonPositiveAlpha {
                alpha: alpha.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(())
    }

    /// Evaluates every per-α quantity at one parameter value.
    pub fn evaluate(&self, alpha: T) -> Result<TikhonovEvaluation<T>> {
        self.check_alpha(alpha)?;
        let mut norm_u2 = T::zero();
        let mut res2 = T::zero();
        let mut bres2 = T::zero();
        let mut b2res2 = T::zero();
        let mut psi2 = T::zero();
        let mut coeffs = Vec::with_capacity(self.rank());
        for (&s, &b) in self.basis.sigma.iter().zip(&self.beta) {
            let denom = alpha + s * s;
            let ratio = alpha / denom; // α/(α+σ²) ∈ (0,1)
            let c = s * b / denom;
            coeffs.push(c);
            norm_u2 = norm_u2 + c * c;
            let b2 = b * b;
            res2 = res2 + ratio * ratio * b2;
            bres2 = bres2 + ratio * ratio * ratio * b2;
            b2res2 = b2res2 + ratio * ratio * ratio * ratio * b2;
            let t = s * b * ratio * ratio / alpha; // σβα/(α+σ²)²
            psi2 = psi2 + t * t;
        }
        let perp2 = self.rho_perp * self.rho_perp;
        let u_alpha = &self.basis.v * DVector::from_column_slice(&coeffs);
        Ok(TikhonovEvaluation {
            alpha,
            u_alpha,
            norm_u: Float::sqrt(norm_u2),
            residual_norm: Float::sqrt(res2 + perp2),
            b_residual_norm: Float::sqrt(bres2 + perp2),
            b2_residual_norm: Float::sqrt(b2res2 + perp2),
            psi_q: Float::sqrt(psi2),
            coeffs,
        })
    }

    /// 2-iterated Tikhonov approximation
    /// `u_{2,α} = (αI + AᵀA)^{-1}(α u_α + Aᵀ f)`.
    pub fn iterated2_solution(&self, alpha: T) -> Result<DVector<T>> {
        self.check_alpha(alpha)?;
        let coeffs: Vec<T> = self
            .basis
            .sigma
            .iter()
            .zip(&self.beta)
            .map(|(&s, &b)| {
                let denom = alpha + s * s;
                s * b * (alpha + alpha + s * s) / (denom * denom)
            })
            .collect();
        Ok(&self.basis.v * DVector::from_column_slice(&coeffs))
    }
}

/// Regularization/noise split of the error at one α, for a system with
/// known exact data:
/// returns `(‖u⁺_α − u_*‖, ‖u_α − u⁺_α‖)` where
/// `u⁺_α = (αI + AᵀA)^{-1}Aᵀf_*`. Their sum is `e₁(α)`.
pub fn exact_error_terms<T: Real + RealField>(
    sys: &SingularSystem<T>,
    u_star: &DVector<T>,
    f_star: &DVector<T>,
    alpha: T,
) -> Result<(T, T)> {
    let oracle = ExactOracle::new(sys, u_star, f_star)?;
    Ok(oracle.error_terms(alpha))
}

/// Precomputed coordinates of the exact data, so that `e₁`, `e₂` and the
/// true error are O(r) per α over a whole grid.
#[derive(Debug, Clone)]
pub struct ExactOracle<T: Real + nalgebra::Scalar> {
    sigma: Vec<T>,
    beta: Vec<T>,
    beta_star: Vec<T>,
    /// `⟨v_i, u_*⟩`
    u_coords: Vec<T>,
    /// Norm of the component of `u_*` outside the retained right basis.
    u_perp: T,
}

impl<T: Real + RealField> ExactOracle<T> {
    pub fn new(
        sys: &SingularSystem<T>,
        u_star: &DVector<T>,
        f_star: &DVector<T>,
    ) -> Result<Self> {
        if u_star.len() != sys.ncols() || f_star.len() != sys.nrows() {
            return Err(CoreError::MissingExactData);
        }
        let beta_star = sys.basis.u.transpose() * f_star;
        let u_coords = sys.basis.v.transpose() * u_star;
        let u_perp = (u_star - &sys.basis.v * &u_coords).norm();
        Ok(Self {
            sigma: sys.basis.sigma.clone(),
            beta: sys.beta.clone(),
            beta_star: beta_star.iter().copied().collect(),
            u_coords: u_coords.iter().copied().collect(),
            u_perp,
        })
    }

    /// `(‖u⁺_α − u_*‖, ‖u_α − u⁺_α‖)`.
    pub fn error_terms(&self, alpha: T) -> (T, T) {
        let mut reg2 = T::zero();
        let mut noise2 = T::zero();
        for i in 0..self.sigma.len() {
            let s = self.sigma[i];
            let denom = alpha + s * s;
            let c_plus = s * self.beta_star[i] / denom;
            let dreg = c_plus - self.u_coords[i];
            reg2 = reg2 + dreg * dreg;
            let dnoise = s * (self.beta[i] - self.beta_star[i]) / denom;
            noise2 = noise2 + dnoise * dnoise;
        }
        reg2 = reg2 + self.u_perp * self.u_perp;
        (Float::sqrt(reg2), Float::sqrt(noise2))
    }

    /// `e₁(α) = ‖u⁺_α − u_*‖ + ‖u_α − u⁺_α‖`.
    pub fn e1(&self, alpha: T) -> T {
        let (reg, noise) = self.error_terms(alpha);
        reg + noise
    }

    /// `e₂(α, δ) = ‖u⁺_α − u_*‖ + δ/(2√α)`.
    pub fn e2(&self, alpha: T, delta: T) -> T {
        let (reg, _) = self.error_terms(alpha);
        reg + delta / (Float::sqrt(alpha) + Float::sqrt(alpha))
    }

    /// True error `‖u_α − u_*‖` of the Tikhonov approximation.
    pub fn error_at(&self, alpha: T) -> T {
        let mut err2 = T::zero();
        for i in 0..self.sigma.len() {
            let s = self.sigma[i];
            let c = s * self.beta[i] / (alpha + s * s);
            let d = c - self.u_coords[i];
            err2 = err2 + d * d;
        }
        Float::sqrt(err2 + self.u_perp * self.u_perp)
    }
}

/// Cache of evaluations over the full grid, indexed by grid position.
#[derive(Debug)]
pub struct GridSweep<'a, T: Real + nalgebra::Scalar> {
    pub sys: &'a SingularSystem<T>,
    pub grid: &'a ParameterGrid<T>,
    evals: Vec<TikhonovEvaluation<T>>,
}

impl<'a, T: Real + RealField> GridSweep<'a, T> {
    pub fn new(sys: &'a SingularSystem<T>, grid: &'a ParameterGrid<T>) -> Self {
        let evals = grid
            .values()
            .iter()
            .map(|&a| sys.evaluate(a).expect("grid values are positive"))
            .collect();
        Self { sys, grid, evals }
    }

    pub fn eval(&self, j: usize) -> &TikhonovEvaluation<T> {
        &self.evals[j]
    }

    pub fn len(&self) -> usize {
        self.evals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.evals.is_empty()
    }

    /// `‖u_{α_i} − u_{α_j}‖`, computed in singular coordinates.
    pub fn u_diff_norm(&self, i: usize, j: usize) -> T {
        let a = &self.evals[i].coeffs;
        let b = &self.evals[j].coeffs;
        let mut s = T::zero();
        for k in 0..a.len() {
            let d = a[k] - b[k];
            s = s + d * d;
        }
        Float::sqrt(s)
    }

    /// `‖u_{α_j} − u'‖` against an off-grid evaluation.
    pub fn u_diff_norm_with(&self, j: usize, other: &TikhonovEvaluation<T>) -> T {
        let a = &self.evals[j].coeffs;
        let b = &other.coeffs;
        let mut s = T::zero();
        for k in 0..a.len() {
            let d = a[k] - b[k];
            s = s + d * d;
        }
        Float::sqrt(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn identity_problem(n: usize, f: Vec<f64>) -> Problem<f64> {
        Problem::new(DMatrix::identity(n, n), DVector::from_vec(f), None, None)
            .unwrap()
    }

    #[test]
    fn identity_decomposition() {
        let p = identity_problem(3, vec![1.0, -2.0, 0.5]);
        let sys = decompose(&p, 1e-14).unwrap();
        assert_eq!(sys.rank(), 3);
        for &s in sys.sigma() {
            assert_relative_eq!(s, 1.0, max_relative = 1e-14);
        }
        assert!(sys.rho_perp() < 1e-14);
        // β is f up to the (orthogonal) basis permutation/sign
        let mut beta = sys.beta().to_vec();
        let mut f = vec![1.0, -2.0, 0.5];
        beta.iter_mut().for_each(|b| *b = b.abs());
        f.iter_mut().for_each(|b| *b = b.abs());
        beta.sort_by(|a, b| a.partial_cmp(b).unwrap());
        f.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (b, x) in beta.iter().zip(&f) {
            assert_relative_eq!(b, x, max_relative = 1e-12);
        }
    }

    #[test]
    fn diagonal_decomposition() {
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 1.0]));
        let p = Problem::new(a, DVector::from_vec(vec![1.0, 1.0]), None, None)
            .unwrap();
        let sys = decompose(&p, 1e-14).unwrap();
        assert_eq!(sys.sigma(), &[2.0, 1.0]);
        assert_relative_eq!(sys.beta()[0].abs(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(sys.beta()[1].abs(), 1.0, max_relative = 1e-14);
        assert_eq!(sys.lambda1(), 4.0);
        assert_eq!(sys.lambda_min(), 1.0);
    }

    #[test]
    fn identity_evaluation_closed_forms() {
        let f = vec![0.6, -0.8];
        let p = identity_problem(2, f);
        let sys = decompose(&p, 1e-14).unwrap();
        for &alpha in &[1e-6, 1e-2, 0.5, 1.0, 10.0] {
            let ev = sys.evaluate(alpha).unwrap();
            // u_α = f/(1+α), ‖f‖ = 1
            assert_relative_eq!(ev.norm_u, 1.0 / (1.0 + alpha), max_relative = 1e-13);
            assert_relative_eq!(
                ev.residual_norm,
                alpha / (1.0 + alpha),
                max_relative = 1e-13
            );
            assert_relative_eq!(
                ev.psi_q,
                alpha / ((1.0 + alpha) * (1.0 + alpha)),
                max_relative = 1e-13
            );
            for i in 0..2 {
                assert_relative_eq!(
                    ev.u_alpha[i],
                    p.f[i] / (1.0 + alpha),
                    max_relative = 1e-13
                );
            }
        }
    }

    #[test]
    fn single_mode_b_residual() {
        // A = diag(1) (1×1), f = (1): ‖B_α r‖² = α³/(α+1)³, at α=1 → 8^{-1/2}
        let p = identity_problem(1, vec![1.0]);
        let sys = decompose(&p, 1e-14).unwrap();
        let ev = sys.evaluate(1.0).unwrap();
        assert_relative_eq!(ev.b_residual_norm, 8.0f64.powf(-0.5), max_relative = 1e-14);
    }

    #[test]
    fn iterated2_identity_closed_form() {
        let f = vec![1.0, 2.0];
        let p = identity_problem(2, f);
        let sys = decompose(&p, 1e-14).unwrap();
        let alpha = 0.3;
        let u2 = sys.iterated2_solution(alpha).unwrap();
        let scale = (1.0 + 2.0 * alpha) / ((1.0 + alpha) * (1.0 + alpha));
        assert_relative_eq!(u2[0], scale * 1.0, max_relative = 1e-13);
        assert_relative_eq!(u2[1], scale * 2.0, max_relative = 1e-13);
    }

    #[test]
    fn iterated2_vanishes_for_large_alpha() {
        let p = identity_problem(2, vec![1.0, -1.0]);
        let sys = decompose(&p, 1e-14).unwrap();
        let u2a = sys.iterated2_solution(1e6).unwrap();
        let u2b = sys.iterated2_solution(1e8).unwrap();
        // O(1/α) decay componentwise
        for i in 0..2 {
            assert!(u2a[i].abs() < 3.0 / 1e6);
            assert!(u2b[i].abs() < 3.0 / 1e8);
            assert!(u2b[i].abs() < u2a[i].abs() / 50.0);
        }
    }

    #[test]
    fn exact_error_terms_zero_noise_and_identity() {
        let n = 4;
        let a = DMatrix::<f64>::identity(n, n);
        let u_star = DVector::from_vec(vec![1.0, -0.5, 0.25, 2.0]);
        let f_star = &a * &u_star;
        let p = Problem::new(a, f_star.clone(), Some(f_star.clone()), Some(u_star.clone()))
            .unwrap();
        let sys = decompose(&p, 1e-14).unwrap();
        for &alpha in &[1e-4, 1e-2, 1.0] {
            let (reg, noise) =
                exact_error_terms(&sys, &u_star, &f_star, alpha).unwrap();
            assert!(noise.abs() < 1e-15);
            // A = I: e_reg = α‖u_*‖/(1+α)
            assert_relative_eq!(
                reg,
                alpha * u_star.norm() / (1.0 + alpha),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn rejects_nonpositive_alpha() {
        let p = identity_problem(2, vec![1.0, 0.0]);
        let sys = decompose(&p, 1e-14).unwrap();
        assert!(sys.evaluate(0.0).is_err());
        assert!(sys.evaluate(-1.0).is_err());
        assert!(sys.iterated2_solution(0.0).is_err());
    }

    #[test]
    fn with_data_recomputes_coefficients() {
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 1.0]));
        let p = Problem::new(a, DVector::from_vec(vec![1.0, 1.0]), None, None)
            .unwrap();
        let sys = decompose(&p, 1e-14).unwrap();
        let sys2 = sys.with_data(&DVector::from_vec(vec![3.0, -1.0])).unwrap();
        assert_relative_eq!(sys2.beta()[0].abs(), 3.0, max_relative = 1e-13);
        assert_relative_eq!(sys2.beta()[1].abs(), 1.0, max_relative = 1e-13);
        assert_eq!(sys2.sigma(), sys.sigma());
    }

    #[test]
    fn parseval_identity() {
        // ‖f‖² = Σβ² + ρ⊥² for a rank-deficient matrix
        let a = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        let f = DVector::from_vec(vec![1.0, 2.0, 3.0]);
        let p = Problem::new(a, f, None, None).unwrap();
        let sys = decompose(&p, 1e-14).unwrap();
        let sum: f64 = sys.beta().iter().map(|b| b * b).sum::<f64>()
            + sys.rho_perp() * sys.rho_perp();
        assert_relative_eq!(sum, sys.f_norm() * sys.f_norm(), max_relative = 1e-12);
        assert_relative_eq!(sys.rho_perp(), 3.0, max_relative = 1e-12);
    }
}
