use nalgebra::{DMatrix, DVector};

use crate::error::{CoreError, Result};
use crate::scalar::Real;

/// A discrete linear inverse problem `A u = f` with optional exact data.
///
/// `f` is the (possibly noisy) right-hand side actually handed to the
/// solver; `f_star`/`u_star` are only available in test-problem mode and
/// enable the error oracles.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem<T: Real + nalgebra::Scalar> {
    pub a: DMatrix<T>,
    pub f: DVector<T>,
    pub f_star: Option<DVector<T>>,
    pub u_star: Option<DVector<T>>,
}

impl<T: Real + nalgebra::RealField> Problem<T> {
    /// Builds a problem after validating shapes and finiteness.
    pub fn new(
        a: DMatrix<T>,
        f: DVector<T>,
        f_star: Option<DVector<T>>,
        u_star: Option<DVector<T>>,
    ) -> Result<Self> {
        let (m, n) = a.shape();
        if m == 0 || n == 0 {
            return Err(CoreError::EmptyProblem { m, n });
        }
        if f.len() != m {
            return Err(CoreError::DimensionMismatch {
                context: "right-hand side length",
                expected: m,
                got: f.len(),
            });
        }
        if let Some(fs) = &f_star {
            if fs.len() != m {
                return Err(CoreError::DimensionMismatch {
                    context: "exact data length",
                    expected: m,
                    got: fs.len(),
                });
            }
        }
        if let Some(us) = &u_star {
            if us.len() != n {
                return Err(CoreError::DimensionMismatch {
                    context: "exact solution length",
                    expected: n,
                    got: us.len(),
                });
            }
        }
        let finite = a.iter().all(|x| x.is_finite())
            && f.iter().all(|x| x.is_finite())
            && f_star.iter().flatten().all(|x| x.is_finite())
            && u_star.iter().flatten().all(|x| x.is_finite());
        if !finite {
            return Err(CoreError::NonFiniteInput);
        }
        Ok(Self { a, f, f_star, u_star })
    }

    pub fn nrows(&self) -> usize {
        self.a.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.a.ncols()
    }

    /// True noise norm `‖f − f_*‖`, available in test-problem mode.
    pub fn delta_true(&self) -> Option<T> {
        self.f_star.as_ref().map(|fs| (&self.f - fs).norm())
    }

    pub fn has_exact_data(&self) -> bool {
        self.f_star.is_some() && self.u_star.is_some()
    }
}
