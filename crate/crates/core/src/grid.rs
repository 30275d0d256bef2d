use crate::error::{CoreError, Result};
use crate::scalar::{cast, Real};

/// Geometric parameter grid `α_j = α₀ qʲ`, `j = 0..=M`, strictly decreasing.
///
/// `M` is the largest index with `α_M ≥ floor`, so `α_M ≥ floor > α_{M+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterGrid<T: Real> {
    alpha0: T,
    q: T,
    values: Vec<T>,
}

impl<T: Real> ParameterGrid<T> {
    /// Builds the grid from the top value, ratio and floor.
    pub fn new(alpha0: T, q: T, floor: T) -> Result<Self> {
        if !(alpha0 > T::zero()) || !alpha0.is_finite() {
            return Err(CoreError::InvalidGrid(format!("alpha0 = {alpha0}")));
        }
        if !(q > T::zero() && q < T::one()) {
            return Err(CoreError::InvalidGrid(format!("q = {q} not in (0,1)")));
        }
        if !(floor > T::zero()) || floor > alpha0 {
            return Err(CoreError::InvalidGrid(format!(
                "floor = {floor} must satisfy 0 < floor <= alpha0"
            )));
        }
        let mut values = Vec::new();
        let mut j = 0i32;
        loop {
            let v = alpha0 * q.powi(j);
            if v < floor {
                break;
            }
            values.push(v);
            j += 1;
            if j > 1_000_000 {
                return Err(CoreError::InvalidGrid(
                    "grid would exceed 1e6 points".into(),
                ));
            }
        }
        if values.is_empty() {
            return Err(CoreError::InvalidGrid("empty grid".into()));
        }
        Ok(Self { alpha0, q, values })
    }

    /// Default grid of the numerical experiments: `α₀ = 1`, `q = 0.95`,
    /// floor `1e-18`.
    pub fn standard() -> Result<Self> {
        Self::new(T::one(), cast(0.95), cast(1e-18))
    }

    pub fn alpha0(&self) -> T {
        self.alpha0
    }

    pub fn q(&self) -> T {
        self.q
    }

    /// Largest index `M`; the grid has `M + 1` points.
    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn value(&self, j: usize) -> T {
        self.values[j]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn alpha_min(&self) -> T {
        *self.values.last().unwrap()
    }

    /// Index of the smallest grid value `≥ alpha`; `None` if `alpha > α₀`.
    ///
    /// Ties (alpha between two grid points) resolve to the smaller value
    /// still `≥ alpha`, i.e. the largest admissible index.
    pub fn last_index_at_least(&self, alpha: T) -> Option<usize> {
        if alpha > self.alpha0 {
            return None;
        }
        // values are strictly decreasing
        let mut idx = 0;
        for (j, &v) in self.values.iter().enumerate() {
            if v >= alpha {
                idx = j;
            } else {
                break;
            }
        }
        Some(idx)
    }

    /// Index of the grid point closest to `alpha` in log scale.
    pub fn nearest_index(&self, alpha: T) -> usize {
        let j = self.last_index_at_least(alpha).unwrap_or(0);
        if j + 1 < self.values.len() {
            let d_hi = (self.values[j].ln() - alpha.ln()).abs();
            let d_lo = (self.values[j + 1].ln() - alpha.ln()).abs();
            if d_lo < d_hi {
                return j + 1;
            }
        }
        j
    }

    /// `c_q = (q⁻¹ − 1)/ln q⁻¹`, the grid-geometry constant of the
    /// a-posteriori bounds; tends to 1 as `q → 1`.
    pub fn c_q(&self) -> T {
        let qinv = T::one() / self.q;
        (qinv - T::one()) / qinv.ln()
    }
}
