//! Scalar abstraction for the spectral computations.
//!
//! All per-parameter formulas are generic over [`Real`]; `f64` is the
//! reference scalar and the one exercised by the experiment harness.
//! `f32` works for well-scaled inputs but cannot represent the default
//! grid floor squared (1e-36), so severely ill-posed sweeps need `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar usable in every grid/spectral formula.
pub trait Real:
    Float + FromPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` constant, panicking only for non-representable
    /// exotic types (never for `f32`/`f64`).
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("constant not representable in scalar type")
    }
}

impl<T> Real for T where
    T: Float + FromPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
}

/// Shorthand for converting literals inside generic code.
#[inline]
pub fn cast<T: Real>(x: f64) -> T {
    T::of(x)
}

/// Relative equality used for plateau detection on grid profiles.
///
/// `a` and `b` are assumed non-negative (functional values).
#[inline]
pub fn approx_eq_rel<T: Real>(a: T, b: T, rel_tol: T) -> bool {
    (a - b).abs() <= rel_tol * a.abs().max(b.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cast_roundtrips_common_constants() {
        assert_eq!(cast::<f64>(0.4), 0.4);
        assert_eq!(cast::<f32>(2.0), 2.0f32);
    }

    #[test]
    fn approx_eq_rel_handles_zeros_and_plateaus() {
        assert!(approx_eq_rel(0.0f64, 0.0, 1e-12));
        assert!(approx_eq_rel(1.0f64, 1.0 + 1e-13, 1e-12));
        assert!(!approx_eq_rel(1.0f64, 1.0 + 1e-9, 1e-12));
    }
}
