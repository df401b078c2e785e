//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar (`f32` or `f64`) the matrix kernels are generic over.
///
/// Each implementation carries the default tolerances that make sense at its
/// precision.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Relative residual tolerance for eigendecompositions and hermiticity checks.
    fn default_tol_eig() -> Self;
    /// Absolute threshold on the smallest eigenvalue of a positive-definite matrix.
    fn default_tol_pd() -> Self;

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn default_tol_eig() -> Self {
        1e-10
    }
    fn default_tol_pd() -> Self {
        1e-12
    }
}

impl Real for f32 {
    fn default_tol_eig() -> Self {
        1e-4
    }
    fn default_tol_pd() -> Self {
        1e-5
    }
}

/// Tolerances used by operations that validate their inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    /// Relative tolerance for eigen-residuals and hermiticity.
    pub eig: T,
    /// Absolute lower bound an eigenvalue must exceed to count as positive.
    pub pd: T,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        Self {
            eig: T::default_tol_eig(),
            pd: T::default_tol_pd(),
        }
    }
}
