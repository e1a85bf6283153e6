//! Scalar abstraction used by the numeric parts of the crate.
//!
//! Everything probabilistic is generic over [`Real`], a blanket trait over
//! `num_traits::Float` plus the conversion and threading bounds the solvers
//! need. `f64` is the scalar the CLI and the integration tests use; `f32`
//! works too at reduced precision. Exact integer quantities (degrees, overlap
//! weights, microcanonical counts) never go through this trait.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar usable throughout the crate.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum<Self>
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
}

impl<T> Real for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + AddAssign
        + SubAssign
        + MulAssign
        + DivAssign
        + Sum<T>
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Converts an exact count into the working scalar.
///
/// Counts in this crate are bounded by `N * L` of the incidence matrix, far
/// below 2^53, so the conversion is exact for `f64` and never fails.
pub(crate) fn real<F: Real>(count: u64) -> F {
    F::from_u64(count).expect("count representable in scalar type")
}

/// Converts an index or length into the working scalar.
pub(crate) fn real_usize<F: Real>(n: usize) -> F {
    F::from_usize(n).expect("length representable in scalar type")
}
