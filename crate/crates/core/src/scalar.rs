//! Exact integer scalars.
//!
//! Everything in this crate is exact. Intersection matrices, divisor
//! coefficients and closed forms are generic over [`ExactInt`], which is
//! implemented for machine integers (fast sweeps with bounded levels) and for
//! [`num_bigint::BigInt`] (unbounded levels and multipliers).

use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

pub trait ExactInt:
    Integer + Signed + Clone + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

impl<T> ExactInt for T where
    T: Integer
        + Signed
        + Clone
        + Debug
        + Display
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

/// Converts a small count into the scalar type.
///
/// Panics only if `T` cannot hold `value`, which does not happen for the
/// index and multiplier ranges used in this crate.
pub fn int<T: ExactInt>(value: u64) -> T {
    T::from_u64(value).expect("value fits in scalar type")
}

/// `2^k` in the scalar type.
pub fn pow2<T: ExactInt>(k: usize) -> T {
    num_traits::pow(int::<T>(2), k)
}

pub fn ratio<T: ExactInt>(numer: T, denom: T) -> Ratio<T> {
    Ratio::new(numer, denom)
}

/// Floor division by a positive divisor.
pub fn floor_div<T: ExactInt>(numer: &T, denom: &T) -> T {
    numer.div_floor(denom)
}
