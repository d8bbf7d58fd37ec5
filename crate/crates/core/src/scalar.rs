//! The integer scalar the expansion engine is generic over.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigUint;
use num_integer::{Integer, Roots};
use num_traits::{FromPrimitive, ToPrimitive, Unsigned};

/// Unsigned integer type usable as a radicand.
///
/// Implemented for every unsigned primitive and for [`BigUint`]. The
/// expansion state of a radicand `D` only ever holds values up to `2·⌊√D⌋`
/// and `D` itself, so a primitive type wide enough for `D` never overflows.
pub trait Radicand:
    Integer
    + Unsigned
    + Roots
    + Clone
    + Debug
    + Display
    + Hash
    + FromPrimitive
    + ToPrimitive
    + Into<BigUint>
    + Send
    + Sync
    + 'static
{
    fn to_big(&self) -> BigUint {
        self.clone().into()
    }
}

impl<T> Radicand for T where
    T: Integer
        + Unsigned
        + Roots
        + Clone
        + Debug
        + Display
        + Hash
        + FromPrimitive
        + ToPrimitive
        + Into<BigUint>
        + Send
        + Sync
        + 'static
{
}
