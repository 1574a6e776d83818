//! Edge-weight scalar abstraction.
//!
//! All matching and cover arithmetic is exact integer arithmetic. Weights are
//! generic over the unsigned primitive integers that embed losslessly into
//! `i128`, which is the working type inside the blossom solver, and into
//! `u128`, which is the accumulator for matching values and cover values.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{PrimInt, Unsigned};

/// Unsigned integer edge weight (`u8`..`u64`).
pub trait Weight:
    PrimInt
    + Unsigned
    + Into<i128>
    + Into<u128>
    + TryFrom<u128>
    + FromStr
    + Display
    + Debug
    + Hash
    + Default
    + Send
    + Sync
    + 'static
{
    #[inline]
    fn wide(self) -> u128 {
        self.into()
    }

    #[inline]
    fn signed(self) -> i128 {
        self.into()
    }

    #[inline]
    fn big(self) -> BigUint {
        BigUint::from(self.wide())
    }

    /// Narrowing conversion; `None` when the value does not fit.
    #[inline]
    fn narrow(v: u128) -> Option<Self> {
        Self::try_from(v).ok()
    }
}

impl<T> Weight for T where
    T: PrimInt
        + Unsigned
        + Into<i128>
        + Into<u128>
        + TryFrom<u128>
        + FromStr
        + Display
        + Debug
        + Hash
        + Default
        + Send
        + Sync
        + 'static
{
}
