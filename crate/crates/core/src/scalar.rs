//! Scalar traits the exact-arithmetic core is generic over.
//!
//! Every ring operation in the core goes through the `Checked*` traits so the
//! same code runs on overflow-checked machine integers (`i64`, `i128`) and on
//! arbitrary-precision integers or rationals. For `BigInt` and `BigRational`
//! the checked operations never fail.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

/// A commutative ring with overflow-checked arithmetic.
pub trait Ring:
    Clone
    + Debug
    + Display
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + Send
    + Sync
    + 'static
{
}

impl<T> Ring for T where
    T: Clone
        + Debug
        + Display
        + PartialEq
        + Zero
        + One
        + Neg<Output = Self>
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + Send
        + Sync
        + 'static
{
}

/// An integral domain with exact division, as needed by fraction-free elimination.
pub trait IntegerRing: Ring + Integer + Signed + CheckedDiv + ToPrimitive + ToBigInt {}

impl<T> IntegerRing for T where T: Ring + Integer + Signed + CheckedDiv + ToPrimitive + ToBigInt {}

/// Exact conversion to and from the arbitrary-precision integer type.
pub trait ToBigInt: Sized {
    fn to_bigint(&self) -> BigInt;
    fn from_bigint(value: &BigInt) -> Option<Self>;
}

impl ToBigInt for BigInt {
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
    fn from_bigint(value: &BigInt) -> Option<Self> {
        Some(value.clone())
    }
}

macro_rules! impl_to_bigint {
    ($($t:ty => $to:ident),*) => {$(
        impl ToBigInt for $t {
            fn to_bigint(&self) -> BigInt {
                BigInt::from(*self)
            }
            fn from_bigint(value: &BigInt) -> Option<Self> {
                value.$to()
            }
        }
    )*};
}

impl_to_bigint!(i8 => to_i8, i32 => to_i32, i64 => to_i64, i128 => to_i128);
