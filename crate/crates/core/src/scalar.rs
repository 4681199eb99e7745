//! Integer scalars for the exact linear algebra.
//!
//! Matrices and the sparse elementary-matrix arithmetic are generic over
//! [`IntScalar`]; the crate root fixes the arbitrary-precision aliases used
//! everywhere else. Machine integers are accepted for small inputs where the
//! caller knows entries stay bounded.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

pub trait IntScalar:
    Clone + Debug + Display + FromStr + Hash + Ord + Integer + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Number of bits in the absolute value; zero has length 0.
    fn bit_length(&self) -> u64;

    fn of(v: i64) -> Self {
        Self::from_i64(v).expect("i64 fits every integer scalar")
    }
}

impl IntScalar for i64 {
    fn bit_length(&self) -> u64 {
        64 - u64::from(self.unsigned_abs().leading_zeros())
    }
}

impl IntScalar for i128 {
    fn bit_length(&self) -> u64 {
        128 - u64::from(self.unsigned_abs().leading_zeros())
    }
}

impl IntScalar for BigInt {
    fn bit_length(&self) -> u64 {
        self.bits()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_lengths_agree() {
        for v in [-300i64, -1, 0, 1, 2, 255, 256, i64::MAX] {
            let b = BigInt::from(v);
            assert_eq!(v.bit_length(), b.bit_length(), "{v}");
            assert_eq!((v as i128).bit_length(), b.bit_length(), "{v}");
        }
    }
}
