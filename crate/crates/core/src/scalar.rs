//! Scalar abstraction shared by the distance matrices and the probability
//! arithmetic.
//!
//! Bit-valued models use unsigned integers, compressor proxies use `f64`, and
//! the probabilistic claim runs over exact rationals. All of them go through
//! the traits below.

use std::fmt::{Debug, Display};

use num_traits::{FromPrimitive, Num, NumCast, ToPrimitive};

/// A distance value: bits, scaled NCD units, or anything ordered and numeric.
pub trait Scalar:
    Num + NumCast + ToPrimitive + Copy + PartialOrd + Debug + Display + Send + Sync + 'static
{
    /// Largest of two values under `PartialOrd` (NaN-free inputs assumed).
    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// `true` for values usable as distances (finite and nonnegative).
    fn is_valid_distance(self) -> bool {
        match self.to_f64() {
            Some(v) => v.is_finite() && v >= 0.0,
            None => false,
        }
    }
}

impl<T> Scalar for T where
    T: Num + NumCast + ToPrimitive + Copy + PartialOrd + Debug + Display + Send + Sync + 'static
{
}

/// Exact field arithmetic for probabilities. Implemented by the rational
/// types; `f64` satisfies it too, which the property tests exploit.
pub trait Probability: Num + FromPrimitive + Clone + PartialOrd + Debug {}

impl<T> Probability for T where T: Num + FromPrimitive + Clone + PartialOrd + Debug {}

/// `count >= 2^exp` for a signed exponent.
pub fn at_least_pow2(count: u64, exp: i64) -> bool {
    if exp <= 0 {
        // 2^exp <= 1 and counts are integers
        count >= 1
    } else if exp >= 64 {
        false
    } else {
        count >= 1u64 << exp
    }
}

/// `count > 2^exp` for a signed exponent.
pub fn exceeds_pow2(count: u64, exp: i64) -> bool {
    if exp < 0 {
        count >= 1
    } else if exp >= 64 {
        false
    } else {
        count > 1u64 << exp
    }
}

/// Smallest integer `t` with `t > 2^exp`.
pub fn above_pow2(exp: i64) -> u64 {
    if exp < 0 {
        1
    } else {
        (1u64 << exp.min(62)) + 1
    }
}

/// Number of bits needed to index `n` alternatives: `ceil(log2 n)`, 0 for n <= 1.
pub fn index_width(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

/// `floor(log2 n)` for n >= 1.
pub fn floor_log2(n: u64) -> u32 {
    debug_assert!(n > 0);
    63 - n.leading_zeros()
}

/// Length of the Elias gamma code of `n + 1`, used for transmitting small
/// parameters such as `m` alongside a code word.
pub fn gamma_len(n: u64) -> u32 {
    2 * floor_log2(n + 1) + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow2_comparisons_handle_negative_exponents() {
        assert!(at_least_pow2(1, -3));
        assert!(!at_least_pow2(0, -3));
        assert!(at_least_pow2(8, 3));
        assert!(!at_least_pow2(7, 3));
        assert!(exceeds_pow2(1, -1));
        assert!(!exceeds_pow2(0, -1));
        assert!(!exceeds_pow2(4, 2));
        assert!(exceeds_pow2(5, 2));
        assert_eq!(above_pow2(2), 5);
        assert_eq!(above_pow2(-2), 1);
        assert_eq!(above_pow2(0), 2);
    }

    #[test]
    fn widths() {
        assert_eq!(index_width(0), 0);
        assert_eq!(index_width(1), 0);
        assert_eq!(index_width(2), 1);
        assert_eq!(index_width(3), 2);
        assert_eq!(index_width(4), 2);
        assert_eq!(index_width(5), 3);
        assert_eq!(floor_log2(1), 0);
        assert_eq!(floor_log2(7), 2);
        assert_eq!(floor_log2(8), 3);
        assert_eq!(gamma_len(0), 1);
        assert_eq!(gamma_len(1), 3);
        assert_eq!(gamma_len(3), 5);
    }
}
