//! Exact arithmetic substrate: rationals, sparse multivariate polynomials,
//! degree-truncated series and polynomial matrices.
//!
//! Every value here is immutable once built and every operation is a pure
//! function, so results never depend on evaluation order.

mod matrix;
mod poly;
mod series;

pub use matrix::{PolyMatrix, RatMatrix, DEFAULT_DET_GUARD};
pub use poly::{Monomial, Poly};
pub use series::{series_compose, Series};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed};
use thiserror::Error;

/// Exact rational scalar. `num_rational` keeps it reduced with a positive
/// denominator, and zero is stored as `0/1`.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("series cap mismatch: expected cap {expected}, found {found}")]
    CapMismatch { expected: u32, found: u32 },
    #[error("matrix shape mismatch: {left}x{left} against {right}x{right}")]
    ShapeMismatch { left: usize, right: usize },
    #[error("matrix dimension {dim} exceeds the determinant guard {guard}")]
    DeterminantGuard { dim: usize, guard: usize },
    #[error("series operation requires constant term {expected}")]
    ConstantTerm { expected: i64 },
    #[error("matrix power must be at least 1")]
    ZeroPower,
}

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Always `p/q`, even for integers.
pub fn fmt_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn factorial(k: u64) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, x| acc * x)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// Number of distinct orderings of a multiset given by its multiplicities.
pub fn multinomial(counts: &[u32]) -> BigUint {
    let total: u64 = counts.iter().map(|&c| c as u64).sum();
    let denom = counts
        .iter()
        .fold(BigUint::one(), |acc, &c| acc * factorial(c as u64));
    factorial(total) / denom
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

pub(crate) fn uint_to_rat(u: BigUint) -> Rational {
    Rational::from_integer(BigInt::from(u))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multinomial_counts_orderings() {
        assert_eq!(multinomial(&[3]), BigUint::from(1u32));
        assert_eq!(multinomial(&[1, 1]), BigUint::from(2u32));
        assert_eq!(multinomial(&[2, 1]), BigUint::from(3u32));
        assert_eq!(multinomial(&[1, 1, 1]), BigUint::from(6u32));
    }

    #[test]
    fn binomial_small() {
        assert_eq!(binomial(6, 2), BigUint::from(15u32));
        assert_eq!(binomial(4, 0), BigUint::from(1u32));
        assert_eq!(binomial(2, 3), BigUint::from(0u32));
    }

    #[test]
    fn rationals_print_as_fractions() {
        assert_eq!(fmt_rational(&rat_int(6)), "6/1");
        assert_eq!(fmt_rational(&rat(-2, 4)), "-1/2");
        assert_eq!(fmt_rational(&rat_int(0)), "0/1");
    }
}
