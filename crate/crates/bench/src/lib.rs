//! Fixtures shared by the benchmarks.

use gls_normal::{make_system, DigitSystem};
use num_rational::BigRational;

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn base10() -> DigitSystem {
    DigitSystem::uniform(10).expect("base 10")
}

/// Measures `(1/2, 1/4, 1/4)`.
pub fn gls3() -> DigitSystem {
    make_system(&[ratio(1, 2), ratio(1, 4), ratio(1, 4)]).expect("gls3")
}

/// `2^-n` as an exact rational.
pub fn pow2(n: u32) -> BigRational {
    BigRational::new(1.into(), num_rational::BigRational::from_integer(2.into()).numer().pow(n))
}
