//! Shared fixtures for the benchmark targets.

use num::bigint::BigInt;
use num::rational::BigRational;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// 1/10^exp.
pub fn tol(exp: u32) -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(10).pow(exp))
}
