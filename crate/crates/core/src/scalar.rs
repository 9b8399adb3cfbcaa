//! Exact rational scalars.
//!
//! Every coefficient in this crate is an arbitrary-precision rational.
//! There is no floating point anywhere; equality checks are exact and the
//! only acceptable discrepancy in any verification is literal zero.

use num::bigint::BigInt;
use num::traits::{One, Signed, Zero};
use num::BigRational;

/// Exact rational scalar.
pub type Scalar = BigRational;

/// The integer `n` as a scalar.
pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// The fraction `p/q` as a scalar. Requires `q != 0`.
pub fn rat(p: i64, q: i64) -> Scalar {
    assert!(q != 0, "zero denominator");
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// `2^e` for any integer `e`, including negative exponents.
pub fn pow2(e: i64) -> Scalar {
    let mag = BigInt::from(2).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(mag)
    } else {
        BigRational::new(BigInt::one(), mag)
    }
}

/// `n!` as a scalar.
pub fn factorial(n: u64) -> Scalar {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    BigRational::from_integer(acc)
}

/// Renders a scalar as `p` or `p/q` with positive denominator.
pub fn render_scalar(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Error for malformed rational literals.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ScalarParseError(pub String);

/// Parses `p` or `p/q` with optional sign on the numerator.
pub fn parse_scalar(s: &str) -> Result<Scalar, ScalarParseError> {
    let s = s.trim();
    let bad = || ScalarParseError(s.to_string());
    let (num_str, den_str) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (s, None),
    };
    let numer: BigInt = num_str.parse().map_err(|_| bad())?;
    let denom: BigInt = match den_str {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(numer, denom))
}

/// True when `x` is a nonnegative integer.
pub fn is_nonneg_int(x: &Scalar) -> bool {
    x.denom().is_one() && !x.numer().is_negative()
}
