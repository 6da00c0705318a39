//! Exact rational scalars.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::str::FromStr;

/// Arbitrary-precision rational in canonical form.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// `(-1)^k` as a scalar.
pub fn sign(k: i64) -> Scalar {
    if k.rem_euclid(2) == 0 {
        one()
    } else {
        -one()
    }
}

/// `n!` as a scalar.
pub fn factorial(n: u32) -> Scalar {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    Scalar::from_integer(acc)
}

/// Renders `p/q` with the denominator always present.
pub fn to_string(s: &Scalar) -> String {
    format!("{}/{}", s.numer(), s.denom())
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("cannot parse scalar {0:?}: expected \"p/q\" or \"p\" with integer p, nonzero q")]
pub struct ParseScalarError(pub String);

/// Accepts `p/q` or a bare integer `p`.
pub fn parse(text: &str) -> Result<Scalar, ParseScalarError> {
    let t = text.trim();
    let bad = || ParseScalarError(text.to_string());
    match t.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Scalar::new(p, q))
        }
        None => BigInt::from_str(t).map(Scalar::from_integer).map_err(|_| bad()),
    }
}

pub fn is_integer(s: &Scalar) -> bool {
    s.denom().is_one()
}

pub fn abs(s: &Scalar) -> Scalar {
    s.abs()
}

/// Serde adapter storing a scalar as a `"p/q"` string.
pub mod serde_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: &Scalar, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&to_string(s))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Scalar, D::Error> {
        let text = String::deserialize(de)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}
