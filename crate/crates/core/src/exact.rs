//! Exact arithmetic helpers and their JSON encodings.
//!
//! Rationals travel as `{"num": "<digits>", "den": "<digits>"}` and big
//! integers as decimal strings, so no precision is lost in transport.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::Serializer;

/// Binomial coefficient C(a, b), defined as 0 when `a < b` or `a < 0`.
pub fn binomial(a: &BigInt, b: u32) -> BigInt {
    if a.is_negative() || *a < BigInt::from(b) {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..b {
        acc = acc * (a - i) / (i + 1);
    }
    acc
}

pub fn int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// Returns the numerator if `r` is integral.
pub fn to_integer(r: &BigRational) -> Option<BigInt> {
    r.is_integer().then(|| r.to_integer())
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn serialize_rational<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    let mut st = s.serialize_struct("Rational", 2)?;
    st.serialize_field("num", &r.numer().to_string())?;
    st.serialize_field("den", &r.denom().to_string())?;
    st.end()
}

pub fn serialize_opt_rational<S: Serializer>(
    r: &Option<BigRational>,
    s: S,
) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => serialize_rational(r, s),
        None => s.serialize_none(),
    }
}

pub fn serialize_bigint<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn serialize_opt_bigint<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}
