//! Exact rational thresholds.
//!
//! Every threshold comparison goes through [`Q`]; values serialize as
//! `"p/q"` strings.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: impl Into<BigInt>) -> Q {
    Q::from_integer(n.into())
}

pub fn qu(n: usize) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `base^e` for a possibly negative integer exponent.
pub fn qpow(base: &Q, e: i64) -> Q {
    if e >= 0 {
        Pow::pow(base, e as u64)
    } else {
        Pow::pow(base.recip(), e.unsigned_abs())
    }
}

/// `w^e` as a rational, `e` possibly negative.
pub fn wpow(w: usize, e: i64) -> Q {
    qpow(&qu(w), e)
}

pub fn upow(w: usize, e: u32) -> BigUint {
    Pow::pow(BigUint::from(w), e)
}

pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
    let d = BigInt::from_str(d).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("{s:?}: zero denominator")));
    }
    Ok(Q::new(n, d))
}

pub fn fmt_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Float view for human-readable output only; never used in decisions.
pub fn approx(x: &Q) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

pub fn is_in_open_unit(x: &Q) -> bool {
    x.is_positive() && x < &Q::one()
}

/// `⌊log2 x⌋` for a positive integer.
pub fn floor_log2(x: &BigUint) -> u64 {
    x.bits().saturating_sub(1)
}

/// `⌈log2 x⌉` for a positive integer.
pub fn ceil_log2(x: &BigUint) -> u64 {
    let f = floor_log2(x);
    if *x == BigUint::one() << f {
        f
    } else {
        f + 1
    }
}

pub mod serde_q {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_q_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &[(String, Q)], s: S) -> std::result::Result<S::Ok, S::Error> {
        x.iter()
            .map(|(k, v)| (k.clone(), fmt_q(v)))
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<(String, Q)>, D::Error> {
        let v: Vec<(String, String)> = Vec::deserialize(d)?;
        v.into_iter()
            .map(|(k, s)| parse_q(&s).map(|x| (k, x)).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("3/6").unwrap(), q(1, 2));
        assert_eq!(parse_q("2").unwrap(), qi(2));
        assert!(parse_q("1/0").is_err());
        assert_eq!(fmt_q(&q(-4, 6)), "-2/3");
    }

    #[test]
    fn powers() {
        assert_eq!(wpow(2, -3), q(1, 8));
        assert_eq!(qpow(&q(2, 3), 2), q(4, 9));
        assert_eq!(floor_log2(&BigUint::from(9u32)), 3);
        assert_eq!(ceil_log2(&BigUint::from(9u32)), 4);
        assert_eq!(ceil_log2(&BigUint::from(8u32)), 3);
    }
}
