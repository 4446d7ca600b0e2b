//! Exact rational numbers and their canonical `"num/den"` text form.
//!
//! Every rational in this crate is a [`Q`] (`num_rational::BigRational`),
//! which keeps numerator and denominator coprime with a positive
//! denominator, so structural equality is value equality.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn two_pow_neg(k: u32) -> Q {
    Q::new(BigInt::one(), BigInt::one() << k as usize)
}

/// Render as `num/den`, always with an explicit denominator.
pub fn fmt_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Strict parser for the canonical form emitted by [`fmt_q`]: the slash is
/// mandatory, the denominator positive and the fraction fully reduced.
pub fn parse_q(s: &str) -> Result<Q> {
    let (n, d) = s
        .split_once('/')
        .ok_or_else(|| Error::Schema(format!("rational {s:?} is not of the form num/den")))?;
    let num: BigInt = parse_int(n, s)?;
    let den: BigInt = parse_int(d, s)?;
    if !den.is_positive() {
        return Err(Error::Schema(format!(
            "rational {s:?} has non-positive denominator"
        )));
    }
    if !num.gcd(&den).is_one() {
        return Err(Error::Schema(format!(
            "rational {s:?} is not in lowest terms"
        )));
    }
    Ok(Q::new_raw(num, den))
}

fn parse_int(part: &str, whole: &str) -> Result<BigInt> {
    let digits = part.strip_prefix('-').unwrap_or(part);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Schema(format!(
            "rational {whole:?} has a malformed component"
        )));
    }
    if digits.len() > 1 && digits.starts_with('0') {
        return Err(Error::Schema(format!(
            "rational {whole:?} has leading zeros"
        )));
    }
    if part.starts_with('-') && digits == "0" {
        return Err(Error::Schema(format!(
            "rational {whole:?} has a negative zero"
        )));
    }
    part.parse()
        .map_err(|_| Error::Schema(format!("rational {whole:?} has a malformed component")))
}

/// Lenient parser for human input: accepts `3`, `-2`, `9/10`, `4/6`.
pub fn parse_q_lenient(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Usage(format!("cannot read {s:?} as a rational number"));
    match s.split_once('/') {
        Some((n, d)) => {
            let num: BigInt = n.trim().parse().map_err(|_| bad())?;
            let den: BigInt = d.trim().parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(num, den))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn approx(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Display adapter that prints a rational as `num/den`.
pub struct Frac<'a>(pub &'a Q);

impl fmt::Display for Frac<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

/// Serde adapters so rationals travel as `"num/den"` strings.
pub mod serde_q {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(de::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(xs.len()))?;
            for x in xs {
                seq.serialize_element(&fmt_q(x))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<Q>, D::Error> {
            let raw = Vec::<String>::deserialize(d)?;
            raw.iter()
                .map(|s| parse_q(s).map_err(de::Error::custom))
                .collect()
        }
    }
}
