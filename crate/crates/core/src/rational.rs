//! Rational scalars and small helpers around `BigRational`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::str::FromStr;

pub type Rational = BigRational;

/// `n/d` as a rational. Panics on a zero denominator.
pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Sign as -1, 0 or 1.
pub fn sign(r: &Rational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Canonical text: `n` for integers, `n/d` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `n`, `n/d` or a finite decimal such as `-1.25`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).ok()?;
        let d = BigInt::from_str(d.trim()).ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.trim_start().starts_with('-');
        let ip = ip.trim().trim_start_matches(['-', '+']);
        if !fp.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits = format!("{}{}", if ip.is_empty() { "0" } else { ip }, fp);
        let n = BigInt::from_str(&digits).ok()?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let r = BigRational::new(n, d);
        return Some(if neg { -r } else { r });
    }
    BigInt::from_str(s).ok().map(BigRational::from_integer)
}

/// Exact conversion of a finite double.
pub fn from_f64(x: f64) -> Option<Rational> {
    BigRational::from_float(x)
}

/// Nearest dyadic rational with denominator `2^bits`.
pub fn dyadic_round(x: f64, bits: u32) -> Rational {
    let scale = (bits as f64).exp2();
    let n = (x * scale).round();
    let num = BigRational::from_float(n).unwrap_or_else(Rational::zero);
    num / BigRational::from_integer(num_traits::pow(BigInt::from(2), bits as usize))
}

pub fn min_rat<'a>(a: &'a Rational, b: &'a Rational) -> &'a Rational {
    if a <= b {
        a
    } else {
        b
    }
}

pub fn max_rat<'a>(a: &'a Rational, b: &'a Rational) -> &'a Rational {
    if a >= b {
        a
    } else {
        b
    }
}

/// Serde helpers that store a rational as its canonical string.
pub mod serde_rational {
    use super::*;
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        S(String),
        I(i64),
        F(f64),
    }

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        match Raw::deserialize(d)? {
            Raw::S(s) => parse_rational(&s).ok_or_else(|| D::Error::custom(format!("bad rational `{s}`"))),
            Raw::I(i) => Ok(int(i)),
            Raw::F(f) => {
                parse_rational(&f.to_string()).ok_or_else(|| D::Error::custom("non-finite number"))
            }
        }
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&format_rational(r))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            #[derive(Deserialize)]
            struct W(#[serde(with = "super")] Rational);
            let v: Vec<W> = Vec::deserialize(d)?;
            Ok(v.into_iter().map(|w| w.0).collect())
        }
    }
}
