//! Text encoding of exact rationals (`"p/q"` or `"p"`) and small helpers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Parses `"p/q"` or `"p"`. Surrounding whitespace is ignored; a zero
/// denominator is an error.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad numerator in {t:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad denominator in {t:?}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {t:?}")));
    }
    Ok(BigRational::new(num, den))
}

/// Parses a comma separated list of rationals, e.g. `"5,-1,1/2"`.
pub fn parse_rational_list(s: &str) -> Result<Vec<BigRational>> {
    s.split(',').map(parse_rational).collect()
}

/// Reduced `"p/q"`, or `"p"` for integers.
pub fn format_rational(r: &BigRational) -> String {
    r.to_string()
}

/// `"p/q (≈ 0.123456)"`. The decimal is for display only.
pub fn format_pretty(r: &BigRational) -> String {
    if r.is_integer() {
        return r.to_string();
    }
    match r.to_f64() {
        Some(f) => format!("{r} (≈ {f:.6})"),
        None => r.to_string(),
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Divides `v` by its largest component so that the maximum becomes 1.
/// Returns `None` if any component is not strictly positive.
pub fn scale_to_unit_max(v: &[BigRational]) -> Option<Vec<BigRational>> {
    if v.is_empty() || v.iter().any(|x| !x.is_positive()) {
        return None;
    }
    let max = v.iter().max().cloned()?;
    if max.is_one() {
        return Some(v.to_vec());
    }
    Some(v.iter().map(|x| x / &max).collect())
}

pub fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `true` iff `a = αb` for some rational `α > 0`.
pub fn positively_proportional(a: &[BigRational], b: &[BigRational]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut ratio: Option<BigRational> = None;
    for (x, y) in a.iter().zip(b) {
        if x.is_zero() != y.is_zero() {
            return false;
        }
        if x.is_zero() {
            continue;
        }
        let r = x / y;
        match &ratio {
            None => {
                if !r.is_positive() {
                    return false;
                }
                ratio = Some(r);
            }
            Some(q) if *q != r => return false,
            _ => {}
        }
    }
    ratio.is_some()
}

pub mod serde_rational {
    //! Serde adapters for rationals encoded as strings.
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    /// Keeps the inner message so the outer parse error is not prefixed twice.
    fn de_err<E: de::Error>(e: Error) -> E {
        match e {
            Error::Parse(m) => E::custom(m),
            other => E::custom(other),
        }
    }

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(de_err)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(
            v: &[BigRational],
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&format_rational(r))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<BigRational>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter()
                .map(|s| parse_rational(s).map_err(de_err))
                .collect()
        }
    }

    pub mod matrix {
        use super::*;

        pub fn serialize<S: Serializer>(
            m: &[Vec<BigRational>],
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            let rows: Vec<Vec<String>> = m
                .iter()
                .map(|r| r.iter().map(format_rational).collect())
                .collect();
            serde::Serialize::serialize(&rows, s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<Vec<BigRational>>, D::Error> {
            let rows = Vec::<Vec<String>>::deserialize(d)?;
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|s| parse_rational(s).map_err(de_err))
                        .collect()
                })
                .collect()
        }
    }
}
