use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `"3"` for integers, `"-3/4"` otherwise.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
        Some((n, d)) => {
            let n = n.trim().parse::<BigInt>().ok()?;
            let d = d.trim().parse::<BigInt>().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
    }
}

/// JSON form of a rational: a plain number when integral and within `i64`,
/// otherwise a `"p/q"` string.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
pub(crate) enum Entry {
    Int(i64),
    Text(String),
}

impl Entry {
    pub(crate) fn from_rational(q: &Rational) -> Self {
        match q.is_integer().then(|| q.numer().to_i64()).flatten() {
            Some(n) => Entry::Int(n),
            None => Entry::Text(format_rational(q)),
        }
    }

    pub(crate) fn to_rational(&self) -> Option<Rational> {
        match self {
            Entry::Int(n) => Some(rat(*n)),
            Entry::Text(s) => parse_rational(s),
        }
    }
}

/// `#[serde(with = "...")]` adapter for a single [`Rational`] field.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        Entry::from_rational(q).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        use serde::de::Error as _;
        Entry::deserialize(d)?
            .to_rational()
            .ok_or_else(|| D::Error::custom("bad rational"))
    }
}
