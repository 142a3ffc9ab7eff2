//! Arbitrary-precision rationals and their JSON form (`["num", "den"]`, decimal strings).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn to_pair(q: &Rational) -> [String; 2] {
    [q.numer().to_string(), q.denom().to_string()]
}

pub fn from_pair(pair: &[String; 2]) -> Result<Rational, String> {
    let num: BigInt = pair[0]
        .parse()
        .map_err(|_| format!("bad numerator {:?}", pair[0]))?;
    let den: BigInt = pair[1]
        .parse()
        .map_err(|_| format!("bad denominator {:?}", pair[1]))?;
    if den.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(Rational::new(num, den))
}

/// `#[serde(with = "crate::rational::pair")]` adapter.
pub mod pair {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        to_pair(q).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let p = <[String; 2]>::deserialize(d)?;
        from_pair(&p).map_err(D::Error::custom)
    }
}
