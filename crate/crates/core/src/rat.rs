//! Exact rational scalars.
//!
//! Every quantity in this crate (norms, coefficients, thresholds,
//! distances) is a [`Rat`]: an arbitrary-precision fraction kept in
//! lowest terms with a positive denominator. There is no floating
//! point anywhere in the library; equalities asserted by certificates
//! are exact.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar, always reduced, denominator always positive.
pub type Rat = num_rational::BigRational;

/// `p / q` as a [`Rat`]. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Integer `n` as a [`Rat`].
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`, rejecting zero denominators.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let make_err = || Error::ParseRational(s.to_string());
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| make_err())?;
            let q: BigInt = q.trim().parse().map_err(|_| make_err())?;
            if q.is_zero() {
                return Err(make_err());
            }
            Ok(Rat::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| make_err())?;
            Ok(Rat::from_integer(p))
        }
    }
}

/// Canonical `"p/q"` rendering (plain `"p"` when the denominator is 1).
pub fn format_rat(r: &Rat) -> String {
    r.to_string()
}

pub fn abs(r: &Rat) -> Rat {
    r.abs()
}

/// Sign of a nonzero rational as `+1`/`-1`; zero maps to `+1`.
pub fn sign_or_plus(r: &Rat) -> i8 {
    if r.is_negative() {
        -1
    } else {
        1
    }
}

pub fn is_one(r: &Rat) -> bool {
    r.is_one()
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod rat_string {
    use super::{format_rat, parse_rat, Rat};
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(de::Error::custom)
    }
}
