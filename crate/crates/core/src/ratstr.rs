//! Serde adapter writing exact rationals as `"p/q"` strings.

use num_rational::BigRational;
use serde::{de::Error, Deserialize, Deserializer, Serializer};

pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
    let raw = String::deserialize(d)?;
    raw.parse::<BigRational>().map_err(D::Error::custom)
}
