//! JSON encoding for arbitrary-precision integers: a plain number when the
//! value fits in 64 bits, a decimal string otherwise.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Integer(pub BigInt);

impl Serialize for Integer {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if let Some(v) = self.0.to_i64() {
            serializer.serialize_i64(v)
        } else if let Some(v) = self.0.to_u64() {
            serializer.serialize_u64(v)
        } else {
            serializer.serialize_str(&self.0.to_string())
        }
    }
}

impl<'de> Deserialize<'de> for Integer {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct IntegerVisitor;

        impl Visitor<'_> for IntegerVisitor {
            type Value = Integer;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a decimal integer string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Integer, E> {
                Ok(Integer(v.into()))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Integer, E> {
                Ok(Integer(v.into()))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Integer, E> {
                v.parse::<BigInt>()
                    .map(Integer)
                    .map_err(|_| E::custom(format!("invalid integer string {v:?}")))
            }
        }

        deserializer.deserialize_any(IntegerVisitor)
    }
}

/// Helpers for `#[serde(with = ...)]` on `Vec<BigInt>`.
pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let wrapped: Vec<Integer> = v.iter().cloned().map(Integer).collect();
        wrapped.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let wrapped: Vec<Integer> = Vec::deserialize(d)?;
        Ok(wrapped.into_iter().map(|x| x.0).collect())
    }
}

/// Helpers for `#[serde(with = ...)]` on a single `BigUint`.
pub mod natural {
    use super::*;
    use num_bigint::Sign;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        Integer(BigInt::from_biguint(Sign::Plus, v.clone())).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let v = Integer::deserialize(d)?;
        v.0.to_biguint()
            .ok_or_else(|| de::Error::custom("expected a nonnegative integer"))
    }
}
