//! Serde helpers shared by the JSON encodings of spaces, sets, functions,
//! symbols and norm descriptions.
//!
//! Extended reals are written as plain JSON numbers when finite and as the
//! strings `"inf"` / `"-inf"` otherwise, since JSON has no infinity literal.

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use std::fmt;

/// An `f64` that may be `±inf` on the wire.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ExtReal(pub f64);

impl From<f64> for ExtReal {
    fn from(v: f64) -> Self {
        ExtReal(v)
    }
}

impl From<ExtReal> for f64 {
    fn from(v: ExtReal) -> Self {
        v.0
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v = self.0;
        if v.is_nan() {
            s.serialize_str("nan")
        } else if v == f64::INFINITY {
            s.serialize_str("inf")
        } else if v == f64::NEG_INFINITY {
            s.serialize_str("-inf")
        } else {
            s.serialize_f64(v)
        }
    }
}

struct ExtRealVisitor;

impl<'de> Visitor<'de> for ExtRealVisitor {
    type Value = ExtReal;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a number or one of \"inf\", \"-inf\"")
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<ExtReal, E> {
        Ok(ExtReal(v))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExtReal, E> {
        Ok(ExtReal(v as f64))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExtReal, E> {
        Ok(ExtReal(v as f64))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<ExtReal, E> {
        match v {
            "inf" | "+inf" | "infinity" | "+infinity" => Ok(ExtReal(f64::INFINITY)),
            "-inf" | "-infinity" => Ok(ExtReal(f64::NEG_INFINITY)),
            other => Err(E::invalid_value(de::Unexpected::Str(other), &self)),
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(ExtRealVisitor)
    }
}

/// `#[serde(with = "ext_real")]` adapter for plain `f64` fields.
pub mod ext_real {
    use super::ExtReal;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        ExtReal(*v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        ExtReal::deserialize(d).map(|e| e.0)
    }
}

/// Same as [`ext_real`] for `Vec<f64>`.
pub mod ext_real_vec {
    use super::ExtReal;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        let wrapped: Vec<ExtReal> = v.iter().copied().map(ExtReal).collect();
        wrapped.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Vec::<ExtReal>::deserialize(d).map(|v| v.into_iter().map(|e| e.0).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinities_use_strings() {
        let out = serde_json::to_string(&vec![ExtReal(1.5), ExtReal(f64::INFINITY)]).unwrap();
        assert_eq!(out, r#"[1.5,"inf"]"#);
        let back: Vec<ExtReal> = serde_json::from_str(r#"[2, "-inf", 0.25]"#).unwrap();
        assert_eq!(back, vec![ExtReal(2.0), ExtReal(f64::NEG_INFINITY), ExtReal(0.25)]);
        assert!(serde_json::from_str::<ExtReal>(r#""huge""#).is_err());
    }
}
