//! Shared helpers for the JSON fixture forms.
//!
//! Extended reals are written as plain JSON numbers when finite and as the
//! strings `"inf"` / `"-inf"` otherwise.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Repr {
    Num(f64),
    Str(String),
}

fn to_repr(v: f64) -> Repr {
    if v == f64::INFINITY {
        Repr::Str("inf".into())
    } else if v == f64::NEG_INFINITY {
        Repr::Str("-inf".into())
    } else {
        Repr::Num(v)
    }
}

fn from_repr(r: Repr) -> Result<f64, String> {
    match r {
        Repr::Num(v) => Ok(v),
        Repr::Str(s) => match s.as_str() {
            "inf" | "+inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            other => Err(format!("not an extended real: {other:?}")),
        },
    }
}

pub(crate) mod ext_real_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| to_repr(*x)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Vec::<Repr>::deserialize(d)?
            .into_iter()
            .map(|r| from_repr(r).map_err(D::Error::custom))
            .collect()
    }
}
