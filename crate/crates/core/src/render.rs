//! Formatting and (de)serialization helpers shared by reports, CSV
//! artifacts, and configuration files.
//!
//! Positive infinity is written as the string `"inf"` so that integrability
//! indices like `rho = inf` survive JSON and CSV round trips; finite values
//! are written with 17 significant digits, enough to reproduce the exact
//! binary double on re-parse.

use serde::{Deserialize, Deserializer, Serializer};

/// 17-significant-digit decimal form of a finite double; `"inf"`/`"-inf"`
/// for infinities. Round-trips bit-exactly through `parse::<f64>()`.
pub fn sig17(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".to_string()
    } else if x == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{x:.16e}")
    }
}

/// Compact human-facing form: `"inf"` for infinities, integers without a
/// decimal point, everything else in shortest round-trip form.
pub fn sig_short(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".to_string()
    } else if x == f64::NEG_INFINITY {
        "-inf".to_string()
    } else if x == x.trunc() && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

/// Parse a value written by [`sig17`] or a plain numeric literal.
pub fn parse_ext(s: &str) -> Option<f64> {
    match s.trim() {
        "inf" | "Inf" | "infinity" => Some(f64::INFINITY),
        "-inf" | "-Inf" | "-infinity" => Some(f64::NEG_INFINITY),
        other => other.parse::<f64>().ok(),
    }
}

/// Serde adapter for `f64` fields that may be infinite: numbers pass
/// through, infinities become the string `"inf"`. Use as
/// `#[serde(with = "crate::render::ext_real")]`.
pub mod ext_real {
    use super::*;

    pub fn serialize<S: Serializer>(x: &f64, ser: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            ser.serialize_f64(*x)
        } else {
            ser.serialize_str(&sig17(*x))
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(de)? {
            Raw::Num(x) => Ok(x),
            Raw::Str(s) => {
                parse_ext(&s).ok_or_else(|| serde::de::Error::custom(format!("bad number: {s:?}")))
            }
        }
    }
}

/// As [`ext_real`] but for `Vec<f64>`.
pub mod ext_real_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(xs: &[f64], ser: S) -> Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(xs.len()))?;
        for x in xs {
            if x.is_finite() {
                seq.serialize_element(x)?;
            } else {
                seq.serialize_element(&sig17(*x))?;
            }
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<f64>, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        let raw = Vec::<Raw>::deserialize(de)?;
        raw.into_iter()
            .map(|r| match r {
                Raw::Num(x) => Ok(x),
                Raw::Str(s) => parse_ext(&s)
                    .ok_or_else(|| serde::de::Error::custom(format!("bad number: {s:?}"))),
            })
            .collect()
    }
}
