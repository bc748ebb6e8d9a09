//! JSON wire formats and deterministic number printing.
//!
//! Operators serialize as `{ "n": int, "entries": [[a,b,c,d], ...] }`
//! (row-major); complex matrices as `{ "m": int, "entries": [[re,im], ...] }`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;

use crate::error::QError;
use crate::qspace::{QOperator, QVector};
use crate::quaternion::Quaternion;
use crate::slice::CMatrix;

#[derive(Serialize, Deserialize)]
struct QOperatorWire {
    n: usize,
    entries: Vec<[f64; 4]>,
}

impl Serialize for QOperator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        QOperatorWire {
            n: self.n,
            entries: self.entries.iter().map(|&q| q.into()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let wire = QOperatorWire::deserialize(d)?;
        QOperator::new(wire.n, wire.entries.into_iter().map(Quaternion::from).collect())
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct CMatrixWire {
    m: usize,
    entries: Vec<[f64; 2]>,
}

impl Serialize for CMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CMatrixWire {
            m: self.m,
            entries: self.entries.iter().map(|e| [e.re, e.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let wire = CMatrixWire::deserialize(d)?;
        CMatrix::new(
            wire.m,
            wire.entries.iter().map(|e| Complex64::new(e[0], e[1])).collect(),
        )
        .map_err(serde::de::Error::custom)
    }
}

/// Parse an operator from the JSON wire format.
pub fn operator_from_json(text: &str) -> Result<QOperator, QError> {
    serde_json::from_str(text).map_err(|e| QError::Domain(format!("operator JSON: {e}")))
}

/// Parse a vector from a JSON array of quaternion 4-arrays.
pub fn vector_from_json(text: &str) -> Result<QVector, QError> {
    serde_json::from_str(text).map_err(|e| QError::Domain(format!("vector JSON: {e}")))
}

/// JSON formatter printing every float with 17 significant digits, so equal
/// configs produce byte-identical output.
struct SigDigitFormatter;

impl Formatter for SigDigitFormatter {
    fn write_f64<W: ?Sized + std::io::Write>(&mut self, w: &mut W, value: f64) -> std::io::Result<()> {
        if value == value.trunc() && value.abs() < 1e15 {
            // keep integral values readable and round-trippable
            write!(w, "{value:.1}")
        } else {
            write!(w, "{value:.16e}")
        }
    }

    fn write_f32<W: ?Sized + std::io::Write>(&mut self, w: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(w, value as f64)
    }
}

/// Serialize any value to deterministic JSON (17 significant digits).
pub fn to_json_deterministic<T: Serialize>(value: &T) -> Result<String, QError> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigDigitFormatter);
    value
        .serialize(&mut ser)
        .map_err(|e| QError::Internal(format!("serialize: {e}")))?;
    String::from_utf8(buf).map_err(|e| QError::Internal(format!("utf8: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operator_roundtrip() {
        let t = QOperator::new(
            2,
            vec![
                Quaternion::new(1.0, 0.0, 0.0, 0.0),
                Quaternion::new(0.0, 0.5, -0.25, 0.0),
                Quaternion::ZERO,
                Quaternion::new(0.0, 0.0, 0.0, 2.0),
            ],
        )
        .unwrap();
        let text = serde_json::to_string(&t).unwrap();
        let back: QOperator = serde_json::from_str(&text).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn operator_rejects_bad_shape() {
        let text = r#"{"n": 2, "entries": [[1,0,0,0]]}"#;
        assert!(operator_from_json(text).is_err());
    }

    #[test]
    fn cmatrix_roundtrip() {
        let m = CMatrix::new(
            2,
            vec![
                Complex64::new(1.0, 2.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(0.5, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        let text = serde_json::to_string(&m).unwrap();
        let back: CMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn deterministic_output_roundtrips() {
        let vals = vec![1.0f64, 0.1, -2.5e-13, 1.0 / 3.0, 12345.0];
        let text = to_json_deterministic(&vals).unwrap();
        let back: Vec<f64> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, vals);
        assert_eq!(text, to_json_deterministic(&vals).unwrap());
    }
}
