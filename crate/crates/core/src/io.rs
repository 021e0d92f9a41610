//! Matrix input and output formats.
//!
//! JSON: `{"rows": [[...], ...]}` where every entry is either a number
//! (approximate regime) or a `"p/q"` string (exact regime). Inline: rows
//! separated by `;` and entries by `,`, optionally wrapped as `[[a,b],[c,d]]`.

use serde_json::{json, Value};

use crate::error::{Result, ScalingError};
use crate::exact::{parse_rational, Rational};
use crate::matrix::PositiveMatrix;
use crate::scalar::Scalar;

/// A matrix in whichever regime its input selected.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyMatrix {
    Approx(PositiveMatrix<f64>),
    Exact(PositiveMatrix<Rational>),
}

impl AnyMatrix {
    pub fn rows(&self) -> usize {
        match self {
            AnyMatrix::Approx(m) => m.rows(),
            AnyMatrix::Exact(m) => m.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            AnyMatrix::Approx(m) => m.cols(),
            AnyMatrix::Exact(m) => m.cols(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnyMatrix::Approx(m) => matrix_to_json(m),
            AnyMatrix::Exact(m) => matrix_to_json(m),
        }
    }
}

/// JSON encoding of a single entry.
pub trait JsonEntry: Scalar {
    fn to_json(&self) -> Value;
}

impl JsonEntry for f64 {
    fn to_json(&self) -> Value {
        json!(self)
    }
}

impl JsonEntry for Rational {
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }
}

pub fn matrix_to_json<S: JsonEntry>(m: &PositiveMatrix<S>) -> Value {
    let rows: Vec<Value> = m
        .to_rows()
        .iter()
        .map(|r| Value::Array(r.iter().map(JsonEntry::to_json).collect()))
        .collect();
    json!({ "rows": rows })
}

pub fn vector_to_json<S: JsonEntry>(v: &[S]) -> Value {
    Value::Array(v.iter().map(JsonEntry::to_json).collect())
}

/// Parses the matrix JSON schema. With `force_exact`, numeric entries are
/// converted to rationals by exact decimal expansion of their literal.
pub fn parse_matrix_json(text: &str, force_exact: bool) -> Result<AnyMatrix> {
    let value: Value = serde_json::from_str(text).map_err(|e| ScalingError::Parse {
        text: truncate(text),
        reason: e.to_string(),
    })?;
    matrix_from_json(&value, force_exact)
}

pub fn matrix_from_json(value: &Value, force_exact: bool) -> Result<AnyMatrix> {
    let bad = |reason: &str| ScalingError::Parse {
        text: truncate(&value.to_string()),
        reason: reason.to_string(),
    };
    let rows = value
        .get("rows")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("expected an object with a \"rows\" array"))?;
    let mut tokens = Vec::with_capacity(rows.len());
    let (mut numbers, mut strings) = (0usize, 0usize);
    for row in rows {
        let row = row.as_array().ok_or_else(|| bad("each row must be an array"))?;
        let mut out = Vec::with_capacity(row.len());
        for entry in row {
            match entry {
                Value::Number(n) => {
                    numbers += 1;
                    out.push(n.to_string());
                }
                Value::String(s) => {
                    strings += 1;
                    out.push(s.clone());
                }
                _ => return Err(bad("entries must be numbers or \"p/q\" strings")),
            }
        }
        tokens.push(out);
    }
    if numbers > 0 && strings > 0 {
        return Err(ScalingError::MixedEntries);
    }
    build(tokens, force_exact || strings > 0)
}

/// Parses `a,b;c,d` or `[[a,b],[c,d]]`.
pub fn parse_inline(text: &str, exact: bool) -> Result<AnyMatrix> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let body = match compact.strip_prefix("[[").and_then(|s| s.strip_suffix("]]")) {
        Some(inner) => inner.replace("],[", ";"),
        None => compact,
    };
    if body.contains(['[', ']']) {
        return Err(ScalingError::Parse {
            text: text.to_string(),
            reason: "unbalanced brackets".to_string(),
        });
    }
    let tokens = body
        .split(';')
        .filter(|r| !r.is_empty())
        .map(|r| r.split(',').map(str::to_string).collect())
        .collect();
    build(tokens, exact)
}

fn build(tokens: Vec<Vec<String>>, exact: bool) -> Result<AnyMatrix> {
    if exact {
        let rows = tokens
            .iter()
            .map(|r| r.iter().map(|t| parse_rational(t)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(AnyMatrix::Exact(PositiveMatrix::new(rows)?))
    } else {
        let rows = tokens
            .iter()
            .map(|r| r.iter().map(|t| parse_f64(t)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(AnyMatrix::Approx(PositiveMatrix::new(rows)?))
    }
}

/// Parses a double; `p/q` tokens are evaluated exactly then rounded once.
pub fn parse_f64(token: &str) -> Result<f64> {
    let t = token.trim();
    if t.contains('/') {
        return Ok(crate::scalar::Scalar::to_f64(&parse_rational(t)?));
    }
    t.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| ScalingError::Parse {
            text: token.to_string(),
            reason: "not a finite number".to_string(),
        })
}

/// Parses a comma-separated vector (margin targets).
pub fn parse_vector_exact(text: &str) -> Result<Vec<Rational>> {
    text.split(',').map(parse_rational).collect()
}

pub fn parse_vector_f64(text: &str) -> Result<Vec<f64>> {
    text.split(',').map(parse_f64).collect()
}

fn truncate(s: &str) -> String {
    s.chars().take(60).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use proptest::prelude::*;

    #[test]
    fn inline_forms_agree() {
        let a = parse_inline("1,2;3,4", true).unwrap();
        let b = parse_inline("[[1, 2], [3, 4]]", true).unwrap();
        assert_eq!(a, b);
        let AnyMatrix::Exact(m) = parse_inline("[[1/2,0.25],[3,4]]", true).unwrap() else {
            panic!("expected exact");
        };
        assert_eq!(m.get(0, 1), &ratio(1, 4));
        let AnyMatrix::Approx(m) = parse_inline("1/4, 2; 3, 4", false).unwrap() else {
            panic!("expected approx");
        };
        assert_eq!(*m.get(0, 0), 0.25);
    }

    #[test]
    fn inline_errors() {
        assert_eq!(
            parse_inline("[[1,2],[0,4]]", false).unwrap_err().to_string(),
            "entry (2,1) is not positive"
        );
        assert!(parse_inline("1,2;3", true).is_err());
        assert!(parse_inline("[[1,2],[3,4]", true).is_err());
        assert!(parse_inline("1,x;3,4", false).is_err());
    }

    #[test]
    fn json_schema() {
        let m = parse_matrix_json(r#"{"rows": [[1, 2.5], [3, 4]]}"#, false).unwrap();
        assert!(matches!(m, AnyMatrix::Approx(_)));
        let m = parse_matrix_json(r#"{"rows": [["1/4", "3/7"], ["3/4", "4/7"]]}"#, false).unwrap();
        assert!(matches!(m, AnyMatrix::Exact(_)));
        let m = parse_matrix_json(r#"{"rows": [[0.1, 2], [3, 4]]}"#, true).unwrap();
        let AnyMatrix::Exact(m) = m else { panic!() };
        assert_eq!(m.get(0, 0), &ratio(1, 10));
        assert_eq!(
            parse_matrix_json(r#"{"rows": [["1/4", 2], [3, 4]]}"#, false).unwrap_err(),
            ScalingError::MixedEntries
        );
        // The literal is kept, so exact conversion is not limited to double precision.
        let m = parse_matrix_json(r#"{"rows": [[0.10000000000000000001, 2], [3, 4]]}"#, true).unwrap();
        let AnyMatrix::Exact(m) = m else { panic!() };
        assert_eq!(
            m.get(0, 0),
            &crate::exact::parse_rational("10000000000000000001/100000000000000000000").unwrap()
        );
        assert!(parse_matrix_json(r#"{"cols": []}"#, false).is_err());
        assert!(parse_matrix_json(r#"{"rows": [[true]]}"#, false).is_err());
    }

    proptest! {
        #[test]
        fn json_roundtrip_approx(data in proptest::collection::vec(1e-300f64..1e300, 6)) {
            let m = AnyMatrix::Approx(PositiveMatrix::from_row_major(2, 3, data).unwrap());
            let text = m.to_json().to_string();
            let back = parse_matrix_json(&text, false).unwrap();
            match (&m, &back) {
                (AnyMatrix::Approx(a), AnyMatrix::Approx(b)) => {
                    for (x, y) in a.entries().iter().zip(b.entries()) {
                        prop_assert_eq!(x.to_bits(), y.to_bits());
                    }
                }
                _ => prop_assert!(false, "regime changed"),
            }
        }

        #[test]
        fn json_roundtrip_exact(data in proptest::collection::vec((1i64..10_000, 1i64..10_000), 4)) {
            let entries = data.into_iter().map(|(p, q)| ratio(p, q)).collect();
            let m = AnyMatrix::Exact(PositiveMatrix::from_row_major(2, 2, entries).unwrap());
            let back = parse_matrix_json(&m.to_json().to_string(), false).unwrap();
            prop_assert_eq!(back, m);
        }
    }
}
