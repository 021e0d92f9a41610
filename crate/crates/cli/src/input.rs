use std::io::Read;

use anyhow::{bail, Context, Result};
use serde_json::Value;
use sinkhorn_core::io::{matrix_from_json, parse_inline};
use sinkhorn_core::AnyMatrix;

use crate::args::MatrixInput;

pub struct Loaded {
    pub matrix: AnyMatrix,
    /// Some entry was written as a decimal or with an exponent.
    pub decimals: bool,
}

fn has_decimal_syntax(token: &str) -> bool {
    token.contains(['.', 'e', 'E'])
}

fn json_has_decimals(value: &Value) -> bool {
    match value {
        Value::Number(n) => has_decimal_syntax(&n.to_string()),
        Value::String(s) => has_decimal_syntax(s),
        Value::Array(items) => items.iter().any(json_has_decimals),
        Value::Object(map) => map.values().any(json_has_decimals),
        _ => false,
    }
}

/// Reads the matrix from the inline argument or the JSON file. `exact`
/// forces rationals; JSON `"p/q"` strings select them regardless.
pub fn load(input: &MatrixInput, exact: bool) -> Result<Loaded> {
    if let Some(text) = &input.matrix {
        let matrix = parse_inline(text, exact)?;
        return Ok(Loaded {
            matrix,
            decimals: has_decimal_syntax(text),
        });
    }
    let Some(path) = &input.input else {
        bail!("no matrix given: pass it inline (e.g. 1,3;3,4) or with --input FILE");
    };
    let text = if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .context("reading standard input")?;
        buf
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    let value: Value =
        serde_json::from_str(&text).with_context(|| format!("{} is not valid JSON", path.display()))?;
    let matrix = matrix_from_json(&value, exact)?;
    Ok(Loaded {
        matrix,
        decimals: json_has_decimals(&value),
    })
}

/// Fails when a matrix was supplied to a command form that takes none.
pub fn reject(input: &MatrixInput, why: &str) -> Result<()> {
    if input.matrix.is_some() || input.input.is_some() {
        bail!("{why}");
    }
    Ok(())
}
