//! Resolution of the `--query` argument against a loaded dataset.
//!
//! Accepted forms:
//! - a built-in: `sum`, `mean`, `max`, or `weighted:w1,w2,...`
//! - a tabulated function, inline (`{"entries": [[[inputs...], output], ...]}`)
//!   or from a file (`@table.json`)
//! - the name of a variable already in the dataset, which must be determined
//!   by the party inputs

use std::collections::BTreeMap;
use std::fs;

use nspfe_core::query::{Builtin, QueryFunction};
use nspfe_core::rational::parse_rational;
use nspfe_core::value::render_tuple;
use nspfe_core::{Error, Result, SampleSpace, Value};
use num::bigint::BigInt;
use num::rational::BigRational;

/// Command-line numbers: everything `parse_rational` takes, plus plain
/// decimal notation like `0.1`, which converts exactly to `1/10`. Dataset
/// values stay strict; this leniency is only for flags.
pub fn parse_cli_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    if let Some((int_part, frac_part)) = t.split_once('.') {
        let (sign, int_digits) = match int_part.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, int_part.strip_prefix('+').unwrap_or(int_part)),
        };
        let all_digits = |p: &str| !p.is_empty() && p.bytes().all(|c| c.is_ascii_digit());
        if all_digits(frac_part) && (int_digits.is_empty() || all_digits(int_digits)) {
            let numer: BigInt = format!("{int_digits}{frac_part}")
                .parse()
                .expect("digit strings parse");
            let denom = BigInt::from(10).pow(frac_part.len() as u32);
            return Ok(BigRational::new(BigInt::from(sign) * numer, denom));
        }
    }
    parse_rational(t)
}

pub fn parse_query(spec: &str, space: &SampleSpace, parties: &[String]) -> Result<QueryFunction> {
    let inputs = parties.to_vec();
    match spec {
        "sum" => QueryFunction::builtin(Builtin::Sum, inputs),
        "mean" => QueryFunction::builtin(Builtin::Mean, inputs),
        "max" => QueryFunction::builtin(Builtin::Max, inputs),
        _ if spec.starts_with("weighted:") => {
            let weights = spec["weighted:".len()..]
                .split(',')
                .map(parse_cli_rational)
                .collect::<Result<Vec<_>>>()?;
            QueryFunction::builtin(Builtin::Weighted(weights), inputs)
        }
        _ if spec.starts_with('@') || spec.starts_with('{') => {
            let text = match spec.strip_prefix('@') {
                Some(path) => fs::read_to_string(path).map_err(|e| {
                    Error::InvalidArgument(format!("cannot read query file `{path}`: {e}"))
                })?,
                None => spec.to_string(),
            };
            tabulated_from_json(&text, inputs)
        }
        name => QueryFunction::from_variable(space, name, inputs),
    }
}

/// True for a built-in query name, whose Lipschitz constant is derived
/// rather than declared.
pub fn is_builtin(spec: &str) -> bool {
    matches!(spec, "sum" | "mean" | "max") || spec.starts_with("weighted:")
}

fn tabulated_from_json(text: &str, inputs: Vec<String>) -> Result<QueryFunction> {
    let parsed: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| Error::InvalidArgument(format!("query table is not valid JSON: {e}")))?;
    let entries = parsed
        .get("entries")
        .and_then(|e| e.as_array())
        .ok_or_else(|| {
            Error::InvalidArgument("query table must be an object with an `entries` array".into())
        })?;
    let mut table = BTreeMap::new();
    for entry in entries {
        let pair = entry.as_array().filter(|p| p.len() == 2).ok_or_else(|| {
            Error::InvalidArgument(
                "each query table entry must be a two-element array [[inputs...], output]".into(),
            )
        })?;
        let tuple = pair[0].as_array().ok_or_else(|| {
            Error::InvalidArgument("query table inputs must be an array of values".into())
        })?;
        let key: Vec<Value> = tuple.iter().map(Value::from_json).collect::<Result<_>>()?;
        let output = Value::from_json(&pair[1])?;
        if table.insert(key.clone(), output).is_some() {
            return Err(Error::InvalidArgument(format!(
                "query table repeats the input {}",
                render_tuple(&key)
            )));
        }
    }
    QueryFunction::tabulated(inputs, table)
}
