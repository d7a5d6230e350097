//! Values an uncertain variable can take: opaque symbols or exact-rational
//! vectors. The derived order (symbols first, then vectors componentwise) is
//! the canonical order used everywhere ties must break deterministically:
//! witness selection, cell ordering, canonical serialization.

use num::rational::BigRational;
use num::ToPrimitive;

use crate::error::{Error, Result};
use crate::rational::{parse_rational, render_rational};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Symbol(String),
    Reals(Vec<BigRational>),
}

impl Value {
    pub fn symbol(s: impl Into<String>) -> Self {
        Value::Symbol(s.into())
    }

    pub fn scalar(r: BigRational) -> Self {
        Value::Reals(vec![r])
    }

    pub fn int(n: i64) -> Self {
        Value::scalar(BigRational::from_integer(n.into()))
    }

    /// The single coordinate of a length-1 numeric value, if that is what
    /// this is.
    pub fn as_scalar(&self) -> Option<&BigRational> {
        match self {
            Value::Reals(v) if v.len() == 1 => Some(&v[0]),
            _ => None,
        }
    }

    pub fn as_reals(&self) -> Option<&[BigRational]> {
        match self {
            Value::Reals(v) => Some(v),
            Value::Symbol(_) => None,
        }
    }

    /// Two values have the same shape when a variable may take both: both
    /// symbols, or numeric vectors of equal length.
    pub fn same_shape(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Symbol(_), Value::Symbol(_)) => true,
            (Value::Reals(a), Value::Reals(b)) => a.len() == b.len(),
            _ => false,
        }
    }

    pub fn shape_label(&self) -> String {
        match self {
            Value::Symbol(_) => "symbol".to_string(),
            Value::Reals(v) => format!("numeric[{}]", v.len()),
        }
    }

    /// Canonical display form. Scalars drop their brackets so that witnesses
    /// and component labels stay readable.
    pub fn render(&self) -> String {
        match self {
            Value::Symbol(s) => s.clone(),
            Value::Reals(v) if v.len() == 1 => render_rational(&v[0]),
            Value::Reals(v) => {
                let parts: Vec<String> = v.iter().map(render_rational).collect();
                format!("[{}]", parts.join(", "))
            }
        }
    }

    /// Parses the dataset/report JSON encoding: a string is a symbol, a bare
    /// integer is a scalar, an array of integers and "p/q" strings is a
    /// numeric vector. Floats are rejected outright.
    pub fn from_json(v: &serde_json::Value) -> Result<Value> {
        match v {
            serde_json::Value::String(s) => Ok(Value::Symbol(s.clone())),
            serde_json::Value::Number(_) => Ok(Value::Reals(vec![json_rational(v)?])),
            serde_json::Value::Array(items) => {
                if items.is_empty() {
                    return Err(Error::Dataset("numeric value must not be empty".into()));
                }
                items
                    .iter()
                    .map(json_rational)
                    .collect::<Result<Vec<_>>>()
                    .map(Value::Reals)
            }
            other => Err(Error::Dataset(format!(
                "cannot interpret {other} as a value: expected a string, an integer, or an array of rationals"
            ))),
        }
    }

    /// Canonical JSON form, the inverse of `from_json` up to normalization:
    /// numeric values always come back as arrays.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Value::Symbol(s) => serde_json::Value::String(s.clone()),
            Value::Reals(v) => serde_json::Value::Array(v.iter().map(rational_to_json).collect()),
        }
    }
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render())
    }
}

/// One rational inside a numeric vector: bare integer or "p/q" string.
/// Floats get a pointed refusal since silently truncating them would corrupt
/// the exactness guarantees.
fn json_rational(v: &serde_json::Value) -> Result<BigRational> {
    match v {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigRational::from_integer(i.into()))
            } else if let Some(u) = n.as_u64() {
                Ok(BigRational::from_integer(u.into()))
            } else {
                Err(Error::Dataset(format!(
                    "floating point literal {n} is not accepted: write rationals as \"p/q\""
                )))
            }
        }
        serde_json::Value::String(s) => {
            parse_rational(s).map_err(|e| Error::Dataset(e.to_string()))
        }
        other => Err(Error::Dataset(format!(
            "cannot interpret {other} as a rational: expected an integer or \"p/q\""
        ))),
    }
}

/// Integers that fit in an i64 stay JSON numbers; everything else becomes a
/// "p/q" string.
pub fn rational_to_json(r: &BigRational) -> serde_json::Value {
    if num::One::is_one(r.denom()) {
        if let Some(i) = r.numer().to_i64() {
            return serde_json::Value::Number(i.into());
        }
    }
    serde_json::Value::String(render_rational(r))
}

/// Canonical display form of a joint realization.
pub fn render_tuple(vals: &[Value]) -> String {
    let parts: Vec<String> = vals.iter().map(Value::render).collect();
    format!("({})", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_is_numeric_not_textual() {
        assert!(Value::int(9) < Value::int(10));
        assert!(Value::symbol("10") < Value::symbol("9"));
        assert!(
            Value::symbol("z") < Value::int(0),
            "symbols sort before numerics"
        );
    }

    #[test]
    fn json_round_trip_normalizes_scalars() {
        let v = Value::from_json(&serde_json::json!(3)).unwrap();
        assert_eq!(v, Value::int(3));
        assert_eq!(v.to_json(), serde_json::json!([3]));

        let w = Value::from_json(&serde_json::json!(["1/2", -4])).unwrap();
        assert_eq!(w.to_json(), serde_json::json!(["1/2", -4]));
        assert_eq!(w.render(), "[1/2, -4]");
    }

    #[test]
    fn floats_are_rejected() {
        let err = Value::from_json(&serde_json::json!(0.5)).unwrap_err();
        assert!(err.to_string().contains("p/q"), "{err}");
        assert!(Value::from_json(&serde_json::json!([1, 2.5])).is_err());
    }

    #[test]
    fn shape_checks() {
        assert!(Value::int(1).same_shape(&Value::int(7)));
        assert!(!Value::int(1).same_shape(&Value::symbol("a")));
        assert!(!Value::Reals(vec![]).same_shape(&Value::int(1)));
        assert_eq!(Value::int(1).shape_label(), "numeric[1]");
    }
}
