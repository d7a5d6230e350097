//! Dataset files: loading, validation, canonical serialization.
//!
//! Two shapes are accepted. The full form lists worlds and one total
//! assignment per variable:
//!
//! ```json
//! {
//!   "worlds": ["w1", "w2"],
//!   "variables": { "X": { "w1": 1, "w2": [1, "1/2"] } }
//! }
//! ```
//!
//! The joint-range form lists only the realized tuples of some variables and
//! gets canonicalized into one world per distinct tuple:
//!
//! ```json
//! { "joint_range": { "variables": ["X1", "X2"], "tuples": [["a", 0], ["b", 1]] } }
//! ```
//!
//! Strings are symbols, bare integers are scalars, rationals are written
//! "p/q". Floats are rejected so that exactness cannot be silently lost.

use std::collections::BTreeSet;

use serde_json::Value as Json;

use crate::error::{Error, Result};
use crate::space::SampleSpace;
use crate::value::Value;

/// Inner diagnostics get re-wrapped with their location; dropping the
/// variant prefix avoids "dataset error: dataset error: ..." chains.
fn bare_message(e: Error) -> String {
    match e {
        Error::Dataset(m) => m,
        other => other.to_string(),
    }
}

pub fn parse_dataset(text: &str) -> Result<SampleSpace> {
    let doc: Json = serde_json::from_str(text).map_err(|e| {
        Error::Dataset(format!(
            "invalid JSON at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })?;
    let obj = doc
        .as_object()
        .ok_or_else(|| Error::Dataset("top level must be a JSON object".into()))?;
    if obj.contains_key("joint_range") {
        return parse_joint_range(&obj["joint_range"]);
    }
    let worlds_json = obj
        .get("worlds")
        .ok_or_else(|| Error::Dataset("missing field `worlds` (or `joint_range`)".into()))?;
    let worlds: Vec<String> = worlds_json
        .as_array()
        .ok_or_else(|| Error::Dataset("field `worlds` must be an array of strings".into()))?
        .iter()
        .map(|w| {
            w.as_str()
                .map(str::to_string)
                .ok_or_else(|| Error::Dataset(format!("world identifier {w} is not a string")))
        })
        .collect::<Result<_>>()?;
    let mut space = SampleSpace::new(worlds)?;

    let variables = obj
        .get("variables")
        .ok_or_else(|| Error::Dataset("missing field `variables`".into()))?
        .as_object()
        .ok_or_else(|| Error::Dataset("field `variables` must be an object".into()))?;
    for (name, assignment) in variables {
        let map = assignment.as_object().ok_or_else(|| {
            Error::Dataset(format!(
                "variable `{name}` must map world identifiers to values"
            ))
        })?;
        let mut column = Vec::with_capacity(space.world_count());
        for world in space.worlds().to_vec() {
            let v = map.get(&world).ok_or_else(|| {
                Error::Dataset(format!(
                    "variable `{name}`: missing value for world `{world}`"
                ))
            })?;
            column.push(Value::from_json(v).map_err(|e| {
                Error::Dataset(format!(
                    "variable `{name}`, world `{world}`: {}",
                    bare_message(e)
                ))
            })?);
        }
        if let Some(extra) = map.keys().find(|k| !space.worlds().contains(k)) {
            return Err(Error::Dataset(format!(
                "variable `{name}` assigns a value to unknown world `{extra}`"
            )));
        }
        space = space.with_variable(name, column)?;
    }
    if space.variable_names().next().is_none() {
        return Err(Error::Dataset("dataset declares no variables".into()));
    }
    Ok(space)
}

fn parse_joint_range(doc: &Json) -> Result<SampleSpace> {
    let obj = doc
        .as_object()
        .ok_or_else(|| Error::Dataset("`joint_range` must be an object".into()))?;
    let names: Vec<String> = obj
        .get("variables")
        .and_then(Json::as_array)
        .ok_or_else(|| Error::Dataset("`joint_range.variables` must be an array of names".into()))?
        .iter()
        .map(|n| {
            n.as_str()
                .map(str::to_string)
                .ok_or_else(|| Error::Dataset(format!("variable name {n} is not a string")))
        })
        .collect::<Result<_>>()?;
    if names.is_empty() {
        return Err(Error::Dataset(
            "`joint_range.variables` must not be empty".into(),
        ));
    }
    let tuples_json = obj
        .get("tuples")
        .and_then(Json::as_array)
        .ok_or_else(|| Error::Dataset("`joint_range.tuples` must be an array of tuples".into()))?;
    if tuples_json.is_empty() {
        return Err(Error::Dataset(
            "`joint_range.tuples` must not be empty".into(),
        ));
    }
    // One world per distinct tuple, in first-occurrence order.
    let mut seen: BTreeSet<Vec<Value>> = BTreeSet::new();
    let mut tuples: Vec<Vec<Value>> = Vec::new();
    for (i, t) in tuples_json.iter().enumerate() {
        let row = t
            .as_array()
            .ok_or_else(|| Error::Dataset(format!("tuple #{} is not an array", i + 1)))?;
        if row.len() != names.len() {
            return Err(Error::Dataset(format!(
                "tuple #{} has {} entries for {} variables",
                i + 1,
                row.len(),
                names.len()
            )));
        }
        let tuple = row
            .iter()
            .map(Value::from_json)
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::Dataset(format!("tuple #{}: {}", i + 1, bare_message(e))))?;
        if seen.insert(tuple.clone()) {
            tuples.push(tuple);
        }
    }
    let worlds: Vec<String> = (1..=tuples.len()).map(|i| format!("t{i}")).collect();
    let mut space = SampleSpace::new(worlds)?;
    for (j, name) in names.iter().enumerate() {
        let column: Vec<Value> = tuples.iter().map(|t| t[j].clone()).collect();
        space = space.with_variable(name, column)?;
    }
    Ok(space)
}

/// Canonical serialization: full form, variable names sorted, worlds in
/// declared order, numeric values as arrays. `parse(serialize(s)) == s` and
/// serializing twice yields identical bytes.
pub fn serialize_dataset(space: &SampleSpace) -> String {
    let mut variables = serde_json::Map::new();
    for name in space.variable_names() {
        let mut assignment = serde_json::Map::new();
        let column = space.values(name).expect("name from iterator");
        for (w, world) in space.worlds().iter().enumerate() {
            assignment.insert(world.clone(), column[w].to_json());
        }
        variables.insert(name.to_string(), Json::Object(assignment));
    }
    let doc = serde_json::json!({
        "worlds": space.worlds(),
        "variables": variables,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("serializable");
    text.push('\n');
    text
}
