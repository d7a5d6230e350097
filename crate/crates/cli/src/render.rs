//! JSON and CSV shapes for every report the tool emits.
//!
//! All maps go through serde_json's sorted map type and all floats are
//! pre-rendered to fixed six-decimal strings, so identical inputs and
//! parameters produce byte-identical reports regardless of platform math
//! library quirks.

use num::rational::BigRational;
use serde_json::{json, Value as Json};

use nspfe_core::common::CommonVariable;
use nspfe_core::measures::{LogValue, MeasureResult};
use nspfe_core::partitions::PartitionFamily;
use nspfe_core::privacy::{ApproximationResult, PrivacyVerdict};
use nspfe_core::quantizer::{FrontierRow, Mechanism};
use nspfe_core::rational::render_rational;
use nspfe_core::value::rational_to_json;
use nspfe_core::{RangeSet, SampleSpace, Value};

pub fn approx6(x: f64) -> String {
    format!("{x:.6}")
}

pub fn rational(r: &BigRational) -> Json {
    rational_to_json(r)
}

pub fn log_value(v: &LogValue) -> Json {
    json!({
        "ratio": rational(v.ratio()),
        "base": v.base().label(),
        "approx": approx6(v.to_f64()),
    })
}

pub fn measure(m: &MeasureResult) -> Json {
    json!({
        "value": log_value(&m.value),
        "witness": m.witness.iter().map(Value::to_json).collect::<Vec<_>>(),
    })
}

pub fn range_set(r: &RangeSet) -> Json {
    if r.arity() == 1 {
        Json::Array(r.values().map(Value::to_json).collect())
    } else {
        Json::Array(
            r.tuples()
                .map(|t| Json::Array(t.iter().map(Value::to_json).collect()))
                .collect(),
        )
    }
}

pub fn partition_family(f: &PartitionFamily) -> Json {
    let mut out = json!({
        "kind": f.kind.label(),
        "cell_count": f.cell_count(),
        "cells": f.cells.iter().map(range_set).collect::<Vec<_>>(),
        "covered": range_set(&f.covered),
    });
    let map = out.as_object_mut().expect("object literal");
    if let Some(d) = &f.delta {
        map.insert("delta".into(), rational(d));
    }
    if let Some(c) = &f.clauses {
        map.insert(
            "clauses".into(),
            json!({
                "cell_contains_conditional_range": c.cell_contains_conditional_range,
                "singly_connected_share_cell": c.singly_connected_share_cell,
                "overlap_bounded": c.overlap_bounded,
                "cells_disjoint": c.cells_disjoint,
                "all_hold": c.all_hold(),
            }),
        );
    }
    out
}

pub fn verdict(v: &PrivacyVerdict) -> Json {
    json!({
        "gamma": rational(&v.gamma),
        "base": v.base.label(),
        "pass": v.pass,
        "per_party": v.per_party.iter()
            .map(|p| json!({"party": p.party, "leakage": measure(&p.measure)}))
            .collect::<Vec<_>>(),
        "worst_party": v.worst().party,
    })
}

pub fn common(space: &SampleSpace, c: &CommonVariable, entropy: &LogValue) -> Json {
    json!({
        "component_count": c.component_count(),
        "components": c.components,
        "values_by_world": space.worlds().iter().zip(c.world_values())
            .map(|(w, v)| json!({"world": w, "value": v.to_json()}))
            .collect::<Vec<_>>(),
        "entropy": log_value(entropy),
    })
}

pub fn approximation(r: &ApproximationResult) -> Json {
    let cells: Vec<Json> = r
        .cells
        .iter()
        .map(|c| {
            let mut cell = json!({
                "members": range_set(&c.cell),
                "center": c.center.iter().map(rational_to_json).collect::<Vec<_>>(),
                "radius_squared": rational(&c.radius_sq),
                "radius_approx": approx6(c.radius_f64()),
            });
            if let Some(exact) = &c.radius_exact {
                cell.as_object_mut()
                    .expect("object literal")
                    .insert("radius_exact".into(), rational(exact));
            }
            cell
        })
        .collect();
    let mut out = json!({
        "output_dim": r.output_dim,
        "norm": r.norm.label(),
        "cells": cells,
        "table": table_rows(r.table.iter()),
        "worst_error_squared": rational(&r.worst_error_sq),
        "worst_error_approx": approx6(r.worst_error_f64()),
        "verdict": verdict(&r.verdict),
    });
    if let Some(exact) = &r.worst_error_exact {
        out.as_object_mut()
            .expect("object literal")
            .insert("worst_error_exact".into(), rational(exact));
    }
    out
}

fn table_rows<'a>(rows: impl Iterator<Item = (&'a Vec<Value>, &'a Value)>) -> Json {
    Json::Array(
        rows.map(|(inputs, output)| {
            json!({
                "inputs": inputs.iter().map(Value::to_json).collect::<Vec<_>>(),
                "output": output.to_json(),
            })
        })
        .collect(),
    )
}

pub fn mechanism(m: &Mechanism) -> Json {
    let c = &m.certificate;
    let (x_min, x_max) = m.quantizer.bounds();
    let mut cert = json!({
        "gamma": rational(&c.gamma),
        "level_mode": c.level_mode.label(),
        "base": c.base.label(),
        "levels": c.levels,
        "output_bounds": [rational(&c.output_bounds.0), rational(&c.output_bounds.1)],
        "measured_error": rational(&c.measured_error),
        "measured_error_approx": approx6(nspfe_core::rational::big_to_f64(&c.measured_error)),
        "per_party": c.per_party.iter()
            .map(|p| json!({"party": p.party, "leakage": measure(&p.measure)}))
            .collect::<Vec<_>>(),
        "max_leakage": log_value(c.max_leakage()),
        "within_budget": c.within_budget,
    });
    let cert_map = cert.as_object_mut().expect("object literal");
    if let Some(l) = &c.lipschitz {
        cert_map.insert("lipschitz".into(), rational(l));
    }
    if let Some((lo, hi)) = &c.input_bounds {
        cert_map.insert("input_bounds".into(), json!([rational(lo), rational(hi)]));
    }
    if let Some(beta) = &c.beta_bound {
        cert_map.insert("beta_bound".into(), rational(beta));
        cert_map.insert(
            "beta_bound_approx".into(),
            Json::String(approx6(nspfe_core::rational::big_to_f64(beta))),
        );
    }
    json!({
        "quantizer": {
            "q": m.quantizer.levels(),
            "x_min": rational(x_min),
            "x_max": rational(x_max),
            "midpoint": m.quantizer.is_midpoint(),
        },
        "table": table_rows(m.table.iter()),
        "certificate": cert,
    })
}

pub fn frontier(rows: &[FrontierRow]) -> Json {
    Json::Array(
        rows.iter()
            .map(|row| match &row.outcome {
                Ok(e) => {
                    let mut out = json!({
                        "gamma": rational(&row.gamma),
                        "levels": e.levels,
                        "measured_error": rational(&e.measured_error),
                        "max_leakage": log_value(&e.max_leakage),
                    });
                    let map = out.as_object_mut().expect("object literal");
                    if let Some(beta) = &e.beta_bound {
                        map.insert("beta_bound".into(), rational(beta));
                    }
                    if let Some(holds) = e.tradeoff_holds {
                        map.insert("tradeoff_holds".into(), Json::Bool(holds));
                    }
                    out
                }
                Err(msg) => json!({"gamma": rational(&row.gamma), "error": msg}),
            })
            .collect(),
    )
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// The frontier as CSV, one row per budget; failed rows keep the gamma and
/// carry the message in the error column.
pub fn frontier_csv(rows: &[FrontierRow]) -> String {
    let mut out = String::from(
        "gamma,levels,beta_bound,measured_error,max_leakage_ratio,max_leakage_approx,tradeoff_holds,error\n",
    );
    for row in rows {
        let gamma = render_rational(&row.gamma);
        match &row.outcome {
            Ok(e) => {
                let beta = e
                    .beta_bound
                    .as_ref()
                    .map(render_rational)
                    .unwrap_or_default();
                let tradeoff = e.tradeoff_holds.map(|b| b.to_string()).unwrap_or_default();
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},\n",
                    csv_field(&gamma),
                    e.levels,
                    csv_field(&beta),
                    csv_field(&render_rational(&e.measured_error)),
                    csv_field(&render_rational(e.max_leakage.ratio())),
                    approx6(e.max_leakage.to_f64()),
                    tradeoff,
                ));
            }
            Err(msg) => {
                out.push_str(&format!("{},,,,,,,{}\n", csv_field(&gamma), csv_field(msg)));
            }
        }
    }
    out
}

/// The envelope wrapping every JSON report.
pub fn envelope(command: &str, digest: &str, parameters: Json, result: Json) -> Json {
    json!({
        "command": command,
        "input_digest": digest,
        "parameters": parameters,
        "result": result,
        "tool_version": env!("CARGO_PKG_VERSION"),
    })
}

pub fn to_output_bytes(report: &Json) -> Vec<u8> {
    let mut text = serde_json::to_string_pretty(report).expect("reports are valid JSON");
    text.push('\n');
    text.into_bytes()
}
