//! Queries: functions evaluated over joint realizations of named variables.
//!
//! A query is either a finite lookup table or one of a few numeric built-ins.
//! Built-ins carry their Lipschitz constant with respect to the sup norm on
//! inputs, which the mechanism synthesis needs for its accuracy bound;
//! tabulated queries must declare one explicitly if that bound is wanted.

use std::collections::BTreeMap;

use num::rational::BigRational;
use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::from_usize;
use crate::space::undefined_input;
use crate::value::Value;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Builtin {
    Sum,
    Mean,
    Max,
    /// Fixed inner product: one weight per input, in input order.
    Weighted(Vec<BigRational>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QueryBody {
    Tabulated(BTreeMap<Vec<Value>, Value>),
    Builtin(Builtin),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryFunction {
    inputs: Vec<String>,
    body: QueryBody,
    declared_lipschitz: Option<BigRational>,
}

impl QueryFunction {
    pub fn tabulated(inputs: Vec<String>, table: BTreeMap<Vec<Value>, Value>) -> Result<Self> {
        if inputs.is_empty() {
            return Err(Error::InvalidArgument(
                "a query needs at least one input".into(),
            ));
        }
        if table.is_empty() {
            return Err(Error::InvalidArgument(
                "a tabulated query needs at least one entry".into(),
            ));
        }
        for key in table.keys() {
            if key.len() != inputs.len() {
                return Err(Error::DimensionMismatch(format!(
                    "table key {} does not match the {} declared inputs",
                    crate::value::render_tuple(key),
                    inputs.len()
                )));
            }
        }
        let first = table.values().next().cloned();
        if let Some(first) = first {
            if let Some(bad) = table.values().find(|v| !v.same_shape(&first)) {
                return Err(Error::DimensionMismatch(format!(
                    "table outputs mix {} and {} values",
                    first.shape_label(),
                    bad.shape_label()
                )));
            }
        }
        Ok(QueryFunction {
            inputs,
            body: QueryBody::Tabulated(table),
            declared_lipschitz: None,
        })
    }

    pub fn builtin(kind: Builtin, inputs: Vec<String>) -> Result<Self> {
        if inputs.is_empty() {
            return Err(Error::InvalidArgument(
                "a query needs at least one input".into(),
            ));
        }
        if let Builtin::Weighted(w) = &kind {
            if w.len() != inputs.len() {
                return Err(Error::DimensionMismatch(format!(
                    "{} weights for {} inputs",
                    w.len(),
                    inputs.len()
                )));
            }
        }
        Ok(QueryFunction {
            inputs,
            body: QueryBody::Builtin(kind),
            declared_lipschitz: None,
        })
    }

    /// Views an existing variable as a tabulated function of the given
    /// inputs. Fails when the variable is not determined by them, naming the
    /// offending input tuple.
    pub fn from_variable(
        space: &crate::space::SampleSpace,
        variable: &str,
        inputs: Vec<String>,
    ) -> Result<Self> {
        let out = space.values(variable)?;
        let columns: Vec<&[Value]> = inputs
            .iter()
            .map(|n| space.values(n))
            .collect::<Result<_>>()?;
        let mut table: BTreeMap<Vec<Value>, Value> = BTreeMap::new();
        for w in 0..space.world_count() {
            let key: Vec<Value> = columns.iter().map(|col| col[w].clone()).collect();
            let entry = table.entry(key.clone()).or_insert_with(|| out[w].clone());
            if *entry != out[w] {
                return Err(Error::InvalidArgument(format!(
                    "variable `{variable}` is not a function of ({}): it differs across worlds sharing the input {}",
                    inputs.join(", "),
                    crate::value::render_tuple(&key)
                )));
            }
        }
        QueryFunction::tabulated(inputs, table)
    }

    pub fn with_lipschitz(mut self, l: BigRational) -> Result<Self> {
        if l.is_negative() {
            return Err(Error::InvalidArgument(
                "a Lipschitz constant must be nonnegative".into(),
            ));
        }
        self.declared_lipschitz = Some(l);
        Ok(self)
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn body(&self) -> &QueryBody {
        &self.body
    }

    /// Declared constant if any, otherwise the exact constant of a built-in
    /// with respect to the sup norm: n for sum, 1 for mean and max, the
    /// largest |w_i| for a weighted sum.
    pub fn lipschitz(&self) -> Option<BigRational> {
        if self.declared_lipschitz.is_some() {
            return self.declared_lipschitz.clone();
        }
        match &self.body {
            QueryBody::Tabulated(_) => None,
            QueryBody::Builtin(b) => Some(match b {
                Builtin::Sum => from_usize(self.inputs.len()),
                Builtin::Mean | Builtin::Max => from_usize(1),
                Builtin::Weighted(w) => w
                    .iter()
                    .map(|x| x.abs())
                    .max()
                    .unwrap_or_else(BigRational::zero),
            }),
        }
    }

    pub fn eval(&self, args: &[Value]) -> Result<Value> {
        if args.len() != self.inputs.len() {
            return Err(Error::DimensionMismatch(format!(
                "query of {} inputs applied to {} arguments",
                self.inputs.len(),
                args.len()
            )));
        }
        match &self.body {
            QueryBody::Tabulated(table) => table
                .get(args)
                .cloned()
                .ok_or_else(|| undefined_input(args)),
            QueryBody::Builtin(kind) => {
                let scalars: Vec<&BigRational> = args
                    .iter()
                    .map(|v| {
                        v.as_scalar().ok_or_else(|| {
                            Error::DimensionMismatch(format!(
                                "built-in queries need scalar inputs, got {}",
                                v.shape_label()
                            ))
                        })
                    })
                    .collect::<Result<_>>()?;
                let out = match kind {
                    Builtin::Sum => scalars.iter().fold(BigRational::zero(), |acc, x| acc + *x),
                    Builtin::Mean => {
                        let sum = scalars.iter().fold(BigRational::zero(), |acc, x| acc + *x);
                        sum / from_usize(scalars.len())
                    }
                    Builtin::Max => (*scalars.iter().max().expect("nonempty")).clone(),
                    Builtin::Weighted(w) => w
                        .iter()
                        .zip(scalars.iter())
                        .fold(BigRational::zero(), |acc, (wi, xi)| acc + wi * *xi),
                };
                Ok(Value::scalar(out))
            }
        }
    }
}
