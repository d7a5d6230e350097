//! Finite sample spaces and the uncertain variables living on them.
//!
//! An uncertain variable is nothing more than a total assignment of values to
//! worlds; every information measure in this crate is a statement about the
//! ranges such assignments induce. Ranges are plain finite sets, so all
//! downstream computation is exact set arithmetic.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::query::QueryFunction;
use crate::value::{render_tuple, Value};

/// A finite set of worlds together with named total assignments.
///
/// Immutable once built: extension happens through [`SampleSpace::with_variable`]
/// or [`SampleSpace::push_forward`], both of which return a new space over the
/// same worlds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleSpace {
    worlds: Vec<String>,
    variables: BTreeMap<String, Vec<Value>>,
}

/// A set of realizations, either of one variable (arity 1) or of a joint
/// tuple. Provenance records the conditioning event for diagnostics; equality
/// deliberately ignores it, a range is just its set of tuples.
#[derive(Clone, Debug)]
pub struct RangeSet {
    arity: usize,
    tuples: BTreeSet<Vec<Value>>,
    provenance: String,
}

impl PartialEq for RangeSet {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.tuples == other.tuples
    }
}
impl Eq for RangeSet {}

impl RangeSet {
    pub(crate) fn new(arity: usize, tuples: BTreeSet<Vec<Value>>, provenance: String) -> Self {
        debug_assert!(tuples.iter().all(|t| t.len() == arity));
        RangeSet {
            arity,
            tuples,
            provenance,
        }
    }

    pub(crate) fn from_values(values: BTreeSet<Value>, provenance: String) -> Self {
        RangeSet::new(1, values.into_iter().map(|v| vec![v]).collect(), provenance)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn tuples(&self) -> impl Iterator<Item = &Vec<Value>> {
        self.tuples.iter()
    }

    pub fn contains(&self, tuple: &[Value]) -> bool {
        self.tuples.contains(tuple)
    }

    /// Arity-1 ranges viewed as single values.
    pub fn values(&self) -> impl Iterator<Item = &Value> {
        debug_assert_eq!(self.arity, 1);
        self.tuples.iter().map(|t| &t[0])
    }

    pub fn value_set(&self) -> BTreeSet<Value> {
        self.values().cloned().collect()
    }

    pub fn is_subset(&self, other: &RangeSet) -> bool {
        self.arity == other.arity && self.tuples.is_subset(&other.tuples)
    }

    pub fn smallest(&self) -> Option<&Vec<Value>> {
        self.tuples.iter().next()
    }
}

impl SampleSpace {
    /// A space with worlds only; attach variables with [`with_variable`].
    ///
    /// [`with_variable`]: SampleSpace::with_variable
    pub fn new(worlds: Vec<String>) -> Result<Self> {
        if worlds.is_empty() {
            return Err(Error::Dataset(
                "a sample space needs at least one world".into(),
            ));
        }
        let mut seen = BTreeSet::new();
        for w in &worlds {
            if !seen.insert(w.clone()) {
                return Err(Error::Dataset(format!("duplicate world identifier `{w}`")));
            }
        }
        Ok(SampleSpace {
            worlds,
            variables: BTreeMap::new(),
        })
    }

    pub fn from_assignments(
        worlds: Vec<String>,
        variables: Vec<(String, Vec<Value>)>,
    ) -> Result<Self> {
        let mut space = SampleSpace::new(worlds)?;
        for (name, values) in variables {
            space = space.with_variable(&name, values)?;
        }
        Ok(space)
    }

    /// Returns a copy of this space extended by one total assignment. All
    /// values of one variable must share a shape (all symbols, or numeric
    /// vectors of one length).
    pub fn with_variable(&self, name: &str, values: Vec<Value>) -> Result<SampleSpace> {
        if name.is_empty() {
            return Err(Error::InvalidArgument(
                "variable names must be non-empty".into(),
            ));
        }
        if self.variables.contains_key(name) {
            return Err(Error::DuplicateVariable(name.to_string()));
        }
        if values.len() != self.worlds.len() {
            return Err(Error::Dataset(format!(
                "variable `{name}` assigns {} values to {} worlds",
                values.len(),
                self.worlds.len()
            )));
        }
        if let Some(first) = values.first() {
            if let Some(bad) = values.iter().find(|v| !v.same_shape(first)) {
                return Err(Error::DimensionMismatch(format!(
                    "variable `{name}` mixes {} and {} values",
                    first.shape_label(),
                    bad.shape_label()
                )));
            }
        }
        let mut next = self.clone();
        next.variables.insert(name.to_string(), values);
        Ok(next)
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn variable_names(&self) -> impl Iterator<Item = &str> {
        self.variables.keys().map(String::as_str)
    }

    pub fn has_variable(&self, name: &str) -> bool {
        self.variables.contains_key(name)
    }

    /// Per-world values of a variable, aligned with [`SampleSpace::worlds`].
    pub fn values(&self, name: &str) -> Result<&[Value]> {
        self.variables
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn value_at(&self, name: &str, world: usize) -> Result<&Value> {
        Ok(&self.values(name)?[world])
    }

    /// World indices satisfying a conjunction of `variable = value` clauses.
    /// An unrealizable conjunction is an error: conditioning on it would
    /// divide by an empty set downstream.
    pub fn worlds_satisfying(&self, given: &[(&str, &Value)]) -> Result<Vec<usize>> {
        let columns: Vec<(&[Value], &Value)> = given
            .iter()
            .map(|(name, v)| Ok((self.values(name)?, *v)))
            .collect::<Result<_>>()?;
        let hits: Vec<usize> = (0..self.worlds.len())
            .filter(|&w| columns.iter().all(|(col, v)| &col[w] == *v))
            .collect();
        if hits.is_empty() {
            let event = given
                .iter()
                .map(|(name, v)| format!("{name}={}", v.render()))
                .collect::<Vec<_>>()
                .join(", ");
            return Err(Error::EmptyCondition(format!("{{{event}}}")));
        }
        Ok(hits)
    }

    pub fn range(&self, name: &str) -> Result<RangeSet> {
        let values = self.values(name)?;
        Ok(RangeSet::from_values(
            values.iter().cloned().collect(),
            format!("range of {name}"),
        ))
    }

    /// The joint range of several variables: every tuple realized by some
    /// world, in the order the names are given.
    pub fn joint_range(&self, names: &[&str]) -> Result<RangeSet> {
        if names.is_empty() {
            return Err(Error::InvalidArgument(
                "joint range of zero variables".into(),
            ));
        }
        let columns: Vec<&[Value]> = names
            .iter()
            .map(|n| self.values(n))
            .collect::<Result<_>>()?;
        let tuples: BTreeSet<Vec<Value>> = (0..self.worlds.len())
            .map(|w| columns.iter().map(|col| col[w].clone()).collect())
            .collect();
        Ok(RangeSet::new(
            names.len(),
            tuples,
            format!("joint range of ({})", names.join(", ")),
        ))
    }

    /// `targets` restricted to the worlds where every `given` clause holds.
    /// With no clauses this is the unconditional joint range.
    pub fn conditional_range(
        &self,
        targets: &[&str],
        given: &[(&str, &Value)],
    ) -> Result<RangeSet> {
        if targets.is_empty() {
            return Err(Error::InvalidArgument(
                "conditional range of zero variables".into(),
            ));
        }
        let columns: Vec<&[Value]> = targets
            .iter()
            .map(|n| self.values(n))
            .collect::<Result<_>>()?;
        let worlds = if given.is_empty() {
            (0..self.worlds.len()).collect()
        } else {
            self.worlds_satisfying(given)?
        };
        let tuples: BTreeSet<Vec<Value>> = worlds
            .iter()
            .map(|&w| columns.iter().map(|col| col[w].clone()).collect())
            .collect();
        let event = given
            .iter()
            .map(|(name, v)| format!("{name}={}", v.render()))
            .collect::<Vec<_>>()
            .join(", ");
        Ok(RangeSet::new(
            targets.len(),
            tuples,
            format!("range of ({}) given {{{event}}}", targets.join(", ")),
        ))
    }

    /// Evaluates `f` world by world and returns the space extended by the
    /// resulting assignment. Existing assignments and world order are
    /// untouched, so ranges of old variables are preserved verbatim.
    pub fn push_forward(&self, f: &QueryFunction, new_name: &str) -> Result<SampleSpace> {
        let columns: Vec<&[Value]> = f
            .inputs()
            .iter()
            .map(|n| self.values(n))
            .collect::<Result<_>>()?;
        let mut outputs = Vec::with_capacity(self.worlds.len());
        for w in 0..self.worlds.len() {
            let args: Vec<Value> = columns.iter().map(|col| col[w].clone()).collect();
            outputs.push(f.eval(&args)?);
        }
        self.with_variable(new_name, outputs)
    }

    /// Whether the named variables are unrelated: the joint range is the full
    /// product of the marginal ranges. Since the joint range always embeds
    /// into the product, comparing cardinalities decides set equality.
    ///
    /// With `given`, the product test is required for every realization of
    /// the conditioning variable separately.
    pub fn check_unrelated(&self, names: &[&str], given: Option<&str>) -> Result<bool> {
        if names.len() < 2 {
            return Err(Error::InvalidArgument(
                "unrelatedness requires at least two variables".into(),
            ));
        }
        match given {
            None => {
                let joint = self.joint_range(names)?.len();
                let mut product: usize = 1;
                for n in names {
                    product = product.saturating_mul(self.range(n)?.len());
                }
                Ok(joint == product)
            }
            Some(z) => {
                for zv in self.range(z)?.value_set() {
                    let clause = [(z, &zv)];
                    let joint = self.conditional_range(names, &clause)?.len();
                    let mut product: usize = 1;
                    for n in names {
                        product =
                            product.saturating_mul(self.conditional_range(&[n], &clause)?.len());
                    }
                    if joint != product {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    /// Human-readable description of a world's full assignment, used in
    /// factorization counterexamples.
    pub fn describe_world(&self, world: usize) -> String {
        let assignment: Vec<String> = self
            .variables
            .iter()
            .map(|(name, col)| format!("{name}={}", col[world].render()))
            .collect();
        format!("{}: {}", self.worlds[world], assignment.join(", "))
    }
}

/// Shared rendering for "function undefined at tuple" errors.
pub(crate) fn undefined_input(args: &[Value]) -> Error {
    Error::UndefinedOnInput(render_tuple(args))
}
