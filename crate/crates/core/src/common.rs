//! The largest variable two parties can both compute from their own data.
//!
//! Build the bipartite graph whose vertices are the two ranges (kept apart by
//! tagging each value with its variable) and whose edges are the jointly
//! realized pairs. Each connected component is one value of the common
//! variable; both parties can tell which component their own value lies in,
//! and nothing finer is available to both. Its entropy equals the maximin
//! information between the two variables.

use std::collections::{BTreeMap, BTreeSet};

use crate::dsu::Dsu;
use crate::error::{Error, Result};
use crate::measures::{LogBase, LogValue};
use crate::rational::from_usize;
use crate::space::SampleSpace;
use crate::value::Value;

/// A common variable, described by its components and its value on every
/// world. Component labels are canonical renderings of the sorted member
/// lists, so equal spaces yield byte-identical labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommonVariable {
    /// For each component, the sorted `variable=value` member labels.
    pub components: Vec<Vec<String>>,
    /// World index -> component index.
    pub assignment: Vec<usize>,
    /// Component index -> the symbol used when this variable is materialized.
    pub labels: Vec<Value>,
}

impl CommonVariable {
    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    /// Per-world values, aligned with the space's world order.
    pub fn world_values(&self) -> Vec<Value> {
        self.assignment
            .iter()
            .map(|&c| self.labels[c].clone())
            .collect()
    }

    /// log of the component count; by construction this equals the maximin
    /// information between the two source variables.
    pub fn entropy(&self, base: LogBase) -> LogValue {
        LogValue::new(from_usize(self.component_count()), base)
    }

    /// The space extended by this variable under `name`.
    pub fn extend_space(&self, space: &SampleSpace, name: &str) -> Result<SampleSpace> {
        space.with_variable(name, self.world_values())
    }
}

/// Extracts the common variable of two named variables.
/// One extracted component: its sorted member labels plus the vertex keys
/// that landed in it.
type RenderedComponent = (Vec<String>, BTreeSet<(u8, Value)>);

pub fn common_variable(space: &SampleSpace, a: &str, b: &str) -> Result<CommonVariable> {
    let a_col = space.values(a)?;
    let b_col = space.values(b)?;

    // Vertex table: side 0 carries values of `a`, side 1 values of `b`.
    let mut vertex_ids: BTreeMap<(u8, &Value), usize> = BTreeMap::new();
    let mut vertices: Vec<(u8, &Value)> = Vec::new();
    for w in 0..space.world_count() {
        for (side, v) in [(0u8, &a_col[w]), (1u8, &b_col[w])] {
            vertex_ids.entry((side, v)).or_insert_with(|| {
                vertices.push((side, v));
                vertices.len() - 1
            });
        }
    }

    let mut dsu = Dsu::new(vertices.len());
    for w in 0..space.world_count() {
        dsu.union(vertex_ids[&(0u8, &a_col[w])], vertex_ids[&(1u8, &b_col[w])]);
    }

    // Components, each rendered through its member labels and ordered by
    // them. Label sets are BTreeSets since `a == b` makes both sides render
    // identically.
    let side_names = [a, b];
    let mut rendered: Vec<RenderedComponent> = dsu
        .groups()
        .into_iter()
        .map(|group| {
            let mut labels: BTreeSet<String> = BTreeSet::new();
            let mut members: BTreeSet<(u8, Value)> = BTreeSet::new();
            for i in group {
                let (side, v) = vertices[i];
                labels.insert(format!("{}={}", side_names[side as usize], v.render()));
                members.insert((side, v.clone()));
            }
            (labels.into_iter().collect(), members)
        })
        .collect();
    rendered.sort_by(|x, y| x.0.cmp(&y.0));

    let mut component_of: BTreeMap<(u8, Value), usize> = BTreeMap::new();
    for (c, (_, members)) in rendered.iter().enumerate() {
        for key in members {
            component_of.insert(key.clone(), c);
        }
    }

    let components: Vec<Vec<String>> = rendered.into_iter().map(|(labels, _)| labels).collect();
    let labels: Vec<Value> = components
        .iter()
        .map(|ls| Value::symbol(format!("{{{}}}", ls.join(" | "))))
        .collect();

    let mut assignment = Vec::with_capacity(space.world_count());
    for w in 0..space.world_count() {
        let ca = component_of[&(0u8, a_col[w].clone())];
        let cb = component_of[&(1u8, b_col[w].clone())];
        if ca != cb {
            return Err(Error::Internal(format!(
                "world {} maps its two sides to different components",
                space.worlds()[w]
            )));
        }
        assignment.push(ca);
    }
    Ok(CommonVariable {
        components,
        assignment,
        labels,
    })
}

/// Left fold of the pairwise extraction over three or more variables. The
/// extraction is associative and commutative up to equivalence, so the fold
/// order only affects labels, never the induced partition of worlds.
pub fn common_variable_multi(space: &SampleSpace, names: &[&str]) -> Result<CommonVariable> {
    if names.len() < 2 {
        return Err(Error::InvalidArgument(
            "the common variable needs at least two inputs".into(),
        ));
    }
    let mut acc = common_variable(space, names[0], names[1])?;
    let mut scratch = space.clone();
    for (step, name) in names.iter().enumerate().skip(2) {
        let tmp_name = format!("__common_fold_{step}");
        scratch = acc.extend_space(&scratch, &tmp_name)?;
        acc = common_variable(&scratch, &tmp_name, name)?;
    }
    Ok(acc)
}

/// Two variables are equivalent when they partition the worlds identically,
/// i.e. each is a relabeling of the other.
pub fn check_equivalent(space: &SampleSpace, a: &str, b: &str) -> Result<bool> {
    Ok(world_partition(space.values(a)?) == world_partition(space.values(b)?))
}

fn world_partition(col: &[Value]) -> BTreeSet<Vec<usize>> {
    let mut blocks: BTreeMap<&Value, Vec<usize>> = BTreeMap::new();
    for (w, v) in col.iter().enumerate() {
        blocks.entry(v).or_default().push(w);
    }
    blocks.into_values().collect()
}

/// Result of asking whether `f` is computable from `via` alone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factorization {
    /// The witnessing map g with f = g(via) on every world.
    Factors(BTreeMap<Value, Value>),
    /// Two worlds agreeing on `via` but not on `f`.
    Blocked { world_a: String, world_b: String },
}

impl Factorization {
    pub fn factors(&self) -> bool {
        matches!(self, Factorization::Factors(_))
    }
}

/// Checks whether the variable `f` factors through `via`, returning either
/// the factor map or a counterexample pair of worlds.
pub fn factor_through(space: &SampleSpace, f: &str, via: &str) -> Result<Factorization> {
    let f_col = space.values(f)?;
    let via_col = space.values(via)?;
    let mut map: BTreeMap<Value, (Value, usize)> = BTreeMap::new();
    for w in 0..space.world_count() {
        match map.entry(via_col[w].clone()) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert((f_col[w].clone(), w));
            }
            std::collections::btree_map::Entry::Occupied(e) => {
                let (seen, first_world) = e.get();
                if seen != &f_col[w] {
                    return Ok(Factorization::Blocked {
                        world_a: space.worlds()[*first_world].clone(),
                        world_b: space.worlds()[w].clone(),
                    });
                }
            }
        }
    }
    Ok(Factorization::Factors(
        map.into_iter().map(|(k, (v, _))| (k, v)).collect(),
    ))
}
