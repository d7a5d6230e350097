//! Partitions induced by what one variable's observations say about another.
//!
//! The overlap partition groups values of X that cannot be told apart with
//! certainty by any chain of observations of Y: conditional ranges that
//! intersect get merged, transitively. The taxicab partition does the same on
//! joint realizations, moving one coordinate at a time. Both have the same
//! number of cells whichever side they are computed from; the log of that
//! count is the maximin information, the largest amount both sides can agree
//! on with certainty.
//!
//! Relaxing "intersect" to "intersect in at least a delta fraction of the
//! ground range" yields overlap families whose cells may fail to be disjoint;
//! the failure modes are reported, not hidden, since downstream privacy
//! constructions only get guarantees when the strict clauses hold.

use std::collections::{BTreeMap, BTreeSet};

use num::rational::BigRational;
use num::{One, Zero};

use crate::dsu::Dsu;
use crate::error::{Error, Result};
use crate::measures::{LogBase, LogValue, MeasureResult};
use crate::rational::from_usize;
use crate::space::{RangeSet, SampleSpace};
use crate::value::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionKind {
    Overlap,
    Taxicab,
    /// Relaxed overlap construction whose cells happen to be disjoint.
    DeltaOverlapPartition,
    /// Relaxed overlap construction with overlapping cells.
    DeltaOverlapFamily,
}

impl PartitionKind {
    pub fn label(self) -> &'static str {
        match self {
            PartitionKind::Overlap => "overlap",
            PartitionKind::Taxicab => "taxicab",
            PartitionKind::DeltaOverlapPartition => "delta_overlap_partition",
            PartitionKind::DeltaOverlapFamily => "delta_overlap_family",
        }
    }
}

/// Which of the defining clauses of a relaxed overlap family actually hold
/// for the computed cells. The construction guarantees the first two; the
/// last two can genuinely fail and then no uniqueness or privacy guarantee
/// attaches to the family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseReport {
    /// Every cell contains at least one full conditional range.
    pub cell_contains_conditional_range: bool,
    /// Any two values sharing a conditional range also share a cell.
    pub singly_connected_share_cell: bool,
    /// Distinct cells overlap in at most a delta fraction of the ground set.
    pub overlap_bounded: bool,
    /// Distinct cells are disjoint (the strict partition property).
    pub cells_disjoint: bool,
}

impl ClauseReport {
    pub fn all_hold(&self) -> bool {
        self.cell_contains_conditional_range
            && self.singly_connected_share_cell
            && self.overlap_bounded
            && self.cells_disjoint
    }
}

/// Cells over a ground range. Cells are ordered by their smallest member and
/// each cell's members iterate in canonical order, so identical inputs
/// produce identical output, bit for bit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionFamily {
    pub kind: PartitionKind,
    pub cells: Vec<RangeSet>,
    pub covered: RangeSet,
    pub delta: Option<BigRational>,
    pub clauses: Option<ClauseReport>,
}

impl PartitionFamily {
    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// Maps each arity-1 ground value to the 1-based index of the first cell
    /// containing it. Values contained in several cells are listed as
    /// ambiguous; their mapping is the smallest index, so composition with
    /// the map is still total and deterministic.
    pub fn index_map(&self) -> IndexMap {
        debug_assert!(self.cells.iter().all(|c| c.arity() == 1));
        let mut mapping: BTreeMap<Value, usize> = BTreeMap::new();
        let mut ambiguous: BTreeSet<Value> = BTreeSet::new();
        for (i, cell) in self.cells.iter().enumerate() {
            for v in cell.values() {
                match mapping.entry(v.clone()) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(i + 1);
                    }
                    std::collections::btree_map::Entry::Occupied(_) => {
                        ambiguous.insert(v.clone());
                    }
                }
            }
        }
        IndexMap {
            mapping,
            ambiguous,
            cell_count: self.cells.len(),
        }
    }
}

/// Total 1-based cell index over the ground values of a family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexMap {
    pub mapping: BTreeMap<Value, usize>,
    pub ambiguous: BTreeSet<Value>,
    pub cell_count: usize,
}

impl IndexMap {
    pub fn index_of(&self, v: &Value) -> Result<usize> {
        self.mapping.get(v).copied().ok_or_else(|| {
            Error::InvalidArgument(format!("value {} is outside the indexed range", v.render()))
        })
    }
}

/// The distinct conditional ranges of `var` across realizations of `given`,
/// as value sets in canonical order.
fn distinct_conditional_ranges(
    space: &SampleSpace,
    var: &str,
    given: &[&str],
) -> Result<Vec<BTreeSet<Value>>> {
    let col = space.values(var)?;
    let cols: Vec<&[Value]> = given
        .iter()
        .map(|n| space.values(n))
        .collect::<Result<_>>()?;
    let mut by_y: BTreeMap<Vec<Value>, BTreeSet<Value>> = BTreeMap::new();
    for w in 0..space.world_count() {
        let y: Vec<Value> = cols.iter().map(|c| c[w].clone()).collect();
        by_y.entry(y).or_default().insert(col[w].clone());
    }
    let distinct: BTreeSet<BTreeSet<Value>> = by_y.into_values().collect();
    Ok(distinct.into_iter().collect())
}

/// Merges conditional ranges whose pairwise intersection clears `threshold`,
/// then unions each component into a cell.
fn merge_ranges(
    ranges: &[BTreeSet<Value>],
    threshold: impl Fn(usize) -> bool,
) -> Vec<BTreeSet<Value>> {
    let mut dsu = Dsu::new(ranges.len());
    for i in 0..ranges.len() {
        for j in (i + 1)..ranges.len() {
            let inter = ranges[i].intersection(&ranges[j]).count();
            if threshold(inter) {
                dsu.union(i, j);
            }
        }
    }
    let mut cells: Vec<BTreeSet<Value>> = dsu
        .groups()
        .into_iter()
        .map(|group| {
            group
                .into_iter()
                .flat_map(|i| ranges[i].iter().cloned())
                .collect()
        })
        .collect();
    // Lexicographic on members: primarily by smallest member, with full
    // contents as the deterministic tiebreak for overlapping cells.
    cells.sort();
    cells
}

fn cells_to_rangesets(cells: Vec<BTreeSet<Value>>, what: &str) -> Vec<RangeSet> {
    cells
        .into_iter()
        .enumerate()
        .map(|(i, c)| RangeSet::from_values(c, format!("{what} cell {}", i + 1)))
        .collect()
}

/// Cells of `var` that chains of observations of `given` cannot separate:
/// conditional ranges merge whenever they intersect at all.
pub fn overlap_partition(
    space: &SampleSpace,
    var: &str,
    given: &[&str],
) -> Result<PartitionFamily> {
    if given.is_empty() {
        return Err(Error::InvalidArgument(
            "overlap partition needs an observed variable".into(),
        ));
    }
    let ranges = distinct_conditional_ranges(space, var, given)?;
    let cells = merge_ranges(&ranges, |inter| inter >= 1);
    Ok(PartitionFamily {
        kind: PartitionKind::Overlap,
        cells: cells_to_rangesets(cells, "overlap"),
        covered: space.range(var)?,
        delta: None,
        clauses: None,
    })
}

/// Connected components of the joint range under moves that fix one
/// coordinate: two tuples sharing either coordinate land in one cell.
pub fn taxicab_partition(space: &SampleSpace, a: &str, b: &str) -> Result<PartitionFamily> {
    let joint = space.joint_range(&[a, b])?;
    let tuples: Vec<&Vec<Value>> = joint.tuples().collect();
    let mut dsu = Dsu::new(tuples.len());
    for coord in 0..2 {
        let mut first_seen: BTreeMap<&Value, usize> = BTreeMap::new();
        for (i, t) in tuples.iter().enumerate() {
            match first_seen.entry(&t[coord]) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(i);
                }
                std::collections::btree_map::Entry::Occupied(e) => dsu.union(*e.get(), i),
            }
        }
    }
    let mut cells: Vec<BTreeSet<Vec<Value>>> = dsu
        .groups()
        .into_iter()
        .map(|group| group.into_iter().map(|i| tuples[i].clone()).collect())
        .collect();
    cells.sort();
    let cells = cells
        .into_iter()
        .enumerate()
        .map(|(i, c)| RangeSet::new(2, c, format!("taxicab cell {}", i + 1)))
        .collect();
    Ok(PartitionFamily {
        kind: PartitionKind::Taxicab,
        cells,
        covered: joint,
        delta: None,
        clauses: None,
    })
}

/// log of the common cell count of the two one-sided overlap partitions; the
/// largest amount of information the two variables pin down in common. The
/// two sides provably agree, so a mismatch is reported as an internal bug.
pub fn maximin_information(
    space: &SampleSpace,
    a: &str,
    b: &str,
    base: LogBase,
) -> Result<MeasureResult> {
    let left = overlap_partition(space, a, &[b])?;
    let right = overlap_partition(space, b, &[a])?;
    if left.cell_count() != right.cell_count() {
        return Err(Error::Internal(format!(
            "one-sided overlap partitions disagree: {} cells of {a} vs {} cells of {b}",
            left.cell_count(),
            right.cell_count()
        )));
    }
    Ok(MeasureResult {
        value: LogValue::new(from_usize(left.cell_count()), base),
        witness: vec![],
    })
}

/// Outcome of a disassociation test: the smallest pairwise intersection
/// fraction encountered, which is precisely the largest delta for which the
/// test would pass. Vacuous tests (fewer than two observations) report 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disassociation {
    pub holds: bool,
    pub worst_ratio: BigRational,
}

fn validate_delta(delta: &BigRational) -> Result<()> {
    if delta < &BigRational::zero() || delta > &BigRational::one() {
        return Err(Error::InvalidArgument(format!(
            "delta must lie in [0, 1], got {}",
            crate::rational::render_rational(delta)
        )));
    }
    Ok(())
}

/// Smallest |range(var given y1) - intersect - (given y2)| / |range(var)|
/// over distinct observation pairs. Conditional ranges are counted per
/// observed value, not deduplicated.
fn one_sided_worst_ratio(space: &SampleSpace, var: &str, given: &str) -> Result<BigRational> {
    let col = space.values(var)?;
    let given_col = space.values(given)?;
    let ground = from_usize(space.range(var)?.len());
    let mut by_y: BTreeMap<&Value, BTreeSet<&Value>> = BTreeMap::new();
    for w in 0..space.world_count() {
        by_y.entry(&given_col[w]).or_default().insert(&col[w]);
    }
    let ranges: Vec<&BTreeSet<&Value>> = by_y.values().collect();
    let mut worst = BigRational::one();
    for i in 0..ranges.len() {
        for j in (i + 1)..ranges.len() {
            let inter = from_usize(ranges[i].intersection(ranges[j]).count());
            worst = worst.min(inter / &ground);
        }
    }
    Ok(worst)
}

/// Tests whether every pair of observations of one variable leaves at least
/// a `delta` fraction of the other's range in play. `partial` restricts the
/// test to ranges of `a` conditioned on `b`; the full test also requires the
/// mirrored direction.
pub fn check_disassociated(
    space: &SampleSpace,
    a: &str,
    b: &str,
    delta: &BigRational,
    partial: bool,
) -> Result<Disassociation> {
    validate_delta(delta)?;
    let mut worst = one_sided_worst_ratio(space, a, b)?;
    if !partial {
        worst = worst.min(one_sided_worst_ratio(space, b, a)?);
    }
    Ok(Disassociation {
        holds: worst >= *delta,
        worst_ratio: worst,
    })
}

/// Disassociation within every slice of a conditioning variable: ranges are
/// taken relative to each realization of `given` and normalized by the
/// sliced ground range. Both directions are required.
pub fn check_conditionally_disassociated(
    space: &SampleSpace,
    a: &str,
    b: &str,
    given: &str,
    delta: &BigRational,
) -> Result<Disassociation> {
    validate_delta(delta)?;
    let a_col = space.values(a)?;
    let b_col = space.values(b)?;
    let z_col = space.values(given)?;

    let mut slices: BTreeMap<&Value, Vec<usize>> = BTreeMap::new();
    for (w, z) in z_col.iter().enumerate() {
        slices.entry(z).or_default().push(w);
    }

    let mut worst = BigRational::one();
    for worlds in slices.values() {
        for (x_col, y_col) in [(a_col, b_col), (b_col, a_col)] {
            let ground: BTreeSet<&Value> = worlds.iter().map(|&w| &x_col[w]).collect();
            let ground = from_usize(ground.len());
            let mut by_y: BTreeMap<&Value, BTreeSet<&Value>> = BTreeMap::new();
            for &w in worlds {
                by_y.entry(&y_col[w]).or_default().insert(&x_col[w]);
            }
            let ranges: Vec<&BTreeSet<&Value>> = by_y.values().collect();
            for i in 0..ranges.len() {
                for j in (i + 1)..ranges.len() {
                    let inter = from_usize(ranges[i].intersection(ranges[j]).count());
                    worst = worst.min(inter / &ground);
                }
            }
        }
    }
    Ok(Disassociation {
        holds: worst >= *delta,
        worst_ratio: worst,
    })
}

/// Relaxed overlap construction: conditional ranges merge only when their
/// intersection reaches `max(delta * |range(var)|, 1)` values. The defining
/// clauses are validated after the fact and reported; at delta = 0 this is
/// exactly the overlap partition.
pub fn delta_overlap_family(
    space: &SampleSpace,
    var: &str,
    given: &[&str],
    delta: &BigRational,
) -> Result<PartitionFamily> {
    validate_delta(delta)?;
    if given.is_empty() {
        return Err(Error::InvalidArgument(
            "overlap family needs an observed variable".into(),
        ));
    }
    let ranges = distinct_conditional_ranges(space, var, given)?;
    let ground = space.range(var)?;
    let ground_size = from_usize(ground.len());
    let cut = delta * &ground_size;
    let cells = merge_ranges(&ranges, |inter| {
        let inter = from_usize(inter);
        inter >= cut && inter >= BigRational::one()
    });

    let contains_range = cells
        .iter()
        .all(|cell| ranges.iter().any(|r| r.is_subset(cell)));
    // "Singly connected" pairs live inside one conditional range; the pair
    // must land in a common cell, though not necessarily the range's own.
    let singly_shared = ranges.iter().all(|r| {
        if cells.iter().any(|cell| r.is_subset(cell)) {
            return true;
        }
        let vs: Vec<&Value> = r.iter().collect();
        (0..vs.len()).all(|i| {
            ((i + 1)..vs.len()).all(|j| {
                cells
                    .iter()
                    .any(|cell| cell.contains(vs[i]) && cell.contains(vs[j]))
            })
        })
    });
    let mut disjoint = true;
    let mut bounded = true;
    for i in 0..cells.len() {
        for j in (i + 1)..cells.len() {
            let inter = cells[i].intersection(&cells[j]).count();
            if inter > 0 {
                disjoint = false;
            }
            if from_usize(inter) > delta * &ground_size {
                bounded = false;
            }
        }
    }
    let kind = if disjoint {
        PartitionKind::DeltaOverlapPartition
    } else {
        PartitionKind::DeltaOverlapFamily
    };
    Ok(PartitionFamily {
        kind,
        cells: cells_to_rangesets(cells, "delta overlap"),
        covered: ground,
        delta: Some(delta.clone()),
        clauses: Some(ClauseReport {
            cell_contains_conditional_range: contains_range,
            singly_connected_share_cell: singly_shared,
            overlap_bounded: bounded,
            cells_disjoint: disjoint,
        }),
    })
}
