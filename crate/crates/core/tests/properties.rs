//! Randomized invariants. Each property holds for every finite space, so a
//! single counterexample is a bug; the generator seeds keep failures
//! replayable.

use std::collections::{BTreeMap, BTreeSet};

use num::rational::BigRational;
use num::{One, Signed, Zero};
use proptest::prelude::*;

use nspfe_core::common::{common_variable, factor_through};
use nspfe_core::dataset::{parse_dataset, serialize_dataset};
use nspfe_core::measures::{
    conditional_entropy, conditional_leakage, hartley_entropy, information, leakage,
};
use nspfe_core::partitions::check_conditionally_disassociated;
use nspfe_core::partitions::{
    delta_overlap_family, maximin_information, overlap_partition, taxicab_partition,
};
use nspfe_core::privacy::check_gamma_privacy;
use nspfe_core::query::QueryFunction;
use nspfe_core::rational::from_usize;
use nspfe_core::{LogBase, SampleSpace, Value};
use nspfe_oracles::RandomSpaceSpec;

fn space_from(seed: u64) -> SampleSpace {
    RandomSpaceSpec::sample(seed).generate()
}

fn names_of(space: &SampleSpace) -> Vec<String> {
    space.variable_names().map(str::to_string).collect()
}

proptest! {
    /// Conditioning can only shrink a range, and shrinks none of them
    /// exactly when the variables are unrelated.
    #[test]
    fn conditioning_shrinks_ranges(seed in any::<u64>()) {
        let space = space_from(seed);
        let names = names_of(&space);
        let (a, b) = (&names[0], &names[1]);
        let full = space.range(a).unwrap().value_set();
        let mut all_equal = true;
        for y in space.range(b).unwrap().values() {
            let conditional = space.conditional_range(&[a.as_str()], &[(b.as_str(), y)]).unwrap().value_set();
            prop_assert!(conditional.is_subset(&full));
            all_equal &= conditional == full;
        }
        prop_assert_eq!(all_equal, space.check_unrelated(&[a, b], None).unwrap());
    }

    /// Projecting the joint range onto one coordinate recovers that
    /// variable's range.
    #[test]
    fn joint_range_projects_onto_ranges(seed in any::<u64>()) {
        let space = space_from(seed);
        let names = names_of(&space);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let joint = space.joint_range(&refs).unwrap();
        for (i, name) in names.iter().enumerate() {
            let projected: BTreeSet<Value> =
                joint.tuples().map(|t| t[i].clone()).collect();
            prop_assert_eq!(projected, space.range(name).unwrap().value_set());
        }
    }

    /// Deriving a new variable never disturbs the worlds or the existing
    /// assignments.
    #[test]
    fn push_forward_is_conservative(seed in any::<u64>()) {
        let space = space_from(seed);
        let names = names_of(&space);
        let f = QueryFunction::from_variable(&space, &names[0], vec![names[0].clone()]).unwrap();
        let extended = space.push_forward(&f, "copy").unwrap();
        prop_assert_eq!(extended.worlds(), space.worlds());
        for name in &names {
            prop_assert_eq!(extended.values(name).unwrap(), space.values(name).unwrap());
        }
        prop_assert_eq!(extended.values("copy").unwrap(), space.values(&names[0]).unwrap());
    }

    /// 1 <= information ratio <= leakage ratio, i.e. 0 <= I0 <= L0.
    #[test]
    fn information_bounded_by_leakage(seed in any::<u64>()) {
        let space = space_from(seed);
        let names = names_of(&space);
        let (a, b) = (&names[0], &names[1]);
        let info = information(&space, a, &[b], LogBase::Bits).unwrap();
        let leak = leakage(&space, a, &[b], LogBase::Bits).unwrap();
        prop_assert!(info.value.ratio() >= &BigRational::one());
        prop_assert!(info.value.ratio() <= leak.value.ratio());
    }

    /// Zero leakage characterizes unrelatedness, conditionally and not.
    #[test]
    fn zero_leakage_iff_unrelated(seed in any::<u64>()) {
        let mut spec = RandomSpaceSpec::sample(seed);
        spec.variables = spec.variables.max(3);
        let space = spec.generate();
        let names = names_of(&space);
        let (a, b, c) = (&names[0], &names[1], &names[2]);
        let leak = leakage(&space, a, &[b], LogBase::Bits).unwrap();
        prop_assert_eq!(leak.value.is_zero(), space.check_unrelated(&[a, b], None).unwrap());
        let cond = conditional_leakage(&space, a, &[b], &[c], LogBase::Bits).unwrap();
        prop_assert_eq!(cond.value.is_zero(), space.check_unrelated(&[a, b], Some(c)).unwrap());
    }

    /// Entropy sees only range cardinality, never the labels.
    #[test]
    fn entropy_ignores_relabeling(seed in any::<u64>()) {
        let space = space_from(seed);
        let names = names_of(&space);
        let a = &names[0];
        let column = space.values(a).unwrap();
        let mut fresh: BTreeMap<Value, Value> = BTreeMap::new();
        for v in column {
            let next = fresh.len();
            fresh.entry(v.clone()).or_insert_with(|| Value::symbol(format!("s{next}")));
        }
        let relabeled: Vec<Value> = column.iter().map(|v| fresh[v].clone()).collect();
        let renamed = space.with_variable("relabeled", relabeled).unwrap();
        let before = hartley_entropy(&renamed, a, LogBase::Bits).unwrap();
        let after = hartley_entropy(&renamed, "relabeled", LogBase::Bits).unwrap();
        prop_assert_eq!(before.value.ratio(), after.value.ratio());
    }

    /// I0 = H0 - H0(.|.) holds exactly in ratio form.
    #[test]
    fn information_is_entropy_difference(seed in any::<u64>()) {
        let space = space_from(seed);
        let names = names_of(&space);
        let (a, b) = (&names[0], &names[1]);
        let h = hartley_entropy(&space, a, LogBase::Bits).unwrap();
        let hc = conditional_entropy(&space, a, &[b], LogBase::Bits).unwrap();
        let i = information(&space, a, &[b], LogBase::Bits).unwrap();
        prop_assert_eq!(i.value.ratio(), &(h.value.ratio() / hc.value.ratio()));
        prop_assert_eq!(&i.witness, &hc.witness);
    }

    /// Overlap cells are closed under conditional ranges (no range bridges
    /// two cells) and internally connected by them.
    #[test]
    fn overlap_cells_are_isolated_and_connected(seed in any::<u64>()) {
        let space = space_from(seed);
        let names = names_of(&space);
        let (a, b) = (&names[0], &names[1]);
        let partition = overlap_partition(&space, a, &[b]).unwrap();
        let cells: Vec<BTreeSet<Value>> =
            partition.cells.iter().map(|c| c.value_set()).collect();

        let ranges: Vec<BTreeSet<Value>> = space
            .range(b)
            .unwrap()
            .values()
            .map(|y| space.conditional_range(&[a.as_str()], &[(b.as_str(), y)]).unwrap().value_set())
            .collect();
        for range in &ranges {
            let touched = cells.iter().filter(|cell| !cell.is_disjoint(range)).count();
            prop_assert_eq!(touched, 1, "a conditional range must sit inside one cell");
        }
        for cell in &cells {
            // Grow a reachable set from one value through shared ranges.
            let mut reach: BTreeSet<Value> = cell.iter().take(1).cloned().collect();
            loop {
                let grown: BTreeSet<Value> = ranges
                    .iter()
                    .filter(|r| !r.is_disjoint(&reach))
                    .flat_map(|r| r.iter().cloned())
                    .chain(reach.iter().cloned())
                    .collect();
                if grown == reach {
                    break;
                }
                reach = grown;
            }
            prop_assert_eq!(&reach, cell, "each cell must be overlap connected");
        }
    }

    /// Both one-sided overlap partitions and the taxicab partition agree on
    /// their cell count, and that count is the common variable's components.
    #[test]
    fn partition_counts_are_symmetric(seed in any::<u64>()) {
        let space = space_from(seed);
        let names = names_of(&space);
        let (a, b) = (&names[0], &names[1]);
        let left = overlap_partition(&space, a, &[b]).unwrap().cell_count();
        let right = overlap_partition(&space, b, &[a]).unwrap().cell_count();
        let cross = taxicab_partition(&space, a, b).unwrap().cell_count();
        prop_assert_eq!(left, right);
        prop_assert_eq!(left, cross);
        let common = common_variable(&space, a, b).unwrap();
        prop_assert_eq!(common.component_count(), cross);
    }

    /// Maximin information never exceeds the directed leakage either way.
    #[test]
    fn maximin_below_leakage(seed in any::<u64>()) {
        let space = space_from(seed);
        let names = names_of(&space);
        let (a, b) = (&names[0], &names[1]);
        let maximin = maximin_information(&space, a, b, LogBase::Bits).unwrap();
        for (x, y) in [(a, b), (b, a)] {
            let leak = leakage(&space, x, &[y], LogBase::Bits).unwrap();
            prop_assert!(maximin.value.ratio() <= leak.value.ratio());
        }
    }

    /// At delta = 0 the relaxed family collapses to the overlap partition.
    #[test]
    fn zero_delta_family_is_overlap_partition(seed in any::<u64>()) {
        let space = space_from(seed);
        let names = names_of(&space);
        let (a, b) = (&names[0], &names[1]);
        let family = delta_overlap_family(&space, a, &[b], &BigRational::zero()).unwrap();
        let plain = overlap_partition(&space, a, &[b]).unwrap();
        let family_cells: Vec<BTreeSet<Value>> =
            family.cells.iter().map(|c| c.value_set()).collect();
        let plain_cells: Vec<BTreeSet<Value>> =
            plain.cells.iter().map(|c| c.value_set()).collect();
        prop_assert_eq!(family_cells, plain_cells);
        prop_assert!(family.clauses.as_ref().unwrap().all_hold());
    }

    /// The common variable does not depend on the argument order: both
    /// orders induce the same grouping of worlds.
    #[test]
    fn common_variable_is_symmetric(seed in any::<u64>()) {
        let space = space_from(seed);
        let names = names_of(&space);
        let (a, b) = (&names[0], &names[1]);
        let ab = common_variable(&space, a, b).unwrap();
        let ba = common_variable(&space, b, a).unwrap();
        let grouping = |assignment: &[usize]| -> BTreeSet<Vec<usize>> {
            let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for (world, &component) in assignment.iter().enumerate() {
                groups.entry(component).or_default().push(world);
            }
            groups.into_values().collect()
        };
        prop_assert_eq!(grouping(&ab.assignment), grouping(&ba.assignment));
    }

    /// Passing a budget implies passing every larger budget.
    #[test]
    fn budget_verdicts_are_monotone(seed in any::<u64>(), lo in 0u8..=4, span in 0u8..=4) {
        let space = space_from(seed);
        let names = names_of(&space);
        let (a, b) = (&names[0], &names[1]);
        let small = BigRational::new(num::BigInt::from(lo), num::BigInt::from(2));
        let large = &small + BigRational::new(num::BigInt::from(span), num::BigInt::from(2));
        let refs = [a.as_str(), b.as_str()];
        let at_small = check_gamma_privacy(&space, a, &refs, &small, LogBase::Bits).unwrap();
        let at_large = check_gamma_privacy(&space, a, &refs, &large, LogBase::Bits).unwrap();
        prop_assert!(!at_small.pass || at_large.pass);
    }

    /// For one-dimensional outputs no other constant beats the interval
    /// midpoint on its own cell.
    #[test]
    fn midpoint_is_unbeatable(seed in any::<u64>(), wobble_num in -6i64..=6, wobble_den in 1i64..=3) {
        let mut spec = RandomSpaceSpec::sample(seed);
        spec.numeric = true;
        let space = spec.generate();
        let names = names_of(&space);
        let a = &names[0];
        let points: Vec<BigRational> = space
            .range(a)
            .unwrap()
            .values()
            .map(|v| v.as_scalar().unwrap().clone())
            .collect();
        let lo = points.iter().min().unwrap();
        let hi = points.iter().max().unwrap();
        let midpoint = (lo + hi) / from_usize(2);
        let optimum = (hi - lo) / from_usize(2);
        let alternative = &midpoint + BigRational::new(
            num::BigInt::from(wobble_num),
            num::BigInt::from(wobble_den),
        );
        let alternative_error = points
            .iter()
            .map(|p| (p - &alternative).abs())
            .max()
            .unwrap();
        prop_assert!(alternative_error >= optimum);
    }

    /// Quantizer cell indices never decrease along the input order.
    #[test]
    fn quantization_is_monotone(seed in any::<u64>(), q in 1u64..=9) {
        let mut spec = RandomSpaceSpec::sample(seed);
        spec.numeric = true;
        let space = spec.generate();
        let names = names_of(&space);
        let mut points: Vec<BigRational> = space
            .range(&names[0])
            .unwrap()
            .values()
            .map(|v| v.as_scalar().unwrap().clone())
            .collect();
        points.sort();
        let lo = points.first().unwrap().clone();
        let hi = points.last().unwrap().clone();
        if lo == hi {
            return Ok(());
        }
        let quantizer = nspfe_core::quantizer::LinearQuantizer::new(q, lo, hi, true).unwrap();
        let indices: Vec<u64> =
            points.iter().map(|p| quantizer.cell_index(p).unwrap()).collect();
        prop_assert!(indices.windows(2).all(|w| w[0] <= w[1]));
    }

    /// A dataset survives the round trip through its canonical text form.
    #[test]
    fn dataset_round_trips(seed in any::<u64>()) {
        let space = space_from(seed);
        let text = serialize_dataset(&space);
        let reloaded = parse_dataset(&text).unwrap();
        prop_assert_eq!(&reloaded, &space);
        prop_assert_eq!(serialize_dataset(&reloaded), text);
    }

    /// The released cell index of one party stays disassociated from the
    /// other party, conditioned on the first, at the family's own delta.
    #[test]
    fn candidate_releases_stay_disassociated(seed in any::<u64>(), num in 1i64..=4) {
        let space = space_from(seed);
        let names = names_of(&space);
        let (a, b) = (&names[0], &names[1]);
        let delta = BigRational::new(num::BigInt::from(num), num::BigInt::from(4));
        let candidates =
            nspfe_core::privacy::gamma_private_candidates(&space, (a, b), &delta).unwrap();
        for candidate in &candidates {
            let (this, other) = if candidate.based_on == *a { (a, b) } else { (b, a) };
            let extended = space.with_variable("released", candidate.values.clone()).unwrap();
            let verdict = check_conditionally_disassociated(
                &extended, "released", other, this, &delta,
            ).unwrap();
            prop_assert!(verdict.holds);
        }
    }
}

#[test]
fn leakage_is_not_symmetric_on_some_space() {
    // Three worlds: X has three values, Y collapses two of them. Observing
    // X pins Y exactly (leakage log2 2), observing Y=y1 leaves two X values
    // (leakage log2(3/2)).
    let space = SampleSpace::from_assignments(
        vec!["w1".into(), "w2".into(), "w3".into()],
        vec![
            (
                "X".into(),
                vec![Value::int(1), Value::int(2), Value::int(3)],
            ),
            (
                "Y".into(),
                vec![
                    Value::symbol("y1"),
                    Value::symbol("y1"),
                    Value::symbol("y2"),
                ],
            ),
        ],
    )
    .unwrap();
    let xy = leakage(&space, "X", &["Y"], LogBase::Bits).unwrap();
    let yx = leakage(&space, "Y", &["X"], LogBase::Bits).unwrap();
    assert_ne!(xy.value.ratio(), yx.value.ratio());
}

#[test]
fn common_variable_is_the_largest_shared_coarsening() {
    // Over every function of the joint range into three labels: whenever
    // both parties determine the function alone, so does their common
    // variable. Exhaustive on small spaces.
    let fixtures: Vec<Vec<(&str, &str)>> = vec![
        vec![("a", "c"), ("b", "d")],
        vec![("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")],
        vec![("a", "c"), ("a", "d"), ("b", "d"), ("b", "e")],
    ];
    for tuples in &fixtures {
        let worlds: Vec<String> = (1..=tuples.len()).map(|i| format!("t{i}")).collect();
        let x1: Vec<Value> = tuples.iter().map(|(a, _)| Value::symbol(*a)).collect();
        let x2: Vec<Value> = tuples.iter().map(|(_, b)| Value::symbol(*b)).collect();
        let space =
            SampleSpace::from_assignments(worlds, vec![("X1".into(), x1), ("X2".into(), x2)])
                .unwrap();
        let common = common_variable(&space, "X1", "X2").unwrap();
        let t = tuples.len() as u32;
        for code in 0..3u32.pow(t) {
            let mut column = Vec::with_capacity(tuples.len());
            let mut c = code;
            for _ in 0..t {
                column.push(Value::int((c % 3) as i64));
                c /= 3;
            }
            let candidate = space.with_variable("C", column).unwrap();
            let through_x1 = factor_through(&candidate, "C", "X1").unwrap().factors();
            let through_x2 = factor_through(&candidate, "C", "X2").unwrap().factors();
            if through_x1 && through_x2 {
                let with_common = common.extend_space(&candidate, "common_part").unwrap();
                assert!(
                    factor_through(&with_common, "C", "common_part").unwrap().factors(),
                    "function {code} on {tuples:?} is shared but does not factor through the common variable"
                );
            }
        }
    }
}
