//! Worst-case information measures over finite ranges.
//!
//! Everything here is a log of a ratio of two range cardinalities, carried
//! exactly: `LogValue` stores the ratio itself and only takes the logarithm
//! at presentation time. Each measure also reports the realization that
//! attains it, with ties broken toward the canonically smallest witness.
//!
//! For a released variable X observed through Y (optionally alongside side
//! information Z):
//!
//! * entropy           log |range(X)|
//! * conditional       max over y of log |range(X given y)|
//! * information       min over y of log(|range(X)| / |range(X given y)|)
//! * leakage           max over y of log(|range(X)| / |range(X given y)|)
//! * cond. leakage     max over realized (y, z) of
//!   log(|range(X given z)| / |range(X given y, z)|)
//!
//! Leakage dominates information and both vanish together exactly when X and
//! Y are unrelated; leakage is not symmetric in its arguments.

use std::collections::{BTreeMap, BTreeSet};

use num::rational::BigRational;
use num::One;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rational::{big_to_f64, from_usize, ln_le, log2_le};
use crate::space::SampleSpace;
use crate::value::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogBase {
    Bits,
    Nat,
}

impl LogBase {
    pub fn label(self) -> &'static str {
        match self {
            LogBase::Bits => "bits",
            LogBase::Nat => "nat",
        }
    }
}

/// An exact logarithmic quantity: `log_base(ratio)` with the ratio kept as a
/// rational >= 1. Comparisons against rational budgets are exact in bits and
/// tie-free in nats (see `rational`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogValue {
    ratio: BigRational,
    base: LogBase,
}

impl LogValue {
    pub fn new(ratio: BigRational, base: LogBase) -> Self {
        debug_assert!(
            ratio >= BigRational::one(),
            "log arguments here are always >= 1"
        );
        LogValue { ratio, base }
    }

    pub fn ratio(&self) -> &BigRational {
        &self.ratio
    }

    pub fn base(&self) -> LogBase {
        self.base
    }

    pub fn is_zero(&self) -> bool {
        self.ratio.is_one()
    }

    /// Presentation value; everything decision-relevant uses `ratio` instead.
    pub fn to_f64(&self) -> f64 {
        let x = big_to_f64(&self.ratio);
        match self.base {
            LogBase::Bits => x.log2(),
            LogBase::Nat => x.ln(),
        }
    }

    /// Whether this quantity is at most `bound` (in the same base), decided
    /// exactly where possible.
    pub fn le_bound(&self, bound: &BigRational) -> bool {
        match self.base {
            LogBase::Bits => log2_le(&self.ratio, bound),
            LogBase::Nat => ln_le(&self.ratio, bound),
        }
    }
}

/// A measure value plus the realization attaining it. The witness is the
/// observed tuple (empty for plain entropy-style counts).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureResult {
    pub value: LogValue,
    pub witness: Vec<Value>,
}

/// log |range(var)|.
pub fn hartley_entropy(space: &SampleSpace, var: &str, base: LogBase) -> Result<MeasureResult> {
    let n = space.range(var)?.len();
    Ok(MeasureResult {
        value: LogValue::new(from_usize(n), base),
        witness: vec![],
    })
}

fn columns<'a>(space: &'a SampleSpace, names: &[&str]) -> Result<Vec<&'a [Value]>> {
    names.iter().map(|n| space.values(n)).collect()
}

/// Worlds grouped by the joint realization of `names`; group keys iterate in
/// canonical order. With `names` empty there is a single group keyed by the
/// empty tuple.
fn group_by(space: &SampleSpace, names: &[&str]) -> Result<BTreeMap<Vec<Value>, Vec<usize>>> {
    let cols = columns(space, names)?;
    let mut groups: BTreeMap<Vec<Value>, Vec<usize>> = BTreeMap::new();
    for w in 0..space.world_count() {
        let key: Vec<Value> = cols.iter().map(|c| c[w].clone()).collect();
        groups.entry(key).or_default().push(w);
    }
    Ok(groups)
}

fn distinct_at(col: &[Value], worlds: &[usize]) -> usize {
    worlds
        .iter()
        .map(|&w| &col[w])
        .collect::<BTreeSet<_>>()
        .len()
}

/// Candidate shaped for deterministic max-reduction: bigger ratio wins, ties
/// go to the canonically smaller witness. Associative and commutative, so the
/// parallel reduction below is schedule-independent.
#[derive(Clone)]
struct Extremum {
    ratio: BigRational,
    witness: Vec<Value>,
}

impl Extremum {
    fn better_of(self, other: Extremum) -> Extremum {
        match self.ratio.cmp(&other.ratio) {
            std::cmp::Ordering::Greater => self,
            std::cmp::Ordering::Less => other,
            std::cmp::Ordering::Equal => {
                if self.witness <= other.witness {
                    self
                } else {
                    other
                }
            }
        }
    }
}

/// max over y of log |range(var given y)|, with the attaining y.
pub fn conditional_entropy(
    space: &SampleSpace,
    var: &str,
    given: &[&str],
    base: LogBase,
) -> Result<MeasureResult> {
    require_given(given)?;
    let col = space.values(var)?;
    let best = group_by(space, given)?
        .into_iter()
        .map(|(y, worlds)| Extremum {
            ratio: from_usize(distinct_at(col, &worlds)),
            witness: y,
        })
        .reduce(Extremum::better_of)
        .expect("spaces are nonempty");
    Ok(MeasureResult {
        value: LogValue::new(best.ratio, base),
        witness: best.witness,
    })
}

/// min over y of log(|range(var)| / |range(var given y)|): what every
/// realization of `given` reveals at least.
pub fn information(
    space: &SampleSpace,
    var: &str,
    given: &[&str],
    base: LogBase,
) -> Result<MeasureResult> {
    // The minimizing y is exactly the maximizer of |range(var given y)|, so
    // the two results share their witness and the identity
    // information = entropy - conditional entropy holds by construction.
    let total = hartley_entropy(space, var, base)?;
    let cond = conditional_entropy(space, var, given, base)?;
    let ratio = total.value.ratio() / cond.value.ratio();
    Ok(MeasureResult {
        value: LogValue::new(ratio, base),
        witness: cond.witness,
    })
}

/// max over y of log(|range(var)| / |range(var given y)|): what the most
/// revealing realization of `given` discloses.
pub fn leakage(
    space: &SampleSpace,
    var: &str,
    given: &[&str],
    base: LogBase,
) -> Result<MeasureResult> {
    require_given(given)?;
    let col = space.values(var)?;
    let total = from_usize(space.range(var)?.len());
    let best = group_by(space, given)?
        .into_iter()
        .map(|(y, worlds)| Extremum {
            ratio: &total / from_usize(distinct_at(col, &worlds)),
            witness: y,
        })
        .reduce(Extremum::better_of)
        .expect("spaces are nonempty");
    Ok(MeasureResult {
        value: LogValue::new(best.ratio, base),
        witness: best.witness,
    })
}

/// max over realized (y, z) of log(|range(var given z)| / |range(var given
/// y, z)|): leakage of `given` about `var` when `cond` is already known. The
/// witness lists the y tuple followed by the z tuple.
///
/// The scan over z-groups runs on the rayon pool; the reduction order cannot
/// change the result.
pub fn conditional_leakage(
    space: &SampleSpace,
    var: &str,
    given: &[&str],
    cond: &[&str],
    base: LogBase,
) -> Result<MeasureResult> {
    require_given(given)?;
    let col = space.values(var)?;
    let given_cols = columns(space, given)?;
    let z_groups: Vec<(Vec<Value>, Vec<usize>)> = group_by(space, cond)?.into_iter().collect();

    let best = z_groups
        .into_par_iter()
        .map(|(z, worlds)| {
            let within = from_usize(distinct_at(col, &worlds));
            // Regroup this z-slice by the observed y.
            let mut by_y: BTreeMap<Vec<Value>, Vec<usize>> = BTreeMap::new();
            for &w in &worlds {
                let y: Vec<Value> = given_cols.iter().map(|c| c[w].clone()).collect();
                by_y.entry(y).or_default().push(w);
            }
            by_y.into_iter()
                .map(|(y, ws)| {
                    let mut witness = y;
                    witness.extend(z.iter().cloned());
                    Extremum {
                        ratio: &within / from_usize(distinct_at(col, &ws)),
                        witness,
                    }
                })
                .reduce(Extremum::better_of)
                .expect("every z group is nonempty")
        })
        .reduce_with(Extremum::better_of)
        .expect("spaces are nonempty");
    Ok(MeasureResult {
        value: LogValue::new(best.ratio, base),
        witness: best.witness,
    })
}

fn require_given(given: &[&str]) -> Result<()> {
    if given.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one observed variable is required".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::parse_rational;

    fn toy() -> SampleSpace {
        // range(X) = {1,2,3,4}; given y1 it is {1,2,3}, given y2 it is {3,4}.
        SampleSpace::from_assignments(
            vec![
                "w1".into(),
                "w2".into(),
                "w3".into(),
                "w4".into(),
                "w5".into(),
            ],
            vec![
                (
                    "X".into(),
                    vec![
                        Value::int(1),
                        Value::int(2),
                        Value::int(3),
                        Value::int(3),
                        Value::int(4),
                    ],
                ),
                (
                    "Y".into(),
                    vec![
                        Value::symbol("y1"),
                        Value::symbol("y1"),
                        Value::symbol("y1"),
                        Value::symbol("y2"),
                        Value::symbol("y2"),
                    ],
                ),
            ],
        )
        .unwrap()
    }

    #[test]
    fn hand_checked_fixture() {
        let s = toy();
        let h = hartley_entropy(&s, "X", LogBase::Bits).unwrap();
        assert_eq!(h.value.ratio(), &from_usize(4));

        let hc = conditional_entropy(&s, "X", &["Y"], LogBase::Bits).unwrap();
        assert_eq!(hc.value.ratio(), &from_usize(3));
        assert_eq!(hc.witness, vec![Value::symbol("y1")]);

        let i = information(&s, "X", &["Y"], LogBase::Bits).unwrap();
        assert_eq!(i.value.ratio(), &parse_rational("4/3").unwrap());
        assert_eq!(i.witness, vec![Value::symbol("y1")]);

        let l = leakage(&s, "X", &["Y"], LogBase::Bits).unwrap();
        assert_eq!(l.value.ratio(), &from_usize(2));
        assert_eq!(l.witness, vec![Value::symbol("y2")]);
        assert!((l.value.to_f64() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn leakage_is_asymmetric() {
        // X determines Y here only partially: observing X=4 pins Y down to y2,
        // while observing Y=y2 halves X's range twice over.
        let s = SampleSpace::from_assignments(
            vec!["w1".into(), "w2".into(), "w3".into(), "w4".into()],
            vec![
                (
                    "X".into(),
                    vec![Value::int(1), Value::int(2), Value::int(3), Value::int(4)],
                ),
                (
                    "Y".into(),
                    vec![
                        Value::symbol("a"),
                        Value::symbol("a"),
                        Value::symbol("a"),
                        Value::symbol("b"),
                    ],
                ),
            ],
        )
        .unwrap();
        let xy = leakage(&s, "X", &["Y"], LogBase::Bits).unwrap();
        let yx = leakage(&s, "Y", &["X"], LogBase::Bits).unwrap();
        assert_eq!(xy.value.ratio(), &from_usize(4)); // log2 4 = 2 bits
        assert_eq!(yx.value.ratio(), &from_usize(2)); // log2 2 = 1 bit
    }

    #[test]
    fn information_never_exceeds_leakage_and_identity_holds() {
        let s = toy();
        let h = hartley_entropy(&s, "X", LogBase::Bits).unwrap();
        let hc = conditional_entropy(&s, "X", &["Y"], LogBase::Bits).unwrap();
        let i = information(&s, "X", &["Y"], LogBase::Bits).unwrap();
        let l = leakage(&s, "X", &["Y"], LogBase::Bits).unwrap();
        assert!(i.value.ratio() <= l.value.ratio());
        assert!(i.value.ratio() >= &BigRational::one());
        assert_eq!(i.value.ratio() * hc.value.ratio(), h.value.ratio().clone());
    }

    #[test]
    fn conditional_leakage_with_side_information() {
        // Given Z, learning Y refines X only within the z-slice.
        let s = SampleSpace::from_assignments(
            (1..=6).map(|i| format!("w{i}")).collect(),
            vec![
                (
                    "X".into(),
                    vec![1, 2, 3, 4, 5, 6].into_iter().map(Value::int).collect(),
                ),
                (
                    "Y".into(),
                    ["u", "u", "v", "u", "v", "v"].map(Value::symbol).to_vec(),
                ),
                (
                    "Z".into(),
                    ["p", "p", "p", "q", "q", "q"].map(Value::symbol).to_vec(),
                ),
            ],
        )
        .unwrap();
        let l = conditional_leakage(&s, "X", &["Y"], &["Z"], LogBase::Bits).unwrap();
        // Every z-slice has |range(X|z)| = 3; the best (y, z) pins X to one
        // value, ratio 3. Both (v, p) and (u, q) attain it; the tie resolves
        // to the smaller witness tuple (u, q).
        assert_eq!(l.value.ratio(), &from_usize(3));
        assert_eq!(l.witness, vec![Value::symbol("u"), Value::symbol("q")]);
    }

    #[test]
    fn unconditional_leakage_zero_iff_unrelated() {
        let product = SampleSpace::from_assignments(
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            vec![
                (
                    "U".into(),
                    vec![Value::int(0), Value::int(0), Value::int(1), Value::int(1)],
                ),
                (
                    "V".into(),
                    vec![Value::int(0), Value::int(1), Value::int(0), Value::int(1)],
                ),
            ],
        )
        .unwrap();
        assert!(leakage(&product, "U", &["V"], LogBase::Bits)
            .unwrap()
            .value
            .is_zero());
        assert!(product.check_unrelated(&["U", "V"], None).unwrap());

        let s = toy();
        assert!(!leakage(&s, "X", &["Y"], LogBase::Bits)
            .unwrap()
            .value
            .is_zero());
        assert!(!s.check_unrelated(&["X", "Y"], None).unwrap());
    }

    #[test]
    fn nat_base_changes_presentation_only() {
        let s = toy();
        let bits = leakage(&s, "X", &["Y"], LogBase::Bits).unwrap();
        let nats = leakage(&s, "X", &["Y"], LogBase::Nat).unwrap();
        assert_eq!(bits.value.ratio(), nats.value.ratio());
        assert!((nats.value.to_f64() - 2f64.ln()).abs() < 1e-12);
    }
}
