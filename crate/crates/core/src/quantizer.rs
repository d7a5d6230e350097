//! Budget-driven release of numeric queries through linear quantization.
//!
//! Coarsening a scalar query to q equal cells caps every conditional range
//! at q values, so each party's conditional leakage is at most log(q): pick
//! q from the budget and the release is certified by construction, then
//! measured anyway. With a Lipschitz constant L for the query and party
//! inputs confined to [x_min, x_max], the midpoint release is off by at most
//! beta = L (x_max - x_min) / q, which ties accuracy and budget together:
//! beta e^gamma stays at or above L (x_max - x_min) no matter the budget.

use std::collections::BTreeMap;

use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::measures::{LogBase, LogValue};
use crate::privacy::{fresh_name, PartyLeakage};
use crate::query::QueryFunction;
use crate::rational::{big_to_f64, from_usize, render_rational};
use crate::space::SampleSpace;
use crate::value::Value;

/// q equal half-open cells over [x_min, x_max], the last cell closed. In
/// midpoint mode a cell releases its midpoint; otherwise an opaque label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearQuantizer {
    q: u64,
    x_min: BigRational,
    x_max: BigRational,
    midpoint: bool,
}

impl LinearQuantizer {
    /// `x_min == x_max` is allowed only for a single-cell quantizer, which
    /// then releases that one point.
    pub fn new(q: u64, x_min: BigRational, x_max: BigRational, midpoint: bool) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidArgument(
                "a quantizer needs at least one cell".into(),
            ));
        }
        if x_min > x_max || (x_min == x_max && q != 1) {
            return Err(Error::InvalidArgument(format!(
                "invalid quantizer domain [{}, {}] for {q} cells",
                render_rational(&x_min),
                render_rational(&x_max)
            )));
        }
        Ok(LinearQuantizer {
            q,
            x_min,
            x_max,
            midpoint,
        })
    }

    pub fn levels(&self) -> u64 {
        self.q
    }

    pub fn bounds(&self) -> (&BigRational, &BigRational) {
        (&self.x_min, &self.x_max)
    }

    pub fn is_midpoint(&self) -> bool {
        self.midpoint
    }

    pub fn cell_width(&self) -> BigRational {
        (&self.x_max - &self.x_min) / from_usize(self.q as usize)
    }

    /// The q+1 cell edges, x_min through x_max.
    pub fn breakpoints(&self) -> Vec<BigRational> {
        let w = self.cell_width();
        (0..=self.q)
            .map(|i| &self.x_min + &w * from_usize(i as usize))
            .collect()
    }

    /// 0-based cell of x; x_max folds into the last cell.
    pub fn cell_index(&self, x: &BigRational) -> Result<u64> {
        if x < &self.x_min || x > &self.x_max {
            return Err(Error::OutOfDomain {
                value: render_rational(x),
                lo: render_rational(&self.x_min),
                hi: render_rational(&self.x_max),
            });
        }
        if self.x_min == self.x_max {
            return Ok(0);
        }
        let scaled = (x - &self.x_min) * from_usize(self.q as usize) / (&self.x_max - &self.x_min);
        let k = scaled
            .floor()
            .to_integer()
            .to_u64()
            .expect("0 <= k <= q fits");
        Ok(k.min(self.q - 1))
    }

    /// The released value of the 0-based cell k.
    pub fn level_value(&self, k: u64) -> Value {
        debug_assert!(k < self.q);
        if self.midpoint {
            let w = self.cell_width();
            let lo = &self.x_min + &w * from_usize(k as usize);
            let half = BigRational::new(1.into(), 2.into());
            Value::scalar(lo + w * half)
        } else {
            Value::symbol(format!("b{}", k + 1))
        }
    }

    pub fn quantize(&self, x: &BigRational) -> Result<Value> {
        Ok(self.level_value(self.cell_index(x)?))
    }
}

/// How a leakage budget translates into a cell count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LevelMode {
    /// q = floor(2^gamma), certified in bits. The default.
    Bits,
    /// q = floor(e^gamma - 1), certified in nats; infeasible below ln 2.
    Exp,
}

impl LevelMode {
    pub fn label(self) -> &'static str {
        match self {
            LevelMode::Bits => "bits",
            LevelMode::Exp => "exp",
        }
    }

    pub fn cert_base(self) -> LogBase {
        match self {
            LevelMode::Bits => LogBase::Bits,
            LevelMode::Exp => LogBase::Nat,
        }
    }

    /// The largest certified cell count for a budget. Exact for integer bit
    /// budgets; fractional exponents cannot tie on integers, so the f64
    /// rounding there is harmless.
    pub fn levels_for(self, gamma: &BigRational) -> Result<u64> {
        if gamma.is_negative() {
            return Err(Error::InvalidArgument(format!(
                "a privacy budget must be nonnegative, got {}",
                render_rational(gamma)
            )));
        }
        let too_large = || {
            Error::InvalidArgument(format!(
                "budget {} requests more cells than are representable",
                render_rational(gamma)
            ))
        };
        match self {
            LevelMode::Bits => {
                if gamma.denom().is_one() {
                    let p = gamma.numer().to_u32().ok_or_else(too_large)?;
                    if p >= 64 {
                        return Err(too_large());
                    }
                    Ok(1u64 << p)
                } else {
                    let q = big_to_f64(gamma).exp2().floor();
                    if q > u64::MAX as f64 {
                        return Err(too_large());
                    }
                    Ok(q as u64)
                }
            }
            LevelMode::Exp => {
                let q = (big_to_f64(gamma).exp() - 1.0).floor();
                if q > u64::MAX as f64 {
                    return Err(too_large());
                }
                if q < 1.0 {
                    return Err(Error::BudgetTooSmall {
                        gamma: render_rational(gamma),
                        min_gamma: "ln 2 (about 0.693148) nats".into(),
                    });
                }
                Ok(q as u64)
            }
        }
    }
}

/// A synthesized release: the quantized query on every world, the lookup
/// table over party tuples, and the certificate tying budget, accuracy and
/// measured leakage together.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mechanism {
    pub quantizer: LinearQuantizer,
    pub released: Vec<Value>,
    pub table: BTreeMap<Vec<Value>, Value>,
    pub certificate: MechanismCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MechanismCertificate {
    pub gamma: BigRational,
    pub level_mode: LevelMode,
    /// Base the budget and leakages are stated in; fixed by the level mode.
    pub base: LogBase,
    pub levels: u64,
    pub lipschitz: Option<BigRational>,
    /// Envelope of all party coordinates, when every party is numeric.
    pub input_bounds: Option<(BigRational, BigRational)>,
    /// Envelope of the query's realized values.
    pub output_bounds: (BigRational, BigRational),
    /// L (x_max - x_min) / q, when a Lipschitz constant and input bounds
    /// exist. The worst-case accuracy promise.
    pub beta_bound: Option<BigRational>,
    /// Exact largest |query - release| over the realized worlds.
    pub measured_error: BigRational,
    pub per_party: Vec<PartyLeakage>,
    pub within_budget: bool,
}

impl MechanismCertificate {
    pub fn max_leakage(&self) -> &LogValue {
        &self
            .per_party
            .iter()
            .max_by(|x, y| {
                x.measure
                    .value
                    .ratio()
                    .cmp(y.measure.value.ratio())
                    .then(std::cmp::Ordering::Greater)
            })
            .expect("at least two parties")
            .measure
            .value
    }
}

fn scalar_outputs(space: &SampleSpace, query: &QueryFunction) -> Result<Vec<BigRational>> {
    let columns: Vec<&[Value]> = query
        .inputs()
        .iter()
        .map(|n| space.values(n))
        .collect::<Result<_>>()?;
    (0..space.world_count())
        .map(|w| {
            let args: Vec<Value> = columns.iter().map(|c| c[w].clone()).collect();
            match query.eval(&args)? {
                Value::Reals(v) if v.len() == 1 => Ok(v.into_iter().next().expect("len 1")),
                Value::Reals(v) => Err(Error::DimensionMismatch(format!(
                    "quantization needs scalar query outputs, got numeric[{}]",
                    v.len()
                ))),
                Value::Symbol(_) => Err(Error::MissingBounds(
                    "symbolic query outputs have no numeric range to quantize".into(),
                )),
            }
        })
        .collect()
}

/// All rational coordinates appearing in any party's values, when every
/// party is numeric.
fn party_envelope(
    space: &SampleSpace,
    parties: &[&str],
) -> Result<Option<(BigRational, BigRational)>> {
    let mut lo: Option<BigRational> = None;
    let mut hi: Option<BigRational> = None;
    for p in parties {
        for v in space.values(p)? {
            let Some(coords) = v.as_reals() else {
                return Ok(None);
            };
            for c in coords {
                lo = Some(lo.map_or(c.clone(), |x| x.min(c.clone())));
                hi = Some(hi.map_or(c.clone(), |x| x.max(c.clone())));
            }
        }
    }
    Ok(lo.zip(hi))
}

/// Builds the certified release of `query` under `gamma`: quantize the
/// query's realized range into the budget's cell count and release cell
/// midpoints. A constant query short-circuits to the exact single-point
/// release, which is private under any budget.
pub fn synthesize_mechanism(
    space: &SampleSpace,
    query: &QueryFunction,
    parties: &[&str],
    gamma: &BigRational,
    mode: LevelMode,
) -> Result<Mechanism> {
    if parties.len() < 2 {
        return Err(Error::InvalidArgument(
            "mechanisms need at least two parties".into(),
        ));
    }
    for p in parties {
        space.values(p)?;
    }
    if gamma.is_negative() {
        return Err(Error::InvalidArgument(format!(
            "a privacy budget must be nonnegative, got {}",
            render_rational(gamma)
        )));
    }
    let outputs = scalar_outputs(space, query)?;
    let y_min = outputs.iter().min().expect("spaces are nonempty").clone();
    let y_max = outputs.iter().max().expect("spaces are nonempty").clone();

    let q = if y_min == y_max {
        1
    } else {
        mode.levels_for(gamma)?
    };
    let quantizer = LinearQuantizer::new(q, y_min.clone(), y_max.clone(), true)?;

    let released: Vec<Value> = outputs
        .iter()
        .map(|y| quantizer.quantize(y))
        .collect::<Result<_>>()?;

    let party_cols: Vec<&[Value]> = parties
        .iter()
        .map(|p| space.values(p))
        .collect::<Result<_>>()?;
    let mut table: BTreeMap<Vec<Value>, Value> = BTreeMap::new();
    for w in 0..space.world_count() {
        let key: Vec<Value> = party_cols.iter().map(|c| c[w].clone()).collect();
        table.insert(key, released[w].clone());
    }

    let name = fresh_name(space, "__released");
    let scratch = space.with_variable(&name, released.clone())?;
    let base = mode.cert_base();
    let per_party: Vec<PartyLeakage> = parties
        .iter()
        .enumerate()
        .map(|(i, &me)| {
            let others: Vec<&str> = parties
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, p)| *p)
                .collect();
            let measure =
                crate::measures::conditional_leakage(&scratch, &name, &others, &[me], base)?;
            Ok(PartyLeakage {
                party: me.to_string(),
                measure,
            })
        })
        .collect::<Result<_>>()?;
    let within_budget = per_party.iter().all(|p| p.measure.value.le_bound(gamma));

    let lipschitz = query.lipschitz();
    let input_bounds = party_envelope(space, parties)?;
    let beta_bound = match (&lipschitz, &input_bounds) {
        (Some(l), Some((lo, hi))) => Some(l * (hi - lo) / from_usize(q as usize)),
        _ => None,
    };
    let measured_error = outputs
        .iter()
        .zip(&released)
        .map(|(y, r)| (y - r.as_scalar().expect("midpoint releases are scalars")).abs())
        .max()
        .expect("spaces are nonempty");

    let certificate = MechanismCertificate {
        gamma: gamma.clone(),
        level_mode: mode,
        base,
        levels: q,
        lipschitz,
        input_bounds,
        output_bounds: (y_min, y_max),
        beta_bound,
        measured_error,
        per_party,
        within_budget,
    };
    Ok(Mechanism {
        quantizer,
        released,
        table,
        certificate,
    })
}

/// Direct check of the structural leakage cap: every conditional range of
/// the released variable, given any single party's value, holds at most
/// epsilon + 1 values. When it holds, every party's conditional leakage is
/// at most log2(epsilon + 1) bits, which is measured and compared too.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelBoundReport {
    pub epsilon: BigRational,
    pub holds: bool,
    pub max_conditional_range: usize,
    /// (party, value) attaining the largest conditional range.
    pub witness: (String, Value),
    /// epsilon + 1: the ratio form of the implied log2(1 + epsilon) budget.
    pub implied_ratio: BigRational,
    pub per_party: Vec<PartyLeakage>,
    pub leakage_within_implied: bool,
}

pub fn certify_level_bound(
    space: &SampleSpace,
    released: &str,
    parties: &[&str],
    epsilon: &BigRational,
) -> Result<LevelBoundReport> {
    if parties.len() < 2 {
        return Err(Error::InvalidArgument(
            "the level bound concerns at least two parties".into(),
        ));
    }
    if epsilon.is_negative() {
        return Err(Error::InvalidArgument("epsilon must be nonnegative".into()));
    }
    let released_col = space.values(released)?;
    let mut max_size = 0usize;
    let mut witness: Option<(String, Value)> = None;
    for p in parties {
        let col = space.values(p)?;
        let mut by_value: BTreeMap<&Value, std::collections::BTreeSet<&Value>> = BTreeMap::new();
        for w in 0..space.world_count() {
            by_value
                .entry(&col[w])
                .or_default()
                .insert(&released_col[w]);
        }
        for (v, range) in by_value {
            if range.len() > max_size {
                max_size = range.len();
                witness = Some((p.to_string(), v.clone()));
            }
        }
    }
    let implied_ratio = epsilon + BigRational::one();
    let holds = from_usize(max_size) <= implied_ratio;

    let per_party: Vec<PartyLeakage> = parties
        .iter()
        .enumerate()
        .map(|(i, &me)| {
            let others: Vec<&str> = parties
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, p)| *p)
                .collect();
            let measure = crate::measures::conditional_leakage(
                space,
                released,
                &others,
                &[me],
                LogBase::Bits,
            )?;
            Ok(PartyLeakage {
                party: me.to_string(),
                measure,
            })
        })
        .collect::<Result<_>>()?;
    let leakage_within_implied = per_party
        .iter()
        .all(|p| p.measure.value.ratio() <= &implied_ratio);

    Ok(LevelBoundReport {
        epsilon: epsilon.clone(),
        holds,
        max_conditional_range: max_size,
        witness: witness.expect("parties and worlds are nonempty"),
        implied_ratio,
        per_party,
        leakage_within_implied,
    })
}

/// One budget's row in a sweep: either a synthesized mechanism summary or
/// the reason none exists at that budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrontierRow {
    pub gamma: BigRational,
    pub outcome: std::result::Result<FrontierEntry, String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrontierEntry {
    pub levels: u64,
    pub beta_bound: Option<BigRational>,
    pub measured_error: BigRational,
    pub max_leakage: LogValue,
    /// beta * e^gamma >= L (x_max - x_min); None without an accuracy bound.
    pub tradeoff_holds: Option<bool>,
}

/// Sweeps strictly ascending budgets, reporting accuracy against leakage.
/// Budgets too small for any mechanism produce error rows rather than
/// failing the sweep.
pub fn tradeoff_frontier(
    space: &SampleSpace,
    query: &QueryFunction,
    parties: &[&str],
    gammas: &[BigRational],
    mode: LevelMode,
) -> Result<Vec<FrontierRow>> {
    if gammas.is_empty() {
        return Err(Error::InvalidArgument(
            "the frontier needs at least one budget".into(),
        ));
    }
    if gammas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "budgets must be strictly ascending".into(),
        ));
    }
    gammas
        .iter()
        .map(|gamma| {
            let outcome = match synthesize_mechanism(space, query, parties, gamma, mode) {
                Ok(m) => {
                    let c = &m.certificate;
                    let tradeoff_holds = c.beta_bound.as_ref().map(|beta| {
                        let (lo, hi) = c.input_bounds.as_ref().expect("bound implies envelope");
                        let target =
                            c.lipschitz.as_ref().expect("bound implies constant") * (hi - lo);
                        if target.is_zero() {
                            true
                        } else {
                            // beta e^gamma >= target, with the rational part
                            // target / beta = q carried exactly; e^gamma is
                            // irrational for gamma > 0, so no f64 ties.
                            big_to_f64(gamma).exp() >= big_to_f64(&(target / beta))
                        }
                    });
                    Ok(FrontierEntry {
                        levels: c.levels,
                        beta_bound: c.beta_bound.clone(),
                        measured_error: c.measured_error.clone(),
                        max_leakage: c.max_leakage().clone(),
                        tradeoff_holds,
                    })
                }
                Err(e @ Error::BudgetTooSmall { .. }) => Err(e.to_string()),
                Err(e) => return Err(e),
            };
            Ok(FrontierRow {
                gamma: gamma.clone(),
                outcome,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::query::Builtin;
    use crate::rational::parse_rational;

    fn rat(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn quantize_midpoints_and_edges() {
        // Four cells over [0, 1]: widths 1/4, midpoints 1/8, 3/8, 5/8, 7/8.
        let m = LinearQuantizer::new(4, rat("0"), rat("1"), true).unwrap();
        assert_eq!(m.quantize(&rat("3/10")).unwrap(), Value::scalar(rat("3/8")));
        // Interior edges belong to the right cell, x_max to the last.
        assert_eq!(m.quantize(&rat("1/4")).unwrap(), Value::scalar(rat("3/8")));
        assert_eq!(m.quantize(&rat("0")).unwrap(), Value::scalar(rat("1/8")));
        assert_eq!(m.quantize(&rat("1")).unwrap(), Value::scalar(rat("7/8")));
        assert!(matches!(
            m.quantize(&rat("2")),
            Err(Error::OutOfDomain { .. })
        ));
        assert_eq!(
            m.breakpoints(),
            ["0", "1/4", "1/2", "3/4", "1"].map(rat).to_vec()
        );

        let labels = LinearQuantizer::new(2, rat("0"), rat("1"), false).unwrap();
        assert_eq!(labels.quantize(&rat("1/4")).unwrap(), Value::symbol("b1"));
        assert_eq!(labels.quantize(&rat("3/4")).unwrap(), Value::symbol("b2"));
    }

    #[test]
    fn quantization_is_monotone() {
        let m = LinearQuantizer::new(7, rat("-2"), rat("5"), true).unwrap();
        let samples: Vec<BigRational> = (0..=70usize)
            .map(|i| rat("-2") + rat("1/10") * from_usize(i))
            .collect();
        let mut last = m.cell_index(&samples[0]).unwrap();
        for x in &samples {
            let k = m.cell_index(x).unwrap();
            assert!(k >= last, "cell index must not decrease");
            last = k;
        }
    }

    #[test]
    fn level_counts_per_mode() {
        // floor(e^2 - 1) = floor(6.389) = 6; floor(2^2) = 4.
        assert_eq!(LevelMode::Exp.levels_for(&rat("2")).unwrap(), 6);
        assert_eq!(LevelMode::Bits.levels_for(&rat("2")).unwrap(), 4);
        assert_eq!(LevelMode::Bits.levels_for(&rat("0")).unwrap(), 1);
        assert_eq!(LevelMode::Bits.levels_for(&rat("3/2")).unwrap(), 2);
        assert!(matches!(
            LevelMode::Exp.levels_for(&rat("1/2")),
            Err(Error::BudgetTooSmall { .. })
        ));
        assert!(LevelMode::Bits.levels_for(&rat("-1")).is_err());
    }

    fn grid() -> SampleSpace {
        // Two numeric parties on {0, 1/2, 1}, full product: 9 worlds.
        let mut worlds = Vec::new();
        let mut p1 = Vec::new();
        let mut p2 = Vec::new();
        for a in 0..3usize {
            for b in 0..3usize {
                worlds.push(format!("w{a}{b}"));
                p1.push(Value::scalar(rat("1/2") * from_usize(a)));
                p2.push(Value::scalar(rat("1/2") * from_usize(b)));
            }
        }
        SampleSpace::from_assignments(worlds, vec![("P1".into(), p1), ("P2".into(), p2)]).unwrap()
    }

    #[test]
    fn synthesized_mean_release_is_certified_and_accurate() {
        let s = grid();
        let f = QueryFunction::builtin(Builtin::Mean, vec!["P1".into(), "P2".into()]).unwrap();
        let m = synthesize_mechanism(&s, &f, &["P1", "P2"], &rat("2"), LevelMode::Bits).unwrap();
        let c = &m.certificate;
        assert_eq!(c.levels, 4);
        assert_eq!(c.output_bounds, (rat("0"), rat("1")));
        assert_eq!(c.input_bounds, Some((rat("0"), rat("1"))));
        // L = 1, envelope 1, q = 4.
        assert_eq!(c.beta_bound, Some(rat("1/4")));
        assert!(
            c.measured_error <= rat("1/8"),
            "midpoints halve the cell width"
        );
        assert!(c.within_budget);
        assert!(c.max_leakage().le_bound(&rat("2")));

        // The released range has at most q values.
        let distinct: std::collections::BTreeSet<&Value> = m.released.iter().collect();
        assert!(distinct.len() <= 4);
    }

    #[test]
    fn constant_queries_release_exactly_under_any_budget() {
        let s = grid();
        let f = QueryFunction::builtin(
            Builtin::Weighted(vec![BigRational::zero(), BigRational::zero()]),
            vec!["P1".into(), "P2".into()],
        )
        .unwrap();
        let m = synthesize_mechanism(&s, &f, &["P1", "P2"], &rat("0"), LevelMode::Exp).unwrap();
        assert_eq!(m.certificate.levels, 1);
        assert!(m.certificate.measured_error.is_zero());
        assert!(m.certificate.within_budget);
    }

    #[test]
    fn level_bound_certificate() {
        let s = grid();
        let f = QueryFunction::builtin(Builtin::Mean, vec!["P1".into(), "P2".into()]).unwrap();
        let m = synthesize_mechanism(&s, &f, &["P1", "P2"], &rat("2"), LevelMode::Bits).unwrap();
        let scratch = s.with_variable("R", m.released.clone()).unwrap();
        // Fixing one party, the mean still moves through at most 3 of the 4
        // cells here; epsilon = 3 must hold comfortably.
        let r = certify_level_bound(&scratch, "R", &["P1", "P2"], &rat("3")).unwrap();
        assert!(r.holds);
        assert!(r.max_conditional_range <= 4);
        assert!(r.leakage_within_implied);
        let r = certify_level_bound(&scratch, "R", &["P1", "P2"], &rat("0")).unwrap();
        assert!(
            !r.holds,
            "a zero-epsilon bound demands constant conditionals"
        );
    }

    #[test]
    fn frontier_rows_and_validation() {
        let s = grid();
        let f = QueryFunction::builtin(Builtin::Mean, vec!["P1".into(), "P2".into()]).unwrap();
        let gammas = vec![rat("1/2"), rat("1"), rat("2")];
        let rows = tradeoff_frontier(&s, &f, &["P1", "P2"], &gammas, LevelMode::Exp).unwrap();
        assert_eq!(rows.len(), 3);
        // ln 2 > 1/2: the first budget cannot host any cell.
        assert!(rows[0].outcome.is_err());
        let entry = rows[1].outcome.as_ref().unwrap();
        assert_eq!(entry.levels, 1); // floor(e - 1) = 1
        assert_eq!(entry.tradeoff_holds, Some(true));
        let entry = rows[2].outcome.as_ref().unwrap();
        assert_eq!(entry.levels, 6);
        assert_eq!(entry.tradeoff_holds, Some(true));
        let better = &rows[2];
        let worse = &rows[1];
        assert!(
            better.outcome.as_ref().unwrap().measured_error
                <= worse.outcome.as_ref().unwrap().measured_error,
            "larger budgets cannot hurt accuracy"
        );

        assert!(tradeoff_frontier(&s, &f, &["P1", "P2"], &[], LevelMode::Bits).is_err());
        assert!(tradeoff_frontier(
            &s,
            &f,
            &["P1", "P2"],
            &[rat("2"), rat("1")],
            LevelMode::Bits
        )
        .is_err());
    }
}
