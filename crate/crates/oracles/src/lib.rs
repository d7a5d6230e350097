//! Brute-force reference implementations used to cross-check the main
//! library in tests. Everything here favors the most literal reading of a
//! definition over speed: ranges are counted with linear-scan deduping,
//! partitions are merged to a fixed point instead of with union-find, and
//! enclosing balls come from exhaustive support-subset enumeration. None of
//! this shares algorithmic structure with the production code, which is the
//! point.

use std::collections::BTreeSet;

use num::rational::BigRational;
use num::{BigInt, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nspfe_core::{SampleSpace, Value};

/// Shape of a reproducible random test space. Bounds are kept small enough
/// that thousands of spaces stay cheap while still covering ties, constant
/// variables and full-product shapes.
#[derive(Clone, Copy, Debug)]
pub struct RandomSpaceSpec {
    pub seed: u64,
    pub worlds: usize,
    pub variables: usize,
    pub alphabet: usize,
    pub numeric: bool,
}

impl RandomSpaceSpec {
    /// Draws the shape itself from the seed, so a single counter enumerates
    /// varied fixtures.
    pub fn sample(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
        RandomSpaceSpec {
            seed,
            worlds: rng.gen_range(2..=12),
            variables: rng.gen_range(2..=4),
            alphabet: rng.gen_range(2..=6),
            numeric: rng.gen_bool(0.5),
        }
    }

    /// Variables are named V1..Vk over worlds w1..wn; values are drawn
    /// uniformly from the alphabet, numeric or symbolic.
    pub fn generate(&self) -> SampleSpace {
        assert!(self.worlds >= 1 && self.worlds <= 12, "world bound");
        assert!(self.variables >= 1 && self.variables <= 4, "variable bound");
        assert!(self.alphabet >= 1 && self.alphabet <= 6, "alphabet bound");
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let worlds: Vec<String> = (1..=self.worlds).map(|i| format!("w{i}")).collect();
        let mut space = SampleSpace::new(worlds).expect("worlds are distinct and nonempty");
        let symbols = ["a", "b", "c", "d", "e", "f"];
        for v in 1..=self.variables {
            let column: Vec<Value> = (0..self.worlds)
                .map(|_| {
                    let k = rng.gen_range(0..self.alphabet);
                    if self.numeric {
                        Value::int(k as i64)
                    } else {
                        Value::symbol(symbols[k])
                    }
                })
                .collect();
            space = space
                .with_variable(&format!("V{v}"), column)
                .expect("fresh name, full column");
        }
        space
    }

    /// The variable names `generate` produces, in order.
    pub fn variable_names(&self) -> Vec<String> {
        (1..=self.variables).map(|v| format!("V{v}")).collect()
    }
}

fn column<'a>(space: &'a SampleSpace, name: &str) -> &'a [Value] {
    space
        .values(name)
        .expect("oracle callers pass existing variables")
}

fn tuple_at(space: &SampleSpace, names: &[&str], world: usize) -> Vec<Value> {
    names
        .iter()
        .map(|n| column(space, n)[world].clone())
        .collect()
}

/// Distinct count by linear scan, on purpose: no sets, no sorting.
fn count_distinct(items: &[Vec<Value>]) -> usize {
    let mut seen: Vec<&Vec<Value>> = Vec::new();
    for it in items {
        if !seen.contains(&it) {
            seen.push(it);
        }
    }
    seen.len()
}

fn distinct_tuples(space: &SampleSpace, names: &[&str], worlds: &[usize]) -> Vec<Vec<Value>> {
    let mut seen: Vec<Vec<Value>> = Vec::new();
    for &w in worlds {
        let t = tuple_at(space, names, w);
        if !seen.contains(&t) {
            seen.push(t);
        }
    }
    seen
}

fn all_worlds(space: &SampleSpace) -> Vec<usize> {
    (0..space.world_count()).collect()
}

fn worlds_where(
    space: &SampleSpace,
    names: &[&str],
    tuple: &[Value],
    within: &[usize],
) -> Vec<usize> {
    within
        .iter()
        .copied()
        .filter(|&w| {
            names
                .iter()
                .zip(tuple)
                .all(|(n, v)| &column(space, n)[w] == v)
        })
        .collect()
}

fn ratio_from(n: usize, d: usize) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// |range(var)| as the exact ratio behind the log.
pub fn oracle_entropy_ratio(space: &SampleSpace, var: &str) -> BigRational {
    let values: Vec<Vec<Value>> = column(space, var).iter().map(|v| vec![v.clone()]).collect();
    ratio_from(count_distinct(&values), 1)
}

/// max over realized y of |range(var given y)|.
pub fn oracle_conditional_entropy_ratio(
    space: &SampleSpace,
    var: &str,
    given: &[&str],
) -> BigRational {
    let everything = all_worlds(space);
    let mut worst = 0usize;
    for y in distinct_tuples(space, given, &everything) {
        let worlds = worlds_where(space, given, &y, &everything);
        let seen = distinct_tuples(space, &[var], &worlds);
        worst = worst.max(seen.len());
    }
    ratio_from(worst, 1)
}

/// |range(var)| / max_y |range(var given y)|.
pub fn oracle_information_ratio(space: &SampleSpace, var: &str, given: &[&str]) -> BigRational {
    oracle_entropy_ratio(space, var) / oracle_conditional_entropy_ratio(space, var, given)
}

/// max over realized y of |range(var)| / |range(var given y)|.
pub fn oracle_leakage_ratio(space: &SampleSpace, var: &str, given: &[&str]) -> BigRational {
    let everything = all_worlds(space);
    let total = oracle_entropy_ratio(space, var);
    let mut best: Option<BigRational> = None;
    for y in distinct_tuples(space, given, &everything) {
        let worlds = worlds_where(space, given, &y, &everything);
        let seen = distinct_tuples(space, &[var], &worlds);
        let here = &total / ratio_from(seen.len(), 1);
        if best.as_ref().is_none_or(|b| &here > b) {
            best = Some(here);
        }
    }
    best.expect("spaces are nonempty")
}

/// max over realized (y, z) of |range(var given z)| / |range(var given y, z)|.
pub fn oracle_conditional_leakage_ratio(
    space: &SampleSpace,
    var: &str,
    given: &[&str],
    cond: &[&str],
) -> BigRational {
    let everything = all_worlds(space);
    let mut best: Option<BigRational> = None;
    for z in distinct_tuples(space, cond, &everything) {
        let slice = worlds_where(space, cond, &z, &everything);
        let within = distinct_tuples(space, &[var], &slice).len();
        for y in distinct_tuples(space, given, &slice) {
            let fixed = worlds_where(space, given, &y, &slice);
            let narrowed = distinct_tuples(space, &[var], &fixed).len();
            let here = ratio_from(within, narrowed);
            if best.as_ref().is_none_or(|b| &here > b) {
                best = Some(here);
            }
        }
    }
    best.expect("spaces are nonempty")
}

/// Transitive closure of a reflexive, symmetric relation over n items,
/// computed with the Floyd-Warshall triple loop on a boolean matrix. The
/// equivalence classes come back as index lists, ordered by first member.
fn warshall_classes(n: usize, mut related: Vec<Vec<bool>>) -> Vec<Vec<usize>> {
    for k in 0..n {
        for i in 0..n {
            if related[i][k] {
                // Reads row k while writing row i; indices keep that explicit.
                #[allow(clippy::needless_range_loop)]
                for j in 0..n {
                    if related[k][j] {
                        related[i][j] = true;
                    }
                }
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut placed = vec![false; n];
    for i in 0..n {
        if placed[i] {
            continue;
        }
        let members: Vec<usize> = (i..n).filter(|&j| related[i][j]).collect();
        for &m in &members {
            placed[m] = true;
        }
        classes.push(members);
    }
    classes
}

/// Cells of the overlap partition of range(var): two values relate when
/// some conditional range given `given` contains both, closed transitively
/// at the level of value pairs.
pub fn oracle_overlap_cells(
    space: &SampleSpace,
    var: &str,
    given: &[&str],
) -> Vec<BTreeSet<Value>> {
    let everything = all_worlds(space);
    let values: Vec<Vec<Value>> = distinct_tuples(space, &[var], &everything);
    let n = values.len();
    let mut related = vec![vec![false; n]; n];
    for y in distinct_tuples(space, given, &everything) {
        let worlds = worlds_where(space, given, &y, &everything);
        let range = distinct_tuples(space, &[var], &worlds);
        for a in &range {
            for b in &range {
                let i = values.iter().position(|v| v == a).expect("a is realized");
                let j = values.iter().position(|v| v == b).expect("b is realized");
                related[i][j] = true;
            }
        }
    }
    let mut cells: Vec<BTreeSet<Value>> = warshall_classes(n, related)
        .into_iter()
        .map(|class| class.into_iter().map(|i| values[i][0].clone()).collect())
        .collect();
    cells.sort();
    cells
}

/// Cells of the taxicab partition of the realized (a, b) pairs: two pairs
/// relate when they agree in either coordinate, closed transitively.
pub fn oracle_taxicab_cells(space: &SampleSpace, a: &str, b: &str) -> Vec<BTreeSet<Vec<Value>>> {
    let everything = all_worlds(space);
    let tuples = distinct_tuples(space, &[a, b], &everything);
    let n = tuples.len();
    let mut related = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            if tuples[i][0] == tuples[j][0] || tuples[i][1] == tuples[j][1] {
                related[i][j] = true;
            }
        }
    }
    let mut cells: Vec<BTreeSet<Vec<Value>>> = warshall_classes(n, related)
        .into_iter()
        .map(|class| class.into_iter().map(|i| tuples[i].clone()).collect())
        .collect();
    cells.sort();
    cells
}

/// ((min + max) / 2, (max - min) / 2): center and radius of the smallest
/// interval around 1-dimensional points.
pub fn oracle_interval_center(points: &[BigRational]) -> (BigRational, BigRational) {
    let lo = points.iter().min().expect("nonempty").clone();
    let hi = points.iter().max().expect("nonempty").clone();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    ((&lo + &hi) * &half, (hi - lo) * half)
}

fn laplace_det(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    if n == 0 {
        return BigRational::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut total = BigRational::zero();
    for (j, pivot) in m[0].iter().enumerate() {
        if pivot.is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigRational>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let signed = if j % 2 == 0 {
            pivot.clone()
        } else {
            -pivot.clone()
        };
        total += signed * laplace_det(&minor);
    }
    total
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dist_sq(a: &[BigRational], b: &[BigRational]) -> BigRational {
    let d = sub(a, b);
    dot(&d, &d)
}

/// Circumcenter of an affinely independent point set, or None when the set
/// is dependent: solved by Cramer's rule over the difference Gram matrix.
fn circumcenter(subset: &[&Vec<BigRational>]) -> Option<(Vec<BigRational>, BigRational)> {
    let base = subset[0];
    if subset.len() == 1 {
        return Some((base.clone(), BigRational::zero()));
    }
    let spans: Vec<Vec<BigRational>> = subset[1..].iter().map(|p| sub(p, base)).collect();
    let k = spans.len();
    let two = BigRational::new(BigInt::from(2), BigInt::one());
    let gram: Vec<Vec<BigRational>> = (0..k)
        .map(|i| (0..k).map(|j| &two * dot(&spans[i], &spans[j])).collect())
        .collect();
    let rhs: Vec<BigRational> = (0..k).map(|i| dot(&spans[i], &spans[i])).collect();
    let denom = laplace_det(&gram);
    if denom.is_zero() {
        return None;
    }
    let mut center = base.clone();
    for j in 0..k {
        let mut replaced = gram.clone();
        for i in 0..k {
            replaced[i][j] = rhs[i].clone();
        }
        let lambda = laplace_det(&replaced) / &denom;
        for (c, s) in center.iter_mut().zip(&spans[j]) {
            *c += &lambda * s;
        }
    }
    let r_sq = dist_sq(&center, base);
    Some((center, r_sq))
}

/// Smallest enclosing ball by exhaustive support-subset enumeration: every
/// subset of up to d + 1 points proposes its circumball, and the smallest
/// proposal that contains everything wins. Exponential and exact.
pub fn oracle_ball_exact(points: &[Vec<BigRational>]) -> (Vec<BigRational>, BigRational) {
    assert!(!points.is_empty(), "the oracle needs at least one point");
    let dim = points[0].len();
    assert!(points.iter().all(|p| p.len() == dim), "uniform dimension");
    let mut distinct: Vec<&Vec<BigRational>> = Vec::new();
    for p in points {
        if !distinct.contains(&p) {
            distinct.push(p);
        }
    }
    let n = distinct.len();
    let max_support = (dim + 1).min(n);
    let mut best: Option<(Vec<BigRational>, BigRational)> = None;
    let mut indices: Vec<usize> = Vec::new();
    enumerate_subsets(n, max_support, &mut indices, &mut |chosen| {
        let subset: Vec<&Vec<BigRational>> = chosen.iter().map(|&i| distinct[i]).collect();
        if let Some((center, r_sq)) = circumcenter(&subset) {
            let contains_all = distinct.iter().all(|p| dist_sq(p, &center) <= r_sq);
            if contains_all && best.as_ref().is_none_or(|(_, b)| &r_sq < b) {
                best = Some((center, r_sq));
            }
        }
    });
    best.expect("the whole set is contained in some circumball")
}

fn enumerate_subsets(
    n: usize,
    max_len: usize,
    current: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if !current.is_empty() {
        visit(current);
    }
    if current.len() == max_len {
        return;
    }
    let start = current.last().map_or(0, |&l| l + 1);
    for i in start..n {
        current.push(i);
        enumerate_subsets(n, max_len, current, visit);
        current.pop();
    }
}

/// The best constant for one cell of values, as (center, radius): exact
/// interval midpoint in one dimension, a 1e-3 grid search otherwise. The
/// grid's radius is only trustworthy to about its step; `oracle_ball_exact`
/// is the tight reference.
pub fn oracle_best_cell_constant(points: &[Vec<BigRational>]) -> (Vec<f64>, f64) {
    assert!(!points.is_empty());
    if points[0].len() == 1 {
        let flat: Vec<BigRational> = points.iter().map(|p| p[0].clone()).collect();
        let (c, r) = oracle_interval_center(&flat);
        return (vec![rational_to_f64(&c)], rational_to_f64(&r));
    }
    let approx: Vec<Vec<f64>> = points
        .iter()
        .map(|p| p.iter().map(rational_to_f64).collect())
        .collect();
    oracle_grid_center(&approx, 1e-3)
}

fn rational_to_f64(r: &BigRational) -> f64 {
    use num::ToPrimitive;
    r.to_f64().expect("test fixtures stay in f64 range")
}

/// Grid search for the Chebyshev center at a fixed step, one or two
/// dimensions. Coarse by construction; useful only as a sanity anchor.
pub fn oracle_grid_center(points: &[Vec<f64>], step: f64) -> (Vec<f64>, f64) {
    assert!(!points.is_empty());
    let dim = points[0].len();
    assert!(
        dim == 1 || dim == 2,
        "the grid oracle covers one or two dimensions"
    );
    let lo: Vec<f64> = (0..dim)
        .map(|k| points.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min))
        .collect();
    let hi: Vec<f64> = (0..dim)
        .map(|k| {
            points
                .iter()
                .map(|p| p[k])
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();
    let steps: Vec<usize> = (0..dim)
        .map(|k| ((hi[k] - lo[k]) / step).ceil() as usize + 1)
        .collect();
    let radius_at = |c: &[f64]| -> f64 {
        points
            .iter()
            .map(|p| {
                p.iter()
                    .zip(c)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    };
    let mut best_c = lo.clone();
    let mut best_r = radius_at(&lo);
    if dim == 1 {
        for i in 0..steps[0] {
            let c = vec![lo[0] + i as f64 * step];
            let r = radius_at(&c);
            if r < best_r {
                best_r = r;
                best_c = c;
            }
        }
    } else {
        for i in 0..steps[0] {
            for j in 0..steps[1] {
                let c = vec![lo[0] + i as f64 * step, lo[1] + j as f64 * step];
                let r = radius_at(&c);
                if r < best_r {
                    best_r = r;
                    best_c = c;
                }
            }
        }
    }
    (best_c, best_r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nspfe_core::Value;

    fn toy() -> SampleSpace {
        // X spreads over 1..4 while Y splits the worlds 3 + 2; the measure
        // values below are worked out by hand in the core tests too.
        let worlds = vec!["w1", "w2", "w3", "w4", "w5"]
            .into_iter()
            .map(String::from)
            .collect();
        let x = [1, 2, 3, 3, 4].map(Value::int).to_vec();
        let y = ["y1", "y1", "y1", "y2", "y2"].map(Value::symbol).to_vec();
        SampleSpace::from_assignments(worlds, vec![("X".into(), x), ("Y".into(), y)]).unwrap()
    }

    #[test]
    fn measure_ratios_on_the_toy_space() {
        let s = toy();
        assert_eq!(oracle_entropy_ratio(&s, "X"), ratio_from(4, 1));
        assert_eq!(
            oracle_conditional_entropy_ratio(&s, "X", &["Y"]),
            ratio_from(3, 1)
        );
        assert_eq!(oracle_information_ratio(&s, "X", &["Y"]), ratio_from(4, 3));
        assert_eq!(oracle_leakage_ratio(&s, "X", &["Y"]), ratio_from(2, 1));
        assert_eq!(
            oracle_conditional_leakage_ratio(&s, "X", &["Y"], &["Y"]),
            ratio_from(1, 1)
        );
    }

    #[test]
    fn overlap_cells_close_transitively() {
        let worlds = vec!["w1", "w2", "w3", "w4", "w5"]
            .into_iter()
            .map(String::from)
            .collect();
        let x = [1, 2, 2, 3, 5].map(Value::int).to_vec();
        let y = ["y1", "y1", "y2", "y2", "y3"].map(Value::symbol).to_vec();
        let s =
            SampleSpace::from_assignments(worlds, vec![("X".into(), x), ("Y".into(), y)]).unwrap();
        let cells = oracle_overlap_cells(&s, "X", &["Y"]);
        assert_eq!(cells.len(), 2);
        assert_eq!(
            cells[0],
            BTreeSet::from([Value::int(1), Value::int(2), Value::int(3)])
        );
        assert_eq!(cells[1], BTreeSet::from([Value::int(5)]));
    }

    #[test]
    fn taxicab_cells_link_on_either_coordinate() {
        let worlds = vec!["w1", "w2"].into_iter().map(String::from).collect();
        let a = ["a", "b"].map(Value::symbol).to_vec();
        let b = ["c", "d"].map(Value::symbol).to_vec();
        let s =
            SampleSpace::from_assignments(worlds, vec![("A".into(), a), ("B".into(), b)]).unwrap();
        assert_eq!(oracle_taxicab_cells(&s, "A", "B").len(), 2);

        let worlds = vec!["w1", "w2", "w3"]
            .into_iter()
            .map(String::from)
            .collect();
        let a = ["a", "b", "a"].map(Value::symbol).to_vec();
        let b = ["c", "d", "d"].map(Value::symbol).to_vec();
        let s =
            SampleSpace::from_assignments(worlds, vec![("A".into(), a), ("B".into(), b)]).unwrap();
        assert_eq!(oracle_taxicab_cells(&s, "A", "B").len(), 1);
    }

    #[test]
    fn exact_ball_on_known_shapes() {
        let rat = |n: i64| BigRational::from(BigInt::from(n));
        // Obtuse triangle: the diameter pair {(0,0), (4,0)} dominates.
        let pts = vec![
            vec![rat(0), rat(0)],
            vec![rat(4), rat(0)],
            vec![rat(1), rat(1)],
        ];
        let (c, r_sq) = oracle_ball_exact(&pts);
        assert_eq!(c, vec![rat(2), rat(0)]);
        assert_eq!(r_sq, rat(4));
        // Right isoceles triangle: the circumcenter wins.
        let pts = vec![
            vec![rat(0), rat(0)],
            vec![rat(2), rat(0)],
            vec![rat(0), rat(2)],
        ];
        let (c, r_sq) = oracle_ball_exact(&pts);
        assert_eq!(c, vec![rat(1), rat(1)]);
        assert_eq!(r_sq, rat(2));
    }

    #[test]
    fn grid_search_approximates_the_exact_ball() {
        let pts = vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![0.0, 2.0]];
        let (c, r) = oracle_grid_center(&pts, 1e-3);
        assert!((c[0] - 1.0).abs() <= 2e-3 && (c[1] - 1.0).abs() <= 2e-3);
        assert!((r - 2f64.sqrt()).abs() <= 3e-3);
    }

    #[test]
    fn random_spaces_are_reproducible_and_bounded() {
        for seed in 0..50 {
            let spec = RandomSpaceSpec::sample(seed);
            let a = spec.generate();
            let b = spec.generate();
            assert_eq!(a, b, "same seed, same space");
            assert!(a.world_count() >= 2 && a.world_count() <= 12);
            assert_eq!(spec.variable_names().len(), spec.variables);
        }
    }
}
