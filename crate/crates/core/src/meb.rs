//! Minimum enclosing balls over exact rationals.
//!
//! The optimal perfectly-private release replaces a function's values on each
//! inseparable cell by the center minimizing the worst-case distance to the
//! cell, i.e. the center of the cell's minimum enclosing ball. Point sets
//! here are small, so Welzl's recursion runs entirely in rational arithmetic:
//! containment tests compare exact squared distances and boundary solves are
//! exact Gaussian eliminations. The result is the unique optimum; the seed
//! only shuffles the scan order and can never change the answer.

use num::rational::BigRational;
#[cfg(test)]
use num::One;
use num::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rational::big_to_f64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    pub center: Vec<BigRational>,
    pub radius_sq: BigRational,
}

impl Ball {
    pub fn contains(&self, p: &[BigRational]) -> bool {
        squared_distance(&self.center, p) <= self.radius_sq
    }

    pub fn radius_f64(&self) -> f64 {
        big_to_f64(&self.radius_sq).sqrt()
    }
}

pub fn squared_distance(a: &[BigRational], b: &[BigRational]) -> BigRational {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            &d * &d
        })
        .fold(BigRational::zero(), |acc, d| acc + d)
}

/// Largest coordinate gap; the distance notion the accuracy bounds use.
pub fn sup_distance(a: &[BigRational], b: &[BigRational]) -> BigRational {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .max()
        .unwrap_or_else(BigRational::zero)
}

/// The smallest ball containing every point. Points must be nonempty and of
/// one dimension; duplicates are harmless.
pub fn min_enclosing_ball(points: &[Vec<BigRational>], seed: u64) -> Result<Ball> {
    let first = points
        .first()
        .ok_or_else(|| Error::InvalidArgument("minimum enclosing ball of no points".into()))?;
    let dim = first.len();
    if let Some(bad) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch(format!(
            "points of dimension {} and {} mixed",
            dim,
            bad.len()
        )));
    }
    let mut distinct: Vec<Vec<BigRational>> = {
        let set: std::collections::BTreeSet<&Vec<BigRational>> = points.iter().collect();
        set.into_iter().cloned().collect()
    };
    distinct.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut boundary: Vec<Vec<BigRational>> = Vec::with_capacity(dim + 1);
    welzl(&distinct, &mut boundary, dim)
        .ok_or_else(|| Error::Internal("enclosing-ball recursion produced no ball".into()))
}

fn welzl(
    pts: &[Vec<BigRational>],
    boundary: &mut Vec<Vec<BigRational>>,
    dim: usize,
) -> Option<Ball> {
    if pts.is_empty() || boundary.len() == dim + 1 {
        return ball_on_boundary(boundary);
    }
    let p = &pts[0];
    let b = welzl(&pts[1..], boundary, dim);
    if let Some(ball) = &b {
        if ball.contains(p) {
            return b;
        }
    }
    // p is strictly outside the ball of the remaining points, so it lies on
    // the boundary of the optimum that includes it.
    boundary.push(p.clone());
    let b = welzl(&pts[1..], boundary, dim);
    boundary.pop();
    b
}

/// The smallest ball with every boundary point on its sphere: the
/// circumcenter c = b0 + sum lambda_i (b_i - b0) solved from the equidistance
/// conditions 2 u_i . (c - b0) = |u_i|^2 with u_i = b_i - b0. The Gram system
/// can be rank-deficient when boundary points are cospherical in a lower
/// dimensional flat; any solution then yields the same center, so free
/// variables are simply zeroed.
fn ball_on_boundary(boundary: &[Vec<BigRational>]) -> Option<Ball> {
    let b0 = boundary.first()?;
    if boundary.len() == 1 {
        return Some(Ball {
            center: b0.clone(),
            radius_sq: BigRational::zero(),
        });
    }
    let us: Vec<Vec<BigRational>> = boundary[1..].iter().map(|b| sub(b, b0)).collect();
    let k = us.len();
    let half = BigRational::new(1.into(), 2.into());
    let mat: Vec<Vec<BigRational>> = (0..k)
        .map(|i| (0..k).map(|j| dot(&us[i], &us[j])).collect())
        .collect();
    let rhs: Vec<BigRational> = (0..k).map(|i| dot(&us[i], &us[i]) * &half).collect();
    let lambda = solve_any(mat, rhs)?;
    let mut center = b0.clone();
    for (li, ui) in lambda.iter().zip(&us) {
        for (c, u) in center.iter_mut().zip(ui) {
            *c += li * u;
        }
    }
    let radius_sq = squared_distance(&center, b0);
    Some(Ball { center, radius_sq })
}

fn sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter()
        .zip(b)
        .map(|(x, y)| x * y)
        .fold(BigRational::zero(), |acc, d| acc + d)
}

/// Exact Gaussian elimination returning any solution of a consistent system,
/// or None when inconsistent. Free columns get value zero.
fn solve_any(
    mut mat: Vec<Vec<BigRational>>,
    mut rhs: Vec<BigRational>,
) -> Option<Vec<BigRational>> {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    let mut pivot_col_of_row: Vec<Option<usize>> = vec![None; rows];
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(row, p);
        rhs.swap(row, p);
        let inv = mat[row][col].recip();
        for cell in &mut mat[row][col..] {
            *cell = &*cell * &inv;
        }
        rhs[row] = &rhs[row] * &inv;
        for r in 0..rows {
            if r != row && !mat[r][col].is_zero() {
                let factor = mat[r][col].clone();
                // Reads the pivot row while writing row r; indices keep the
                // aliasing explicit.
                #[allow(clippy::needless_range_loop)]
                for c in col..cols {
                    let delta = &factor * &mat[row][c];
                    mat[r][c] = &mat[r][c] - delta;
                }
                let delta = &factor * &rhs[row];
                rhs[r] = &rhs[r] - delta;
            }
        }
        pivot_col_of_row[row] = Some(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    // Zero rows demand zero right-hand sides.
    if rhs[row..rows].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut solution = vec![BigRational::zero(); cols];
    for r in 0..row {
        if let Some(c) = pivot_col_of_row[r] {
            solution[c] = rhs[r].clone();
        }
    }
    Some(solution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_usize, parse_rational};

    fn pt(coords: &[&str]) -> Vec<BigRational> {
        coords.iter().map(|c| parse_rational(c).unwrap()).collect()
    }

    #[test]
    fn one_and_two_points() {
        let b = min_enclosing_ball(&[pt(&["3", "4"])], 0).unwrap();
        assert_eq!(b.center, pt(&["3", "4"]));
        assert!(b.radius_sq.is_zero());

        let b = min_enclosing_ball(&[pt(&["0", "0"]), pt(&["2", "0"])], 0).unwrap();
        assert_eq!(b.center, pt(&["1", "0"]));
        assert_eq!(b.radius_sq, BigRational::one());
    }

    #[test]
    fn obtuse_triangle_uses_the_long_side() {
        // (0,0), (4,0), (1,1): the diameter ball of (0,0)-(4,0) already
        // contains (1,1), so the MEB is centered at (2,0) with r^2 = 4.
        let b =
            min_enclosing_ball(&[pt(&["0", "0"]), pt(&["4", "0"]), pt(&["1", "1"])], 7).unwrap();
        assert_eq!(b.center, pt(&["2", "0"]));
        assert_eq!(b.radius_sq, from_usize(4));
    }

    #[test]
    fn acute_triangle_uses_the_circumcenter() {
        // Right isoceles corner set: circumcenter of (0,0), (2,0), (0,2)
        // is (1,1) with r^2 = 2.
        let b =
            min_enclosing_ball(&[pt(&["0", "0"]), pt(&["2", "0"]), pt(&["0", "2"])], 0).unwrap();
        assert_eq!(b.center, pt(&["1", "1"]));
        assert_eq!(b.radius_sq, from_usize(2));
    }

    #[test]
    fn seed_cannot_change_the_answer() {
        let pts = vec![
            pt(&["0", "0", "0"]),
            pt(&["1", "0", "0"]),
            pt(&["0", "1", "0"]),
            pt(&["0", "0", "1"]),
            pt(&["1/2", "1/2", "1/2"]),
            pt(&["1", "1", "1"]),
        ];
        let reference = min_enclosing_ball(&pts, 0).unwrap();
        for seed in 1..30 {
            assert_eq!(min_enclosing_ball(&pts, seed).unwrap(), reference);
        }
        // The cube diagonal (0,0,0)-(1,1,1) is the diameter here.
        assert_eq!(reference.center, pt(&["1/2", "1/2", "1/2"]));
        assert_eq!(reference.radius_sq, parse_rational("3/4").unwrap());
    }

    #[test]
    fn cocircular_points_in_higher_dimension() {
        // Four corners of a square embedded in 3-space: the boundary solve
        // goes rank-deficient but stays consistent.
        let pts = vec![
            pt(&["0", "0", "5"]),
            pt(&["2", "0", "5"]),
            pt(&["0", "2", "5"]),
            pt(&["2", "2", "5"]),
        ];
        for seed in 0..20 {
            let b = min_enclosing_ball(&pts, seed).unwrap();
            assert_eq!(b.center, pt(&["1", "1", "5"]));
            assert_eq!(b.radius_sq, from_usize(2));
        }
    }

    #[test]
    fn rejects_empty_and_mixed_dimension() {
        assert!(min_enclosing_ball(&[], 0).is_err());
        assert!(min_enclosing_ball(&[pt(&["1"]), pt(&["1", "2"])], 0).is_err());
    }
}
