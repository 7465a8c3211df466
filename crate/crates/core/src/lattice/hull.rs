//! Exact volume of the convex hull of a lattice point set (dimension <= 4).
//!
//! The hull is triangulated recursively: pick a vertex as apex, find the
//! facets not containing it by brute-force supporting-hyperplane search, and
//! cone the triangulated facets from the apex. Each simplex contributes
//! `|det| / d!`. Cubic-to-quartic in the number of points; diagnostic only.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::PointSet;
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::linalg::{affine_rank, determinant, primitive, rank};
use crate::util::{factorial, for_each_combination};

pub const MAX_HULL_DIM: usize = 4;

pub fn convex_hull_volume(a: &PointSet) -> Result<Rational> {
    if a.dim() > MAX_HULL_DIM {
        return Err(Error::UnsupportedDimension { dim: a.dim(), max: MAX_HULL_DIM });
    }
    a.check_nonempty("convex hull")?;
    let pts: Vec<&[i64]> = a.iter().collect();
    let d = a.dim();
    if affine_rank(&pts) < d {
        return Ok(Rational::zero());
    }
    match d {
        1 => Ok(Rational::from_integer(BigInt::from(a.last().unwrap()[0] as i128 - a.first().unwrap()[0] as i128))),
        2 => Ok(polygon_area(&pts)),
        _ => {
            let owned: Vec<Vec<i64>> = pts.iter().map(|p| p.to_vec()).collect();
            let mut twice = BigInt::zero();
            for simplex in triangulate(&owned, d) {
                let rows: Vec<Vec<BigInt>> = simplex[1..]
                    .iter()
                    .map(|v| v.iter().zip(simplex[0].iter()).map(|(x, y)| BigInt::from(x - y)).collect())
                    .collect();
                twice += determinant(&rows).abs();
            }
            Ok(Rational::new(twice, BigInt::from(factorial(d as u64))))
        }
    }
}

fn cross(o: &[i64], a: &[i64], b: &[i64]) -> i128 {
    (a[0] as i128 - o[0] as i128) * (b[1] as i128 - o[1] as i128)
        - (a[1] as i128 - o[1] as i128) * (b[0] as i128 - o[0] as i128)
}

/// Andrew's monotone chain on lexicographically sorted input, then the shoelace formula.
fn polygon_area(pts: &[&[i64]]) -> Rational {
    let mut lower: Vec<&[i64]> = Vec::new();
    for &p in pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<&[i64]> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    let n = lower.len();
    let mut twice: i128 = 0;
    for i in 0..n {
        let p = lower[i];
        let q = lower[(i + 1) % n];
        twice += p[0] as i128 * q[1] as i128 - q[0] as i128 * p[1] as i128;
    }
    Rational::new(BigInt::from(twice.abs()), BigInt::from(2))
}

/// Coordinates on which the projection of an affinely `j`-dimensional set stays `j`-dimensional.
fn projection_axes(points: &[Vec<i64>], j: usize) -> Vec<usize> {
    let d = points[0].len();
    let diffs: Vec<Vec<i64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(points[0].iter()).map(|(x, y)| x - y).collect())
        .collect();
    let mut found = Vec::new();
    for_each_combination(d, j, |axes| {
        let projected: Vec<Vec<i64>> = diffs.iter().map(|v| axes.iter().map(|&i| v[i]).collect()).collect();
        if rank(&projected) == j {
            found = axes.to_vec();
            false
        } else {
            true
        }
    });
    found
}

/// Normal of the hyperplane through `pts` (j points in Z^j), via signed cofactors.
fn hyperplane_normal(pts: &[Vec<i64>]) -> Vec<BigInt> {
    let j = pts[0].len();
    let rows: Vec<Vec<BigInt>> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(pts[0].iter()).map(|(x, y)| BigInt::from(x - y)).collect())
        .collect();
    (0..j)
        .map(|col| {
            let minor: Vec<Vec<BigInt>> = rows
                .iter()
                .map(|r| r.iter().enumerate().filter(|(c, _)| *c != col).map(|(_, v)| v.clone()).collect())
                .collect();
            let det = determinant(&minor);
            if col % 2 == 0 {
                det
            } else {
                -det
            }
        })
        .collect()
}

fn dot(n: &[BigInt], p: &[i64]) -> BigInt {
    n.iter().zip(p.iter()).map(|(a, &b)| a * BigInt::from(b)).sum()
}

/// Simplices (as vertex lists in ambient coordinates) triangulating the hull of
/// `points`, whose affine hull has dimension `j`.
fn triangulate(points: &[Vec<i64>], j: usize) -> Vec<Vec<Vec<i64>>> {
    if j == 0 {
        return vec![vec![points[0].clone()]];
    }
    let axes = projection_axes(points, j);
    let proj: Vec<Vec<i64>> = points.iter().map(|p| axes.iter().map(|&i| p[i]).collect()).collect();
    let apex = (0..points.len()).min_by(|&a, &b| proj[a].cmp(&proj[b])).unwrap();
    if j == 1 {
        let far = (0..points.len()).max_by(|&a, &b| proj[a].cmp(&proj[b])).unwrap();
        return vec![vec![points[apex].clone(), points[far].clone()]];
    }

    let mut facets: BTreeSet<(Vec<BigInt>, BigInt)> = BTreeSet::new();
    for_each_combination(proj.len(), j, |idx| {
        let chosen: Vec<Vec<i64>> = idx.iter().map(|&i| proj[i].clone()).collect();
        let normal = hyperplane_normal(&chosen);
        if normal.iter().all(Zero::is_zero) {
            return true;
        }
        let level = dot(&normal, &chosen[0]);
        let (mut below, mut above) = (false, false);
        for p in &proj {
            match dot(&normal, p).cmp(&level) {
                std::cmp::Ordering::Less => below = true,
                std::cmp::Ordering::Greater => above = true,
                std::cmp::Ordering::Equal => {}
            }
            if below && above {
                return true;
            }
        }
        let outward: Vec<BigInt> = if above { normal.iter().map(|x| -x).collect() } else { normal };
        let g = primitive(&outward);
        let scale = outward.iter().zip(g.iter()).find(|(_, y)| !y.is_zero()).map(|(x, y)| x / y).unwrap();
        facets.insert((outward.iter().map(|x| x / &scale).collect(), dot(&outward, &chosen[0]) / &scale));
        true
    });

    let mut out = Vec::new();
    for (normal, level) in facets {
        if dot(&normal, &proj[apex]) == level {
            continue;
        }
        let on_facet: Vec<Vec<i64>> = (0..points.len())
            .filter(|&i| dot(&normal, &proj[i]) == level)
            .map(|i| points[i].clone())
            .collect();
        for mut simplex in triangulate(&on_facet, j - 1) {
            simplex.push(points[apex].clone());
            out.push(simplex);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{integer, rational};

    #[test]
    fn planar_examples() {
        let tri = PointSet::new(2, [[0, 0], [1, 0], [0, 1]]).unwrap();
        assert_eq!(convex_hull_volume(&tri).unwrap(), rational(1, 2));
        let line = PointSet::new(2, [[0, 0], [1, 1], [3, 3]]).unwrap();
        assert_eq!(convex_hull_volume(&line).unwrap(), integer(0));
        let sq = PointSet::new(2, [[0, 0], [2, 0], [0, 2], [2, 2], [1, 1]]).unwrap();
        assert_eq!(convex_hull_volume(&sq).unwrap(), integer(4));
    }

    #[test]
    fn one_dimensional() {
        assert_eq!(convex_hull_volume(&PointSet::from_values([3, -2, 7])).unwrap(), integer(9));
        assert_eq!(convex_hull_volume(&PointSet::from_values([3])).unwrap(), integer(0));
    }

    #[test]
    fn solids() {
        let cube = crate::lattice::LatticeBox::cube(3, 2).unwrap().points(1000).unwrap();
        assert_eq!(convex_hull_volume(&cube).unwrap(), integer(8));
        let simplex = PointSet::new(3, [[0, 0, 0], [3, 0, 0], [0, 3, 0], [0, 0, 3], [1, 1, 1]]).unwrap();
        assert_eq!(convex_hull_volume(&simplex).unwrap(), rational(9, 2));
        let tess = crate::lattice::LatticeBox::cube(4, 1).unwrap().points(100).unwrap();
        assert_eq!(convex_hull_volume(&tess).unwrap(), integer(1));
        let flat = PointSet::new(3, [[0, 0, 0], [1, 0, 0], [0, 1, 0], [5, 5, 0]]).unwrap();
        assert_eq!(convex_hull_volume(&flat).unwrap(), integer(0));
    }

    #[test]
    fn dimension_limit() {
        let p = PointSet::new(5, [[0, 0, 0, 0, 0]]).unwrap();
        assert!(matches!(convex_hull_volume(&p), Err(Error::UnsupportedDimension { .. })));
    }
}
