//! Coordinate compressions and the greedy Ruzsa covering.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::inequalities::{Comparison, InequalityReport, Value};
use crate::lattice::{difference_set, sumset, sumset_len, LatticeBox, PointSet};

/// Compression along `axis` (1-based), returned with the shift applied first.
///
/// The set is translated so that its bounding box has minimum corner 0; then
/// every line parallel to `e_axis` is replaced by `{0, ..., c - 1}` in that
/// coordinate, where `c` is the number of points on the line.
pub fn compress_with_shift(a: &PointSet, axis: usize) -> Result<(PointSet, Vec<i64>)> {
    a.check_nonempty("compress")?;
    let k = a.dim();
    if axis == 0 || axis > k {
        return Err(Error::Argument(format!("axis {axis} is out of range 1..={k}")));
    }
    let (lo, _) = a.bounding_box().expect("non-empty");
    let shift: Vec<i64> = lo.iter().map(|v| -v).collect();
    let shifted = a.translate(&shift)?;
    let i = axis - 1;
    let mut lines: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    for p in shifted.iter() {
        let mut key = p.to_vec();
        key[i] = 0;
        *lines.entry(key).or_default() += 1;
    }
    let mut coords = Vec::with_capacity(a.len() * k);
    for (key, c) in lines {
        for v in 0..c {
            let mut p = key.clone();
            p[i] = v;
            coords.extend_from_slice(&p);
        }
    }
    Ok((PointSet::from_flat(k, coords)?, shift))
}

pub fn compress(a: &PointSet, axis: usize) -> Result<PointSet> {
    compress_with_shift(a, axis).map(|(c, _)| c)
}

/// Compresses along axes `1, ..., k` in turn until nothing changes.
pub fn compress_fully(a: &PointSet) -> Result<PointSet> {
    let mut cur = a.clone();
    loop {
        let mut next = cur.clone();
        for axis in 1..=a.dim() {
            next = compress(&next, axis)?;
        }
        if next == cur {
            return Ok(cur);
        }
        cur = next;
    }
}

/// `|A + B + {0,1}^d|^{1/d} >= |A|^{1/d} + |B|^{1/d}`, decided exactly.
pub fn cube_summand_identity_check(a: &PointSet, b: &PointSet) -> Result<InequalityReport> {
    a.check_dim(b.dim())?;
    a.check_nonempty("cube summand check")?;
    b.check_nonempty("cube summand check")?;
    let d = a.dim();
    if d > 3 {
        return Err(Error::UnsupportedDimension { dim: d, max: 3 });
    }
    let cube = LatticeBox::cube(d, 1)?.points(8)?;
    let total = sumset(&sumset(a, b)?, &cube)?.len();
    let as_q = |n: usize| crate::exact::integer(n as u64);
    let mut report = InequalityReport::new("cube-summand", "|A+B+{0,1}^d|^(1/d) >= |A|^(1/d) + |B|^(1/d)");
    report
        .value("|A|", Value::int(a.len() as u64))
        .value("|B|", Value::int(b.len() as u64))
        .value("|A+B+{0,1}^d|", Value::int(total as u64))
        .value("d", Value::int(d as u64));
    report.conclude(Comparison::root_sum(&as_q(total), &as_q(a.len()), &as_q(b.len()), d as u32)?);
    Ok(report)
}

/// Greedy maximal family of pairwise disjoint translates `x + B`, `x ∈ A`,
/// scanning `A` in canonical order. Then `A ⊆ X + B - B` and `|X| <= |A+B|/|B|`;
/// both are checked before returning.
pub fn ruzsa_cover(a: &PointSet, b: &PointSet) -> Result<PointSet> {
    a.check_dim(b.dim())?;
    a.check_nonempty("ruzsa cover")?;
    b.check_nonempty("ruzsa cover")?;
    let diff = difference_set(b, b)?;
    let mut chosen: Vec<&[i64]> = Vec::new();
    for x in a.iter() {
        let disjoint = chosen.iter().all(|y| {
            let d: Vec<i64> = x.iter().zip(y.iter()).map(|(p, q)| p - q).collect();
            !diff.contains(&d)
        });
        if disjoint {
            chosen.push(x);
        }
    }
    let x = PointSet::new(a.dim(), &chosen)?;
    if !a.is_subset_of(&sumset(&x, &diff)?) {
        return Err(Error::Verification("A is not covered by X + B - B".into()));
    }
    if (x.len() as u128) * (b.len() as u128) > sumset_len(a, b)? {
        return Err(Error::Verification(format!("|X| = {} exceeds |A+B|/|B|", x.len())));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(k: usize, pts: &[&[i64]]) -> PointSet {
        PointSet::new(k, pts).unwrap()
    }

    #[test]
    fn compress_examples() {
        let a = set(2, &[&[0, 5], &[0, 9]]);
        assert_eq!(compress(&a, 2).unwrap(), set(2, &[&[0, 0], &[0, 1]]));
        let a = set(2, &[&[0, 1], &[1, 3], &[1, 7]]);
        assert_eq!(compress(&a, 2).unwrap(), set(2, &[&[0, 0], &[1, 0], &[1, 1]]));
        let down = set(2, &[&[0, 0], &[0, 1], &[1, 0]]);
        assert_eq!(compress(&down, 1).unwrap(), down);
        assert!(compress(&down, 0).is_err());
        assert!(compress(&down, 3).is_err());
        let (_, shift) = compress_with_shift(&set(2, &[&[-3, 4]]), 1).unwrap();
        assert_eq!(shift, vec![3, -4]);
    }

    #[test]
    fn full_compression() {
        let a = set(2, &[&[2, 0], &[0, 2]]);
        assert_eq!(compress_fully(&a).unwrap(), set(2, &[&[0, 0], &[0, 1]]));
        let bx = LatticeBox::new(vec![2, 3]).unwrap().points(100).unwrap();
        assert_eq!(compress_fully(&bx).unwrap(), bx);
    }

    #[test]
    fn cube_summand_examples() {
        let o = set(2, &[&[0, 0]]);
        let r = cube_summand_identity_check(&o, &o).unwrap();
        assert!(r.pass);
        assert_eq!(r.slack.unwrap().exact.as_deref(), Some("0"));
        let g = LatticeBox::cube(2, 3).unwrap().points(100).unwrap();
        // boxes are equality cases: [0, 2m+1]^d has (2(m+1))^d points
        let r = cube_summand_identity_check(&g, &g).unwrap();
        assert!(r.pass);
        assert_eq!(r.slack.unwrap().exact.as_deref(), Some("0"));
        let tri = set(2, &[&[0, 0], &[1, 0], &[0, 1]]);
        let r = cube_summand_identity_check(&tri, &g).unwrap();
        assert!(r.pass && r.slack.unwrap().approx > 0.0);
    }

    #[test]
    fn ruzsa_examples() {
        let b = PointSet::from_values([0, 1, 2]);
        assert_eq!(ruzsa_cover(&PointSet::from_values([0, 10]), &b).unwrap(), PointSet::from_values([0, 10]));
        assert_eq!(ruzsa_cover(&PointSet::from_values([1, 2]), &b).unwrap(), PointSet::from_values([1]));
        let a = PointSet::from_values([3, 7, 8, 20]);
        assert_eq!(ruzsa_cover(&a, &a).unwrap().len(), 1);
    }
}
