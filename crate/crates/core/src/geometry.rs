//! Parallel-hyperplane covers, general position, and the standard extremal families.

use std::collections::HashSet;

use num_integer::Integer;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gap::DEFAULT_ENUM_CAP;
use crate::lattice::{iterated_sumset, PointSet};
use crate::linalg::{affine_rank, kernel_basis};
use crate::util::{binomial, for_each_combination};

/// A normal `v` together with the distinct values `<v, x>` over the set.
///
/// `normal_bound` is the coordinate bound of the normal family searched, or
/// `None` for certificates from the unbounded exact search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverCertificate {
    pub normal: Vec<i64>,
    pub levels: Vec<i128>,
    pub count: u64,
    pub normal_bound: Option<u64>,
}

impl CoverCertificate {
    fn build(b: &PointSet, normal: Vec<i64>, normal_bound: Option<u64>) -> Self {
        let levels = levels(b, &normal);
        CoverCertificate { count: levels.len() as u64, normal, levels, normal_bound }
    }

    /// Primitive normal, level list sorted and complete, every point on a level.
    pub fn verify(&self, b: &PointSet) -> Result<()> {
        let g = self.normal.iter().fold(0i64, |g, x| g.gcd(x));
        if g != 1 {
            return Err(Error::Verification(format!("normal {:?} is not primitive", self.normal)));
        }
        if self.levels.windows(2).any(|w| w[0] >= w[1]) || self.count != self.levels.len() as u64 {
            return Err(Error::Verification("levels are not a sorted distinct list of the stated count".into()));
        }
        for p in b.iter() {
            if self.levels.binary_search(&dot(&self.normal, p)).is_err() {
                return Err(Error::Verification(format!("point {p:?} lies on no certified hyperplane")));
            }
        }
        Ok(())
    }
}

fn dot(v: &[i64], p: &[i64]) -> i128 {
    v.iter().zip(p).map(|(&a, &b)| a as i128 * b as i128).sum()
}

fn levels(b: &PointSet, normal: &[i64]) -> Vec<i128> {
    let mut out: Vec<i128> = b.iter().map(|p| dot(normal, p)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// `2 * diameter`, at least 1.
pub fn default_normal_bound(b: &PointSet) -> u64 {
    (2 * b.diameter()).max(1)
}

/// Minimum number of parallel hyperplanes covering `b`, over primitive normals
/// with coordinates in `[-bound, bound]` and first non-zero coordinate positive.
/// Ties go to the lexicographically least normal.
pub fn cover_number(b: &PointSet, normal_bound: u64) -> Result<CoverCertificate> {
    cover_number_capped(b, normal_bound, DEFAULT_ENUM_CAP)
}

/// [`cover_number`] with an explicit limit on the number of normals enumerated.
pub fn cover_number_capped(b: &PointSet, normal_bound: u64, enum_cap: u64) -> Result<CoverCertificate> {
    b.check_nonempty("cover number")?;
    if normal_bound == 0 {
        return Err(Error::Argument("normal bound must be positive".into()));
    }
    let k = b.dim();
    let width = 2 * normal_bound as u128 + 1;
    let total = (0..k).try_fold(1u128, |acc, _| acc.checked_mul(width)).unwrap_or(u128::MAX);
    if total > enum_cap as u128 {
        return Err(Error::capacity("normal enumeration", total, enum_cap as u128));
    }
    let bound = normal_bound as i64;
    let decode = |mut idx: u64| -> Vec<i64> {
        let mut v = vec![0i64; k];
        for slot in v.iter_mut().rev() {
            *slot = (idx % width as u64) as i64 - bound;
            idx /= width as u64;
        }
        v
    };
    let best = (0..total as u64)
        .into_par_iter()
        .filter_map(|idx| {
            let v = decode(idx);
            let lead = *v.iter().find(|&&x| x != 0)?;
            if lead < 0 || v.iter().fold(0i64, |g, x| g.gcd(x)) != 1 {
                return None;
            }
            Some((levels(b, &v).len(), idx))
        })
        .min()
        .expect("the first unit vector is always a candidate");
    let cert = CoverCertificate::build(b, decode(best.1), Some(normal_bound));
    cert.verify(b)?;
    Ok(cert)
}

/// Exact decision: is `b` covered by at most `n` parallel hyperplanes (any normal)?
///
/// Depth-first search over sets `V` of differences forced to lie in a common
/// hyperplane. With `W` a basis of the normals orthogonal to `V`, the points
/// split into classes by `W x`. At most `n` classes means any normal in `W`
/// works; otherwise two of any `n + 1` class representatives must share a
/// level, and each choice shrinks `W`.
pub fn cover_at_most(b: &PointSet, n: u64) -> Result<Option<CoverCertificate>> {
    b.check_nonempty("cover decision")?;
    if n == 0 {
        return Ok(None);
    }
    let found = cover_search(b, &mut Vec::new(), n)?;
    Ok(found.map(|normal| {
        let cert = CoverCertificate::build(b, normal, None);
        debug_assert!(cert.verify(b).is_ok());
        cert
    }))
}

fn cover_search(b: &PointSet, forced: &mut Vec<Vec<i64>>, n: u64) -> Result<Option<Vec<i64>>> {
    let basis = kernel_basis(forced, b.dim())?;
    if basis.len() == 1 {
        let count = levels(b, &basis[0]).len() as u64;
        return Ok((count <= n).then(|| basis.into_iter().next().unwrap()));
    }
    let mut reps: Vec<&[i64]> = Vec::new();
    let mut seen: HashSet<Vec<i128>> = HashSet::new();
    for p in b.iter() {
        let key: Vec<i128> = basis.iter().map(|w| dot(w, p)).collect();
        if seen.insert(key) {
            reps.push(p);
            if reps.len() as u64 > n {
                break;
            }
        }
    }
    if reps.len() as u64 <= n {
        return Ok(Some(basis.into_iter().next().unwrap()));
    }
    for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            let diff = reps[j]
                .iter()
                .zip(reps[i])
                .map(|(x, y)| x.checked_sub(*y).ok_or(Error::Overflow("cover difference")))
                .collect::<Result<Vec<i64>>>()?;
            forced.push(diff);
            let hit = cover_search(b, forced, n)?;
            forced.pop();
            if hit.is_some() {
                return Ok(hit);
            }
        }
    }
    Ok(None)
}

/// Smallest number of parallel hyperplanes covering `b`, over all normals.
pub fn min_cover_count(b: &PointSet) -> Result<CoverCertificate> {
    b.check_nonempty("cover count")?;
    let mut n = 1;
    loop {
        if let Some(cert) = cover_at_most(b, n)? {
            return Ok(cert);
        }
        n += 1;
    }
}

/// Cover number of `ell . b`, checked against `ell (c - 1) + 1` where `c` is the cover number of `b`.
pub fn scaled_cover_lower_bound(b: &PointSet, ell: u64, normal_bound: u64) -> Result<u64> {
    let base = cover_number(b, normal_bound)?.count;
    let scaled = cover_number(&iterated_sumset(b, ell)?, normal_bound)?.count;
    let floor = ell * (base - 1) + 1;
    if scaled < floor {
        return Err(Error::Verification(format!("cover number {scaled} of the {ell}-fold sumset is below {floor}")));
    }
    Ok(scaled)
}

/// The discrete simplex `{x in [0, n]^k : sum x_i <= n}`.
pub fn simplex(k: usize, n: u64) -> Result<PointSet> {
    if k == 0 {
        return Err(Error::Argument("simplex dimension must be positive".into()));
    }
    let size = binomial(n + k as u64, k as u64);
    if size > DEFAULT_ENUM_CAP as u128 {
        return Err(Error::capacity("simplex enumeration", size, DEFAULT_ENUM_CAP as u128));
    }
    let mut coords = Vec::with_capacity(size as usize * k);
    let mut cur = vec![0i64; k];
    fill_simplex(&mut cur, 0, n as i64, &mut coords);
    PointSet::from_flat(k, coords)
}

fn fill_simplex(cur: &mut [i64], i: usize, budget: i64, out: &mut Vec<i64>) {
    if i == cur.len() {
        out.extend_from_slice(cur);
        return;
    }
    for v in 0..=budget {
        cur[i] = v;
        fill_simplex(cur, i + 1, budget - v, out);
    }
    cur[i] = 0;
}

/// Square-based discrete cone `{(y, h) : 0 <= h <= n, y in [0, h]^(k-1)}`, apex at the origin.
pub fn cone(k: usize, n: u64) -> Result<PointSet> {
    if k < 2 {
        return Err(Error::Argument("a cone needs dimension at least 2".into()));
    }
    let size: u128 = (0..=n as u128).map(|h| (h + 1).pow(k as u32 - 1)).sum();
    if size > DEFAULT_ENUM_CAP as u128 {
        return Err(Error::capacity("cone enumeration", size, DEFAULT_ENUM_CAP as u128));
    }
    let mut coords = Vec::with_capacity(size as usize * k);
    for h in 0..=n {
        let base = crate::lattice::LatticeBox::cube(k - 1, h)?.points(DEFAULT_ENUM_CAP)?;
        for y in base.iter() {
            coords.extend_from_slice(y);
            coords.push(h as i64);
        }
    }
    PointSet::from_flat(k, coords)
}

/// Whether every subset of at most `k + 1` points is affinely independent.
pub fn in_general_position(points: &PointSet) -> bool {
    let k = points.dim();
    let pts: Vec<&[i64]> = points.iter().collect();
    let r = (k + 1).min(pts.len());
    let mut ok = true;
    for_each_combination(pts.len(), r, |idx| {
        let sub: Vec<&[i64]> = idx.iter().map(|&i| pts[i]).collect();
        ok = affine_rank(&sub) == r - 1;
        ok
    });
    ok
}

/// `count` points of `[0, 10 count^2)^k`, no `k + 1` on a common hyperplane.
///
/// Points are drawn one at a time from a seeded ChaCha8 stream and rejected
/// when they fall on a hyperplane spanned by earlier points.
pub fn general_position_points(k: usize, count: usize, seed: u64) -> Result<PointSet> {
    const RETRIES: usize = 10_000;
    if k < 2 {
        return Err(Error::Argument("general position needs dimension at least 2".into()));
    }
    let side = (10 * count * count).max(2) as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen: Vec<Vec<i64>> = Vec::with_capacity(count);
    while chosen.len() < count {
        let mut accepted = false;
        for _ in 0..RETRIES {
            let p: Vec<i64> = (0..k).map(|_| rng.random_range(0..side)).collect();
            if extends_general_position(&chosen, &p, k) {
                chosen.push(p);
                accepted = true;
                break;
            }
        }
        if !accepted {
            return Err(Error::Generation(format!(
                "no admissible point after {RETRIES} draws ({} of {count} placed)",
                chosen.len()
            )));
        }
    }
    let set = PointSet::new(k, &chosen)?;
    if !in_general_position(&set) {
        return Err(Error::Generation("rank verification failed".into()));
    }
    Ok(set)
}

fn extends_general_position(chosen: &[Vec<i64>], p: &[i64], k: usize) -> bool {
    let r = k.min(chosen.len());
    let mut ok = true;
    for_each_combination(chosen.len(), r, |idx| {
        let mut sub: Vec<&[i64]> = idx.iter().map(|&i| chosen[i].as_slice()).collect();
        sub.push(p);
        ok = affine_rank(&sub) == r;
        ok
    });
    ok
}
