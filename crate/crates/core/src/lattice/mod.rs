//! Canonical finite point sets in Z^k and the exact primitives built on them.

mod hull;
mod io;
mod kernel;

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use hull::{convex_hull_volume, MAX_HULL_DIM};
pub use io::{parse_point_set, point_set_to_text};
pub use kernel::{select_kernel, sumset_len, sumset_with, Kernel, BITSET_VOLUME_LIMIT};

#[derive(Serialize, Deserialize)]
struct PointSetRecord {
    dim: usize,
    points: Vec<Vec<i64>>,
}

impl Serialize for PointSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PointSetRecord { dim: self.dim, points: self.to_vecs() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PointSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rec = PointSetRecord::deserialize(deserializer)?;
        PointSet::new(rec.dim, rec.points).map_err(serde::de::Error::custom)
    }
}

/// A finite subset of Z^k, stored flat in strictly increasing lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet {
    dim: usize,
    coords: Vec<i64>,
}

fn canonicalize(dim: usize, mut coords: Vec<i64>) -> Vec<i64> {
    if dim == 1 {
        coords.sort_unstable();
        coords.dedup();
        return coords;
    }
    let n = coords.len() / dim;
    let is_canonical = (1..n).all(|i| coords[(i - 1) * dim..i * dim] < coords[i * dim..(i + 1) * dim]);
    if is_canonical {
        return coords;
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_unstable_by(|&i, &j| coords[i * dim..(i + 1) * dim].cmp(&coords[j * dim..(j + 1) * dim]));
    let mut out: Vec<i64> = Vec::with_capacity(coords.len());
    for i in idx {
        let p = &coords[i * dim..(i + 1) * dim];
        if out.len() >= dim && &out[out.len() - dim..] == p {
            continue;
        }
        out.extend_from_slice(p);
    }
    out
}

impl PointSet {
    /// Builds a canonical set from arbitrary (possibly repeated, unsorted) points.
    pub fn new<I, P>(dim: usize, points: I) -> Result<Self>
    where
        I: IntoIterator<Item = P>,
        P: AsRef<[i64]>,
    {
        if dim == 0 {
            return Err(Error::Argument("point sets need dimension at least 1".into()));
        }
        let mut coords = Vec::new();
        for p in points {
            let p = p.as_ref();
            if p.len() != dim {
                return Err(Error::Dimension { expected: dim, found: p.len() });
            }
            coords.extend_from_slice(p);
        }
        Ok(PointSet { dim, coords: canonicalize(dim, coords) })
    }

    /// One-dimensional set from integer values.
    pub fn from_values<I: IntoIterator<Item = i64>>(values: I) -> Self {
        PointSet { dim: 1, coords: canonicalize(1, values.into_iter().collect()) }
    }

    /// Set from a flat coordinate buffer (`dim` entries per point).
    pub fn from_flat(dim: usize, coords: Vec<i64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Argument("point sets need dimension at least 1".into()));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::Argument(format!(
                "flat buffer of length {} is not a multiple of dimension {dim}",
                coords.len()
            )));
        }
        Ok(PointSet { dim, coords: canonicalize(dim, coords) })
    }

    pub(crate) fn from_canonical(dim: usize, coords: Vec<i64>) -> Self {
        debug_assert!(coords.len().is_multiple_of(dim));
        debug_assert!({
            let n = coords.len() / dim;
            (1..n).all(|i| coords[(i - 1) * dim..i * dim] < coords[i * dim..(i + 1) * dim])
        });
        PointSet { dim, coords }
    }

    pub fn empty(dim: usize) -> Self {
        assert!(dim > 0);
        PointSet { dim, coords: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, i64> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn point(&self, i: usize) -> &[i64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    /// Flat coordinates in canonical order. For `dim == 1` these are the values.
    pub fn flat(&self) -> &[i64] {
        &self.coords
    }

    pub fn to_vecs(&self) -> Vec<Vec<i64>> {
        self.iter().map(<[i64]>::to_vec).collect()
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        if p.len() != self.dim {
            return false;
        }
        let n = self.len();
        let (mut lo, mut hi) = (0, n);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.point(mid).cmp(p) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    pub fn first(&self) -> Option<&[i64]> {
        (!self.is_empty()).then(|| self.point(0))
    }

    pub fn last(&self) -> Option<&[i64]> {
        (!self.is_empty()).then(|| self.point(self.len() - 1))
    }

    /// Per-coordinate (min, max), or `None` for the empty set.
    pub fn bounding_box(&self) -> Option<(Vec<i64>, Vec<i64>)> {
        let mut it = self.iter();
        let first = it.next()?;
        let mut lo = first.to_vec();
        let mut hi = first.to_vec();
        for p in it {
            for i in 0..self.dim {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        Some((lo, hi))
    }

    /// Largest coordinate extent `max_i (hi_i - lo_i)`.
    pub fn diameter(&self) -> u64 {
        self.bounding_box()
            .map(|(lo, hi)| {
                lo.iter()
                    .zip(hi.iter())
                    .map(|(l, h)| (*h as i128 - *l as i128) as u64)
                    .max()
                    .unwrap_or(0)
            })
            .unwrap_or(0)
    }

    pub fn translate(&self, t: &[i64]) -> Result<Self> {
        self.check_dim(t.len())?;
        let mut coords = Vec::with_capacity(self.coords.len());
        for p in self.iter() {
            for (x, s) in p.iter().zip(t.iter()) {
                coords.push(x.checked_add(*s).ok_or(Error::Overflow("translate"))?);
            }
        }
        // translation preserves lexicographic order
        Ok(PointSet::from_canonical(self.dim, coords))
    }

    pub fn is_subset_of(&self, other: &PointSet) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let mut j = 0;
        let m = other.len();
        for p in self.iter() {
            while j < m && other.point(j) < p {
                j += 1;
            }
            if j == m || other.point(j) != p {
                return false;
            }
            j += 1;
        }
        true
    }

    pub fn union(&self, other: &PointSet) -> Result<PointSet> {
        self.check_dim(other.dim)?;
        let mut coords = self.coords.clone();
        coords.extend_from_slice(&other.coords);
        Ok(PointSet { dim: self.dim, coords: canonicalize(self.dim, coords) })
    }

    pub fn intersection(&self, other: &PointSet) -> Result<PointSet> {
        self.check_dim(other.dim)?;
        let coords = self.iter().filter(|p| other.contains(p)).flatten().copied().collect();
        Ok(PointSet::from_canonical(self.dim, coords))
    }

    pub fn filter<F: FnMut(&[i64]) -> bool>(&self, mut keep: F) -> PointSet {
        let coords = self.iter().filter(|p| keep(p)).flatten().copied().collect();
        PointSet::from_canonical(self.dim, coords)
    }

    pub(crate) fn check_dim(&self, found: usize) -> Result<()> {
        if self.dim != found {
            return Err(Error::Dimension { expected: self.dim, found });
        }
        Ok(())
    }

    pub(crate) fn check_nonempty(&self, what: &'static str) -> Result<()> {
        if self.is_empty() {
            return Err(Error::EmptyInput(what));
        }
        Ok(())
    }

    pub(crate) fn require_dim1(&self, what: &str) -> Result<()> {
        if self.dim != 1 {
            return Err(Error::Argument(format!("{what} needs a one-dimensional set, got dimension {}", self.dim)));
        }
        Ok(())
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PointSet(dim={}, {{", self.dim)?;
        for (i, p) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if self.dim == 1 {
                write!(f, "{}", p[0])?;
            } else {
                write!(f, "{p:?}")?;
            }
        }
        write!(f, "}})")
    }
}

/// Axis-aligned box `prod [0, n_i]` of lattice points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeBox {
    sides: Vec<u64>,
}

impl LatticeBox {
    pub fn new(sides: Vec<u64>) -> Result<Self> {
        if sides.is_empty() {
            return Err(Error::Argument("a box needs dimension at least 1".into()));
        }
        let b = LatticeBox { sides };
        b.point_count()?;
        Ok(b)
    }

    pub fn cube(dim: usize, side: u64) -> Result<Self> {
        LatticeBox::new(vec![side; dim])
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    pub fn sides(&self) -> &[u64] {
        &self.sides
    }

    /// `prod (n_i + 1)`.
    pub fn point_count(&self) -> Result<u128> {
        self.sides.iter().try_fold(1u128, |acc, &s| {
            acc.checked_mul(s as u128 + 1).ok_or(Error::Overflow("box point count"))
        })
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        p.len() == self.sides.len() && p.iter().zip(self.sides.iter()).all(|(&x, &s)| x >= 0 && (x as u64) <= s)
    }

    pub fn points(&self, cap: u64) -> Result<PointSet> {
        let count = self.point_count()?;
        if count > cap as u128 {
            return Err(Error::capacity("box enumeration", count, cap as u128));
        }
        let dim = self.dim();
        let mut coords = Vec::with_capacity(count as usize * dim);
        let mut cur = vec![0i64; dim];
        loop {
            coords.extend_from_slice(&cur);
            // odometer, last coordinate fastest keeps lexicographic order
            let mut i = dim;
            loop {
                if i == 0 {
                    return Ok(PointSet::from_canonical(dim, coords));
                }
                i -= 1;
                if (cur[i] as u64) < self.sides[i] {
                    cur[i] += 1;
                    break;
                }
                cur[i] = 0;
            }
        }
    }
}

fn check_pair(a: &PointSet, b: &PointSet) -> Result<()> {
    a.check_dim(b.dim())?;
    a.check_nonempty("sumset operand")?;
    b.check_nonempty("sumset operand")
}

/// Minkowski sum `{x + y : x in a, y in b}`.
pub fn sumset(a: &PointSet, b: &PointSet) -> Result<PointSet> {
    check_pair(a, b)?;
    sumset_with(a, b, select_kernel(a, b)?)
}

/// Coordinate-wise scalar multiple `{c x : x in a}`.
pub fn dilate(a: &PointSet, c: i64) -> Result<PointSet> {
    a.check_nonempty("dilate")?;
    let coords = a
        .flat()
        .iter()
        .map(|x| x.checked_mul(c).ok_or(Error::Overflow("dilate")))
        .collect::<Result<Vec<i64>>>()?;
    PointSet::from_flat(a.dim(), coords)
}

/// h-fold sumset `a + ... + a`, via `h A = floor(h/2) A + ceil(h/2) A`.
pub fn iterated_sumset(a: &PointSet, h: u64) -> Result<PointSet> {
    a.check_nonempty("iterated sumset")?;
    if h == 0 {
        return Err(Error::Argument("0-fold sumset is undefined".into()));
    }
    if h == 1 {
        return Ok(a.clone());
    }
    let half = iterated_sumset(a, h / 2)?;
    if h.is_multiple_of(2) {
        sumset(&half, &half)
    } else {
        sumset(&half, &sumset(&half, a)?)
    }
}

/// `{-x : x in a}`.
pub fn minus(a: &PointSet) -> Result<PointSet> {
    dilate(a, -1)
}

/// `a - b = a + (-b)`.
pub fn difference_set(a: &PointSet, b: &PointSet) -> Result<PointSet> {
    check_pair(a, b)?;
    sumset(a, &minus(b)?)
}

/// Divides a one-dimensional set containing 0 by the gcd of its elements.
pub fn gcd_normalize(a: &PointSet) -> Result<(PointSet, u64)> {
    a.require_dim1("gcd_normalize")?;
    a.check_nonempty("gcd_normalize")?;
    if !a.contains(&[0]) {
        return Err(Error::Argument("gcd_normalize needs a set containing 0".into()));
    }
    let r = a.flat().iter().fold(0i64, |g, &x| g.gcd(&x));
    if r == 0 {
        return Err(Error::Argument("gcd of an all-zero set is undefined".into()));
    }
    let scaled = PointSet::from_canonical(1, a.flat().iter().map(|x| x / r).collect());
    Ok((scaled, r as u64))
}
