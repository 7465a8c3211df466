//! Generalized arithmetic progressions `P = offset + phi(C ∩ Z^k)` with
//! `C = prod [0, n_i]` and `phi(x) = sum c_i x_i`.

mod hull;

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{minus, PointSet};

pub use hull::{gap_hull, GapHullResult, HullLimits, HullMode, HullStatus};

/// Default cap on the number of box points any GAP enumeration may visit.
pub const DEFAULT_ENUM_CAP: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gap {
    sides: Vec<u64>,
    coeffs: Vec<i64>,
    offset: i64,
}

impl Gap {
    pub fn new(sides: Vec<u64>, coeffs: Vec<i64>, offset: i64) -> Result<Self> {
        if sides.len() != coeffs.len() {
            return Err(Error::Dimension { expected: sides.len(), found: coeffs.len() });
        }
        if sides.iter().any(|&s| s > i64::MAX as u64) {
            return Err(Error::Argument("side length out of range".into()));
        }
        let g = Gap { sides, coeffs, offset };
        g.image_bounds()?;
        Ok(g)
    }

    /// The 0-dimensional GAP `{offset}`.
    pub fn point(offset: i64) -> Self {
        Gap { sides: Vec::new(), coeffs: Vec::new(), offset }
    }

    /// `{offset, offset + step, ..., offset + side * step}`.
    pub fn progression(offset: i64, step: i64, side: u64) -> Result<Self> {
        Gap::new(vec![side], vec![step], offset)
    }

    /// Centered GAP on the box `prod [-h_i, h_i]`; its image satisfies `P = -P`.
    pub fn symmetric(half_sides: &[u64], coeffs: Vec<i64>) -> Result<Self> {
        let sides: Vec<u64> = half_sides.iter().map(|h| 2 * h).collect();
        let shift: i128 = half_sides.iter().zip(coeffs.iter()).map(|(&h, &c)| h as i128 * c as i128).sum();
        let offset = i64::try_from(-shift).map_err(|_| Error::Overflow("symmetric gap offset"))?;
        Gap::new(sides, coeffs, offset)
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    pub fn sides(&self) -> &[u64] {
        &self.sides
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// Number of box lattice points `prod (n_i + 1)`; equals `|P|` when 1-proper.
    pub fn box_count(&self) -> Result<u128> {
        self.sides.iter().try_fold(1u128, |acc, &s| {
            acc.checked_mul(s as u128 + 1).ok_or(Error::Overflow("gap box count"))
        })
    }

    /// Smallest and largest element of the image.
    pub fn image_bounds(&self) -> Result<(i64, i64)> {
        let mut lo = self.offset as i128;
        let mut hi = self.offset as i128;
        for (&s, &c) in self.sides.iter().zip(self.coeffs.iter()) {
            let reach = s as i128 * c as i128;
            if reach < 0 {
                lo += reach;
            } else {
                hi += reach;
            }
        }
        match (i64::try_from(lo), i64::try_from(hi)) {
            (Ok(l), Ok(h)) => Ok((l, h)),
            _ => Err(Error::Overflow("gap image")),
        }
    }

    /// True when the image is symmetric by construction (centered even box).
    pub fn is_centered(&self) -> bool {
        self.sides.iter().all(|s| s % 2 == 0)
            && self
                .sides
                .iter()
                .zip(self.coeffs.iter())
                .map(|(&s, &c)| (s / 2) as i128 * c as i128)
                .sum::<i128>()
                == -(self.offset as i128)
    }

    /// The image `P` as a one-dimensional point set.
    pub fn enumerate(&self, cap: u64) -> Result<PointSet> {
        let count = self.box_count()?;
        if count > cap as u128 {
            return Err(Error::capacity("gap enumeration", count, cap as u128));
        }
        let mut values = Vec::with_capacity(count as usize);
        let k = self.dim();
        let mut cur = vec![0u64; k];
        let mut value = self.offset;
        loop {
            values.push(value);
            let mut i = k;
            loop {
                if i == 0 {
                    return Ok(PointSet::from_values(values));
                }
                i -= 1;
                if cur[i] < self.sides[i] {
                    cur[i] += 1;
                    value += self.coeffs[i];
                    break;
                }
                value -= self.coeffs[i] * cur[i] as i64;
                cur[i] = 0;
            }
        }
    }

    pub fn contains(&self, value: i64, cap: u64) -> Result<bool> {
        let (lo, hi) = self.image_bounds()?;
        if value < lo || value > hi {
            return Ok(false);
        }
        Ok(self.enumerate(cap)?.contains(&[value]))
    }

    /// Whether `phi` is injective on the lattice points of `t C` (anchored at the origin corner).
    pub fn is_t_proper(&self, t_num: u64, t_den: u64, cap: u64) -> Result<bool> {
        if t_den == 0 {
            return Err(Error::Argument("properness factor has zero denominator".into()));
        }
        let bounds: Vec<u128> = self.sides.iter().map(|&s| s as u128 * t_num as u128 / t_den as u128).collect();
        match self.dim() {
            0 => Ok(true),
            1 => Ok(self.coeffs[0] != 0 || bounds[0] == 0),
            2 => Ok(injective_on_plane_box(self.coeffs[0], self.coeffs[1], bounds[0], bounds[1])),
            _ => injective_on_box(&self.coeffs, &bounds, cap),
        }
    }

    pub fn is_proper(&self) -> bool {
        self.is_t_proper(1, 1, u64::MAX).unwrap_or(false)
    }

    pub fn is_n_full(&self, n: u64) -> bool {
        self.sides.iter().all(|&s| s >= n)
    }

    /// Rescales the box: `n_i -> floor(n_i * num / den)`, same coefficients.
    ///
    /// The offset is kept, except that a centered GAP stays centered (its
    /// sides are then rounded down to even numbers).
    pub fn scale(&self, num: u64, den: u64) -> Result<Gap> {
        if den == 0 {
            return Err(Error::Argument("scale denominator must be positive".into()));
        }
        let scaled = |s: u64| -> Result<u64> {
            u64::try_from(s as u128 * num as u128 / den as u128).map_err(|_| Error::Overflow("gap scale"))
        };
        if self.is_centered() && self.dim() > 0 {
            let halves = self.sides.iter().map(|&s| scaled(s / 2)).collect::<Result<Vec<u64>>>()?;
            return Gap::symmetric(&halves, self.coeffs.clone());
        }
        let sides = self.sides.iter().map(|&s| scaled(s)).collect::<Result<Vec<u64>>>()?;
        Gap::new(sides, self.coeffs.clone(), self.offset)
    }

    /// The l-fold sumset `l . P`: box scaled by `l`, offset multiplied by `l`.
    pub fn multiple(&self, ell: u64) -> Result<Gap> {
        if ell == 0 {
            return Err(Error::Argument("0-fold sumset is undefined".into()));
        }
        let sides = self
            .sides
            .iter()
            .map(|&s| s.checked_mul(ell).ok_or(Error::Overflow("gap multiple")))
            .collect::<Result<Vec<u64>>>()?;
        let offset = i64::try_from(self.offset as i128 * ell as i128).map_err(|_| Error::Overflow("gap multiple"))?;
        Gap::new(sides, self.coeffs.clone(), offset)
    }

    pub fn translate(&self, shift: i64) -> Result<Gap> {
        let offset = self.offset.checked_add(shift).ok_or(Error::Overflow("gap translate"))?;
        Gap::new(self.sides.clone(), self.coeffs.clone(), offset)
    }
}

/// `c1 v1 + c2 v2 = 0` has a non-zero solution with `|v1| <= b1`, `|v2| <= b2` iff not injective.
fn injective_on_plane_box(c1: i64, c2: i64, b1: u128, b2: u128) -> bool {
    match (c1 == 0, c2 == 0) {
        (true, true) => b1 == 0 && b2 == 0,
        (true, false) => b1 == 0,
        (false, true) => b2 == 0,
        (false, false) => {
            let g = c1.gcd(&c2);
            let step1 = (c2 / g).unsigned_abs() as u128;
            let step2 = (c1 / g).unsigned_abs() as u128;
            step1 > b1 || step2 > b2
        }
    }
}

/// Injectivity of `x -> sum c_i x_i` on `prod [0, bounds_i]`, by collision detection.
pub fn injective_on_box(coeffs: &[i64], bounds: &[u128], cap: u64) -> Result<bool> {
    let count = bounds.iter().try_fold(1u128, |acc, &b| acc.checked_mul(b + 1)).unwrap_or(u128::MAX);
    if count > cap as u128 {
        return Err(Error::capacity("properness check", count, cap as u128));
    }
    let k = coeffs.len();
    let mut values: Vec<i128> = Vec::with_capacity(count as usize);
    let mut cur = vec![0u128; k];
    let mut value: i128 = 0;
    'outer: loop {
        values.push(value);
        let mut i = k;
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            if cur[i] < bounds[i] {
                cur[i] += 1;
                value += coeffs[i] as i128;
                break;
            }
            value -= coeffs[i] as i128 * cur[i] as i128;
            cur[i] = 0;
        }
    }
    values.sort_unstable();
    Ok(values.windows(2).all(|w| w[0] != w[1]))
}

/// No difference of distinct elements of `x` lies in `P ∪ -P`.
pub fn is_separated(x: &PointSet, g: &Gap, cap: u64) -> Result<bool> {
    x.require_dim1("is_separated")?;
    if x.len() < 2 {
        return Ok(true);
    }
    let image = g.enumerate(cap)?;
    let sym = image.union(&minus(&image)?)?;
    let vals = x.flat();
    for i in 0..vals.len() {
        for j in 0..vals.len() {
            if i != j {
                let d = vals[i].checked_sub(vals[j]).ok_or(Error::Overflow("separation difference"))?;
                if sym.contains(&[d]) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Gap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "gap k={} sides={} coeffs={} offset={}",
            self.dim(),
            join(&self.sides),
            join(&self.coeffs),
            self.offset
        )
    }
}

impl FromStr for Gap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse { line: 1, msg: format!("{msg} in gap record '{s}'") };
        let mut words = s.split_whitespace();
        if words.next() != Some("gap") {
            return Err(bad("missing 'gap' tag"));
        }
        let mut field = |name: &str| -> Result<String> {
            let w = words.next().ok_or_else(|| bad(&format!("missing field {name}")))?;
            w.strip_prefix(name)
                .and_then(|r| r.strip_prefix('='))
                .map(str::to_string)
                .ok_or_else(|| bad(&format!("expected {name}=")))
        };
        let k: usize = field("k")?.parse().map_err(|_| bad("bad k"))?;
        let list = |v: String| -> Vec<String> {
            if v.is_empty() {
                Vec::new()
            } else {
                v.split(',').map(str::to_string).collect()
            }
        };
        let sides = list(field("sides")?)
            .iter()
            .map(|x| x.parse::<u64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| bad("bad sides"))?;
        let coeffs = list(field("coeffs")?)
            .iter()
            .map(|x| x.parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| bad("bad coeffs"))?;
        let offset: i64 = field("offset")?.parse().map_err(|_| bad("bad offset"))?;
        if words.next().is_some() {
            return Err(bad("trailing tokens"));
        }
        if sides.len() != k || coeffs.len() != k {
            return Err(bad("k does not match the field lengths"));
        }
        Gap::new(sides, coeffs, offset)
    }
}

impl Serialize for Gap {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Gap {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
