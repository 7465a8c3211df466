//! The additive hull: a smallest `X + P` containing `B` with `|X| <= n` and `P` a proper GAP of rank `<= k`.
//!
//! Exact mode normalizes `min B = 0` and searches GAPs with strictly increasing
//! positive steps in `[1, diam B]` and positive sides, in the order
//! `(rank, steps, sides)`. For each GAP a branch and bound picks translates:
//! the least uncovered element `u` must be covered by some `x = u - p`.
//! Only strictly smaller totals replace the incumbent, so ties go to the first
//! candidate in that order. Exponential; meant for small inputs.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{Gap, DEFAULT_ENUM_CAP};
use crate::error::{Error, Result};
use crate::lattice::{sumset, PointSet};
use crate::util::for_each_combination;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HullStatus {
    ExactOptimal,
    CertifiedUpperBound,
}

impl fmt::Display for HullStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HullStatus::ExactOptimal => "exact-optimal",
            HullStatus::CertifiedUpperBound => "certified-upper-bound",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HullMode {
    Exact,
    Heuristic,
}

impl FromStr for HullMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(HullMode::Exact),
            "heuristic" => Ok(HullMode::Heuristic),
            other => Err(Error::Argument(format!("unknown hull mode '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HullLimits {
    pub max_points: usize,
    pub max_diameter: u64,
}

impl Default for HullLimits {
    fn default() -> Self {
        HullLimits { max_points: 12, max_diameter: 200 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapHullResult {
    pub x_set: PointSet,
    pub gap: Gap,
    pub total_size: u64,
    pub status: HullStatus,
}

impl GapHullResult {
    /// Checks `b ⊆ X + P`, `|X| <= n`, 1-properness and the recorded size.
    pub fn verify(&self, b: &PointSet, n: u64) -> Result<()> {
        if self.x_set.len() as u64 > n {
            return Err(Error::Verification(format!("{} translates exceed the budget {n}", self.x_set.len())));
        }
        if !self.gap.is_t_proper(1, 1, DEFAULT_ENUM_CAP)? {
            return Err(Error::Verification(format!("{} is not proper", self.gap)));
        }
        let cover = sumset(&self.x_set, &self.gap.enumerate(DEFAULT_ENUM_CAP)?)?;
        if !b.is_subset_of(&cover) {
            return Err(Error::Verification("X + P does not contain B".into()));
        }
        if cover.len() as u64 != self.total_size {
            return Err(Error::Verification(format!("recorded size {} but |X+P| = {}", self.total_size, cover.len())));
        }
        Ok(())
    }
}

struct Candidate {
    coeffs: Vec<i64>,
    sides: Vec<u64>,
    xs: Vec<i64>,
    size: u64,
}

pub fn gap_hull(b: &PointSet, n: u64, k: usize, mode: HullMode, limits: HullLimits) -> Result<GapHullResult> {
    b.require_dim1("gap_hull")?;
    b.check_nonempty("gap_hull")?;
    if n == 0 {
        return Err(Error::Argument("translate budget n must be positive".into()));
    }
    let base = b.flat()[0];
    let vals: Vec<i64> = b.flat().iter().map(|v| v - base).collect();
    let diam = *vals.last().unwrap() as u64;
    if k == 0 || vals.len() as u64 <= n {
        if vals.len() as u64 > n {
            return Err(Error::NoCover { len: vals.len(), n });
        }
        let cand = Candidate { coeffs: vec![], sides: vec![], xs: vals.clone(), size: vals.len() as u64 };
        return finish(b, n, k, base, cand, HullStatus::ExactOptimal);
    }
    match mode {
        HullMode::Exact => {
            if vals.len() > limits.max_points {
                return Err(Error::capacity("exact hull point count", vals.len() as u128, limits.max_points as u128));
            }
            if diam > limits.max_diameter {
                return Err(Error::capacity("exact hull diameter", diam as u128, limits.max_diameter as u128));
            }
            let cand = exact_search(&vals, n, k)?;
            finish(b, n, k, base, cand, HullStatus::ExactOptimal)
        }
        HullMode::Heuristic => {
            let cand = heuristic_search(&vals, n, k)?;
            finish(b, n, k, base, cand, HullStatus::CertifiedUpperBound)
        }
    }
}

fn finish(b: &PointSet, n: u64, k: usize, base: i64, cand: Candidate, status: HullStatus) -> Result<GapHullResult> {
    let mut sides = cand.sides;
    let mut coeffs = cand.coeffs;
    sides.resize(k, 0);
    coeffs.resize(k, 0);
    let gap = Gap::new(sides, coeffs, 0)?;
    let x_set = PointSet::from_values(cand.xs.iter().map(|x| x + base));
    let result = GapHullResult { x_set, gap, total_size: cand.size, status };
    result.verify(b, n)?;
    Ok(result)
}

fn trivial_candidate(vals: &[i64]) -> Candidate {
    let diam = *vals.last().unwrap();
    let g = vals.iter().fold(0i64, |acc, v| acc.gcd(v));
    Candidate { coeffs: vec![g], sides: vec![(diam / g) as u64], xs: vec![0], size: (diam / g) as u64 + 1 }
}

fn exact_search(vals: &[i64], n: u64, k: usize) -> Result<Candidate> {
    let diam = *vals.last().unwrap();
    let mut best: Option<Candidate> = None;
    for j in 1..=k.min(diam as usize) {
        let mut failure: Option<Error> = None;
        for_each_combination(diam as usize, j, |idx| {
            let coeffs: Vec<i64> = idx.iter().map(|&i| i as i64 + 1).collect();
            let mut sides = vec![1u64; j];
            loop {
                let bound = best.as_ref().map_or(diam as u64 + 2, |c| c.size);
                let count: u64 = sides.iter().map(|s| s + 1).product();
                if count < bound {
                    let gap = Gap { sides: sides.clone(), coeffs: coeffs.clone(), offset: 0 };
                    match gap.is_t_proper(1, 1, DEFAULT_ENUM_CAP) {
                        Ok(true) => match gap.enumerate(DEFAULT_ENUM_CAP) {
                            Ok(image) => {
                                if let Some((size, xs)) = best_cover(vals, image.flat(), n, bound) {
                                    best = Some(Candidate { coeffs: coeffs.clone(), sides: sides.clone(), xs, size });
                                }
                            }
                            Err(e) => {
                                failure = Some(e);
                                return false;
                            }
                        },
                        Ok(false) => {}
                        Err(e) => {
                            failure = Some(e);
                            return false;
                        }
                    }
                }
                if !next_sides(&mut sides, best.as_ref().map_or(diam as u64 + 2, |c| c.size)) {
                    break;
                }
            }
            true
        });
        if let Some(e) = failure {
            return Err(e);
        }
    }
    best.ok_or_else(|| Error::Verification("exact hull search found no cover".into()))
}

/// Next side vector in lexicographic order with `prod (s_i + 1) < bound`, all `s_i >= 1`.
fn next_sides(sides: &mut [u64], bound: u64) -> bool {
    let mut i = sides.len();
    while i > 0 {
        i -= 1;
        sides[i] += 1;
        let count: u64 = sides.iter().map(|s| s + 1).product();
        if count < bound {
            return true;
        }
        sides[i] = 1;
    }
    false
}

/// Fixed-width bitset over `[lo, lo + len)`.
#[derive(Clone)]
struct Bits {
    words: Vec<u64>,
}

impl Bits {
    fn new(len: usize) -> Self {
        Bits { words: vec![0; len.div_ceil(64)] }
    }

    fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }
}

/// Smallest `|X + P|` below `bound` over `X` with `|X| <= n` and `vals ⊆ X + P`.
fn best_cover(vals: &[i64], p: &[i64], n: u64, bound: u64) -> Option<(u64, Vec<i64>)> {
    let pmax = *p.last().unwrap();
    let lo = -pmax;
    let len = (*vals.last().unwrap() + 2 * pmax + 1) as usize;
    let mut state = Search { vals, p, n, lo, best: bound, found: None, xs: Vec::new() };
    state.recurse(&Bits::new(len));
    state.found.map(|xs| (state.best, xs))
}

struct Search<'a> {
    vals: &'a [i64],
    p: &'a [i64],
    n: u64,
    lo: i64,
    best: u64,
    found: Option<Vec<i64>>,
    xs: Vec<i64>,
}

impl Search<'_> {
    fn recurse(&mut self, covered: &Bits) {
        let uncovered = self.vals.iter().find(|&&v| !covered.get((v - self.lo) as usize));
        let Some(&u) = uncovered else {
            let size = covered.count();
            if size < self.best {
                self.best = size;
                let mut xs = self.xs.clone();
                xs.sort_unstable();
                self.found = Some(xs);
            }
            return;
        };
        if self.xs.len() as u64 == self.n {
            return;
        }
        for &pi in self.p.iter().rev() {
            let x = u - pi;
            let mut next = covered.clone();
            for &q in self.p {
                next.set((x + q - self.lo) as usize);
            }
            if next.count() >= self.best {
                continue;
            }
            self.xs.push(x);
            self.recurse(&next);
            self.xs.pop();
        }
    }
}

/// Difference-guided search: frequent differences and the gcd as steps, greedy translates.
fn heuristic_search(vals: &[i64], n: u64, k: usize) -> Result<Candidate> {
    const STEPS: usize = 6;
    const MAX_SIDE: i64 = 32;
    let mut best = trivial_candidate(vals);
    let diam = *vals.last().unwrap();
    let mut freq: HashMap<i64, usize> = HashMap::new();
    for (i, a) in vals.iter().enumerate() {
        for b in &vals[i + 1..] {
            *freq.entry(b - a).or_default() += 1;
        }
    }
    let mut diffs: Vec<(i64, usize)> = freq.into_iter().collect();
    diffs.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(&y.0)));
    let mut steps: Vec<i64> = diffs.iter().take(STEPS).map(|d| d.0).collect();
    steps.push(best.coeffs[0]);
    steps.sort_unstable();
    steps.dedup();

    for j in 1..=k.min(2).min(steps.len()) {
        let mut combos = Vec::new();
        for_each_combination(steps.len(), j, |idx| {
            combos.push(idx.iter().map(|&i| steps[i]).collect::<Vec<i64>>());
            true
        });
        for coeffs in combos {
            let limits: Vec<u64> = coeffs.iter().map(|&c| (diam / c).clamp(1, MAX_SIDE) as u64).collect();
            let mut sides = vec![1u64; j];
            loop {
                let gap = Gap::new(sides.clone(), coeffs.clone(), 0)?;
                let count = gap.box_count()?;
                if count < best.size as u128 && gap.is_t_proper(1, 1, DEFAULT_ENUM_CAP)? {
                    let image = gap.enumerate(DEFAULT_ENUM_CAP)?;
                    if let Some(xs) = greedy_translates(vals, image.flat(), n) {
                        let size = sumset(&PointSet::from_values(xs.iter().copied()), &image)?.len() as u64;
                        if size < best.size {
                            best = Candidate { coeffs: coeffs.clone(), sides: sides.clone(), xs, size };
                        }
                    }
                }
                let mut i = j;
                let mut advanced = false;
                while i > 0 {
                    i -= 1;
                    if sides[i] < limits[i] {
                        sides[i] += 1;
                        advanced = true;
                        break;
                    }
                    sides[i] = 1;
                }
                if !advanced {
                    break;
                }
            }
        }
    }
    Ok(best)
}

fn greedy_translates(vals: &[i64], p: &[i64], n: u64) -> Option<Vec<i64>> {
    let mut uncovered: Vec<i64> = vals.to_vec();
    let mut xs = Vec::new();
    while let Some(&u) = uncovered.first() {
        if xs.len() as u64 == n {
            return None;
        }
        let gain = |x: i64| uncovered.iter().filter(|&&v| p.binary_search(&(v - x)).is_ok()).count();
        let x = p.iter().map(|&q| u - q).max_by(|&a, &b| gain(a).cmp(&gain(b)).then(b.cmp(&a)))?;
        uncovered.retain(|&v| p.binary_search(&(v - x)).is_err());
        xs.push(x);
    }
    xs.sort_unstable();
    Some(xs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(v: &[i64]) -> PointSet {
        PointSet::from_values(v.iter().copied())
    }

    fn hull(v: &[i64], n: u64, k: usize, mode: HullMode) -> Result<GapHullResult> {
        gap_hull(&ps(v), n, k, mode, HullLimits::default())
    }

    #[test]
    fn interval_is_its_own_hull() {
        let r = hull(&[0, 1, 2, 3, 4], 1, 1, HullMode::Exact).unwrap();
        assert_eq!(r.total_size, 5);
        assert_eq!(r.x_set, ps(&[0]));
        assert_eq!(r.gap.enumerate(100).unwrap(), ps(&[0, 1, 2, 3, 4]));
        assert_eq!(r.status, HullStatus::ExactOptimal);
    }

    #[test]
    fn two_blocks() {
        let r = hull(&[0, 1, 10, 11], 2, 1, HullMode::Exact).unwrap();
        assert_eq!(r.total_size, 4);
        let h = hull(&[0, 1, 10, 11], 2, 1, HullMode::Heuristic).unwrap();
        assert_eq!(h.total_size, 4);
        assert_eq!(h.status, HullStatus::CertifiedUpperBound);
    }

    #[test]
    fn rank_zero() {
        assert!(matches!(hull(&[0, 3, 6, 100], 1, 0, HullMode::Exact), Err(Error::NoCover { len: 4, n: 1 })));
        let r = hull(&[0, 3, 6, 100], 4, 0, HullMode::Exact).unwrap();
        assert_eq!(r.total_size, 4);
        assert_eq!(r.gap.dim(), 0);
    }

    #[test]
    fn translated_input() {
        let r = hull(&[100, 103, 106, 109], 1, 1, HullMode::Exact).unwrap();
        assert_eq!(r.total_size, 4);
        assert_eq!(r.x_set, ps(&[100]));
    }

    #[test]
    fn rank_two_beats_rank_one() {
        let b = [0, 1, 2, 10, 11, 12, 20, 21, 22];
        assert_eq!(hull(&b, 1, 2, HullMode::Exact).unwrap().total_size, 9);
        assert!(hull(&b, 1, 1, HullMode::Exact).unwrap().total_size > 9);
        assert_eq!(hull(&b, 1, 2, HullMode::Heuristic).unwrap().total_size, 9);
    }

    #[test]
    fn caps() {
        let many: Vec<i64> = (0..13).map(|i| i * 2).collect();
        assert!(matches!(hull(&many, 1, 1, HullMode::Exact), Err(Error::Capacity { .. })));
        assert!(matches!(hull(&[0, 1, 500], 1, 1, HullMode::Exact), Err(Error::Capacity { .. })));
        assert!(hull(&[0, 1, 500], 1, 1, HullMode::Heuristic).is_ok());
    }

    #[test]
    fn mode_parse() {
        assert_eq!("exact".parse::<HullMode>().unwrap(), HullMode::Exact);
        assert!("fast".parse::<HullMode>().is_err());
    }
}
