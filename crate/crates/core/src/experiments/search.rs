use std::fmt;
use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{parse_rational, Rational};
use crate::geometry::{cover_at_most, min_cover_count, simplex, CoverCertificate};
use crate::lattice::{sumset_len, LatticeBox, PointSet};
use crate::util::{binomial, for_each_combination};

/// Side of the grid `[0, 4]^2` searched exhaustively.
pub const EXHAUSTIVE_SIDE: i64 = 5;
pub const EXHAUSTIVE_MAX_SIZE: usize = 9;
const RANDOM_START_ATTEMPTS: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchStrategy {
    Exhaustive,
    Local,
}

impl fmt::Display for SearchStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchStrategy::Exhaustive => "exhaustive",
            SearchStrategy::Local => "local",
        })
    }
}

impl FromStr for SearchStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(SearchStrategy::Exhaustive),
            "local" => Ok(SearchStrategy::Local),
            _ => Err(Error::Argument(format!("unknown search strategy {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchParams {
    pub k: usize,
    pub n: u64,
    pub size: usize,
    /// Relocation attempts shared by the local restarts; unused by the exhaustive scan.
    pub budget: u64,
    pub strategy: SearchStrategy,
    pub seed: u64,
}

/// A set of cover number greater than `n` with its doubling `|A+A|/|A|`.
///
/// The certificate is an optimal cover, so `cover.count` is the cover number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrontierRecord {
    pub k: usize,
    pub n: u64,
    pub size: usize,
    pub set: PointSet,
    pub doubling: String,
    pub sumset_size: u64,
    pub cover: CoverCertificate,
    pub strategy: SearchStrategy,
    pub seed: u64,
    pub budget: u64,
}

impl FrontierRecord {
    pub fn build(set: PointSet, n: u64, strategy: SearchStrategy, seed: u64, budget: u64) -> Result<Self> {
        let s = sumset_len(&set, &set)?;
        let cover = min_cover_count(&set)?;
        let rec = FrontierRecord {
            k: set.dim(),
            n,
            size: set.len(),
            doubling: Rational::new(s.into(), set.len().into()).to_string(),
            sumset_size: s as u64,
            cover,
            strategy,
            seed,
            budget,
            set,
        };
        rec.verify()?;
        Ok(rec)
    }

    pub fn ratio(&self) -> Result<Rational> {
        parse_rational(&self.doubling).ok_or_else(|| Error::Verification(format!("unparsable ratio {:?}", self.doubling)))
    }

    /// Recomputes the doubling and the cover number from the set alone.
    pub fn verify(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Verification(msg));
        if self.set.dim() != self.k || self.set.len() != self.size || self.set.is_empty() {
            return fail(format!("set does not have dimension {} and size {}", self.k, self.size));
        }
        let s = sumset_len(&self.set, &self.set)?;
        if s != self.sumset_size as u128 {
            return fail(format!("|A+A| is {s}, record says {}", self.sumset_size));
        }
        if self.ratio()? != Rational::new(s.into(), self.size.into()) {
            return fail(format!("doubling {} does not match {s}/{}", self.doubling, self.size));
        }
        self.cover.verify(&self.set)?;
        if self.cover.count <= self.n {
            return fail(format!("certificate count {} does not exceed n = {}", self.cover.count, self.n));
        }
        if cover_at_most(&self.set, self.cover.count - 1)?.is_some() {
            return fail(format!("a cover with fewer than {} hyperplanes exists", self.cover.count));
        }
        Ok(())
    }
}

fn min_feasible_size(k: usize, n: u64) -> u64 {
    if k == 1 {
        n + 1
    } else {
        n + 2
    }
}

/// Best set of `size` points with cover number above `n`, minimizing `|A+A|/|A|`.
pub fn extremal_search(p: &SearchParams) -> Result<FrontierRecord> {
    if p.k == 0 || p.size == 0 {
        return Err(Error::Argument("dimension and size must be positive".into()));
    }
    if (p.size as u64) < min_feasible_size(p.k, p.n) {
        return Err(Error::Infeasible(format!(
            "every set of {} points in dimension {} lies on {} parallel hyperplanes",
            p.size,
            p.k,
            p.size.saturating_sub(1).max(1)
        )));
    }
    let best = match p.strategy {
        SearchStrategy::Exhaustive => exhaustive(p)?,
        SearchStrategy::Local => local(p)?,
    };
    let set = best.ok_or_else(|| Error::Infeasible(format!("no set of size {} with cover number above {} was found", p.size, p.n)))?;
    FrontierRecord::build(set, p.n, p.strategy, p.seed, p.budget)
}

/// All subsets of `[0, 4]^2` touching both axes, in lexicographic order of index sets.
fn exhaustive(p: &SearchParams) -> Result<Option<PointSet>> {
    if p.k != 2 || p.size > EXHAUSTIVE_MAX_SIZE {
        return Err(Error::Argument(format!(
            "exhaustive search needs k = 2 and size <= {EXHAUSTIVE_MAX_SIZE}"
        )));
    }
    let grid: Vec<[i64; 2]> = (0..EXHAUSTIVE_SIDE).flat_map(|x| (0..EXHAUSTIVE_SIDE).map(move |y| [x, y])).collect();
    let sums = 2 * EXHAUSTIVE_SIDE - 1;
    let mut best: Option<(u32, Vec<usize>)> = None;
    let mut err = None;
    for_each_combination(grid.len(), p.size, |idx| {
        if idx.iter().all(|&i| grid[i][0] > 0) || idx.iter().all(|&i| grid[i][1] > 0) {
            return true;
        }
        let mut mask = 0u128;
        for (j, &i) in idx.iter().enumerate() {
            for &l in &idx[j..] {
                let (a, b) = (grid[i], grid[l]);
                mask |= 1u128 << ((a[0] + b[0]) * sums + a[1] + b[1]);
            }
        }
        let s = mask.count_ones();
        if best.as_ref().is_some_and(|(b, _)| s >= *b) {
            return true;
        }
        let set = PointSet::new(2, idx.iter().map(|&i| grid[i])).expect("grid points");
        match cover_at_most(&set, p.n) {
            Ok(None) => best = Some((s, idx.to_vec())),
            Ok(Some(_)) => {}
            Err(e) => {
                err = Some(e);
                return false;
            }
        }
        true
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(best.map(|(_, idx)| PointSet::new(2, idx.iter().map(|&i| grid[i])).expect("grid points")))
}

#[derive(Clone, Copy, Debug)]
enum Start {
    Simplex,
    BoxSlice,
    Random,
}

fn by_layer(set: &PointSet, size: usize) -> Result<PointSet> {
    let mut pts: Vec<&[i64]> = set.iter().collect();
    pts.sort_by_key(|q| (q.iter().sum::<i64>(), q.to_vec()));
    PointSet::new(set.dim(), pts.into_iter().take(size))
}

fn start_set(kind: Start, k: usize, size: usize, rng: &mut ChaCha8Rng) -> Result<PointSet> {
    match kind {
        Start::Simplex => {
            let mut n = 0u64;
            while binomial(n + k as u64, k as u64) < size as u128 {
                n += 1;
            }
            by_layer(&simplex(k, n)?, size)
        }
        Start::BoxSlice => {
            let mut side = 1u64;
            while (side as u128).pow(k as u32) < size as u128 {
                side += 1;
            }
            let cube = LatticeBox::cube(k, side - 1)?.points(u64::MAX)?;
            PointSet::new(k, cube.iter().take(size))
        }
        Start::Random => {
            let mut side = 2i64;
            while (side as u128).pow(k as u32) < 2 * size as u128 {
                side += 1;
            }
            let cube = LatticeBox::cube(k, side as u64 - 1)?.points(u64::MAX)?;
            let mut pts: Vec<&[i64]> = cube.iter().collect();
            pts.shuffle(rng);
            PointSet::new(k, pts.into_iter().take(size))
        }
    }
}

fn doubling(set: &PointSet) -> Result<Rational> {
    Ok(Rational::new(sumset_len(set, set)?.into(), set.len().into()))
}

fn feasible(set: &PointSet, n: u64) -> Result<bool> {
    Ok(cover_at_most(set, n)?.is_none())
}

/// One restart: single-point relocations inside the bounding box grown by 1,
/// accepting strictly smaller doubling among sets of cover number above `n`.
fn restart(kind: Start, p: &SearchParams, seed: u64, budget: u64) -> Result<Option<(Rational, PointSet)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = start_set(kind, p.k, p.size, &mut rng)?;
    let mut tries = 0;
    while !feasible(&cur, p.n)? {
        if !matches!(kind, Start::Random) || tries == RANDOM_START_ATTEMPTS {
            return Ok(None);
        }
        cur = start_set(kind, p.k, p.size, &mut rng)?;
        tries += 1;
    }
    let mut ratio = doubling(&cur)?;
    let mut pts = cur.to_vecs();
    for _ in 0..budget {
        let (lo, hi) = cur.bounding_box().expect("non-empty");
        let target: Vec<i64> = lo.iter().zip(&hi).map(|(&l, &h)| rng.random_range(l - 1..=h + 1)).collect();
        let i = rng.random_range(0..pts.len());
        if cur.contains(&target) {
            continue;
        }
        let old = std::mem::replace(&mut pts[i], target);
        let cand = PointSet::new(p.k, &pts)?;
        let r = doubling(&cand)?;
        if r < ratio && feasible(&cand, p.n)? {
            ratio = r;
            cur = cand;
        } else {
            pts[i] = old;
        }
    }
    Ok(Some((ratio, cur)))
}

fn local(p: &SearchParams) -> Result<Option<PointSet>> {
    let kinds = [Start::Simplex, Start::BoxSlice, Start::Random];
    let share = p.budget / kinds.len() as u64;
    let extra = p.budget % kinds.len() as u64;
    let results: Vec<Result<Option<(Rational, PointSet)>>> = kinds
        .par_iter()
        .enumerate()
        .map(|(r, &kind)| {
            let budget = share + if r == 0 { extra } else { 0 };
            restart(kind, p, p.seed.wrapping_add(r as u64), budget)
        })
        .collect();
    let mut best: Option<(Rational, PointSet)> = None;
    for res in results {
        if let Some((ratio, set)) = res? {
            if best.as_ref().is_none_or(|(b, _)| ratio < *b) {
                best = Some((ratio, set));
            }
        }
    }
    Ok(best.map(|(_, s)| s))
}

/// Append-only JSON-lines store of frontier records.
///
/// Records are re-verified when loaded; a record is appended only when it
/// strictly improves the best stored doubling for its `(k, n, size)`.
#[derive(Debug)]
pub struct FrontierStore {
    path: PathBuf,
    records: Vec<FrontierRecord>,
}

impl FrontierStore {
    /// Opens `path`, treating a missing file as empty.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut records = Vec::new();
        if path.exists() {
            for (i, line) in BufReader::new(std::fs::File::open(&path)?).lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let rec: FrontierRecord =
                    serde_json::from_str(&line).map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() })?;
                rec.verify().map_err(|e| Error::Verification(format!("line {}: {e}", i + 1)))?;
                records.push(rec);
            }
        }
        Ok(FrontierStore { path, records })
    }

    pub fn records(&self) -> &[FrontierRecord] {
        &self.records
    }

    pub fn best(&self, k: usize, n: u64, size: usize) -> Option<&FrontierRecord> {
        self.records
            .iter()
            .filter(|r| (r.k, r.n, r.size) == (k, n, size))
            .min_by(|a, b| a.ratio().expect("verified").cmp(&b.ratio().expect("verified")))
    }

    /// Verifies `rec` and appends it when it beats the stored best; returns whether it was written.
    pub fn merge(&mut self, rec: FrontierRecord) -> Result<bool> {
        rec.verify()?;
        if let Some(cur) = self.best(rec.k, rec.n, rec.size) {
            if cur.ratio()? <= rec.ratio()? {
                return Ok(false);
            }
        }
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path)?;
        writeln!(f, "{}", serde_json::to_string(&rec)?)?;
        self.records.push(rec);
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(size: usize, strategy: SearchStrategy) -> SearchParams {
        SearchParams { k: 2, n: 1, size, budget: 300, strategy, seed: 7 }
    }

    #[test]
    fn exhaustive_three_points() {
        let rec = extremal_search(&params(3, SearchStrategy::Exhaustive)).unwrap();
        assert_eq!(rec.doubling, "2");
        assert_eq!(rec.cover.count, 2);
    }

    #[test]
    fn infeasible_sizes() {
        let p = SearchParams { n: 2, ..params(2, SearchStrategy::Exhaustive) };
        assert!(matches!(extremal_search(&p), Err(Error::Infeasible(_))));
        let p = SearchParams { k: 1, n: 3, ..params(3, SearchStrategy::Local) };
        assert!(matches!(extremal_search(&p), Err(Error::Infeasible(_))));
    }

    #[test]
    fn local_is_reproducible() {
        let a = extremal_search(&params(6, SearchStrategy::Local)).unwrap();
        let b = extremal_search(&params(6, SearchStrategy::Local)).unwrap();
        assert_eq!(a, b);
        assert!(a.ratio().unwrap() <= Rational::new(5.into(), 2.into()));
    }

    #[test]
    fn store_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("frontier.jsonl");
        let rec = extremal_search(&params(3, SearchStrategy::Exhaustive)).unwrap();
        let mut store = FrontierStore::open(&path).unwrap();
        assert!(store.merge(rec.clone()).unwrap());
        assert!(!store.merge(rec.clone()).unwrap());
        let again = FrontierStore::open(&path).unwrap();
        assert_eq!(again.records(), &[rec]);
    }

    #[test]
    fn tampered_record_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("frontier.jsonl");
        let mut rec = extremal_search(&params(3, SearchStrategy::Exhaustive)).unwrap();
        rec.doubling = "3/2".into();
        std::fs::write(&path, serde_json::to_string(&rec).unwrap() + "\n").unwrap();
        assert!(matches!(FrontierStore::open(&path), Err(Error::Verification(_))));
    }
}
