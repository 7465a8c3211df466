use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_traits::{One, Signed, ToPrimitive};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::tightness::{tightness_example, TightnessParams};
use crate::error::{Error, Result};
use crate::exact::{parse_rational, to_f64, Rational};
use crate::geometry::{cone, simplex};
use crate::inequalities::verify_bm;
use crate::lattice::{LatticeBox, PointSet};
use crate::util::binomial;
use crate::Caps;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Box,
    Simplex,
    Cone,
    Tightness,
    RandomDense,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::Box, Family::Simplex, Family::Cone, Family::Tightness, Family::RandomDense];

    pub fn name(self) -> &'static str {
        match self {
            Family::Box => "box",
            Family::Simplex => "simplex",
            Family::Cone => "cone",
            Family::Tightness => "tightness",
            Family::RandomDense => "random-dense",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Argument(format!("unknown family {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentGrid {
    pub ks: Vec<usize>,
    pub ns: Vec<u64>,
    pub ts: Vec<Rational>,
    pub families: Vec<Family>,
    pub seed: u64,
    pub caps: Caps,
}

impl ExperimentGrid {
    fn validate(&self) -> Result<()> {
        if self.ks.is_empty() || self.ns.is_empty() || self.ts.is_empty() || self.families.is_empty() {
            return Err(Error::Argument("every grid range must be non-empty".into()));
        }
        if self.ks.contains(&0) || self.ns.contains(&0) {
            return Err(Error::Argument("k and n must be positive".into()));
        }
        if self.ts.iter().any(|t| !t.is_positive() || *t > Rational::one()) {
            return Err(Error::Argument("every t must lie in (0, 1]".into()));
        }
        Ok(())
    }
}

pub const ESTIMATE_COLUMNS: [&str; 15] = [
    "family", "k", "n", "t", "seed", "max_points", "size_a", "size_b", "sumset_size", "t_actual", "hypothesis_holds",
    "bm_holds", "c_hat_lo", "c_hat_hi", "c_hat",
];

/// One verified cell. `c_hat` bounds are exact rationals in `p/q` form.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimateRow {
    pub family: Family,
    pub k: usize,
    pub n: u64,
    pub t: Rational,
    pub seed: u64,
    pub max_points: u64,
    pub size_a: u64,
    pub size_b: u64,
    pub sumset_size: u64,
    pub t_actual: Rational,
    pub hypothesis_holds: bool,
    /// The inequality with `eps = 0`.
    pub bm_holds: bool,
    pub c_hat_lo: Rational,
    pub c_hat_hi: Rational,
}

impl EstimateRow {
    pub fn c_hat(&self) -> f64 {
        (to_f64(&self.c_hat_lo) + to_f64(&self.c_hat_hi)) / 2.0
    }
}

/// Largest `c_hat` over families whose cover hypothesis holds.
#[derive(Clone, Debug, PartialEq)]
pub struct CellMaximum {
    pub k: usize,
    pub t: Rational,
    pub n: u64,
    pub family: Family,
    pub c_hat: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimateTable {
    pub rows: Vec<EstimateRow>,
    pub maxima: Vec<CellMaximum>,
}

/// Side of the box family's `B` in units of `n`. Any box `A` gives
/// `c_hat = n / (side + 1)` against `B = [0, side]^k`.
pub const BOX_SCALE: u64 = 10;

/// Member of a one-parameter family whose size is closest to `target`, ties to the smaller.
fn closest<F: Fn(u64) -> u128>(size: F, target: &Rational) -> u64 {
    let mut p = 0u64;
    while Rational::from_integer(size(p + 1).into()) <= *target {
        p += 1;
    }
    let below = (target - Rational::from_integer(size(p).into())).abs();
    let above = (Rational::from_integer(size(p + 1).into()) - target).abs();
    if above < below {
        p + 1
    } else {
        p
    }
}

fn cone_size(k: usize, n: u64) -> u128 {
    (0..=n as u128).map(|h| (h + 1).pow(k as u32 - 1)).sum()
}

fn random_subset(k: usize, side: u64, count: usize, rng: &mut ChaCha8Rng, caps: &Caps) -> Result<PointSet> {
    let cube = LatticeBox::cube(k, side)?.points(caps.max_points)?;
    let mut pts: Vec<&[i64]> = cube.iter().collect();
    pts.shuffle(rng);
    PointSet::new(k, pts.into_iter().take(count.max(1)))
}

/// Smallest `m >= 100/t` with `m/t` an integer.
fn tightness_m(t: &Rational) -> Result<u64> {
    let (p, q) = (t.numer(), t.denom());
    let step = (Rational::from_integer(100.into()) * q / (p * p)).ceil().to_integer();
    (step * p).to_u64().ok_or(Error::Overflow("tightness m"))
}

fn family_pair(family: Family, k: usize, n: u64, t: &Rational, seed: u64, caps: &Caps) -> Result<Option<(PointSet, PointSet)>> {
    let kk = k as u32;
    let pair = match family {
        Family::Box => {
            caps.check_points("box family", (BOX_SCALE as u128 * n as u128 + 1).pow(kk))?;
            let b = LatticeBox::cube(k, BOX_SCALE * n)?.points(caps.max_points)?;
            let side = closest(|s| (s as u128 + 1).pow(kk), &(t * Rational::from_integer(b.len().into())));
            (LatticeBox::cube(k, side)?.points(caps.max_points)?, b)
        }
        Family::Simplex => {
            caps.check_points("simplex family", binomial(n + k as u64, k as u64))?;
            let b = simplex(k, n)?;
            let a = closest(|s| binomial(s + k as u64, k as u64), &(t * Rational::from_integer(b.len().into())));
            (simplex(k, a)?, b)
        }
        Family::Cone => {
            if k < 2 {
                return Ok(None);
            }
            caps.check_points("cone family", cone_size(k, n))?;
            let b = cone(k, n)?;
            let a = closest(|s| cone_size(k, s), &(t * Rational::from_integer(b.len().into())));
            (cone(k, a)?, b)
        }
        Family::Tightness => {
            if k < 2 {
                return Ok(None);
            }
            let m = tightness_m(t)?;
            let params = TightnessParams { k, n, t: t.clone(), m, seed, enforce_regime: false };
            let ex = tightness_example(&params, caps)?;
            (ex.a, ex.b)
        }
        Family::RandomDense => {
            let side = 2 * n + 1;
            caps.check_points("random dense family", (side as u128 + 1).pow(kk))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let cube = LatticeBox::cube(k, side)?.points(caps.max_points)?;
            let b = cube.filter(|_| rng.random_bool(0.5));
            let target = (t * Rational::from_integer(b.len().into())).ceil().to_integer().to_usize().unwrap_or(1);
            let mut a_side = 0u64;
            while ((a_side as u128 + 1).pow(kk)) < 2 * target as u128 {
                a_side += 1;
            }
            (random_subset(k, a_side, target, &mut rng, caps)?, b)
        }
    };
    Ok(Some(pair))
}

fn run_cell(family: Family, k: usize, n: u64, t: &Rational, seed: u64, caps: &Caps) -> Result<Option<EstimateRow>> {
    let Some((a, b)) = family_pair(family, k, n, t, seed, caps)? else {
        return Ok(None);
    };
    if b.is_empty() {
        return Ok(None);
    }
    let report = verify_bm(&a, &b, n, &Rational::from_integer(0.into()))?;
    let c = &report.derived["c_hat"];
    let get = |key: &str| report.hypothesis_values[key].exact.as_deref().and_then(parse_rational).expect("integer value");
    let as_u64 = |q: Rational| q.to_integer().to_u64().expect("fits");
    Ok(Some(EstimateRow {
        family,
        k,
        n,
        t: t.clone(),
        seed,
        max_points: caps.max_points,
        size_a: a.len() as u64,
        size_b: b.len() as u64,
        sumset_size: as_u64(get("|A+B|")),
        t_actual: Rational::new(a.len().into(), b.len().into()),
        hypothesis_holds: report.hypotheses_hold,
        bm_holds: report.conclusion_holds == Some(true),
        c_hat_lo: parse_rational(&c.lo).expect("reported bound"),
        c_hat_hi: parse_rational(&c.hi).expect("reported bound"),
    }))
}

/// Runs `verify_bm` on every `(family, k, n, t)` cell of the grid in parallel.
///
/// Cell `i` (in family, k, n, t order) uses seed `grid.seed + i`. The first
/// failing cell in that order determines the error.
pub fn constant_estimation(grid: &ExperimentGrid) -> Result<EstimateTable> {
    grid.validate()?;
    let mut cells = Vec::new();
    for &family in &grid.families {
        for &k in &grid.ks {
            for &n in &grid.ns {
                for t in &grid.ts {
                    cells.push((family, k, n, t.clone()));
                }
            }
        }
    }
    let results: Vec<Result<Option<EstimateRow>>> = cells
        .par_iter()
        .enumerate()
        .map(|(i, (family, k, n, t))| run_cell(*family, *k, *n, t, grid.seed.wrapping_add(i as u64), &grid.caps))
        .collect();
    let mut rows = Vec::new();
    for r in results {
        if let Some(row) = r? {
            rows.push(row);
        }
    }
    let mut maxima: Vec<CellMaximum> = Vec::new();
    for &k in &grid.ks {
        for t in &grid.ts {
            for &n in &grid.ns {
                let best = rows
                    .iter()
                    .filter(|r| r.k == k && r.n == n && r.t == *t && r.hypothesis_holds)
                    .fold(None::<&EstimateRow>, |acc, r| match acc {
                        Some(b) if b.c_hat() >= r.c_hat() => Some(b),
                        _ => Some(r),
                    });
                if let Some(r) = best {
                    maxima.push(CellMaximum { k, t: t.clone(), n, family: r.family, c_hat: r.c_hat() });
                }
            }
        }
    }
    Ok(EstimateTable { rows, maxima })
}

pub fn write_estimate_csv<W: Write>(rows: &[EstimateRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(ESTIMATE_COLUMNS)?;
    for r in rows {
        w.write_record([
            r.family.to_string(),
            r.k.to_string(),
            r.n.to_string(),
            r.t.to_string(),
            r.seed.to_string(),
            r.max_points.to_string(),
            r.size_a.to_string(),
            r.size_b.to_string(),
            r.sumset_size.to_string(),
            r.t_actual.to_string(),
            r.hypothesis_holds.to_string(),
            r.bm_holds.to_string(),
            r.c_hat_lo.to_string(),
            r.c_hat_hi.to_string(),
            format!("{:.9}", r.c_hat()),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational;

    fn grid(families: Vec<Family>) -> ExperimentGrid {
        ExperimentGrid { ks: vec![2], ns: vec![3], ts: vec![rational(1, 4)], families, seed: 1, caps: Caps::default() }
    }

    #[test]
    fn families_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("sphere".parse::<Family>().is_err());
    }

    #[test]
    fn closest_member() {
        assert_eq!(closest(|s| (s as u128 + 1).pow(2), &rational(4, 1)), 1);
        assert_eq!(closest(|s| (s as u128 + 1).pow(2), &rational(7, 1)), 2);
        assert_eq!(tightness_m(&rational(1, 64)).unwrap(), 6400);
        assert_eq!(tightness_m(&rational(3, 4)).unwrap(), 135);
    }

    #[test]
    fn small_grid() {
        let table = constant_estimation(&grid(vec![Family::Box, Family::Simplex, Family::Cone, Family::RandomDense])).unwrap();
        assert_eq!(table.rows.len(), 4);
        let bx = &table.rows[0];
        assert_eq!((bx.size_a, bx.size_b), (225, 961));
        assert!(bx.hypothesis_holds && !bx.bm_holds);
        assert!(bx.c_hat_lo <= rational(3, 31) && rational(3, 31) <= bx.c_hat_hi);
        assert_eq!(table.maxima.len(), 1);
        let again = constant_estimation(&grid(vec![Family::Box, Family::Simplex, Family::Cone, Family::RandomDense])).unwrap();
        assert_eq!(table, again);
    }

    #[test]
    fn empty_ranges_rejected() {
        let mut g = grid(vec![Family::Box]);
        g.ts.clear();
        assert!(matches!(constant_estimation(&g), Err(Error::Argument(_))));
        let mut g = grid(vec![Family::Box]);
        g.caps.max_points = 10;
        assert!(matches!(constant_estimation(&g), Err(Error::Capacity { .. })));
    }
}
