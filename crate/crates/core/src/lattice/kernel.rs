//! Sumset kernels.
//!
//! Points of `a` and `b` are packed into single `u64` keys using the mixed
//! radix of the bounding box of `a + b` (first coordinate most significant).
//! Packing is additive without carries for every pair, and it preserves
//! lexicographic order, so any k-dimensional sumset becomes a sumset of
//! integers. Three integer kernels are available on the keys:
//!
//! * `Bitset`: shift-or convolution over the packed range, used for dense
//!   inputs whose packed range is at most [`BITSET_VOLUME_LIMIT`];
//! * `Runs`: sums of maximal runs of consecutive keys, which wins for sets
//!   made of a few long intervals;
//! * `Pairwise`: sorted merge of all pairwise sums.
//!
//! Sets whose box volume does not fit in 63 bits fall back to `Tuples`
//! (pairwise sums of full coordinate tuples).

use super::PointSet;
use crate::error::{Error, Result};

/// Upper bound on the packed range for the bit-vector kernel.
pub const BITSET_VOLUME_LIMIT: u64 = 1 << 24;

/// Largest number of tuple sums the unpacked fallback materializes.
const TUPLE_SUM_CAP: u128 = 1 << 28;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kernel {
    Bitset,
    Runs,
    Pairwise,
    Tuples,
}

struct Packing {
    dim: usize,
    base: Vec<i64>,
    radix: Vec<u64>,
    extent: Vec<u64>,
    volume: u64,
}

/// A packing with the lower corners of both operands.
type Packed = (Packing, Vec<i64>, Vec<i64>);

impl Packing {
    /// Radix of the box of `a + b`; `None` if the volume does not fit in 63 bits.
    fn new(a: &PointSet, b: &PointSet) -> Result<Option<Packed>> {
        let (lo_a, hi_a) = a.bounding_box().ok_or(Error::EmptyInput("sumset operand"))?;
        let (lo_b, hi_b) = b.bounding_box().ok_or(Error::EmptyInput("sumset operand"))?;
        let dim = a.dim();
        let mut base = Vec::with_capacity(dim);
        let mut extent = Vec::with_capacity(dim);
        for i in 0..dim {
            let lo = lo_a[i] as i128 + lo_b[i] as i128;
            let hi = hi_a[i] as i128 + hi_b[i] as i128;
            if lo < i64::MIN as i128 || hi > i64::MAX as i128 {
                return Err(Error::Overflow("sumset coordinates"));
            }
            base.push(lo as i64);
            extent.push((hi - lo + 1) as u128);
        }
        let mut volume: u128 = 1;
        for &e in &extent {
            volume = match volume.checked_mul(e) {
                Some(v) if v <= (1u128 << 63) => v,
                _ => return Ok(None),
            };
        }
        let extent: Vec<u64> = extent.into_iter().map(|e| e as u64).collect();
        let mut radix = vec![1u64; dim];
        for i in (0..dim.saturating_sub(1)).rev() {
            radix[i] = radix[i + 1] * extent[i + 1];
        }
        let packing = Packing { dim, base, radix, extent, volume: volume as u64 };
        Ok(Some((packing, lo_a, lo_b)))
    }

    fn pack(&self, set: &PointSet, lo: &[i64]) -> Vec<u64> {
        set.iter()
            .map(|p| {
                p.iter()
                    .zip(lo.iter())
                    .zip(self.radix.iter())
                    .map(|((&x, &l), &r)| (x - l) as u64 * r)
                    .sum()
            })
            .collect()
    }

    fn unpack(&self, keys: &[u64]) -> PointSet {
        let mut coords = Vec::with_capacity(keys.len() * self.dim);
        for &k in keys {
            for i in 0..self.dim {
                let digit = (k / self.radix[i]) % self.extent[i];
                coords.push(self.base[i] + digit as i64);
            }
        }
        PointSet::from_canonical(self.dim, coords)
    }
}

/// Maximal runs `[start, end]` of consecutive keys in a sorted key list.
fn runs(keys: &[u64]) -> Vec<(u64, u64)> {
    let mut out: Vec<(u64, u64)> = Vec::new();
    for &k in keys {
        match out.last_mut() {
            Some(last) if last.1 + 1 == k => last.1 = k,
            _ => out.push((k, k)),
        }
    }
    out
}

fn run_count(keys: &[u64]) -> usize {
    keys.windows(2).filter(|w| w[1] != w[0] + 1).count() + usize::from(!keys.is_empty())
}

fn log2(x: u128) -> u128 {
    (128 - x.leading_zeros() as u128).max(1)
}

fn choose(na: usize, nb: usize, ra: usize, rb: usize, volume: u64) -> Kernel {
    let (na, nb, ra, rb) = (na as u128, nb as u128, ra as u128, rb as u128);
    let pairwise = na * nb * log2(na * nb);
    let run_pairs = ra * rb;
    let runs = run_pairs * log2(run_pairs) + volume.min((na * nb) as u64) as u128 / 8;
    let bitset = if volume <= BITSET_VOLUME_LIMIT {
        na.min(nb) * (volume as u128 / 64 + 1) + volume as u128 / 16
    } else {
        u128::MAX
    };
    if bitset <= runs && bitset <= pairwise {
        Kernel::Bitset
    } else if runs <= pairwise {
        Kernel::Runs
    } else {
        Kernel::Pairwise
    }
}

/// Kernel the dispatcher would use for `a + b`.
pub fn select_kernel(a: &PointSet, b: &PointSet) -> Result<Kernel> {
    a.check_dim(b.dim())?;
    let Some((packing, lo_a, lo_b)) = Packing::new(a, b)? else {
        return Ok(Kernel::Tuples);
    };
    let ka = packing.pack(a, &lo_a);
    let kb = packing.pack(b, &lo_b);
    Ok(choose(ka.len(), kb.len(), run_count(&ka), run_count(&kb), packing.volume))
}

/// `a + b` computed with an explicit kernel.
pub fn sumset_with(a: &PointSet, b: &PointSet, kernel: Kernel) -> Result<PointSet> {
    a.check_dim(b.dim())?;
    a.check_nonempty("sumset operand")?;
    b.check_nonempty("sumset operand")?;
    let packed = Packing::new(a, b)?;
    let (packing, lo_a, lo_b) = match (kernel, packed) {
        (Kernel::Tuples, _) | (_, None) => return tuple_sumset(a, b),
        (_, Some(p)) => p,
    };
    if kernel == Kernel::Bitset && packing.volume > BITSET_VOLUME_LIMIT {
        return Err(Error::capacity("bitset sumset range", packing.volume as u128, BITSET_VOLUME_LIMIT as u128));
    }
    let ka = packing.pack(a, &lo_a);
    let kb = packing.pack(b, &lo_b);
    let keys = match kernel {
        Kernel::Bitset => bitset_keys(&ka, &kb, packing.volume),
        Kernel::Runs => expand_runs(&run_sums(&ka, &kb)),
        Kernel::Pairwise => pairwise_keys(&ka, &kb),
        Kernel::Tuples => unreachable!(),
    };
    Ok(packing.unpack(&keys))
}

/// `|a + b|` without materializing the sumset when the run kernel applies.
pub fn sumset_len(a: &PointSet, b: &PointSet) -> Result<u128> {
    a.check_dim(b.dim())?;
    a.check_nonempty("sumset operand")?;
    b.check_nonempty("sumset operand")?;
    if let Some((packing, lo_a, lo_b)) = Packing::new(a, b)? {
        let ka = packing.pack(a, &lo_a);
        let kb = packing.pack(b, &lo_b);
        if choose(ka.len(), kb.len(), run_count(&ka), run_count(&kb), packing.volume) == Kernel::Runs {
            return Ok(run_sums(&ka, &kb).iter().map(|(s, e)| (e - s + 1) as u128).sum());
        }
    }
    Ok(super::sumset(a, b)?.len() as u128)
}

fn bitset_keys(ka: &[u64], kb: &[u64], volume: u64) -> Vec<u64> {
    let (small, large) = if ka.len() <= kb.len() { (ka, kb) } else { (kb, ka) };
    let words = (volume as usize).div_ceil(64);
    let mut base = vec![0u64; words];
    for &k in large {
        base[(k / 64) as usize] |= 1 << (k % 64);
    }
    let mut acc = vec![0u64; words];
    for &s in small {
        let word_shift = (s / 64) as usize;
        let bit_shift = (s % 64) as u32;
        for i in 0..words - word_shift {
            let w = base[i];
            if w == 0 {
                continue;
            }
            acc[i + word_shift] |= w << bit_shift;
            if bit_shift != 0 && i + word_shift + 1 < words {
                acc[i + word_shift + 1] |= w >> (64 - bit_shift);
            }
        }
    }
    let mut out = Vec::new();
    for (i, &w) in acc.iter().enumerate() {
        let mut w = w;
        while w != 0 {
            let t = w.trailing_zeros() as u64;
            out.push(i as u64 * 64 + t);
            w &= w - 1;
        }
    }
    out
}

fn run_sums(ka: &[u64], kb: &[u64]) -> Vec<(u64, u64)> {
    let ra = runs(ka);
    let rb = runs(kb);
    let mut sums: Vec<(u64, u64)> = Vec::with_capacity(ra.len() * rb.len());
    for &(s1, e1) in &ra {
        for &(s2, e2) in &rb {
            sums.push((s1 + s2, e1 + e2));
        }
    }
    sums.sort_unstable();
    let mut merged: Vec<(u64, u64)> = Vec::new();
    for (s, e) in sums {
        match merged.last_mut() {
            Some(last) if s <= last.1 + 1 => last.1 = last.1.max(e),
            _ => merged.push((s, e)),
        }
    }
    merged
}

fn expand_runs(runs: &[(u64, u64)]) -> Vec<u64> {
    runs.iter().flat_map(|&(s, e)| s..=e).collect()
}

fn merge_dedup(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = if j == b.len() || (i < a.len() && a[i] <= b[j]) {
            i += 1;
            a[i - 1]
        } else {
            j += 1;
            b[j - 1]
        };
        if out.last() != Some(&next) {
            out.push(next);
        }
    }
    out
}

fn pairwise_keys(ka: &[u64], kb: &[u64]) -> Vec<u64> {
    const CHUNK_SUMS: usize = 1 << 22;
    let rows_per_chunk = (CHUNK_SUMS / kb.len().max(1)).max(1);
    let mut acc: Vec<u64> = Vec::new();
    for rows in ka.chunks(rows_per_chunk) {
        let mut chunk: Vec<u64> = Vec::with_capacity(rows.len() * kb.len());
        for &x in rows {
            chunk.extend(kb.iter().map(|&y| x + y));
        }
        chunk.sort_unstable();
        chunk.dedup();
        acc = if acc.is_empty() { chunk } else { merge_dedup(&acc, &chunk) };
    }
    acc
}

fn tuple_sumset(a: &PointSet, b: &PointSet) -> Result<PointSet> {
    let pairs = a.len() as u128 * b.len() as u128;
    if pairs > TUPLE_SUM_CAP {
        return Err(Error::capacity("unpacked pairwise sums", pairs, TUPLE_SUM_CAP));
    }
    let dim = a.dim();
    let mut coords = Vec::with_capacity(pairs as usize * dim);
    for p in a.iter() {
        for q in b.iter() {
            for i in 0..dim {
                coords.push(p[i].checked_add(q[i]).ok_or(Error::Overflow("sumset coordinates"))?);
            }
        }
    }
    PointSet::from_flat(dim, coords)
}
