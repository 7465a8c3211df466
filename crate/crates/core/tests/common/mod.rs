#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sumsetlab::PointSet;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Double loop over all pairs.
pub fn naive_sumset(a: &PointSet, b: &PointSet) -> BTreeSet<Vec<i64>> {
    let mut out = BTreeSet::new();
    for p in a.iter() {
        for q in b.iter() {
            out.insert(p.iter().zip(q).map(|(x, y)| x + y).collect());
        }
    }
    out
}

pub fn as_set(s: &PointSet) -> BTreeSet<Vec<i64>> {
    s.iter().map(<[i64]>::to_vec).collect()
}

pub fn random_set(rng: &mut ChaCha8Rng, k: usize, max_len: usize, span: i64) -> PointSet {
    let len = rng.random_range(1..=max_len);
    let pts: Vec<Vec<i64>> = (0..len).map(|_| (0..k).map(|_| rng.random_range(-span..=span)).collect()).collect();
    PointSet::new(k, &pts).unwrap()
}

pub fn subsets(values: &[i64]) -> impl Iterator<Item = Vec<i64>> + '_ {
    (1u32..(1 << values.len())).map(move |mask| (0..values.len()).filter(|i| mask >> i & 1 == 1).map(|i| values[i]).collect())
}

/// Smallest `|X + P|` with `B ⊆ X + P`, `|X| <= n`, `P` a 1-proper GAP of
/// dimension at most `min(k, 2)` with coefficients in `[1, coeff_max]`.
///
/// Enumerates the images `P` directly and, for each, every way of covering
/// the least uncovered element of `B` by a translate.
pub fn hull_oracle(b: &[i64], n: usize, k: usize, coeff_max: i64) -> u64 {
    let lo = *b.iter().min().unwrap();
    let vals: Vec<i64> = b.iter().map(|v| v - lo).collect();
    if vals.len() <= n || k == 0 {
        return vals.len() as u64;
    }
    let diam = *vals.iter().max().unwrap();
    let mut best = (diam + 1) as u64;
    let mut images: Vec<Vec<i64>> = Vec::new();
    for c in 1..=coeff_max {
        for s in 2..best as i64 {
            images.push((0..s).map(|i| i * c).collect());
        }
    }
    if k >= 2 {
        for c1 in 1..=coeff_max {
            for c2 in c1 + 1..=coeff_max {
                for s1 in 2..best as i64 {
                    for s2 in 2..best as i64 {
                        if (s1 * s2) as u64 >= best {
                            continue;
                        }
                        let img: BTreeSet<i64> = (0..s1).flat_map(|i| (0..s2).map(move |j| i * c1 + j * c2)).collect();
                        if img.len() as i64 == s1 * s2 {
                            images.push(img.into_iter().collect());
                        }
                    }
                }
            }
        }
    }
    images.sort_by_key(Vec::len);
    for img in images {
        if img.len() as u64 >= best {
            break;
        }
        let mut chosen = Vec::new();
        cover(&vals, &img, n, &mut chosen, &mut best);
    }
    best
}

fn cover(vals: &[i64], img: &[i64], n: usize, chosen: &mut Vec<i64>, best: &mut u64) {
    let covered = |v: i64| chosen.iter().any(|x| img.binary_search(&(v - x)).is_ok());
    let Some(&u) = vals.iter().find(|&&v| !covered(v)) else {
        let union: BTreeSet<i64> = chosen.iter().flat_map(|x| img.iter().map(move |p| x + p)).collect();
        *best = (*best).min(union.len() as u64);
        return;
    };
    if chosen.len() == n {
        return;
    }
    for p in img {
        chosen.push(u - p);
        cover(vals, img, n, chosen, best);
        chosen.pop();
    }
}
