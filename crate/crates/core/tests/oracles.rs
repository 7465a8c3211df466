mod common;

use common::*;
use rand::Rng;
use sumsetlab::exact::{integer, pow, Rational};
use sumsetlab::geometry::{cover_at_most, cover_number, min_cover_count};
use sumsetlab::inequalities::{petridis_constant, verify_superadditivity, RealFunction};
use sumsetlab::lattice::{sumset_len, sumset_with, Kernel};
use sumsetlab::{gap_hull, iterated_sumset, sumset, Error, HullLimits, HullMode, PointSet};

#[test]
fn every_kernel_matches_the_double_loop() {
    let mut r = rng(11);
    for _ in 0..300 {
        let k = r.random_range(1..=4);
        let span = [3, 40, 1000][r.random_range(0..3)];
        let a = random_set(&mut r, k, 40, span);
        let b = random_set(&mut r, k, 40, span);
        let want = naive_sumset(&a, &b);
        for kernel in [Kernel::Bitset, Kernel::Runs, Kernel::Pairwise, Kernel::Tuples] {
            match sumset_with(&a, &b, kernel) {
                Ok(s) => assert_eq!(as_set(&s), want, "{kernel:?}"),
                Err(e) => assert!(kernel == Kernel::Bitset && matches!(e, Error::Capacity { .. }), "{e}"),
            }
        }
        assert_eq!(sumset_len(&a, &b).unwrap(), want.len() as u128);
        assert_eq!(as_set(&sumset(&a, &b).unwrap()), want);
    }
}

#[test]
fn iterated_sumset_matches_repeated_addition() {
    let mut r = rng(12);
    for _ in 0..60 {
        let k = r.random_range(1..=3);
        let a = random_set(&mut r, k, 8, 5);
        let mut acc = as_set(&a);
        for h in 1..=5u64 {
            assert_eq!(as_set(&iterated_sumset(&a, h).unwrap()), acc, "h = {h}");
            let cur = PointSet::new(k, acc.iter()).unwrap();
            acc = naive_sumset(&cur, &a);
        }
    }
}

#[test]
fn exact_hull_matches_brute_force() {
    let mut r = rng(13);
    for _ in 0..150 {
        let len = r.random_range(1..=6);
        let b: Vec<i64> = (0..len).map(|_| r.random_range(0..=15)).collect();
        let set = PointSet::from_values(b.iter().copied());
        let b: Vec<i64> = set.flat().to_vec();
        for n in 1..=2u64 {
            for k in 1..=2usize {
                let got = gap_hull(&set, n, k, HullMode::Exact, HullLimits::default()).unwrap();
                got.verify(&set, n).unwrap();
                let diam = b.last().unwrap() - b[0];
                assert_eq!(got.total_size, hull_oracle(&b, n as usize, k, diam.max(1)), "b = {b:?}, n = {n}, k = {k}");
            }
        }
    }
}

#[test]
fn larger_coefficients_never_beat_the_diameter_bound() {
    let mut r = rng(14);
    for _ in 0..40 {
        let len = r.random_range(3..=5);
        let set = PointSet::from_values((0..len).map(|_| r.random_range(0..=10)));
        let b = set.flat().to_vec();
        let diam = (b.last().unwrap() - b[0]).max(1);
        for n in 1..=2 {
            assert_eq!(hull_oracle(&b, n, 2, diam), hull_oracle(&b, n, 2, 3 * diam), "b = {b:?}, n = {n}");
        }
    }
}

#[test]
fn heuristic_hull_is_never_below_the_optimum() {
    let mut r = rng(15);
    for _ in 0..100 {
        let len = r.random_range(2..=7);
        let set = PointSet::from_values((0..len).map(|_| r.random_range(-12..=12)));
        let b = set.flat().to_vec();
        for n in 1..=2u64 {
            let h = gap_hull(&set, n, 2, HullMode::Heuristic, HullLimits::default()).unwrap();
            h.verify(&set, n).unwrap();
            let diam = (b.last().unwrap() - b[0]).max(1);
            assert!(h.total_size >= hull_oracle(&b, n as usize, 2, diam));
        }
    }
}

#[test]
fn cover_decision_agrees_with_bounded_search() {
    let mut r = rng(16);
    for _ in 0..120 {
        let k = r.random_range(2..=3);
        let b = random_set(&mut r, k, 9, if k == 2 { 3 } else { 1 });
        let diam = b.diameter().max(1);
        // an optimal normal is orthogonal to k - 1 independent differences
        let bound = if k == 2 { diam } else { 2 * diam * diam };
        let bounded = cover_number(&b, bound).unwrap();
        let exact = min_cover_count(&b).unwrap();
        exact.verify(&b).unwrap();
        assert_eq!(exact.count, bounded.count, "{:?}", b.to_vecs());
        assert!(cover_at_most(&b, exact.count - 1).unwrap().is_none());
    }
}

fn dth_power_function(r: &mut impl Rng, d: u32) -> (RealFunction, Vec<(i64, Rational)>) {
    let len = r.random_range(1..=4);
    let mut roots = Vec::new();
    let mut f = RealFunction::new();
    for _ in 0..len {
        let x = r.random_range(-5..=5);
        let root = Rational::new(r.random_range(1..=9).into(), r.random_range(1..=4).into());
        if let std::collections::btree_map::Entry::Vacant(slot) = f.entry(x) {
            slot.insert(pow(&root, d));
            roots.push((x, root));
        }
    }
    (f, roots)
}

/// `h(z) = max (a_x + b_y)^d` over `x + y = z`: the smallest admissible `h`.
fn minimal_h(fr: &[(i64, Rational)], gr: &[(i64, Rational)], d: u32) -> RealFunction {
    let mut h = RealFunction::new();
    for (x, a) in fr {
        for (y, b) in gr {
            let v = pow(&(a + b), d);
            let slot = h.entry(x + y).or_insert_with(|| integer(0));
            if v > *slot {
                *slot = v;
            }
        }
    }
    h
}

#[test]
fn superadditivity_with_minimal_h() {
    let mut r = rng(17);
    for _ in 0..200 {
        let d = r.random_range(1..=3);
        let (f, fr) = dth_power_function(&mut r, d);
        let (g, gr) = dth_power_function(&mut r, d);
        let mut h = minimal_h(&fr, &gr, d);
        let rep = verify_superadditivity(&f, &g, &h, d).unwrap();
        assert!(rep.pass);
        let z = *h.keys().next().unwrap();
        *h.get_mut(&z).unwrap() -= Rational::new(1.into(), 1000.into());
        assert!(matches!(verify_superadditivity(&f, &g, &h, d), Err(Error::Hypothesis(_))));
    }
}

#[test]
fn petridis_constant_is_the_subset_minimum() {
    let mut r = rng(18);
    for _ in 0..80 {
        let a = random_set(&mut r, 1, 7, 8);
        let b = random_set(&mut r, 1, 4, 8);
        let (k, minimizer, exact) = petridis_constant(&a, &b).unwrap();
        assert!(exact);
        let brute = subsets(a.flat())
            .map(|s| {
                let s = PointSet::from_values(s);
                Rational::new((naive_sumset(&s, &b).len() as i64).into(), (s.len() as i64).into())
            })
            .min()
            .unwrap();
        assert_eq!(k, brute);
        assert_eq!(Rational::new((naive_sumset(&minimizer, &b).len() as i64).into(), (minimizer.len() as i64).into()), k);
    }
}
