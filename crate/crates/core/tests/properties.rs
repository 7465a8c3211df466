mod common;

use common::{as_set, naive_sumset};
use proptest::prelude::*;
use sumsetlab::exact::{compare_root_sum, integer, Rational};
use sumsetlab::experiments::{extremal_search, FrontierRecord, SearchParams, SearchStrategy};
use sumsetlab::geometry::{cover_at_most, min_cover_count};
use sumsetlab::lattice::{parse_point_set, point_set_to_text, sumset_len};
use sumsetlab::transforms::{compress, compress_fully, ruzsa_cover};
use sumsetlab::{difference_set, dilate, gap_hull, iterated_sumset, minus, sumset, Gap, HullLimits, HullMode, PointSet};

fn point_set(k: usize, max_len: usize, span: i64) -> impl Strategy<Value = PointSet> {
    prop::collection::vec(prop::collection::vec(-span..=span, k), 1..=max_len).prop_map(move |pts| PointSet::new(k, &pts).unwrap())
}

fn pair(max_len: usize, span: i64) -> impl Strategy<Value = (PointSet, PointSet)> {
    (1usize..=3).prop_flat_map(move |k| (point_set(k, max_len, span), point_set(k, max_len, span)))
}

fn gap_strategy() -> impl Strategy<Value = Gap> {
    (1usize..=2)
        .prop_flat_map(|d| (prop::collection::vec(1u64..=5, d), prop::collection::vec(-9i64..=9, d), -20i64..=20))
        .prop_map(|(sides, coeffs, offset)| Gap::new(sides, coeffs, offset).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sumset_matches_oracle((a, b) in pair(25, 30)) {
        prop_assert_eq!(as_set(&sumset(&a, &b).unwrap()), naive_sumset(&a, &b));
    }

    #[test]
    fn sumset_commutes_and_associates((a, b) in pair(12, 6), seed in 0u64..1000) {
        let c = PointSet::new(a.dim(), [vec![seed as i64 % 5; a.dim()], vec![0; a.dim()]]).unwrap();
        prop_assert_eq!(sumset(&a, &b).unwrap(), sumset(&b, &a).unwrap());
        let left = sumset(&sumset(&a, &b).unwrap(), &c).unwrap();
        let right = sumset(&a, &sumset(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn translation_covariance((a, b) in pair(15, 10), t in prop::collection::vec(-50i64..=50, 3)) {
        let t = &t[..a.dim()];
        let moved = sumset(&a.translate(t).unwrap(), &b).unwrap();
        prop_assert_eq!(moved, sumset(&a, &b).unwrap().translate(t).unwrap());
    }

    #[test]
    fn size_bounds((a, b) in pair(20, 20)) {
        let s = sumset_len(&a, &b).unwrap() as usize;
        prop_assert!(s >= a.len().max(b.len()));
        prop_assert!(s <= a.len() * b.len());
        if a.dim() == 1 {
            prop_assert!(s + 1 >= a.len() + b.len());
        }
    }

    #[test]
    fn iterated_sumset_steps(a in point_set(2, 6, 4), h in 1u64..5) {
        let next = iterated_sumset(&a, h + 1).unwrap();
        prop_assert_eq!(next, sumset(&iterated_sumset(&a, h).unwrap(), &a).unwrap());
    }

    #[test]
    fn dilation_and_difference(a in point_set(2, 10, 8), c in -4i64..=4) {
        let want = if c == 0 { 1 } else { a.len() };
        prop_assert_eq!(dilate(&a, c).unwrap().len(), want);
        let d = difference_set(&a, &a).unwrap();
        prop_assert_eq!(minus(&d).unwrap(), d.clone());
        prop_assert!(d.contains(&[0, 0]));
    }

    #[test]
    fn text_and_json_round_trip(a in point_set(3, 15, 100)) {
        prop_assert_eq!(parse_point_set(&point_set_to_text(&a)).unwrap(), a.clone());
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<PointSet>(&json).unwrap(), a);
    }

    #[test]
    fn compression_properties((a, b) in pair(15, 5)) {
        let ab = sumset_len(&a, &b).unwrap();
        for axis in 1..=a.dim() {
            let (ca, cb) = (compress(&a, axis).unwrap(), compress(&b, axis).unwrap());
            prop_assert_eq!(ca.len(), a.len());
            prop_assert!(sumset_len(&ca, &cb).unwrap() <= ab);
            prop_assert_eq!(compress(&ca, axis).unwrap(), ca);
        }
        let full = compress_fully(&a).unwrap();
        prop_assert_eq!(compress_fully(&full).unwrap(), full.clone());
        prop_assert!(full.iter().all(|p| p.iter().all(|&x| x >= 0)));
    }

    #[test]
    fn ruzsa_cover_properties((a, b) in pair(15, 6)) {
        let x = ruzsa_cover(&a, &b).unwrap();
        prop_assert!(x.is_subset_of(&a));
        let cover = sumset(&x, &difference_set(&b, &b).unwrap()).unwrap();
        prop_assert!(a.is_subset_of(&cover));
        prop_assert!((x.len() * b.len()) as u128 <= sumset_len(&a, &b).unwrap());
    }

    #[test]
    fn gap_text_round_trip(g in gap_strategy()) {
        prop_assert_eq!(g.to_string().parse::<Gap>().unwrap(), g.clone());
        let image = g.enumerate(10_000).unwrap();
        prop_assert!(image.len() as u128 <= g.box_count().unwrap());
        if g.is_proper() {
            prop_assert_eq!(image.len() as u128, g.box_count().unwrap());
        }
        for v in image.flat() {
            prop_assert!(g.contains(*v, 10_000).unwrap());
        }
    }

    #[test]
    fn gap_multiple_is_iterated_sumset(g in gap_strategy(), ell in 1u64..4) {
        let direct = g.multiple(ell).unwrap().enumerate(100_000).unwrap();
        prop_assert_eq!(direct, iterated_sumset(&g.enumerate(10_000).unwrap(), ell).unwrap());
    }

    #[test]
    fn hull_results_verify(vals in prop::collection::btree_set(-15i64..=15, 1..=7), n in 1u64..=2, k in 1usize..=2) {
        let b = PointSet::from_values(vals.iter().copied());
        let exact = gap_hull(&b, n, k, HullMode::Exact, HullLimits::default()).unwrap();
        let heur = gap_hull(&b, n, k, HullMode::Heuristic, HullLimits::default()).unwrap();
        exact.verify(&b, n).unwrap();
        heur.verify(&b, n).unwrap();
        prop_assert!(exact.total_size <= heur.total_size);
        prop_assert!(exact.total_size >= b.len() as u64);
    }

    #[test]
    fn cover_certificates_verify(b in point_set(2, 10, 4)) {
        let cert = min_cover_count(&b).unwrap();
        cert.verify(&b).unwrap();
        prop_assert!(cert.count as usize <= b.len());
        prop_assert!(cover_at_most(&b, cert.count).unwrap().is_some());
        if cert.count > 1 {
            prop_assert!(cover_at_most(&b, cert.count - 1).unwrap().is_none());
        }
    }

    #[test]
    fn root_comparison_matches_floats(u in 1u64..5000, v in 1u64..2000, w in 1u64..2000, d in 1u32..=3) {
        let (uf, vf, wf) = (u as f64, v as f64, w as f64);
        let gap = uf.powf(1.0 / d as f64) - (vf.powf(1.0 / d as f64) + wf.powf(1.0 / d as f64));
        prop_assume!(gap.abs() > 1e-6);
        let ord = compare_root_sum(&integer(u), &integer(v), &integer(w), d).unwrap();
        prop_assert_eq!(ord == std::cmp::Ordering::Greater, gap > 0.0);
    }

    #[test]
    fn root_comparison_scales(u in 1i64..500, v in 1i64..200, w in 1i64..200, s in 1i64..20) {
        let q = |x: i64| Rational::from_integer(x.into());
        let s3 = q(s * s * s);
        let base = compare_root_sum(&q(u), &q(v), &q(w), 3).unwrap();
        let scaled = compare_root_sum(&(q(u) * &s3), &(q(v) * &s3), &(q(w) * &s3), 3).unwrap();
        prop_assert_eq!(base, scaled);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn search_is_reproducible_and_records_verify(seed in 0u64..1000, size in 4usize..=6) {
        let p = SearchParams { k: 2, n: 1, size, budget: 60, strategy: SearchStrategy::Local, seed };
        let a = extremal_search(&p).unwrap();
        prop_assert_eq!(&a, &extremal_search(&p).unwrap());
        a.verify().unwrap();
        prop_assert!(a.cover.count > a.n);
        let back: FrontierRecord = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        back.verify().unwrap();
        prop_assert_eq!(back, a);
    }
}
