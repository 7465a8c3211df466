use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{check_unit_interval, count, nonneg, positive_part, Comparison, InequalityReport, Value};
use crate::error::{Error, Result};
use crate::exact::{compare_root_sum, pow, refine, report_precision, root_interval, Interval, Rational};
use crate::gap::{Gap, DEFAULT_ENUM_CAP};
use crate::geometry::cover_at_most;
use crate::lattice::{sumset, sumset_len, PointSet};

/// A finitely supported function `Z -> Q_{>=0}`; absent keys are zero.
pub type RealFunction = BTreeMap<i64, Rational>;

/// `n (1 - (s^{1/k} - a^{1/k}) / b^{1/k})` bracketed to width `precision`,
/// where `s = |A+B|`, `a = |A|`, `b = |B|`.
pub fn empirical_constant(s: u128, a: u128, b: u128, k: u32, n: u64, precision: &Rational) -> Result<Interval> {
    if b == 0 || k == 0 {
        return Err(Error::Argument("empirical constant needs |B| > 0 and k > 0".into()));
    }
    let (s, a, b) = (Rational::from_integer(s.into()), Rational::from_integer(a.into()), Rational::from_integer(b.into()));
    let n = Rational::from_integer(n.into());
    let one = Interval::point(Rational::one());
    refine(precision, |bits| {
        let q = root_interval(&s, k, bits).sub(&root_interval(&a, k, bits)).div(&root_interval(&b, k, bits))?;
        Some(one.sub(&q).scale(&n))
    })
}

/// `|A+B|^{1/k} >= |A|^{1/k} + (1 - eps)|B|^{1/k}` for `B` not covered by `n` parallel hyperplanes.
///
/// The cover hypothesis is decided exactly over all normals. The report also
/// carries the empirical constant `c_hat` at precision `10^-6`.
pub fn verify_bm(a: &PointSet, b: &PointSet, n: u64, epsilon: &Rational) -> Result<InequalityReport> {
    a.check_dim(b.dim())?;
    a.check_nonempty("verify_bm")?;
    b.check_nonempty("verify_bm")?;
    check_unit_interval(epsilon)?;
    if n == 0 {
        return Err(Error::Argument("hyperplane count n must be positive".into()));
    }
    let k = a.dim() as u32;
    let mut report = InequalityReport::new("bm", "|A+B|^(1/k) >= |A|^(1/k) + (1-eps)|B|^(1/k)");
    let cover = cover_at_most(b, n)?;
    report.hypothesis(&format!("B is not covered by {n} parallel hyperplanes"), cover.is_none());
    if let Some(c) = &cover {
        report.witness("cover_normal", format!("{:?}", c.normal));
        report.witness("cover_count", c.count);
    }
    let s = sumset_len(a, b)?;
    let (na, nb) = (a.len() as u128, b.len() as u128);
    report
        .value("|A|", Value::int(na))
        .value("|B|", Value::int(nb))
        .value("|A+B|", Value::int(s))
        .value("k", Value::int(k))
        .value("n", Value::int(n))
        .value("eps", Value::exact(epsilon))
        .value("t=|A|/|B|", Value::exact(&Rational::new(na.into(), nb.into())))
        .cap("cover_method", "exact");
    let w = pow(&(Rational::one() - epsilon), k) * Rational::from_integer(nb.into());
    report.conclude(Comparison::root_sum(&Rational::from_integer(s.into()), &Rational::from_integer(na.into()), &w, k)?);
    let c_hat = empirical_constant(s, na, nb, k, n, &Rational::new(1.into(), 1_000_000.into()))?;
    report.derive("c_hat", Value::interval(&c_hat));
    Ok(report)
}

/// `|Y+Z|^{1/d} >= (|Y| - d n^{-1} |P|)_+^{1/d} + |Z|^{1/d}` for an `n`-full,
/// `(l+1)`-proper `d`-GAP `P`, `Y ⊆ P`, `Z ⊆ l.P` (the `l`-fold sumset).
pub fn verify_bm_in_boxes(y: &PointSet, z: &PointSet, p: &Gap, ell: u64, n: u64) -> Result<InequalityReport> {
    y.require_dim1("verify_bm_in_boxes")?;
    z.require_dim1("verify_bm_in_boxes")?;
    y.check_nonempty("verify_bm_in_boxes")?;
    z.check_nonempty("verify_bm_in_boxes")?;
    if ell == 0 || n == 0 || p.dim() == 0 {
        return Err(Error::Argument("need l >= 1, n >= 1 and a GAP of positive rank".into()));
    }
    if !p.is_n_full(n) {
        return Err(Error::Hypothesis(format!("{p} is not {n}-full")));
    }
    if !p.is_t_proper(ell + 1, 1, DEFAULT_ENUM_CAP)? {
        return Err(Error::Hypothesis(format!("{p} is not {}-proper", ell + 1)));
    }
    let image = p.enumerate(DEFAULT_ENUM_CAP)?;
    if !y.is_subset_of(&image) {
        return Err(Error::Hypothesis("Y is not contained in P".into()));
    }
    if !z.is_subset_of(&p.multiple(ell)?.enumerate(DEFAULT_ENUM_CAP)?) {
        return Err(Error::Hypothesis(format!("Z is not contained in {ell}.P")));
    }
    let d = p.dim() as u32;
    let mut report = InequalityReport::new("bm-in-boxes", "|Y+Z|^(1/d) >= (|Y| - d|P|/n)_+^(1/d) + |Z|^(1/d)");
    report
        .hypothesis(&format!("P is {n}-full"), true)
        .hypothesis(&format!("P is {}-proper", ell + 1), true)
        .hypothesis("Y is contained in P", true)
        .hypothesis(&format!("Z is contained in {ell}.P"), true);
    let sum = sumset(y, z)?.len();
    let reduced = positive_part(count(y.len()) - Rational::new((d as u64 * image.len() as u64).into(), n.into()));
    report
        .value("|Y|", Value::int(y.len() as u64))
        .value("|Z|", Value::int(z.len() as u64))
        .value("|P|", Value::int(image.len() as u64))
        .value("|Y+Z|", Value::int(sum as u64))
        .value("(|Y| - d|P|/n)_+", Value::exact(&reduced))
        .value("d", Value::int(d))
        .value("l", Value::int(ell))
        .value("n", Value::int(n))
        .witness("gap", p);
    report.conclude(Comparison::root_sum(&count(sum), &reduced, &count(z.len()), d)?);
    Ok(report)
}

fn total(f: &RealFunction) -> Rational {
    f.values().fold(Rational::zero(), |acc, v| acc + v)
}

fn support(f: &RealFunction) -> Vec<(i64, &Rational)> {
    f.iter().filter(|(_, v)| !v.is_zero()).map(|(&x, v)| (x, v)).collect()
}

/// `Sum(h)^{1/d} >= Sum(f)^{1/d} + Sum(g)^{1/d}` given
/// `h(x+y)^{1/d} >= f(x)^{1/d} + g(y)^{1/d}` on the supports.
///
/// When `f` or `g` has more than one support point the strict-gain ratio
/// `Sum(h)^{1/d} / (Sum(f)^{1/d} + Sum(g)^{1/d})` is reported as `gain_ratio`.
pub fn verify_superadditivity(f: &RealFunction, g: &RealFunction, h: &RealFunction, d: u32) -> Result<InequalityReport> {
    if d == 0 {
        return Err(Error::Argument("dimension d must be positive".into()));
    }
    for (name, func) in [("f", f), ("g", g), ("h", h)] {
        for v in func.values() {
            nonneg(v, name)?;
        }
    }
    let (sf, sg, sh) = (total(f), total(g), total(h));
    if sf.is_zero() || sg.is_zero() {
        return Err(Error::Hypothesis("Sum(f) and Sum(g) must be positive".into()));
    }
    let zero = Rational::zero();
    let (supp_f, supp_g) = (support(f), support(g));
    let mut violations = Vec::new();
    for &(x, fx) in &supp_f {
        for &(y, gy) in &supp_g {
            let z = x.checked_add(y).ok_or(Error::Overflow("support sum"))?;
            let hz = h.get(&z).unwrap_or(&zero);
            if compare_root_sum(hz, fx, gy, d)? == std::cmp::Ordering::Less {
                violations.push(format!("({x}, {y})"));
            }
        }
    }
    if !violations.is_empty() {
        let shown: Vec<String> = violations.iter().take(8).cloned().collect();
        return Err(Error::Hypothesis(format!(
            "h(x+y)^(1/d) < f(x)^(1/d) + g(y)^(1/d) at {} pair(s): {}",
            violations.len(),
            shown.join(", ")
        )));
    }
    let mut report = InequalityReport::new("superadditivity", "Sum(h)^(1/d) >= Sum(f)^(1/d) + Sum(g)^(1/d)");
    report
        .hypothesis("h(x+y)^(1/d) >= f(x)^(1/d) + g(y)^(1/d) on supp f x supp g", true)
        .value("Sum(f)", Value::exact(&sf))
        .value("Sum(g)", Value::exact(&sg))
        .value("Sum(h)", Value::exact(&sh))
        .value("d", Value::int(d))
        .value("t=Sum(f)/Sum(g)", Value::exact(&(&sf / &sg)));
    report.conclude(Comparison::root_sum(&sh, &sf, &sg, d)?);
    if supp_f.len() >= 2 || supp_g.len() >= 2 {
        let ratio = refine(&report_precision(), |bits| {
            let num = root_interval(&sh, d, bits);
            let den = root_interval(&sf, d, bits).add(&root_interval(&sg, d, bits));
            num.div(&den)
        })?;
        report.derive("gain_ratio", Value::interval(&ratio));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{integer, rational};
    use crate::geometry::simplex;
    use crate::lattice::LatticeBox;

    #[test]
    fn simplex_passes_half() {
        for n in 4..7 {
            let s = simplex(2, n).unwrap();
            let r = verify_bm(&s, &s, n, &rational(1, 2)).unwrap();
            assert!(r.hypotheses_hold, "S_{n} is not covered by {n} lines");
            assert!(r.pass);
        }
    }

    #[test]
    fn boxes_nearly_tight() {
        let m = 5;
        let b = LatticeBox::cube(2, m).unwrap().points(1000).unwrap();
        let r = verify_bm(&b, &b, 3, &rational(1, 2)).unwrap();
        assert!(r.pass);
        assert_eq!(r.hypothesis_values["|A+B|"].exact.as_deref(), Some("121"));
        // eps = 0 compares 11 against 6 + 6
        let r = verify_bm(&b, &b, 3, &integer(0)).unwrap();
        assert!(r.hypotheses_hold && !r.pass);
        let covered = PointSet::new(2, (0..10).map(|i| [i, 0])).unwrap();
        let r = verify_bm(&covered, &covered, 2, &rational(1, 2)).unwrap();
        assert!(!r.hypotheses_hold && !r.pass);
    }

    #[test]
    fn c_hat_is_tight_interval() {
        let c = empirical_constant(6, 3, 3, 2, 1, &rational(1, 1_000_000)).unwrap();
        assert!(c.width() <= rational(1, 1_000_000));
        // 1 - (sqrt 6 - sqrt 3)/sqrt 3 = 2 - sqrt 2
        let v = 2.0 - 2f64.sqrt();
        assert!(crate::exact::to_f64(&c.lo) <= v && v <= crate::exact::to_f64(&c.hi));
    }

    #[test]
    fn boxes_in_gaps() {
        let p = Gap::new(vec![4], vec![1], 0).unwrap();
        let y = p.enumerate(100).unwrap();
        let z = p.multiple(2).unwrap().enumerate(100).unwrap();
        let r = verify_bm_in_boxes(&y, &z, &p, 2, 4).unwrap();
        assert!(r.pass);
        let grid = Gap::new(vec![3, 3], vec![1, 100], 0).unwrap();
        let all = grid.enumerate(100).unwrap();
        let r = verify_bm_in_boxes(&all, &all, &grid, 1, 3).unwrap();
        assert!(r.pass);
        assert_eq!(r.hypothesis_values["|Y+Z|"].exact.as_deref(), Some("49"));
        let stray = PointSet::from_values([0, 50]);
        assert!(matches!(verify_bm_in_boxes(&stray, &all, &grid, 1, 3), Err(Error::Hypothesis(_))));
        assert!(matches!(verify_bm_in_boxes(&all, &all, &grid, 1, 4), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn point_masses() {
        let f: RealFunction = [(0, integer(1))].into();
        let g = f.clone();
        let h: RealFunction = [(0, integer(4))].into();
        let r = verify_superadditivity(&f, &g, &h, 2).unwrap();
        assert!(r.pass);
        assert_eq!(r.slack.unwrap().exact.as_deref(), Some("0"));
        assert!(!r.derived.contains_key("gain_ratio"));
        let low: RealFunction = [(0, integer(3))].into();
        assert!(matches!(verify_superadditivity(&f, &g, &low, 2), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn linear_case() {
        let f: RealFunction = (0..3).map(|x| (x, integer(1))).collect();
        let g: RealFunction = (0..2).map(|x| (x, integer(2))).collect();
        let h: RealFunction = (0..4).map(|x| (x, integer(3))).collect();
        let r = verify_superadditivity(&f, &g, &h, 1).unwrap();
        assert!(r.pass);
        assert!(r.derived["gain_ratio"].approx > 1.0);
    }
}
