use num_integer::Integer;

use super::{count, Comparison, InequalityReport, Value};
use crate::error::{Error, Result};
use crate::exact::{pow, Rational};
use crate::lattice::{iterated_sumset, minus, sumset, sumset_len, PointSet};

/// Largest `|A|` for which the subset-minimized constant is computed exactly.
pub const EXACT_K_MAX_SIZE: usize = 15;

/// `|h.A| >= |h.A'| >= h l - l^2 / (|A| - 2)` with `A' = {0, ..., |A|-2} ∪ {l}`.
pub fn verify_lev(a: &PointSet, h: u64) -> Result<InequalityReport> {
    a.require_dim1("verify_lev")?;
    if h == 0 {
        return Err(Error::Argument("h must be positive".into()));
    }
    if a.len() < 3 {
        return Err(Error::Hypothesis(format!("|A| = {} < 3", a.len())));
    }
    let vals = a.flat();
    if vals[0] != 0 {
        return Err(Error::Hypothesis(format!("min A = {} instead of 0", vals[0])));
    }
    let ell = *vals.last().unwrap();
    let g = vals.iter().fold(0i64, |g, x| g.gcd(x));
    if g != 1 {
        return Err(Error::Hypothesis(format!("gcd(A) = {g}")));
    }
    let size = a.len() as i64;
    let a_prime = PointSet::from_values((0..=size - 2).chain(std::iter::once(ell)));
    let full = iterated_sumset(a, h)?.len();
    let reduced = iterated_sumset(&a_prime, h)?.len();
    let bound = Rational::from_integer((h as i128 * ell as i128).into())
        - Rational::new((ell as i128 * ell as i128).into(), (size as i128 - 2).into());
    let mut report = InequalityReport::new("lev", "|h.A| >= |h.A'| >= h l - l^2/(|A|-2)");
    report
        .hypothesis("A is contained in {0..l} with 0, l in A", true)
        .hypothesis("gcd(A) = 1", true)
        .hypothesis("|A| >= 3", true)
        .value("|A|", Value::int(size))
        .value("l", Value::int(ell))
        .value("h", Value::int(h))
        .derive("|h.A|", Value::int(full as u64))
        .derive("|h.A'|", Value::int(reduced as u64))
        .derive("bound", Value::exact(&bound));
    let outer = Comparison::rational(&count(reduced), &bound);
    let inner = full >= reduced;
    report.conclude(Comparison {
        lhs: Value::int(full as u64),
        rhs: outer.rhs,
        slack: Value::exact(&(count(full) - &bound)),
        holds: inner && outer.holds,
    });
    report.derive("|h.A| - |h.A'|", Value::int(full as i64 - reduced as i64));
    Ok(report)
}

/// `r [-2 m l', 2 m l'] ⊆ 20m . A` for symmetric `A ⊆ [-l, l]` with
/// `|A| > (2l+1)/(m+1)`, `1 <= m <= l/2`, where `r = gcd(A)` and `l' = l/r`.
pub fn verify_ap_containment(a: &PointSet, m: u64) -> Result<InequalityReport> {
    a.require_dim1("verify_ap_containment")?;
    a.check_nonempty("verify_ap_containment")?;
    let vals = a.flat();
    let ell = *vals.last().unwrap();
    if !a.contains(&[0]) || ell <= 0 {
        return Err(Error::Hypothesis("need 0 in A and l = max A > 0".into()));
    }
    if minus(a)? != *a {
        return Err(Error::Hypothesis("A is not symmetric".into()));
    }
    if m == 0 || m as i64 > ell / 2 {
        return Err(Error::Hypothesis(format!("m = {m} is not in [1, l/2] with l = {ell}")));
    }
    let size = a.len() as i64;
    if Rational::from_integer(size.into()) <= Rational::new((2 * ell + 1).into(), (m as i64 + 1).into()) {
        return Err(Error::Hypothesis(format!("|A| = {size} <= (2l+1)/(m+1)")));
    }
    let r = vals.iter().fold(0i64, |g, x| g.gcd(x));
    let ell_p = ell / r;
    let fold = 20 * m;
    let big = iterated_sumset(a, fold)?;
    let reach = 2 * m as i64 * ell_p;
    let hits = (-reach..=reach).filter(|&i| big.contains(&[r * i])).count();
    let needed = (2 * reach + 1) as usize;
    let mut report = InequalityReport::new("ap-containment", "|r[-2ml',2ml'] ∩ 20m.A| >= |r[-2ml',2ml']|");
    report
        .hypothesis("A is symmetric, contained in [-l, l], with 0, l in A", true)
        .hypothesis("1 <= m <= l/2", true)
        .hypothesis("|A| > (2l+1)/(m+1)", true)
        .value("|A|", Value::int(size))
        .value("l", Value::int(ell))
        .value("m", Value::int(m))
        .derive("r", Value::int(r))
        .derive("l'", Value::int(ell_p))
        .derive("|20m.A|", Value::int(big.len() as u64));
    report.conclude(Comparison::rational(&count(hits), &count(needed)));
    if r as u64 > m {
        report.note(format!("gcd r = {r} exceeds m = {m}"));
    }
    if let Some(i) = (-reach..=reach).find(|&i| !big.contains(&[r * i])) {
        report.witness("first_missing", r * i);
    }
    Ok(report)
}

/// The constant `K = min |A'+B|/|A'|` over non-empty `A' ⊆ A` and a minimizer, plus
/// whether the minimum is exact (`|A| <= EXACT_K_MAX_SIZE`) or `K = |A+B|/|A|` was used.
///
/// Minimizes over all `2^|A| - 1` subsets; ties go to the smaller subset, then the earlier bitmask.
pub fn petridis_constant(a: &PointSet, b: &PointSet) -> Result<(Rational, PointSet, bool)> {
    a.check_dim(b.dim())?;
    a.check_nonempty("petridis constant")?;
    b.check_nonempty("petridis constant")?;
    if a.len() > EXACT_K_MAX_SIZE {
        let k = Rational::new(sumset_len(a, b)?.into(), a.len().into());
        return Ok((k, a.clone(), false));
    }
    let pts: Vec<&[i64]> = a.iter().collect();
    let mut best: Option<(Rational, u32, u32)> = None;
    for mask in 1u32..(1 << pts.len()) {
        let sub = PointSet::new(a.dim(), (0..pts.len()).filter(|i| mask >> i & 1 == 1).map(|i| pts[i]))?;
        let ratio = Rational::new(sumset_len(&sub, b)?.into(), sub.len().into());
        let key = (ratio, mask.count_ones(), mask);
        if best.as_ref().is_none_or(|cur| (&key.0, key.1, key.2) < (&cur.0, cur.1, cur.2)) {
            best = Some(key);
        }
    }
    let (k, _, mask) = best.unwrap();
    let minimizer = PointSet::new(a.dim(), (0..pts.len()).filter(|i| mask >> i & 1 == 1).map(|i| pts[i]))?;
    Ok((k, minimizer, true))
}

/// `|A + l.B| <= K^l |A|` where `K = |A+B|/|A| = min |A'+B|/|A'|`.
///
/// The hypothesis is that `A` itself attains the minimum. The report always
/// checks `A`; the conclusion for a minimizing subset (which satisfies the
/// hypothesis by construction) is reported under `minimizer_*`.
pub fn verify_plunnecke(a: &PointSet, b: &PointSet, ell: u64) -> Result<InequalityReport> {
    if ell == 0 {
        return Err(Error::Argument("l must be positive".into()));
    }
    let (k, minimizer, exact) = petridis_constant(a, b)?;
    let lb = iterated_sumset(b, ell)?;
    let ratio_a = Rational::new(sumset_len(a, b)?.into(), a.len().into());
    let mut report = InequalityReport::new("plunnecke", "K^l |A| >= |A + l.B|");
    report
        .hypothesis("K is minimized over all non-empty subsets of A", exact)
        .hypothesis("|A+B|/|A| = K", ratio_a == k)
        .value("K", Value::exact(&k))
        .value("|A+B|/|A|", Value::exact(&ratio_a))
        .value("|A|", Value::int(a.len() as u64))
        .value("l", Value::int(ell))
        .cap("exact_k_max_size", EXACT_K_MAX_SIZE);
    if !exact {
        report.note("unminimized K: |A| exceeds the subset enumeration limit; the inequality is recorded, not asserted");
    }
    let kl = pow(&k, ell as u32);
    let lhs = &kl * count(a.len());
    let rhs = count(sumset(a, &lb)?.len());
    report.conclude(Comparison::rational(&lhs, &rhs));
    let m_lhs = &kl * count(minimizer.len());
    let m_rhs = count(sumset(&minimizer, &lb)?.len());
    report
        .derive("minimizer_lhs", Value::exact(&m_lhs))
        .derive("minimizer_rhs", Value::exact(&m_rhs))
        .derive("minimizer_holds", Value::int(u8::from(m_lhs >= m_rhs)))
        .witness("minimizer", format!("{:?}", minimizer.flat()));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(v: &[i64]) -> PointSet {
        PointSet::from_values(v.iter().copied())
    }

    #[test]
    fn lev_example() {
        let r = verify_lev(&ps(&[0, 1, 5]), 6).unwrap();
        assert!(r.pass);
        assert_eq!(r.derived["bound"].exact.as_deref(), Some("5"));
        let full = verify_lev(&ps(&[0, 1, 2, 3, 4]), 3).unwrap();
        assert_eq!(full.lhs.unwrap().exact.as_deref(), Some("13"));
        assert!(matches!(verify_lev(&ps(&[0, 2, 4]), 2), Err(Error::Hypothesis(_))));
        assert!(matches!(verify_lev(&ps(&[1, 2, 4]), 2), Err(Error::Hypothesis(_))));
        assert!(matches!(verify_lev(&ps(&[0, 1]), 2), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn ap_examples() {
        let interval: Vec<i64> = (-4..=4).collect();
        assert!(verify_ap_containment(&ps(&interval), 1).unwrap().pass);
        let r = verify_ap_containment(&ps(&[-4, -2, 0, 2, 4]), 2).unwrap();
        assert!(r.pass);
        assert_eq!(r.derived["r"].exact.as_deref(), Some("2"));
        assert_eq!(r.derived["l'"].exact.as_deref(), Some("2"));
        assert!(matches!(verify_ap_containment(&ps(&[-4, 0, 4]), 2), Err(Error::Hypothesis(_))));
        assert!(matches!(verify_ap_containment(&ps(&[0, 4]), 1), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn petridis_examples() {
        let r = verify_plunnecke(&ps(&[3, 8, 9]), &ps(&[0]), 4).unwrap();
        assert!(r.pass);
        assert_eq!(r.slack.unwrap().exact.as_deref(), Some("0"));
        let (k, _, exact) = petridis_constant(&ps(&[0, 1]), &ps(&[0, 1])).unwrap();
        assert!(exact);
        assert_eq!(k, Rational::new(3.into(), 2.into()));
        for ell in 1..6 {
            assert!(verify_plunnecke(&ps(&[0, 1]), &ps(&[0, 1]), ell).unwrap().pass);
        }
    }

    #[test]
    fn non_minimizing_a_is_flagged() {
        let r = verify_plunnecke(&ps(&[0, 1, 6]), &ps(&[0, 1]), 1).unwrap();
        assert!(!r.hypotheses_hold);
        assert_eq!(r.conclusion_holds, Some(false));
        assert_eq!(r.derived["minimizer_holds"].exact.as_deref(), Some("1"));
    }
}
