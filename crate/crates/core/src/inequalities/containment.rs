use super::{count, Comparison, InequalityReport, Value};
use crate::error::{Error, Result};
use crate::gap::{Gap, DEFAULT_ENUM_CAP};
use crate::lattice::{iterated_sumset, sumset, PointSet};
use crate::util::factorial;

/// Translate `t` maximizing `|(set + t) ∩ target|`, preferring `t = 0`, then small `|t|`, then negative `t`.
///
/// Candidates are `0` and the translates sending `min set` into `target`;
/// any full fit is among them. Returns the translate and the overlap.
fn best_translate(set: &PointSet, target: &PointSet) -> Result<(i64, usize)> {
    let lo = set.flat()[0];
    let mut candidates: Vec<i64> = target
        .flat()
        .iter()
        .map(|&v| v.checked_sub(lo).ok_or(Error::Overflow("translate search")))
        .collect::<Result<Vec<i64>>>()?;
    candidates.push(0);
    candidates.sort_by_key(|&t| (t.unsigned_abs(), t > 0));
    candidates.dedup();
    let mut best = (0i64, 0usize);
    for t in candidates {
        let overlap = set.flat().iter().filter(|&&v| v.checked_add(t).is_some_and(|w| target.contains(&[w]))).count();
        if overlap > best.1 {
            best = (t, overlap);
        }
        if overlap == set.len() {
            break;
        }
    }
    Ok(best)
}

/// Whether `X + (20 m m!) . P / m!` contains a translate of `B`, given a
/// `40 m l`-proper `P` and `l.B ⊆ X + l.P` with `|X| <= m`.
///
/// The shrunken box is `scale(P, 20 m m!, m!)`, sides `floor(20 m m! n_i / m!)`.
pub fn verify_box_shrinking(p: &Gap, x: &PointSet, b: &PointSet, ell: u64, m: u64) -> Result<InequalityReport> {
    x.require_dim1("verify_box_shrinking")?;
    b.require_dim1("verify_box_shrinking")?;
    x.check_nonempty("verify_box_shrinking")?;
    b.check_nonempty("verify_box_shrinking")?;
    if ell == 0 || m == 0 {
        return Err(Error::Argument("l and m must be positive".into()));
    }
    if x.len() as u64 > m {
        return Err(Error::Hypothesis(format!("|X| = {} exceeds m = {m}", x.len())));
    }
    let proper = 40u64.checked_mul(m).and_then(|v| v.checked_mul(ell)).ok_or(Error::Overflow("properness factor"))?;
    if !p.is_t_proper(proper, 1, DEFAULT_ENUM_CAP)? {
        return Err(Error::Hypothesis(format!("{p} is not {proper}-proper")));
    }
    let cover = sumset(x, &p.multiple(ell)?.enumerate(DEFAULT_ENUM_CAP)?)?;
    if !iterated_sumset(b, ell)?.is_subset_of(&cover) {
        return Err(Error::Hypothesis(format!("{ell}.B is not contained in X + {ell}.P")));
    }
    let mf = factorial(m);
    let mf = u64::try_from(mf).map_err(|_| Error::Overflow("m!"))?;
    let num = 20u64.checked_mul(m).and_then(|v| v.checked_mul(mf)).ok_or(Error::Overflow("box scale"))?;
    let shrunk = p.scale(num, mf)?;
    let target = sumset(x, &shrunk.enumerate(DEFAULT_ENUM_CAP)?)?;
    let (t, overlap) = best_translate(b, &target)?;
    let mut report = InequalityReport::new("box-shrinking", "|(B + t) ∩ (X + 20m m!.P/m!)| >= |B| for some t");
    report
        .hypothesis(&format!("P is {proper}-proper"), true)
        .hypothesis(&format!("{ell}.B is contained in X + {ell}.P"), true)
        .hypothesis(&format!("|X| <= {m}"), true)
        .value("|B|", Value::int(b.len() as u64))
        .value("|X|", Value::int(x.len() as u64))
        .value("l", Value::int(ell))
        .value("m", Value::int(m))
        .derive("|X + 20m m!.P/m!|", Value::int(target.len() as u64))
        .witness("translate", t)
        .witness("shrunk_gap", &shrunk)
        .cap("enum_cap", DEFAULT_ENUM_CAP);
    report.conclude(Comparison::rational(&count(overlap), &count(b.len())));
    Ok(report)
}

/// Whether `A` and `B` each lie in a single translate of `P`; reports `|P|/|A|`.
pub fn verify_stability_containment(a: &PointSet, b: &PointSet, p: &Gap) -> Result<InequalityReport> {
    a.require_dim1("verify_stability_containment")?;
    b.require_dim1("verify_stability_containment")?;
    a.check_nonempty("verify_stability_containment")?;
    b.check_nonempty("verify_stability_containment")?;
    let image = p.enumerate(DEFAULT_ENUM_CAP)?;
    let (ta, oa) = best_translate(a, &image)?;
    let (tb, ob) = best_translate(b, &image)?;
    let mut report = InequalityReport::new("stability-containment", "|(A+s) ∩ P| + |(B+t) ∩ P| >= |A| + |B| for some s, t");
    report
        .value("|A|", Value::int(a.len() as u64))
        .value("|B|", Value::int(b.len() as u64))
        .value("|P|", Value::int(image.len() as u64))
        .derive("|P|/|A|", Value::exact(&(count(image.len()) / count(a.len()))))
        .derive("P is 10-proper", Value::int(u8::from(p.is_t_proper(10, 1, DEFAULT_ENUM_CAP).unwrap_or(false))))
        .witness("translate_A", ta)
        .witness("translate_B", tb)
        .witness("gap", p);
    if oa < a.len() {
        report.witness("uncovered_A", a.len() - oa);
    }
    if ob < b.len() {
        report.witness("uncovered_B", b.len() - ob);
    }
    report.note("no threshold on |P|/|A| is asserted");
    report.conclude(Comparison::rational(&count(oa + ob), &count(a.len() + b.len())));
    Ok(report)
}
