use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{root_interval, to_f64, Interval, Rational};
use crate::geometry::{cover_at_most, general_position_points};
use crate::inequalities::{empirical_constant, Comparison, InequalityReport, Value};
use crate::lattice::{sumset_len, PointSet};
use crate::Caps;

/// Seeds tried, starting from the requested one, until `B` avoids every cover by `n` hyperplanes.
pub const SEED_ATTEMPTS: u64 = 16;

/// Band for `|A+B| / ((1+nt)|B|)` outside which the example is reported as failing.
pub fn asymptotic_band() -> (Rational, Rational) {
    (Rational::new(4.into(), 5.into()), Rational::new(5.into(), 4.into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TightnessParams {
    pub k: usize,
    pub n: u64,
    pub t: Rational,
    pub m: u64,
    pub seed: u64,
    /// Reject parameters outside `m >= 100/t`, `t <= 1/(10n)`, `n >= 2k`.
    pub enforce_regime: bool,
}

impl TightnessParams {
    pub fn new(k: usize, n: u64, t: Rational, m: u64) -> Self {
        TightnessParams { k, n, t, m, seed: 0, enforce_regime: true }
    }
}

#[derive(Clone, Debug)]
pub struct TightnessExample {
    pub a: PointSet,
    pub b: PointSet,
    pub report: InequalityReport,
}

fn regime_violations(p: &TightnessParams) -> Vec<String> {
    let mut out = Vec::new();
    let m = Rational::from_integer(p.m.into());
    if &m * &p.t < Rational::from_integer(100.into()) {
        out.push(format!("m = {} is below 100/t", p.m));
    }
    if p.n > 0 {
        if p.t > Rational::new(1.into(), (10 * p.n).into()) {
            out.push(format!("t = {} exceeds 1/(10n)", p.t));
        }
        if p.n < 2 * p.k as u64 {
            out.push(format!("n = {} is below 2k", p.n));
        }
    }
    out
}

fn axis_interval(k: usize, len: u64, out: &mut Vec<i64>) {
    for j in 0..len as i64 {
        out.extend(std::iter::repeat_n(0, k - 1));
        out.push(j);
    }
}

/// `A` is the interval `{0, ..., m-1}` on the last axis; `B` is an interval on
/// the same axis together with `k + n` points in general position, shifted by
/// `e_1` off the axis, with `|B| = m / t`.
///
/// With `n = 0` no points are added and `B` is an interval. The seed is
/// advanced until `B` is not covered by `n` parallel hyperplanes.
pub fn tightness_example(p: &TightnessParams, caps: &Caps) -> Result<TightnessExample> {
    let TightnessParams { k, n, m, .. } = *p;
    let t = &p.t;
    if k == 0 || (k == 1 && n > 0) {
        return Err(Error::Argument("general position points need k >= 2".into()));
    }
    if !t.is_positive() || *t > Rational::one() || m == 0 {
        return Err(Error::Argument(format!("need 0 < t <= 1 and m >= 1, got t = {t}, m = {m}")));
    }
    let size_b = Rational::from_integer(m.into()) / t;
    if !size_b.is_integer() {
        return Err(Error::Argument(format!("m / t = {size_b} is not an integer")));
    }
    let size_b = size_b.to_integer().to_u64().ok_or(Error::Overflow("|B|"))?;
    let extra = if n == 0 { 0 } else { k as u64 + n };
    if size_b <= extra {
        return Err(Error::Argument(format!("|B| = {size_b} leaves no room for the interval part")));
    }
    let violations = regime_violations(p);
    if p.enforce_regime && !violations.is_empty() {
        return Err(Error::Argument(format!("outside the asymptotic regime: {}", violations.join("; "))));
    }
    caps.check_points("tightness example", size_b as u128 + (extra as u128 + 1) * m as u128)?;

    let mut coords = Vec::with_capacity(m as usize * k);
    axis_interval(k, m, &mut coords);
    let a = PointSet::from_flat(k, coords)?;
    let mut base = Vec::with_capacity(size_b as usize * k);
    axis_interval(k, size_b - extra, &mut base);

    let mut chosen = None;
    for attempt in 0..SEED_ATTEMPTS {
        let seed = p.seed.wrapping_add(attempt);
        let mut coords = base.clone();
        if extra > 0 {
            for q in general_position_points(k, extra as usize, seed)?.iter() {
                coords.push(q[0] + 1);
                coords.extend_from_slice(&q[1..]);
            }
        }
        let b = PointSet::from_flat(k, coords)?;
        if n == 0 || cover_at_most(&b, n)?.is_none() {
            chosen = Some((b, seed));
            break;
        }
    }
    let Some((b, seed)) = chosen else {
        return Err(Error::Generation(format!("no seed in {SEED_ATTEMPTS} attempts gave B avoiding {n} hyperplanes")));
    };
    debug_assert_eq!(b.len() as u64, size_b);

    let s = sumset_len(&a, &b)?;
    let predicted = (Rational::one() + Rational::from_integer(n.into()) * t) * Rational::from_integer(size_b.into());
    let ratio = Rational::from_integer(s.into()) / &predicted;
    let (lo, hi) = asymptotic_band();

    let mut report = InequalityReport::new("tightness", "|A+B| / ((1+nt)|B|) lies in [4/5, 5/4]");
    if n > 0 {
        report.hypothesis(&format!("B is not covered by {n} parallel hyperplanes"), true);
    }
    report
        .hypothesis("|A| = t|B|", true)
        .value("k", Value::int(k as u64))
        .value("n", Value::int(n))
        .value("t", Value::exact(t))
        .value("m", Value::int(m))
        .value("|A|", Value::int(a.len() as u64))
        .value("|B|", Value::int(size_b))
        .derive("|A+B|", Value::int(s))
        .derive("(1+nt)|B|", Value::exact(&predicted))
        .derive("ratio", Value::exact(&ratio))
        .derive("t^(1/k)", Value::interval(&root_interval(t, k as u32, 40)))
        .witness("seed", seed)
        .cap("regime", if p.enforce_regime { "enforced" } else { "not enforced" })
        .cap("max_points", caps.max_points);
    if n > 0 {
        let c_hat = empirical_constant(s, m as u128, size_b as u128, k as u32, n, &Rational::new(1.into(), 1_000_000.into()))?;
        report.derive("c_hat", Value::interval(&c_hat));
    } else {
        report.derive("|A|+|B|-1", Value::int(m + size_b - 1));
    }
    for v in violations {
        report.note(v);
    }
    let slack = (&ratio - &lo).min(&hi - &ratio);
    let holds = !slack.is_negative();
    report.conclude(Comparison { lhs: Value::exact(&ratio), rhs: Value::exact(&lo), slack: Value::exact(&slack), holds });
    Ok(TightnessExample { a, b, report })
}

/// Least-squares slope of `ln c_hat` against `ln t`, one tightness example per `t`.
#[derive(Clone, Debug)]
pub struct SlopeFit {
    pub points: Vec<(Rational, Interval)>,
    pub slope: f64,
}

/// Runs [`tightness_example`] with the regime unenforced for each `t` and fits the slope.
pub fn tightness_slope(k: usize, n: u64, ts: &[Rational], m: u64, seed: u64, caps: &Caps) -> Result<SlopeFit> {
    if ts.len() < 2 || n == 0 {
        return Err(Error::Argument("a slope needs n >= 1 and at least two values of t".into()));
    }
    let mut points = Vec::with_capacity(ts.len());
    for t in ts {
        let params = TightnessParams { k, n, t: t.clone(), m, seed, enforce_regime: false };
        let ex = tightness_example(&params, caps)?;
        let v = &ex.report.derived["c_hat"];
        let iv = Interval::new(
            crate::exact::parse_rational(&v.lo).expect("reported bound"),
            crate::exact::parse_rational(&v.hi).expect("reported bound"),
        );
        if !iv.lo.is_positive() {
            return Err(Error::Argument(format!("c_hat is not positive at t = {t}")));
        }
        points.push((t.clone(), iv));
    }
    let xs: Vec<f64> = points.iter().map(|(t, _)| to_f64(t).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|(_, c)| c.midpoint_f64().ln()).collect();
    let len = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / len, ys.iter().sum::<f64>() / len);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx.is_zero() {
        return Err(Error::Argument("values of t must not all coincide".into()));
    }
    Ok(SlopeFit { points, slope: sxy / sxx })
}
