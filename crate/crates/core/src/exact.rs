//! Exact rational arithmetic helpers: d-th roots, rational intervals and
//! tolerance-free comparisons of sums of d-th roots.
//!
//! Every inequality checked by this crate has the shape
//! `u^{1/d} >= v^{1/d} + w^{1/d}` with non-negative rationals `u, v, w`.
//! [`compare_root_sum`] decides it exactly. When `v/w` is the d-th power of a
//! rational the right-hand side is `(1 + q) w^{1/d}` and its d-th power is an
//! exact rational. Otherwise `v^{1/d} + w^{1/d}` has an irrational d-th power
//! (positive real radicals are linearly dependent over the rationals only
//! when two of them have a rational ratio), so it can never equal `u` and
//! bisection-style bracketing is guaranteed to separate the two sides.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Largest bracket precision tried before giving up (never reached in practice).
const MAX_BITS: u32 = 1 << 16;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn integer<T: Into<BigInt>>(value: T) -> Rational {
    Rational::from_integer(value.into())
}

/// Parses `"p"`, `"p/q"` or a finite decimal such as `"0.125"`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        let negative = whole.trim_start().starts_with('-');
        let whole: BigInt = if whole.is_empty() || whole == "-" {
            BigInt::zero()
        } else {
            whole.parse().ok()?
        };
        if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let frac_value: BigInt = frac.parse().ok()?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mut value = Rational::new(frac_value, scale);
        if negative {
            value = -value;
        }
        return Some(Rational::from_integer(whole) + value);
    }
    text.parse::<BigInt>().ok().map(Rational::from_integer)
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Returns `r` with `r^d = q` when such a non-negative rational exists.
pub fn exact_root(q: &Rational, d: u32) -> Option<Rational> {
    if d == 0 || q.is_negative() {
        return None;
    }
    let p = q.numer();
    let s = q.denom();
    let rp = p.nth_root(d);
    if num_traits::pow(rp.clone(), d as usize) != *p {
        return None;
    }
    let rs = s.nth_root(d);
    if num_traits::pow(rs.clone(), d as usize) != *s {
        return None;
    }
    Some(Rational::new(rp, rs))
}

/// Closed rational interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(q: Rational) -> Self {
        Interval { lo: q.clone(), hi: q }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        Interval::new(&self.lo - &other.hi, &self.hi - &other.lo)
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().cloned().unwrap();
        let hi = products.iter().max().cloned().unwrap();
        Interval::new(lo, hi)
    }

    /// Division by an interval that does not contain zero.
    pub fn div(&self, other: &Interval) -> Option<Interval> {
        if !other.lo.is_positive() && !other.hi.is_negative() {
            return None;
        }
        let inv = Interval::new(other.hi.recip(), other.lo.recip());
        Some(self.mul(&inv))
    }

    pub fn scale(&self, factor: &Rational) -> Interval {
        if factor.is_negative() {
            Interval::new(&self.hi * factor, &self.lo * factor)
        } else {
            Interval::new(&self.lo * factor, &self.hi * factor)
        }
    }

    /// d-th power of an interval of non-negative numbers.
    pub fn pow_nonneg(&self, d: u32) -> Interval {
        debug_assert!(!self.lo.is_negative());
        Interval::new(pow(&self.lo, d), pow(&self.hi, d))
    }

    pub fn midpoint_f64(&self) -> f64 {
        (to_f64(&self.lo) + to_f64(&self.hi)) / 2.0
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

pub fn pow(q: &Rational, d: u32) -> Rational {
    num_traits::pow(q.clone(), d as usize)
}

/// Bracket of `q^{1/d}` of width at most `2^-bits`; exact when `q` is a perfect power.
pub fn root_interval(q: &Rational, d: u32, bits: u32) -> Interval {
    assert!(d >= 1, "root degree must be positive");
    assert!(!q.is_negative(), "root of a negative rational");
    if let Some(r) = exact_root(q, d) {
        return Interval::point(r);
    }
    let p = q.numer();
    let s = q.denom();
    // q^{1/d} = (p s^{d-1})^{1/d} / s
    let radicand = (p * num_traits::pow(s.clone(), (d - 1) as usize)) << (bits as usize * d as usize);
    let r = radicand.nth_root(d);
    let den: BigInt = s << bits as usize;
    Interval::new(
        Rational::new(r.clone(), den.clone()),
        Rational::new(r + 1, den),
    )
}

/// Refines `make(bits)` until its width is at most `target`.
pub fn refine<F>(target: &Rational, mut make: F) -> Result<Interval>
where
    F: FnMut(u32) -> Option<Interval>,
{
    let mut bits = 32;
    while bits <= MAX_BITS {
        if let Some(iv) = make(bits) {
            if iv.width() <= *target {
                return Ok(iv);
            }
        }
        bits *= 2;
    }
    Err(Error::Precision("interval refinement".into()))
}

fn check_nonneg(values: &[&Rational]) -> Result<()> {
    if values.iter().any(|v| v.is_negative()) {
        return Err(Error::Argument("root comparison needs non-negative operands".into()));
    }
    Ok(())
}

/// Orders `u^{1/d}` against `v^{1/d} + w^{1/d}` exactly.
pub fn compare_root_sum(u: &Rational, v: &Rational, w: &Rational, d: u32) -> Result<Ordering> {
    if d == 0 {
        return Err(Error::Argument("root degree must be positive".into()));
    }
    check_nonneg(&[u, v, w])?;
    if d == 1 {
        return Ok(u.cmp(&(v + w)));
    }
    if v.is_zero() {
        return Ok(u.cmp(w));
    }
    if w.is_zero() {
        return Ok(u.cmp(v));
    }
    if let Some(q) = exact_root(&(v / w), d) {
        let rhs = pow(&(q + Rational::one()), d) * w;
        return Ok(u.cmp(&rhs));
    }
    let mut bits = 16;
    while bits <= MAX_BITS {
        let s = root_interval(v, d, bits).add(&root_interval(w, d, bits));
        if pow(&s.lo, d) > *u {
            return Ok(Ordering::Less);
        }
        if pow(&s.hi, d) < *u {
            return Ok(Ordering::Greater);
        }
        bits *= 2;
    }
    Err(Error::Precision(format!("{u}^(1/{d}) vs {v}^(1/{d}) + {w}^(1/{d})")))
}

/// Exact check of `u^{1/d} >= v^{1/d} + w^{1/d}`.
pub fn root_sum_holds(u: &Rational, v: &Rational, w: &Rational, d: u32) -> Result<bool> {
    Ok(compare_root_sum(u, v, w, d)? != Ordering::Less)
}

/// Bracket of `v^{1/d} + w^{1/d}` with width at most `target`.
pub fn root_sum_interval(v: &Rational, w: &Rational, d: u32, target: &Rational) -> Result<Interval> {
    refine(target, |bits| Some(root_interval(v, d, bits).add(&root_interval(w, d, bits))))
}

pub fn root_value(q: &Rational, d: u32, target: &Rational) -> Result<Interval> {
    refine(target, |bits| Some(root_interval(q, d, bits)))
}

/// Default precision for reported intervals: 10^-9.
pub fn report_precision() -> Rational {
    rational(1, 1_000_000_000)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_roots() {
        assert_eq!(exact_root(&rational(27, 8), 3), Some(rational(3, 2)));
        assert_eq!(exact_root(&rational(2, 1), 2), None);
        assert_eq!(exact_root(&integer(0), 4), Some(integer(0)));
    }

    #[test]
    fn root_interval_brackets() {
        let iv = root_interval(&integer(2), 2, 40);
        assert!(pow(&iv.lo, 2) <= integer(2));
        assert!(pow(&iv.hi, 2) >= integer(2));
        assert!(iv.width() <= Rational::new(BigInt::one(), BigInt::one() << 40usize));
        let frac = root_interval(&rational(5, 7), 3, 30);
        assert!(pow(&frac.lo, 3) <= rational(5, 7) && pow(&frac.hi, 3) >= rational(5, 7));
    }

    #[test]
    fn equality_cases_resolve() {
        // (1 + 1)^2 = 4
        assert_eq!(compare_root_sum(&integer(4), &integer(1), &integer(1), 2).unwrap(), Ordering::Equal);
        // sqrt(2) + sqrt(2) = sqrt(8): irrational roots with a rational ratio
        assert_eq!(compare_root_sum(&integer(8), &integer(2), &integer(2), 2).unwrap(), Ordering::Equal);
        // cbrt(2) + cbrt(16) = 3 cbrt(2) = cbrt(54)
        assert_eq!(compare_root_sum(&integer(54), &integer(2), &integer(16), 3).unwrap(), Ordering::Equal);
    }

    #[test]
    fn strict_cases_resolve() {
        // sqrt(2) + sqrt(3) ~ 3.146, squared ~ 9.899
        assert_eq!(compare_root_sum(&integer(10), &integer(2), &integer(3), 2).unwrap(), Ordering::Greater);
        assert_eq!(compare_root_sum(&integer(9), &integer(2), &integer(3), 2).unwrap(), Ordering::Less);
        assert_eq!(compare_root_sum(&rational(99, 10), &integer(2), &integer(3), 2).unwrap(), Ordering::Greater);
        assert_eq!(compare_root_sum(&rational(989, 100), &integer(2), &integer(3), 2).unwrap(), Ordering::Less);
    }

    #[test]
    fn zero_operands_and_degree_one() {
        assert_eq!(compare_root_sum(&integer(5), &integer(0), &integer(5), 3).unwrap(), Ordering::Equal);
        assert_eq!(compare_root_sum(&integer(5), &integer(2), &integer(3), 1).unwrap(), Ordering::Equal);
        assert!(compare_root_sum(&integer(-1), &integer(2), &integer(3), 2).is_err());
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/4"), Some(rational(3, 4)));
        assert_eq!(parse_rational("-2"), Some(integer(-2)));
        assert_eq!(parse_rational("0.125"), Some(rational(1, 8)));
        assert_eq!(parse_rational("-1.5"), Some(rational(-3, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }
}
