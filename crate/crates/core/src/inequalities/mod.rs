//! Exact checkers for the inequalities of discrete Brunn-Minkowski theory.
//!
//! Every checker evaluates its hypotheses before its conclusion and returns an
//! [`InequalityReport`]. Comparisons between sums of `d`-th roots are decided
//! exactly; intervals appear only in the reported magnitudes.

mod brunn;
mod containment;
mod integer;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{compare_root_sum, report_precision, root_sum_interval, root_value, to_f64, Interval, Rational};

pub use brunn::{empirical_constant, verify_bm, verify_bm_in_boxes, verify_superadditivity, RealFunction};
pub use containment::{verify_box_shrinking, verify_stability_containment};
pub use integer::{petridis_constant, verify_ap_containment, verify_lev, verify_plunnecke, EXACT_K_MAX_SIZE};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// A reported magnitude: exact when known, otherwise a certified bracket.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Value {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exact: Option<String>,
    pub lo: String,
    pub hi: String,
    pub approx: f64,
}

impl Value {
    pub fn exact(q: &Rational) -> Self {
        let s = q.to_string();
        Value { exact: Some(s.clone()), lo: s.clone(), hi: s, approx: to_f64(q) }
    }

    pub fn int<T: Into<num_bigint::BigInt>>(v: T) -> Self {
        Value::exact(&Rational::from_integer(v.into()))
    }

    pub fn interval(iv: &Interval) -> Self {
        if iv.is_point() {
            return Value::exact(&iv.lo);
        }
        Value { exact: None, lo: iv.lo.to_string(), hi: iv.hi.to_string(), approx: iv.midpoint_f64() }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(s) => f.write_str(s),
            None => write!(f, "[{}, {}] (~{:.9})", self.lo, self.hi, self.approx),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub label: String,
    pub holds: bool,
}

/// Outcome classes, in the order the command line maps them to exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    HypothesisViolated,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub schema_version: u32,
    pub name: String,
    /// The conclusion, written so that it reads `lhs >= rhs`.
    pub statement: String,
    pub hypotheses: Vec<Check>,
    pub hypotheses_hold: bool,
    pub hypothesis_values: BTreeMap<String, Value>,
    pub lhs: Option<Value>,
    pub rhs: Option<Value>,
    pub slack: Option<Value>,
    pub conclusion_holds: Option<bool>,
    pub pass: bool,
    pub caps_used: BTreeMap<String, String>,
    pub derived: BTreeMap<String, Value>,
    pub witness: BTreeMap<String, String>,
    pub notes: Vec<String>,
}

impl InequalityReport {
    pub fn new(name: &str, statement: &str) -> Self {
        InequalityReport {
            schema_version: REPORT_SCHEMA_VERSION,
            name: name.to_string(),
            statement: statement.to_string(),
            hypotheses: Vec::new(),
            hypotheses_hold: true,
            hypothesis_values: BTreeMap::new(),
            lhs: None,
            rhs: None,
            slack: None,
            conclusion_holds: None,
            pass: false,
            caps_used: BTreeMap::new(),
            derived: BTreeMap::new(),
            witness: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn hypothesis(&mut self, label: &str, holds: bool) -> &mut Self {
        self.hypotheses.push(Check { label: label.to_string(), holds });
        self.hypotheses_hold &= holds;
        self.refresh();
        self
    }

    pub fn value(&mut self, label: &str, v: Value) -> &mut Self {
        self.hypothesis_values.insert(label.to_string(), v);
        self
    }

    pub fn conclude(&mut self, cmp: Comparison) -> &mut Self {
        self.lhs = Some(cmp.lhs);
        self.rhs = Some(cmp.rhs);
        self.slack = Some(cmp.slack);
        self.conclusion_holds = Some(cmp.holds);
        self.refresh();
        self
    }

    pub fn cap(&mut self, key: &str, value: impl fmt::Display) -> &mut Self {
        self.caps_used.insert(key.to_string(), value.to_string());
        self
    }

    pub fn derive(&mut self, key: &str, v: Value) -> &mut Self {
        self.derived.insert(key.to_string(), v);
        self
    }

    pub fn witness(&mut self, key: &str, value: impl fmt::Display) -> &mut Self {
        self.witness.insert(key.to_string(), value.to_string());
        self
    }

    pub fn note(&mut self, text: impl Into<String>) -> &mut Self {
        self.notes.push(text.into());
        self
    }

    fn refresh(&mut self) {
        self.pass = self.hypotheses_hold && self.conclusion_holds == Some(true);
    }

    pub fn outcome(&self) -> Outcome {
        if !self.hypotheses_hold {
            Outcome::HypothesisViolated
        } else if self.pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

/// `lhs >= rhs` with its slack and the exact verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub lhs: Value,
    pub rhs: Value,
    pub slack: Value,
    pub holds: bool,
}

impl Comparison {
    /// Exact comparison of two rationals.
    pub fn rational(lhs: &Rational, rhs: &Rational) -> Self {
        Comparison {
            lhs: Value::exact(lhs),
            rhs: Value::exact(rhs),
            slack: Value::exact(&(lhs - rhs)),
            holds: lhs >= rhs,
        }
    }

    /// `u^{1/d} >= v^{1/d} + w^{1/d}`, decided exactly; magnitudes bracketed.
    pub fn root_sum(u: &Rational, v: &Rational, w: &Rational, d: u32) -> Result<Self> {
        let holds = compare_root_sum(u, v, w, d)? != std::cmp::Ordering::Less;
        let eps = report_precision();
        let lhs = root_value(u, d, &eps)?;
        let rhs = root_sum_interval(v, w, d, &eps)?;
        let slack = lhs.sub(&rhs);
        Ok(Comparison { lhs: Value::interval(&lhs), rhs: Value::interval(&rhs), slack: Value::interval(&slack), holds })
    }
}

pub(crate) fn count(n: usize) -> Rational {
    Rational::from_integer(n.into())
}

pub(crate) fn check_unit_interval(eps: &Rational) -> Result<()> {
    if eps.is_negative() || *eps > Rational::one() {
        return Err(Error::Argument(format!("epsilon must lie in [0, 1], got {eps}")));
    }
    Ok(())
}

pub(crate) fn nonneg(q: &Rational, what: &str) -> Result<()> {
    if q.is_negative() {
        return Err(Error::Argument(format!("{what} must be non-negative, got {q}")));
    }
    Ok(())
}

pub(crate) fn positive_part(q: Rational) -> Rational {
    if q.is_negative() {
        Rational::zero()
    } else {
        q
    }
}
