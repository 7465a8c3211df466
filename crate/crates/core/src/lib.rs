//! Exact computations for sumsets in the integer lattice: iterated sumsets,
//! generalized arithmetic progressions and their hulls, hyperplane covers,
//! compressions, and checkers for discrete Brunn-Minkowski type inequalities.

pub mod error;
pub mod exact;
pub mod experiments;
pub mod gap;
pub mod geometry;
pub mod inequalities;
pub mod lattice;
pub mod linalg;
pub mod transforms;
pub mod util;

use serde::{Deserialize, Serialize};

pub use error::{Error, Result};
pub use gap::{gap_hull, is_separated, Gap, GapHullResult, HullLimits, HullMode, HullStatus};
pub use inequalities::{InequalityReport, Outcome, Value};
pub use lattice::{difference_set, dilate, iterated_sumset, minus, sumset, LatticeBox, PointSet};

/// Size limits shared by the batch experiments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest point set an experiment may construct.
    pub max_points: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_points: 5_000_000 }
    }
}

impl Caps {
    pub(crate) fn check_points(&self, what: &'static str, needed: u128) -> Result<()> {
        if needed > self.max_points as u128 {
            return Err(Error::Capacity { what, needed, cap: self.max_points as u128 });
        }
        Ok(())
    }
}
