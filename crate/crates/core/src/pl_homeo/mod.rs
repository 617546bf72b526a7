//! Piecewise-linear homeomorphisms of `[0, 1]` and `R/Z`, their metrics and
//! supports, and the self-similar maps built on top of them.

pub mod map;
pub mod metric;
pub mod selfsim;
pub mod support;

pub use map::{Domain, PLMap};
pub use metric::{complete_distance, displacement, sup_distance};
pub use selfsim::{
    eval_word, same_point, AndersonTower, EquivariantTower, Homeomorphism, SelfSimilarMap,
    TowerKind, DEFAULT_DEPTH_BOUND,
};
pub use support::{support, Arc, SupportSet};

use crate::error::{Error, Result};
use crate::rational::{one, zero, Q};

/// Evaluates any supported map at `x`, rejecting points outside the interval.
pub fn evaluate(m: &Homeomorphism, x: &Q) -> Result<Q> {
    if m.domain() == Domain::Interval && (x < &zero() || x > &one()) {
        return Err(Error::DomainError(format!("{x} is outside [0, 1]")));
    }
    m.eval(x)
}
