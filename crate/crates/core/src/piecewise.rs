//! Strictly increasing piecewise-linear functions on a closed interval.
//!
//! This is the shared workhorse behind [`PLMap`](crate::PLMap) on the
//! interval, germ representatives and the base pieces of self-similar maps.
//! Values are kept in canonical form: interior knots where the slope does not
//! change are dropped, so two functions are equal iff their knot lists are.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::rational::{fmt_q, lerp, Q};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlFunction {
    knots: Vec<Q>,
    values: Vec<Q>,
}

/// True when `(x1, y1)` lies on the segment joining its neighbours.
pub(crate) fn collinear(x0: &Q, y0: &Q, x1: &Q, y1: &Q, x2: &Q, y2: &Q) -> bool {
    (y1 - y0) * (x2 - x1) == (y2 - y1) * (x1 - x0)
}

/// Checks strict monotonicity and reports the first offending index.
pub(crate) fn check_increasing(name: &str, xs: &[Q]) -> Result<()> {
    for (i, w) in xs.windows(2).enumerate() {
        if w[0] >= w[1] {
            return Err(Error::InvariantViolation(format!(
                "{name}[{}] = {} is not strictly greater than {name}[{i}] = {}",
                i + 1,
                fmt_q(&w[1]),
                fmt_q(&w[0])
            )));
        }
    }
    Ok(())
}

impl PlFunction {
    /// Builds a function from matching knot/value lists, dropping collinear
    /// interior knots.
    pub fn new(knots: Vec<Q>, values: Vec<Q>) -> Result<Self> {
        if knots.len() != values.len() {
            return Err(Error::InvariantViolation(format!(
                "{} knots but {} values",
                knots.len(),
                values.len()
            )));
        }
        if knots.len() < 2 {
            return Err(Error::InvariantViolation(
                "a piecewise-linear function needs at least two knots".into(),
            ));
        }
        check_increasing("knots", &knots)?;
        check_increasing("values", &values)?;
        Ok(Self::canonical(knots, values))
    }

    fn canonical(knots: Vec<Q>, values: Vec<Q>) -> Self {
        let n = knots.len();
        let mut keep_k = Vec::with_capacity(n);
        let mut keep_v = Vec::with_capacity(n);
        for i in 0..n {
            let interior = i > 0 && i + 1 < n;
            if interior
                && collinear(
                    &knots[i - 1],
                    &values[i - 1],
                    &knots[i],
                    &values[i],
                    &knots[i + 1],
                    &values[i + 1],
                )
            {
                continue;
            }
            keep_k.push(knots[i].clone());
            keep_v.push(values[i].clone());
        }
        PlFunction {
            knots: keep_k,
            values: keep_v,
        }
    }

    /// Builds from unsorted points; sorts by abscissa first.
    pub fn from_points(mut points: Vec<(Q, Q)>) -> Result<Self> {
        points.sort_by(|a, b| a.0.cmp(&b.0));
        points.dedup();
        let (k, v) = points.into_iter().unzip();
        Self::new(k, v)
    }

    /// The line through `(a, fa)` and `(b, fb)`.
    pub fn linear(a: Q, fa: Q, b: Q, fb: Q) -> Result<Self> {
        Self::new(vec![a, b], vec![fa, fb])
    }

    pub fn knots(&self) -> &[Q] {
        &self.knots
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn start(&self) -> &Q {
        &self.knots[0]
    }

    pub fn end(&self) -> &Q {
        self.knots.last().expect("nonempty")
    }

    pub fn image_start(&self) -> &Q {
        &self.values[0]
    }

    pub fn image_end(&self) -> &Q {
        self.values.last().expect("nonempty")
    }

    /// Slope of the first linear piece.
    pub fn first_slope(&self) -> Q {
        (&self.values[1] - &self.values[0]) / (&self.knots[1] - &self.knots[0])
    }

    pub fn eval(&self, x: &Q) -> Result<Q> {
        interp(&self.knots, &self.values, x)
    }

    pub fn eval_inverse(&self, y: &Q) -> Result<Q> {
        interp(&self.values, &self.knots, y)
    }

    pub fn inverse(&self) -> Self {
        PlFunction {
            knots: self.values.clone(),
            values: self.knots.clone(),
        }
    }

    /// `self ∘ inner`, defined where `inner` lands in `self`'s domain.
    pub fn compose(&self, inner: &PlFunction) -> Result<Self> {
        let lo = if inner.image_start() >= self.start() {
            inner.start().clone()
        } else {
            inner.eval_inverse(self.start()).map_err(|_| no_overlap())?
        };
        let hi = if inner.image_end() <= self.end() {
            inner.end().clone()
        } else {
            inner.eval_inverse(self.end()).map_err(|_| no_overlap())?
        };
        if lo >= hi {
            return Err(no_overlap());
        }
        let (ylo, yhi) = (inner.eval(&lo)?, inner.eval(&hi)?);
        let mut xs: Vec<Q> = vec![lo.clone(), hi.clone()];
        xs.extend(inner.knots.iter().filter(|k| **k > lo && **k < hi).cloned());
        for k in self.knots.iter().filter(|k| **k > ylo && **k < yhi) {
            xs.push(inner.eval_inverse(k)?);
        }
        xs.sort();
        xs.dedup();
        let mut ys = Vec::with_capacity(xs.len());
        for x in &xs {
            ys.push(self.eval(&inner.eval(x)?)?);
        }
        Ok(Self::canonical(xs, ys))
    }

    /// Restriction to `[a, b]`, which must lie inside the domain.
    pub fn restrict(&self, a: &Q, b: &Q) -> Result<Self> {
        if a < self.start() || b > self.end() || a >= b {
            return Err(Error::DomainError(format!("[{}, {}]", fmt_q(a), fmt_q(b))));
        }
        let mut xs = vec![a.clone(), b.clone()];
        xs.extend(self.knots.iter().filter(|k| *k > a && *k < b).cloned());
        xs.sort();
        let ys = xs.iter().map(|x| self.eval(x)).collect::<Result<Vec<_>>>()?;
        Ok(Self::canonical(xs, ys))
    }

    /// Exact agreement on `[a, b]` (both must be defined there).
    pub fn agrees_on(&self, other: &PlFunction, a: &Q, b: &Q) -> Result<bool> {
        let mut xs = vec![a.clone(), b.clone()];
        for k in self.knots.iter().chain(other.knots.iter()) {
            if k > a && k < b {
                xs.push(k.clone());
            }
        }
        for x in &xs {
            if self.eval(x)? != other.eval(x)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn no_overlap() -> Error {
    Error::DomainError("composition has empty domain".into())
}

/// Evaluates the polyline through `(xs[i], ys[i])` at `x`.
pub(crate) fn interp(xs: &[Q], ys: &[Q], x: &Q) -> Result<Q> {
    let n = xs.len();
    if x < &xs[0] || x > &xs[n - 1] {
        return Err(Error::DomainError(fmt_q(x)));
    }
    let i = xs.partition_point(|k| k <= x);
    if i == 0 {
        return Ok(ys[0].clone());
    }
    let i = i.min(n - 1);
    match xs[i - 1].cmp(x) {
        Ordering::Equal => Ok(ys[i - 1].clone()),
        _ => Ok(lerp(&xs[i - 1], &ys[i - 1], &xs[i], &ys[i], x)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn collinear_knots_are_dropped() {
        let f = PlFunction::new(
            vec![qi(0), q(1, 2), qi(1)],
            vec![qi(0), q(1, 2), qi(1)],
        )
        .unwrap();
        assert_eq!(f.knots().len(), 2);
    }

    #[test]
    fn rejects_non_monotone_values_with_index() {
        let err = PlFunction::new(vec![qi(0), q(1, 2), qi(1)], vec![qi(0), qi(1), q(1, 2)])
            .unwrap_err();
        assert!(matches!(err, Error::InvariantViolation(m) if m.contains("values[2]")));
    }

    #[test]
    fn compose_restricts_domain() {
        let half = PlFunction::linear(qi(0), qi(0), qi(1), q(1, 2)).unwrap();
        let dbl = PlFunction::linear(qi(0), qi(0), q(1, 2), qi(1)).unwrap();
        let id = dbl.compose(&half).unwrap();
        assert_eq!(id.knots(), id.values());
        let h = half.compose(&dbl).unwrap();
        assert_eq!(h.end(), &q(1, 2));
    }

    #[test]
    fn eval_outside_domain_errors() {
        let f = PlFunction::linear(qi(0), qi(0), qi(1), qi(1)).unwrap();
        assert!(f.eval(&q(3, 2)).is_err());
        assert_eq!(f.eval(&q(1, 3)).unwrap(), q(1, 3));
    }
}
