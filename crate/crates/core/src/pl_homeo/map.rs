use std::fmt;

use crate::error::{Error, Result};
use crate::piecewise::{check_increasing, collinear, interp, PlFunction};
use crate::rational::{floor, fmt_q, one, round_half_up, unroll, zero, Q};

/// Which one-manifold a map acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Domain {
    /// `[0, 1]`, endpoints fixed.
    Interval,
    /// `R/Z`, stored through a lift.
    Circle,
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Interval => f.write_str("interval"),
            Domain::Circle => f.write_str("circle"),
        }
    }
}

/// An orientation preserving piecewise-linear homeomorphism of the interval
/// or the circle, with exact rational breakpoints.
///
/// On the interval the knots run from `0` to `1` and the endpoints are fixed.
/// On the circle the knots lie in `[0, 1)` and describe one period of a lift
/// `F` with `F(x + 1) = F(x) + 1`; the lift is normalised so that the value at
/// the first knot lies in `[0, 1)`. A rotation has the single knot `0`.
///
/// Construction always canonicalises, so `==` is equality of maps.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PLMap {
    domain: Domain,
    knots: Vec<Q>,
    values: Vec<Q>,
}

impl PLMap {
    pub fn identity(domain: Domain) -> Self {
        match domain {
            Domain::Interval => PLMap {
                domain,
                knots: vec![zero(), one()],
                values: vec![zero(), one()],
            },
            Domain::Circle => PLMap {
                domain,
                knots: vec![zero()],
                values: vec![zero()],
            },
        }
    }

    /// The circle rotation `x ↦ x + shift`.
    pub fn rotation(shift: Q) -> Self {
        let v = &shift - floor(&shift);
        PLMap {
            domain: Domain::Circle,
            knots: vec![zero()],
            values: vec![v],
        }
    }

    /// Validates and canonicalises explicit knot and value lists.
    pub fn new(domain: Domain, knots: Vec<Q>, values: Vec<Q>) -> Result<Self> {
        if knots.len() != values.len() {
            return Err(Error::InvariantViolation(format!(
                "{} knots but {} values",
                knots.len(),
                values.len()
            )));
        }
        check_increasing("knots", &knots)?;
        check_increasing("values", &values)?;
        match domain {
            Domain::Interval => {
                if knots.len() < 2 {
                    return Err(Error::InvariantViolation(
                        "interval maps need at least the knots 0 and 1".into(),
                    ));
                }
                let last = knots.len() - 1;
                if knots[0] != zero() || values[0] != zero() {
                    return Err(Error::InvariantViolation(
                        "knots[0] and values[0] must both be 0".into(),
                    ));
                }
                if knots[last] != one() || values[last] != one() {
                    return Err(Error::InvariantViolation(format!(
                        "knots[{last}] and values[{last}] must both be 1"
                    )));
                }
                let f = PlFunction::new(knots, values)?;
                Ok(PLMap {
                    domain,
                    knots: f.knots().to_vec(),
                    values: f.values().to_vec(),
                })
            }
            Domain::Circle => {
                if knots.is_empty() {
                    return Err(Error::InvariantViolation("no knots".into()));
                }
                let last = knots.len() - 1;
                if knots[0] < zero() || knots[last] >= one() {
                    return Err(Error::InvariantViolation(
                        "circle knots must lie in [0, 1)".into(),
                    ));
                }
                if values[last] >= &values[0] + one() {
                    return Err(Error::InvariantViolation(format!(
                        "values[{last}] must be below values[0] + 1"
                    )));
                }
                Ok(Self::canonical_circle(knots, values))
            }
        }
    }

    /// Builds a map from points of its graph.
    ///
    /// Interval: the endpoints `(0, 0)` and `(1, 1)` are added when missing.
    /// Circle: the points are pairs `(x, F(x))` of a lift, spanning less than
    /// one period; they are reduced into `[0, 1)`.
    pub fn from_points(domain: Domain, mut points: Vec<(Q, Q)>) -> Result<Self> {
        match domain {
            Domain::Interval => {
                if !points.iter().any(|p| p.0 == zero()) {
                    points.push((zero(), zero()));
                }
                if !points.iter().any(|p| p.0 == one()) {
                    points.push((one(), one()));
                }
                points.sort_by(|a, b| a.0.cmp(&b.0));
                points.dedup();
                let (k, v) = points.into_iter().unzip();
                Self::new(domain, k, v)
            }
            Domain::Circle => {
                let mut reduced: Vec<(Q, Q)> = points
                    .into_iter()
                    .map(|(x, y)| {
                        let n = floor(&x);
                        (&x - &n, y - n)
                    })
                    .collect();
                reduced.sort_by(|a, b| a.0.cmp(&b.0));
                reduced.dedup();
                let (k, v) = reduced.into_iter().unzip();
                Self::new(domain, k, v)
            }
        }
    }

    /// Identity outside `(l, r)` and given by `points` inside; `points` are in
    /// the lift coordinates of the window `[l, r]` and must not include its
    /// ends.
    pub fn bump(domain: Domain, l: &Q, r: &Q, points: Vec<(Q, Q)>) -> Result<Self> {
        let mut pts = vec![(l.clone(), l.clone()), (r.clone(), r.clone())];
        pts.extend(points);
        if domain == Domain::Circle && r - l >= one() {
            return Err(Error::InvariantViolation("bump window spans the whole circle".into()));
        }
        Self::from_points(domain, pts)
    }

    fn canonical_circle(knots: Vec<Q>, values: Vec<Q>) -> Self {
        let n = knots.len();
        let mut keep_k = Vec::with_capacity(n);
        let mut keep_v = Vec::with_capacity(n);
        if n > 1 {
            for i in 0..n {
                let (px, py) = if i == 0 {
                    (&knots[n - 1] - one(), &values[n - 1] - one())
                } else {
                    (knots[i - 1].clone(), values[i - 1].clone())
                };
                let (nx, ny) = if i + 1 == n {
                    (&knots[0] + one(), &values[0] + one())
                } else {
                    (knots[i + 1].clone(), values[i + 1].clone())
                };
                if !collinear(&px, &py, &knots[i], &values[i], &nx, &ny) {
                    keep_k.push(knots[i].clone());
                    keep_v.push(values[i].clone());
                }
            }
        }
        if keep_k.is_empty() {
            // Linear lift of degree one: a rotation.
            let shift = &values[0] - &knots[0];
            return Self::rotation(shift);
        }
        let shift = floor(&keep_v[0]);
        for v in keep_v.iter_mut() {
            *v -= &shift;
        }
        PLMap {
            domain: Domain::Circle,
            knots: keep_k,
            values: keep_v,
        }
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn knots(&self) -> &[Q] {
        &self.knots
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.domain)
    }

    /// Exact value at `x`. On the circle this is the stored lift, so any
    /// rational is accepted.
    pub fn eval(&self, x: &Q) -> Result<Q> {
        match self.domain {
            Domain::Interval => {
                if x < &zero() || x > &one() {
                    return Err(Error::DomainError(fmt_q(x)));
                }
                interp(&self.knots, &self.values, x)
            }
            Domain::Circle => Ok(circle_interp(&self.knots, &self.values, x)),
        }
    }

    /// Exact value of the inverse at `y`.
    pub fn eval_inverse(&self, y: &Q) -> Result<Q> {
        match self.domain {
            Domain::Interval => {
                if y < &zero() || y > &one() {
                    return Err(Error::DomainError(fmt_q(y)));
                }
                interp(&self.values, &self.knots, y)
            }
            Domain::Circle => Ok(circle_interp(&self.values, &self.knots, y)),
        }
    }

    /// On the circle, the lift value closest to `x` (displacement in
    /// `[-1/2, 1/2)`); on the interval, plain evaluation.
    pub fn eval_near(&self, x: &Q) -> Result<Q> {
        let y = self.eval(x)?;
        Ok(match self.domain {
            Domain::Interval => y,
            Domain::Circle => {
                let k = round_half_up(&(&y - x));
                y - k
            }
        })
    }

    /// Value in the lift window `[base, base + 1)` on the circle.
    pub(crate) fn eval_local(&self, x: &Q, base: &Q) -> Result<Q> {
        let y = self.eval(x)?;
        Ok(match self.domain {
            Domain::Interval => y,
            Domain::Circle => unroll(&y, base),
        })
    }

    pub(crate) fn eval_inverse_local(&self, y: &Q, base: &Q) -> Result<Q> {
        let x = self.eval_inverse(y)?;
        Ok(match self.domain {
            Domain::Interval => x,
            Domain::Circle => unroll(&x, base),
        })
    }

    pub fn inverse(&self) -> Self {
        match self.domain {
            Domain::Interval => PLMap {
                domain: self.domain,
                knots: self.values.clone(),
                values: self.knots.clone(),
            },
            Domain::Circle => {
                let pts = self
                    .values
                    .iter()
                    .cloned()
                    .zip(self.knots.iter().cloned())
                    .collect();
                Self::from_points(Domain::Circle, pts).expect("inverse of a valid circle map")
            }
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PLMap) -> Result<Self> {
        if self.domain != inner.domain {
            return Err(Error::DomainMismatch);
        }
        match self.domain {
            Domain::Interval => {
                let mut xs: Vec<Q> = inner.knots.clone();
                for k in &self.knots {
                    xs.push(inner.eval_inverse(k)?);
                }
                xs.sort();
                xs.dedup();
                let ys = xs
                    .iter()
                    .map(|x| self.eval(&inner.eval(x)?))
                    .collect::<Result<Vec<_>>>()?;
                Self::new(Domain::Interval, xs, ys)
            }
            Domain::Circle => {
                let base = inner.eval(&zero())?;
                let mut xs: Vec<Q> = inner.knots.clone();
                for k in &self.knots {
                    let v = unroll(k, &base);
                    xs.push(inner.eval_inverse(&v)?);
                }
                let mut pts = Vec::with_capacity(xs.len());
                for x in xs {
                    let x = &x - floor(&x);
                    let y = self.eval(&inner.eval(&x)?)?;
                    pts.push((x, y));
                }
                Self::from_points(Domain::Circle, pts)
            }
        }
    }

    /// Composition `maps[0] ∘ maps[1] ∘ …`; identity for an empty slice.
    pub fn compose_all(domain: Domain, maps: &[PLMap]) -> Result<Self> {
        let mut acc = Self::identity(domain);
        for m in maps {
            acc = acc.compose(m)?;
        }
        Ok(acc)
    }

    /// `self^n` for any integer `n`.
    pub fn pow(&self, n: i32) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut acc = Self::identity(self.domain);
        for _ in 0..n.unsigned_abs() {
            acc = acc.compose(&base).expect("same domain");
        }
        acc
    }

    /// The underlying increasing function on `[0, 1]` (interval maps only).
    pub fn as_function(&self) -> Option<PlFunction> {
        match self.domain {
            Domain::Interval => PlFunction::new(self.knots.clone(), self.values.clone()).ok(),
            Domain::Circle => None,
        }
    }

    /// Points `(x, F(x))` covering one period starting at the first knot,
    /// with the closing point `(x_0 + 1, F(x_0) + 1)` on the circle.
    pub(crate) fn period_points(&self) -> Vec<(Q, Q)> {
        let mut pts: Vec<(Q, Q)> = self
            .knots
            .iter()
            .cloned()
            .zip(self.values.iter().cloned())
            .collect();
        if self.domain == Domain::Circle {
            pts.push((&self.knots[0] + one(), &self.values[0] + one()));
        }
        pts
    }

    /// A small human readable rendering.
    pub fn describe(&self) -> String {
        let pts: Vec<String> = self
            .knots
            .iter()
            .zip(&self.values)
            .map(|(k, v)| format!("({}, {})", fmt_q(k), fmt_q(v)))
            .collect();
        format!("{}[{}]", self.domain, pts.join(", "))
    }
}

fn circle_interp(xs: &[Q], ys: &[Q], x: &Q) -> Q {
    let n = xs.len();
    let shift = floor(&(x - &xs[0]));
    let u = x - &shift;
    let i = xs.partition_point(|k| k <= &u);
    let (x0, y0) = (&xs[i - 1], &ys[i - 1]);
    let y = if &u == x0 {
        y0.clone()
    } else if i == n {
        let x1 = &xs[0] + one();
        let y1 = &ys[0] + one();
        crate::rational::lerp(x0, y0, &x1, &y1, &u)
    } else {
        crate::rational::lerp(x0, y0, &xs[i], &ys[i], &u)
    };
    y + shift
}

impl fmt::Display for PLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// Interval map with the single interior knot `(x, y)`.
pub fn one_knot_map(x: Q, y: Q) -> Result<PLMap> {
    PLMap::new(Domain::Interval, vec![zero(), x, one()], vec![zero(), y, one()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn f() -> PLMap {
        one_knot_map(q(1, 2), q(1, 4)).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(f().eval(&q(1, 4)).unwrap(), q(1, 8));
        let id = PLMap::identity(Domain::Interval);
        assert_eq!(id.eval(&q(3, 7)).unwrap(), q(3, 7));
        assert!(f().eval(&q(-1, 2)).is_err());
    }

    #[test]
    fn compose_examples() {
        let ff = f().compose(&f()).unwrap();
        assert_eq!(ff.knots(), &[qi(0), q(1, 2), q(2, 3), qi(1)]);
        assert_eq!(ff.values(), &[qi(0), q(1, 8), q(1, 4), qi(1)]);
        let id = PLMap::identity(Domain::Interval);
        assert_eq!(id.compose(&f()).unwrap(), f());
        assert!(f().compose(&f().inverse()).unwrap().is_identity());
    }

    #[test]
    fn invert_examples() {
        let inv = f().inverse();
        assert_eq!(inv.knots(), &[qi(0), q(1, 4), qi(1)]);
        assert_eq!(inv.values(), &[qi(0), q(1, 2), qi(1)]);
        assert!(PLMap::identity(Domain::Circle).inverse().is_identity());
        let r = PLMap::rotation(q(1, 10));
        assert_eq!(r.inverse(), PLMap::rotation(q(-1, 10)));
        assert_eq!(r.inverse().values(), &[q(9, 10)]);
    }

    #[test]
    fn circle_lift_wraps() {
        let r = PLMap::rotation(q(1, 10));
        assert_eq!(r.eval(&q(19, 10)).unwrap(), qi(2));
        assert_eq!(r.eval_near(&q(19, 20)).unwrap(), q(21, 20));
        let g = PLMap::from_points(
            Domain::Circle,
            vec![(q(9, 10), q(9, 10)), (qi(1), q(11, 10)), (q(6, 5), q(6, 5))],
        )
        .unwrap();
        assert_eq!(g.eval_near(&qi(0)).unwrap(), q(1, 10));
        assert_eq!(g.eval_near(&q(1, 2)).unwrap(), q(1, 2));
        assert_eq!(g.compose(&g.inverse()).unwrap(), PLMap::identity(Domain::Circle));
    }

    #[test]
    fn rejects_bad_endpoints() {
        let err = PLMap::new(Domain::Interval, vec![qi(0), qi(1)], vec![qi(0), q(1, 2)]);
        assert!(matches!(err, Err(Error::InvariantViolation(_))));
    }

    #[test]
    fn domain_mismatch() {
        let e = f().compose(&PLMap::identity(Domain::Circle));
        assert_eq!(e, Err(Error::DomainMismatch));
    }
}
