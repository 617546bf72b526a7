//! The uniform metric `d(f, g) = max_x d_M(f(x), g(x))` and the complete
//! metric `D(f, g) = d(f, g) + d(f⁻¹, g⁻¹)`.
//!
//! `d_M` is the euclidean distance on `[0, 1]` and arc length on `R/Z`.

use crate::error::{Error, Result};
use crate::pl_homeo::map::{Domain, PLMap};
use crate::rational::{abs, circle_dist, floor, one, q, zero, Q};

/// Exact `max_x d_M(f(x), g(x))`.
///
/// `f - g` is linear between consecutive knots of the common refinement, so
/// on the interval the maximum sits at a knot. On the circle the arc
/// distance also peaks where `f - g` crosses a half integer; that case is
/// detected per segment.
pub fn sup_distance(f: &PLMap, g: &PLMap) -> Result<Q> {
    if f.domain() != g.domain() {
        return Err(Error::DomainMismatch);
    }
    let mut xs: Vec<Q> = f.knots().iter().chain(g.knots()).cloned().collect();
    xs.sort();
    xs.dedup();
    match f.domain() {
        Domain::Interval => {
            let mut best = zero();
            for x in &xs {
                let d = abs(&(f.eval(x)? - g.eval(x)?));
                if d > best {
                    best = d;
                }
            }
            Ok(best)
        }
        Domain::Circle => {
            let half = q(1, 2);
            let mut best = zero();
            xs.push(&xs[0] + one());
            for w in xs.windows(2) {
                let da = f.eval(&w[0])? - g.eval(&w[0])?;
                let db = f.eval(&w[1])? - g.eval(&w[1])?;
                let (lo, hi) = if da <= db { (&da, &db) } else { (&db, &da) };
                // Some m + 1/2 in [lo, hi]?
                if floor(&(hi - &half)) + &half >= *lo {
                    return Ok(half);
                }
                for d in [&da, &db] {
                    let c = circle_dist(d, &zero());
                    if c > best {
                        best = c;
                    }
                }
            }
            Ok(best)
        }
    }
}

/// `d(f, g) + d(f⁻¹, g⁻¹)`.
pub fn complete_distance(f: &PLMap, g: &PLMap) -> Result<Q> {
    Ok(sup_distance(f, g)? + sup_distance(&f.inverse(), &g.inverse())?)
}

/// `d(f, id)`.
pub fn displacement(f: &PLMap) -> Q {
    sup_distance(f, &PLMap::identity(f.domain())).expect("same domain")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pl_homeo::map::one_knot_map;

    #[test]
    fn distance_examples() {
        let f = one_knot_map(q(1, 2), q(1, 4)).unwrap();
        let id = PLMap::identity(Domain::Interval);
        assert_eq!(sup_distance(&f, &f).unwrap(), zero());
        assert_eq!(sup_distance(&id, &f).unwrap(), q(1, 4));
        assert_eq!(complete_distance(&f, &f).unwrap(), zero());
        assert_eq!(complete_distance(&id, &f).unwrap(), q(1, 2));
        let r1 = PLMap::rotation(q(1, 10));
        let r3 = PLMap::rotation(q(3, 10));
        assert_eq!(sup_distance(&r1, &r3).unwrap(), q(1, 5));
        assert_eq!(sup_distance(&r1, &PLMap::rotation(q(9, 10))).unwrap(), q(1, 5));
    }

    #[test]
    fn half_crossing_inside_segment() {
        // Displacement runs from 0 up to 0.6 and back; the arc distance tops
        // out at 1/2 strictly inside a segment.
        let g = PLMap::bump(
            Domain::Circle,
            &q(1, 10),
            &q(9, 10),
            vec![(q(1, 5), q(4, 5))],
        )
        .unwrap();
        assert_eq!(displacement(&g), q(1, 2));
    }

    #[test]
    fn mismatch() {
        let e = sup_distance(&PLMap::identity(Domain::Circle), &PLMap::identity(Domain::Interval));
        assert_eq!(e, Err(Error::DomainMismatch));
    }
}
