use std::fmt;

use crate::error::Result;
use crate::pl_homeo::map::{Domain, PLMap};
use crate::rational::{floor, fmt_q, one, unroll, zero, Q};

/// A pair of endpoints. Used for closed support components and for open
/// balls/arcs alike; which one is meant is always clear from context.
///
/// On the circle `end` may exceed `1` (the arc wraps); `end - start <= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arc {
    pub start: Q,
    pub end: Q,
}

impl Arc {
    pub fn new(start: Q, end: Q) -> Self {
        Arc { start, end }
    }

    pub fn length(&self) -> Q {
        &self.end - &self.start
    }

    /// Is the closed arc `[start, end]` inside the open arc `(outer)`?
    pub fn closed_inside_open(&self, outer: &Arc, domain: Domain) -> bool {
        match domain {
            Domain::Interval => outer.start < self.start && self.end < outer.end,
            Domain::Circle => {
                if outer.length() >= one() {
                    return true;
                }
                let s = unroll(&self.start, &outer.start);
                let e = &s + self.length();
                outer.start < s && e < outer.end
            }
        }
    }

    /// Does the open arc contain `x`?
    pub fn open_contains(&self, x: &Q, domain: Domain) -> bool {
        match domain {
            Domain::Interval => &self.start < x && x < &self.end,
            Domain::Circle => {
                if self.length() >= one() {
                    return true;
                }
                let u = unroll(x, &self.start);
                self.start < u && u < self.end
            }
        }
    }

    /// Does the closed arc contain `x`?
    pub fn closed_contains(&self, x: &Q, domain: Domain) -> bool {
        match domain {
            Domain::Interval => &self.start <= x && x <= &self.end,
            Domain::Circle => {
                if self.length() >= one() {
                    return true;
                }
                let u = unroll(x, &self.start);
                u <= self.end
            }
        }
    }

    /// Do the open arcs meet?
    pub fn open_overlaps(&self, other: &Arc, domain: Domain) -> bool {
        match domain {
            Domain::Interval => self.start < other.end && other.start < self.end,
            Domain::Circle => {
                if self.length() >= one() || other.length() >= one() {
                    return true;
                }
                let s = unroll(&other.start, &self.start);
                let e = &s + other.length();
                // `other` starts inside `self`, or wraps around into it.
                s < self.end || e > &self.start + one()
            }
        }
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", fmt_q(&self.start), fmt_q(&self.end))
    }
}

/// The closure of the moved set of a map: finitely many disjoint closed
/// intervals (or arcs), sorted by start.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SupportSet {
    domain: Domain,
    components: Vec<Arc>,
}

impl SupportSet {
    pub fn empty(domain: Domain) -> Self {
        SupportSet {
            domain,
            components: Vec::new(),
        }
    }

    /// Normalises a list of closed pieces: merges overlapping or touching
    /// pieces and, on the circle, reduces starts into `[0, 1)`.
    pub fn from_pieces(domain: Domain, pieces: Vec<Arc>) -> Self {
        let mut pieces: Vec<Arc> = match domain {
            Domain::Interval => pieces,
            Domain::Circle => pieces
                .into_iter()
                .map(|a| {
                    if a.length() >= one() {
                        Arc::new(zero(), one())
                    } else {
                        let n = floor(&a.start);
                        Arc::new(&a.start - &n, &a.end - &n)
                    }
                })
                .collect(),
        };
        pieces.sort();
        let mut merged: Vec<Arc> = Vec::new();
        for p in pieces {
            match merged.last_mut() {
                Some(last) if p.start <= last.end => {
                    if p.end > last.end {
                        last.end = p.end;
                    }
                }
                _ => merged.push(p),
            }
        }
        if domain == Domain::Circle && merged.len() > 1 {
            // Wrap-around merge of the last piece into the first.
            loop {
                let n = merged.len();
                if n < 2 {
                    break;
                }
                let first_start = &merged[0].start + one();
                if merged[n - 1].end >= first_start {
                    let first = merged.remove(0);
                    let last = merged.last_mut().expect("nonempty");
                    let wrapped = &first.end + one();
                    if wrapped > last.end {
                        last.end = wrapped;
                    }
                } else {
                    break;
                }
            }
        }
        if domain == Domain::Circle && merged.iter().any(|a| a.length() >= one()) {
            merged = vec![Arc::new(zero(), one())];
        }
        SupportSet {
            domain,
            components: merged,
        }
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn components(&self) -> &[Arc] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Whole circle (or whole interval).
    pub fn is_full(&self) -> bool {
        self.components.len() == 1 && self.components[0].length() >= one()
    }

    pub fn contains(&self, x: &Q) -> bool {
        self.components
            .iter()
            .any(|a| a.closed_contains(x, self.domain))
    }

    /// Image of the set under `h`.
    pub fn image(&self, h: &PLMap) -> Result<Self> {
        if self.is_full() {
            return Ok(self.clone());
        }
        let mut pieces = Vec::with_capacity(self.components.len());
        for a in &self.components {
            pieces.push(Arc::new(h.eval(&a.start)?, h.eval(&a.end)?));
        }
        Ok(Self::from_pieces(self.domain, pieces))
    }

    /// Is every component compactly inside one of the open arcs?
    pub fn inside_open(&self, arcs: &[Arc]) -> bool {
        self.components
            .iter()
            .all(|c| arcs.iter().any(|a| c.closed_inside_open(a, self.domain)))
    }

    /// Smallest closed arc containing every component, in the lift window
    /// starting at `base` (circle) or plain coordinates (interval).
    pub fn hull_from(&self, base: &Q) -> Option<Arc> {
        if self.components.is_empty() {
            return None;
        }
        let mut lo: Option<Q> = None;
        let mut hi: Option<Q> = None;
        for c in &self.components {
            let s = match self.domain {
                Domain::Interval => c.start.clone(),
                Domain::Circle => unroll(&c.start, base),
            };
            let e = &s + c.length();
            if lo.as_ref().is_none_or(|l| &s < l) {
                lo = Some(s);
            }
            if hi.as_ref().is_none_or(|h| &e > h) {
                hi = Some(e);
            }
        }
        Some(Arc::new(lo?, hi?))
    }
}

impl fmt::Display for SupportSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("∅");
        }
        let parts: Vec<String> = self.components.iter().map(|a| a.to_string()).collect();
        f.write_str(&parts.join(" ∪ "))
    }
}

/// Closure of `{x : f(x) ≠ x}`.
pub fn support(f: &PLMap) -> SupportSet {
    let pts = f.period_points();
    let mut pieces = Vec::new();
    match f.domain() {
        Domain::Interval => {
            for w in pts.windows(2) {
                let (a, fa) = &w[0];
                let (b, fb) = &w[1];
                if a != fa || b != fb {
                    pieces.push(Arc::new(a.clone(), b.clone()));
                }
            }
        }
        Domain::Circle => {
            if pts.len() == 2 {
                // Rotation.
                let shift = &pts[0].1 - &pts[0].0;
                if shift != floor(&shift) {
                    pieces.push(Arc::new(zero(), one()));
                }
            } else {
                for w in pts.windows(2) {
                    let (a, fa) = &w[0];
                    let (b, fb) = &w[1];
                    let da = fa - a;
                    let db = fb - b;
                    let fixed = da == db && da == floor(&da);
                    if !fixed {
                        pieces.push(Arc::new(a.clone(), b.clone()));
                    }
                }
            }
        }
    }
    SupportSet::from_pieces(f.domain(), pieces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn support_examples() {
        assert!(support(&PLMap::identity(Domain::Interval)).is_empty());
        let g = PLMap::new(
            Domain::Interval,
            vec![qi(0), q(1, 4), q(3, 8), q(1, 2), qi(1)],
            vec![qi(0), q(1, 4), q(7, 16), q(1, 2), qi(1)],
        )
        .unwrap();
        assert_eq!(support(&g).components(), &[Arc::new(q(1, 4), q(1, 2))]);
        let f = crate::pl_homeo::map::one_knot_map(q(1, 2), q(1, 4)).unwrap();
        assert_eq!(support(&f).components(), &[Arc::new(qi(0), qi(1))]);
    }

    #[test]
    fn circle_support_wraps() {
        let g = PLMap::bump(
            Domain::Circle,
            &q(9, 10),
            &q(6, 5),
            vec![(qi(1), q(11, 10))],
        )
        .unwrap();
        let s = support(&g);
        assert_eq!(s.components(), &[Arc::new(q(9, 10), q(6, 5))]);
        assert!(s.contains(&q(1, 20)));
        assert!(!s.contains(&q(1, 2)));
        assert!(support(&PLMap::rotation(q(1, 3))).is_full());
        assert!(support(&PLMap::identity(Domain::Circle)).is_empty());
    }

    #[test]
    fn wrap_merge() {
        let s = SupportSet::from_pieces(
            Domain::Circle,
            vec![Arc::new(qi(0), q(1, 10)), Arc::new(q(9, 10), qi(1))],
        );
        assert_eq!(s.components(), &[Arc::new(q(9, 10), q(11, 10))]);
    }

    #[test]
    fn arc_overlap_on_circle() {
        let a = Arc::new(q(9, 10), q(29, 20));
        let b = Arc::new(q(3, 10), q(3, 4));
        let c = Arc::new(q(1, 2), q(3, 4));
        assert!(a.open_overlaps(&b, Domain::Circle));
        assert!(b.open_overlaps(&a, Domain::Circle));
        assert!(!a.open_overlaps(&c, Domain::Circle));
        assert!(!c.open_overlaps(&a, Domain::Circle));
    }
}
