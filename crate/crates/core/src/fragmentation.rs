//! Fragmentation in dimension one: a map close to the identity is written as
//! `g_1 ∘ g_2 ∘ … ∘ g_m` with each `g_i` supported in the cover element `E_i`.
//!
//! The cover is first turned into a chain of arcs, each overlapping the next
//! (cyclically on the circle). One cut point sits at the middle of every
//! overlap. The segments between consecutive cuts are coloured by the cover
//! element of their arc, and the colours are processed in index order: `g_i`
//! copies the current remainder on the segments of colour `i`, ramps linearly
//! back to the identity inside the overlaps shared with colours still to come,
//! and is the identity elsewhere. The remainder is then `g_i⁻¹ ∘ f_{i-1}`.

use std::fmt;

use crate::error::{Error, Result};
use crate::pl_homeo::map::{Domain, PLMap};
use crate::pl_homeo::metric::displacement;
use crate::pl_homeo::support::{support, Arc};
use crate::rational::{fmt_q, midpoint, one, qi, unroll, zero, Q};

/// An open cover `E_1, …, E_m` of the interval or circle; each element is a
/// finite (possibly empty) union of pairwise disjoint open arcs.
///
/// On the interval an arc starting below `0` (ending above `1`) contains the
/// endpoint `0` (`1`). On the circle arcs are read mod 1 and `end` may exceed
/// `1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenCover1D {
    domain: Domain,
    elements: Vec<Vec<Arc>>,
}

impl OpenCover1D {
    pub fn new(domain: Domain, elements: Vec<Vec<Arc>>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvariantViolation("cover has no elements".into()));
        }
        for (i, el) in elements.iter().enumerate() {
            for (j, a) in el.iter().enumerate() {
                if a.start >= a.end {
                    return Err(Error::InvariantViolation(format!(
                        "elements[{i}][{j}] = ({}, {}) is empty",
                        fmt_q(&a.start),
                        fmt_q(&a.end)
                    )));
                }
                for (k, b) in el.iter().enumerate().skip(j + 1) {
                    if a.open_overlaps(b, domain) {
                        return Err(Error::InvariantViolation(format!(
                            "elements[{i}][{j}] and elements[{i}][{k}] overlap"
                        )));
                    }
                }
            }
        }
        Ok(OpenCover1D { domain, elements })
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn elements(&self) -> &[Vec<Arc>] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// The neighbourhood of the identity on which [`fragment`] is guaranteed to
/// succeed: maps with displacement strictly below the threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Threshold {
    Finite(Q),
    /// A single element covers everything.
    Unbounded,
}

impl Threshold {
    /// Is `d` strictly below the threshold?
    pub fn admits(&self, d: &Q) -> bool {
        match self {
            Threshold::Finite(t) => d < t,
            Threshold::Unbounded => true,
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Finite(t) => f.write_str(&fmt_q(t)),
            Threshold::Unbounded => f.write_str("inf"),
        }
    }
}

/// One arc of the chain, in lifted coordinates, with its element index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Link {
    pub arc: Arc,
    pub color: usize,
}

/// The chain of arcs and the cut points derived from it.
///
/// `cuts[k]` separates segment `k` from segment `k + 1` and sits at the
/// middle of the overlap of `links[k]` and `links[k + 1]`, whose width is
/// `widths[k]`. On the circle the last cut closes the cycle back to
/// `links[0]`, and all cuts lie in one period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub domain: Domain,
    pub links: Vec<Link>,
    pub cuts: Vec<Q>,
    pub widths: Vec<Q>,
}

impl Schedule {
    fn whole(domain: Domain, color: usize) -> Self {
        Schedule {
            domain,
            links: vec![Link {
                arc: Arc::new(zero(), one()),
                color,
            }],
            cuts: Vec::new(),
            widths: Vec::new(),
        }
    }

    fn is_whole(&self) -> bool {
        self.cuts.is_empty()
    }

    /// Segment `k` as `[left, right]` in lifted coordinates.
    fn segment(&self, k: usize) -> (Q, Q) {
        let n = self.links.len();
        match self.domain {
            Domain::Interval => {
                let l = if k == 0 { zero() } else { self.cuts[k - 1].clone() };
                let r = if k + 1 == n { one() } else { self.cuts[k].clone() };
                (l, r)
            }
            Domain::Circle => {
                let l = if k == 0 {
                    &self.cuts[n - 1] - one()
                } else {
                    self.cuts[k - 1].clone()
                };
                (l, self.cuts[k].clone())
            }
        }
    }

    /// Index of the segment on the other side of the left (right) end of
    /// segment `k`, if any.
    fn neighbours(&self, k: usize) -> (Option<usize>, Option<usize>) {
        let n = self.links.len();
        match self.domain {
            Domain::Interval => (k.checked_sub(1), (k + 1 < n).then_some(k + 1)),
            Domain::Circle => (Some((k + n - 1) % n), Some((k + 1) % n)),
        }
    }

    /// Cut index and ramp half-width at the left (right) end of segment `k`.
    fn left_cut(&self, k: usize) -> Option<(Q, Q)> {
        let n = self.links.len();
        let i = match self.domain {
            Domain::Interval => k.checked_sub(1)?,
            Domain::Circle => (k + n - 1) % n,
        };
        Some((self.segment(k).0, &self.widths[i] / qi(4)))
    }

    fn right_cut(&self, k: usize) -> Option<(Q, Q)> {
        if self.domain == Domain::Interval && k + 1 == self.links.len() {
            return None;
        }
        Some((self.segment(k).1, &self.widths[k] / qi(4)))
    }
}

/// Arcs of the cover as `(arc, element)`, with circle starts in `[0, 1)`.
fn flat_arcs(cover: &OpenCover1D) -> Vec<Link> {
    let mut out = Vec::new();
    for (i, el) in cover.elements.iter().enumerate() {
        for a in el {
            let arc = match cover.domain {
                Domain::Interval => a.clone(),
                Domain::Circle => {
                    let s = unroll(&a.start, &zero());
                    let e = &s + a.length();
                    Arc::new(s, e)
                }
            };
            out.push(Link { arc, color: i });
        }
    }
    out
}

fn uncovered(x: &Q) -> Error {
    Error::NoOverlap(format!("no arc extends past {}", fmt_q(x)))
}

/// Builds the chain of arcs and cut points for a cover.
pub fn cut_schedule(cover: &OpenCover1D) -> Result<Schedule> {
    let arcs = flat_arcs(cover);
    match cover.domain {
        Domain::Interval => interval_schedule(&arcs),
        Domain::Circle => circle_schedule(&arcs),
    }
}

fn interval_schedule(arcs: &[Link]) -> Result<Schedule> {
    let best = |pick: &dyn Fn(&Link) -> bool| -> Option<Link> {
        arcs.iter()
            .filter(|l| pick(l))
            .max_by(|a, b| a.arc.end.cmp(&b.arc.end))
            .cloned()
    };
    let first = best(&|l| l.arc.start < zero()).ok_or_else(|| uncovered(&zero()))?;
    if first.arc.end > one() {
        return Ok(Schedule::whole(Domain::Interval, first.color));
    }
    let mut links = vec![first];
    loop {
        let cur = links.last().expect("nonempty").arc.end.clone();
        if cur > one() {
            break;
        }
        if links.len() > arcs.len() {
            return Err(uncovered(&cur));
        }
        let next = best(&|l| l.arc.start < cur && l.arc.end > cur).ok_or_else(|| uncovered(&cur))?;
        links.push(next);
    }
    let mut cuts = Vec::new();
    let mut widths = Vec::new();
    for w in links.windows(2) {
        let lo = &w[1].arc.start;
        let hi = &w[0].arc.end;
        cuts.push(midpoint(lo, hi));
        widths.push(hi - lo);
    }
    let s = Schedule {
        domain: Domain::Interval,
        links,
        cuts,
        widths,
    };
    check_spacing(&s)?;
    Ok(s)
}

fn circle_schedule(arcs: &[Link]) -> Result<Schedule> {
    if let Some(l) = arcs.iter().find(|l| l.arc.length() >= one()) {
        return Ok(Schedule::whole(Domain::Circle, l.color));
    }
    let Some(first) = arcs.first() else {
        return Err(uncovered(&zero()));
    };
    let mut links = vec![first.clone()];
    loop {
        let first_start = &links[0].arc.start;
        let cur = links.last().expect("nonempty").arc.end.clone();
        if cur > first_start + one() {
            break;
        }
        if links.len() > arcs.len() + 1 {
            return Err(uncovered(&cur));
        }
        let base = &cur - one();
        let next = arcs
            .iter()
            .map(|l| {
                let s = unroll(&l.arc.start, &base);
                let e = &s + l.arc.length();
                Link {
                    arc: Arc::new(s, e),
                    color: l.color,
                }
            })
            .filter(|l| l.arc.end > cur)
            .max_by(|a, b| a.arc.end.cmp(&b.arc.end))
            .ok_or_else(|| uncovered(&cur))?;
        links.push(next);
    }
    // Drop leading arcs made redundant by the closing one.
    while links.len() >= 3 {
        let last_end = &links.last().expect("nonempty").arc.end;
        if *last_end > &links[1].arc.start + one() {
            links.remove(0);
        } else {
            break;
        }
    }
    let n = links.len();
    let mut cuts = Vec::with_capacity(n);
    let mut widths = Vec::with_capacity(n);
    for k in 0..n {
        let hi = links[k].arc.end.clone();
        let lo = if k + 1 == n {
            &links[0].arc.start + one()
        } else {
            links[k + 1].arc.start.clone()
        };
        cuts.push(midpoint(&lo, &hi));
        widths.push(hi - lo);
    }
    let s = Schedule {
        domain: Domain::Circle,
        links,
        cuts,
        widths,
    };
    check_spacing(&s)?;
    Ok(s)
}

/// Ramps around consecutive cuts must not meet, and every cut must stay
/// inside the overlap it was placed in.
fn check_spacing(s: &Schedule) -> Result<()> {
    let n = s.cuts.len();
    for k in 0..n {
        if s.widths[k] <= zero() {
            return Err(Error::NoOverlap(format!(
                "arcs {k} and {} only touch",
                k + 1
            )));
        }
        let (next_cut, next_w) = if k + 1 < n {
            (s.cuts[k + 1].clone(), s.widths[k + 1].clone())
        } else if s.domain == Domain::Circle {
            (&s.cuts[0] + one(), s.widths[0].clone())
        } else {
            continue;
        };
        let gap = &next_cut - &s.cuts[k];
        if gap * qi(4) <= &s.widths[k] + next_w {
            return Err(Error::NoOverlap(format!(
                "cuts at {} and {} are too close",
                fmt_q(&s.cuts[k]),
                fmt_q(&next_cut)
            )));
        }
    }
    Ok(())
}

/// The displacement bound below which [`fragment`] succeeds: a quarter of the
/// narrowest overlap used by the cut schedule.
pub fn fragmentation_threshold(cover: &OpenCover1D) -> Result<Threshold> {
    let s = cut_schedule(cover)?;
    Ok(match s.widths.iter().min() {
        None => Threshold::Unbounded,
        Some(w) => Threshold::Finite(w / qi(4)),
    })
}

fn not_fragmentable(e: Error) -> Error {
    match e {
        Error::NotFragmentable(_) => e,
        other => Error::NotFragmentable(other.to_string()),
    }
}

/// Factors `f = g_1 ∘ g_2 ∘ … ∘ g_m` with `supp g_i` inside `E_i`.
///
/// The result is checked exactly before it is returned; any failure of the
/// construction is reported as [`Error::NotFragmentable`].
pub fn fragment(f: &PLMap, cover: &OpenCover1D) -> Result<Vec<PLMap>> {
    if f.domain() != cover.domain {
        return Err(Error::DomainMismatch);
    }
    let domain = cover.domain;
    let m = cover.len();
    let sched = cut_schedule(cover)?;
    let mut pieces = vec![PLMap::identity(domain); m];
    if sched.is_whole() {
        pieces[sched.links[0].color] = f.clone();
        return Ok(pieces);
    }
    if domain == Domain::Circle && displacement(f) >= qi(1) / qi(2) {
        return Err(Error::NotFragmentable("displacement is at least 1/2".into()));
    }
    let mut rest = f.clone();
    for (color, piece) in pieces.iter_mut().enumerate() {
        let segs: Vec<usize> = (0..sched.links.len())
            .filter(|&k| sched.links[k].color == color)
            .collect();
        if segs.is_empty() {
            continue;
        }
        let g = color_piece(&rest, &sched, &segs, color).map_err(not_fragmentable)?;
        rest = g.inverse().compose(&rest)?;
        *piece = g;
    }
    if !rest.is_identity() {
        return Err(Error::NotFragmentable(
            "remainder is not the identity after all colours".into(),
        ));
    }
    if PLMap::compose_all(domain, &pieces)? != *f {
        return Err(Error::NotFragmentable("product does not reproduce the map".into()));
    }
    for (i, g) in pieces.iter().enumerate() {
        if !support(g).inside_open(&cover.elements[i]) {
            return Err(Error::NotFragmentable(format!(
                "piece {i} leaves its cover element"
            )));
        }
    }
    Ok(pieces)
}

/// The piece of colour `color`: equal to `rest` on its segments, ramping to
/// the identity across cuts shared with later colours.
fn color_piece(rest: &PLMap, s: &Schedule, segs: &[usize], color: usize) -> Result<PLMap> {
    let domain = s.domain;
    let mut pts: Vec<(Q, Q)> = Vec::new();
    for &k in segs {
        let (l, r) = s.segment(k);
        let (left_nb, right_nb) = s.neighbours(k);
        pts.push((l.clone(), rest.eval_near(&l)?));
        pts.push((r.clone(), rest.eval_near(&r)?));
        if let (Some(nb), Some((c, w))) = (left_nb, s.left_cut(k)) {
            if s.links[nb].color > color {
                let x = &c - &w;
                pts.push((x.clone(), x));
            }
        }
        if let (Some(nb), Some((c, w))) = (right_nb, s.right_cut(k)) {
            if s.links[nb].color > color {
                let x = &c + &w;
                pts.push((x.clone(), x));
            }
        }
        for kn in rest.knots() {
            let x = match domain {
                Domain::Interval => kn.clone(),
                Domain::Circle => unroll(kn, &l),
            };
            if l < x && x < r {
                let y = rest.eval_near(&x)?;
                pts.push((x, y));
            }
        }
    }
    PLMap::from_points(domain, pts)
}
