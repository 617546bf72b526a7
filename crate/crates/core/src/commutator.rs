//! Anderson's trick: a map supported in a ball is a single commutator `[a, b]`
//! of maps supported in the same ball.
//!
//! `b` is a translator pushing the support of `f` off itself towards the right
//! end of the ball, and `a = bⁿ f b⁻ⁿ` on `bⁿ(supp f)` for every `n >= 0`.
//! Then `a b a⁻¹ b⁻¹ = f`: on `bⁿ(supp f)` with `n >= 1` the factors
//! `a` and `b a⁻¹ b⁻¹` cancel, and on `supp f` only `a` acts.

use crate::error::{Error, Result};
use crate::pl_homeo::map::{Domain, PLMap};
use crate::pl_homeo::selfsim::{AndersonTower, Homeomorphism, SelfSimilarMap};
use crate::pl_homeo::support::{support, Arc, SupportSet};
use crate::rational::{dyadic_grid, fmt_q, frac, midpoint, unroll, Q};

fn ball_text(ball: &Arc) -> String {
    format!("({}, {})", fmt_q(&ball.start), fmt_q(&ball.end))
}

fn check_ball(domain: Domain, ball: &Arc) -> Result<()> {
    if ball.start >= ball.end {
        return Err(Error::InvariantViolation(format!("empty ball {}", ball_text(ball))));
    }
    if domain == Domain::Circle && ball.length() >= crate::rational::one() {
        return Err(Error::InvariantViolation("ball covers the whole circle".into()));
    }
    Ok(())
}

/// A translator for `s` inside the open arc `ball`.
///
/// With `(l, r)` the ball and `[lo, hi]` the hull of `s`, the map fixes
/// `p = (l + lo)/2` and `q = (hi + r)/2`, sends `lo` to `(hi + q)/2` and is
/// linear in between, so every point of `[lo, q)` moves at least half way to
/// `q` and the iterates of `s` are pairwise disjoint.
pub fn build_translator(domain: Domain, ball: &Arc, s: &SupportSet) -> Result<PLMap> {
    check_ball(domain, ball)?;
    let Some(hull) = s.hull_from(&ball.start) else {
        return Ok(PLMap::identity(domain));
    };
    if !hull.closed_inside_open(ball, domain) {
        return Err(Error::SupportTooLarge(format!(
            "{s} is not inside {}",
            ball_text(ball)
        )));
    }
    let p = midpoint(&ball.start, &hull.start);
    let q = midpoint(&hull.end, &ball.end);
    let target = midpoint(&hull.end, &q);
    PLMap::bump(domain, &p, &q, vec![(hull.start.clone(), target)])
}

/// `x ↦ a b a⁻¹ b⁻¹ (x)`.
pub fn commutator_eval(a: &Homeomorphism, b: &Homeomorphism, x: &Q) -> Result<Q> {
    let y = b.eval_inverse(x)?;
    let y = a.eval_inverse(&y)?;
    let y = b.eval(&y)?;
    a.eval(&y)
}

/// The identity as a [`SelfSimilarMap`].
pub fn identity_tower(domain: Domain) -> SelfSimilarMap {
    SelfSimilarMap::product(vec![Homeomorphism::Pl(PLMap::identity(domain))])
}

/// Writes `f`, supported compactly in `ball`, as `[a, b]` with `a` and `b`
/// supported in `ball`.
pub fn anderson_factor(f: &PLMap, ball: &Arc) -> Result<(SelfSimilarMap, PLMap)> {
    let domain = f.domain();
    check_ball(domain, ball)?;
    let sf = support(f);
    if sf.is_empty() {
        return Ok((identity_tower(domain), PLMap::identity(domain)));
    }
    let b = build_translator(domain, ball, &sf)?;
    let tower = AndersonTower::new(f.clone(), b.clone(), ball.clone())?;
    Ok((SelfSimilarMap::anderson(tower), b))
}

/// The map equal to `f` on `ball` and to the identity elsewhere. Requires
/// `f` to fix both ends of the ball.
pub fn restrict_to_ball(f: &PLMap, ball: &Arc) -> Result<PLMap> {
    let domain = f.domain();
    let mut pts = Vec::new();
    for (x, y) in [(&ball.start, f.eval_near(&ball.start)?), (&ball.end, f.eval_near(&ball.end)?)] {
        let same = match domain {
            Domain::Interval => *x == y,
            Domain::Circle => frac(&(x - &y)) == crate::rational::zero(),
        };
        if !same {
            return Err(Error::SupportTooLarge(format!(
                "map moves the end {} of {}",
                fmt_q(x),
                ball_text(ball)
            )));
        }
    }
    for k in f.knots() {
        let x = match domain {
            Domain::Interval => k.clone(),
            Domain::Circle => unroll(k, &ball.start),
        };
        if ball.start < x && x < ball.end {
            let y = f.eval_near(&x)?;
            pts.push((x, y));
        }
    }
    PLMap::bump(domain, &ball.start, &ball.end, pts)
}

/// Output of [`multi_anderson`]: the combined factors and the per-ball ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiAnderson {
    pub a: SelfSimilarMap,
    pub b: PLMap,
    /// `(a_α, b_α)` for every ball on which `f` is not the identity.
    pub per_ball: Vec<(SelfSimilarMap, PLMap)>,
}

/// Anderson's trick on each of finitely many disjoint balls at once.
pub fn multi_anderson(f: &PLMap, balls: &[Arc]) -> Result<MultiAnderson> {
    let domain = f.domain();
    for b in balls {
        check_ball(domain, b)?;
    }
    for (i, b1) in balls.iter().enumerate() {
        for b2 in &balls[i + 1..] {
            if b1.open_overlaps(b2, domain) {
                return Err(Error::BallsNotDisjoint);
            }
        }
    }
    let sf = support(f);
    if !sf.inside_open(balls) {
        return Err(Error::SupportTooLarge(format!("{sf} is not inside the balls")));
    }
    let mut per_ball = Vec::new();
    let mut a_parts = Vec::new();
    let mut b = PLMap::identity(domain);
    for ball in balls {
        let piece = restrict_to_ball(f, ball)?;
        if piece.is_identity() {
            continue;
        }
        let (a_ball, b_ball) = anderson_factor(&piece, ball)?;
        a_parts.push(Homeomorphism::Tower(a_ball.clone()));
        b = b.compose(&b_ball)?;
        per_ball.push((a_ball, b_ball));
    }
    let a = if a_parts.is_empty() {
        identity_tower(domain)
    } else {
        SelfSimilarMap::product(a_parts)
    };
    Ok(MultiAnderson { a, b, per_ball })
}

/// Sample points for commutator checks: the dyadic grid `k·2^{-12}` plus
/// the knots of `f`.
pub fn commutator_test_points(f: &PLMap) -> Vec<Q> {
    let mut pts = dyadic_grid(12);
    if f.domain() == Domain::Circle {
        pts.pop();
    }
    pts.extend(f.knots().iter().cloned());
    pts.sort();
    pts.dedup();
    pts
}

/// Does `[a, b]` agree with `f` at every point of `points`?
pub fn commutator_agrees(
    f: &PLMap,
    a: &Homeomorphism,
    b: &Homeomorphism,
    points: &[Q],
) -> Result<bool> {
    for x in points {
        let lhs = commutator_eval(a, b, x)?;
        let rhs = f.eval(x)?;
        if !crate::pl_homeo::same_point(f.domain(), &lhs, &rhs) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// An instance of the locality step: `a` and `b` supported in `inner`,
/// `a_ext` agreeing with `a` on `inner` and supported in `middle`, `b_ext`
/// agreeing with `b` on `middle` and supported in `outer`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalityInstance {
    pub a: Homeomorphism,
    pub b: Homeomorphism,
    pub a_ext: Homeomorphism,
    pub b_ext: Homeomorphism,
    pub inner: Arc,
    pub middle: Arc,
    pub outer: Arc,
}

fn arc_within(small: &Arc, big: &Arc, domain: Domain) -> bool {
    match domain {
        Domain::Interval => big.start <= small.start && small.end <= big.end,
        Domain::Circle => {
            let s = unroll(&small.start, &big.start);
            big.length() >= crate::rational::one() || s + small.length() <= big.end
        }
    }
}

fn locality_points(inst: &LocalityInstance, domain: Domain) -> Vec<Q> {
    let mut pts = dyadic_grid(12);
    if domain == Domain::Circle {
        pts.pop();
    }
    for h in [&inst.a, &inst.b, &inst.a_ext, &inst.b_ext] {
        if let Homeomorphism::Pl(m) = h {
            pts.extend(m.knots().iter().map(|k| match domain {
                Domain::Interval => k.clone(),
                Domain::Circle => frac(k),
            }));
        }
    }
    for arc in [&inst.inner, &inst.middle, &inst.outer] {
        for x in [&arc.start, &arc.end] {
            let x = match domain {
                Domain::Interval => x.clone(),
                Domain::Circle => frac(x),
            };
            if domain == Domain::Circle
                || (x >= crate::rational::zero() && x <= crate::rational::one())
            {
                pts.push(x);
            }
        }
    }
    pts.sort();
    pts.dedup();
    pts
}

/// Supported in the open arc, exactly for PL maps and pointwise otherwise.
fn supported_in(h: &Homeomorphism, arc: &Arc, domain: Domain, pts: &[Q]) -> Result<bool> {
    if let Homeomorphism::Pl(m) = h {
        return Ok(support(m).inside_open(std::slice::from_ref(arc)));
    }
    for x in pts {
        if !arc.open_contains(x, domain)
            && !crate::pl_homeo::same_point(domain, &h.eval(x)?, x)
        {
            return Ok(false);
        }
    }
    Ok(true)
}

fn agree_on(g: &Homeomorphism, h: &Homeomorphism, arc: &Arc, domain: Domain, pts: &[Q]) -> Result<bool> {
    for x in pts {
        if arc.closed_contains(x, domain)
            && !crate::pl_homeo::same_point(domain, &g.eval(x)?, &h.eval(x)?)
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks `[a, b] = [a_ext, b_ext]` at the test points after verifying the
/// hypotheses there; a failed hypothesis is reported as
/// [`Error::PreconditionViolated`].
pub fn commutator_locality_check(inst: &LocalityInstance) -> Result<bool> {
    let domain = inst.a.domain();
    for h in [&inst.b, &inst.a_ext, &inst.b_ext] {
        if h.domain() != domain {
            return Err(Error::DomainMismatch);
        }
    }
    let pts = locality_points(inst, domain);
    let fail = |msg: &str| Err(Error::PreconditionViolated(msg.to_string()));
    if !arc_within(&inst.inner, &inst.middle, domain) || !arc_within(&inst.middle, &inst.outer, domain) {
        return fail("balls are not nested");
    }
    if !supported_in(&inst.a, &inst.inner, domain, &pts)? {
        return fail("a is not supported in the inner ball");
    }
    if !supported_in(&inst.b, &inst.inner, domain, &pts)? {
        return fail("b is not supported in the inner ball");
    }
    if !supported_in(&inst.a_ext, &inst.middle, domain, &pts)? {
        return fail("extension of a is not supported in the middle ball");
    }
    if !supported_in(&inst.b_ext, &inst.outer, domain, &pts)? {
        return fail("extension of b is not supported in the outer ball");
    }
    if !agree_on(&inst.a, &inst.a_ext, &inst.inner, domain, &pts)? {
        return fail("extension of a differs from a on the inner ball");
    }
    if !agree_on(&inst.b, &inst.b_ext, &inst.middle, domain, &pts)? {
        return fail("extension of b differs from b on the middle ball");
    }
    for x in &pts {
        let lhs = commutator_eval(&inst.a, &inst.b, x)?;
        let rhs = commutator_eval(&inst.a_ext, &inst.b_ext, x)?;
        if !crate::pl_homeo::same_point(domain, &lhs, &rhs) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn bump() -> PLMap {
        PLMap::bump(Domain::Interval, &q(1, 4), &q(7, 20), vec![(q(3, 10), q(13, 40))]).unwrap()
    }

    #[test]
    fn translator_example() {
        let ball = Arc::new(q(1, 5), q(1, 2));
        let s = SupportSet::from_pieces(Domain::Interval, vec![Arc::new(q(1, 4), q(7, 20))]);
        let b = build_translator(Domain::Interval, &ball, &s).unwrap();
        assert_eq!(b.eval(&q(1, 4)).unwrap(), q(31, 80));
        // Iterates of the hull march right without meeting.
        let mut prev_end = q(7, 20);
        let mut lo = q(1, 4);
        let mut hi = q(7, 20);
        for _ in 0..10 {
            lo = b.eval(&lo).unwrap();
            hi = b.eval(&hi).unwrap();
            assert!(lo > prev_end);
            prev_end = hi.clone();
        }
        assert!(support(&b).inside_open(&[ball]));
    }

    #[test]
    fn translator_edge_cases() {
        let ball = Arc::new(q(1, 4), q(1, 2));
        let empty = SupportSet::empty(Domain::Interval);
        assert!(build_translator(Domain::Interval, &ball, &empty).unwrap().is_identity());
        let s = SupportSet::from_pieces(Domain::Interval, vec![Arc::new(q(1, 4), q(7, 20))]);
        assert!(matches!(
            build_translator(Domain::Interval, &ball, &s),
            Err(Error::SupportTooLarge(_))
        ));
    }

    #[test]
    fn anderson_example() {
        let f = bump();
        let (a, b) = anderson_factor(&f, &Arc::new(q(1, 5), q(1, 2))).unwrap();
        let (a, b) = (Homeomorphism::Tower(a), Homeomorphism::Pl(b));
        assert!(commutator_agrees(&f, &a, &b, &commutator_test_points(&f)).unwrap());
    }

    #[test]
    fn anderson_on_wrapping_arc() {
        let f = PLMap::bump(Domain::Circle, &q(19, 20), &q(11, 10), vec![(qi(1), q(21, 20))]).unwrap();
        let (a, b) = anderson_factor(&f, &Arc::new(q(9, 10), q(7, 5))).unwrap();
        let (a, b) = (Homeomorphism::Tower(a), Homeomorphism::Pl(b));
        assert!(commutator_agrees(&f, &a, &b, &commutator_test_points(&f)).unwrap());
    }

    #[test]
    fn multi_ball() {
        let f = PLMap::bump(Domain::Interval, &q(3, 20), &q(1, 4), vec![(q(1, 5), q(9, 40))])
            .unwrap()
            .compose(&PLMap::bump(Domain::Interval, &q(13, 20), &q(7, 10), vec![(q(27, 40), q(2, 3))]).unwrap())
            .unwrap();
        let balls = [Arc::new(q(1, 10), q(3, 10)), Arc::new(q(3, 5), q(4, 5))];
        let m = multi_anderson(&f, &balls).unwrap();
        assert_eq!(m.per_ball.len(), 2);
        let a = Homeomorphism::Tower(m.a.clone());
        let b = Homeomorphism::Pl(m.b.clone());
        assert!(commutator_agrees(&f, &a, &b, &commutator_test_points(&f)).unwrap());
        let overlapping = [Arc::new(q(1, 10), q(3, 10)), Arc::new(q(1, 5), q(4, 5))];
        assert_eq!(multi_anderson(&f, &overlapping), Err(Error::BallsNotDisjoint));
    }

    #[test]
    fn identity_gives_identity_factors() {
        let id = PLMap::identity(Domain::Interval);
        let (a, b) = anderson_factor(&id, &Arc::new(q(1, 5), q(1, 2))).unwrap();
        assert!(b.is_identity());
        assert_eq!(a.eval(&q(1, 3)).unwrap(), q(1, 3));
    }

    fn locality(b: PLMap, a_ext_bump: PLMap) -> LocalityInstance {
        let a = PLMap::bump(Domain::Interval, &q(41, 100), &q(43, 100), vec![(q(21, 50), q(17, 40))]).unwrap();
        let b_ext = b
            .compose(&PLMap::bump(Domain::Interval, &q(1, 4), &q(3, 10), vec![(q(11, 40), q(7, 25))]).unwrap())
            .unwrap();
        LocalityInstance {
            a_ext: Homeomorphism::Pl(a.compose(&a_ext_bump).unwrap()),
            a: Homeomorphism::Pl(a),
            b_ext: Homeomorphism::Pl(b_ext),
            b: Homeomorphism::Pl(b),
            inner: Arc::new(q(2, 5), q(9, 20)),
            middle: Arc::new(q(7, 20), q(1, 2)),
            outer: Arc::new(q(1, 5), q(3, 5)),
        }
    }

    fn inner_translator() -> PLMap {
        PLMap::bump(Domain::Interval, &q(81, 200), &q(89, 200), vec![(q(41, 100), q(43, 100))]).unwrap()
    }

    fn middle_bump() -> PLMap {
        PLMap::bump(Domain::Interval, &q(37, 100), &q(39, 100), vec![(q(19, 50), q(77, 200))]).unwrap()
    }

    #[test]
    fn locality_holds() {
        assert!(commutator_locality_check(&locality(inner_translator(), middle_bump())).unwrap());
    }

    #[test]
    fn locality_trivial_extension() {
        let mut inst = locality(inner_translator(), middle_bump());
        inst.a_ext = inst.a.clone();
        inst.b_ext = inst.b.clone();
        assert!(commutator_locality_check(&inst).unwrap());
    }

    #[test]
    fn locality_reports_violations() {
        // Extension that changes a inside the inner ball.
        let bad = PLMap::bump(Domain::Interval, &q(2, 5), &q(41, 100), vec![(q(81, 200), q(203, 500))]).unwrap();
        assert!(matches!(
            commutator_locality_check(&locality(inner_translator(), bad)),
            Err(Error::PreconditionViolated(_))
        ));
        // b reaching out of the inner ball.
        let wide = PLMap::bump(Domain::Interval, &q(37, 100), &q(49, 100), vec![(q(2, 5), q(11, 25))]).unwrap();
        assert!(matches!(
            commutator_locality_check(&locality(wide, middle_bump())),
            Err(Error::PreconditionViolated(_))
        ));
    }
}
