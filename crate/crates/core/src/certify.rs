//! Verified short words: a circle map close to the identity is written as a
//! product of at most `12m` letters, each either metrically small or
//! supported in one colour class of an efficient cover.
//!
//! For every colour `i` the fragment `g_i` (supported in the balls of colour
//! `i`) is conjugated by a shrinking map `w_i` into the middle thirds of its
//! balls, where Anderson's trick writes it as one commutator:
//!
//! ```text
//! g_i = w_i⁻¹ · a · b · a⁻¹ · b⁻¹ · w_i
//! ```
//!
//! Letters are counted the way the word-length bound counts them: `w_i` and
//! `w_i⁻¹` take two slots each and the commutator eight, so every colour
//! uses at most twelve slots.

use serde::{Deserialize, Serialize};

use crate::commutator::multi_anderson;
use crate::cover::{efficient_cover, same_color_disjoint, ColoredCover, SampledSpace, SpaceModel};
use crate::error::{Error, Result};
use crate::fragmentation::{fragment, fragmentation_threshold, OpenCover1D};
use crate::json::{HomeoJson, PlMapJson, Rat, SupportJson};
use crate::pl_homeo::map::{Domain, PLMap};
use crate::pl_homeo::metric::{displacement, sup_distance};
use crate::pl_homeo::selfsim::{same_point, Homeomorphism};
use crate::pl_homeo::support::{support, Arc, SupportSet};
use crate::rational::{abs, fmt_q, max, min, one, q, qi, unroll, zero, Q};

/// Slots taken by a shrinking letter `w` or `w⁻¹`.
pub const SHRINK_SLOTS: usize = 2;
/// Slots taken by one commutator `[a, b]`.
pub const COMMUTATOR_SLOTS: usize = 8;
/// Slot budget per colour.
pub const SLOTS_PER_COLOR: usize = 12;

pub const CERTIFICATE_SCHEMA: &str = "homeo-certificate/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    ShrinkConjugator,
    CommutatorLetter,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Letter {
    pub map: Homeomorphism,
    pub role: Role,
    pub support_region: SupportSet,
    pub color: usize,
}

/// Letters and slots used by one colour.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub color: usize,
    pub letters: usize,
    pub slots: usize,
}

/// A word whose product is `target`, with everything needed to re-check it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationCertificate {
    pub target: PLMap,
    pub epsilon: Q,
    pub cover: ColoredCover,
    /// Sample size of the unit circle the cover was built on.
    pub grid: u64,
    /// `letters[0] ∘ letters[1] ∘ …`.
    pub letters: Vec<Letter>,
    pub ledger: Vec<LedgerEntry>,
    pub total_bound: usize,
}

impl FactorizationCertificate {
    pub fn total_slots(&self) -> usize {
        self.ledger.iter().map(|e| e.slots).sum()
    }

    /// Evaluates the product of the letters at `x`.
    pub fn eval_product(&self, x: &Q) -> Result<Q> {
        let mut y = x.clone();
        for l in self.letters.iter().rev() {
            y = l.map.eval(&y)?;
        }
        Ok(y)
    }
}

/// Centre `c` of sample index `i` on the unit circle sampled at `grid` points.
fn center(grid: u64, i: usize) -> Q {
    q(i as i64, grid as i64)
}

fn ball(c: &Q, eps: &Q) -> Arc {
    Arc::new(c - eps, c + eps)
}

/// Middle third of the ball around `c`.
fn core(c: &Q, eps: &Q) -> Arc {
    let r = eps / qi(3);
    Arc::new(c - &r, c + &r)
}

/// The open balls of colour `color`.
pub fn color_balls(cover: &ColoredCover, grid: u64, color: usize) -> Vec<Arc> {
    cover
        .class(color)
        .into_iter()
        .map(|i| ball(&center(grid, i), &cover.net.epsilon))
        .collect()
}

/// Compresses each (closed) ball into its core.
///
/// A ball whose closure already lies in its core, or which equals its core,
/// is left alone. Otherwise `[l, r]` is mapped linearly onto the middle three
/// quarters of the core, with linear ramps back to the identity over a halo
/// of width `min(ε/4, half the gap to the neighbouring balls)`.
pub fn shrink_conjugator(domain: Domain, balls: &[Arc], cores: &[Arc], eps: &Q) -> Result<PLMap> {
    if balls.len() != cores.len() {
        return Err(Error::InvariantViolation("one core per ball is required".into()));
    }
    for (i, b1) in balls.iter().enumerate() {
        for b2 in &balls[i + 1..] {
            if b1.open_overlaps(b2, domain) {
                return Err(Error::BallsNotDisjoint);
            }
        }
    }
    let mut order: Vec<usize> = (0..balls.len()).collect();
    order.sort_by(|&i, &j| balls[i].start.cmp(&balls[j].start));
    let mut w = PLMap::identity(domain);
    for (pos, &i) in order.iter().enumerate() {
        let (b, c) = (&balls[i], &cores[i]);
        let c_start = match domain {
            Domain::Interval => c.start.clone(),
            Domain::Circle => unroll(&c.start, &(&b.start - one() / qi(2))),
        };
        let c = Arc::new(c_start.clone(), &c_start + c.length());
        if b == &c || (c.start < b.start && b.end < c.end) {
            continue;
        }
        if !(b.start < c.start && c.end < b.end) && !(b.start <= c.start && c.end <= b.end) {
            return Err(Error::CoresTooLarge(format!("core {c} is not inside ball {b}")));
        }
        let gap = |other: &Arc| -> Q {
            match domain {
                Domain::Interval => {
                    if other.start >= b.end {
                        &other.start - &b.end
                    } else {
                        &b.start - &other.end
                    }
                }
                Domain::Circle => {
                    let right = unroll(&other.start, &b.end) - &b.end;
                    let left = &b.start - (unroll(&other.end, &(&b.start - one())));
                    min(&right, &left)
                }
            }
        };
        let mut halo = eps / qi(4);
        for (qpos, &j) in order.iter().enumerate() {
            if qpos != pos {
                halo = min(&halo, &(gap(&balls[j]) / qi(2)));
            }
        }
        if domain == Domain::Interval {
            halo = min(&halo, &(b.start.clone() / qi(2)));
            halo = min(&halo, &((one() - &b.end) / qi(2)));
        }
        if halo <= zero() {
            return Err(Error::CoresTooLarge(format!("no room around ball {b}")));
        }
        let inset = c.length() / qi(8);
        let lo = &c.start + &inset;
        let hi = &c.end - &inset;
        let piece = PLMap::bump(
            domain,
            &(&b.start - &halo),
            &(&b.end + &halo),
            vec![(b.start.clone(), lo), (b.end.clone(), hi)],
        )
        .map_err(|e| Error::CoresTooLarge(e.to_string()))?;
        w = w.compose(&piece)?;
    }
    let two_eps = eps * qi(2);
    if displacement(&w) >= two_eps {
        return Err(Error::CoresTooLarge(format!(
            "compression moves points by {} >= 2ε",
            fmt_q(&displacement(&w))
        )));
    }
    Ok(w)
}

/// Hull of the part of `s` inside `ball`, as a radius around the ball centre.
fn support_radius(s: &SupportSet, ball: &Arc) -> Option<Q> {
    let c = (&ball.start + &ball.end) / qi(2);
    let mut r: Option<Q> = None;
    for comp in s.components() {
        if comp.closed_inside_open(ball, Domain::Circle) {
            let lo = unroll(&comp.start, &ball.start);
            let hi = &lo + comp.length();
            let ext = max(&abs(&(&c - &lo)), &abs(&(&hi - &c)));
            r = Some(r.map_or(ext.clone(), |x| max(&x, &ext)));
        }
    }
    r
}

/// Factors a circle map close to the identity into a checked word of at most
/// `12m` letters over the efficient cover at scale `eps`.
pub fn certify_small_word(f: &PLMap, space: &SpaceModel, eps: &Q) -> Result<FactorizationCertificate> {
    match space {
        SpaceModel::CircleLength(l) if *l == one() => {}
        _ => {
            return Err(Error::PreconditionViolated(
                "certificates are built on the unit circle".into(),
            ))
        }
    }
    if f.domain() != Domain::Circle {
        return Err(Error::DomainMismatch);
    }
    let sampled = SampledSpace::for_epsilon(space.clone(), eps)?;
    let grid = sampled.len() as u64;
    let cover = efficient_cover(&sampled, eps)?;
    let elements: Vec<Vec<Arc>> = (0..cover.m).map(|i| color_balls(&cover, grid, i)).collect();
    let open_cover = OpenCover1D::new(Domain::Circle, elements.clone())?;
    let threshold = fragmentation_threshold(&open_cover)?;
    let d = displacement(f);
    if !threshold.admits(&d) || d >= *eps {
        return Err(Error::NotFragmentable(format!(
            "displacement {} is not below min(δ₀ = {threshold}, ε = {})",
            fmt_q(&d),
            fmt_q(eps)
        )));
    }
    let pieces = fragment(f, &open_cover)?;
    let mut letters = Vec::new();
    let mut ledger = Vec::new();
    for (color, g) in pieces.iter().enumerate() {
        if g.is_identity() {
            ledger.push(LedgerEntry { color, letters: 0, slots: 0 });
            continue;
        }
        let sg = support(g);
        let mut eff_balls = Vec::new();
        let mut eff_cores = Vec::new();
        let mut cores = Vec::new();
        for b in &elements[color] {
            let Some(rho) = support_radius(&sg, b) else { continue };
            let c = (&b.start + &b.end) / qi(2);
            let core_arc = core(&c, eps);
            eff_balls.push(Arc::new(&c - &rho, &c + &rho));
            eff_cores.push(core_arc.clone());
            cores.push(core_arc);
        }
        let w = shrink_conjugator(Domain::Circle, &eff_balls, &eff_cores, eps)?;
        let h = w.compose(g)?.compose(&w.inverse())?;
        let split = multi_anderson(&h, &cores)?;
        let core_region = SupportSet::from_pieces(Domain::Circle, cores.clone());
        let mut count = 0;
        let mut slots = 0;
        let shrink = !w.is_identity();
        if shrink {
            letters.push(Letter {
                map: Homeomorphism::Pl(w.inverse()),
                role: Role::ShrinkConjugator,
                support_region: support(&w),
                color,
            });
            count += 1;
            slots += SHRINK_SLOTS;
        }
        let a = Homeomorphism::Tower(split.a.clone());
        let b = Homeomorphism::Pl(split.b.clone());
        for map in [a.clone(), b.clone(), a.inverse(), b.inverse()] {
            letters.push(Letter {
                map,
                role: Role::CommutatorLetter,
                support_region: core_region.clone(),
                color,
            });
            count += 1;
        }
        slots += COMMUTATOR_SLOTS;
        if shrink {
            letters.push(Letter {
                map: Homeomorphism::Pl(w.clone()),
                role: Role::ShrinkConjugator,
                support_region: support(&w),
                color,
            });
            count += 1;
            slots += SHRINK_SLOTS;
        }
        ledger.push(LedgerEntry { color, letters: count, slots });
    }
    let cert = FactorizationCertificate {
        target: f.clone(),
        epsilon: eps.clone(),
        total_bound: SLOTS_PER_COLOR * cover.m,
        cover,
        grid,
        letters,
        ledger,
    };
    let verdict = verify_certificate(&cert)?;
    if !verdict.passed() {
        return Err(Error::InvariantViolation(format!(
            "constructed certificate fails: {}",
            verdict.failures().join("; ")
        )));
    }
    Ok(cert)
}

/// One re-checked invariant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub checks: Vec<Check>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect()
    }
}

/// Points at which the product is compared with the target: the knots of
/// the target and the grid `k/4096`.
pub fn product_test_points(target: &PLMap) -> Vec<Q> {
    let mut pts: Vec<Q> = (0..4096).map(|k| q(k, 4096)).collect();
    pts.extend(target.knots().iter().cloned());
    pts.sort();
    pts.dedup();
    pts
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedCertificate(msg.into())
}

/// Recomputes every invariant of a certificate from its raw data.
pub fn verify_certificate(cert: &FactorizationCertificate) -> Result<Verdict> {
    let eps = &cert.epsilon;
    if *eps <= zero() {
        return Err(malformed("epsilon must be positive"));
    }
    if cert.target.domain() != Domain::Circle {
        return Err(malformed("target must be a circle map"));
    }
    let m = cert.cover.m;
    if cert.cover.colors.len() != cert.cover.net.centers.len() {
        return Err(malformed("one colour per centre is required"));
    }
    if cert.cover.colors.iter().any(|&c| c >= m) {
        return Err(malformed("colour index out of range"));
    }
    if cert.cover.net.centers.iter().any(|&c| c as u64 >= cert.grid) {
        return Err(malformed("centre index outside the sample"));
    }
    if cert.cover.net.epsilon != *eps {
        return Err(malformed("cover and certificate disagree on epsilon"));
    }
    for l in &cert.letters {
        if l.color >= m {
            return Err(malformed("letter colour out of range"));
        }
        if l.map.domain() != Domain::Circle {
            return Err(malformed("letters must act on the circle"));
        }
    }
    let space = SampledSpace::circle(one(), cert.grid).map_err(|e| malformed(e.to_string()))?;
    let mut checks = Vec::new();
    let mut push = |name: &str, passed: bool, detail: String| {
        checks.push(Check {
            name: name.to_string(),
            passed,
            detail,
        })
    };

    // Product.
    let mut mismatch = None;
    for x in product_test_points(&cert.target) {
        let lhs = cert.eval_product(&x);
        let rhs = cert.target.eval(&x)?;
        match lhs {
            Ok(v) if same_point(Domain::Circle, &v, &rhs) => {}
            Ok(v) => {
                mismatch = Some(format!("at {}: {} vs {}", fmt_q(&x), fmt_q(&v), fmt_q(&rhs)));
                break;
            }
            Err(e) => {
                mismatch = Some(format!("at {}: {e}", fmt_q(&x)));
                break;
            }
        }
    }
    push(
        "product",
        mismatch.is_none(),
        mismatch.unwrap_or_else(|| "product equals target at all test points".into()),
    );

    // Smallness of the shrinking letters.
    let two_eps = eps * qi(2);
    let mut bad = Vec::new();
    for (k, l) in cert.letters.iter().enumerate() {
        if l.role != Role::ShrinkConjugator {
            continue;
        }
        match l.map.as_pl() {
            Some(w) => {
                let d = sup_distance(w, &PLMap::identity(Domain::Circle))?;
                if d >= two_eps {
                    bad.push(format!("letter {k} moves points by {}", fmt_q(&d)));
                }
            }
            None => bad.push(format!("letter {k} is not piecewise linear")),
        }
    }
    push("shrink-smallness", bad.is_empty(), detail_of(&bad, "all below 2ε"));

    // Commutator letters stay inside their colour's balls.
    let mut bad = Vec::new();
    let grid_pts: Vec<Q> = (0..4096).map(|k| q(k, 4096)).collect();
    for (k, l) in cert.letters.iter().enumerate() {
        if l.role != Role::CommutatorLetter {
            continue;
        }
        let balls = color_balls(&cert.cover, cert.grid, l.color);
        let regions_ok = match &l.map {
            Homeomorphism::Tower(t) => t
                .tower_regions()
                .iter()
                .all(|r| balls.iter().any(|b| r.closed_inside_open(b, Domain::Circle))),
            Homeomorphism::Pl(p) => support(p).inside_open(&balls),
            Homeomorphism::Germ(_) => false,
        };
        if !regions_ok {
            bad.push(format!("letter {k} has support outside colour {}", l.color));
            continue;
        }
        for x in &grid_pts {
            if balls.iter().any(|b| b.open_contains(x, Domain::Circle)) {
                continue;
            }
            if !same_point(Domain::Circle, &l.map.eval(x)?, x) {
                bad.push(format!("letter {k} moves {} outside colour {}", fmt_q(x), l.color));
                break;
            }
        }
    }
    push("commutator-support", bad.is_empty(), detail_of(&bad, "all inside their colour class"));

    // Ledger arithmetic.
    let mut bad = Vec::new();
    for color in 0..m {
        let letters: Vec<&Letter> = cert.letters.iter().filter(|l| l.color == color).collect();
        let n_letters = letters.len();
        let slots: usize = letters
            .iter()
            .map(|l| match l.role {
                Role::ShrinkConjugator => SHRINK_SLOTS,
                Role::CommutatorLetter => COMMUTATOR_SLOTS / 4,
            })
            .sum();
        let entry = cert.ledger.iter().find(|e| e.color == color);
        let (el, es) = entry.map_or((0, 0), |e| (e.letters, e.slots));
        if el != n_letters || es != slots {
            bad.push(format!("colour {color}: ledger says {el}/{es}, word has {n_letters}/{slots}"));
        }
        if slots > SLOTS_PER_COLOR {
            bad.push(format!("colour {color} uses {slots} > {SLOTS_PER_COLOR} slots"));
        }
    }
    if cert.ledger.iter().any(|e| e.color >= m) {
        bad.push("ledger names a colour outside the cover".into());
    }
    let total: usize = cert.ledger.iter().map(|e| e.slots).sum();
    if cert.total_bound != SLOTS_PER_COLOR * m {
        bad.push(format!("total bound {} != 12·{m}", cert.total_bound));
    }
    if total > SLOTS_PER_COLOR * m {
        bad.push(format!("{total} slots exceed 12·{m}"));
    }
    if cert.ledger.iter().map(|e| e.letters).sum::<usize>() != cert.letters.len() {
        bad.push("letter counts do not add up".into());
    }
    push("ledger", bad.is_empty(), detail_of(&bad, &format!("{total} slots within 12·{m}")));

    // Cover.
    let disjoint = same_color_disjoint(&space, &cert.cover);
    push(
        "cover",
        disjoint,
        if disjoint {
            "same-colour centres are at least 2ε apart".into()
        } else {
            "two same-colour balls meet".into()
        },
    );
    Ok(Verdict { checks })
}

fn detail_of(bad: &[String], ok: &str) -> String {
    if bad.is_empty() {
        ok.to_string()
    } else {
        bad.join("; ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LetterJson {
    pub map: HomeoJson,
    pub role: Role,
    pub support_region: SupportJson,
    pub color: usize,
}

/// Interchange form of a [`FactorizationCertificate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateJson {
    pub schema: String,
    pub target: PlMapJson,
    pub epsilon: Rat,
    pub grid: u64,
    pub cover: ColoredCover,
    pub letters: Vec<LetterJson>,
    pub ledger: Vec<LedgerEntry>,
    pub total_bound: usize,
}

impl From<&FactorizationCertificate> for CertificateJson {
    fn from(c: &FactorizationCertificate) -> Self {
        CertificateJson {
            schema: CERTIFICATE_SCHEMA.into(),
            target: (&c.target).into(),
            epsilon: Rat(c.epsilon.clone()),
            grid: c.grid,
            cover: c.cover.clone(),
            letters: c
                .letters
                .iter()
                .map(|l| LetterJson {
                    map: (&l.map).into(),
                    role: l.role,
                    support_region: (&l.support_region).into(),
                    color: l.color,
                })
                .collect(),
            ledger: c.ledger.clone(),
            total_bound: c.total_bound,
        }
    }
}

impl TryFrom<CertificateJson> for FactorizationCertificate {
    type Error = Error;

    fn try_from(j: CertificateJson) -> Result<Self> {
        if j.schema != CERTIFICATE_SCHEMA {
            return Err(malformed(format!("unknown schema `{}`", j.schema)));
        }
        let letters = j
            .letters
            .into_iter()
            .map(|l| {
                Ok(Letter {
                    map: Homeomorphism::try_from(l.map).map_err(|e| malformed(e.to_string()))?,
                    role: l.role,
                    support_region: l.support_region.into(),
                    color: l.color,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FactorizationCertificate {
            target: PLMap::try_from(j.target).map_err(|e| malformed(e.to_string()))?,
            epsilon: j.epsilon.0,
            cover: j.cover,
            grid: j.grid,
            letters,
            ledger: j.ledger,
            total_bound: j.total_bound,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> SpaceModel {
        SpaceModel::CircleLength(one())
    }

    #[test]
    fn shrink_single_arc() {
        let w = shrink_conjugator(
            Domain::Circle,
            &[Arc::new(zero(), q(3, 10))],
            &[Arc::new(q(1, 10), q(1, 5))],
            &q(3, 10),
        )
        .unwrap();
        let lo = w.eval(&zero()).unwrap();
        let hi = w.eval(&q(3, 10)).unwrap();
        assert!(q(1, 10) < lo && hi < q(1, 5));
        assert!(displacement(&w) < q(3, 5));
    }

    #[test]
    fn shrink_identity_when_cores_are_balls() {
        let b = [Arc::new(zero(), q(3, 10))];
        assert!(shrink_conjugator(Domain::Circle, &b, &b, &q(3, 10)).unwrap().is_identity());
    }

    #[test]
    fn shrink_two_balls() {
        let balls = [Arc::new(q(1, 10), q(3, 10)), Arc::new(q(3, 5), q(4, 5))];
        let cores = [Arc::new(q(1, 6), q(7, 30)), Arc::new(q(2, 3), q(11, 15))];
        let w = shrink_conjugator(Domain::Circle, &balls, &cores, &q(1, 10)).unwrap();
        for (b, c) in balls.iter().zip(&cores) {
            let lo = w.eval(&b.start).unwrap();
            let hi = w.eval(&b.end).unwrap();
            assert!(c.start < lo && hi < c.end);
        }
        let comps = support(&w);
        assert_eq!(comps.components().len(), 2);
    }

    #[test]
    fn identity_has_empty_word() {
        let c = certify_small_word(&PLMap::identity(Domain::Circle), &unit(), &q(3, 10)).unwrap();
        assert!(c.letters.is_empty());
        assert!(c.ledger.iter().all(|e| e.slots == 0));
    }

    #[test]
    fn small_rotation_certifies() {
        let f = PLMap::rotation(q(1, 100));
        let c = certify_small_word(&f, &unit(), &q(3, 10)).unwrap();
        assert_eq!(c.cover.m, 3);
        assert!(c.letters.len() <= 36);
        assert!(c.total_slots() <= 36);
        assert!(verify_certificate(&c).unwrap().passed());
    }

    #[test]
    fn big_rotation_is_refused() {
        let f = PLMap::rotation(q(1, 5));
        assert!(matches!(
            certify_small_word(&f, &unit(), &q(3, 10)),
            Err(Error::NotFragmentable(_))
        ));
    }

    #[test]
    fn tampering_is_caught() {
        let f = PLMap::rotation(q(1, 200));
        let c = certify_small_word(&f, &unit(), &q(1, 10)).unwrap();
        let mut t = c.clone();
        t.letters[1].map = Homeomorphism::Pl(PLMap::identity(Domain::Circle));
        let v = verify_certificate(&t).unwrap();
        assert!(!v.checks[0].passed);
        let mut t = c.clone();
        let k = t.letters.iter().position(|l| l.role == Role::ShrinkConjugator).unwrap();
        t.letters[k].map = Homeomorphism::Pl(PLMap::rotation(q(1, 4)));
        let v = verify_certificate(&t).unwrap();
        assert!(!v.checks[1].passed);
    }

    #[test]
    fn json_round_trip() {
        let f = PLMap::rotation(q(1, 100));
        let c = certify_small_word(&f, &unit(), &q(3, 10)).unwrap();
        let text = crate::json::to_string(&CertificateJson::from(&c));
        let back = FactorizationCertificate::try_from(crate::json::from_str::<CertificateJson>(&text).unwrap()).unwrap();
        assert_eq!(back, c);
    }
}
