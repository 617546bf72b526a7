//! Homeomorphisms with infinitely many linear pieces, evaluated exactly by a
//! bounded descent through their recursion rule.

use crate::error::{Error, Result};
use crate::germs::GermMap;
use crate::piecewise::PlFunction;
use crate::pl_homeo::map::{Domain, PLMap};
use crate::pl_homeo::support::{support, Arc};
use crate::rational::{fmt_q, frac, qi, unroll, zero, Q};

pub const DEFAULT_DEPTH_BOUND: u32 = 64;

/// Any map the crate can evaluate pointwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Homeomorphism {
    Pl(PLMap),
    Germ(GermMap),
    Tower(SelfSimilarMap),
}

impl Homeomorphism {
    pub fn eval(&self, x: &Q) -> Result<Q> {
        match self {
            Homeomorphism::Pl(m) => m.eval(x),
            Homeomorphism::Germ(g) => g.eval(x),
            Homeomorphism::Tower(t) => t.eval(x),
        }
    }

    pub fn eval_inverse(&self, y: &Q) -> Result<Q> {
        match self {
            Homeomorphism::Pl(m) => m.eval_inverse(y),
            Homeomorphism::Germ(g) => g.eval_inverse(y),
            Homeomorphism::Tower(t) => t.eval_inverse(y),
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            Homeomorphism::Pl(m) => Homeomorphism::Pl(m.inverse()),
            Homeomorphism::Germ(g) => Homeomorphism::Germ(g.inverse()),
            Homeomorphism::Tower(t) => Homeomorphism::Tower(t.inverse()),
        }
    }

    pub fn domain(&self) -> Domain {
        match self {
            Homeomorphism::Pl(m) => m.domain(),
            Homeomorphism::Germ(_) => Domain::Interval,
            Homeomorphism::Tower(t) => t.domain(),
        }
    }

    pub fn as_pl(&self) -> Option<&PLMap> {
        match self {
            Homeomorphism::Pl(m) => Some(m),
            _ => None,
        }
    }
}

impl From<PLMap> for Homeomorphism {
    fn from(m: PLMap) -> Self {
        Homeomorphism::Pl(m)
    }
}

impl From<GermMap> for Homeomorphism {
    fn from(g: GermMap) -> Self {
        Homeomorphism::Germ(g)
    }
}

impl From<SelfSimilarMap> for Homeomorphism {
    fn from(t: SelfSimilarMap) -> Self {
        Homeomorphism::Tower(t)
    }
}

/// Evaluates `maps[0] ∘ maps[1] ∘ … ∘ maps[n-1]` at `x`.
pub fn eval_word(maps: &[Homeomorphism], x: &Q) -> Result<Q> {
    let mut y = x.clone();
    for m in maps.iter().rev() {
        y = m.eval(&y)?;
    }
    Ok(y)
}

/// Equality of points of the domain (mod 1 on the circle).
pub fn same_point(domain: Domain, a: &Q, b: &Q) -> bool {
    match domain {
        Domain::Interval => a == b,
        Domain::Circle => frac(&(a - b)) == zero(),
    }
}

/// The map `x ↦ bⁿ f b⁻ⁿ(x)` on `bⁿ(supp f)`, identity elsewhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AndersonTower {
    f: PLMap,
    translator: PLMap,
    region: Arc,
    hull: Arc,
    support: Arc,
}

impl AndersonTower {
    /// Checks that `supp f` sits compactly in the open `region`, that the
    /// translator is supported there and pushes the hull of `supp f` off
    /// itself.
    pub fn new(f: PLMap, translator: PLMap, region: Arc) -> Result<Self> {
        if f.domain() != translator.domain() {
            return Err(Error::DomainMismatch);
        }
        let domain = f.domain();
        let sf = support(&f);
        let hull = sf.hull_from(&region.start).ok_or_else(|| {
            Error::InvariantViolation("tower over the identity map".into())
        })?;
        if !hull.closed_inside_open(&region, domain) {
            return Err(Error::SupportTooLarge(format!("supp f = {sf}, region ({}, {})", fmt_q(&region.start), fmt_q(&region.end))));
        }
        let sb = support(&translator);
        if !sb.inside_open(std::slice::from_ref(&region)) {
            return Err(Error::InvariantViolation(format!(
                "translator support {sb} leaves the region"
            )));
        }
        let pushed = translator.eval_local(&hull.start, &region.start)?;
        if pushed <= hull.end {
            return Err(Error::InvariantViolation(
                "translator does not push the support off itself".into(),
            ));
        }
        let limit = first_fixed_point_above(&translator, &hull.end, &region)?;
        let support = Arc::new(hull.start.clone(), limit);
        Ok(AndersonTower {
            f,
            translator,
            region,
            hull,
            support,
        })
    }

    pub fn f(&self) -> &PLMap {
        &self.f
    }

    pub fn translator(&self) -> &PLMap {
        &self.translator
    }

    pub fn region(&self) -> &Arc {
        &self.region
    }

    /// Hull of `supp f` in the region's lift coordinates.
    pub fn hull(&self) -> &Arc {
        &self.hull
    }

    /// Closed arc carrying the support of the tower: from the start of the
    /// hull to the point where the translates of the hull accumulate.
    pub fn support_arc(&self) -> &Arc {
        &self.support
    }

    fn eval_with(&self, piece: &PLMap, x: &Q, depth_bound: u32) -> Result<Q> {
        let domain = self.f.domain();
        let base = &self.region.start;
        let u = match domain {
            Domain::Interval => x.clone(),
            Domain::Circle => unroll(x, base),
        };
        if !(self.region.start < u && u < self.region.end) {
            return Ok(x.clone());
        }
        let mut y = u.clone();
        let mut n = 0u32;
        loop {
            if y < self.hull.start {
                return Ok(x.clone());
            }
            if y <= self.hull.end {
                let mut z = piece.eval_local(&y, base)?;
                for _ in 0..n {
                    z = self.translator.eval_local(&z, base)?;
                }
                return Ok(x + (z - u));
            }
            if n >= depth_bound {
                return Err(Error::DepthExceeded(depth_bound));
            }
            let prev = self.translator.eval_inverse_local(&y, base)?;
            if prev == y {
                // Fixed by the translator: beyond the accumulation point.
                return Ok(x.clone());
            }
            y = prev;
            n += 1;
        }
    }
}

/// Smallest fixed point of `t` above `x` in the lift window of `region`.
fn first_fixed_point_above(t: &PLMap, x: &Q, region: &Arc) -> Result<Q> {
    let base = &region.start;
    let top = match t.domain() {
        Domain::Interval if region.end > crate::rational::one() => crate::rational::one(),
        _ => region.end.clone(),
    };
    let mut pts: Vec<Q> = vec![x.clone(), top.clone()];
    for k in t.knots() {
        let k = match t.domain() {
            Domain::Interval => k.clone(),
            Domain::Circle => unroll(k, base),
        };
        if &k > x && k < top {
            pts.push(k);
        }
    }
    pts.sort();
    pts.dedup();
    let moved = |u: &Q| -> Result<Q> { Ok(t.eval_local(u, base)? - u) };
    for w in pts.windows(2) {
        let (du, dv) = (moved(&w[0])?, moved(&w[1])?);
        if du <= zero() {
            return Ok(w[0].clone());
        }
        if dv <= zero() {
            return Ok(&w[0] + &du * (&w[1] - &w[0]) / (&du - &dv));
        }
    }
    Ok(top)
}

/// `h` with `h(g(x)) = h(x)/2` on `(0, t]`, built from a base piece on the
/// fundamental domain `[g(t), t]`; identity on `[t, 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivariantTower {
    base: PlFunction,
    inner: GermMap,
    window: Q,
    inverted: bool,
}

impl EquivariantTower {
    pub fn new(base: PlFunction, inner: GermMap, window: Q) -> Result<Self> {
        let gt = inner.eval(&window)?;
        if gt >= window || gt <= zero() {
            return Err(Error::NotAContraction);
        }
        if base.start() != &gt || base.end() != &window {
            return Err(Error::InvariantViolation(
                "base piece must be defined on [g(t), t]".into(),
            ));
        }
        if base.image_start() != &(&window / qi(2)) || base.image_end() != &window {
            return Err(Error::InvariantViolation(
                "base piece must map onto [t/2, t]".into(),
            ));
        }
        Ok(EquivariantTower {
            base,
            inner,
            window,
            inverted: false,
        })
    }

    pub fn base(&self) -> &PlFunction {
        &self.base
    }

    pub fn inner(&self) -> &GermMap {
        &self.inner
    }

    pub fn window(&self) -> &Q {
        &self.window
    }

    pub fn is_inverted(&self) -> bool {
        self.inverted
    }

    pub(crate) fn set_inverted(mut self, inverted: bool) -> Self {
        self.inverted = inverted;
        self
    }

    fn forward(&self, x: &Q, depth_bound: u32) -> Result<Q> {
        if x <= &zero() || x >= &self.window {
            return Ok(x.clone());
        }
        let floor_pt = self.base.start();
        let mut y = x.clone();
        let mut n = 0u32;
        while &y < floor_pt {
            if n >= depth_bound {
                return Err(Error::DepthExceeded(depth_bound));
            }
            y = self.inner.eval_inverse(&y)?;
            n += 1;
        }
        Ok(self.base.eval(&y)? / crate::rational::pow2(n))
    }

    fn backward(&self, z: &Q, depth_bound: u32) -> Result<Q> {
        if z <= &zero() || z >= &self.window {
            return Ok(z.clone());
        }
        let half = &self.window / qi(2);
        let mut y = z.clone();
        let mut n = 0u32;
        while y < half {
            if n >= depth_bound {
                return Err(Error::DepthExceeded(depth_bound));
            }
            y *= qi(2);
            n += 1;
        }
        let mut x = self.base.eval_inverse(&y)?;
        for _ in 0..n {
            x = self.inner.eval(&x)?;
        }
        Ok(x)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TowerKind {
    Anderson(AndersonTower),
    Equivariant(EquivariantTower),
    /// `factors[0] ∘ factors[1] ∘ …`.
    Product(Vec<Homeomorphism>),
}

/// A homeomorphism given by a finite recursion rule, evaluated exactly by
/// descending at most `depth_bound` levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfSimilarMap {
    pub kind: TowerKind,
    pub depth_bound: u32,
}

impl SelfSimilarMap {
    pub fn anderson(tower: AndersonTower) -> Self {
        SelfSimilarMap {
            kind: TowerKind::Anderson(tower),
            depth_bound: DEFAULT_DEPTH_BOUND,
        }
    }

    pub fn equivariant(tower: EquivariantTower) -> Self {
        SelfSimilarMap {
            kind: TowerKind::Equivariant(tower),
            depth_bound: DEFAULT_DEPTH_BOUND,
        }
    }

    pub fn product(factors: Vec<Homeomorphism>) -> Self {
        SelfSimilarMap {
            kind: TowerKind::Product(factors),
            depth_bound: DEFAULT_DEPTH_BOUND,
        }
    }

    pub fn with_depth_bound(mut self, depth_bound: u32) -> Self {
        self.depth_bound = depth_bound;
        self
    }

    pub fn domain(&self) -> Domain {
        match &self.kind {
            TowerKind::Anderson(t) => t.f.domain(),
            TowerKind::Equivariant(_) => Domain::Interval,
            TowerKind::Product(fs) => fs.first().map_or(Domain::Interval, |h| h.domain()),
        }
    }

    pub fn eval(&self, x: &Q) -> Result<Q> {
        match &self.kind {
            TowerKind::Anderson(t) => t.eval_with(&t.f, x, self.depth_bound),
            TowerKind::Equivariant(t) => {
                if t.inverted {
                    t.backward(x, self.depth_bound)
                } else {
                    t.forward(x, self.depth_bound)
                }
            }
            TowerKind::Product(fs) => eval_word(fs, x),
        }
    }

    pub fn eval_inverse(&self, y: &Q) -> Result<Q> {
        match &self.kind {
            TowerKind::Anderson(t) => t.eval_with(&t.f.inverse(), y, self.depth_bound),
            TowerKind::Equivariant(t) => {
                if t.inverted {
                    t.forward(y, self.depth_bound)
                } else {
                    t.backward(y, self.depth_bound)
                }
            }
            TowerKind::Product(fs) => {
                let mut x = y.clone();
                for f in fs {
                    x = f.eval_inverse(&x)?;
                }
                Ok(x)
            }
        }
    }

    pub fn inverse(&self) -> Self {
        let kind = match &self.kind {
            TowerKind::Anderson(t) => TowerKind::Anderson(AndersonTower {
                f: t.f.inverse(),
                ..t.clone()
            }),
            TowerKind::Equivariant(t) => {
                TowerKind::Equivariant(t.clone().set_inverted(!t.inverted))
            }
            TowerKind::Product(fs) => {
                TowerKind::Product(fs.iter().rev().map(|f| f.inverse()).collect())
            }
        };
        SelfSimilarMap {
            kind,
            depth_bound: self.depth_bound,
        }
    }

    /// Closed support arcs of every Anderson tower in the map (recursively).
    pub fn tower_regions(&self) -> Vec<Arc> {
        match &self.kind {
            TowerKind::Anderson(t) => vec![t.support.clone()],
            TowerKind::Equivariant(_) => Vec::new(),
            TowerKind::Product(fs) => fs
                .iter()
                .flat_map(|f| match f {
                    Homeomorphism::Tower(t) => t.tower_regions(),
                    _ => Vec::new(),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn bump() -> PLMap {
        PLMap::bump(
            Domain::Interval,
            &q(1, 4),
            &q(7, 20),
            vec![(q(3, 10), q(13, 40))],
        )
        .unwrap()
    }

    fn translator() -> PLMap {
        // Fixes 9/40 and 17/40, sends 1/4 to 31/80.
        PLMap::bump(
            Domain::Interval,
            &q(9, 40),
            &q(17, 40),
            vec![(q(1, 4), q(31, 80))],
        )
        .unwrap()
    }

    #[test]
    fn tower_agrees_with_direct_conjugation() {
        let region = Arc::new(q(1, 5), q(1, 2));
        let t = SelfSimilarMap::anderson(
            AndersonTower::new(bump(), translator(), region).unwrap(),
        );
        let b = translator();
        for n in 0..6 {
            let direct = b.pow(n).compose(&bump()).unwrap().compose(&b.pow(-n)).unwrap();
            for k in 0..=40 {
                let x = q(1, 4) + q(k, 400);
                let y = b.pow(n).eval(&x).unwrap();
                assert_eq!(t.eval(&y).unwrap(), direct.eval(&y).unwrap());
            }
        }
        assert_eq!(t.eval(&q(3, 10)).unwrap(), q(13, 40));
        assert_eq!(t.eval(&q(1, 10)).unwrap(), q(1, 10));
        assert_eq!(t.eval(&q(17, 40)).unwrap(), q(17, 40));
    }

    #[test]
    fn depth_bound_is_enforced() {
        let region = Arc::new(q(1, 5), q(1, 2));
        let t = SelfSimilarMap::anderson(
            AndersonTower::new(bump(), translator(), region).unwrap(),
        )
        .with_depth_bound(2);
        let x = q(17, 40) - q(1, 1_000_000);
        assert_eq!(t.eval(&x), Err(Error::DepthExceeded(2)));
    }

    #[test]
    fn inverse_round_trips() {
        let region = Arc::new(q(1, 5), q(1, 2));
        let t = SelfSimilarMap::anderson(
            AndersonTower::new(bump(), translator(), region).unwrap(),
        );
        let ti = t.inverse();
        for k in 0..=64 {
            let x = q(k, 64);
            assert_eq!(ti.eval(&t.eval(&x).unwrap()).unwrap(), x);
            assert_eq!(t.eval_inverse(&x).unwrap(), ti.eval(&x).unwrap());
        }
    }

    #[test]
    fn rejects_support_touching_region_boundary() {
        let region = Arc::new(q(1, 4), q(1, 2));
        assert!(matches!(
            AndersonTower::new(bump(), translator(), region),
            Err(Error::SupportTooLarge(_))
        ));
    }
}
