//! Germs at `0` of increasing maps of `[0, ∞)`, the radial model of germs of
//! homeomorphisms of `Rⁿ` fixing the origin.
//!
//! A [`GermMap`] is represented by a piecewise-linear increasing function on
//! some `[0, e]` with `0 ↦ 0`. Two representatives define the same germ iff
//! their first linear pieces agree, i.e. iff they have the same slope at `0`.
//!
//! The constructions here are:
//!
//! * [`is_local_contraction`]: `g(x) < x` on some `(0, t]`;
//! * [`straighten_contraction`]: a conjugacy `h` with `h g h⁻¹ = x/2` near
//!   `0`, built as an equivariant tower on the fundamental domain `[g(t), t]`;
//! * [`conjugate_contractions`]: any two local contractions are conjugate;
//! * [`basis_to_contraction`]: a radial `b` with `b f b⁻¹ f` a local
//!   contraction whenever `f` contracts the dyadic balls;
//! * [`make_compatible_contraction`] and [`decompose_via_contraction`]: an
//!   explicit `c` with `c` and `c g'` contracting, and the resulting
//!   factorisation of `g'` into conjugates of a given contraction.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::piecewise::PlFunction;
use crate::pl_homeo::selfsim::{EquivariantTower, Homeomorphism, SelfSimilarMap, DEFAULT_DEPTH_BOUND};
use crate::rational::{max, min, one, pow2_neg, q, qi, zero, Q};

/// Default number of dyadic levels checked by the basis statements.
pub const BASIS_DEPTH: u32 = 20;
/// Finest dyadic scale of the conjugacy checks.
pub const CONJUGACY_FLOOR_EXP: u32 = 20;
/// Top of the window certified by [`decompose_via_contraction`].
pub const DECOMPOSE_TOP_EXP: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GermMap {
    rep: PlFunction,
}

impl GermMap {
    pub fn new(rep: PlFunction) -> Result<Self> {
        if rep.start() != &zero() || rep.image_start() != &zero() {
            return Err(Error::InvariantViolation(
                "germ representative must start at (0, 0)".into(),
            ));
        }
        if rep.end() > &one() || rep.image_end() > &one() {
            return Err(Error::InvariantViolation(
                "germ representative must stay inside [0, 1]".into(),
            ));
        }
        Ok(GermMap { rep })
    }

    /// From graph points; `(0, 0)` is added when missing.
    pub fn from_points(mut points: Vec<(Q, Q)>) -> Result<Self> {
        if !points.iter().any(|p| p.0 == zero()) {
            points.push((zero(), zero()));
        }
        Self::new(PlFunction::from_points(points)?)
    }

    /// `x ↦ slope·x` on the largest `[0, e] ⊂ [0, 1]` mapping into `[0, 1]`.
    pub fn linear(slope: Q) -> Result<Self> {
        if slope <= zero() {
            return Err(Error::InvariantViolation("slope must be positive".into()));
        }
        let end = if slope > one() { one() / &slope } else { one() };
        let img = &end * &slope;
        Self::new(PlFunction::linear(zero(), zero(), end, img)?)
    }

    pub fn identity() -> Self {
        Self::linear(one()).expect("identity")
    }

    pub fn rep(&self) -> &PlFunction {
        &self.rep
    }

    /// Right end of the representative's domain.
    pub fn domain_end(&self) -> &Q {
        self.rep.end()
    }

    pub fn eval(&self, x: &Q) -> Result<Q> {
        self.rep.eval(x)
    }

    pub fn eval_inverse(&self, y: &Q) -> Result<Q> {
        self.rep.eval_inverse(y)
    }

    pub fn inverse(&self) -> Self {
        GermMap {
            rep: self.rep.inverse(),
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &GermMap) -> Result<Self> {
        Ok(GermMap {
            rep: self.rep.compose(&inner.rep)?,
        })
    }

    /// Slope at `0`, which determines the germ.
    pub fn slope_at_zero(&self) -> Q {
        self.rep.first_slope()
    }

    /// Germ equality: agreement on some `[0, t]`.
    pub fn germ_eq(&self, other: &GermMap) -> bool {
        self.slope_at_zero() == other.slope_at_zero()
    }

    /// Largest `t` such that both representatives agree on `[0, t]`, if any.
    pub fn agreement_window(&self, other: &GermMap) -> Option<Q> {
        if !self.germ_eq(other) {
            return None;
        }
        let end = min(self.domain_end(), other.domain_end());
        let mut xs: Vec<Q> = self
            .rep
            .knots()
            .iter()
            .chain(other.rep.knots())
            .filter(|k| **k > zero() && **k <= end)
            .cloned()
            .collect();
        xs.push(end);
        xs.sort();
        xs.dedup();
        let mut good = None;
        for x in xs {
            if self.eval(&x).ok()? == other.eval(&x).ok()? {
                good = Some(x);
            } else {
                break;
            }
        }
        good
    }
}

/// `Some(t)` with `g(x) < x` on `(0, t]`, which makes `[0, t]` a ball with
/// `g([0, t]) ⊂ [0, t)` and `⋂ gⁿ([0, t]) = {0}`; `None` otherwise.
///
/// `t` is the last knot before `g - id` first stops being negative.
pub fn is_local_contraction(g: &GermMap) -> Option<Q> {
    let ks = g.rep.knots();
    let vs = g.rep.values();
    let mut t = None;
    for (k, v) in ks.iter().zip(vs).skip(1) {
        if v < k {
            t = Some(k.clone());
        } else {
            break;
        }
    }
    t
}

/// Checks `g(x) < x` on `(0, t]` exactly.
fn contracts_up_to(g: &GermMap, t: &Q) -> bool {
    if t <= &zero() || t > g.domain_end() {
        return false;
    }
    let Ok(gt) = g.eval(t) else { return false };
    if &gt >= t {
        return false;
    }
    g.rep
        .knots()
        .iter()
        .zip(g.rep.values())
        .skip(1)
        .filter(|(k, _)| *k <= t)
        .all(|(k, v)| v < k)
}

/// The straightening conjugacy `h` with `h(g(x)) = h(x)/2` on `(0, t]`.
///
/// The base piece is the linear map `[g(t), t] → [t/2, t]`; below it `h` is
/// propagated by the equivariance and above `t` it is the identity.
pub fn straighten_contraction(g: &GermMap, t: &Q) -> Result<SelfSimilarMap> {
    if !contracts_up_to(g, t) {
        return Err(Error::NotAContraction);
    }
    let gt = g.eval(t)?;
    let base = PlFunction::linear(gt, t / qi(2), t.clone(), t.clone())?;
    let tower = SelfSimilarMap::equivariant(EquivariantTower::new(base, g.clone(), t.clone())?);
    Ok(tower.with_depth_bound(straightening_depth(g, t)))
}

/// Levels needed to evaluate a straightening down to `2^{-64}·t`. Each
/// step multiplies by at least `1/ρ`, where `ρ` is the largest ratio
/// `g(x)/x` on `(0, t]`; that ratio is monotone on every linear piece, so it
/// peaks at `0`, at a knot, or at `t`.
fn straightening_depth(g: &GermMap, t: &Q) -> u32 {
    let mut rho = g.slope_at_zero();
    for (k, v) in g.rep.knots().iter().zip(g.rep.values()).skip(1) {
        if k <= t {
            rho = max(&rho, &(v / k));
        }
    }
    if let Ok(gt) = g.eval(t) {
        rho = max(&rho, &(gt / t));
    }
    let r = rho.to_f64().unwrap_or(0.5).clamp(1e-12, 1.0 - 1e-12);
    let levels = (64.0 * std::f64::consts::LN_2 / -r.ln()).ceil() as u32;
    levels.saturating_add(2).max(DEFAULT_DEPTH_BOUND)
}

/// `h = straighten(g2)⁻¹ ∘ straighten(g1)`, so that `h g1 h⁻¹ = g2` near `0`.
pub fn conjugate_contractions(g1: &GermMap, g2: &GermMap) -> Result<SelfSimilarMap> {
    let t1 = is_local_contraction(g1).ok_or(Error::NotAContraction)?;
    let t2 = is_local_contraction(g2).ok_or(Error::NotAContraction)?;
    let s1 = straighten_contraction(g1, &t1)?;
    let s2 = straighten_contraction(g2, &t2)?;
    Ok(SelfSimilarMap::product(vec![
        Homeomorphism::Tower(s2.inverse()),
        Homeomorphism::Tower(s1),
    ]))
}

/// Window `(0, w]` on which `h g1 h⁻¹ = g2` holds for the map returned by
/// [`conjugate_contractions`].
pub fn conjugacy_window(g1: &GermMap, g2: &GermMap) -> Result<Q> {
    let t1 = is_local_contraction(g1).ok_or(Error::NotAContraction)?;
    let t2 = is_local_contraction(g2).ok_or(Error::NotAContraction)?;
    let s2 = straighten_contraction(g2, &t2)?;
    s2.eval_inverse(&min(&t1, &t2))
}

/// Dyadic sample points `m·2^{-j}/16`, `16 <= m < 32`, for
/// `0 <= j <= finest_exp`, restricted to `(0, top]`, plus `top` itself.
pub fn dyadic_shell_grid(top: &Q, finest_exp: u32) -> Vec<Q> {
    let mut pts = vec![top.clone()];
    for j in 0..=finest_exp {
        let scale = pow2_neg(j + 4);
        for m in 16..32 {
            let x = &scale * qi(m);
            if &x <= top {
                pts.push(x);
            }
        }
    }
    pts.sort();
    pts.dedup();
    pts
}

/// Output of [`basis_to_contraction`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisContraction {
    /// The radial map with `λ(2^{-n}) = r_n` and `λ(r_n) = 2^{-n-1}`.
    pub b: GermMap,
    /// `b f b⁻¹ f`.
    pub composite: GermMap,
    /// The chosen radii `r_0, …, r_depth`.
    pub radii: Vec<Q>,
    pub depth: u32,
}

/// Given `f` with `f(2^{-n}) < 2^{-n}` for `n <= depth`, builds `b` so that
/// `b f b⁻¹ f` maps `[0, 2^{-n}]` into `[0, 2^{-n-1}]` for every `n <= depth`.
///
/// `r_n = max(f(2^{-n}), 3·2^{-n-2})`; `λ` interpolates linearly between the
/// constraint points and is linear with slope `3/4` below `2^{-depth-1}`.
pub fn basis_to_contraction(f: &GermMap, depth: u32) -> Result<BasisContraction> {
    let mut radii = Vec::with_capacity(depth as usize + 2);
    for n in 0..=depth {
        let p = pow2_neg(n);
        let fp = f.eval(&p).map_err(|_| Error::NotBasisContracting(n))?;
        if fp >= p {
            return Err(Error::NotBasisContracting(n));
        }
        radii.push(max(&fp, &(q(3, 4) * &p)));
    }
    let tail = q(3, 4) * pow2_neg(depth + 1);
    let mut pts = vec![(zero(), zero()), (pow2_neg(depth + 1), tail)];
    for (n, r) in radii.iter().enumerate() {
        let n = n as u32;
        pts.push((pow2_neg(n), r.clone()));
        pts.push((r.clone(), pow2_neg(n + 1)));
    }
    let b = GermMap::from_points(pts)?;
    let composite = b.compose(&f.compose(&b.inverse())?.compose(f)?)?;
    for n in 0..=depth {
        let p = pow2_neg(n);
        if composite.eval(&p)? > pow2_neg(n + 1) {
            return Err(Error::InvariantViolation(format!(
                "composite fails to nest level {n}"
            )));
        }
    }
    Ok(BasisContraction {
        b,
        composite,
        radii,
        depth,
    })
}

/// Builds a local contraction `c` with `c ∘ g'` also a local contraction.
///
/// With `r_n = g'(2^{-n})` and `t_n = min(r_n, 2^{-n-1})/2`, `c` is the
/// piecewise-linear map through `(r_n, t_n)`, linear down to `0` below the
/// last level. The number of levels is at least `depth` and large enough
/// that `g'` is linear below the last one.
pub fn make_compatible_contraction(gp: &GermMap, depth: u32) -> Result<GermMap> {
    let end = gp.domain_end();
    let mut n0 = 0u32;
    while &pow2_neg(n0) > end {
        n0 += 1;
    }
    let first_knot = gp.rep().knots()[1].clone();
    let mut last = depth.max(n0 + 1);
    while pow2_neg(last) > first_knot {
        last += 1;
    }
    let mut pts = vec![(zero(), zero())];
    for n in n0..=last {
        let r = gp.eval(&pow2_neg(n))?;
        let t = min(&r, &pow2_neg(n + 1)) / qi(2);
        pts.push((r, t));
    }
    GermMap::from_points(pts)
}

/// Where a factor of a [`ConjugacyCertificate`] comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Provenance {
    /// Conjugacy built by straightening both contractions.
    Straightening,
    /// The `b f b⁻¹ f` construction.
    BasisLemma2,
    /// The compatible contraction `c`.
    CompatibleC,
    /// In dimension at least two this factor is replaced by four conjugates
    /// of `g` through an ambient ball swap that the radial model cannot
    /// express; carried as an assumption, not constructed.
    #[serde(rename = "AssumedDim>=2")]
    AssumedDim2,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugateFactor {
    pub conjugator: Homeomorphism,
    pub exponent: i8,
    pub provenance: Vec<Provenance>,
    /// Number of conjugates of `g` this factor accounts for in the
    /// dimension ≥ 2 argument.
    pub ambient_count: u32,
}

/// `target = ∏ hᵢ · core^{eᵢ} · hᵢ⁻¹` on `(0, verified_to]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyCertificate {
    pub target: GermMap,
    pub core: GermMap,
    pub factors: Vec<ConjugateFactor>,
    pub verified_to: Q,
    pub floor_exp: u32,
}

impl ConjugacyCertificate {
    /// Evaluates the product of the factors at `x`.
    pub fn eval_product(&self, x: &Q) -> Result<Q> {
        let mut y = x.clone();
        for f in self.factors.iter().rev() {
            let u = f.conjugator.eval_inverse(&y)?;
            let v = if f.exponent >= 0 {
                self.core.eval(&u)?
            } else {
                self.core.eval_inverse(&u)?
            };
            y = f.conjugator.eval(&v)?;
        }
        Ok(y)
    }

    /// The sample points the certificate is checked on.
    pub fn grid(&self) -> Vec<Q> {
        dyadic_shell_grid(&self.verified_to, self.floor_exp)
    }

    /// Recomputes the product at every grid point.
    pub fn verify(&self) -> Result<bool> {
        for x in self.grid() {
            if self.eval_product(&x)? != self.target.eval(&x)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Conjugates of `g` the ambient argument uses for the same factorisation.
    pub fn ambient_conjugate_count(&self) -> u32 {
        self.factors.iter().map(|f| f.ambient_count).sum()
    }
}

/// Writes `g'` as `(h₁ g⁻¹ h₁⁻¹)(h₂ g h₂⁻¹)` near `0`, where `c = h₁ g h₁⁻¹`
/// is the compatible contraction and `c g' = h₂ g h₂⁻¹`.
pub fn decompose_via_contraction(gp: &GermMap, g: &GermMap) -> Result<ConjugacyCertificate> {
    is_local_contraction(g).ok_or(Error::NotAContraction)?;
    let floor_exp = DECOMPOSE_TOP_EXP + 8;
    if gp.germ_eq(g) {
        let window = gp.agreement_window(g).ok_or(Error::NotAContraction)?;
        let verified_to = dyadic_below(&min(&window, &pow2_neg(DECOMPOSE_TOP_EXP)));
        let cert = ConjugacyCertificate {
            target: gp.clone(),
            core: g.clone(),
            factors: vec![ConjugateFactor {
                conjugator: Homeomorphism::Germ(GermMap::identity()),
                exponent: 1,
                provenance: vec![Provenance::Straightening],
                ambient_count: 1,
            }],
            verified_to,
            floor_exp,
        };
        return check(cert);
    }
    let c = make_compatible_contraction(gp, BASIS_DEPTH)?;
    let cg = c.compose(gp)?;
    let h1 = conjugate_contractions(g, &c)?;
    let h2 = conjugate_contractions(g, &cg)?;
    let w1 = conjugacy_window(g, &c)?;
    let w2 = conjugacy_window(g, &cg)?;
    let limit = min(&min(&w2, &gp.eval_inverse(&min(&w1, gp.rep().image_end()))?), &pow2_neg(DECOMPOSE_TOP_EXP));
    let verified_to = dyadic_below(&limit);
    let cert = ConjugacyCertificate {
        target: gp.clone(),
        core: g.clone(),
        factors: vec![
            ConjugateFactor {
                conjugator: Homeomorphism::Tower(h1),
                exponent: -1,
                provenance: vec![
                    Provenance::CompatibleC,
                    Provenance::Straightening,
                    Provenance::AssumedDim2,
                ],
                ambient_count: 4,
            },
            ConjugateFactor {
                conjugator: Homeomorphism::Tower(h2),
                exponent: 1,
                provenance: vec![Provenance::CompatibleC, Provenance::Straightening],
                ambient_count: 4,
            },
        ],
        verified_to,
        floor_exp,
    };
    check(cert)
}

fn check(cert: ConjugacyCertificate) -> Result<ConjugacyCertificate> {
    if cert.verify()? {
        Ok(cert)
    } else {
        Err(Error::InvariantViolation(
            "conjugate factorisation does not reproduce the target".into(),
        ))
    }
}

/// Largest `2^{-k} <= x` (for `0 < x <= 1`).
fn dyadic_below(x: &Q) -> Q {
    let mut k = 0;
    while &pow2_neg(k) > x {
        k += 1;
    }
    pow2_neg(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contraction_examples() {
        assert_eq!(is_local_contraction(&GermMap::linear(q(1, 2)).unwrap()), Some(one()));
        assert_eq!(is_local_contraction(&GermMap::linear(q(1, 4)).unwrap()), Some(one()));
        assert_eq!(is_local_contraction(&GermMap::linear(qi(2)).unwrap()), None);
        assert_eq!(is_local_contraction(&GermMap::identity()), None);
    }

    #[test]
    fn straighten_half_is_identity() {
        let g = GermMap::linear(q(1, 2)).unwrap();
        let h = straighten_contraction(&g, &one()).unwrap();
        for x in dyadic_shell_grid(&one(), 20) {
            assert_eq!(h.eval(&x).unwrap(), x);
        }
    }

    #[test]
    fn straighten_quarter() {
        let g = GermMap::linear(q(1, 4)).unwrap();
        let h = straighten_contraction(&g, &one()).unwrap();
        // h(4^{-n} y) = 2^{-n} φ(y) with φ(y) = (2y + 1)/3 on [1/4, 1].
        assert_eq!(h.eval(&q(1, 4)).unwrap(), q(1, 2));
        assert_eq!(h.eval(&q(1, 8)).unwrap(), q(1, 3));
        for x in dyadic_shell_grid(&one(), 20) {
            let lhs = h.eval(&g.eval(&x).unwrap()).unwrap();
            assert_eq!(lhs, h.eval(&x).unwrap() / qi(2));
        }
        assert!(straighten_contraction(&GermMap::linear(qi(2)).unwrap(), &q(1, 4)).is_err());
    }

    #[test]
    fn compatible_contraction_for_doubling() {
        let gp = GermMap::linear(qi(2)).unwrap();
        let c = make_compatible_contraction(&gp, 20).unwrap();
        let cg = c.compose(&gp).unwrap();
        for n in 1..=20 {
            assert_eq!(cg.eval(&pow2_neg(n)).unwrap(), pow2_neg(n + 2));
        }
        assert!(is_local_contraction(&c).is_some());
        assert!(is_local_contraction(&cg).is_some());
    }

    #[test]
    fn basis_lemma_for_half() {
        let f = GermMap::linear(q(1, 2)).unwrap();
        let out = basis_to_contraction(&f, 20).unwrap();
        assert_eq!(out.radii[3], q(3, 4) * pow2_neg(3));
        for n in 0..=20 {
            assert!(out.composite.eval(&pow2_neg(n)).unwrap() <= pow2_neg(n + 1));
        }
        assert_eq!(
            basis_to_contraction(&GermMap::linear(qi(2)).unwrap(), 20),
            Err(Error::NotBasisContracting(0))
        );
    }

    #[test]
    fn decompose_identity_target() {
        let g = GermMap::linear(q(1, 2)).unwrap();
        let cert = decompose_via_contraction(&g, &g).unwrap();
        assert_eq!(cert.factors.len(), 1);
        let gp = GermMap::linear(qi(2)).unwrap();
        let cert = decompose_via_contraction(&gp, &g).unwrap();
        assert_eq!(cert.factors.len(), 2);
        assert_eq!(cert.ambient_conjugate_count(), 8);
        assert!(cert.verified_to >= pow2_neg(16));
    }
}
