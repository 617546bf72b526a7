//! JSON interchange formats.
//!
//! Rationals are written as `[numerator, denominator]` pairs of integers, or of
//! decimal strings when a part does not fit in 64 bits. No floats appear
//! anywhere. Each value type has a plain data form with serde derives and a
//! checked conversion into the library type.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::commutator::LocalityInstance;
use crate::error::{Error, Result};
use crate::fragmentation::OpenCover1D;
use crate::germs::GermMap;
use crate::piecewise::PlFunction;
use crate::pl_homeo::map::{Domain, PLMap};
use crate::pl_homeo::selfsim::{AndersonTower, EquivariantTower, Homeomorphism, SelfSimilarMap, TowerKind};
use crate::pl_homeo::support::{Arc, SupportSet};
use crate::rational::Q;

/// A rational in its interchange form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rat(pub Q);

fn int_value(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(n.to_string()),
    }
}

fn parse_int(v: &Value) -> std::result::Result<BigInt, String> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| format!("{n} is not an integer")),
        Value::String(s) => BigInt::from_str(s).map_err(|_| format!("`{s}` is not an integer")),
        other => Err(format!("expected an integer, found {other}")),
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Value::Array(vec![int_value(self.0.numer()), int_value(self.0.denom())]).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        let Value::Array(parts) = &v else {
            return Err(D::Error::custom(format!("expected [num, den], found {v}")));
        };
        if parts.len() != 2 {
            return Err(D::Error::custom("a rational needs exactly two entries"));
        }
        let n = parse_int(&parts[0]).map_err(D::Error::custom)?;
        let den = parse_int(&parts[1]).map_err(D::Error::custom)?;
        if den.is_zero() {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(Rat(Q::new(n, den)))
    }
}

fn rats(xs: &[Q]) -> Vec<Rat> {
    xs.iter().cloned().map(Rat).collect()
}

fn unrats(xs: Vec<Rat>) -> Vec<Q> {
    xs.into_iter().map(|r| r.0).collect()
}

/// `#[serde(with = …)]` adapter for a single [`Q`].
pub mod q_serde {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        Rat(x.clone()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        Ok(Rat::deserialize(d)?.0)
    }
}

/// `#[serde(with = …)]` adapter for an optional [`Q`].
pub mod opt_q_serde {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
        x.clone().map(Rat).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Q>, D::Error> {
        Ok(Option::<Rat>::deserialize(d)?.map(|r| r.0))
    }
}

/// `#[serde(with = …)]` adapter for a list of [`Q`].
pub mod vec_q_serde {
    use super::*;

    pub fn serialize<S: Serializer>(x: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
        rats(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
        Ok(unrats(Vec::<Rat>::deserialize(d)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainJson {
    Interval,
    Circle,
}

impl From<Domain> for DomainJson {
    fn from(d: Domain) -> Self {
        match d {
            Domain::Interval => DomainJson::Interval,
            Domain::Circle => DomainJson::Circle,
        }
    }
}

impl From<DomainJson> for Domain {
    fn from(d: DomainJson) -> Self {
        match d {
            DomainJson::Interval => Domain::Interval,
            DomainJson::Circle => Domain::Circle,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlMapJson {
    pub domain: DomainJson,
    pub knots: Vec<Rat>,
    pub values: Vec<Rat>,
}

impl From<&PLMap> for PlMapJson {
    fn from(m: &PLMap) -> Self {
        PlMapJson {
            domain: m.domain().into(),
            knots: rats(m.knots()),
            values: rats(m.values()),
        }
    }
}

impl TryFrom<PlMapJson> for PLMap {
    type Error = Error;

    fn try_from(j: PlMapJson) -> Result<Self> {
        PLMap::new(j.domain.into(), unrats(j.knots), unrats(j.values))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GermJson {
    pub knots: Vec<Rat>,
    pub values: Vec<Rat>,
}

impl From<&GermMap> for GermJson {
    fn from(g: &GermMap) -> Self {
        GermJson {
            knots: rats(g.rep().knots()),
            values: rats(g.rep().values()),
        }
    }
}

impl TryFrom<GermJson> for GermMap {
    type Error = Error;

    fn try_from(j: GermJson) -> Result<Self> {
        GermMap::new(PlFunction::new(unrats(j.knots), unrats(j.values))?)
    }
}

/// An arc as `[start, end]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcJson(pub Rat, pub Rat);

impl From<&Arc> for ArcJson {
    fn from(a: &Arc) -> Self {
        ArcJson(Rat(a.start.clone()), Rat(a.end.clone()))
    }
}

impl From<ArcJson> for Arc {
    fn from(a: ArcJson) -> Self {
        Arc::new(a.0 .0, a.1 .0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverJson {
    pub domain: DomainJson,
    pub elements: Vec<Vec<ArcJson>>,
}

impl From<&OpenCover1D> for CoverJson {
    fn from(c: &OpenCover1D) -> Self {
        CoverJson {
            domain: c.domain().into(),
            elements: c
                .elements()
                .iter()
                .map(|el| el.iter().map(ArcJson::from).collect())
                .collect(),
        }
    }
}

impl TryFrom<CoverJson> for OpenCover1D {
    type Error = Error;

    fn try_from(j: CoverJson) -> Result<Self> {
        OpenCover1D::new(
            j.domain.into(),
            j.elements
                .into_iter()
                .map(|el| el.into_iter().map(Arc::from).collect())
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportJson {
    pub domain: DomainJson,
    pub components: Vec<ArcJson>,
}

impl From<&SupportSet> for SupportJson {
    fn from(s: &SupportSet) -> Self {
        SupportJson {
            domain: s.domain().into(),
            components: s.components().iter().map(ArcJson::from).collect(),
        }
    }
}

impl From<SupportJson> for SupportSet {
    fn from(j: SupportJson) -> Self {
        SupportSet::from_pieces(j.domain.into(), j.components.into_iter().map(Arc::from).collect())
    }
}

/// Any evaluable map, tagged by kind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum HomeoJson {
    Pl(PlMapJson),
    Germ(GermJson),
    Anderson {
        f: PlMapJson,
        translator: PlMapJson,
        region: ArcJson,
        depth_bound: u32,
    },
    Equivariant {
        base_knots: Vec<Rat>,
        base_values: Vec<Rat>,
        inner: GermJson,
        window: Rat,
        inverted: bool,
        depth_bound: u32,
    },
    Product {
        factors: Vec<HomeoJson>,
        depth_bound: u32,
    },
}

impl From<&Homeomorphism> for HomeoJson {
    fn from(h: &Homeomorphism) -> Self {
        match h {
            Homeomorphism::Pl(m) => HomeoJson::Pl(m.into()),
            Homeomorphism::Germ(g) => HomeoJson::Germ(g.into()),
            Homeomorphism::Tower(t) => t.into(),
        }
    }
}

impl From<&SelfSimilarMap> for HomeoJson {
    fn from(t: &SelfSimilarMap) -> Self {
        match &t.kind {
            TowerKind::Anderson(a) => HomeoJson::Anderson {
                f: a.f().into(),
                translator: a.translator().into(),
                region: a.region().into(),
                depth_bound: t.depth_bound,
            },
            TowerKind::Equivariant(e) => HomeoJson::Equivariant {
                base_knots: rats(e.base().knots()),
                base_values: rats(e.base().values()),
                inner: e.inner().into(),
                window: Rat(e.window().clone()),
                inverted: e.is_inverted(),
                depth_bound: t.depth_bound,
            },
            TowerKind::Product(fs) => HomeoJson::Product {
                factors: fs.iter().map(HomeoJson::from).collect(),
                depth_bound: t.depth_bound,
            },
        }
    }
}

impl TryFrom<HomeoJson> for Homeomorphism {
    type Error = Error;

    fn try_from(j: HomeoJson) -> Result<Self> {
        Ok(match j {
            HomeoJson::Pl(m) => Homeomorphism::Pl(m.try_into()?),
            HomeoJson::Germ(g) => Homeomorphism::Germ(g.try_into()?),
            HomeoJson::Anderson {
                f,
                translator,
                region,
                depth_bound,
            } => Homeomorphism::Tower(
                SelfSimilarMap::anderson(AndersonTower::new(
                    f.try_into()?,
                    translator.try_into()?,
                    region.into(),
                )?)
                .with_depth_bound(depth_bound),
            ),
            HomeoJson::Equivariant {
                base_knots,
                base_values,
                inner,
                window,
                inverted,
                depth_bound,
            } => {
                let base = PlFunction::new(unrats(base_knots), unrats(base_values))?;
                let tower = EquivariantTower::new(base, inner.try_into()?, window.0)?;
                let map = SelfSimilarMap::equivariant(tower).with_depth_bound(depth_bound);
                Homeomorphism::Tower(if inverted { map.inverse() } else { map })
            }
            HomeoJson::Product {
                factors,
                depth_bound,
            } => {
                let fs = factors
                    .into_iter()
                    .map(Homeomorphism::try_from)
                    .collect::<Result<Vec<_>>>()?;
                Homeomorphism::Tower(SelfSimilarMap::product(fs).with_depth_bound(depth_bound))
            }
        })
    }
}

/// Input of the commutator locality check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalityJson {
    pub a: HomeoJson,
    pub b: HomeoJson,
    pub a_ext: HomeoJson,
    pub b_ext: HomeoJson,
    pub inner: ArcJson,
    pub middle: ArcJson,
    pub outer: ArcJson,
}

impl From<&LocalityInstance> for LocalityJson {
    fn from(i: &LocalityInstance) -> Self {
        LocalityJson {
            a: (&i.a).into(),
            b: (&i.b).into(),
            a_ext: (&i.a_ext).into(),
            b_ext: (&i.b_ext).into(),
            inner: (&i.inner).into(),
            middle: (&i.middle).into(),
            outer: (&i.outer).into(),
        }
    }
}

impl TryFrom<LocalityJson> for LocalityInstance {
    type Error = Error;

    fn try_from(j: LocalityJson) -> Result<Self> {
        Ok(LocalityInstance {
            a: j.a.try_into()?,
            b: j.b.try_into()?,
            a_ext: j.a_ext.try_into()?,
            b_ext: j.b_ext.try_into()?,
            inner: j.inner.into(),
            middle: j.middle.into(),
            outer: j.outer.into(),
        })
    }
}

/// Space descriptors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum SpaceJson {
    Circle { length: Rat },
    Torus { a: Rat, b: Rat },
    Matrix { dist: Vec<Vec<Rat>> },
}

impl From<&crate::cover::SpaceModel> for SpaceJson {
    fn from(m: &crate::cover::SpaceModel) -> Self {
        use crate::cover::SpaceModel;
        match m {
            SpaceModel::CircleLength(l) => SpaceJson::Circle { length: Rat(l.clone()) },
            SpaceModel::FlatTorus(a, b) => SpaceJson::Torus {
                a: Rat(a.clone()),
                b: Rat(b.clone()),
            },
            SpaceModel::ExplicitMetric(d) => SpaceJson::Matrix {
                dist: d.iter().map(|r| rats(r)).collect(),
            },
        }
    }
}

impl From<SpaceJson> for crate::cover::SpaceModel {
    fn from(j: SpaceJson) -> Self {
        use crate::cover::SpaceModel;
        match j {
            SpaceJson::Circle { length } => SpaceModel::CircleLength(length.0),
            SpaceJson::Torus { a, b } => SpaceModel::FlatTorus(a.0, b.0),
            SpaceJson::Matrix { dist } => {
                SpaceModel::ExplicitMetric(dist.into_iter().map(unrats).collect())
            }
        }
    }
}

/// Parses JSON text, reporting the line and column of syntax errors.
pub fn from_str<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Canonical pretty rendering with a trailing newline.
pub fn to_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable value");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn rationals_round_trip() {
        let x = Rat(q(-3, 7));
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, "[-3,7]");
        assert_eq!(serde_json::from_str::<Rat>(&s).unwrap(), x);
        let big = Rat(Q::new(BigInt::from(1) << 80, BigInt::from(3)));
        let s = serde_json::to_string(&big).unwrap();
        assert!(s.contains('"'));
        assert_eq!(serde_json::from_str::<Rat>(&s).unwrap(), big);
        assert!(serde_json::from_str::<Rat>("[1, 0]").is_err());
        assert!(serde_json::from_str::<Rat>("0.5").is_err());
    }

    #[test]
    fn map_round_trip() {
        let text = r#"{"domain": "interval", "knots": [[0,1],[1,2],[1,1]], "values": [[0,1],[1,4],[1,1]]}"#;
        let m: PLMap = from_str::<PlMapJson>(text).unwrap().try_into().unwrap();
        assert_eq!(m.eval(&q(1, 4)).unwrap(), q(1, 8));
        let back: PLMap = from_str::<PlMapJson>(&to_string(&PlMapJson::from(&m)))
            .unwrap()
            .try_into()
            .unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn bad_values_name_the_index() {
        let text = r#"{"domain": "interval", "knots": [[0,1],[1,2],[3,4],[1,1]], "values": [[0,1],[1,2],[1,4],[1,1]]}"#;
        let err = PLMap::try_from(from_str::<PlMapJson>(text).unwrap()).unwrap_err();
        assert!(err.to_string().contains("values[2]"), "{err}");
    }
}
