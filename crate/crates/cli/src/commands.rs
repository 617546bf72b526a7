use std::path::Path;

use homeo_core::certify::{certify_small_word, verify_certificate, CertificateJson};
use homeo_core::commutator::{
    anderson_factor, commutator_agrees, commutator_eval, commutator_locality_check,
    commutator_test_points, multi_anderson,
};
use homeo_core::cover::{
    build_epsilon_net, degree_stability_scan, degree_stability_scan_on, dual_graph, efficient_cover,
    is_proper, SampledSpace, SpaceModel,
};
use homeo_core::fragmentation::{fragment, fragmentation_threshold, Threshold};
use homeo_core::germs::{
    basis_to_contraction, conjugate_contractions, conjugacy_window, decompose_via_contraction,
    dyadic_shell_grid, is_local_contraction, make_compatible_contraction, straighten_contraction,
    GermMap, BASIS_DEPTH,
};
use homeo_core::json::{self, GermJson, HomeoJson, PlMapJson, Rat, SupportJson};
use homeo_core::pl_homeo::{complete_distance, sup_distance, support};
use homeo_core::rational::{pow2_neg, qi};
use homeo_core::{Error, Homeomorphism, PLMap, SelfSimilarMap, Q};
use serde::Serialize;
use serde_json::{json, Value as Json};

use crate::args::{self, Command, SpaceArgs};
use crate::value::{parse_value_file, Value};
use crate::CliError;

pub(crate) struct Report {
    pub text: String,
    pub passed: bool,
}

fn report<T: Serialize>(v: &T) -> Report {
    Report {
        text: json::to_string(v),
        passed: true,
    }
}

fn r(x: &Q) -> Json {
    serde_json::to_value(Rat(x.clone())).expect("rationals serialise")
}

fn rs(xs: &[Q]) -> Json {
    Json::Array(xs.iter().map(r).collect())
}

fn wrong_kind(path: &Path, want: &str, got: &Value) -> CliError {
    CliError::Usage(format!("{}: expected a {want}, found a {}", path.display(), got.kind()))
}

fn load_map(path: &Path) -> Result<PLMap, CliError> {
    match parse_value_file(path)? {
        Value::Map(m) => Ok(m),
        other => Err(wrong_kind(path, "map", &other)),
    }
}

fn load_germ(path: &Path) -> Result<GermMap, CliError> {
    match parse_value_file(path)? {
        Value::Germ(g) => Ok(g),
        other => Err(wrong_kind(path, "germ", &other)),
    }
}

fn sampled(a: &SpaceArgs, eps: &Q) -> Result<SampledSpace, CliError> {
    let model = args::space(&a.space)?;
    match &a.grid {
        None => Ok(SampledSpace::for_epsilon(model, eps)?),
        Some(g) => on_grid(model, g),
    }
}

fn on_grid(model: SpaceModel, grid: &str) -> Result<SampledSpace, CliError> {
    let h = args::rational(grid)?;
    if h <= qi(0) {
        return Err(CliError::Usage("--grid must be positive".into()));
    }
    let steps = |len: &Q| -> Result<u64, CliError> {
        let n = len / &h;
        if !n.is_integer() {
            return Err(CliError::Usage(format!("--grid {grid} does not divide the space")));
        }
        u64::try_from(n.to_integer()).map_err(|_| CliError::Usage("--grid is too fine".into()))
    };
    Ok(match model {
        SpaceModel::CircleLength(l) => {
            let n = steps(&l)?;
            SampledSpace::circle(l, n)?
        }
        SpaceModel::FlatTorus(a, b) => {
            let (na, nb) = (steps(&a)?, steps(&b)?);
            SampledSpace::torus(a, b, na, nb)?
        }
        SpaceModel::ExplicitMetric(_) => {
            return Err(CliError::Usage("--grid does not apply to an explicit metric".into()))
        }
    })
}

fn coords(space: &SampledSpace, ids: &[usize]) -> Json {
    Json::Array(ids.iter().map(|&i| rs(&space.coords(i))).collect())
}

fn single_eps(s: &str) -> Result<Q, CliError> {
    let eps = args::rational_list(s)?;
    match eps.as_slice() {
        [e] => Ok(e.clone()),
        _ => Err(CliError::Usage("--eps takes a single scale here".into())),
    }
}

pub(crate) fn execute(cmd: &Command) -> Result<Report, CliError> {
    match cmd {
        Command::Compose { maps, at } => {
            let ms = maps.iter().map(|p| load_map(p)).collect::<Result<Vec<_>, _>>()?;
            let domain = ms[0].domain();
            let h = PLMap::compose_all(domain, &ms)?;
            match at {
                None => Ok(report(&PlMapJson::from(&h))),
                Some(x) => {
                    let x = args::rational(x)?;
                    let y = homeo_core::pl_homeo::evaluate(&Homeomorphism::Pl(h.clone()), &x)?;
                    Ok(report(&json!({"map": PlMapJson::from(&h), "at": r(&x), "value": r(&y)})))
                }
            }
        }
        Command::Invert { map } => Ok(report(&PlMapJson::from(&load_map(map)?.inverse()))),
        Command::Distance { f, g } => {
            let (f, g) = (load_map(f)?, load_map(g)?);
            Ok(report(&json!({
                "sup": r(&sup_distance(&f, &g)?),
                "complete": r(&complete_distance(&f, &g)?),
            })))
        }
        Command::Support { map } => Ok(report(&SupportJson::from(&support(&load_map(map)?)))),
        Command::Fragment { map, cover } => {
            let f = load_map(map)?;
            let cover = match parse_value_file(cover)? {
                Value::Cover(c) => c,
                other => return Err(wrong_kind(cover, "cover", &other)),
            };
            let threshold = match fragmentation_threshold(&cover)? {
                Threshold::Finite(d) => r(&d),
                Threshold::Unbounded => json!("unbounded"),
            };
            let pieces = fragment(&f, &cover)?;
            Ok(report(&json!({
                "threshold": threshold,
                "pieces": pieces.iter().map(PlMapJson::from).collect::<Vec<_>>(),
            })))
        }
        Command::Anderson { input, ball, at, depth } => anderson(input, ball, at.as_deref(), *depth),
        Command::Net(a) => {
            let eps = single_eps(&a.eps)?;
            let space = sampled(a, &eps)?;
            let net = build_epsilon_net(&space, &eps)?;
            Ok(report(&json!({
                "epsilon": r(&eps),
                "resolution": space.resolution().as_ref().map(r),
                "points": space.len(),
                "centers": net.centers,
                "coords": coords(&space, &net.centers),
            })))
        }
        Command::Cover(a) => {
            let eps = single_eps(&a.eps)?;
            let space = sampled(a, &eps)?;
            let cover = efficient_cover(&space, &eps)?;
            let graph = dual_graph(&space, &cover.net);
            let edges: Vec<[usize; 2]> = graph.edges().map(|(u, v)| [u, v]).collect();
            Ok(report(&json!({
                "epsilon": r(&eps),
                "resolution": space.resolution().as_ref().map(r),
                "centers": cover.net.centers,
                "coords": coords(&space, &cover.net.centers),
                "edges": edges,
                "max_degree": graph.max_degree(),
                "colors": cover.colors,
                "colors_used": cover.colors_used(),
                "m": cover.m,
                "proper": is_proper(&graph, &cover.colors),
            })))
        }
        Command::Scan(a) => {
            let eps = args::rational_list(&a.eps)?;
            let model = args::space(&a.space)?;
            let rep = match &a.grid {
                None => degree_stability_scan(&model, &eps)?,
                Some(g) => degree_stability_scan_on(&on_grid(model, g)?, &eps)?,
            };
            Ok(report(&rep))
        }
        Command::GermStraighten { germ, other, basis, depth, grid } => {
            let g = load_germ(germ)?;
            if *basis {
                let out = basis_to_contraction(&g, depth.unwrap_or(BASIS_DEPTH))?;
                return Ok(report(&json!({
                    "b": GermJson::from(&out.b),
                    "composite": GermJson::from(&out.composite),
                    "radii": rs(&out.radii),
                    "depth": out.depth,
                })));
            }
            if let Some(other) = other {
                let g2 = load_germ(other)?;
                let h = conjugate_contractions(&g, &g2)?;
                return Ok(report(&json!({
                    "conjugacy": HomeoJson::from(&Homeomorphism::Tower(h)),
                    "window": r(&conjugacy_window(&g, &g2)?),
                })));
            }
            let k = grid.as_deref().map(args::dyadic_exponent).transpose()?.unwrap_or(20);
            let t = is_local_contraction(&g).ok_or(Error::NotAContraction)?;
            let h = straighten_contraction(&g, &t)?;
            let equivariant = straightening_holds(&g, &h, &t, k)?;
            Ok(Report {
                text: json::to_string(&json!({
                    "window": r(&t),
                    "straightening": HomeoJson::from(&Homeomorphism::Tower(h)),
                    "checked_to": r(&pow2_neg(k)),
                    "equivariant": equivariant,
                })),
                passed: equivariant,
            })
        }
        Command::GermDecompose { target, contraction, depth } => {
            let gp = load_germ(target)?;
            let g = load_germ(contraction)?;
            let c = make_compatible_contraction(&gp, depth.unwrap_or(BASIS_DEPTH))?;
            let cert = decompose_via_contraction(&gp, &g)?;
            let verified = cert.verify()?;
            let factors: Vec<Json> = cert
                .factors
                .iter()
                .map(|f| {
                    json!({
                        "conjugator": HomeoJson::from(&f.conjugator),
                        "exponent": f.exponent,
                        "provenance": f.provenance,
                        "ambient_count": f.ambient_count,
                    })
                })
                .collect();
            Ok(Report {
                text: json::to_string(&json!({
                    "compatible_contraction": GermJson::from(&c),
                    "factors": factors,
                    "verified_to": r(&cert.verified_to),
                    "floor": r(&pow2_neg(cert.floor_exp)),
                    "ambient_conjugates": cert.ambient_conjugate_count(),
                    "verified": verified,
                })),
                passed: verified,
            })
        }
        Command::Certify { map, space, eps } => {
            let f = load_map(map)?;
            let model = args::space(space)?;
            let eps = single_eps(eps)?;
            let cert = certify_small_word(&f, &model, &eps)?;
            Ok(report(&CertificateJson::from(&cert)))
        }
        Command::Verify { certificate } => {
            let cert = match parse_value_file(certificate)? {
                Value::Certificate(c) => c,
                other => return Err(wrong_kind(certificate, "certificate", &other)),
            };
            let verdict = verify_certificate(&cert)?;
            let passed = verdict.passed();
            Ok(Report {
                text: json::to_string(&json!({"passed": passed, "checks": verdict.checks})),
                passed,
            })
        }
    }
}

/// `h(g(x)) = h(x)/2` on the dyadic shells of `(0, t]` down to `2^-k`.
fn straightening_holds(g: &GermMap, h: &SelfSimilarMap, t: &Q, k: u32) -> Result<bool, CliError> {
    for x in dyadic_shell_grid(t, k) {
        if h.eval(&g.eval(&x)?)? != h.eval(&x)? / qi(2) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn anderson(input: &Path, balls: &[String], at: Option<&str>, depth: Option<u32>) -> Result<Report, CliError> {
    let f = match parse_value_file(input)? {
        Value::Locality(inst) => {
            if !balls.is_empty() {
                return Err(CliError::Usage("--ball does not apply to a locality instance".into()));
            }
            let holds = commutator_locality_check(&inst)?;
            return Ok(Report {
                text: json::to_string(&json!({"locality": holds})),
                passed: holds,
            });
        }
        Value::Map(m) => m,
        other => return Err(wrong_kind(input, "map or locality instance", &other)),
    };
    let balls = balls.iter().map(|b| args::ball(b)).collect::<Result<Vec<_>, _>>()?;
    let (a, b) = match balls.as_slice() {
        [] => return Err(CliError::Usage("anderson needs at least one --ball".into())),
        [one] => anderson_factor(&f, one)?,
        many => {
            let m = multi_anderson(&f, many)?;
            (m.a, m.b)
        }
    };
    let a = match depth {
        Some(d) => a.with_depth_bound(d),
        None => a,
    };
    let (ha, hb) = (Homeomorphism::Tower(a), Homeomorphism::Pl(b.clone()));
    let verified = commutator_agrees(&f, &ha, &hb, &commutator_test_points(&f))?;
    let mut out = json!({
        "a": HomeoJson::from(&ha),
        "b": PlMapJson::from(&b),
        "verified": verified,
    });
    if let Some(x) = at {
        let x = args::rational(x)?;
        out["at"] = json!({
            "x": r(&x),
            "a": r(&ha.eval(&x)?),
            "b": r(&hb.eval(&x)?),
            "commutator": r(&commutator_eval(&ha, &hb, &x)?),
            "f": r(&f.eval(&x)?),
        });
    }
    Ok(Report {
        text: json::to_string(&out),
        passed: verified,
    })
}
