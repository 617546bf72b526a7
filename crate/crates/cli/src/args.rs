//! Argument grammar.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use homeo_core::cover::SpaceModel;
use homeo_core::json::{self, Rat, SpaceJson};
use homeo_core::pl_homeo::Arc;
use homeo_core::rational::parse_rational;
use homeo_core::Q;

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "homeo",
    version,
    about = "Exact computations with piecewise-linear homeomorphisms of the interval and the circle"
)]
pub struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compose maps left to right as f₁ ∘ f₂ ∘ …; with --at, also evaluate.
    Compose {
        #[arg(required = true)]
        maps: Vec<PathBuf>,
        #[arg(long)]
        at: Option<String>,
    },
    /// Inverse of a map.
    Invert { map: PathBuf },
    /// Uniform and complete distances between two maps.
    Distance { f: PathBuf, g: PathBuf },
    /// Support of a map as disjoint closed arcs.
    Support { map: PathBuf },
    /// Factor a map near the identity over an open cover.
    Fragment { map: PathBuf, cover: PathBuf },
    /// Write a map supported in disjoint balls as one commutator, or check
    /// a locality instance.
    Anderson {
        /// A map file, or a locality instance file.
        input: PathBuf,
        /// Open ball `start,end`; repeat for several balls.
        #[arg(long, allow_hyphen_values = true)]
        ball: Vec<String>,
        /// Evaluate the commutator factors at this point.
        #[arg(long)]
        at: Option<String>,
        /// Descent bound for the tower.
        #[arg(long)]
        depth: Option<u32>,
    },
    /// Greedy ε-net on a sampled space.
    Net(SpaceArgs),
    /// ε-net, dual graph and greedy colouring.
    Cover(SpaceArgs),
    /// Dual-graph degrees across a decreasing list of scales.
    Scan(SpaceArgs),
    /// Straighten a contraction germ; with a second germ, conjugate the two;
    /// with --basis, build the contraction from a basis-contracting map.
    GermStraighten {
        germ: PathBuf,
        other: Option<PathBuf>,
        #[arg(long)]
        basis: bool,
        /// Levels for --basis.
        #[arg(long)]
        depth: Option<u32>,
        /// Finest dyadic scale `2^-k` of the equivariance check.
        #[arg(long)]
        grid: Option<String>,
    },
    /// Write a germ as a product of two conjugates of a contraction.
    GermDecompose {
        target: PathBuf,
        contraction: PathBuf,
        /// Levels of the compatible contraction.
        #[arg(long)]
        depth: Option<u32>,
    },
    /// Build a verified short-word certificate for a circle map.
    Certify {
        map: PathBuf,
        #[arg(long, default_value = "circle:1")]
        space: String,
        #[arg(long)]
        eps: String,
    },
    /// Re-check a certificate.
    Verify { certificate: PathBuf },
}

#[derive(Debug, clap::Args)]
pub struct SpaceArgs {
    /// `circle:L`, `torus:a,b` or `matrix:path`.
    #[arg(long)]
    pub space: String,
    /// Scale, or comma-separated scales for `scan`.
    #[arg(long)]
    pub eps: String,
    /// Sample spacing, e.g. `2^-8`; defaults to the coarsest grid finer than ε/8.
    #[arg(long)]
    pub grid: Option<String>,
}

pub fn rational(s: &str) -> Result<Q, CliError> {
    parse_rational(s).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn rational_list(s: &str) -> Result<Vec<Q>, CliError> {
    s.split(',').map(rational).collect()
}

pub fn ball(s: &str) -> Result<Arc, CliError> {
    let xs = rational_list(s)?;
    match xs.as_slice() {
        [a, b] if a < b => Ok(Arc::new(a.clone(), b.clone())),
        _ => Err(CliError::Usage(format!("--ball expects `start,end` with start < end, got `{s}`"))),
    }
}

/// `2^-k` as `k`.
pub fn dyadic_exponent(s: &str) -> Result<u32, CliError> {
    s.trim()
        .strip_prefix("2^-")
        .and_then(|k| k.parse().ok())
        .ok_or_else(|| CliError::Usage(format!("--grid expects `2^-k`, got `{s}`")))
}

pub fn space(s: &str) -> Result<SpaceModel, CliError> {
    let (kind, rest) = s
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("--space expects `kind:parameters`, got `{s}`")))?;
    match kind {
        "circle" => Ok(SpaceModel::CircleLength(rational(rest)?)),
        "torus" => match rational_list(rest)?.as_slice() {
            [a, b] => Ok(SpaceModel::FlatTorus(a.clone(), b.clone())),
            _ => Err(CliError::Usage(format!("torus expects `a,b`, got `{rest}`"))),
        },
        "matrix" => {
            let text = std::fs::read_to_string(rest).map_err(|e| CliError::Io(format!("{rest}: {e}")))?;
            let wrap = |e: homeo_core::Error| CliError::Value {
                path: rest.to_string(),
                source: e,
            };
            if let Ok(rows) = json::from_str::<Vec<Vec<Rat>>>(&text) {
                return Ok(SpaceModel::ExplicitMetric(
                    rows.into_iter().map(|r| r.into_iter().map(|x| x.0).collect()).collect(),
                ));
            }
            Ok(json::from_str::<SpaceJson>(&text).map_err(wrap)?.into())
        }
        other => Err(CliError::Usage(format!("unknown space kind `{other}`"))),
    }
}
