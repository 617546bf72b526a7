//! ε-nets on sampled compact metric spaces, their dual graphs, greedy
//! colourings, and the resulting efficient covers: classes `E_1, …, E_m` of
//! pairwise disjoint ε-balls with `m` bounded independently of ε.
//!
//! Analytic models are sampled on a regular grid whose spacing is at most
//! `ε/8`, and all distance comparisons are exact. On the torus distances are
//! square roots, so they are compared through their squares in integer
//! arithmetic.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, qi, zero, Q};

/// The metric space being sampled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceModel {
    /// A circle of circumference `L` with arc-length distance.
    CircleLength(Q),
    /// The flat torus `R/aZ × R/bZ`.
    FlatTorus(Q, Q),
    /// Finitely many points with an explicit distance matrix.
    ExplicitMetric(Vec<Vec<Q>>),
}

/// A model together with its finite sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampledSpace {
    model: SpaceModel,
    /// Grid points per axis (circle: one axis; explicit: unused).
    grid: Vec<u64>,
}

impl SampledSpace {
    /// Circle of length `length` sampled at `n` equally spaced points.
    pub fn circle(length: Q, n: u64) -> Result<Self> {
        if length <= zero() || n == 0 {
            return Err(Error::InvariantViolation("circle needs positive length and samples".into()));
        }
        Ok(SampledSpace {
            model: SpaceModel::CircleLength(length),
            grid: vec![n],
        })
    }

    /// Flat torus sampled on an `na × nb` grid.
    pub fn torus(a: Q, b: Q, na: u64, nb: u64) -> Result<Self> {
        if a <= zero() || b <= zero() || na == 0 || nb == 0 {
            return Err(Error::InvariantViolation("torus needs positive sides and samples".into()));
        }
        Ok(SampledSpace {
            model: SpaceModel::FlatTorus(a, b),
            grid: vec![na, nb],
        })
    }

    /// Explicit finite metric; the metric axioms are checked exactly.
    pub fn explicit(dist: Vec<Vec<Q>>) -> Result<Self> {
        let n = dist.len();
        if n == 0 {
            return Err(Error::InvariantViolation("empty distance matrix".into()));
        }
        for (i, row) in dist.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvariantViolation(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            if !row[i].is_zero() {
                return Err(Error::InvariantViolation(format!("dist[{i}][{i}] is not 0")));
            }
            for j in 0..n {
                if dist[j][i] != row[j] {
                    return Err(Error::InvariantViolation(format!("dist[{i}][{j}] != dist[{j}][{i}]")));
                }
                if i != j && row[j] <= zero() {
                    return Err(Error::InvariantViolation(format!("dist[{i}][{j}] is not positive")));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if dist[i][k] > &dist[i][j] + &dist[j][k] {
                        return Err(Error::InvariantViolation(format!(
                            "triangle inequality fails for ({i}, {j}, {k})"
                        )));
                    }
                }
            }
        }
        Ok(SampledSpace {
            model: SpaceModel::ExplicitMetric(dist),
            grid: Vec::new(),
        })
    }

    /// The default sample for nets at scale `eps`: the coarsest grid with
    /// spacing at most `eps/8` on which `eps` is a whole number of steps.
    pub fn for_epsilon(model: SpaceModel, eps: &Q) -> Result<Self> {
        if eps <= &zero() {
            return Err(Error::InvariantViolation("epsilon must be positive".into()));
        }
        let axis = |len: &Q| -> Result<u64> {
            let ratio = len / eps;
            let step = ratio.numer().clone();
            let need = (qi(8) * &ratio).ceil().to_integer();
            let n = need.div_ceil(&step) * &step;
            n.to_u64()
                .ok_or_else(|| Error::InvariantViolation("sample grid too large".into()))
        };
        match model {
            SpaceModel::CircleLength(l) => {
                let n = axis(&l)?;
                Self::circle(l, n)
            }
            SpaceModel::FlatTorus(a, b) => {
                let (na, nb) = (axis(&a)?, axis(&b)?);
                Self::torus(a, b, na, nb)
            }
            SpaceModel::ExplicitMetric(d) => Self::explicit(d),
        }
    }

    pub fn model(&self) -> &SpaceModel {
        &self.model
    }

    pub fn len(&self) -> usize {
        match &self.model {
            SpaceModel::ExplicitMetric(d) => d.len(),
            _ => self.grid.iter().product::<u64>() as usize,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid spacing (largest over the axes); `None` for explicit metrics.
    pub fn resolution(&self) -> Option<Q> {
        match &self.model {
            SpaceModel::CircleLength(l) => Some(l / qi(self.grid[0] as i64)),
            SpaceModel::FlatTorus(a, b) => {
                let ha = a / qi(self.grid[0] as i64);
                let hb = b / qi(self.grid[1] as i64);
                Some(if ha > hb { ha } else { hb })
            }
            SpaceModel::ExplicitMetric(_) => None,
        }
    }

    /// Coordinates of sample point `i` (its index for explicit metrics).
    pub fn coords(&self, i: usize) -> Vec<Q> {
        match &self.model {
            SpaceModel::CircleLength(l) => vec![l * qi(i as i64) / qi(self.grid[0] as i64)],
            SpaceModel::FlatTorus(a, b) => {
                let nb = self.grid[1] as usize;
                vec![
                    a * qi((i / nb) as i64) / qi(self.grid[0] as i64),
                    b * qi((i % nb) as i64) / qi(nb as i64),
                ]
            }
            SpaceModel::ExplicitMetric(_) => vec![qi(i as i64)],
        }
    }

    /// Squared distance between sample points.
    pub fn dist_squared(&self, i: usize, j: usize) -> Q {
        match &self.model {
            SpaceModel::CircleLength(_) => {
                let d = self.circle_steps(i, j);
                let h = self.resolution().expect("grid");
                let x = h * qi(d as i64);
                &x * &x
            }
            SpaceModel::FlatTorus(a, b) => {
                let (dx, dy) = self.torus_steps(i, j);
                let ha = a / qi(self.grid[0] as i64);
                let hb = b / qi(self.grid[1] as i64);
                let x = ha * qi(dx as i64);
                let y = hb * qi(dy as i64);
                &x * &x + &y * &y
            }
            SpaceModel::ExplicitMetric(d) => &d[i][j] * &d[i][j],
        }
    }

    /// Exact distance where it is rational (circle and explicit metrics).
    pub fn dist(&self, i: usize, j: usize) -> Option<Q> {
        match &self.model {
            SpaceModel::CircleLength(_) => {
                Some(self.resolution().expect("grid") * qi(self.circle_steps(i, j) as i64))
            }
            SpaceModel::FlatTorus(..) => None,
            SpaceModel::ExplicitMetric(d) => Some(d[i][j].clone()),
        }
    }

    fn circle_steps(&self, i: usize, j: usize) -> u64 {
        let n = self.grid[0];
        let d = (i as i64 - j as i64).unsigned_abs();
        d.min(n - d)
    }

    fn torus_steps(&self, i: usize, j: usize) -> (u64, u64) {
        let (na, nb) = (self.grid[0], self.grid[1]);
        let nbu = nb as usize;
        let dx = ((i / nbu) as i64 - (j / nbu) as i64).unsigned_abs();
        let dy = ((i % nbu) as i64 - (j % nbu) as i64).unsigned_abs();
        (dx.min(na - dx), dy.min(nb - dy))
    }

    /// A comparator of distances against the fixed radius `r`.
    fn radius(&self, r: &Q) -> Radius<'_> {
        let kind = match &self.model {
            SpaceModel::CircleLength(_) => {
                // steps·h < r  ⇔  steps·num(h)·den(r) < num(r)·den(h)
                let h = self.resolution().expect("grid");
                RadiusKind::Circle {
                    lhs: to_i128(&(h.numer() * r.denom())),
                    rhs: to_i128(&(r.numer() * h.denom())),
                }
            }
            SpaceModel::FlatTorus(a, b) => {
                let ha = a / qi(self.grid[0] as i64);
                let hb = b / qi(self.grid[1] as i64);
                let (ha2, hb2, r2) = (&ha * &ha, &hb * &hb, r * r);
                let den = ha2.denom().lcm(hb2.denom()).lcm(r2.denom());
                let scale = |x: &Q| to_i128(&(x.numer() * (&den / x.denom())));
                RadiusKind::Torus {
                    a: scale(&ha2),
                    b: scale(&hb2),
                    c: scale(&r2),
                }
            }
            SpaceModel::ExplicitMetric(_) => RadiusKind::Explicit(r.clone()),
        };
        Radius { space: self, kind }
    }
}

fn to_i128(x: &BigInt) -> i128 {
    x.to_i128().expect("grid constants fit in 128 bits")
}

enum RadiusKind {
    Circle { lhs: i128, rhs: i128 },
    Torus { a: i128, b: i128, c: i128 },
    Explicit(Q),
}

struct Radius<'a> {
    space: &'a SampledSpace,
    kind: RadiusKind,
}

impl Radius<'_> {
    /// `dist(i, j)` compared with the radius.
    fn cmp(&self, i: usize, j: usize) -> Ordering {
        match &self.kind {
            RadiusKind::Circle { lhs, rhs } => {
                (self.space.circle_steps(i, j) as i128 * lhs).cmp(rhs)
            }
            RadiusKind::Torus { a, b, c } => {
                let (dx, dy) = self.space.torus_steps(i, j);
                let (dx, dy) = (dx as i128, dy as i128);
                (dx * dx * a + dy * dy * b).cmp(c)
            }
            RadiusKind::Explicit(r) => match &self.space.model {
                SpaceModel::ExplicitMetric(d) => d[i][j].cmp(r),
                _ => unreachable!(),
            },
        }
    }
}

/// Centres of an ε-net, as sample indices in admission order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetCover {
    #[serde(with = "crate::json::q_serde")]
    pub epsilon: Q,
    pub centers: Vec<usize>,
}

fn check_resolution(space: &SampledSpace, eps: &Q) -> Result<()> {
    if eps <= &zero() {
        return Err(Error::InvariantViolation("epsilon must be positive".into()));
    }
    if let Some(h) = space.resolution() {
        let limit = eps / qi(8);
        if h > limit {
            return Err(Error::ResolutionTooCoarse {
                resolution: fmt_q(&h),
                limit: fmt_q(&limit),
            });
        }
    }
    Ok(())
}

/// Greedy ε-net: scans the sample in grid order and admits a point iff it is
/// at distance at least ε from every centre admitted so far.
pub fn build_epsilon_net(space: &SampledSpace, eps: &Q) -> Result<NetCover> {
    check_resolution(space, eps)?;
    let r = space.radius(eps);
    let mut centers: Vec<usize> = Vec::new();
    for i in 0..space.len() {
        if centers.iter().all(|&c| r.cmp(i, c) != Ordering::Less) {
            centers.push(i);
        }
    }
    Ok(NetCover {
        epsilon: eps.clone(),
        centers,
    })
}

/// Both net conditions at sample resolution: centres pairwise at least ε
/// apart, and every sample point strictly within ε of a centre.
pub fn check_net(space: &SampledSpace, net: &NetCover) -> bool {
    let r = space.radius(&net.epsilon);
    let separated = net.centers.iter().enumerate().all(|(k, &c)| {
        net.centers[k + 1..]
            .iter()
            .all(|&d| r.cmp(c, d) != Ordering::Less)
    });
    separated
        && (0..space.len()).all(|i| net.centers.iter().any(|&c| r.cmp(i, c) == Ordering::Less))
}

/// Intersection graph of the open ε-balls around the net centres; vertices
/// are positions in `net.centers`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    pub adjacency: Vec<Vec<usize>>,
}

impl Graph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for a in adjacency.iter_mut() {
            a.sort_unstable();
            a.dedup();
        }
        Graph { adjacency }
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }
}

/// Edge between two centres iff their distance is strictly below `2ε`.
pub fn dual_graph(space: &SampledSpace, net: &NetCover) -> Graph {
    let r = space.radius(&(&net.epsilon * qi(2)));
    let n = net.centers.len();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if r.cmp(net.centers[u], net.centers[v]) == Ordering::Less {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

/// Greedy colouring in vertex order: each vertex takes the least colour not
/// used by an already coloured neighbour. Colours start at `0`.
pub fn greedy_color(graph: &Graph) -> Vec<usize> {
    let mut colors: Vec<Option<usize>> = vec![None; graph.len()];
    for v in 0..graph.len() {
        let mut used: Vec<usize> = graph.adjacency[v].iter().filter_map(|&u| colors[u]).collect();
        used.sort_unstable();
        used.dedup();
        let c = used.iter().enumerate().find(|(k, &c)| *k != c).map_or(used.len(), |(k, _)| k);
        colors[v] = Some(c);
    }
    colors.into_iter().map(|c| c.expect("coloured")).collect()
}

/// No edge joins two vertices of the same colour.
pub fn is_proper(graph: &Graph, colors: &[usize]) -> bool {
    graph.edges().all(|(u, v)| colors[u] != colors[v])
}

/// An ε-net whose balls are split into `m` classes of pairwise disjoint
/// balls.
///
/// `m` is the degree bound `max_degree + 1` that the greedy colouring is
/// guaranteed to respect; classes beyond the colours actually used are
/// empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredCover {
    pub net: NetCover,
    pub colors: Vec<usize>,
    pub m: usize,
}

impl ColoredCover {
    /// Number of colours the greedy colouring used.
    pub fn colors_used(&self) -> usize {
        self.colors.iter().max().map_or(0, |c| c + 1)
    }

    /// Sample indices of the centres of class `i`.
    pub fn class(&self, i: usize) -> Vec<usize> {
        self.net
            .centers
            .iter()
            .zip(&self.colors)
            .filter(|(_, &c)| c == i)
            .map(|(&x, _)| x)
            .collect()
    }
}

/// Net, dual graph and greedy colouring; all cover invariants are checked.
pub fn efficient_cover(space: &SampledSpace, eps: &Q) -> Result<ColoredCover> {
    let net = build_epsilon_net(space, eps)?;
    let graph = dual_graph(space, &net);
    let colors = greedy_color(&graph);
    let cover = ColoredCover {
        m: graph.max_degree() + 1,
        net,
        colors,
    };
    if !is_proper(&graph, &cover.colors) || cover.colors_used() > cover.m {
        return Err(Error::InvariantViolation("greedy colouring is not proper".into()));
    }
    Ok(cover)
}

/// Every pair of same-coloured centres is at distance at least `2ε`.
pub fn same_color_disjoint(space: &SampledSpace, cover: &ColoredCover) -> bool {
    let r = space.radius(&(&cover.net.epsilon * qi(2)));
    let cs = &cover.net.centers;
    (0..cs.len()).all(|u| {
        (u + 1..cs.len())
            .all(|v| cover.colors[u] != cover.colors[v] || r.cmp(cs[u], cs[v]) != Ordering::Less)
    })
}

/// One row of a [`ScanReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    #[serde(with = "crate::json::q_serde")]
    pub epsilon: Q,
    #[serde(with = "crate::json::opt_q_serde")]
    pub resolution: Option<Q>,
    pub centers: usize,
    pub max_degree: usize,
    pub colors_used: usize,
    pub m: usize,
}

/// Degrees and colour counts across a decreasing list of scales.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
    /// Packing bound `5^dim - 1` on the degree (`None` for explicit metrics).
    pub packing_bound: Option<usize>,
    /// The volume ratio `vol B(2ε) / vol B(ε/2) = 4^dim`.
    pub volume_ratio: Option<usize>,
    pub max_degree_constant: bool,
    pub within_packing_bound: bool,
}

impl ScanReport {
    pub fn max_degree(&self) -> usize {
        self.rows.iter().map(|r| r.max_degree).max().unwrap_or(0)
    }
}

/// Runs [`efficient_cover`] at every scale, using the default sample for
/// each, and tabulates the dual-graph degrees.
pub fn degree_stability_scan(model: &SpaceModel, eps_list: &[Q]) -> Result<ScanReport> {
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::PreconditionViolated("epsilon list must be strictly decreasing".into()));
    }
    let mut rows = Vec::with_capacity(eps_list.len());
    for eps in eps_list {
        let space = SampledSpace::for_epsilon(model.clone(), eps)?;
        rows.push(scan_row(&space, eps)?);
    }
    Ok(report(model, rows))
}

/// Like [`degree_stability_scan`] with one fixed sample for every scale.
pub fn degree_stability_scan_on(space: &SampledSpace, eps_list: &[Q]) -> Result<ScanReport> {
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::PreconditionViolated("epsilon list must be strictly decreasing".into()));
    }
    let rows = eps_list
        .iter()
        .map(|eps| scan_row(space, eps))
        .collect::<Result<Vec<_>>>()?;
    Ok(report(space.model(), rows))
}

/// One row of the scan on an already sampled space.
pub fn scan_row(space: &SampledSpace, eps: &Q) -> Result<ScanRow> {
    let cover = efficient_cover(space, eps)?;
    let graph = dual_graph(space, &cover.net);
    Ok(ScanRow {
        epsilon: eps.clone(),
        resolution: space.resolution(),
        centers: cover.net.centers.len(),
        max_degree: graph.max_degree(),
        colors_used: cover.colors_used(),
        m: cover.m,
    })
}

fn report(model: &SpaceModel, rows: Vec<ScanRow>) -> ScanReport {
    let dim = match model {
        SpaceModel::CircleLength(_) => Some(1),
        SpaceModel::FlatTorus(..) => Some(2),
        SpaceModel::ExplicitMetric(_) => None,
    };
    let packing_bound = dim.map(|d| 5usize.pow(d) - 1);
    let volume_ratio = dim.map(|d| 4usize.pow(d));
    let max_degree_constant = rows.windows(2).all(|w| w[0].max_degree == w[1].max_degree);
    let within_packing_bound = packing_bound.is_none_or(|b| rows.iter().all(|r| r.max_degree <= b));
    ScanReport {
        rows,
        packing_bound,
        volume_ratio,
        max_degree_constant,
        within_packing_bound,
    }
}
