//! Seeded generators shared by the integration tests.

#![allow(dead_code)]

use homeo_core::fragmentation::OpenCover1D;
use homeo_core::germs::GermMap;
use homeo_core::pl_homeo::Arc;
use homeo_core::rational::{one, q, qi, zero};
use homeo_core::{Domain, PLMap, Q};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

const DENOMINATORS: [i64; 5] = [4096, 3000, 2187, 1000, 1536];

/// `k / den` with `k` uniform in `(lo·den, hi·den)`, ends excluded.
pub fn rand_q(rng: &mut TestRng, lo: &Q, hi: &Q, den: i64) -> Q {
    let a = (lo * qi(den)).floor().to_integer();
    let b = (hi * qi(den)).ceil().to_integer();
    let a: i64 = a.try_into().unwrap();
    let b: i64 = b.try_into().unwrap();
    assert!(b - a >= 2, "range too narrow for denominator {den}");
    q(rng.gen_range(a + 1..b), den)
}

/// `n` distinct sorted points of `(lo, hi)` with denominator `den`.
pub fn sorted_distinct(rng: &mut TestRng, n: usize, lo: &Q, hi: &Q, den: i64) -> Vec<Q> {
    let mut v: Vec<Q> = Vec::with_capacity(n);
    while v.len() < n {
        let x = rand_q(rng, lo, hi, den);
        if !v.contains(&x) {
            v.push(x);
        }
    }
    v.sort();
    v
}

fn denominator(rng: &mut TestRng) -> i64 {
    *DENOMINATORS.choose(rng).unwrap()
}

/// A random interval map with up to `max_inner` interior knots.
pub fn interval_map_with(rng: &mut TestRng, max_inner: usize, den: i64) -> PLMap {
    let n = rng.gen_range(0..=max_inner);
    let mut xs = vec![zero()];
    xs.extend(sorted_distinct(rng, n, &zero(), &one(), den));
    xs.push(one());
    let mut ys = vec![zero()];
    let den_y = denominator(rng);
    ys.extend(sorted_distinct(rng, n, &zero(), &one(), den_y));
    ys.push(one());
    PLMap::new(Domain::Interval, xs, ys).unwrap()
}

/// A random circle map with between 1 and `max_knots` knots.
pub fn circle_map_with(rng: &mut TestRng, max_knots: usize, den: i64) -> PLMap {
    let n = rng.gen_range(1..=max_knots);
    let xs = sorted_distinct(rng, n, &q(-1, den), &one(), den);
    let v0 = rand_q(rng, &q(-1, 1000), &one(), 1000);
    let mut ys = vec![v0.clone()];
    let den_y = denominator(rng);
    ys.extend(sorted_distinct(rng, n - 1, &v0, &(&v0 + one()), den_y));
    PLMap::new(Domain::Circle, xs, ys).unwrap()
}

pub fn random_map(rng: &mut TestRng, domain: Domain) -> PLMap {
    let den = denominator(rng);
    match domain {
        Domain::Interval => interval_map_with(rng, 6, den),
        Domain::Circle => circle_map_with(rng, 6, den),
    }
}

pub fn random_domain(rng: &mut TestRng) -> Domain {
    if rng.gen_bool(0.5) {
        Domain::Interval
    } else {
        Domain::Circle
    }
}

/// A map with `d(f, id) < bound`: knots are moved by less than `bound` and
/// the moved values are paired with the knots in sorted order, which keeps
/// the pointwise bound.
pub fn near_identity(rng: &mut TestRng, domain: Domain, bound: &Q) -> PLMap {
    let den = 1 << 14;
    loop {
        let n = rng.gen_range(1..=6);
        let xs = match domain {
            Domain::Interval => sorted_distinct(rng, n, &zero(), &one(), den),
            Domain::Circle => sorted_distinct(rng, n, &q(-1, den), &one(), den),
        };
        let mut ys: Vec<Q> = xs
            .iter()
            .map(|x| {
                let b = bound * q(999, 1000);
                let d = &b * q(rng.gen_range(-1000..=1000), 1000);
                x + d
            })
            .collect();
        ys.sort();
        ys.dedup();
        if ys.len() != xs.len() {
            continue;
        }
        let map = match domain {
            Domain::Interval => {
                if ys[0] <= zero() || ys[n - 1] >= one() {
                    continue;
                }
                let mut k = vec![zero()];
                k.extend(xs);
                k.push(one());
                let mut v = vec![zero()];
                v.extend(ys);
                v.push(one());
                PLMap::new(domain, k, v)
            }
            Domain::Circle => PLMap::new(domain, xs, ys),
        };
        if let Ok(m) = map {
            return m;
        }
    }
}

/// Random arc of length in `[min_len, max_len]`; on the interval it lies
/// inside `(0, 1)`.
pub fn random_arc(rng: &mut TestRng, domain: Domain, min_len: &Q, max_len: &Q) -> Arc {
    let len = rand_q(rng, min_len, max_len, 1000);
    let start = match domain {
        Domain::Interval => rand_q(rng, &zero(), &(one() - &len), 1000),
        Domain::Circle => rand_q(rng, &q(-1, 1000), &one(), 1000),
    };
    let end = &start + len;
    Arc::new(start, end)
}

/// A random bump whose closed support lies inside the open arc.
pub fn bump_in(rng: &mut TestRng, domain: Domain, arc: &Arc) -> PLMap {
    let w = arc.length();
    let den = 1 << 16;
    let pts = sorted_distinct(rng, 2, &arc.start, &arc.end, den);
    let (s, t) = (pts[0].clone(), pts[1].clone());
    if &t - &s < &w / qi(50) {
        return bump_in(rng, domain, arc);
    }
    let n = rng.gen_range(1..=3);
    let xs = sorted_distinct(rng, n, &s, &t, den);
    let ys = sorted_distinct(rng, n, &s, &t, den);
    let points = xs.into_iter().zip(ys).collect();
    PLMap::bump(domain, &s, &t, points).unwrap()
}

/// A cover by `k` single arcs forming a chain with random overlaps, listed
/// in shuffled order.
pub fn chain_cover(rng: &mut TestRng, domain: Domain, k: usize) -> OpenCover1D {
    let mut arcs = Vec::with_capacity(k);
    match domain {
        Domain::Circle => {
            let cuts = loop {
                let c = sorted_distinct(rng, k, &zero(), &one(), 1000);
                let mut gaps: Vec<Q> = c.windows(2).map(|w| &w[1] - &w[0]).collect();
                gaps.push(&c[0] + one() - &c[k - 1]);
                if gaps.iter().all(|g| g >= &q(1, 20)) {
                    break c;
                }
            };
            for i in 0..k {
                let next = if i + 1 < k { cuts[i + 1].clone() } else { &cuts[0] + one() };
                let prev = if i > 0 { cuts[i - 1].clone() } else { &cuts[k - 1] - one() };
                let lo = &cuts[i] - rand_q(rng, &q(1, 200), &((&cuts[i] - &prev) / qi(3)), 1 << 12);
                let after = if i + 2 < k {
                    cuts[i + 2].clone()
                } else {
                    &cuts[(i + 2) % k] + one()
                };
                let hi = &next + rand_q(rng, &q(1, 200), &((&after - &next) / qi(3)), 1 << 12);
                arcs.push(Arc::new(lo, hi));
            }
        }
        Domain::Interval => {
            let cuts = loop {
                let c = sorted_distinct(rng, k - 1, &zero(), &one(), 1000);
                let mut all = vec![zero()];
                all.extend(c.iter().cloned());
                all.push(one());
                if all.windows(2).all(|w| &w[1] - &w[0] >= q(1, 20)) {
                    break all;
                }
            };
            for i in 0..k {
                let lo = if i == 0 {
                    qi(-1)
                } else {
                    &cuts[i] - rand_q(rng, &q(1, 200), &((&cuts[i] - &cuts[i - 1]) / qi(3)), 1 << 12)
                };
                let hi = if i + 1 == k {
                    qi(2)
                } else {
                    &cuts[i + 1] + rand_q(rng, &q(1, 200), &((&cuts[i + 2] - &cuts[i + 1]) / qi(3)), 1 << 12)
                };
                arcs.push(Arc::new(lo, hi));
            }
        }
    }
    arcs.shuffle(rng);
    OpenCover1D::new(domain, arcs.into_iter().map(|a| vec![a]).collect()).unwrap()
}

/// A random PL contraction at `0` defined on `[0, 1]`.
pub fn random_contraction(rng: &mut TestRng) -> GermMap {
    let n = rng.gen_range(1..=5);
    let mut xs = sorted_distinct(rng, n, &zero(), &one(), 1 << 10);
    xs.push(one());
    let ys: Vec<Q> = loop {
        let mut ys: Vec<Q> = xs
            .iter()
            .map(|x| x * q(rng.gen_range(100..950), 1000))
            .collect();
        ys.sort();
        ys.dedup();
        if ys.len() == xs.len() {
            break ys;
        }
    };
    let mut pts = vec![(zero(), zero())];
    pts.extend(xs.into_iter().zip(ys));
    GermMap::from_points(pts).unwrap()
}

/// `f(2^{-n}) < 2^{-n}` at every dyadic level, but `f` may rise above the
/// identity between levels.
pub fn random_basis_contracting(rng: &mut TestRng, levels: u32) -> GermMap {
    let mut pts = vec![(zero(), zero())];
    for n in 0..=levels {
        let p = homeo_core::rational::pow2_neg(n);
        let s = q(rng.gen_range(560..990), 1000);
        let y = &p * &s;
        if s > q(3, 4) && rng.gen_bool(0.5) {
            // A point above the diagonal inside the shell.
            let x = &p * q(5, 8);
            let lo = max_q(&x, &(&p * q(1, 2)));
            let yx = &lo + (&y - &lo) * q(rng.gen_range(1..99), 100);
            if yx > x && yx < y {
                pts.push((x, yx));
            }
        }
        pts.push((p, y));
    }
    GermMap::from_points(pts).unwrap()
}

fn max_q(a: &Q, b: &Q) -> Q {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// A germ at `0` that need not contract: slopes anywhere in `[1/4, 4]`.
pub fn random_germ(rng: &mut TestRng) -> GermMap {
    let n = rng.gen_range(1..=5);
    let xs = sorted_distinct(rng, n, &zero(), &q(1, 4), 1 << 12);
    let mut pts = vec![(zero(), zero())];
    let mut prev = (zero(), zero());
    for x in xs {
        let slope = q(rng.gen_range(250..=4000), 1000);
        let y = &prev.1 + (&x - &prev.0) * slope;
        pts.push((x.clone(), y.clone()));
        prev = (x, y);
    }
    if prev.1 > one() {
        return random_germ(rng);
    }
    GermMap::from_points(pts).unwrap()
}

/// Proptest strategies built from small integers, so failures shrink to
/// short knot lists.
pub mod strategies {
    use super::*;
    use proptest::collection::btree_set;
    use proptest::prelude::*;

    const DEN: i64 = 4096;

    fn grid(k: &u32) -> Q {
        q(i64::from(*k), DEN)
    }

    pub fn interval_map() -> impl Strategy<Value = PLMap> {
        (0usize..6)
            .prop_flat_map(|n| (btree_set(1u32..4096, n), btree_set(1u32..4096, n)))
            .prop_map(|(ks, vs)| {
                let mut xs = vec![zero()];
                xs.extend(ks.iter().map(grid));
                xs.push(one());
                let mut ys = vec![zero()];
                ys.extend(vs.iter().map(grid));
                ys.push(one());
                PLMap::new(Domain::Interval, xs, ys).unwrap()
            })
    }

    pub fn circle_map() -> impl Strategy<Value = PLMap> {
        (1usize..6)
            .prop_flat_map(|n| (btree_set(0u32..4096, n), 0u32..4096, btree_set(1u32..4096, n - 1)))
            .prop_map(|(ks, v0, vs)| {
                let xs: Vec<Q> = ks.iter().map(grid).collect();
                let base = grid(&v0);
                let mut ys = vec![base.clone()];
                ys.extend(vs.iter().map(|v| &base + grid(v)));
                PLMap::new(Domain::Circle, xs, ys).unwrap()
            })
    }

    pub fn map_on(domain: Domain) -> BoxedStrategy<PLMap> {
        match domain {
            Domain::Interval => interval_map().boxed(),
            Domain::Circle => circle_map().boxed(),
        }
    }

    pub fn domain() -> impl Strategy<Value = Domain> {
        prop_oneof![Just(Domain::Interval), Just(Domain::Circle)]
    }

    /// Three maps on a common domain.
    pub fn triple() -> impl Strategy<Value = (PLMap, PLMap, PLMap)> {
        domain().prop_flat_map(|d| (map_on(d), map_on(d), map_on(d)))
    }

    /// A point of `[0, 1]` on the `2^{-12}` grid or with denominator 3^7.
    pub fn point() -> impl Strategy<Value = Q> {
        prop_oneof![(0i64..=4096).prop_map(|k| q(k, 4096)), (0i64..=2187).prop_map(|k| q(k, 2187))]
    }
}
