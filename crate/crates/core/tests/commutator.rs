//! Anderson towers, multi-ball factorisations and locality.

mod common;

use common::*;
use homeo_core::commutator::{
    anderson_factor, build_translator, commutator_agrees, commutator_eval, multi_anderson,
    restrict_to_ball,
};
use homeo_core::pl_homeo::{same_point, support, Arc};
use homeo_core::rational::{dyadic_grid, q, qi};
use homeo_core::{Domain, Error, Homeomorphism, PLMap, SelfSimilarMap, Q};
use proptest::prelude::*;
use rand::Rng;

/// `k` pairwise disjoint balls, one in each of `k` equal slices.
fn disjoint_balls(rng: &mut TestRng, k: usize) -> Vec<Arc> {
    (0..k)
        .map(|i| {
            let lo = q(i as i64, k as i64) + q(1, 1000);
            let hi = q(i as i64 + 1, k as i64) - q(1, 1000);
            let pts = sorted_distinct(rng, 2, &lo, &hi, 1000);
            if &pts[1] - &pts[0] < q(1, 50) {
                Arc::new(lo, hi)
            } else {
                Arc::new(pts[0].clone(), pts[1].clone())
            }
        })
        .collect()
}

fn points_in_support(f: &PLMap) -> Vec<Q> {
    let s = support(f);
    let mut pts: Vec<Q> = dyadic_grid(10).into_iter().filter(|x| s.contains(x)).collect();
    pts.extend(f.knots().iter().filter(|x| s.contains(x)).cloned());
    pts
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn tower_repeats_f_on_translates(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let domain = random_domain(&mut rng);
        let ball = random_arc(&mut rng, domain, &q(1, 10), &q(1, 2));
        let f = bump_in(&mut rng, domain, &ball);
        let (a, b) = anderson_factor(&f, &ball).unwrap();
        for y in points_in_support(&f) {
            let (mut x, mut fx) = (y.clone(), f.eval(&y).unwrap());
            for _ in 0..6 {
                prop_assert!(same_point(domain, &a.eval(&x).unwrap(), &fx));
                x = b.eval(&x).unwrap();
                fx = b.eval(&fx).unwrap();
            }
        }
    }

    #[test]
    fn factors_stay_in_the_ball(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let domain = random_domain(&mut rng);
        let ball = random_arc(&mut rng, domain, &q(1, 10), &q(1, 2));
        let f = bump_in(&mut rng, domain, &ball);
        let (a, b) = anderson_factor(&f, &ball).unwrap();
        prop_assert!(support(&b).inside_open(std::slice::from_ref(&ball)));
        for r in a.tower_regions() {
            prop_assert!(r.closed_inside_open(&ball, domain));
        }
        for x in dyadic_grid(9) {
            if !ball.open_contains(&x, domain) {
                prop_assert_eq!(a.eval(&x).unwrap(), x);
            }
        }
    }

    #[test]
    fn commutator_reproduces_f(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let domain = random_domain(&mut rng);
        let ball = random_arc(&mut rng, domain, &q(1, 10), &q(1, 2));
        let f = bump_in(&mut rng, domain, &ball);
        let (a, b) = anderson_factor(&f, &ball).unwrap();
        let mut pts = dyadic_grid(9);
        pts.extend(f.knots().iter().cloned());
        prop_assert!(commutator_agrees(&f, &a.into(), &b.into(), &pts).unwrap());
    }

    #[test]
    fn per_ball_factors_commute(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let domain = random_domain(&mut rng);
        let k = rng.gen_range(2..=3);
        let balls = disjoint_balls(&mut rng, k);
        let bumps: Vec<PLMap> = balls.iter().map(|b| bump_in(&mut rng, domain, b)).collect();
        let f = PLMap::compose_all(domain, &bumps).unwrap();
        let ma = multi_anderson(&f, &balls).unwrap();
        prop_assert_eq!(ma.per_ball.len(), k);
        let mut reversed: Vec<Homeomorphism> =
            ma.per_ball.iter().map(|(a, _)| Homeomorphism::Tower(a.clone())).collect();
        reversed.reverse();
        let a_rev = Homeomorphism::Tower(SelfSimilarMap::product(reversed));
        let a: Homeomorphism = ma.a.clone().into();
        let b: Homeomorphism = ma.b.clone().into();
        for x in dyadic_grid(9) {
            prop_assert_eq!(a_rev.eval(&x).unwrap(), a.eval(&x).unwrap());
            let lhs = commutator_eval(&a, &b, &x).unwrap();
            prop_assert!(same_point(domain, &lhs, &f.eval(&x).unwrap()));
        }
        for (piece, ball) in bumps.iter().zip(&balls) {
            prop_assert_eq!(&restrict_to_ball(&f, ball).unwrap(), piece);
        }
    }
}

#[test]
fn identity_needs_no_tower() {
    let ball = Arc::new(q(1, 4), q(3, 4));
    let (a, b) = anderson_factor(&PLMap::identity(Domain::Interval), &ball).unwrap();
    assert!(b.is_identity());
    assert_eq!(a.eval(&q(1, 2)).unwrap(), q(1, 2));
}

#[test]
fn support_must_fit_in_the_ball() {
    let f = PLMap::bump(Domain::Interval, &q(1, 5), &q(3, 5), vec![(q(2, 5), q(1, 2))]).unwrap();
    let small = Arc::new(q(1, 4), q(3, 4));
    assert!(matches!(anderson_factor(&f, &small), Err(Error::SupportTooLarge(_))));
    assert!(matches!(
        build_translator(Domain::Interval, &small, &support(&f)),
        Err(Error::SupportTooLarge(_))
    ));
}

#[test]
fn overlapping_balls_are_rejected() {
    let f = PLMap::bump(Domain::Circle, &q(1, 5), &q(3, 10), vec![(q(1, 4), q(2, 7))]).unwrap();
    let balls = [Arc::new(q(1, 10), q(1, 2)), Arc::new(q(2, 5), q(9, 10))];
    assert!(matches!(multi_anderson(&f, &balls), Err(Error::BallsNotDisjoint)));
}

#[test]
fn ball_wrapping_past_zero_on_the_circle() {
    let f = PLMap::bump(Domain::Circle, &q(9, 10), &q(11, 10), vec![(qi(1), q(21, 20))]).unwrap();
    let ball = Arc::new(q(4, 5), q(6, 5));
    let (a, b) = anderson_factor(&f, &ball).unwrap();
    let mut pts = dyadic_grid(10);
    pts.pop();
    assert!(commutator_agrees(&f, &a.into(), &b.into(), &pts).unwrap());
}
