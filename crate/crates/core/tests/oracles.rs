//! Library answers checked against brute-force reference computations.

mod common;

use mahavier_core::exponent::never_connect;
use mahavier_core::relation::{
    eventual_diagonal_threshold, interval_image, iterate_image, slope_products, Direction,
    DEFAULT_INTERVAL_CAP,
};
use mahavier_core::shadowing::{
    diagonal_pseudo_orbit, growing_images_series, shadow_feasible, staircase_pseudo_orbit,
    MixingVerdict, ShadowOutcome, DEFAULT_BRANCH_CAP,
};
use mahavier_core::shift::{
    arc_range, endpoint_approx, metric_d, periodic_approximant, Sides, Tail, TruncatedPoint,
};
use mahavier_core::tracer::{
    descending_trajectory, required_spacing, trace_specification, OrbitSegment, Specification,
};
use mahavier_core::{q, Interval, IntervalUnion, Rational, SlopeSet};
use rand::Rng;

use common::*;

#[test]
fn never_connect_matches_power_search() {
    assert!(never_connect(&q(1, 2), &q(3, 1)));
    assert!(brute_never_connect(&q(1, 2), &q(3, 1), 20));
    let bases = [
        q(1, 2),
        q(2, 1),
        q(3, 1),
        q(1, 3),
        q(4, 1),
        q(1, 8),
        q(6, 1),
        q(9, 4),
        q(2, 3),
        q(12, 1),
    ];
    for a in &bases {
        for b in &bases {
            assert_eq!(
                never_connect(a, b),
                brute_never_connect(a, b, 20),
                "{a}, {b}"
            );
        }
    }
}

#[test]
fn two_line_images() {
    let s = SlopeSet::from_fracs(&[(1, 2), (3, 1)]);
    let a = IntervalUnion::single(q(5, 6), q(1, 1)).unwrap();
    let once = interval_image(&s, &a, Direction::Forward);
    assert_eq!(once, IntervalUnion::single(q(5, 12), q(1, 2)).unwrap());
    let twice = iterate_image(&s, &a, 2).unwrap();
    assert_eq!(twice, IntervalUnion::single(q(5, 24), q(1, 4)).unwrap());
}

#[test]
fn image_membership_on_a_grid() {
    let mut rng = rng(11);
    let sets = [
        SlopeSet::from_fracs(&[(1, 2), (3, 1)]),
        SlopeSet::from_fracs(&[(1, 2), (3, 1), (1, 1)]),
        SlopeSet::from_fracs(&[(1, 2), (3, 1), (1, 3), (2, 1)]),
    ];
    for s in &sets {
        for _ in 0..30 {
            let mut parts = Vec::new();
            for _ in 0..rng.gen_range(1..=3) {
                let x = unit_rational(&mut rng, 24);
                let y = unit_rational(&mut rng, 24);
                parts.push(Interval::new(x.clone().min(y.clone()), x.max(y)).unwrap());
            }
            let a = IntervalUnion::from_intervals(parts.clone());
            let img = interval_image(s, &a, Direction::Forward);
            let mut probes: Vec<Rational> = (0..=720).map(|k| q(k, 720)).collect();
            for iv in img.intervals() {
                probes.extend([
                    iv.lo.clone(),
                    iv.hi.clone(),
                    &iv.lo - q(1, 100_000),
                    &iv.hi + q(1, 100_000),
                ]);
            }
            for y in &probes {
                assert_eq!(
                    img.contains(y),
                    image_member(s, &parts, y),
                    "y = {y}, A = {a}"
                );
            }
        }
    }
}

#[test]
fn slope_products_match_count_enumeration() {
    let four = SlopeSet::from_fracs(&[(1, 2), (3, 1), (1, 3), (2, 1)]);
    for n in 1..=8 {
        assert_eq!(slope_products(&four, n), products_by_counts(&four, n));
    }
    assert!(!products_by_counts(&four, 3).contains(&q(1, 1)));
    assert_eq!(eventual_diagonal_threshold(&four, 20), None);
}

#[test]
fn arc_maxima_by_sampling() {
    let s = SlopeSet::from_fracs(&[(1, 2), (3, 1)]);
    assert_eq!(
        arc_range(&s, &[1, 0]).unwrap(),
        vec![q(1, 3), q(1, 1), q(1, 2)]
    );
    let admissible = |x: &Rational| x <= &q(1, 1) && (x * q(3, 1)) <= q(1, 1);
    let best = (0..=3600)
        .map(|k| q(k, 3600))
        .filter(admissible)
        .max()
        .unwrap();
    assert_eq!(best, q(1, 3));
}

#[test]
fn metric_by_terms_matches() {
    let s = SlopeSet::from_fracs(&[(1, 2), (3, 1)]);
    let x = TruncatedPoint::one_sided(&s, vec![q(1, 1), q(1, 2)], Tail::Zero).unwrap();
    let y = TruncatedPoint::one_sided(&s, vec![q(0, 1), q(0, 1)], Tail::Zero).unwrap();
    let d = metric_d(&s, &x, &y).unwrap();
    let (lower, _) = metric_by_terms(&s, &x, &y, 60, false);
    assert_eq!(d.lower, q(1, 2));
    assert_eq!(d.upper, lower);
    let three = SlopeSet::from_fracs(&[(1, 2), (3, 1), (1, 1)]);
    let c = TruncatedPoint::constant(q(1, 2));
    let c2 = TruncatedPoint::constant(q(5, 8));
    assert_eq!(metric_d(&three, &c, &c2).unwrap().upper, q(1, 16));
}

#[test]
fn shadow_search_agrees_with_enumeration() {
    let three = SlopeSet::from_fracs(&[(1, 2), (3, 1), (1, 1)]);
    for n0 in 1..=4 {
        let po = staircase_pseudo_orbit(n0).unwrap();
        for eps in [q(1, 4), q(1, 8), q(1, 16), q(1, 3)] {
            let mut window = 0;
            while &eps * Rational::pow2(window + 1) <= q(1, 1) {
                window += 1;
            }
            for horizon in 0..po.len() {
                let depth = horizon + (window as usize).max(1);
                if depth > 9 {
                    continue;
                }
                let lib =
                    shadow_feasible(&three, &po, &eps, horizon, depth, DEFAULT_BRANCH_CAP).unwrap();
                let brute = brute_force_shadow(&three, &po, &eps, horizon, depth);
                assert_eq!(
                    lib.is_shadowed(),
                    brute,
                    "n0 = {n0}, ε = {eps}, horizon {horizon}"
                );
            }
        }
    }
    let four = SlopeSet::from_fracs(&[(1, 2), (3, 1), (1, 3), (2, 1)]);
    let po = diagonal_pseudo_orbit(&four, &[0, 3], &q(1, 2), &q(1, 4)).unwrap();
    for eps in [q(1, 8), q(1, 16), q(1, 40)] {
        for horizon in 0..3 {
            let lib = shadow_feasible(&four, &po, &eps, horizon, 8, DEFAULT_BRANCH_CAP).unwrap();
            assert_eq!(
                lib.is_shadowed(),
                brute_force_shadow(&four, &po, &eps, horizon, 8)
            );
        }
    }
}

#[test]
fn witness_is_lexicographically_first() {
    let three = SlopeSet::from_fracs(&[(1, 2), (3, 1), (1, 1)]);
    for n0 in 2..=4 {
        let po = staircase_pseudo_orbit(n0).unwrap();
        for (eps, horizon) in [(q(1, 4), 1), (q(1, 3), 2), (q(1, 2), 2)] {
            let depth = horizon + 2;
            let lib =
                shadow_feasible(&three, &po, &eps, horizon, depth, DEFAULT_BRANCH_CAP).unwrap();
            let brute = brute_force_first_word(&three, &po, &eps, horizon, depth);
            match lib {
                ShadowOutcome::Shadowed(w) => assert_eq!(Some(w.word), brute),
                ShadowOutcome::NotShadowed(_) => assert_eq!(brute, None),
            }
        }
    }
}

#[test]
fn three_line_series_decreases() {
    let s = SlopeSet::from_fracs(&[(1, 2), (3, 1), (1, 1)]);
    let a = IntervalUnion::single(q(5, 6), q(1, 1)).unwrap();
    let series = growing_images_series(&s, &a, 40, DEFAULT_INTERVAL_CAP).unwrap();
    assert!(series.values.windows(2).all(|w| w[1].1 <= w[0].1));
    assert!(series.values.last().unwrap().1 < q(1, 1_000_000));
    assert_eq!(series.verdict, MixingVerdict::ConsistentWithMixing);
}

#[test]
fn periodic_example() {
    let s = SlopeSet::from_fracs(&[(1, 2), (2, 1)]);
    let p =
        TruncatedPoint::from_coords(&s, Sides::Two, 0, vec![q(1, 2), q(1, 1)], Tail::Periodic(2))
            .unwrap();
    let r = periodic_approximant(&s, &p, &q(1, 4)).unwrap();
    let (_, upper) = metric_by_terms(&s, &p, &r.point, 40, true);
    assert!(upper < q(1, 4));
    assert!((-20..20).all(|i| r.point.value_at(&s, i + r.period as i64) == r.point.value_at(&s, i)));
}

#[test]
fn endpoint_example() {
    let s = SlopeSet::from_fracs(&[(1, 2), (3, 1)]);
    let p = TruncatedPoint::one_sided(&s, vec![q(1, 3), q(1, 1)], Tail::Zero).unwrap();
    let r = endpoint_approx(&s, &p, &q(1, 4)).unwrap();
    let (_, upper) = metric_by_terms(&s, &p, &r.point, 60, false);
    assert!(upper < q(1, 4));
    assert!((r.point.coords[0].clone() - q(1, 3)).abs() < q(1, 2));
    assert!((r.point.coords[1].clone() - q(1, 1)).abs() < q(1, 1));
}

#[test]
fn descending_conclusions_on_random_orbits() {
    let s = SlopeSet::from_fracs(&[(3, 1), (1, 1), (1, 2)]);
    let mut rng = rng(5);
    for _ in 0..300 {
        let eps = q(1, rng.gen_range(1..=12));
        let start = unit_rational(&mut rng, 48);
        let len = rng.gen_range(1..=12);
        let ys = random_orbit(&mut rng, &s, start, len);
        if ys[0].is_zero() {
            continue;
        }
        let t = descending_trajectory(&s, &ys, &eps).unwrap();
        let ivs = &t.intervals;
        assert_eq!(ivs.len(), ys.len());
        assert!(ivs[0].lo >= &eps / q(9, 1));
        for (iv, y) in ivs.iter().zip(&ys) {
            assert!(iv.lo.is_positive() && iv.hi <= q(1, 1));
            assert!(
                (&iv.lo - y).abs() <= eps && (&iv.hi - y).abs() <= eps,
                "{iv} vs {y}"
            );
        }
        assert!(
            ivs.last().unwrap().diam() >= &eps * &eps / q(9, 1),
            "ys {ys:?} eps {eps} ivs {ivs:?}"
        );
        for w in ivs.windows(2) {
            assert!(
                interval_in_image(&s, &w[0], &w[1]),
                "{} then {}",
                w[0],
                w[1]
            );
        }
    }
    let flat = descending_trajectory(&s, &vec![q(1, 1); 4], &q(1, 2)).unwrap();
    assert_eq!(flat.intervals[0], Interval::new(q(8, 9), q(1, 1)).unwrap());
}

#[test]
fn two_segment_trace_by_definition() {
    let s = SlopeSet::from_fracs(&[(1, 2), (3, 1), (1, 1)]);
    let n = required_spacing(&q(1, 2)).unwrap() as i64;
    let spec = Specification::new(vec![
        OrbitSegment::new(1, vec![q(1, 1); 3]),
        OrbitSegment::new(3 + n, vec![q(1, 3), q(1, 1), q(1, 2)]),
    ])
    .unwrap();
    let (y, cert) = trace_specification(&s, &spec, &q(1, 2)).unwrap();
    assert!(is_orbit(&s, &y.coords));
    for seg in &spec.segments {
        for i in seg.indices() {
            assert!((y.value_at(&s, i).unwrap() - seg.value(i)).abs() <= q(1, 2));
        }
    }
    assert_eq!(cert.entries.len(), 6);
}
