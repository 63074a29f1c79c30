mod common;

use common::{cumulative, gcd, naive_norm_histogram};
use hyplatt::hypgeom::{frobenius_value, mobius, pair_invariant};
use hyplatt::lattice::{count, count_curve, enumerate};
use hyplatt::{GroupElement, GroupModel, Point};
use proptest::prelude::*;

fn integer_grid(limit: u32) -> Vec<f64> {
    (2..=limit).map(f64::from).collect()
}

#[test]
fn full_group_matches_quadruple_scan() {
    let limit = 2000;
    let naive = cumulative(&naive_norm_histogram(limit, |_, _, _, _| true));
    let curve = count_curve(GroupModel::FullModular, Point::I, Point::I, &integer_grid(limit as u32)).unwrap();
    for (x, n) in curve {
        assert_eq!(n, naive[x as usize], "X = {x}");
    }
    assert_eq!(&naive[2..=4], &[2, 10, 10]);
}

#[test]
fn congruence_groups_match_filtered_scan() {
    let limit = 600;
    for level in [2i64, 3, 4, 5, 6] {
        let hecke = cumulative(&naive_norm_histogram(limit, |_, _, c, _| c % level == 0));
        let g = GroupModel::hecke(level).unwrap();
        for (x, n) in count_curve(g, Point::I, Point::I, &integer_grid(limit as u32)).unwrap() {
            assert_eq!(n, hecke[x as usize], "gamma0({level}) at X = {x}");
        }
        // ±g is one class, so a ≡ d ≡ ±1 with the same sign.
        let principal = cumulative(&naive_norm_histogram(limit, |a, b, c, d| {
            let r = |v: i64| v.rem_euclid(level);
            r(b) == 0 && r(c) == 0 && ((r(a) == 1 && r(d) == 1) || (r(a) == r(-1) && r(d) == r(-1)))
        }));
        let g = GroupModel::principal(level).unwrap();
        for (x, n) in count_curve(g, Point::I, Point::I, &integer_grid(limit as u32)).unwrap() {
            assert_eq!(n, principal[x as usize], "gamma({level}) at X = {x}");
        }
    }
}

#[test]
fn spot_values() {
    let i = Point::I;
    let full = GroupModel::FullModular;
    assert_eq!(count(full, i, i, 2.0).unwrap(), 2);
    assert_eq!(count(full, i, i, 3.0).unwrap(), 10);
    assert_eq!(count(full, i, i, 4.0).unwrap(), 10);
    for eps in [1e-9, 0.1, 0.5] {
        assert_eq!(count(full, i, i, 2.0 - eps).unwrap(), 0);
    }
    assert_eq!(count(GroupModel::principal(2).unwrap(), i, i, 3.0).unwrap(), 1);
    assert_eq!(enumerate(full, i, i, 2.0).unwrap().values(), &[(2.0, 2)]);
    assert!(enumerate(full, i, i, 1.5).is_err());
    assert_eq!(count_curve(full, i, i, &[1.5]).unwrap(), vec![(1.5, 0)]);
    assert!(count_curve(full, i, i, &[2.0, 2.0]).is_err());
    assert_eq!(GroupModel::hecke(1).unwrap(), GroupModel::FullModular);
    assert_eq!(GroupModel::principal(1).unwrap(), GroupModel::FullModular);
}

#[test]
fn hand_computed_geometry() {
    let i = Point::I;
    let two_i = Point::new(0.0, 2.0).unwrap();
    let one_plus_i = Point::new(1.0, 1.0).unwrap();
    assert_eq!(pair_invariant(i, i), 0.0);
    assert!((pair_invariant(i, two_i) - 0.125).abs() < 1e-15);
    assert!((pair_invariant(one_plus_i, i) - 0.25).abs() < 1e-15);
    let p = mobius(&GroupElement::new(2, 1, 1, 1).unwrap(), i);
    assert!((p.x() - 1.5).abs() < 1e-15 && (p.y() - 0.5).abs() < 1e-15);
    let s = GroupElement::new(0, 1, -1, 0).unwrap();
    assert_eq!(s, GroupElement::S);
    assert_eq!(frobenius_value(&s, i, i), 2.0);
    assert_eq!(frobenius_value(&GroupElement::T, i, i), 3.0);
}

#[test]
fn group_monotonicity() {
    let z = Point::new(0.31, 0.87).unwrap();
    let w = Point::new(-0.2, 1.4).unwrap();
    for level in [2i64, 3, 7] {
        for x in [50.0, 400.0] {
            let full = count(GroupModel::FullModular, z, w, x).unwrap();
            let hecke = count(GroupModel::hecke(level).unwrap(), z, w, x).unwrap();
            let principal = count(GroupModel::principal(level).unwrap(), z, w, x).unwrap();
            assert!(principal <= hecke && hecke <= full, "level {level}, X = {x}");
        }
    }
}

#[test]
fn profiles_are_deterministic() {
    let z = Point::new(0.123, 0.777).unwrap();
    let w = Point::new(0.5, 1.9).unwrap();
    let a = enumerate(GroupModel::FullModular, z, w, 5e4).unwrap();
    let b = enumerate(GroupModel::FullModular, z, w, 5e4).unwrap();
    assert_eq!(a, b);
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let c = single.install(|| enumerate(GroupModel::FullModular, z, w, 5e4).unwrap());
    assert_eq!(a, c);
    assert!(a.values().windows(2).all(|p| p[0].0 < p[1].0));
    assert!(a.values().iter().all(|&(v, m)| m >= 1 && (2.0..=5e4).contains(&v)));
}

fn word_element(word: &[i8]) -> GroupElement {
    word.iter().fold(GroupElement::IDENTITY, |g, &k| {
        let step = if k == 0 { GroupElement::S } else { GroupElement::new(1, k as i64, 0, 1).unwrap() };
        g.compose(&step)
    })
}

fn element(max_entry: i64) -> impl Strategy<Value = GroupElement> {
    prop::collection::vec(-3i8..=3, 0..8)
        .prop_map(|w| word_element(&w))
        .prop_filter("entries bounded", move |g| g.entries().iter().all(|e| e.abs() <= max_entry))
}

fn point() -> impl Strategy<Value = Point> {
    (-2.0f64..2.0, 0.2f64..3.0).prop_map(|(x, y)| Point::new(x, y).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pair_invariant_is_symmetric(z in point(), w in point()) {
        prop_assert_eq!(pair_invariant(z, w), pair_invariant(w, z));
    }

    #[test]
    fn pair_invariant_is_isometry_invariant(g in element(100), z in point(), w in point()) {
        let u = pair_invariant(z, w);
        let moved = pair_invariant(mobius(&g, z), mobius(&g, w));
        prop_assert!((moved - u).abs() <= 1e-12 * (1.0 + u), "{} vs {}", moved, u);
    }

    #[test]
    fn frobenius_is_exact_at_i(a in -50i64..=50, c in -50i64..=50) {
        prop_assume!(gcd(a, c) == 1);
        // solve a d − b c = 1
        let (mut r0, mut r1, mut s0, mut s1, mut t0, mut t1) = (a, c, 1i64, 0i64, 0i64, 1i64);
        while r1 != 0 {
            let q = r0.div_euclid(r1);
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        let (d, b) = (s0 * r0, -t0 * r0);
        prop_assume!(b.abs() <= 50 && d.abs() <= 50);
        let g = GroupElement::new(a, b, c, d).unwrap();
        prop_assert_eq!(frobenius_value(&g, Point::I, Point::I), (a * a + b * b + c * c + d * d) as f64);
    }

    #[test]
    fn canonicalization(g in element(1000)) {
        prop_assert_eq!(g.canonicalize(), g);
        let [a, b, c, d] = g.entries();
        prop_assert_eq!(GroupElement::new(-a, -b, -c, -d).unwrap(), g);
        prop_assert!(g.c() > 0 || (g.c() == 0 && g.d() > 0));
    }

    #[test]
    fn count_is_left_invariant(g in element(10), z in point(), w in point(), x in 2.0f64..500.0) {
        let base = count(GroupModel::FullModular, z, w, x).unwrap();
        let moved = count(GroupModel::FullModular, mobius(&g, z), mobius(&g, w), x).unwrap();
        // Orbit values can sit on the boundary up to rounding.
        let inner = count(GroupModel::FullModular, z, w, x * (1.0 - 1e-9)).unwrap();
        let outer = count(GroupModel::FullModular, z, w, x * (1.0 + 1e-9)).unwrap();
        prop_assert!((inner..=outer).contains(&moved), "{} vs {}", moved, base);
    }

    #[test]
    fn count_is_symmetric_and_monotone(z in point(), w in point(), x in 2.0f64..300.0) {
        let n = count(GroupModel::FullModular, z, w, x).unwrap();
        prop_assert_eq!(n, count(GroupModel::FullModular, w, z, x).unwrap());
        prop_assert!(count(GroupModel::FullModular, z, w, x * 1.5).unwrap() >= n);
    }
}
