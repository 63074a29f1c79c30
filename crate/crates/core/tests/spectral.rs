use hyplatt::spectral::*;
use hyplatt::{Error, Point};
use num_complex::Complex64;
use proptest::prelude::*;

fn fixture() -> SpectralRegistry {
    load_registry(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/maass_fixture.txt")).unwrap()
}

fn inverted(z: Point) -> Point {
    let r2 = z.x() * z.x() + z.y() * z.y();
    Point::new(-z.x() / r2, z.y() / r2).unwrap()
}

#[test]
fn fixture_loads_and_round_trips() {
    let reg = fixture();
    assert_eq!(reg.cusp_forms().len(), 2);
    assert_eq!(reg.cusp_forms()[0].parity(), Parity::Odd);
    assert_eq!(reg.cusp_forms()[1].parity(), Parity::Even);
    let again = parse_registry(&reg.to_text()).unwrap();
    assert_eq!(again, reg);
    assert_eq!(parse_registry(&again.to_text()).unwrap().to_text(), reg.to_text());
}

#[test]
fn malformed_registry_is_a_parse_error() {
    let text = "maass v1\nform t=9.5 parity=even\n1 1.0\n2 0.5\n4 0.25\n";
    assert!(matches!(parse_registry(text), Err(Error::Parse { line: 5, .. })));
    let empty = parse_registry("maass v1\n").unwrap();
    assert!(empty.cusp_forms().is_empty());
    assert_eq!(empty.small_eigs().len(), 1);
    assert!(load_registry("/nonexistent/registry.txt").is_err());
}

#[test]
fn maass_forms_are_modular() {
    let reg = fixture();
    for z in [(0.3, 0.97), (-0.41, 0.93), (0.1, 1.05), (0.45, 0.9)] {
        let z = Point::new(z.0, z.1).unwrap();
        for f in reg.cusp_forms() {
            let a = eval_maass(f, z).unwrap();
            let b = eval_maass(f, inverted(z)).unwrap();
            assert!((a - b).abs() < 1e-8, "t = {} at {z}: {a} vs {b}", f.t());
            let c = eval_maass(f, z.translate(1.0)).unwrap();
            assert!((a - c).abs() < 1e-12 * (1.0 + a.abs()));
        }
    }
}

#[test]
fn odd_forms_vanish_on_the_axis() {
    let reg = fixture();
    let odd = &reg.cusp_forms()[0];
    for y in [0.9, 1.0, 2.0, 5.0] {
        assert_eq!(eval_maass(odd, Point::new(0.0, y).unwrap()).unwrap(), 0.0);
    }
}

#[test]
fn eisenstein_invariance_and_unitarity() {
    for t in [1.0, 5.0] {
        for z in [(0.3, 0.97), (-0.2, 0.99), (0.05, 1.02)] {
            let z = Point::new(z.0, z.1).unwrap();
            let a = eval_eisenstein(z, t).unwrap();
            let b = eval_eisenstein(inverted(z), t).unwrap();
            assert!((a - b).norm() < 1e-6, "t = {t} at {z}");
        }
    }
    for t in [0.5, 1.0, 2.0, 5.0, 10.0] {
        assert!((scattering(t).unwrap().norm() - 1.0).abs() < 1e-8);
    }
    assert!((scattering(1e-4).unwrap() + 1.0).norm() < 1e-3);
}

#[test]
fn eisenstein_eigen_equation() {
    let h = 1e-3;
    let t = 1.0;
    let re = |x: f64, y: f64| eval_eisenstein(Point::new(x, y).unwrap(), t).unwrap().re;
    let center = re(0.0, 1.0);
    let lap = (re(h, 1.0) + re(-h, 1.0) + re(0.0, 1.0 + h) + re(0.0, 1.0 - h) - 4.0 * center) / (h * h);
    let expected = -(0.25 + t * t) * center;
    assert!((lap - expected).abs() < 1e-4 * expected.abs(), "{lap} vs {expected}");
}

#[test]
fn eisenstein_vanishes_at_half() {
    let ev = EisensteinEvaluator::default();
    let sym = |d: f64| {
        let plus = ev.eval_s(Point::I, Complex64::new(0.5 + d, 0.0)).unwrap();
        let minus = ev.eval_s(Point::I, Complex64::new(0.5 - d, 0.0)).unwrap();
        0.5 * (plus + minus)
    };
    // E is even about s = 1/2 to first order; Richardson removes the δ² term.
    let extrapolated = (4.0 * sym(1e-3) - sym(2e-3)) / 3.0;
    assert!(extrapolated.norm() < 1e-6, "{extrapolated}");
    assert!(eval_eisenstein(Point::I, 0.0).unwrap().norm() < 1e-6);
}

#[test]
fn weyl_sums() {
    let reg = fixture();
    let z = Point::new(0.1, 1.0).unwrap();
    let sums: Vec<WeylSum> = [5.0, 10.0, 20.0].iter().map(|&t| weyl_sum(&reg, z, t).unwrap()).collect();
    for w in sums.windows(2) {
        assert!(w[1].discrete + w[1].continuous >= w[0].discrete + w[0].continuous);
    }
    assert_eq!(sums[2].forms_used, 2);
    let empty = SpectralRegistry::modular();
    let w = weyl_sum(&empty, z, 3.0).unwrap();
    assert_eq!(w.discrete, 0.0);
    assert!(w.continuous > 0.0);
}

#[test]
fn sufficiently_many_reports() {
    let empty = SpectralRegistry::modular();
    let r = sufficiently_many_check(&empty, Point::I, &[10.0, 20.0]).unwrap();
    assert!(r.rows.iter().all(|row| row.1 == 0.0));
    assert!(!r.bounded_below);
    // at i only the even form contributes
    let reg = fixture();
    let r = sufficiently_many_check(&reg, Point::I, &[12.0, 20.0]).unwrap();
    assert_eq!(r.rows[0].1, 0.0);
    let even = eval_maass(&reg.cusp_forms()[1], Point::I).unwrap();
    assert!((r.rows[1].1 - 2.0 * even * even / 400.0).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn eisenstein_is_periodic(x in -0.5f64..0.5, y in 0.6f64..2.0, t in 0.1f64..8.0) {
        let z = Point::new(x, y).unwrap();
        let a = eval_eisenstein(z, t).unwrap();
        let b = eval_eisenstein(z.translate(1.0), t).unwrap();
        prop_assert!((a - b).norm() < 1e-9 * (1.0 + a.norm()));
    }

    #[test]
    fn eisenstein_functional_equation(x in -0.5f64..0.5, y in 0.6f64..2.0, t in 0.1f64..8.0) {
        let z = Point::new(x, y).unwrap();
        let a = eval_eisenstein(z, t).unwrap();
        let b = eval_eisenstein(z, -t).unwrap();
        prop_assert!((b - a.conj()).norm() < 1e-9 * (1.0 + a.norm()));
        prop_assert!((b - scattering(-t).unwrap() * a).norm() < 1e-9 * (1.0 + a.norm()));
    }
}
