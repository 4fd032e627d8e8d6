#![allow(clippy::excessive_precision)]

use std::f64::consts::{FRAC_PI_2, PI};

use ellint2::*;
use proptest::prelude::*;

fn cfg() -> ToleranceConfig64 {
    ToleranceConfig64::default()
}

fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs()
}

/// Admissible `(a, b)` with `|a| + |b| ≤ 1`, signs included.
fn admissible() -> impl Strategy<Value = (f64, f64)> {
    (0.0..=1.0f64, 0.0..=1.0f64, any::<bool>(), any::<bool>()).prop_map(|(s, t, na, nb)| {
        let a = s * t;
        let b = s * (1.0 - t);
        (if na { -a } else { a }, if nb { -b } else { b })
    })
}

proptest! {
    #[test]
    fn reduced_pair_invariants((a, b) in admissible()) {
        let r = map_uv(Amplitudes::new(a, b).unwrap());
        prop_assert!((0.0..=1.0).contains(&r.u) && (0.0..=1.0).contains(&r.v));
        prop_assert!((r.u * (1.0 - r.v) - a * a).abs() <= 1e-12);
        prop_assert!((r.v * (1.0 - r.u) - b * b).abs() <= 1e-12);
        prop_assert!(r.u <= 0.5 * (1.0 + a * a - b * b) + 1e-15);
        let lhs = (r.u * (1.0 - r.v)).sqrt() + (r.v * (1.0 - r.u)).sqrt();
        prop_assert!((lhs - (a.abs() + b.abs())).abs() <= 1e-12);
    }

    #[test]
    fn reduced_pair_symmetries((a, b) in admissible()) {
        let r = map_uv(Amplitudes::new(a, b).unwrap());
        let s = map_uv(Amplitudes::new(b, a).unwrap());
        prop_assert_eq!((r.u, r.v), (s.v, s.u));
        for (sa, sb) in [(-1.0, 1.0), (1.0, -1.0), (-1.0, -1.0)] {
            let t = map_uv(Amplitudes::new(sa * a, sb * b).unwrap());
            prop_assert_eq!(t, r);
        }
    }

    #[test]
    fn agm_bounds_and_symmetry(x in 1e-6..1e6f64, y in 1e-6..1e6f64) {
        let m = agm(x, y, &cfg()).unwrap();
        let (lo, hi) = (x.min(y), x.max(y));
        prop_assert!(m >= lo * (1.0 - 1e-15) && m <= hi * (1.0 + 1e-15));
        prop_assert!(rel(agm(y, x, &cfg()).unwrap(), m) <= 1e-15);
    }

    #[test]
    fn legendre_relation(k in 0.01..0.99f64) {
        let m = EllipticModulus::new(k).unwrap();
        let v = complete_ke(m, &cfg()).unwrap();
        let w = complete_ke(m.complementary(), &cfg()).unwrap();
        let lhs = v.second_kind * w.first_kind + w.second_kind * v.first_kind
            - v.first_kind * w.first_kind;
        prop_assert!(rel(lhs, FRAC_PI_2) <= 1e-13);
    }

    #[test]
    fn complete_integrals_are_monotone(k in 0.0..0.999f64, dk in 1e-6..1e-3f64) {
        let k2 = (k + dk).min(0.9999);
        let a = complete_ke(EllipticModulus::new(k).unwrap(), &cfg()).unwrap();
        let b = complete_ke(EllipticModulus::new(k2).unwrap(), &cfg()).unwrap();
        prop_assert!(b.first_kind > a.first_kind);
        prop_assert!(b.second_kind < a.second_kind);
    }

    #[test]
    fn double_series_is_symmetric(x in 0.0..0.2f64, y in 0.0..0.2f64) {
        let c = cfg();
        let f = appell_f4(-0.25, 0.25, x, y, &c).unwrap();
        let g = appell_f4(-0.25, 0.25, y, x, &c).unwrap();
        prop_assert_eq!(f.value, g.value);
    }

    #[test]
    fn double_series_collapses_on_axis(x in 0.0..0.9f64) {
        let f = appell_f4(-0.25, 0.25, x, 0.0, &cfg()).unwrap();
        let g = gauss_2f1(-0.25, 0.25, 1.0, x, &cfg()).unwrap();
        prop_assert!(rel(f.value, g.value) <= 1e-13);
    }

    #[test]
    fn elliptic_route_swap_and_sign((a, b) in admissible()) {
        let p = Amplitudes::new(a, b).unwrap();
        prop_assume!(!p.is_corner());
        let e = eval_elliptic(p, &cfg()).unwrap().value;
        let s = eval_elliptic(p.swap(), &cfg()).unwrap().value;
        prop_assert!(rel(e, s) <= 1e-13);
        let n = evaluate(Amplitudes::new(-a, -b).unwrap(), Method::Auto, &cfg()).unwrap().value;
        let d = evaluate(p, Method::Auto, &cfg()).unwrap().value;
        prop_assert!(rel(n, d) <= 1e-15);
        prop_assert!(e > 0.0 && e <= PI * PI * 2f64.sqrt());
    }

    #[test]
    fn axis_consistency(a in 0.0..0.99f64) {
        let e7 = eval_elliptic(Amplitudes::new(a, 0.0).unwrap(), &cfg()).unwrap().value;
        let ax = eval_axis(a, &cfg()).unwrap().value;
        prop_assert!(rel(e7, ax) <= 1e-11);
    }

    #[test]
    fn diagonal_consistency(a in 0.0..0.49f64) {
        let d = eval_diagonal(a, &cfg()).unwrap();
        let e7 = eval_elliptic(Amplitudes::new(a, a).unwrap(), &cfg()).unwrap().value;
        prop_assert!(rel(d.value, e7) <= 1e-10);
        prop_assert!(d.error_estimate <= 1e-10 * e7);
    }

    #[test]
    fn interior_routes_agree(s in 0.0..0.8f64, t in 0.0..=1.0f64) {
        let p = Amplitudes::new(s * t, s * (1.0 - t)).unwrap();
        let e7 = eval_elliptic(p, &cfg()).unwrap().value;
        let e5 = eval_product(p, &cfg()).unwrap().value;
        let e3 = eval_appell(p, &cfg()).unwrap().value;
        prop_assert!(rel(e5, e7) <= 1e-12);
        prop_assert!(rel(e3, e7) <= 1e-12);
    }
}
