mod common;

use common::{any_geometry, polar, triangle};
use keplerian_arcs::{Geometry, GeometryClass, LambertError, PlanarVector};
use proptest::prelude::*;

proptest! {
    #[test]
    fn heron_identity(g in triangle()) {
        let lhs = g.delta * g.delta;
        let rhs = 0.25 * g.s2_minus_c2() * (g.c * g.c - (g.ra - g.rb).powi(2));
        prop_assert!((lhs - rhs).abs() <= 1e-11 * (g.s * g.s).powi(2));
    }

    #[test]
    fn square_roots_and_boundaries(g in any_geometry()) {
        prop_assert!((g.xi * g.xi - (g.s + g.c)).abs() <= 1e-13 * g.s);
        prop_assert!((g.xi * g.eta).powi(2) - g.s2_minus_c2() <= 1e-12 * g.s * g.s);
        prop_assert!(g.c <= g.s * (1.0 + 1e-15));
        let k = g.boundaries();
        prop_assert!(k.t0 > 0.0 && k.t0 <= k.t1);
        prop_assert!((k.t0 + k.t1 - g.xi.powi(3) / 3.0).abs() <= 1e-12 * k.t1);
    }

    #[test]
    fn parabolic_momenta_share_magnitude_ratio(g in triangle()) {
        let k = g.boundaries();
        prop_assert!(k.c0 * k.c1 < 0.0);
        let ratio = -k.c0 / k.c1;
        let expected = (g.xi + g.eta) / g.xi_minus_eta();
        prop_assert!((ratio - expected).abs() <= 1e-10 * expected);
    }

    #[test]
    fn scaling_keeps_class(g in any_geometry(), factor in 0.1..10.0f64) {
        let scaled = Geometry::new(factor * g.qa, factor * g.qb).unwrap();
        prop_assert_eq!(
            std::mem::discriminant(&scaled.class),
            std::mem::discriminant(&g.class)
        );
        prop_assert!((scaled.c - factor * g.c).abs() <= 1e-12 * scaled.c);
    }
}

#[test]
fn flat_classes() {
    let line = Geometry::new(polar(2.0, 0.3), polar(1.0, 0.3)).unwrap();
    assert!(matches!(line.class, GeometryClass::Rectilinear { .. }));
    assert!((line.s2_minus_c2() - 8.0).abs() < 1e-12);
    let across = Geometry::new(polar(2.0, 0.3), polar(1.0, 0.3 + std::f64::consts::PI)).unwrap();
    assert_eq!(across.class, GeometryClass::Opposition);
    assert_eq!(across.s2_minus_c2(), 0.0);
}

#[test]
fn degenerate_inputs() {
    let origin = PlanarVector::new(0.0, 0.0);
    let a = PlanarVector::new(1.0, 0.0);
    assert!(matches!(
        Geometry::new(origin, a),
        Err(LambertError::DegenerateInput(_))
    ));
    assert!(matches!(
        Geometry::new(a, a),
        Err(LambertError::DegenerateInput(_))
    ));
    assert!(matches!(
        Geometry::new(a, PlanarVector::new(f64::NAN, 0.0)),
        Err(LambertError::DegenerateInput(_))
    ));
}
