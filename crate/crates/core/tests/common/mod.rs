#![allow(dead_code)]

use keplerian_arcs::{Geometry, PlanarVector};
use proptest::prelude::*;
use std::f64::consts::TAU;

pub fn polar(r: f64, angle: f64) -> PlanarVector {
    PlanarVector::new(r * angle.cos(), r * angle.sin())
}

/// Nonflat triangles with radii in [0.2, 5] and the angle at the center kept
/// away from 0 and pi.
pub fn triangle() -> impl Strategy<Value = Geometry> {
    (
        0.2..5.0f64,
        0.2..5.0f64,
        0.0..TAU,
        0.05..3.09f64,
        any::<bool>(),
    )
        .prop_map(|(ra, rb, start, opening, clockwise)| {
            let turn = if clockwise { -opening } else { opening };
            Geometry::new(polar(ra, start), polar(rb, start + turn)).unwrap()
        })
}

/// Rectilinear geometries: both points on one ray from the center.
pub fn rectilinear() -> impl Strategy<Value = Geometry> {
    (0.2..5.0f64, 0.2..5.0f64, 0.0..TAU)
        .prop_filter("distinct radii", |(ra, rb, _)| (ra - rb).abs() > 0.05)
        .prop_map(|(ra, rb, angle)| Geometry::new(polar(ra, angle), polar(rb, angle)).unwrap())
}

/// Opposition geometries: the center between the two points.
pub fn opposition() -> impl Strategy<Value = Geometry> {
    (0.2..5.0f64, 0.2..5.0f64, 0.0..TAU).prop_map(|(ra, rb, angle)| {
        Geometry::new(polar(ra, angle), polar(rb, angle + std::f64::consts::PI)).unwrap()
    })
}

pub fn any_geometry() -> impl Strategy<Value = Geometry> {
    prop_oneof![3 => triangle(), 1 => rectilinear(), 1 => opposition()]
}

/// Point of a window at relative position `t` in (0, 1), compactified on
/// half-lines.
pub fn window_point(lo: f64, hi: f64, scale: f64, t: f64) -> f64 {
    if hi.is_finite() {
        lo + (hi - lo) * t
    } else {
        lo + scale * t / (1.0 - t)
    }
}

pub fn right_triangle() -> Geometry {
    Geometry::new(PlanarVector::new(1.0, 0.0), PlanarVector::new(0.0, 1.0)).unwrap()
}
