//! The triangle formed by the center and the two endpoints, with the scalars
//! every later formula is written in.

use std::f64::consts::FRAC_PI_4;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{LambertError, Result};

pub const DEFAULT_FLAT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PlanarVector {
    pub x: f64,
    pub y: f64,
}

impl PlanarVector {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the cross product.
    pub fn cross(self, other: Self) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Counterclockwise quarter turn.
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for PlanarVector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for PlanarVector {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for PlanarVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl Mul<PlanarVector> for f64 {
    type Output = PlanarVector;
    fn mul(self, rhs: PlanarVector) -> PlanarVector {
        PlanarVector::new(self * rhs.x, self * rhs.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Counterclockwise,
    Clockwise,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeometryClass {
    NonFlat(Orientation),
    /// Both endpoints on one ray from the center; the payload names the one
    /// closer to the center.
    Rectilinear {
        inner: Endpoint,
    },
    /// The center lies strictly between the endpoints.
    Opposition,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    pub qa: PlanarVector,
    pub qb: PlanarVector,
    pub ra: f64,
    pub rb: f64,
    /// Chord length.
    pub c: f64,
    /// Radius sum.
    pub s: f64,
    /// Twice the signed area, `qa x qb`. Zero in the flat classes.
    pub delta: f64,
    /// `sqrt(s + c)`
    pub xi: f64,
    /// `sqrt(s - c)`
    pub eta: f64,
    pub class: GeometryClass,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryConstants {
    /// Flight time of the parabolic arc of type 0.
    pub t0: f64,
    /// Flight time of the parabolic arc of type 1.
    pub t1: f64,
    /// Angular momentum of the parabolic arc of type 0.
    pub c0: f64,
    /// Angular momentum of the parabolic arc of type 1.
    pub c1: f64,
}

impl Geometry {
    pub fn new(qa: PlanarVector, qb: PlanarVector) -> Result<Self> {
        Self::with_tolerance(qa, qb, DEFAULT_FLAT_TOLERANCE)
    }

    pub fn with_tolerance(qa: PlanarVector, qb: PlanarVector, flat_tolerance: f64) -> Result<Self> {
        if !qa.is_finite() || !qb.is_finite() {
            return Err(LambertError::DegenerateInput("non-finite endpoint"));
        }
        let ra = qa.norm();
        let rb = qb.norm();
        let mut c = (qa - qb).norm();
        let scale = ra.max(rb);
        if ra <= flat_tolerance * scale || scale == 0.0 {
            return Err(LambertError::DegenerateInput("A coincides with the center"));
        }
        if rb <= flat_tolerance * scale {
            return Err(LambertError::DegenerateInput("B coincides with the center"));
        }
        if c <= flat_tolerance * scale {
            return Err(LambertError::DegenerateInput("A coincides with B"));
        }

        let s = ra + rb;
        let cross = qa.cross(qb);
        let dot = qa.dot(qb);
        let mut delta = cross;
        // s^2 - c^2 = 2 (ra rb + <qa, qb>), rewritten to avoid cancellation when the
        // endpoints are nearly opposite.
        let mut s2_minus_c2 = if dot < 0.0 {
            2.0 * cross * cross / (ra * rb - dot)
        } else {
            2.0 * (ra * rb + dot)
        };

        let class = if cross.abs() <= flat_tolerance * ra * rb {
            delta = 0.0;
            if dot < 0.0 {
                c = s;
                s2_minus_c2 = 0.0;
                GeometryClass::Opposition
            } else {
                c = (ra - rb).abs();
                s2_minus_c2 = 4.0 * ra * rb;
                let inner = if rb < ra { Endpoint::B } else { Endpoint::A };
                GeometryClass::Rectilinear { inner }
            }
        } else if cross > 0.0 {
            GeometryClass::NonFlat(Orientation::Counterclockwise)
        } else {
            GeometryClass::NonFlat(Orientation::Clockwise)
        };

        let xi = (s + c).sqrt();
        let eta = (s2_minus_c2 / (s + c)).sqrt();
        Ok(Self {
            qa,
            qb,
            ra,
            rb,
            c,
            s,
            delta,
            xi,
            eta,
            class,
        })
    }

    pub fn is_nonflat(&self) -> bool {
        matches!(self.class, GeometryClass::NonFlat(_))
    }

    /// `s^2 - c^2`, equal to `(xi * eta)^2`.
    pub fn s2_minus_c2(&self) -> f64 {
        let product = self.xi * self.eta;
        product * product
    }

    /// `xi - eta` without cancellation.
    pub fn xi_minus_eta(&self) -> f64 {
        2.0 * self.c / (self.xi + self.eta)
    }

    /// Lower bound of the difference between consecutive minimal flight times
    /// of equal parity: the period of the ellipse of least period through A and B.
    pub fn gap_bound(&self) -> f64 {
        FRAC_PI_4 * (self.s + self.c).powf(1.5)
    }

    pub fn boundaries(&self) -> BoundaryConstants {
        let xi3 = self.xi.powi(3);
        let eta3 = self.eta.powi(3);
        let (c0, c1) = match self.class {
            GeometryClass::NonFlat(_) => {
                let product = self.xi * self.eta;
                let c0 = 2.0 * self.delta / (product * self.xi_minus_eta());
                let c1 = -2.0 * self.delta / (product * (self.xi + self.eta));
                (c0, c1)
            }
            GeometryClass::Opposition => {
                let c0 = (2.0 / (1.0 / self.ra + 1.0 / self.rb)).sqrt();
                (c0, -c0)
            }
            GeometryClass::Rectilinear { .. } => (0.0, 0.0),
        };
        BoundaryConstants {
            t0: (xi3 - eta3) / 6.0,
            t1: (xi3 + eta3) / 6.0,
            c0,
            c1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn unit_right_triangle() {
        let g = Geometry::new(PlanarVector::new(1.0, 0.0), PlanarVector::new(0.0, 1.0)).unwrap();
        assert_eq!(
            g.class,
            GeometryClass::NonFlat(Orientation::Counterclockwise)
        );
        assert!(close(g.c, SQRT_2, 1e-15));
        assert!(close(g.s, 2.0, 1e-15));
        assert!(close(g.delta, 1.0, 1e-15));
        assert!(close(g.xi, 1.847759065022573, 1e-14));
        assert!(close(g.eta, 0.7653668647301796, 1e-14));

        let k = g.boundaries();
        assert!(close(k.t0, 0.9767170884383226, 1e-14));
        assert!(close(k.t1, 1.1261642648276442, 1e-14));
        assert!(close(k.c0, 1.3065630, 1e-7));
        assert!(close(k.c1, -0.5411961, 1e-7));
    }

    #[test]
    fn collinear_classes() {
        let g = Geometry::new(PlanarVector::new(2.0, 0.0), PlanarVector::new(1.0, 0.0)).unwrap();
        assert_eq!(g.class, GeometryClass::Rectilinear { inner: Endpoint::B });
        assert_eq!((g.s, g.c, g.delta), (3.0, 1.0, 0.0));
        let k = g.boundaries();
        // Parabolic fall from x = 2 to x = 1: sqrt(2) (2^1.5 - 1) / 3.
        assert!(close(k.t0, (8.0 - 8f64.sqrt()) / 6.0, 1e-14));
        assert_eq!((k.c0, k.c1), (0.0, 0.0));

        let g = Geometry::new(PlanarVector::new(1.0, 0.0), PlanarVector::new(-2.0, 0.0)).unwrap();
        assert_eq!(g.class, GeometryClass::Opposition);
        assert_eq!((g.s, g.c, g.eta), (3.0, 3.0, 0.0));

        let g = Geometry::new(PlanarVector::new(1.0, 0.0), PlanarVector::new(-1.0, 0.0)).unwrap();
        assert!(close(g.boundaries().c0, 1.0, 1e-15));
        assert_eq!(g.boundaries().t0, g.boundaries().t1);
    }

    #[test]
    fn inner_endpoint_a() {
        let g = Geometry::new(PlanarVector::new(0.0, 1.0), PlanarVector::new(0.0, 3.0)).unwrap();
        assert_eq!(g.class, GeometryClass::Rectilinear { inner: Endpoint::A });
    }

    #[test]
    fn clockwise_orientation() {
        let g = Geometry::new(PlanarVector::new(0.0, 1.0), PlanarVector::new(1.0, 0.0)).unwrap();
        assert_eq!(g.class, GeometryClass::NonFlat(Orientation::Clockwise));
        let k = g.boundaries();
        assert!(k.c0 < 0.0 && k.c1 > 0.0);
    }

    #[test]
    fn rejects_coincident_points() {
        let o = PlanarVector::new(0.0, 0.0);
        let a = PlanarVector::new(1.0, 2.0);
        assert!(Geometry::new(o, a).is_err());
        assert!(Geometry::new(a, o).is_err());
        assert!(Geometry::new(a, a).is_err());
        assert!(Geometry::new(a, PlanarVector::new(f64::NAN, 0.0)).is_err());
    }
}
