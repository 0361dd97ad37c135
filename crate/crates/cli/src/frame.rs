//! Reduction of 3-D user input to the normalized planar problem and back.

use crate::Failure;
use keplerian_arcs::{Geometry, GeometryClass, PlanarVector};

pub type Vec3 = [f64; 3];

fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn scaled(k: f64, a: Vec3) -> Vec3 {
    [k * a[0], k * a[1], k * a[2]]
}

fn minus(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

fn unit(a: Vec3) -> Option<Vec3> {
    let n = norm(a);
    (n > 0.0 && n.is_finite()).then(|| scaled(1.0 / n, a))
}

/// Conversion factors between user units and the normalized problem, where
/// `|qA| = 1` and the gravitational parameter is 1.
#[derive(Debug, Clone, Copy)]
pub struct Scales {
    pub length: f64,
    pub time: f64,
}

impl Scales {
    pub fn new(length: f64, mu: f64) -> Self {
        Self {
            length,
            time: (length.powi(3) / mu).sqrt(),
        }
    }

    pub fn velocity(&self) -> f64 {
        self.length / self.time
    }

    /// Units of `b` and of the angular momentum.
    pub fn momentum(&self) -> f64 {
        self.length * self.velocity()
    }

    pub fn energy(&self) -> f64 {
        self.velocity().powi(2)
    }

    /// Units of `d tau / d b`.
    pub fn rate(&self) -> f64 {
        self.time / self.momentum()
    }
}

/// Orthonormal basis of the orbit plane, `x` along `qA`.
#[derive(Debug, Clone, Copy)]
pub struct Frame {
    pub x: Vec3,
    pub y: Vec3,
    pub scales: Scales,
}

impl Frame {
    /// Builds the frame and the normalized planar geometry. A 2-vector input
    /// lies in the plane with normal `+z`.
    pub fn reduce(
        qa: Vec3,
        qb: Vec3,
        normal: Option<Vec3>,
        mu: f64,
    ) -> Result<(Self, Geometry), Failure> {
        let length = norm(qa);
        let x =
            unit(qa).ok_or_else(|| Failure::Input("qa must be a nonzero finite vector".into()))?;
        let scales = Scales::new(length, mu);
        let along = dot(qb, x);
        let rejection = minus(qb, scaled(along, x));
        let offset = norm(rejection);
        let planar = |y: f64| PlanarVector::new(along / length, y / length);
        let provisional = Geometry::new(PlanarVector::new(1.0, 0.0), planar(offset))?;

        let y = match provisional.class {
            GeometryClass::NonFlat(_) => {
                let y = scaled(1.0 / offset, rejection);
                match normal {
                    Some(n) if dot(n, cross(x, y)) < 0.0 => scaled(-1.0, y),
                    _ => y,
                }
            }
            GeometryClass::Opposition => {
                let n = normal.ok_or(Failure::MissingPlane)?;
                in_plane_axis(n, x)?
            }
            GeometryClass::Rectilinear { .. } => match normal {
                Some(n) => in_plane_axis(n, x)?,
                None => any_perpendicular(x),
            },
        };
        let geometry = Geometry::new(PlanarVector::new(1.0, 0.0), planar(dot(rejection, y)))?;
        Ok((Self { x, y, scales }, geometry))
    }

    /// A normalized planar velocity in user units.
    pub fn lift_velocity(&self, p: PlanarVector) -> Vec3 {
        let v = self.scales.velocity();
        // Adding zero clears negative zeros from the output.
        [0, 1, 2].map(|i| v * (p.x * self.x[i] + p.y * self.y[i]) + 0.0)
    }
}

fn in_plane_axis(normal: Vec3, x: Vec3) -> Result<Vec3, Failure> {
    unit(cross(normal, x))
        .ok_or_else(|| Failure::Input("plane normal must be nonzero and not parallel to qa".into()))
}

fn any_perpendicular(x: Vec3) -> Vec3 {
    let weakest = (0..3)
        .min_by(|&i, &j| x[i].abs().total_cmp(&x[j].abs()))
        .unwrap_or(0);
    let mut axis = [0.0; 3];
    axis[weakest] = 1.0;
    unit(cross(axis, x)).unwrap_or([0.0, 1.0, 0.0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_follows_normal() {
        let (frame, g) = Frame::reduce(
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            Some([0.0, 0.0, -1.0]),
            1.0,
        )
        .unwrap();
        assert_eq!(frame.y, [0.0, -1.0, 0.0]);
        assert!(g.delta < 0.0);
    }

    #[test]
    fn opposition_needs_normal() {
        assert!(matches!(
            Frame::reduce([1.0, 0.0, 0.0], [-2.0, 0.0, 0.0], None, 1.0),
            Err(Failure::MissingPlane)
        ));
        let (frame, g) = Frame::reduce(
            [1.0, 0.0, 0.0],
            [-2.0, 0.0, 0.0],
            Some([0.0, 0.0, 1.0]),
            1.0,
        )
        .unwrap();
        assert_eq!(g.class, GeometryClass::Opposition);
        assert_eq!(frame.y, [0.0, 1.0, 0.0]);
    }

    #[test]
    fn tilted_plane() {
        let (frame, g) = Frame::reduce([0.0, 3.0, 0.0], [0.0, 0.0, 4.0], None, 2.0).unwrap();
        assert!((g.qb.y - 4.0 / 3.0).abs() < 1e-15);
        let v = frame.lift_velocity(PlanarVector::new(0.0, 1.0));
        assert!((v[2] - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }
}
