//! Compatible terminal velocities, the coordinate `b` and the energy as a
//! function of `b` on each branch.

use crate::error::{LambertError, Result};
use crate::geometry::{Endpoint, Geometry, GeometryClass, PlanarVector};

/// The two families of terminal pairs sharing a value of `b`, told apart by the
/// sign of `C / delta`. On a line through the center, `Positive` is the family
/// whose velocity at the inner endpoint points toward the center; in the
/// opposition class it is the family with `C = +C0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    Positive,
    Negative,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Positive => 1.0,
            Branch::Negative => -1.0,
        }
    }

    /// Even types live on the positive branch, odd types on the negative one.
    pub fn of_type(k: u32) -> Self {
        if k.is_multiple_of(2) {
            Branch::Positive
        } else {
            Branch::Negative
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Branch::Positive => "positive",
            Branch::Negative => "negative",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TerminalPair {
    pub pa: PlanarVector,
    pub pb: PlanarVector,
    /// Angular momentum.
    pub momentum: f64,
    pub energy: f64,
    pub b: f64,
    pub branch: Branch,
}

impl TerminalPair {
    pub fn b_recomputed(&self, g: &Geometry) -> f64 {
        g.qb.dot(self.pb) - g.qa.dot(self.pa)
    }
}

fn require_nonflat(g: &Geometry) -> Result<()> {
    if g.is_nonflat() {
        Ok(())
    } else {
        Err(LambertError::WrongClass)
    }
}

/// `b` as a function of `u = C / delta` on a nonflat triangle.
fn b_of_ratio(g: &Geometry, u: f64) -> f64 {
    let d = g.s2_minus_c2();
    g.c * g.c * u - 2.0 * g.s / (d * u)
}

/// Root of `c^2 u^2 - b u - 2s/(s^2 - c^2) = 0` with the sign of the branch.
fn ratio_of_b(g: &Geometry, b: f64, branch: Branch) -> f64 {
    let d = g.s2_minus_c2();
    let c2 = g.c * g.c;
    let root = (b * b + 8.0 * g.s * c2 / d).sqrt();
    match branch {
        Branch::Positive if b >= 0.0 => (b + root) / (2.0 * c2),
        Branch::Positive => 4.0 * g.s / (d * (root - b)),
        Branch::Negative if b <= 0.0 => (b - root) / (2.0 * c2),
        Branch::Negative => -4.0 * g.s / (d * (b + root)),
    }
}

/// Energy in the factored form `2H (xi eta gamma)^2 = prod (eta +- xi +- gamma)`
/// with `gamma = 2 / (xi eta u)`, which stays accurate when `s^2 - c^2` is small.
fn energy_of_ratio(g: &Geometry, u: f64) -> f64 {
    let gamma = 2.0 / (g.xi * g.eta * u);
    let (minus, plus) = (g.xi_minus_eta(), g.xi + g.eta);
    let product = (gamma - minus) * (gamma + minus) * (gamma - plus) * (gamma + plus);
    0.125 * product * u * u
}

fn pair_from_ratio(g: &Geometry, u: f64) -> TerminalPair {
    let d = g.s2_minus_c2();
    let chord = g.qb - g.qa;
    let radial = 2.0 / (d * u);
    let pa = u * chord + (radial / g.ra) * g.qa;
    let pb = u * chord - (radial / g.rb) * g.qb;
    let branch = if u > 0.0 {
        Branch::Positive
    } else {
        Branch::Negative
    };
    TerminalPair {
        pa,
        pb,
        momentum: u * g.delta,
        energy: energy_of_ratio(g, u),
        b: b_of_ratio(g, u),
        branch,
    }
}

pub fn pair_from_momentum(g: &Geometry, momentum: f64) -> Result<TerminalPair> {
    require_nonflat(g)?;
    if momentum == 0.0 || !momentum.is_finite() {
        return Err(LambertError::ZeroMomentum);
    }
    Ok(pair_from_ratio(g, momentum / g.delta))
}

pub fn b_from_momentum(g: &Geometry, momentum: f64) -> Result<f64> {
    require_nonflat(g)?;
    if momentum == 0.0 || !momentum.is_finite() {
        return Err(LambertError::ZeroMomentum);
    }
    Ok(b_of_ratio(g, momentum / g.delta))
}

pub fn momentum_from_b(g: &Geometry, b: f64, branch: Branch) -> Result<f64> {
    require_nonflat(g)?;
    Ok(ratio_of_b(g, b, branch) * g.delta)
}

/// Motion on a line through the center, written with the start at `xa` and
/// the end at `xb`, `0 < xb < xa`. Velocities are signed along the outward
/// direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct RadialPair {
    pub xa: f64,
    pub xb: f64,
    pub va: f64,
    pub vb: f64,
}

impl RadialPair {
    pub(crate) fn solve(xa: f64, xb: f64, b: f64, branch: Branch) -> Self {
        let gap = xa - xb;
        let a2 = gap * (xa + xb);
        let k = 2.0 * gap / (xa * xb);
        let root = (b * b + a2 * k).sqrt();
        let (va, vb) = match branch {
            // Inbound at the inner point.
            Branch::Positive => {
                let vb = if b >= 0.0 {
                    -(b * xb + xa * root) / a2
                } else {
                    -(b * b + xa * xa * k) / (xa * root - b * xb)
                };
                let va = if b >= 0.0 {
                    -(b * xa + xb * root) / a2
                } else {
                    (b * b - xb * xb * k) / (xb * root - b * xa)
                };
                (va, vb)
            }
            Branch::Negative => {
                let vb = if b <= 0.0 {
                    (xa * root - b * xb) / a2
                } else {
                    (b * b + xa * xa * k) / (xa * root + b * xb)
                };
                let va = if b <= 0.0 {
                    (xb * root - b * xa) / a2
                } else {
                    (xb * xb * k - b * b) / (xb * root + b * xa)
                };
                (va, vb)
            }
        };
        Self { xa, xb, va, vb }
    }

    pub(crate) fn energy(&self) -> f64 {
        0.5 * self.va * self.va - 1.0 / self.xa
    }

    pub(crate) fn energy_derivatives(&self) -> (f64, f64) {
        let (xa, xb, va, vb) = (self.xa, self.xb, self.va, self.vb);
        let den = xb * va - xa * vb;
        let first = va * vb / den;
        let second = (xb * va.powi(3) - xa * vb.powi(3)) / den.powi(3);
        (first, second)
    }
}

/// The radial pair in a frame where the start is the outer point. When A is
/// the inner endpoint the motion is reversed in time, which swaps the roles
/// of the endpoints and keeps `b`.
fn radial_frame(g: &Geometry, b: f64, branch: Branch) -> (RadialPair, bool) {
    match g.class {
        GeometryClass::Rectilinear { inner: Endpoint::B } => {
            (RadialPair::solve(g.ra, g.rb, b, branch), false)
        }
        _ => (RadialPair::solve(g.rb, g.ra, b, branch), true),
    }
}

pub fn pair_from_b(g: &Geometry, b: f64, branch: Branch) -> TerminalPair {
    match g.class {
        GeometryClass::NonFlat(_) => pair_from_ratio(g, ratio_of_b(g, b, branch)),
        GeometryClass::Rectilinear { .. } => {
            let (radial, reversed) = radial_frame(g, b, branch);
            let (va, vb) = if reversed {
                (-radial.vb, -radial.va)
            } else {
                (radial.va, radial.vb)
            };
            let unit = (1.0 / g.ra) * g.qa;
            TerminalPair {
                pa: va * unit,
                pb: vb * unit,
                momentum: 0.0,
                energy: radial.energy(),
                b,
                branch,
            }
        }
        GeometryClass::Opposition => {
            let momentum = branch.sign() * g.boundaries().c0;
            let unit = (1.0 / g.ra) * g.qa;
            let normal = unit.perp();
            let v = -b / g.c;
            TerminalPair {
                pa: v * unit + (momentum / g.ra) * normal,
                pb: v * unit - (momentum / g.rb) * normal,
                momentum,
                energy: opposition_energy(g, b),
                b,
                branch,
            }
        }
    }
}

fn opposition_energy(g: &Geometry, b: f64) -> f64 {
    let ratio = b / g.c;
    0.5 * ratio * ratio - 1.0 / g.c
}

pub fn energy_of_b(g: &Geometry, b: f64, branch: Branch) -> f64 {
    match g.class {
        GeometryClass::NonFlat(_) => energy_of_ratio(g, ratio_of_b(g, b, branch)),
        GeometryClass::Rectilinear { .. } => radial_frame(g, b, branch).0.energy(),
        GeometryClass::Opposition => opposition_energy(g, b),
    }
}

/// First and second derivatives of the energy with respect to `b`.
pub fn energy_derivatives(g: &Geometry, b: f64, branch: Branch) -> (f64, f64) {
    match g.class {
        GeometryClass::NonFlat(_) => {
            let u = ratio_of_b(g, b, branch);
            let d = g.s2_minus_c2();
            let c2 = g.c * g.c;
            let u2 = u * u;
            let dh = c2 * u - 4.0 / (d * d * u2 * u);
            let db = c2 + 2.0 * g.s / (d * u2);
            let dh2 = c2 + 12.0 / (d * d * u2 * u2);
            let db2 = -4.0 * g.s / (d * u2 * u);
            (dh / db, (dh2 * db - dh * db2) / db.powi(3))
        }
        GeometryClass::Rectilinear { .. } => radial_frame(g, b, branch).0.energy_derivatives(),
        GeometryClass::Opposition => {
            let c2 = g.c * g.c;
            (b / c2, 1.0 / c2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn right_triangle() -> Geometry {
        Geometry::new(PlanarVector::new(1.0, 0.0), PlanarVector::new(0.0, 1.0)).unwrap()
    }

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol * b.abs().max(1.0), "{a} vs {b}");
    }

    #[test]
    fn circular_pair() {
        let g = right_triangle();
        let pair = pair_from_momentum(&g, 1.0).unwrap();
        assert_close(pair.pa.x, 0.0, 1e-15);
        assert_close(pair.pa.y, 1.0, 1e-15);
        assert_close(pair.pb.x, -1.0, 1e-15);
        assert_close(pair.pb.y, 0.0, 1e-15);
        assert_close(pair.energy, -0.5, 1e-15);
        assert_close(pair.b, 0.0, 1e-15);
        assert_eq!(pair.branch, Branch::Positive);

        let again = pair_from_b(&g, 0.0, Branch::Positive);
        assert_close(again.momentum, 1.0, 1e-15);
        assert_close(
            momentum_from_b(&g, 0.0, Branch::Negative).unwrap(),
            -1.0,
            1e-15,
        );
    }

    #[test]
    fn parabolic_momenta() {
        let g = right_triangle();
        let k = g.boundaries();
        let pair = pair_from_momentum(&g, k.c0).unwrap();
        assert!(pair.energy.abs() < 1e-10);
        assert_close(pair.b, g.xi_minus_eta(), 1e-12);
        assert_close(pair.b, 1.0823922, 1e-7);
        assert_close(
            b_from_momentum(&g, -k.c0).unwrap(),
            -g.xi_minus_eta(),
            1e-12,
        );
        assert_close(
            momentum_from_b(&g, g.xi_minus_eta(), Branch::Positive).unwrap(),
            k.c0,
            1e-12,
        );
    }

    #[test]
    fn energy_minimum() {
        let g = right_triangle();
        let b = -g.eta * (2.0 * g.c).sqrt() / g.xi;
        assert_close(b, -0.6966213, 1e-7);
        assert_close(
            energy_of_b(&g, b, Branch::Positive),
            -2.0 / (g.s + g.c),
            1e-14,
        );
        assert!(energy_derivatives(&g, b, Branch::Positive).0.abs() < 1e-12);
    }

    #[test]
    fn rejects_flat_and_zero() {
        let g = right_triangle();
        assert_eq!(pair_from_momentum(&g, 0.0), Err(LambertError::ZeroMomentum));
        let flat = Geometry::new(PlanarVector::new(2.0, 0.0), PlanarVector::new(1.0, 0.0)).unwrap();
        assert_eq!(
            pair_from_momentum(&flat, 1.0),
            Err(LambertError::WrongClass)
        );
        assert_eq!(
            momentum_from_b(&flat, 0.0, Branch::Positive),
            Err(LambertError::WrongClass)
        );
    }

    #[test]
    fn rectilinear_pair() {
        let g = Geometry::new(PlanarVector::new(2.0, 0.0), PlanarVector::new(1.0, 0.0)).unwrap();
        let pair = pair_from_b(&g, -1.0, Branch::Positive);
        assert_close(pair.pa.x, 0.0, 1e-15);
        assert_close(pair.pb.x, -1.0, 1e-15);
        assert_close(pair.energy, -0.5, 1e-15);
        let (first, _) = energy_derivatives(&g, -1.0, Branch::Positive);
        assert!(first.abs() < 1e-15);

        let other = pair_from_b(&g, -1.0, Branch::Negative);
        assert!(other.pb.x > 0.0);
        assert_close(other.b_recomputed(&g), -1.0, 1e-14);
    }

    #[test]
    fn rectilinear_reversed() {
        let g = Geometry::new(PlanarVector::new(0.0, 1.0), PlanarVector::new(0.0, 2.0)).unwrap();
        let pair = pair_from_b(&g, 1.0, Branch::Positive);
        assert_close(pair.b_recomputed(&g), 1.0, 1e-14);
        let at_a = 0.5 * pair.pa.dot(pair.pa) - 1.0 / g.ra;
        let at_b = 0.5 * pair.pb.dot(pair.pb) - 1.0 / g.rb;
        assert_close(at_a, at_b, 1e-14);
        assert_close(at_a, pair.energy, 1e-14);
        // On the positive branch the arc leaves the inner point outward.
        assert!(pair.pa.y > 0.0);
    }

    #[test]
    fn opposition_pair() {
        let g = Geometry::new(PlanarVector::new(1.0, 0.0), PlanarVector::new(-1.0, 0.0)).unwrap();
        for branch in [Branch::Positive, Branch::Negative] {
            let pair = pair_from_b(&g, 0.0, branch);
            assert_close(pair.pa.x, 0.0, 1e-15);
            assert_close(pair.pb.x, 0.0, 1e-15);
            assert_close(pair.momentum, branch.sign(), 1e-15);
            assert_close(pair.energy, -0.5, 1e-15);
            assert_close(g.qa.cross(pair.pa), pair.momentum, 1e-15);
            assert_close(g.qb.cross(pair.pb), pair.momentum, 1e-15);
        }
        assert_eq!(energy_derivatives(&g, 0.0, Branch::Positive), (0.0, 0.25));
    }
}
