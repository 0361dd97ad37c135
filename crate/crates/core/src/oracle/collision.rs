//! Time to collision for motion on a line through the center, and flight
//! times of any triangle through its rectilinear equivalent with the same
//! `s` and `c`.

use std::f64::consts::{SQRT_2, TAU};

use crate::error::{LambertError, Result};
use crate::geometry::{Geometry, GeometryClass};
use crate::terminal::Branch;

/// `w - sin w`, accurate for small `w`.
fn w_minus_sin(w: f64) -> f64 {
    if w.abs() < 1.0 {
        series_odd_tail(w, -1.0)
    } else {
        w - w.sin()
    }
}

/// `sinh u - u`, accurate for small `u`.
fn sinh_minus_u(u: f64) -> f64 {
    if u.abs() < 1.0 {
        series_odd_tail(u, 1.0)
    } else {
        u.sinh() - u
    }
}

/// `sum_{n>=1} sign^(n+1) w^(2n+1) / (2n+1)!`
fn series_odd_tail(w: f64, sign: f64) -> f64 {
    let w2 = w * w;
    let mut term = w * w2 / 6.0;
    let mut sum = 0.0;
    for n in 1..20 {
        sum += term;
        let m = (2 * n + 2) as f64;
        term *= sign * w2 / (m * (m + 1.0));
    }
    sum
}

/// Time for a body at distance `x` from the center with radial velocity `v`
/// (positive outward) and no angular momentum to reach the center.
pub fn collision_time(x: f64, v: f64) -> Result<f64> {
    let energy = 0.5 * v * v - 1.0 / x;
    if energy < 0.0 {
        let a = -0.5 / energy;
        let mut w = (-x * v / a.sqrt()).atan2(1.0 - x / a);
        if w <= 0.0 {
            w += TAU;
        }
        Ok(a.powf(1.5) * w_minus_sin(w))
    } else if v >= 0.0 {
        Err(LambertError::NoCollision)
    } else if energy == 0.0 {
        Ok(SQRT_2 * x.powf(1.5) / 3.0)
    } else {
        let a = 0.5 / energy;
        let u = (-x * v / a.sqrt()).asinh();
        Ok(a.powf(1.5) * sinh_minus_u(u))
    }
}

/// Partial derivative of the collision time with respect to `v` at fixed `x`,
/// from `2 H eta' + 3 v eta = -2 x`.
pub fn collision_time_rate(x: f64, v: f64) -> Result<f64> {
    let eta = collision_time(x, v)?;
    let energy = 0.5 * v * v - 1.0 / x;
    if energy.abs() * x < 1e-6 {
        // Removable singularity at zero energy; central difference instead.
        let h = 1e-4 * (2.0 / x).sqrt();
        return Ok((collision_time(x, v + h)? - collision_time(x, v - h)?) / (2.0 * h));
    }
    Ok(-(2.0 * x + 3.0 * v * eta) / (2.0 * energy))
}

/// First passage time and energy of the arc with coordinate `b` between two
/// points on a line through the center, the start at `outer > 0` and the end
/// at `inner`, `0 <= inner < outer`. A zero `inner` stands for the opposition
/// class, where the end lies on the other side of the center.
pub fn rectilinear_first_arrival(
    outer: f64,
    inner: f64,
    b: f64,
    branch: Branch,
) -> Result<(f64, f64)> {
    let (va, vb) = rectilinear_velocities(outer, inner, b, branch);
    let energy = 0.5 * va * va - 1.0 / outer;
    if inner == 0.0 {
        return Ok((collision_time(outer, va)?, energy));
    }
    let first = match branch {
        // Falls through the inner point on the way in.
        Branch::Positive => collision_time(outer, va)? - collision_time(inner, vb)?,
        // Bounces, then climbs back out to the inner point.
        Branch::Negative => collision_time(outer, va)? + collision_time(inner, -vb)?,
    };
    Ok((first, energy))
}

/// Radial velocities at the outer and inner points. Conservation of energy
/// and `b = inner vb - outer va` give a quadratic in `vb`; the root of the
/// branch comes from whichever of the sum or product forms avoids cancellation.
fn rectilinear_velocities(outer: f64, inner: f64, b: f64, branch: Branch) -> (f64, f64) {
    if inner == 0.0 {
        return (-b / outer, f64::NAN);
    }
    let a2 = outer * outer - inner * inner;
    let k2 = 2.0 / inner - 2.0 / outer;
    let root = outer * (b * b + a2 * k2).sqrt();
    let product = -(b * b + outer * outer * k2) / a2;
    let vb = match branch {
        Branch::Positive if b >= 0.0 => -(b * inner + root) / a2,
        Branch::Positive => product / ((root - b * inner) / a2),
        Branch::Negative if b <= 0.0 => (root - b * inner) / a2,
        Branch::Negative => product / (-(b * inner + root) / a2),
    };
    ((inner * vb - b) / outer, vb)
}

/// Energy of the arc with coordinate `b` on a line through the center.
pub fn rectilinear_energy(outer: f64, inner: f64, b: f64, branch: Branch) -> f64 {
    let (va, _) = rectilinear_velocities(outer, inner, b, branch);
    0.5 * va * va - 1.0 / outer
}

fn line_period(energy: f64) -> Result<f64> {
    if energy >= 0.0 {
        return Err(LambertError::NotElliptic(energy));
    }
    Ok(TAU * (-2.0 * energy).powf(-1.5))
}

/// Flight time of the type-`k` arc: the first passage plus whole periods.
pub fn rectilinear_flight_time(
    outer: f64,
    inner: f64,
    b: f64,
    branch: Branch,
    k: u32,
) -> Result<f64> {
    let (first, energy) = rectilinear_first_arrival(outer, inner, b, branch)?;
    if k < 2 {
        return Ok(first);
    }
    Ok(first + f64::from(k / 2) * line_period(energy)?)
}

/// Endpoints of the rectilinear problem with the same radius sum and chord:
/// `(s + c)/2` and `(s - c)/2`, the latter zero in the opposition class.
fn reduced_ends(g: &Geometry) -> (f64, f64) {
    let outer = 0.5 * (g.s + g.c);
    let inner = match g.class {
        GeometryClass::Opposition => 0.0,
        _ => 0.5 * g.s2_minus_c2() / (g.s + g.c),
    };
    (outer, inner)
}

/// Flight time of the reduced rectilinear problem.
pub fn reduced_flight_time(g: &Geometry, b: f64, branch: Branch, k: u32) -> Result<f64> {
    let (outer, inner) = reduced_ends(g);
    rectilinear_flight_time(outer, inner, b, branch, k)
}

/// Energy of the reduced rectilinear problem.
pub fn reduced_energy(g: &Geometry, b: f64, branch: Branch) -> f64 {
    let (outer, inner) = reduced_ends(g);
    rectilinear_energy(outer, inner, b, branch)
}

/// First passage time and period (NaN when not elliptic) of the reduced
/// rectilinear problem.
pub fn reduced_first_arrival_and_period(
    g: &Geometry,
    b: f64,
    branch: Branch,
) -> Result<(f64, f64)> {
    let (outer, inner) = reduced_ends(g);
    let (first, energy) = rectilinear_first_arrival(outer, inner, b, branch)?;
    Ok((first, line_period(energy).unwrap_or(f64::NAN)))
}
