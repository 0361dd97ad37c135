//! Orbital elements of a terminal pair and the flight time along each type of
//! arc, with its first two derivatives in `b`.

use std::f64::consts::TAU;

use crate::error::{LambertError, Result};
use crate::geometry::{Geometry, GeometryClass, PlanarVector};
use crate::solver::type_window;
use crate::terminal::{energy_derivatives, energy_of_b, pair_from_b, Branch, TerminalPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conic {
    Elliptic,
    Parabolic,
    Hyperbolic,
    RectilinearElliptic,
    RectilinearParabolic,
    RectilinearHyperbolic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitElements {
    pub momentum: f64,
    /// Components of the vector `(alpha, beta)` in the orbit equation
    /// `r = alpha x + beta y + C^2`; it points from the pericenter to the center.
    pub alpha: f64,
    pub beta: f64,
    pub energy: f64,
    pub semi_major_axis: Option<f64>,
    pub eccentricity: f64,
    pub conic: Conic,
}

/// Angular momentum, the two components of `(alpha, beta)` and the energy of
/// the state `(q, p)`.
pub fn first_integrals(q: PlanarVector, p: PlanarVector) -> (f64, f64, f64, f64) {
    let r = q.norm();
    let momentum = q.cross(p);
    let alpha = q.x / r - momentum * p.y;
    let beta = q.y / r + momentum * p.x;
    let energy = 0.5 * p.dot(p) - 1.0 / r;
    (momentum, alpha, beta, energy)
}

/// Energies this close to zero are treated as parabolic.
pub fn parabolic_band(g: &Geometry) -> f64 {
    1e-9 * 2.0 / g.s
}

pub fn elements_from_pair(g: &Geometry, pair: &TerminalPair) -> OrbitElements {
    let (momentum, alpha, beta, energy) = first_integrals(g.qa, pair.pa);
    let rectilinear = momentum.abs() <= 1e-12 * g.ra * pair.pa.norm();
    let parabolic = energy.abs() <= parabolic_band(g);
    let conic = match (rectilinear, parabolic, energy < 0.0) {
        (false, true, _) => Conic::Parabolic,
        (false, false, true) => Conic::Elliptic,
        (false, false, false) => Conic::Hyperbolic,
        (true, true, _) => Conic::RectilinearParabolic,
        (true, false, true) => Conic::RectilinearElliptic,
        (true, false, false) => Conic::RectilinearHyperbolic,
    };
    OrbitElements {
        momentum,
        alpha,
        beta,
        energy,
        semi_major_axis: (energy != 0.0).then(|| -0.5 / energy),
        eccentricity: alpha.hypot(beta),
        conic,
    }
}

pub fn period_of(energy: f64) -> Result<f64> {
    if energy < 0.0 {
        Ok(TAU * (-2.0 * energy).powf(-1.5))
    } else {
        Err(LambertError::NotElliptic(energy))
    }
}

/// Stumpff functions `c1, c2, c3` of `psi`.
pub(crate) fn stumpff(psi: f64) -> (f64, f64, f64) {
    if psi.abs() < 1.0 {
        // Alternating factorial series; 20 terms exhaust double precision here.
        let mut c1 = 0.0;
        let mut c2 = 0.0;
        let mut c3 = 0.0;
        let mut term = 1.0;
        for n in 0..20 {
            let n = n as f64;
            // term = (-psi)^n / (2n + 1)!
            c1 += term;
            let t2 = term / (2.0 * n + 2.0);
            c2 += t2;
            c3 += t2 / (2.0 * n + 3.0);
            term *= -psi / ((2.0 * n + 2.0) * (2.0 * n + 3.0));
        }
        (c1, c2, c3)
    } else if psi > 0.0 {
        let root = psi.sqrt();
        let half = (0.5 * root).sin();
        (
            root.sin() / root,
            2.0 * half * half / psi,
            (root - root.sin()) / (psi * root),
        )
    } else {
        let root = (-psi).sqrt();
        let half = (0.5 * root).sinh();
        (
            root.sinh() / root,
            2.0 * half * half / -psi,
            (root.sinh() - root) / (-psi * root),
        )
    }
}

/// `x - sin x`, accurate for small `x`.
fn x_minus_sin(x: f64) -> f64 {
    if x.abs() < 1.0 {
        odd_series(x, -1.0)
    } else {
        x - x.sin()
    }
}

/// `sinh x - x`, accurate for small `x`.
fn sinh_minus_x(x: f64) -> f64 {
    if x.abs() < 1.0 {
        odd_series(x, 1.0)
    } else {
        x.sinh() - x
    }
}

/// `sum_{n>=1} sign^(n+1) x^(2n+1) / (2n+1)!`.
fn odd_series(x: f64, sign: f64) -> f64 {
    let x2 = x * x;
    let mut term = x * x2 / 6.0;
    let mut sum = 0.0;
    for n in 1..20 {
        sum += term;
        let n = n as f64;
        term *= sign * x2 / ((2.0 * n + 2.0) * (2.0 * n + 3.0));
    }
    sum
}

/// First passage time from anomalies counted at pericenter for each endpoint,
/// with the Kepler equation differenced in a form free of cancellation. Only
/// used away from circular orbits, where the pericenter is well defined;
/// covers the rectilinear arcs, whose pericenter is the collision.
fn pericenter_arrival(g: &Geometry, pair: &TerminalPair, alpha: f64, eccentricity: f64) -> f64 {
    let (sigma_a, sigma_b) = (g.qa.dot(pair.pa), g.qb.dot(pair.pb));
    let pericenter = pair.momentum * pair.momentum / (1.0 + eccentricity);
    if alpha > 0.0 {
        let root = alpha.sqrt();
        let anomaly = |r: f64, sigma: f64| {
            (sigma * root / eccentricity).atan2(1.0 - alpha * (r - pericenter) / eccentricity)
        };
        let start = anomaly(g.ra, sigma_a);
        let mut end = anomaly(g.rb, sigma_b);
        if end <= start {
            end += TAU;
        }
        let (half_sum, half_gap) = (0.25 * (start + end), 0.5 * (end - start));
        let s = half_sum.sin();
        let offset = alpha * pericenter + 2.0 * eccentricity * s * s;
        (2.0 * x_minus_sin(half_gap) + 2.0 * half_gap.sin() * offset) / (alpha * root)
    } else if alpha < 0.0 {
        let root = (-alpha).sqrt();
        let anomaly = |sigma: f64| (sigma * root / eccentricity).asinh();
        let (start, end) = (anomaly(sigma_a), anomaly(sigma_b));
        if end <= start {
            return f64::NAN;
        }
        let (half_sum, half_gap) = (0.25 * (start + end), 0.5 * (end - start));
        let s = half_sum.sinh();
        let offset = -alpha * pericenter + 2.0 * eccentricity * s * s;
        (2.0 * sinh_minus_x(half_gap) + 2.0 * half_gap.sinh() * offset) / (-alpha * root)
    } else {
        let (start, end) = (sigma_a, sigma_b);
        pericenter * (end - start) + (end.powi(3) - start.powi(3)) / 6.0
    }
}

/// Time to go from `(qa, pa)` to the first passage at B in the state given by
/// the pair, through the universal anomaly. The two universal functions of
/// lowest order are read off the geometry, the anomaly is recovered from
/// their ratio and the time follows from the universal Kepler equation.
fn first_arrival(g: &Geometry, pair: &TerminalPair) -> f64 {
    let alpha = -2.0 * pair.energy;
    let sigma_a = g.qa.dot(pair.pa);
    let eccentricity = (1.0 + 2.0 * pair.energy * pair.momentum * pair.momentum)
        .max(0.0)
        .sqrt();
    if eccentricity >= 0.5 || matches!(g.class, GeometryClass::Rectilinear { .. }) {
        return pericenter_arrival(g, pair, alpha, eccentricity);
    }
    let (u1, u2) = match g.class {
        GeometryClass::Rectilinear { .. } => unreachable!(),
        GeometryClass::NonFlat(_) => {
            let ratio = pair.momentum / g.delta;
            let d = g.s2_minus_c2();
            let u2 = 2.0 / (d * ratio * ratio);
            (2.0 / (d * ratio) * (g.s - u2), u2)
        }
        GeometryClass::Opposition => (-g.s * sigma_a / g.ra, g.s),
    };
    let chi = if alpha > 0.0 {
        let root = alpha.sqrt();
        2.0 * (root * u2).atan2(u1) / root
    } else if alpha < 0.0 {
        let root = (-alpha).sqrt();
        if u1 <= 0.0 {
            return f64::NAN;
        }
        let z = root * u2 / u1;
        if z < 0.5 {
            2.0 * z.atanh() / root
        } else {
            // u1^2 + alpha u2^2 = 2 u2 keeps 1 - z free of cancellation.
            2.0 * ((u1 + root * u2) / (2.0 * u2).sqrt()).ln() / root
        }
    } else {
        2.0 * u2 / u1
    };
    let (c1, c2, c3) = stumpff(alpha * chi * chi);
    let chi2 = chi * chi;
    g.ra * chi * c1 + sigma_a * chi2 * c2 + chi2 * chi * c3
}

/// Flight time of the type-`k` arc carried by `pair`, without window checks.
pub(crate) fn time_of_pair(g: &Geometry, pair: &TerminalPair, k: u32) -> Result<f64> {
    let first = first_arrival(g, pair);
    let revolutions = k / 2;
    let tau = if revolutions == 0 {
        first
    } else {
        first + f64::from(revolutions) * period_of(pair.energy)?
    };
    if tau.is_finite() && tau > 0.0 {
        Ok(tau)
    } else {
        Err(LambertError::NotElliptic(pair.energy))
    }
}

fn out_of_window(g: &Geometry, b: f64, branch: Branch, k: u32) -> Result<LambertError> {
    let window = type_window(g, k, branch)?;
    Ok(LambertError::OutOfWindow {
        k,
        b,
        lo: window.lo,
        hi: window.hi,
    })
}

pub fn flight_time(g: &Geometry, b: f64, branch: Branch, k: u32) -> Result<f64> {
    let window = type_window(g, k, branch)?;
    if !window.contains(b) {
        return Err(out_of_window(g, b, branch, k)?);
    }
    let pair = pair_from_b(g, b, branch);
    match time_of_pair(g, &pair, k) {
        Ok(tau) => Ok(tau),
        Err(_) => Err(out_of_window(g, b, branch, k)?),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlightTimeDerivatives {
    pub first: f64,
    pub second: f64,
    /// Set when the energy is inside the parabolic band and both values come
    /// from finite differences.
    pub reduced_precision: bool,
    /// `3 tau H' - 2` when the energy is inside the parabolic band, where the
    /// variational equation reduces to `3 tau H' = 2`.
    pub parabolic_residual: Option<f64>,
}

/// Derivatives of `tau(b)` from the variational equation `2 H tau' + 3 tau H' = 2`
/// and its derivative.
pub fn flight_time_derivatives(
    g: &Geometry,
    b: f64,
    branch: Branch,
    k: u32,
    tau: f64,
) -> Result<FlightTimeDerivatives> {
    let window = type_window(g, k, branch)?;
    if !window.contains(b) {
        return Err(out_of_window(g, b, branch, k)?);
    }
    let energy = energy_of_b(g, b, branch);
    let (h1, h2) = energy_derivatives(g, b, branch);
    if energy.abs() > parabolic_band(g) {
        let first = (2.0 - 3.0 * tau * h1) / (2.0 * energy);
        let second = -(5.0 * h1 * first + 3.0 * h2 * tau) / (2.0 * energy);
        return Ok(FlightTimeDerivatives {
            first,
            second,
            reduced_precision: false,
            parabolic_residual: None,
        });
    }
    let mut step = 1e-4 * (g.xi + g.eta);
    if window.hi.is_finite() {
        step = step.min(0.25 * (window.hi - b));
    }
    step = step.min(0.25 * (b - window.lo));
    let ahead = flight_time(g, b + step, branch, k)?;
    let behind = flight_time(g, b - step, branch, k)?;
    Ok(FlightTimeDerivatives {
        first: (ahead - behind) / (2.0 * step),
        second: (ahead - 2.0 * tau + behind) / (step * step),
        reduced_precision: true,
        parabolic_residual: Some(3.0 * tau * h1 - 2.0),
    })
}
