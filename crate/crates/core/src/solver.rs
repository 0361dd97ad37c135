//! Enumeration of all arcs with a prescribed flight time: windows in `b` per
//! type, minimal flight times of multirevolution types and safeguarded Newton
//! iteration on the convex flight-time curves.

use crate::error::{LambertError, Result};
use crate::geometry::{Geometry, GeometryClass};
use crate::terminal::{pair_from_b, Branch, TerminalPair};
use crate::timeflow::{elements_from_pair, flight_time, flight_time_derivatives, OrbitElements};

pub const MAX_ITERATIONS: usize = 128;

/// Relative tolerance under which a target equal to a minimal flight time
/// yields the single minimizing arc.
pub const TANGENCY_TOLERANCE: f64 = 1e-9;

/// Relative offset of the bracketing points from a finite window end.
const END_OFFSET: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TypeWindow {
    pub k: u32,
    pub branch: Branch,
    pub lo: f64,
    /// `f64::INFINITY` for types 0 and 1.
    pub hi: f64,
    /// Natural scale of `b`, `xi + eta`.
    pub scale: f64,
}

impl TypeWindow {
    pub fn contains(&self, b: f64) -> bool {
        b > self.lo && b < self.hi
    }

    pub fn is_simple(&self) -> bool {
        self.k < 2
    }

    /// `n` points spread over the window: uniform on bounded windows, uniform
    /// in `t = d / (d + scale)` on half-lines, where `d` is the distance to the
    /// finite end.
    pub fn samples(&self, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| {
                let t = (i as f64 + 0.5) / n as f64;
                if self.hi.is_finite() {
                    self.lo + (self.hi - self.lo) * t
                } else {
                    self.lo + self.scale * t / (1.0 - t)
                }
            })
            .collect()
    }
}

pub fn type_window(g: &Geometry, k: u32, branch: Branch) -> Result<TypeWindow> {
    if Branch::of_type(k) != branch {
        return Err(LambertError::WrongParity {
            k,
            branch: branch.name(),
        });
    }
    let sum = g.xi + g.eta;
    let difference = g.xi_minus_eta();
    let (lo, hi) = match (branch, k) {
        (Branch::Positive, 0) => (-sum, f64::INFINITY),
        (Branch::Positive, _) => (-sum, difference),
        (Branch::Negative, 1) => (-difference, f64::INFINITY),
        (Branch::Negative, _) => (-difference, sum),
    };
    Ok(TypeWindow {
        k,
        branch,
        lo,
        hi,
        scale: sum,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimalFlightTime {
    pub k: u32,
    pub branch: Branch,
    pub tau: f64,
    /// Location of the minimum.
    pub b: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub k: u32,
    pub branch: Branch,
    pub b: f64,
    pub pair: TerminalPair,
    pub elements: OrbitElements,
    pub tau: f64,
    /// In the opposition class, odd types are mirror images of even ones
    /// across the line through the endpoints.
    pub reflected: bool,
    /// Newton iterations spent on this root.
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    /// Sorted by type, then by `b`.
    pub arcs: Vec<Arc>,
    /// Number of arcs of each type, indexed by type, up to `k_max`.
    pub counts: Vec<usize>,
    pub minima: Vec<MinimalFlightTime>,
    pub k_max: u32,
}

impl SolveReport {
    pub fn total(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs_of_type(&self, k: u32) -> impl Iterator<Item = &Arc> {
        self.arcs.iter().filter(move |arc| arc.k == k)
    }

    pub fn newton_iterations(&self) -> usize {
        self.arcs.iter().map(|arc| arc.iterations).sum()
    }
}

fn evaluate(g: &Geometry, b: f64, branch: Branch, k: u32) -> Result<(f64, f64, f64)> {
    let tau = flight_time(g, b, branch, k)?;
    let d = flight_time_derivatives(g, b, branch, k, tau)?;
    Ok((tau, d.first, d.second))
}

fn tau_at(g: &Geometry, b: f64, branch: Branch, k: u32) -> Result<f64> {
    flight_time(g, b, branch, k)
}

/// Newton iteration on `ln tau - ln target` inside a bracket on which `tau` is
/// monotone, falling back to bisection whenever a step leaves the bracket.
/// `left` is the end where `tau > target`.
fn monotone_root(
    g: &Geometry,
    window: &TypeWindow,
    target: f64,
    left: f64,
    right: f64,
) -> Result<(f64, usize)> {
    let (branch, k) = (window.branch, window.k);
    let (mut above, mut below) = (left, right);
    let mut x = 0.5 * (left + right);
    let tolerance = 1e-13 * target.max(1.0);
    for iteration in 1..=MAX_ITERATIONS {
        let tau = tau_at(g, x, branch, k)?;
        if (tau - target).abs() <= tolerance {
            return Ok((x, iteration));
        }
        if tau > target {
            above = x;
        } else {
            below = x;
        }
        if (above - below).abs() <= 4.0 * f64::EPSILON * x.abs().max(window.scale * 1e-3) {
            return Ok((x, iteration));
        }
        let slope = flight_time_derivatives(g, x, branch, k, tau)?.first;
        let step = (tau / target).ln() * tau / slope;
        let next = x - step;
        let inside = next.is_finite() && (next - above) * (next - below) < 0.0;
        x = if inside { next } else { 0.5 * (above + below) };
    }
    Err(LambertError::NonConvergence {
        iterations: MAX_ITERATIONS,
    })
}

/// Brackets a root between the finite end `edge` of a monotone piece and the
/// point `inner`, where `tau(inner) < target`, by halving the distance to the
/// edge until the flight time exceeds the target.
fn bracket_toward_edge(
    g: &Geometry,
    window: &TypeWindow,
    target: f64,
    edge: f64,
    inner: f64,
) -> Result<(f64, f64)> {
    let floor = END_OFFSET * window.scale;
    let mut outer = inner;
    let mut distance = (inner - edge).abs();
    let direction = (inner - edge).signum();
    while distance > floor {
        distance = (0.5 * distance).max(floor);
        let candidate = edge + direction * distance;
        if tau_at(g, candidate, window.branch, window.k)? > target {
            return Ok((candidate, outer));
        }
        outer = candidate;
    }
    Err(LambertError::NonConvergence {
        iterations: MAX_ITERATIONS,
    })
}

fn make_arc(
    g: &Geometry,
    b: f64,
    branch: Branch,
    k: u32,
    target: f64,
    iterations: usize,
) -> Result<Arc> {
    let tau = tau_at(g, b, branch, k)?;
    if (tau - target).abs() >= 1e-10 * target.max(1.0) {
        return Err(LambertError::NonConvergence { iterations });
    }
    let pair = pair_from_b(g, b, branch);
    Ok(Arc {
        k,
        branch,
        b,
        pair,
        elements: elements_from_pair(g, &pair),
        tau,
        reflected: g.class == GeometryClass::Opposition && k % 2 == 1,
        iterations,
    })
}

pub fn minimal_flight_time(g: &Geometry, k: u32) -> Result<MinimalFlightTime> {
    if k < 2 {
        return Err(LambertError::NotMultirevolution(k));
    }
    let branch = Branch::of_type(k);
    let window = type_window(g, k, branch)?;
    let width = window.hi - window.lo;

    // The slope increases through zero across the window.
    let (mut lo, mut hi) = (window.lo, window.hi);
    let mut iterations = 0;
    while hi - lo > 1e-3 * width {
        let mid = 0.5 * (lo + hi);
        let (_, slope, _) = evaluate(g, mid, branch, k)?;
        iterations += 1;
        if slope < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let mut b = 0.5 * (lo + hi);
    loop {
        let (_, slope, curvature) = evaluate(g, b, branch, k)?;
        iterations += 1;
        if slope < 0.0 {
            lo = b;
        } else {
            hi = b;
        }
        let step = slope / curvature;
        if slope == 0.0 || step.abs() <= 1e-15 * window.scale {
            break;
        }
        let next = b - step;
        b = if next.is_finite() && next > lo && next < hi {
            next
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= 4.0 * f64::EPSILON * window.scale {
            break;
        }
        if iterations >= MAX_ITERATIONS {
            return Err(LambertError::NonConvergence { iterations });
        }
    }
    let tau = tau_at(g, b, branch, k)?;
    Ok(MinimalFlightTime {
        k,
        branch,
        tau,
        b,
        iterations,
    })
}

/// Arcs of type `k` with flight time `target`. Types 0 and 1 always have one
/// arc; higher types have none below their minimal flight time and two above.
pub fn solve_type(g: &Geometry, target: f64, k: u32) -> Result<Vec<Arc>> {
    let minimum = if k >= 2 {
        Some(minimal_flight_time(g, k)?)
    } else {
        None
    };
    solve_type_with(g, target, k, minimum.as_ref())
}

fn solve_type_with(
    g: &Geometry,
    target: f64,
    k: u32,
    minimum: Option<&MinimalFlightTime>,
) -> Result<Vec<Arc>> {
    if !(target > 0.0 && target.is_finite()) {
        return Err(LambertError::DegenerateInput(
            "flight time must be positive and finite",
        ));
    }
    let branch = Branch::of_type(k);
    let window = type_window(g, k, branch)?;

    let Some(minimum) = minimum else {
        let (left, right) = bracket_simple(g, &window, target)?;
        let (b, iterations) = monotone_root(g, &window, target, left, right)?;
        return Ok(vec![make_arc(g, b, branch, k, target, iterations)?]);
    };

    if target < minimum.tau * (1.0 - TANGENCY_TOLERANCE) {
        return Err(LambertError::NoSolution {
            k,
            target,
            minimum: minimum.tau,
        });
    }
    if target <= minimum.tau * (1.0 + TANGENCY_TOLERANCE) {
        let pair = pair_from_b(g, minimum.b, branch);
        return Ok(vec![Arc {
            k,
            branch,
            b: minimum.b,
            pair,
            elements: elements_from_pair(g, &pair),
            tau: minimum.tau,
            reflected: g.class == GeometryClass::Opposition && k % 2 == 1,
            iterations: 0,
        }]);
    }

    let (left, right) = bracket_toward_edge(g, &window, target, window.lo, minimum.b)?;
    let (b_left, it_left) = monotone_root(g, &window, target, left, right)?;
    let (left, right) = bracket_toward_edge(g, &window, target, window.hi, minimum.b)?;
    let (b_right, it_right) = monotone_root(g, &window, target, left, right)?;
    Ok(vec![
        make_arc(g, b_left, branch, k, target, it_left)?,
        make_arc(g, b_right, branch, k, target, it_right)?,
    ])
}

/// Bracket on a half-line window, where the flight time decreases from
/// infinity at the finite end to zero at infinity.
fn bracket_simple(g: &Geometry, window: &TypeWindow, target: f64) -> Result<(f64, f64)> {
    let mut distance = window.scale;
    let start = window.lo + distance;
    if tau_at(g, start, window.branch, window.k)? > target {
        let mut near = start;
        for _ in 0..MAX_ITERATIONS {
            distance *= 2.0;
            let far = window.lo + distance;
            if tau_at(g, far, window.branch, window.k)? <= target {
                return Ok((near, far));
            }
            near = far;
        }
        Err(LambertError::NonConvergence {
            iterations: MAX_ITERATIONS,
        })
    } else {
        bracket_toward_edge(g, window, target, window.lo, start)
    }
}

/// Largest type worth examining: minimal flight times of equal parity are
/// separated by more than the least period through A and B.
pub fn type_bound(g: &Geometry, target: f64) -> u32 {
    let t0 = g.boundaries().t0;
    let periods = ((target - t0) / g.gap_bound()).ceil().max(0.0);
    2 * periods as u32 + 3
}

pub fn solve_all(g: &Geometry, target: f64) -> Result<SolveReport> {
    solve_up_to(g, target, type_bound(g, target))
}

/// As [`solve_all`], examining types up to `k_max` only.
pub fn solve_up_to(g: &Geometry, target: f64, k_max: u32) -> Result<SolveReport> {
    let k_max = k_max.max(1);
    let mut arcs = Vec::new();
    let mut counts = Vec::with_capacity(k_max as usize + 1);
    let mut minima = Vec::new();
    for k in 0..=k_max {
        let minimum = if k >= 2 {
            Some(minimal_flight_time(g, k)?)
        } else {
            None
        };
        let found = match solve_type_with(g, target, k, minimum.as_ref()) {
            Ok(found) => found,
            Err(LambertError::NoSolution { .. }) => Vec::new(),
            Err(e) => return Err(e),
        };
        counts.push(found.len());
        arcs.extend(found);
        minima.extend(minimum);
    }
    arcs.sort_by(|x, y| x.k.cmp(&y.k).then(x.b.total_cmp(&y.b)));
    Ok(SolveReport {
        arcs,
        counts,
        minima,
        k_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PlanarVector;
    use std::f64::consts::{FRAC_PI_2, TAU};

    fn right_triangle() -> Geometry {
        Geometry::new(PlanarVector::new(1.0, 0.0), PlanarVector::new(0.0, 1.0)).unwrap()
    }

    #[test]
    fn windows() {
        let g = right_triangle();
        let w = type_window(&g, 0, Branch::Positive).unwrap();
        assert!((w.lo + 2.6131259).abs() < 1e-7 && w.hi == f64::INFINITY);
        let w = type_window(&g, 2, Branch::Positive).unwrap();
        assert!((w.hi - 1.0823922).abs() < 1e-7);
        let w = type_window(&g, 1, Branch::Negative).unwrap();
        assert!((w.lo + g.xi - g.eta).abs() < 1e-14);
        assert!(type_window(&g, 1, Branch::Positive).is_err());
    }

    #[test]
    fn circular_arc() {
        let g = right_triangle();
        let arcs = solve_type(&g, FRAC_PI_2, 0).unwrap();
        assert_eq!(arcs.len(), 1);
        assert!(arcs[0].b.abs() < 1e-10);
        assert!((arcs[0].pair.momentum - 1.0).abs() < 1e-10);
    }

    #[test]
    fn multirevolution_counts() {
        let g = right_triangle();
        assert!(matches!(
            solve_type(&g, FRAC_PI_2, 2),
            Err(LambertError::NoSolution { .. })
        ));
        let arcs = solve_type(&g, FRAC_PI_2 + TAU, 2).unwrap();
        assert_eq!(arcs.len(), 2);
        assert!(arcs.iter().any(|a| a.b.abs() < 1e-9));
        assert!(arcs[0].b < arcs[1].b);
    }

    #[test]
    fn minimum_is_stationary() {
        let g = right_triangle();
        let m = minimal_flight_time(&g, 2).unwrap();
        let (h1, _) = crate::terminal::energy_derivatives(&g, m.b, Branch::Positive);
        assert!((3.0 * m.tau * h1 - 2.0).abs() < 1e-8);
        let tangent = solve_type(&g, m.tau, 2).unwrap();
        assert_eq!(tangent.len(), 1);
    }

    #[test]
    fn small_time_has_two_arcs() {
        let g = right_triangle();
        let report = solve_all(&g, 0.5 * g.boundaries().t0).unwrap();
        assert_eq!(report.total(), 2);
        let report = solve_all(&g, FRAC_PI_2).unwrap();
        assert_eq!(report.total(), 2);
    }
}
