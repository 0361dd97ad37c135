//! Solution counts by dense sampling of the flight-time curves of the reduced
//! rectilinear problem, counting sign changes of `tau(b) - target`.

use std::f64::consts::TAU;

use crate::geometry::Geometry;
use crate::oracle::collision::{reduced_first_arrival_and_period, reduced_flight_time};
use crate::terminal::Branch;

/// Relative closeness to the target under which a sampled minimum counts as
/// a tangency.
const TANGENCY: f64 = 1e-9;

fn window(g: &Geometry, k: u32, branch: Branch) -> (f64, f64, f64) {
    let (xi, eta) = (g.xi, g.eta);
    let (lo, hi) = match branch {
        Branch::Positive => (-xi - eta, if k == 0 { f64::INFINITY } else { xi - eta }),
        Branch::Negative => (eta - xi, if k == 1 { f64::INFINITY } else { xi + eta }),
    };
    (lo, hi, xi + eta)
}

fn grid(lo: f64, hi: f64, scale: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let t = (i as f64 + 0.5) / n as f64;
            if hi.is_finite() {
                lo + (hi - lo) * t
            } else {
                lo + scale * t / (1.0 - t)
            }
        })
        .collect()
}

/// Minimum of a unimodal function on `[a, b]` by golden-section search.
fn golden_minimum(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = f(x2);
        }
    }
    f1.min(f2)
}

fn sign_changes(values: impl Iterator<Item = f64>, target: f64) -> usize {
    let mut previous: Option<bool> = None;
    let mut changes = 0;
    for v in values.filter(|v| v.is_finite()) {
        let above = v > target;
        if previous.is_some_and(|p| p != above) {
            changes += 1;
        }
        previous = Some(above);
    }
    changes
}

/// Sampled flight times of one type.
#[derive(Debug, Clone)]
pub struct WindowSweep {
    geometry: Geometry,
    k: u32,
    branch: Branch,
    pub b: Vec<f64>,
    pub tau: Vec<f64>,
}

impl WindowSweep {
    pub fn new(g: &Geometry, k: u32, branch: Branch, n: usize) -> Self {
        let (lo, hi, scale) = window(g, k, branch);
        let b = grid(lo, hi, scale, n);
        let tau = b
            .iter()
            .map(|&b| reduced_flight_time(g, b, branch, k).unwrap_or(f64::NAN))
            .collect();
        Self {
            geometry: *g,
            k,
            branch,
            b,
            tau,
        }
    }

    pub fn count(&self, target: f64) -> usize {
        if self.k.is_multiple_of(2) != (self.branch == Branch::Positive) {
            return 0;
        }
        let changes = sign_changes(self.tau.iter().copied(), target);
        if self.k < 2 || changes > 2 {
            return changes;
        }
        let tau = |b: f64| {
            reduced_flight_time(&self.geometry, b, self.branch, self.k).unwrap_or(f64::INFINITY)
        };
        if tangent(&self.b, &self.tau, tau, target) {
            1
        } else {
            changes
        }
    }
}

/// Whether the curve touches `target` at its minimum, within the relative
/// tolerance that also decides tangency in the solver. Sampling alone cannot
/// tell a tangency from a pair of crossings a few ulps apart.
fn tangent(b: &[f64], values: &[f64], tau: impl Fn(f64) -> f64, target: f64) -> bool {
    let Some((i, &sampled)) = values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_finite())
        .min_by(|x, y| x.1.total_cmp(y.1))
    else {
        return false;
    };
    if i == 0 || i + 1 >= b.len() || (sampled - target).abs() > 1e-6 * target {
        return false;
    }
    let minimum = golden_minimum(tau, b[i - 1], b[i + 1]);
    (minimum - target).abs() <= TANGENCY * target
}

/// Number of type-`k` arcs on `branch` with flight time `target`, counted on
/// `n` samples of the window.
pub fn sweep_count(g: &Geometry, target: f64, k: u32, branch: Branch, n: usize) -> usize {
    WindowSweep::new(g, k, branch, n).count(target)
}

/// Samples shared by all multirevolution types of one parity: the flight time
/// of type `k` is the first passage time plus `k / 2` periods.
#[derive(Debug, Clone)]
pub struct FamilySweep {
    geometry: Geometry,
    branch: Branch,
    b: Vec<f64>,
    first: Vec<f64>,
    period: Vec<f64>,
}

impl FamilySweep {
    pub fn new(g: &Geometry, branch: Branch, n: usize) -> Self {
        let parity = if branch == Branch::Positive { 2 } else { 3 };
        let (lo, hi, scale) = window(g, parity, branch);
        let b = grid(lo, hi, scale, n);
        let (first, period) = b
            .iter()
            .map(|&b| {
                reduced_first_arrival_and_period(g, b, branch).unwrap_or((f64::NAN, f64::NAN))
            })
            .unzip();
        Self {
            geometry: *g,
            branch,
            b,
            first,
            period,
        }
    }

    fn parity(&self) -> u32 {
        if self.branch == Branch::Positive {
            0
        } else {
            1
        }
    }

    /// Counts for revolutions `m = 1..=m_max`, that is for types `2m` or `2m + 1`.
    /// Entry `m - 1` belongs to `m` revolutions.
    pub fn counts(&self, target: f64, m_max: u32) -> Vec<usize> {
        let m_max = m_max as usize;
        // Sample i is above the target for m revolutions exactly when m > q_i.
        let q: Vec<f64> = self
            .first
            .iter()
            .zip(&self.period)
            .map(|(first, period)| (target - first) / period)
            .collect();
        let mut delta = vec![0i64; m_max + 2];
        let mut previous: Option<f64> = None;
        for &qi in q.iter().filter(|v| v.is_finite()) {
            if let Some(qp) = previous {
                let lo = (qp.min(qi).floor() + 1.0).max(1.0);
                let hi = qp.max(qi).floor().min(m_max as f64);
                if lo <= hi {
                    delta[lo as usize] += 1;
                    delta[hi as usize + 1] -= 1;
                }
            }
            previous = Some(qi);
        }
        let mut counts = Vec::with_capacity(m_max);
        let mut running = 0i64;
        let mut tangency_checked = false;
        for (m, step) in delta.iter().enumerate().take(m_max + 1).skip(1) {
            running += step;
            let mut count = running as usize;
            if count == 2 || (count == 0 && !tangency_checked) {
                tangency_checked |= count == 0;
                let k = 2 * m as u32 + self.parity();
                let values: Vec<f64> = self
                    .first
                    .iter()
                    .zip(&self.period)
                    .map(|(f, p)| f + m as f64 * p)
                    .collect();
                let tau = |b: f64| {
                    reduced_flight_time(&self.geometry, b, self.branch, k).unwrap_or(f64::INFINITY)
                };
                if tangent(&self.b, &values, tau, target) {
                    count = 1;
                }
            }
            counts.push(count);
        }
        counts
    }
}

/// Period of the ellipse of least period through the endpoints, from the
/// reduced problem. Used to bound the number of revolutions worth sampling.
pub fn least_period(g: &Geometry) -> f64 {
    TAU * (0.25 * (g.s + g.c)).powf(1.5)
}
