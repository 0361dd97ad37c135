//! Direct integration of the Kepler problem in Levi-Civita variables.
//!
//! With `q = u^2` (complex square) and the fictitious time `ds = dt / r`, the
//! motion at energy `H` obeys `u'' = (H/2) u`, which is regular at collision:
//! `u` passes through zero and `q = u^2` retraces its line, which is the
//! elastic bounce. The physical time and the two action integrals ride along
//! as extra state components.

use crate::error::{LambertError, Result};
use crate::geometry::PlanarVector;
use crate::oracle::integrator::{step, StepControl};

/// Pericenter passages closer than this fraction of the starting radius are
/// reported as collisions.
const COLLISION_GUARD: f64 = 1e-6;

const MAX_STEPS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub q: PlanarVector,
    pub p: PlanarVector,
    /// Integral of `|p|^2` from the start.
    pub kinetic: f64,
    /// Integral of `1/r` from the start.
    pub potential: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub collision_events: Vec<f64>,
}

impl Trajectory {
    pub fn end(&self) -> &Sample {
        self.samples
            .last()
            .expect("a trajectory holds at least its start")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionIntegrals {
    /// Integral of the Lagrangian `|p|^2/2 + 1/r`.
    pub action: f64,
    /// Integral of `|p|^2`.
    pub maupertuis: f64,
    /// Integral of `1/r`.
    pub levi_civita: f64,
}

pub fn action_integrals(trajectory: &Trajectory) -> ActionIntegrals {
    let end = trajectory.end();
    ActionIntegrals {
        action: 0.5 * end.kinetic + end.potential,
        maupertuis: end.kinetic,
        levi_civita: end.potential,
    }
}

/// `[u1, u2, w1, w2, t, kinetic, potential]` with `w = du/ds`.
type State = [f64; 7];

fn to_physical(y: &State) -> (PlanarVector, PlanarVector) {
    let (u1, u2, w1, w2) = (y[0], y[1], y[2], y[3]);
    let r = u1 * u1 + u2 * u2;
    let q = PlanarVector::new(u1 * u1 - u2 * u2, 2.0 * u1 * u2);
    // p = 2 w / conj(u) = 2 w u / |u|^2
    let p = PlanarVector::new(2.0 * (w1 * u1 - w2 * u2) / r, 2.0 * (w1 * u2 + w2 * u1) / r);
    (q, p)
}

fn sample(y: &State) -> Sample {
    let (q, p) = to_physical(y);
    Sample {
        t: y[4],
        q,
        p,
        kinetic: y[5],
        potential: y[6],
    }
}

/// Radial velocity up to the positive factor `2 / r`.
fn radial_rate(y: &State) -> f64 {
    y[0] * y[2] + y[1] * y[3]
}

/// Integrates from `(q0, p0)` over the physical time `t_span` with relative
/// and absolute local tolerance `tol` on the regularized state.
pub fn propagate(q0: PlanarVector, p0: PlanarVector, t_span: f64, tol: f64) -> Result<Trajectory> {
    let r0 = q0.norm();
    if r0 == 0.0 || !q0.is_finite() || !p0.is_finite() {
        return Err(LambertError::DegenerateInput("start at the center"));
    }
    let energy = 0.5 * p0.dot(p0) - 1.0 / r0;
    let rhs = move |y: &State| -> State {
        let r = y[0] * y[0] + y[1] * y[1];
        [
            y[2],
            y[3],
            0.5 * energy * y[0],
            0.5 * energy * y[1],
            r,
            4.0 * (y[2] * y[2] + y[3] * y[3]),
            1.0,
        ]
    };

    // Principal square root of q0 as a complex number.
    let u1 = (0.5 * (r0 + q0.x)).sqrt();
    let u2 = if u1 > 0.0 {
        q0.y / (2.0 * u1)
    } else {
        r0.sqrt()
    };
    let mut y: State = [
        u1,
        u2,
        0.5 * (p0.x * u1 + p0.y * u2),
        0.5 * (p0.y * u1 - p0.x * u2),
        0.0,
        0.0,
        0.0,
    ];

    let mut control = StepControl::new(tol, tol);
    let mut samples = vec![sample(&y)];
    let mut collision_events = Vec::new();
    // One radian of the harmonic motion in u takes sqrt(2 / |H|) in s.
    let mut h = 0.05 * (2.0 / energy.abs().max(1e-3 / r0)).sqrt();
    h = h.min(t_span / r0);

    if t_span <= 0.0 {
        return Ok(Trajectory {
            samples,
            collision_events,
        });
    }
    for _ in 0..MAX_STEPS {
        let (y_new, err) = step(&rhs, &y, h, &control);
        let finite = y_new.iter().all(|v| v.is_finite());
        let (h_next, accepted) = control.update(h, if finite { err } else { f64::INFINITY });
        let floor = 1e-15 * y[6].abs().max(h.abs() * 1e-3);
        if h_next.is_nan() || h_next <= floor {
            return Err(LambertError::ToleranceFailure(y[4]));
        }
        if !accepted || !finite {
            h = h_next;
            continue;
        }

        let rate_before = radial_rate(&y);
        let crosses_end = y_new[4] >= t_span;
        let (h_end, y_end) = if crosses_end {
            land_on_time(&rhs, &y, h, t_span, &control)
        } else {
            (h, y_new)
        };
        if rate_before < 0.0 && radial_rate(&y_end) >= 0.0 {
            if let Some(t) = pericenter_collision(&rhs, &y, h_end, r0, &control) {
                collision_events.push(t);
            }
        }
        y = y_end;
        samples.push(sample(&y));
        if crosses_end {
            return Ok(Trajectory {
                samples,
                collision_events,
            });
        }
        h = h_next;
    }
    Err(LambertError::ToleranceFailure(y[4]))
}

/// Shortens the last step so that the physical time lands on `t_end`,
/// by Newton iteration on the step length with `dt/ds = r`.
fn land_on_time(
    rhs: &impl Fn(&State) -> State,
    y: &State,
    h: f64,
    t_end: f64,
    control: &StepControl,
) -> (f64, State) {
    let mut lo = 0.0;
    let mut hi = h;
    let (full, _) = step(rhs, y, h, control);
    let mut x = h * (t_end - y[4]) / (full[4] - y[4]);
    let mut best = full;
    for _ in 0..50 {
        let (trial, _) = step(rhs, y, x, control);
        let miss = trial[4] - t_end;
        best = trial;
        if miss.abs() <= 4.0 * f64::EPSILON * t_end {
            break;
        }
        if miss > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let r = trial[0] * trial[0] + trial[1] * trial[1];
        let next = x - miss / r;
        x = if next > lo && next < hi {
            next
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= f64::EPSILON * h {
            break;
        }
    }
    best[4] = t_end;
    (x, best)
}

/// Time of the pericenter inside a step from `y` of length `h`, when that
/// pericenter is a collision.
fn pericenter_collision(
    rhs: &impl Fn(&State) -> State,
    y: &State,
    h: f64,
    r0: f64,
    control: &StepControl,
) -> Option<f64> {
    let mut lo = 0.0;
    let mut hi = h;
    let mut state = *y;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let (trial, _) = step(rhs, y, mid, control);
        state = trial;
        if radial_rate(&trial) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * h {
            break;
        }
    }
    let r = state[0] * state[0] + state[1] * state[1];
    (r <= COLLISION_GUARD * r0).then_some(state[4])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::collision::collision_time;
    use std::f64::consts::{FRAC_PI_2, PI, SQRT_2, TAU};

    fn energy_of(s: &Sample) -> f64 {
        0.5 * s.p.dot(s.p) - 1.0 / s.q.norm()
    }

    #[test]
    fn quarter_circle() {
        let traj = propagate(
            PlanarVector::new(1.0, 0.0),
            PlanarVector::new(0.0, 1.0),
            FRAC_PI_2,
            1e-13,
        )
        .unwrap();
        let end = traj.end();
        assert!((end.t - FRAC_PI_2).abs() < 1e-15);
        assert!((end.q - PlanarVector::new(0.0, 1.0)).norm() < 1e-9);
        assert!((end.p - PlanarVector::new(-1.0, 0.0)).norm() < 1e-9);
        let action = action_integrals(&traj);
        assert!((action.action - 3.0 * PI / 4.0).abs() < 1e-9);
    }

    #[test]
    fn full_circle() {
        let traj = propagate(
            PlanarVector::new(1.0, 0.0),
            PlanarVector::new(0.0, 1.0),
            TAU,
            1e-13,
        )
        .unwrap();
        assert!((traj.end().q - PlanarVector::new(1.0, 0.0)).norm() < 1e-9);
        assert!(traj.collision_events.is_empty());
    }

    #[test]
    fn drop_reaches_center_on_time() {
        let expected = collision_time(1.0, 0.0).unwrap();
        assert!((expected - PI / (2.0 * SQRT_2)).abs() < 1e-15);
        let traj = propagate(
            PlanarVector::new(1.0, 0.0),
            PlanarVector::new(0.0, 0.0),
            1.5 * expected,
            1e-13,
        )
        .unwrap();
        assert_eq!(traj.collision_events.len(), 1);
        assert!((traj.collision_events[0] - expected).abs() < 1e-8);
        // After the bounce the body climbs back on the same side.
        let end = traj.end();
        assert!(end.q.x > 0.0 && end.p.x > 0.0);
        assert!((energy_of(end) + 1.0).abs() < 1e-9);
    }

    #[test]
    fn line_orbit_period() {
        // Released at rest from x = 2: period 2 pi, one bounce per period.
        let traj = propagate(
            PlanarVector::new(2.0, 0.0),
            PlanarVector::new(0.0, 0.0),
            2.0 * TAU,
            1e-13,
        )
        .unwrap();
        assert_eq!(traj.collision_events.len(), 2);
        assert!((traj.end().q.x - 2.0).abs() < 1e-8 * 2.0);
        assert!((traj.collision_events[0] - PI).abs() < 1e-8);
    }

    #[test]
    fn energy_and_momentum_conserved() {
        let q0 = PlanarVector::new(1.3, -0.4);
        let p0 = PlanarVector::new(0.2, 0.9);
        let traj = propagate(q0, p0, 25.0, 1e-13).unwrap();
        let h0 = energy_of(&traj.samples[0]);
        let c0 = q0.cross(p0);
        for s in &traj.samples {
            assert!((energy_of(s) - h0).abs() < 1e-9 * h0.abs());
            assert!((s.q.cross(s.p) - c0).abs() < 1e-9 * c0.abs());
        }
        for pair in traj.samples.windows(2) {
            assert!(pair[1].t > pair[0].t);
        }
    }
}
