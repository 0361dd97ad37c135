//! Verification machinery that shares no flight-time code with the solver:
//! direct numerical integration of the equations of motion, the time to
//! collision on a line through the center, and dense sampling of the
//! flight-time curves for counting solutions.

pub mod collision;
pub mod integrator;
pub mod propagate;
pub mod sweep;

pub use collision::{collision_time, collision_time_rate, reduced_flight_time};
pub use propagate::{action_integrals, propagate, ActionIntegrals, Sample, Trajectory};
pub use sweep::{least_period, sweep_count, FamilySweep, WindowSweep};
