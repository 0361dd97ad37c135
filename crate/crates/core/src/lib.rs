//! Keplerian arcs between two fixed points around an attracting center, with
//! every type of arc enumerated through the bilinear coordinate
//! `b = <qB, pB> - <qA, pA>`.
//!
//! All quantities use the normalized potential `U = 1/r` (gravitational
//! parameter 1). The command-line crate handles unit scaling.

pub mod error;
pub mod geometry;
pub mod oracle;
pub mod solver;
pub mod terminal;
pub mod timeflow;

pub use error::{LambertError, Result};
pub use geometry::{BoundaryConstants, Geometry, GeometryClass, Orientation, PlanarVector};
pub use solver::{Arc, MinimalFlightTime, SolveReport, TypeWindow};
pub use terminal::{Branch, TerminalPair};
pub use timeflow::{Conic, FlightTimeDerivatives, OrbitElements};
