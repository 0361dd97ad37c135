//! Output documents in user units.

use crate::frame::{Frame, Scales, Vec3};
use keplerian_arcs::solver::{type_window, MinimalFlightTime};
use keplerian_arcs::terminal::{energy_derivatives, pair_from_b};
use keplerian_arcs::timeflow::{flight_time, flight_time_derivatives};
use keplerian_arcs::{Arc, Branch, Conic, Geometry, GeometryClass, Orientation, Result};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct GeometrySummary {
    pub class: &'static str,
    pub s: f64,
    pub c: f64,
    pub delta: f64,
    pub xi: f64,
    pub eta: f64,
    pub length_scale: f64,
    pub time_scale: f64,
}

impl GeometrySummary {
    pub fn new(g: &Geometry, scales: &Scales) -> Self {
        let class = match g.class {
            GeometryClass::NonFlat(Orientation::Counterclockwise) => "nonflat-counterclockwise",
            GeometryClass::NonFlat(Orientation::Clockwise) => "nonflat-clockwise",
            GeometryClass::Rectilinear { .. } => "rectilinear",
            GeometryClass::Opposition => "opposition",
        };
        let l = scales.length;
        Self {
            class,
            s: g.s * l,
            c: g.c * l,
            delta: g.delta * l * l,
            xi: g.xi * l.sqrt(),
            eta: g.eta * l.sqrt(),
            length_scale: l,
            time_scale: scales.time,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Boundaries {
    #[serde(rename = "T0")]
    pub t0: f64,
    #[serde(rename = "T1")]
    pub t1: f64,
    #[serde(rename = "C0")]
    pub c0: f64,
    #[serde(rename = "C1")]
    pub c1: f64,
}

impl Boundaries {
    pub fn new(g: &Geometry, scales: &Scales) -> Self {
        let k = g.boundaries();
        Self {
            t0: k.t0 * scales.time,
            t1: k.t1 * scales.time,
            c0: k.c0 * scales.momentum(),
            c1: k.c1 * scales.momentum(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ArcRecord {
    pub k: u32,
    pub branch: &'static str,
    pub b: f64,
    #[serde(rename = "C")]
    pub momentum: f64,
    #[serde(rename = "H")]
    pub energy: f64,
    pub a: Option<f64>,
    pub e: f64,
    pub conic: &'static str,
    #[serde(rename = "vA")]
    pub va: Vec3,
    #[serde(rename = "vB")]
    pub vb: Vec3,
    pub tau_check: f64,
}

fn conic_name(conic: Conic) -> &'static str {
    match conic {
        Conic::Elliptic => "elliptic",
        Conic::Parabolic => "parabolic",
        Conic::Hyperbolic => "hyperbolic",
        Conic::RectilinearElliptic => "rectilinear-elliptic",
        Conic::RectilinearParabolic => "rectilinear-parabolic",
        Conic::RectilinearHyperbolic => "rectilinear-hyperbolic",
    }
}

impl ArcRecord {
    pub fn new(g: &Geometry, frame: &Frame, arc: &Arc) -> Result<Self> {
        let scales = &frame.scales;
        let tau = flight_time(g, arc.b, arc.branch, arc.k)?;
        Ok(Self {
            k: arc.k,
            branch: arc.branch.name(),
            b: arc.b * scales.momentum(),
            momentum: arc.pair.momentum * scales.momentum(),
            energy: arc.pair.energy * scales.energy(),
            a: arc.elements.semi_major_axis.map(|a| a * scales.length),
            e: arc.elements.eccentricity,
            conic: conic_name(arc.elements.conic),
            va: frame.lift_velocity(arc.pair.pa),
            vb: frame.lift_velocity(arc.pair.pb),
            tau_check: tau * scales.time,
        })
    }
}

#[derive(Debug, Serialize)]
pub struct MinimumRecord {
    pub k: u32,
    pub branch: &'static str,
    #[serde(rename = "T")]
    pub tau: f64,
    pub b: f64,
    #[serde(rename = "C")]
    pub momentum: f64,
    #[serde(rename = "H")]
    pub energy: f64,
    /// `3 T H'(b) - 2`, dimensionless; zero at a minimum.
    pub stationarity: f64,
}

impl MinimumRecord {
    pub fn new(g: &Geometry, scales: &Scales, m: &MinimalFlightTime) -> Self {
        let pair = pair_from_b(g, m.b, m.branch);
        let (slope, _) = energy_derivatives(g, m.b, m.branch);
        Self {
            k: m.k,
            branch: m.branch.name(),
            tau: m.tau * scales.time,
            b: m.b * scales.momentum(),
            momentum: pair.momentum * scales.momentum(),
            energy: pair.energy * scales.energy(),
            stationarity: 3.0 * m.tau * slope - 2.0,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SweepRow {
    pub b: f64,
    #[serde(rename = "C")]
    pub momentum: f64,
    #[serde(rename = "H")]
    pub energy: f64,
    pub tau: f64,
    pub tau_prime: f64,
}

pub fn sweep_rows(
    g: &Geometry,
    scales: &Scales,
    k: u32,
    branch: Branch,
    samples: usize,
) -> Result<Vec<SweepRow>> {
    let window = type_window(g, k, branch)?;
    let rectilinear = matches!(g.class, GeometryClass::Rectilinear { .. });
    window
        .samples(samples)
        .into_iter()
        .map(|b| {
            let pair = pair_from_b(g, b, branch);
            let tau = flight_time(g, b, branch, k)?;
            let d = flight_time_derivatives(g, b, branch, k, tau)?;
            Ok(SweepRow {
                b: b * scales.momentum(),
                momentum: if rectilinear {
                    f64::NAN
                } else {
                    pair.momentum * scales.momentum()
                },
                energy: pair.energy * scales.energy(),
                tau: tau * scales.time,
                tau_prime: d.first * scales.rate(),
            })
        })
        .collect()
}

#[derive(Debug, Serialize)]
pub struct SolveDocument {
    pub geometry: GeometrySummary,
    pub boundaries: Boundaries,
    pub tof: f64,
    pub counts: Vec<usize>,
    pub total: usize,
    pub arcs: Vec<ArcRecord>,
    pub minima: Vec<MinimumRecord>,
}

#[derive(Debug, Serialize)]
pub struct CountDocument {
    pub geometry: GeometrySummary,
    pub boundaries: Boundaries,
    pub tof: f64,
    pub counts: Vec<usize>,
    pub total: usize,
    pub minima: Vec<MinimumRecord>,
}

#[derive(Debug, Serialize)]
pub struct MinimaDocument {
    pub geometry: GeometrySummary,
    pub boundaries: Boundaries,
    pub gap_bound: f64,
    pub minima: Vec<MinimumRecord>,
}

#[derive(Debug, Serialize)]
pub struct SweepDocument {
    pub geometry: GeometrySummary,
    pub k: u32,
    pub branch: &'static str,
    pub rows: Vec<SweepRow>,
}

/// Twelve significant digits.
fn cell(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.11e}")
    } else {
        "NaN".into()
    }
}

fn csv(header: &str, rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

impl SolveDocument {
    pub fn csv(&self) -> String {
        let header = "k,branch,b,C,H,a,e,vA_x,vA_y,vA_z,vB_x,vB_y,vB_z,tau_check";
        csv(
            header,
            self.arcs.iter().map(|arc| {
                let mut row = vec![arc.k.to_string(), arc.branch.to_string()];
                row.extend(
                    [
                        arc.b,
                        arc.momentum,
                        arc.energy,
                        arc.a.unwrap_or(f64::NAN),
                        arc.e,
                    ]
                    .map(cell),
                );
                row.extend(arc.va.iter().chain(&arc.vb).map(|&v| cell(v)));
                row.push(cell(arc.tau_check));
                row
            }),
        )
    }
}

impl CountDocument {
    pub fn csv(&self) -> String {
        csv(
            "k,count,T",
            self.counts.iter().enumerate().map(|(k, count)| {
                let minimum = self
                    .minima
                    .iter()
                    .find(|m| m.k as usize == k)
                    .map_or(f64::NAN, |m| m.tau);
                vec![k.to_string(), count.to_string(), cell(minimum)]
            }),
        )
    }
}

fn minima_csv(minima: &[MinimumRecord]) -> String {
    csv(
        "k,branch,T,b,C,H,stationarity",
        minima.iter().map(|m| {
            let mut row = vec![m.k.to_string(), m.branch.to_string()];
            row.extend([m.tau, m.b, m.momentum, m.energy, m.stationarity].map(cell));
            row
        }),
    )
}

impl MinimaDocument {
    pub fn csv(&self) -> String {
        minima_csv(&self.minima)
    }
}

impl SweepDocument {
    pub fn csv(&self) -> String {
        csv(
            "b,C,H,tau,tau_prime",
            self.rows.iter().map(|r| {
                [r.b, r.momentum, r.energy, r.tau, r.tau_prime]
                    .map(cell)
                    .to_vec()
            }),
        )
    }
}
