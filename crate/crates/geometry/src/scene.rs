//! One rendered frame: kernel mesh, exceptional circles and limit arcs.

use crate::limits::limit_arcs;
use crate::mesh::{exceptional_circles, limit_arc_polyline, mesh_open_kernel, Mesh};
use crate::torus::TorusParams;
use crate::GeometryError;
use blowup_core::{gcd2, Disk, Pair, Point};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

pub const CIRCLE_SEGMENTS: usize = 128;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcEntry {
    pub center: [f64; 2],
    pub beta_ranges: Vec<[f64; 2]>,
    pub angular_length: f64,
    pub points: Vec<Vec<[f64; 3]>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub t: f64,
    pub mesh: Mesh,
    pub circles: Vec<Vec<[f64; 3]>>,
    pub arcs: Vec<ArcEntry>,
    /// Center points whose limit configuration is not handled; no arc is drawn there.
    pub skipped_arcs: Vec<[f64; 2]>,
}

/// Renders the blowup of `pair` over `center`. The mesh uses the pair divided by its
/// gcd, so superfluous points show as a single point instead of a hole.
pub fn render_frame(
    t: f64,
    pair: &Pair,
    disk: &Disk,
    center: &[Point],
    tp: &TorusParams,
    resolution: u32,
) -> Result<Frame, GeometryError> {
    tp.check_disk(disk)?;
    let h = gcd2(&pair.0, &pair.1)?;
    let reduced = (pair.0.div_exact(&h).expect("gcd divides"), pair.1.div_exact(&h).expect("gcd divides"));
    let superfluous: Vec<(Point, (f64, f64))> = center
        .iter()
        .filter_map(|p| {
            let c = p.coords();
            let (a, b) = (reduced.0.eval(&c), reduced.1.eval(&c));
            if a.is_zero() && b.is_zero() {
                None
            } else {
                Some((p.clone(), (blowup_core::rational::to_f64(&a), blowup_core::rational::to_f64(&b))))
            }
        })
        .collect();
    let holes: Vec<Point> = center.iter().filter(|p| !superfluous.iter().any(|(q, _)| q == *p)).cloned().collect();
    let mut mesh = mesh_open_kernel(&reduced, disk, &holes, tp, resolution);
    let circles = exceptional_circles(center, &superfluous, tp, CIRCLE_SEGMENTS);
    let mut arcs = Vec::new();
    let mut skipped_arcs = Vec::new();
    for p in &holes {
        match limit_arcs(&reduced, p) {
            Ok(arc) => arcs.push(ArcEntry {
                center: p.to_f64(),
                beta_ranges: arc.beta_ranges.clone(),
                angular_length: arc.angular_length,
                points: limit_arc_polyline(&arc, tp, CIRCLE_SEGMENTS),
            }),
            Err(GeometryError::UnsupportedLimitConfiguration) => skipped_arcs.push(p.to_f64()),
            Err(e) => return Err(e),
        }
    }
    for (c, p) in circles.iter().zip(center) {
        let pf = p.to_f64();
        let pts: Vec<_> = c.iter().map(|q| (*q, pf)).collect();
        mesh.add_polyline("circle", &pts);
    }
    for a in &arcs {
        for l in &a.points {
            let pts: Vec<_> = l.iter().map(|q| (*q, a.center)).collect();
            mesh.add_polyline("arc", &pts);
        }
    }
    Ok(Frame { t, mesh, circles, arcs, skipped_arcs })
}
