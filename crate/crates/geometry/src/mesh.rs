//! Triangle meshes of the open kernel in the torus picture, the exceptional circles and
//! Wavefront OBJ export.

use crate::limits::LimitArc;
use crate::torus::{beta_of, iota, iota_beta, TorusParams};
use crate::GeometryError;
use blowup_core::{Disk, Pair, Point};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_8, PI};
use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    pub name: String,
    pub indices: Vec<u32>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    pub triangles: Vec<[u32; 3]>,
    /// Parameter point `(x, y)` of each vertex.
    pub params: Vec<[f64; 2]>,
    /// 0 for the open kernel, 1 for polyline vertices.
    pub chart: Vec<u32>,
    pub polylines: Vec<Polyline>,
}

pub const CHART_KERNEL: u32 = 0;
pub const CHART_CURVE: u32 = 1;

impl Mesh {
    pub fn add_vertex(&mut self, q: [f64; 3], param: [f64; 2], chart: u32) -> u32 {
        self.vertices.push(q);
        self.params.push(param);
        self.chart.push(chart);
        (self.vertices.len() - 1) as u32
    }

    pub fn add_polyline(&mut self, name: &str, pts: &[([f64; 3], [f64; 2])]) {
        let indices = pts.iter().map(|(q, p)| self.add_vertex(*q, *p, CHART_CURVE)).collect();
        self.polylines.push(Polyline { name: name.to_string(), indices });
    }

    pub fn polyline_points(&self, name: &str) -> Vec<Vec<[f64; 3]>> {
        self.polylines
            .iter()
            .filter(|l| l.name == name)
            .map(|l| l.indices.iter().map(|&i| self.vertices[i as usize]).collect())
            .collect()
    }

    pub fn to_obj(&self) -> String {
        let mut s = String::new();
        for v in &self.vertices {
            let _ = writeln!(s, "v {:.12e} {:.12e} {:.12e}", v[0], v[1], v[2]);
        }
        for t in &self.triangles {
            let _ = writeln!(s, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
        }
        for l in &self.polylines {
            let _ = writeln!(s, "g {}", l.name);
            let idx: Vec<String> = l.indices.iter().map(|i| (i + 1).to_string()).collect();
            let _ = writeln!(s, "l {}", idx.join(" "));
        }
        s
    }

    /// Reads vertices, faces and polylines back; parameters and charts are not stored in
    /// OBJ and come back empty.
    pub fn from_obj(text: &str) -> Result<Mesh, GeometryError> {
        let bad = |l: &str| GeometryError::Obj(l.to_string());
        let mut m = Mesh::default();
        let mut group = String::new();
        for line in text.lines() {
            let mut it = line.split_whitespace();
            match it.next() {
                Some("v") => {
                    let c: Vec<f64> = it.map(|x| x.parse().map_err(|_| bad(line))).collect::<Result<_, _>>()?;
                    if c.len() != 3 {
                        return Err(bad(line));
                    }
                    m.vertices.push([c[0], c[1], c[2]]);
                }
                Some("f") => {
                    let c: Vec<u32> = it.map(|x| x.parse::<u32>().map_err(|_| bad(line))).collect::<Result<_, _>>()?;
                    if c.len() != 3 || c.contains(&0) {
                        return Err(bad(line));
                    }
                    m.triangles.push([c[0] - 1, c[1] - 1, c[2] - 1]);
                }
                Some("g") => group = it.collect::<Vec<_>>().join(" "),
                Some("l") => {
                    let c: Vec<u32> = it.map(|x| x.parse::<u32>().map_err(|_| bad(line))).collect::<Result<_, _>>()?;
                    if c.contains(&0) {
                        return Err(bad(line));
                    }
                    m.polylines.push(Polyline { name: group.clone(), indices: c.iter().map(|i| i - 1).collect() });
                }
                _ => {}
            }
        }
        let n = m.vertices.len() as u32;
        if m.triangles.iter().flatten().chain(m.polylines.iter().flat_map(|l| &l.indices)).any(|&i| i >= n) {
            return Err(GeometryError::Obj("index out of range".into()));
        }
        Ok(m)
    }
}

fn area(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
    let x = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
    0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
}

/// Levels of the quadtree: the minimum cell width is `radius · 2^-9`.
const MAX_LEVEL: u32 = 10;

struct Sampler<'a> {
    pair: &'a Pair,
    c: [f64; 2],
    r: f64,
    centers: Vec<[f64; 2]>,
}

impl Sampler<'_> {
    /// Grid node `(i, j)` at the finest level, pulled into the open disk.
    fn point(&self, i: u32, j: u32) -> [f64; 2] {
        let h = 2.0 * self.r / (1u32 << MAX_LEVEL) as f64;
        let p = [self.c[0] - self.r + i as f64 * h, self.c[1] - self.r + j as f64 * h];
        let (dx, dy) = (p[0] - self.c[0], p[1] - self.c[1]);
        let d = dx.hypot(dy);
        let lim = self.r * (1.0 - 1e-9);
        if d <= lim {
            p
        } else {
            [self.c[0] + dx * lim / d, self.c[1] + dy * lim / d]
        }
    }

    fn direction(&self, p: [f64; 2]) -> Option<(f64, f64)> {
        let a = self.pair.0.eval_f64(&p);
        let b = self.pair.1.eval_f64(&p);
        let n = a * a + b * b;
        if n > 0.0 && n.is_finite() {
            Some((a, b))
        } else {
            None
        }
    }

    fn near_center(&self, i: u32, j: u32, size: u32) -> bool {
        let h = 2.0 * self.r / (1u32 << MAX_LEVEL) as f64;
        let lo = [self.c[0] - self.r + i as f64 * h, self.c[1] - self.r + j as f64 * h];
        let w = size as f64 * h;
        self.centers.iter().any(|z| z[0] >= lo[0] - w && z[0] <= lo[0] + 2.0 * w && z[1] >= lo[1] - w && z[1] <= lo[1] + 2.0 * w)
    }
}

fn wrap(a: f64) -> f64 {
    (a + PI).rem_euclid(2.0 * PI) - PI
}

/// Leaf cells `(i, j, size)` in finest-level units.
fn refine(s: &Sampler, i: u32, j: u32, size: u32, out: &mut Vec<(u32, u32, u32)>) {
    let corners = [(i, j), (i + size, j), (i + size, j + size), (i, j + size)];
    let pts = corners.map(|(a, b)| s.point(a, b));
    // All corners projected to the circle: the cell lies outside the disk.
    let outside = corners.iter().all(|&(a, b)| {
        let h = 2.0 * s.r / (1u32 << MAX_LEVEL) as f64;
        let p = [s.c[0] - s.r + a as f64 * h, s.c[1] - s.r + b as f64 * h];
        (p[0] - s.c[0]).hypot(p[1] - s.c[1]) >= s.r
    });
    if outside {
        return;
    }
    let dirs: Vec<Option<(f64, f64)>> = pts.iter().map(|p| s.direction(*p)).collect();
    let near = s.near_center(i, j, size);
    let turning = if dirs.iter().any(|d| d.is_none()) {
        true
    } else {
        let b: Vec<f64> = dirs.iter().map(|d| beta_of(d.unwrap())).collect();
        (0..4).any(|k| wrap(b[k] - b[(k + 1) % 4]).abs() > FRAC_PI_8 || wrap(b[k] - b[(k + 2) % 4]).abs() > FRAC_PI_8)
    };
    if size > 1 && (near || turning) {
        let h = size / 2;
        for (a, b) in [(i, j), (i + h, j), (i, j + h), (i + h, j + h)] {
            refine(s, a, b, h, out);
        }
        return;
    }
    if near || dirs.iter().any(|d| d.is_none()) {
        // Left open around the center; the exceptional circle closes the picture.
        return;
    }
    out.push((i, j, size));
}

/// Triangulated image of the open kernel under the torus map. `resolution` is the
/// initial quadtree level (cells of width `2·radius / 2^resolution`); cells are refined
/// where the direction `(f0 : f1)` turns by more than π/8 and around center points.
pub fn mesh_open_kernel(pair: &Pair, disk: &Disk, center: &[Point], tp: &TorusParams, resolution: u32) -> Mesh {
    let level = resolution.clamp(1, MAX_LEVEL);
    let s = Sampler { pair, c: disk.center_f64(), r: disk.radius_f64(), centers: center.iter().map(|p| p.to_f64()).collect() };
    let size = 1u32 << (MAX_LEVEL - level);
    let n = 1u32 << level;
    let roots: Vec<(u32, u32)> = (0..n * n).map(|k| ((k % n) * size, (k / n) * size)).collect();
    let leaves: Vec<Vec<(u32, u32, u32)>> = roots
        .par_iter()
        .map(|&(i, j)| {
            let mut out = Vec::new();
            refine(&s, i, j, size, &mut out);
            out
        })
        .collect();
    let mut mesh = Mesh::default();
    let mut index: HashMap<(u32, u32), u32> = HashMap::new();
    for (i, j, sz) in leaves.into_iter().flatten() {
        let mut ids = [0u32; 4];
        for (k, (a, b)) in [(i, j), (i + sz, j), (i + sz, j + sz), (i, j + sz)].into_iter().enumerate() {
            ids[k] = *index.entry((a, b)).or_insert_with(|| {
                let p = s.point(a, b);
                let q = iota(tp, p, s.direction(p).expect("checked"));
                mesh.add_vertex(q, p, CHART_KERNEL)
            });
        }
        for t in [[ids[0], ids[1], ids[2]], [ids[0], ids[2], ids[3]]] {
            let v = t.map(|k| mesh.vertices[k as usize]);
            if area(v[0], v[1], v[2]) > 1e-12 {
                mesh.triangles.push(t);
            }
        }
    }
    mesh
}

/// The exceptional circle over each center point; a single point over superfluous ones
/// (the direction of the reduced pair there).
pub fn exceptional_circles(
    center: &[Point],
    superfluous: &[(Point, (f64, f64))],
    tp: &TorusParams,
    segments: usize,
) -> Vec<Vec<[f64; 3]>> {
    center
        .iter()
        .map(|p| {
            let pf = p.to_f64();
            match superfluous.iter().find(|(q, _)| q == p) {
                Some((_, d)) => vec![iota(tp, pf, *d)],
                None => (0..=segments)
                    .map(|k| iota_beta(tp, pf, -PI + 2.0 * PI * k as f64 / segments as f64))
                    .collect(),
            }
        })
        .collect()
}

/// Samples of one limit arc: one polyline per β-range, uniform in β.
pub fn limit_arc_polyline(arc: &LimitArc, tp: &TorusParams, segments: usize) -> Vec<Vec<[f64; 3]>> {
    let p = arc.center.to_f64();
    arc.beta_ranges
        .iter()
        .map(|r| {
            let len = r[1] - r[0];
            if len <= 0.0 {
                return vec![iota_beta(tp, p, r[0])];
            }
            let n = ((segments as f64 * len / (2.0 * PI)).ceil() as usize).max(1);
            (0..=n).map(|k| iota_beta(tp, p, r[0] + len * k as f64 / n as f64)).collect()
        })
        .collect()
}
