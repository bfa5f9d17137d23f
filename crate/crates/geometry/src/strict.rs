//! Lifts of plane curves into the torus picture.
//!
//! The curve is contoured by marching squares on a slightly offset grid, with a small
//! disk around each center point it passes through cut out. Branch ends at a center are
//! finished with the limit point of the lift, read off the lowest forms along the exact
//! tangent direction, and ends sharing a limit point are joined.

use crate::torus::{beta_of, iota};
use blowup_core::{Disk, Pair, Point, Poly2};
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

#[derive(Clone, Debug, PartialEq)]
pub struct CurveLift {
    pub points: Vec<[f64; 3]>,
    /// Parameter point of each sample; limit samples carry the center point.
    pub params: Vec<[f64; 2]>,
    /// Closed lifts repeat the first sample at the end.
    pub closed: bool,
}

/// Offset of the grid in cell units, so grid nodes avoid exact zeros of simple curves.
const OFFSET: f64 = 0.318_309_886_183_790_7;
/// Radius of the cut-out around a center point, in cells.
const HOLE: f64 = 3.0;
/// Arc-length spacing of the resampled output.
const STEP: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct EdgeKey(u8, u32, u32);

#[derive(Clone, Copy, Debug)]
struct Sample {
    q: [f64; 3],
    p: [f64; 2],
}

struct Ctx<'a> {
    curve: &'a Poly2,
    grad: (Poly2, Poly2),
    pair: &'a Pair,
    tp: &'a crate::TorusParams,
    lo: [f64; 2],
    h: f64,
    c: [f64; 2],
    r: f64,
    holes: Vec<(Point, [f64; 2])>,
}

impl Ctx<'_> {
    fn node(&self, i: u32, j: u32) -> [f64; 2] {
        [self.lo[0] + (i as f64 + OFFSET) * self.h, self.lo[1] + (j as f64 + OFFSET) * self.h]
    }

    fn masked(&self, p: [f64; 2]) -> bool {
        (p[0] - self.c[0]).hypot(p[1] - self.c[1]) >= self.r * (1.0 - 1e-9)
            || self.holes.iter().any(|(_, z)| (p[0] - z[0]).hypot(p[1] - z[1]) < HOLE * self.h)
    }

    fn crossing(&self, k: EdgeKey) -> [f64; 2] {
        let a = self.node(k.1, k.2);
        let b = if k.0 == 0 { self.node(k.1 + 1, k.2) } else { self.node(k.1, k.2 + 1) };
        let (fa, fb) = (self.curve.eval_f64(&a), self.curve.eval_f64(&b));
        let s = fa / (fa - fb);
        let mut p = [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])];
        for _ in 0..3 {
            let f = self.curve.eval_f64(&p);
            let g = [self.grad.0.eval_f64(&p), self.grad.1.eval_f64(&p)];
            let n = g[0] * g[0] + g[1] * g[1];
            if n == 0.0 {
                break;
            }
            let next = [p[0] - f * g[0] / n, p[1] - f * g[1] / n];
            if (next[0] - p[0]).hypot(next[1] - p[1]) > self.h {
                break;
            }
            p = next;
        }
        p
    }

    fn lift(&self, p: [f64; 2]) -> Sample {
        let d = (self.pair.0.eval_f64(&p), self.pair.1.eval_f64(&p));
        Sample { q: iota(self.tp, p, d), p }
    }
}

fn lowest_form(f: &Poly2, p: &Point) -> Option<(u32, Poly2)> {
    let s = f.shift(&p.coords());
    let m = s.min_degree()?;
    Some((m, s.homogeneous_part(m)))
}

/// Tangent direction of the curve at `z` closest to the unit vector `u`.
fn snap_tangent(form: &Poly2, u: [f64; 2]) -> [f64; 2] {
    let g = |t: f64| form.eval_f64(&[t.cos(), t.sin()]);
    let t0 = u[1].atan2(u[0]);
    const N: usize = 2000;
    let span = 0.6;
    let ts: Vec<f64> = (0..=N).map(|k| t0 - span + 2.0 * span * k as f64 / N as f64).collect();
    let mut best: Option<f64> = None;
    for w in ts.windows(2) {
        let (a, b) = (g(w[0]), g(w[1]));
        if a == 0.0 || a * b < 0.0 {
            let (mut lo, mut hi) = (w[0], w[1]);
            if a != 0.0 {
                for _ in 0..60 {
                    let m = 0.5 * (lo + hi);
                    if g(m) * a > 0.0 {
                        lo = m;
                    } else {
                        hi = m;
                    }
                }
            } else {
                hi = lo;
            }
            let root = 0.5 * (lo + hi);
            if best.is_none_or(|b| (root - t0).abs() < (b - t0).abs()) {
                best = Some(root);
            }
        }
    }
    let t = best.unwrap_or_else(|| {
        *ts.iter().min_by(|a, b| g(**a).abs().total_cmp(&g(**b).abs())).expect("samples")
    });
    [t.cos(), t.sin()]
}

/// Limit of the direction `(f0 : f1)` approaching `z` along `d`.
fn limit_direction(pair: &Pair, z: &Point, d: [f64; 2]) -> (f64, f64) {
    let zf = z.to_f64();
    if let (Some((m0, l0)), Some((m1, l1))) = (lowest_form(&pair.0, z), lowest_form(&pair.1, z)) {
        let m = m0.min(m1);
        let a = if m0 == m { l0.eval_f64(&d) } else { 0.0 };
        let b = if m1 == m { l1.eval_f64(&d) } else { 0.0 };
        if a.hypot(b) > 1e-12 {
            return (a, b);
        }
    }
    let p = [zf[0] + 1e-7 * d[0], zf[1] + 1e-7 * d[1]];
    (pair.0.eval_f64(&p), pair.1.eval_f64(&p))
}

fn contour(ctx: &Ctx, n: u32) -> BTreeMap<EdgeKey, Vec<EdgeKey>> {
    let mut adj: BTreeMap<EdgeKey, Vec<EdgeKey>> = BTreeMap::new();
    let mut link = |a: EdgeKey, b: EdgeKey| {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    };
    let val = |i: u32, j: u32| {
        let v = ctx.curve.eval_f64(&ctx.node(i, j));
        if v >= 0.0 {
            1
        } else {
            -1
        }
    };
    for j in 0..n {
        for i in 0..n {
            let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            if corners.iter().any(|&(a, b)| ctx.masked(ctx.node(a, b))) {
                continue;
            }
            let s = corners.map(|(a, b)| val(a, b));
            let edges = [EdgeKey(0, i, j), EdgeKey(1, i + 1, j), EdgeKey(0, i, j + 1), EdgeKey(1, i, j)];
            let cut: Vec<usize> = (0..4).filter(|&k| s[k] != s[(k + 1) % 4]).collect();
            match cut.len() {
                2 => link(edges[cut[0]], edges[cut[1]]),
                4 => {
                    let mid = [ctx.lo[0] + (i as f64 + 0.5 + OFFSET) * ctx.h, ctx.lo[1] + (j as f64 + 0.5 + OFFSET) * ctx.h];
                    let sc = if ctx.curve.eval_f64(&mid) >= 0.0 { 1 } else { -1 };
                    if sc == s[0] {
                        link(edges[0], edges[1]);
                        link(edges[2], edges[3]);
                    } else {
                        link(edges[3], edges[0]);
                        link(edges[1], edges[2]);
                    }
                }
                _ => {}
            }
        }
    }
    adj
}

fn chains(adj: &BTreeMap<EdgeKey, Vec<EdgeKey>>) -> Vec<(Vec<EdgeKey>, bool)> {
    let mut seen: BTreeSet<EdgeKey> = BTreeSet::new();
    let mut out = Vec::new();
    let walk = |start: EdgeKey, seen: &mut BTreeSet<EdgeKey>| {
        let mut path = vec![start];
        seen.insert(start);
        let mut cur = start;
        loop {
            let next = adj[&cur].iter().find(|k| !seen.contains(k)).copied();
            match next {
                Some(k) => {
                    seen.insert(k);
                    path.push(k);
                    cur = k;
                }
                None => break,
            }
        }
        let closed = path.len() > 2 && adj[&cur].contains(&start);
        (path, closed)
    };
    for (k, v) in adj {
        if v.len() == 1 && !seen.contains(k) {
            out.push(walk(*k, &mut seen));
        }
    }
    for k in adj.keys() {
        if !seen.contains(k) {
            out.push(walk(*k, &mut seen));
        }
    }
    out
}

struct Piece {
    samples: Vec<Sample>,
    /// Limit key `(center index, β)` at the start and the end.
    ends: [Option<(usize, f64)>; 2],
    closed: bool,
}

fn same_limit(a: Option<(usize, f64)>, b: Option<(usize, f64)>) -> bool {
    match (a, b) {
        (Some((i, x)), Some((j, y))) => i == j && ((x - y + PI).rem_euclid(2.0 * PI) - PI).abs() < 1e-9,
        _ => false,
    }
}

fn resample(s: &[Sample], closed: bool) -> CurveLift {
    let mut len = vec![0.0];
    for w in s.windows(2) {
        let d = ((w[1].q[0] - w[0].q[0]).powi(2) + (w[1].q[1] - w[0].q[1]).powi(2) + (w[1].q[2] - w[0].q[2]).powi(2)).sqrt();
        len.push(len.last().unwrap() + d);
    }
    let total = *len.last().unwrap();
    let n = ((total / STEP).ceil() as usize).max(1);
    let mut points = Vec::with_capacity(n + 1);
    let mut params = Vec::with_capacity(n + 1);
    let mut seg = 0;
    for k in 0..=n {
        let target = total * k as f64 / n as f64;
        while seg + 2 < len.len() && len[seg + 1] < target {
            seg += 1;
        }
        if s.len() == 1 {
            points.push(s[0].q);
            params.push(s[0].p);
            break;
        }
        let span = len[seg + 1] - len[seg];
        let a = if span > 0.0 { ((target - len[seg]) / span).clamp(0.0, 1.0) } else { 0.0 };
        let (u, v) = (s[seg], s[seg + 1]);
        points.push(std::array::from_fn(|i| u.q[i] + a * (v.q[i] - u.q[i])));
        params.push(std::array::from_fn(|i| u.p[i] + a * (v.p[i] - u.p[i])));
    }
    if closed {
        let first = (points[0], params[0]);
        *points.last_mut().unwrap() = first.0;
        *params.last_mut().unwrap() = first.1;
    }
    CurveLift { points, params, closed }
}

/// Lift of `curve = 0` minus the center, closed up by its limit points over the center.
/// `resolution` is the number of grid cells per axis across the disk's bounding square.
pub fn strict_transform_polyline(
    curve: &Poly2,
    pair: &Pair,
    disk: &Disk,
    center: &[Point],
    tp: &crate::TorusParams,
    resolution: u32,
) -> Vec<CurveLift> {
    let n = resolution.max(8);
    let (c, r) = (disk.center_f64(), disk.radius_f64());
    let h = 2.0 * r / n as f64;
    let holes: Vec<(Point, [f64; 2])> =
        center.iter().filter(|p| curve.eval(&p.coords()).is_zero()).map(|p| (p.clone(), p.to_f64())).collect();
    let ctx = Ctx {
        curve,
        grad: (curve.partial(blowup_core::X), curve.partial(blowup_core::Y)),
        pair,
        tp,
        // One cell of margin so the offset grid still covers the square.
        lo: [c[0] - r - h, c[1] - r - h],
        h,
        c,
        r,
        holes,
    };
    let adj = contour(&ctx, n + 2);
    let mut pieces: Vec<Piece> = chains(&adj)
        .into_iter()
        .map(|(keys, closed)| {
            let mut samples: Vec<Sample> = keys.iter().map(|k| ctx.lift(ctx.crossing(*k))).collect();
            let mut ends = [None, None];
            if !closed {
                for side in 0..2 {
                    let end = if side == 0 { samples[0].p } else { samples[samples.len() - 1].p };
                    let hit = ctx
                        .holes
                        .iter()
                        .enumerate()
                        .find(|(_, (_, z))| (end[0] - z[0]).hypot(end[1] - z[1]) < (HOLE + 2.0) * h);
                    if let Some((idx, (z, zf))) = hit {
                        let dist = (end[0] - zf[0]).hypot(end[1] - zf[1]);
                        let u = [(end[0] - zf[0]) / dist, (end[1] - zf[1]) / dist];
                        let form = lowest_form(curve, z).expect("curve is nonzero").1;
                        let mut d = snap_tangent(&form, u);
                        if d[0] * u[0] + d[1] * u[1] < 0.0 {
                            d = [-d[0], -d[1]];
                        }
                        let dir = limit_direction(pair, z, d);
                        let extra = Sample { q: iota(tp, *zf, dir), p: *zf };
                        if side == 0 {
                            samples.insert(0, extra);
                        } else {
                            samples.push(extra);
                        }
                        ends[side] = Some((idx, beta_of(dir)));
                    }
                }
            }
            if closed {
                samples.push(samples[0]);
            }
            Piece { samples, ends, closed }
        })
        .collect();

    // Join ends that share a limit point.
    loop {
        let mut joined = false;
        'outer: for a in 0..pieces.len() {
            if pieces[a].closed {
                continue;
            }
            if same_limit(pieces[a].ends[0], pieces[a].ends[1]) {
                let p = &mut pieces[a];
                p.samples.pop();
                p.samples.push(p.samples[0]);
                p.closed = true;
                p.ends = [None, None];
                joined = true;
                break;
            }
            for b in 0..pieces.len() {
                if a == b || pieces[b].closed {
                    continue;
                }
                for sa in 0..2 {
                    for sb in 0..2 {
                        if same_limit(pieces[a].ends[sa], pieces[b].ends[sb]) {
                            let mut pb = pieces.remove(b);
                            let a = if b < a { a - 1 } else { a };
                            let pa = &mut pieces[a];
                            if sa == 0 {
                                pa.samples.reverse();
                                pa.ends.swap(0, 1);
                            }
                            if sb == 1 {
                                pb.samples.reverse();
                                pb.ends.swap(0, 1);
                            }
                            pa.samples.extend(pb.samples.into_iter().skip(1));
                            pa.ends[1] = pb.ends[1];
                            joined = true;
                            break 'outer;
                        }
                    }
                }
            }
        }
        if !joined {
            break;
        }
    }
    pieces.iter().map(|p| resample(&p.samples, p.closed)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::TorusParams;
    use blowup_core::int;

    fn setup() -> (Pair, Disk, Vec<Point>, TorusParams) {
        (
            ("x".parse().unwrap(), "y".parse().unwrap()),
            Disk::centered(int(2)),
            vec![Point::new(int(0), int(0))],
            TorusParams::new(int(2), int(4)).unwrap(),
        )
    }

    #[test]
    fn circle_missing_center() {
        let (pair, d, z, tp) = setup();
        let out = strict_transform_polyline(&"x^2 + y^2 - 1".parse().unwrap(), &pair, &d, &z, &tp, 200);
        assert_eq!(out.len(), 1);
        assert!(out[0].closed);
        assert_eq!(out[0].points.first(), out[0].points.last());
    }

    #[test]
    fn line_through_center() {
        let (pair, d, z, tp) = setup();
        let out = strict_transform_polyline(&"y".parse().unwrap(), &pair, &d, &z, &tp, 200);
        assert_eq!(out.len(), 1);
        assert!(!out[0].closed);
        for q in &out[0].points {
            assert!(q[2].abs() < 1e-9 && q[1] > 0.0);
        }
    }
}
