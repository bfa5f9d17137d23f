//! Angle tracking and the analytic families connecting the identity to a matrix with
//! positive determinant.

use crate::DeformError;
use blowup_core::{Disk, PolyMatrix2};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

/// Regular grid over the bounding square of a disk times `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    /// Nodes per spatial axis.
    pub n: usize,
    /// Nodes along the time axis.
    pub nt: usize,
}

impl Grid {
    pub fn new(n: usize, nt: usize) -> Self {
        Grid { n: n.max(2), nt: nt.max(2) }
    }
}

impl Default for Grid {
    fn default() -> Self {
        Grid::new(25, 25)
    }
}

/// Matrix values at the nodes of a grid, indexed `(it, iy, ix)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SampledFamily {
    pub grid: Grid,
    pub center: [f64; 2],
    pub radius: f64,
    pub values: Vec<[[f64; 2]; 2]>,
}

impl SampledFamily {
    pub fn at(&self, ix: usize, iy: usize, it: usize) -> [[f64; 2]; 2] {
        let n = self.grid.n;
        self.values[(it * n + iy) * n + ix]
    }

    /// Spatial coordinates of node `(ix, iy)` before projection onto the disk.
    pub fn node(&self, ix: usize, iy: usize) -> [f64; 2] {
        node_of(self.center, self.radius, self.grid.n, ix, iy)
    }

    pub fn time(&self, it: usize) -> f64 {
        it as f64 / (self.grid.nt - 1) as f64
    }

    /// Trilinear interpolation at unit-cube coordinates `(s, r, t)`.
    pub fn interpolate(&self, s: f64, r: f64, t: f64) -> [[f64; 2]; 2] {
        let loc = |u: f64, n: usize| {
            let f = u.clamp(0.0, 1.0) * (n - 1) as f64;
            let i = (f.floor() as usize).min(n - 2);
            (i, f - i as f64)
        };
        let (ix, fx) = loc(s, self.grid.n);
        let (iy, fy) = loc(r, self.grid.n);
        let (it, ft) = loc(t, self.grid.nt);
        let mut out = [[0.0; 2]; 2];
        for (dx, wx) in [(0, 1.0 - fx), (1, fx)] {
            for (dy, wy) in [(0, 1.0 - fy), (1, fy)] {
                for (dt, wt) in [(0, 1.0 - ft), (1, ft)] {
                    let w = wx * wy * wt;
                    if w == 0.0 {
                        continue;
                    }
                    let v = self.at(ix + dx, iy + dy, it + dt);
                    for i in 0..2 {
                        for j in 0..2 {
                            out[i][j] += w * v[i][j];
                        }
                    }
                }
            }
        }
        out
    }
}

fn node_of(c: [f64; 2], r: f64, n: usize, ix: usize, iy: usize) -> [f64; 2] {
    let h = 2.0 * r / (n - 1) as f64;
    [c[0] - r + ix as f64 * h, c[1] - r + iy as f64 * h]
}

/// Radial projection onto the closed disk.
fn project(c: [f64; 2], r: f64, p: [f64; 2]) -> [f64; 2] {
    let (dx, dy) = (p[0] - c[0], p[1] - c[1]);
    let d = dx.hypot(dy);
    if d <= r {
        p
    } else {
        [c[0] + dx * r / d, c[1] + dy * r / d]
    }
}

fn det(m: &[[f64; 2]; 2]) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

fn wrap(a: f64) -> f64 {
    let r = (a + PI).rem_euclid(TAU) - PI;
    if r == -PI {
        PI
    } else {
        r
    }
}

fn column_angles(m: &[[f64; 2]; 2]) -> Result<(f64, f64), DeformError> {
    let tiny = f64::MIN_POSITIVE.sqrt();
    if m[0][0].hypot(m[1][0]) < tiny || m[0][1].hypot(m[1][1]) < tiny {
        return Err(DeformError::StepUnderflow);
    }
    Ok((m[1][0].atan2(m[0][0]), m[1][1].atan2(m[0][1])))
}

/// Continuous column angles `(α, β)` of `m` at `target`, unwrapped along the segment from
/// the disk center. At the center `α ∈ [0, 2π)` and `β - α ∈ (0, π)`.
pub fn angle_track(m: &PolyMatrix2, disk: &Disk, target: [f64; 2], steps: usize) -> Result<(f64, f64), DeformError> {
    let c = disk.center_f64();
    let m0 = m.eval_f64(&c);
    let (a0, b0) = column_angles(&m0)?;
    let alpha = a0.rem_euclid(TAU);
    let mut beta = alpha + wrap(b0 - a0);
    if beta <= alpha {
        beta += TAU;
    }
    let at = |s: f64| [c[0] + s * (target[0] - c[0]), c[1] + s * (target[1] - c[1])];
    let mut state = (alpha, beta, column_angles(&m0)?);
    let steps = steps.max(1);
    for k in 0..steps {
        let (s0, s1) = (k as f64 / steps as f64, (k + 1) as f64 / steps as f64);
        state = advance(m, &at, s0, s1, state, 0)?;
    }
    Ok((state.0, state.1))
}

type Track = (f64, f64, (f64, f64));

fn advance(m: &PolyMatrix2, at: &dyn Fn(f64) -> [f64; 2], s0: f64, s1: f64, st: Track, depth: u32) -> Result<Track, DeformError> {
    let raw = column_angles(&m.eval_f64(&at(s1)))?;
    let da = wrap(raw.0 - st.2 .0);
    let db = wrap(raw.1 - st.2 .1);
    if da.abs() < FRAC_PI_4 && db.abs() < FRAC_PI_4 {
        return Ok((st.0 + da, st.1 + db, raw));
    }
    if depth >= 48 {
        return Err(DeformError::StepUnderflow);
    }
    let mid = 0.5 * (s0 + s1);
    let st = advance(m, at, s0, mid, st, depth + 1)?;
    advance(m, at, mid, s1, st, depth + 1)
}

/// Entries of the analytic family at one point: the column lengths and angles deform from
/// those of the identity, `(1, 0)` and `(π/2, 0)`, to those of `m`.
pub fn analytic_entry(m: &[[f64; 2]; 2], alpha: f64, beta: f64, t: f64) -> [[f64; 2]; 2] {
    let l1 = (1.0 - t) + t * m[0][0].hypot(m[1][0]);
    let l2 = (1.0 - t) + t * m[0][1].hypot(m[1][1]);
    let a = t * alpha;
    let b = (1.0 - t) * FRAC_PI_2 + t * beta;
    [[l1 * a.cos(), l2 * b.cos()], [l1 * a.sin(), l2 * b.sin()]]
}

struct Tracked {
    value: [[f64; 2]; 2],
    alpha: f64,
    beta: f64,
}

fn track_all(m: &PolyMatrix2, disk: &Disk, grid: Grid) -> Result<Vec<Tracked>, DeformError> {
    let (c, r) = (disk.center_f64(), disk.radius_f64());
    let n = grid.n;
    (0..n * n)
        .into_par_iter()
        .map(|k| {
            let p = project(c, r, node_of(c, r, n, k % n, k / n));
            let (alpha, beta) = angle_track(m, disk, p, 8)?;
            Ok(Tracked { value: m.eval_f64(&p), alpha, beta })
        })
        .collect()
}

fn assemble(disk: &Disk, grid: Grid, f: impl Fn(usize, f64) -> [[f64; 2]; 2] + Sync) -> Result<SampledFamily, DeformError> {
    let nn = grid.n * grid.n;
    let values: Vec<[[f64; 2]; 2]> = (0..grid.nt * nn)
        .into_par_iter()
        .map(|k| f(k % nn, (k / nn) as f64 / (grid.nt - 1) as f64))
        .collect();
    if values.iter().any(|v| !(det(v) > 0.0)) {
        return Err(DeformError::NonPositiveSample);
    }
    Ok(SampledFamily { grid, center: disk.center_f64(), radius: disk.radius_f64(), values })
}

/// Samples the analytic family from the identity (`t = 0`) to `m` (`t = 1`). Grid nodes
/// outside the disk take the values at their radial projection onto the circle.
pub fn analytic_family_samples(m: &PolyMatrix2, disk: &Disk, grid: Grid) -> Result<SampledFamily, DeformError> {
    let tr = track_all(m, disk, grid)?;
    assemble(disk, grid, |k, t| {
        let s = &tr[k];
        analytic_entry(&s.value, s.alpha, s.beta, t)
    })
}

/// `N` at `t = 0`, the identity at `t = 1/2`, `M` at `t = 1`.
pub fn two_sided_family(n: &PolyMatrix2, m: &PolyMatrix2, disk: &Disk, grid: Grid) -> Result<SampledFamily, DeformError> {
    let tn = track_all(n, disk, grid)?;
    let tm = track_all(m, disk, grid)?;
    assemble(disk, grid, |k, t| {
        if t <= 0.5 {
            let s = &tn[k];
            analytic_entry(&s.value, s.alpha, s.beta, 1.0 - 2.0 * t)
        } else {
            let s = &tm[k];
            analytic_entry(&s.value, s.alpha, s.beta, 2.0 * t - 1.0)
        }
    })
}
