//! Certified positivity on a closed disk (and disk × time) by interval branch-and-bound,
//! and certified zero-set verification for pairs.

use crate::interval::{Bounder, Enclosure, FInterval, Interval};
use crate::poly::{Poly, Poly2, Poly3};
use crate::rational::{serde_rational, Rational};
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const DEFAULT_MAX_DEPTH: u32 = 24;
/// Boxes narrower than `radius * 2^-MIN_WIDTH_EXP` are not split further.
pub const MIN_WIDTH_EXP: u32 = 20;
/// Half-width of the exclusion square around declared zeros is `radius * 2^-EXCLUSION_EXP`.
pub const EXCLUSION_EXP: u32 = 12;
/// At most this many unresolved boxes are collected by `verify_zero_set`.
pub const MAX_EXTRANEOUS: usize = 32;

/// A point of the plane with rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point(
    #[serde(with = "serde_rational")] pub Rational,
    #[serde(with = "serde_rational")] pub Rational,
);

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point(x, y)
    }

    pub fn coords(&self) -> [Rational; 2] {
        [self.0.clone(), self.1.clone()]
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [crate::rational::to_f64(&self.0), crate::rational::to_f64(&self.1)]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disk {
    #[serde(with = "serde_rational::vec")]
    center: Vec<Rational>,
    #[serde(with = "serde_rational")]
    pub radius: Rational,
}

impl Disk {
    /// Panics unless `radius > 0`.
    pub fn new(center: Point, radius: Rational) -> Self {
        assert!(radius.is_positive(), "disk radius must be positive");
        Disk { center: vec![center.0, center.1], radius }
    }

    pub fn centered(radius: Rational) -> Self {
        Disk::new(Point(Rational::zero(), Rational::zero()), radius)
    }

    pub fn center(&self) -> Point {
        Point(self.center[0].clone(), self.center[1].clone())
    }

    pub fn is_valid(&self) -> bool {
        self.center.len() == 2 && self.radius.is_positive()
    }

    fn dist2(&self, x: &Rational, y: &Rational) -> Rational {
        let dx = x - &self.center[0];
        let dy = y - &self.center[1];
        &dx * &dx + &dy * &dy
    }

    pub fn contains_open(&self, p: &Point) -> bool {
        self.dist2(&p.0, &p.1) < &self.radius * &self.radius
    }

    pub fn contains_closed(&self, p: &Point) -> bool {
        self.dist2(&p.0, &p.1) <= &self.radius * &self.radius
    }

    /// Exact squared distance from the center to the closest point of the box.
    pub fn box_dist2(&self, bx: &Interval, by: &Interval) -> Rational {
        let clamp = |iv: &Interval, c: &Rational| {
            if c < &iv.lo {
                iv.lo.clone()
            } else if c > &iv.hi {
                iv.hi.clone()
            } else {
                c.clone()
            }
        };
        let qx = clamp(bx, &self.center[0]);
        let qy = clamp(by, &self.center[1]);
        self.dist2(&qx, &qy)
    }

    /// True when the closed box misses the closed disk.
    pub fn box_is_outside(&self, bx: &Interval, by: &Interval) -> bool {
        self.box_dist2(bx, by) > &self.radius * &self.radius
    }

    /// The bounding square `[cx-r, cx+r] × [cy-r, cy+r]`.
    pub fn bounding_box(&self) -> [Interval; 2] {
        [
            Interval::new(&self.center[0] - &self.radius, &self.center[0] + &self.radius),
            Interval::new(&self.center[1] - &self.radius, &self.center[1] + &self.radius),
        ]
    }

    pub fn center_f64(&self) -> [f64; 2] {
        self.center().to_f64()
    }

    pub fn radius_f64(&self) -> f64 {
        crate::rational::to_f64(&self.radius)
    }

    fn scaled_radius(&self, exp: u32) -> Rational {
        &self.radius / Rational::from_integer(num_traits::pow(num_bigint::BigInt::from(2), exp as usize))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    PositiveEverywhere,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub verdict: Verdict,
    /// Box (x, y[, t]) where positivity could not be established.
    pub witness: Option<Vec<Interval>>,
    /// Number of boxes examined.
    pub effort: u64,
}

impl Certificate {
    pub fn is_positive(&self) -> bool {
        self.verdict == Verdict::PositiveEverywhere
    }

    /// Certificate for a statement that needs no subdivision (e.g. a positive constant).
    pub fn trivial() -> Self {
        Certificate { verdict: Verdict::PositiveEverywhere, witness: None, effort: 0 }
    }
}

/// Which arithmetic evaluates the range bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Arithmetic {
    /// Outward-rounded binary64 intervals; rigorous and fast.
    #[default]
    Rounded,
    /// Exact rational intervals.
    Exact,
}

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub max_depth: u32,
    pub min_width_exp: u32,
    pub arithmetic: Arithmetic,
}

impl Default for Options {
    fn default() -> Self {
        Options { max_depth: DEFAULT_MAX_DEPTH, min_width_exp: MIN_WIDTH_EXP, arithmetic: Arithmetic::Rounded }
    }
}

impl Options {
    pub fn with_depth(max_depth: u32) -> Self {
        Options { max_depth, ..Default::default() }
    }
}

/// Splits every dimension whose width is at least half the widest one.
fn split_box(b: &[Interval]) -> Vec<Vec<Interval>> {
    let widths: Vec<Rational> = b.iter().map(|iv| iv.width()).collect();
    let wmax = widths.iter().max().cloned().unwrap_or_else(Rational::zero);
    let half = &wmax / Rational::from_integer(2.into());
    let mut out: Vec<Vec<Interval>> = vec![b.to_vec()];
    for (k, w) in widths.iter().enumerate() {
        if w.is_zero() || *w < half {
            continue;
        }
        let mut next = Vec::with_capacity(out.len() * 2);
        for bx in out {
            let (l, r) = bx[k].split();
            let mut a = bx.clone();
            a[k] = l;
            let mut c = bx;
            c[k] = r;
            next.push(a);
            next.push(c);
        }
        out = next;
    }
    out
}

fn max_width(b: &[Interval]) -> Rational {
    b.iter().map(|iv| iv.width()).max().unwrap_or_else(Rational::zero)
}

enum Outcome {
    Done,
    Split,
    Fail,
}

/// Range bound selected by the arithmetic option.
enum AnyBounder {
    Rounded(Bounder<FInterval>),
    Exact(Bounder<Interval>),
}

impl AnyBounder {
    fn new<const N: usize>(p: &Poly<N>, a: Arithmetic) -> Self {
        match a {
            Arithmetic::Rounded => AnyBounder::Rounded(Bounder::new(p)),
            Arithmetic::Exact => AnyBounder::Exact(Bounder::new(p)),
        }
    }

    fn positive(&self, b: &[Interval]) -> bool {
        match self {
            AnyBounder::Rounded(h) => {
                let fb: Vec<FInterval> = b.iter().map(FInterval::from_interval).collect();
                h.bound(&fb).is_positive()
            }
            AnyBounder::Exact(h) => h.bound(b).is_positive(),
        }
    }

    fn excludes_zero(&self, b: &[Interval]) -> bool {
        match self {
            AnyBounder::Rounded(h) => {
                let fb: Vec<FInterval> = b.iter().map(FInterval::from_interval).collect();
                h.bound(&fb).excludes_zero()
            }
            AnyBounder::Exact(h) => h.bound(b).excludes_zero(),
        }
    }
}

fn certify_generic<const N: usize>(p: &Poly<N>, disk: &Disk, start: Vec<Interval>, opts: &Options) -> Certificate {
    if p.is_constant() {
        let positive = p.constant_term().is_positive();
        return Certificate {
            verdict: if positive { Verdict::PositiveEverywhere } else { Verdict::Failed },
            witness: if positive { None } else { Some(start) },
            effort: 1,
        };
    }
    let bounder = AnyBounder::new(p, opts.arithmetic);
    let min_width = disk.scaled_radius(opts.min_width_exp);
    let mut queue = vec![start];
    let mut effort = 0u64;
    let mut depth = 0u32;
    while !queue.is_empty() {
        effort += queue.len() as u64;
        let outcomes: Vec<Outcome> = queue
            .par_iter()
            .map(|b| {
                if disk.box_is_outside(&b[0], &b[1]) {
                    return Outcome::Done;
                }
                if bounder.positive(b) {
                    return Outcome::Done;
                }
                if midpoint_not_positive(p, disk, b) {
                    return Outcome::Fail;
                }
                if depth >= opts.max_depth || max_width(b) < min_width {
                    return Outcome::Fail;
                }
                Outcome::Split
            })
            .collect();
        let mut next = Vec::new();
        for (b, o) in queue.into_iter().zip(outcomes) {
            match o {
                Outcome::Done => {}
                Outcome::Fail => {
                    return Certificate { verdict: Verdict::Failed, witness: Some(b), effort };
                }
                Outcome::Split => next.extend(split_box(&b)),
            }
        }
        queue = next;
        depth += 1;
    }
    Certificate { verdict: Verdict::PositiveEverywhere, witness: None, effort }
}

/// True if `p` is provably `<= 0` at the box midpoint and that midpoint lies in the closed disk.
fn midpoint_not_positive<const N: usize>(p: &Poly<N>, disk: &Disk, b: &[Interval]) -> bool {
    let mid: [Rational; N] = std::array::from_fn(|k| b[k].mid());
    if !disk.contains_closed(&Point(mid[0].clone(), mid[1].clone())) {
        return false;
    }
    let fm: [f64; N] = std::array::from_fn(|k| crate::rational::to_f64(&mid[k]));
    let approx = p.eval_f64(&fm);
    let scale = p.max_abs_coeff_f64() * 1e-6;
    if approx > scale {
        return false;
    }
    !p.eval(&mid).is_positive()
}

/// Certifies `p > 0` on the closed disk.
pub fn certify_positive(p: &Poly2, disk: &Disk, max_depth: u32) -> Certificate {
    certify_positive_with(p, disk, &Options::with_depth(max_depth))
}

pub fn certify_positive_with(p: &Poly2, disk: &Disk, opts: &Options) -> Certificate {
    certify_generic(p, disk, disk.bounding_box().to_vec(), opts)
}

/// Certifies `p > 0` on the closed disk times the closed time interval.
pub fn certify_positive_xt(p: &Poly3, disk: &Disk, time: &Interval, max_depth: u32) -> Certificate {
    certify_positive_xt_with(p, disk, time, &Options::with_depth(max_depth))
}

pub fn certify_positive_xt_with(p: &Poly3, disk: &Disk, time: &Interval, opts: &Options) -> Certificate {
    let [bx, by] = disk.bounding_box();
    certify_generic(p, disk, vec![bx, by, time.clone()], opts)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroSetReport {
    /// Declared points at which both polynomials vanish exactly.
    pub confirmed_points: Vec<Point>,
    /// Declared points at which the pair does not vanish.
    pub rejected_points: Vec<Point>,
    /// Boxes of the closed disk that may contain undeclared common zeros.
    pub extraneous_boxes: Vec<Vec<Interval>>,
    pub effort: u64,
}

impl ZeroSetReport {
    pub fn is_verified(&self) -> bool {
        self.rejected_points.is_empty() && self.extraneous_boxes.is_empty()
    }
}

/// Checks that the common zeros of `pair` in the closed disk are exactly `declared`.
///
/// Declared points are checked by exact evaluation; the rest of the disk, outside small
/// exclusion squares around them, is covered by boxes on which `f0` or `f1` is certified
/// nonzero (hence `f0^2 + f1^2 > 0`).
pub fn verify_zero_set(pair: &(Poly2, Poly2), disk: &Disk, declared: &[Point], max_depth: u32) -> ZeroSetReport {
    verify_zero_set_with(pair, disk, declared, &Options::with_depth(max_depth))
}

pub fn verify_zero_set_with(pair: &(Poly2, Poly2), disk: &Disk, declared: &[Point], opts: &Options) -> ZeroSetReport {
    let mut confirmed = Vec::new();
    let mut rejected = Vec::new();
    for p in declared {
        let c = p.coords();
        if pair.0.eval(&c).is_zero() && pair.1.eval(&c).is_zero() && disk.contains_open(p) {
            confirmed.push(p.clone());
        } else {
            rejected.push(p.clone());
        }
    }
    let h = disk.scaled_radius(EXCLUSION_EXP);
    let squares: Vec<[Interval; 2]> = confirmed
        .iter()
        .map(|p| [Interval::new(&p.0 - &h, &p.0 + &h), Interval::new(&p.1 - &h, &p.1 + &h)])
        .collect();
    let b0 = AnyBounder::new(&pair.0, opts.arithmetic);
    let b1 = AnyBounder::new(&pair.1, opts.arithmetic);
    let min_width = disk.scaled_radius(opts.min_width_exp);
    let both_zero = pair.0.is_zero() && pair.1.is_zero();
    let mut queue = vec![disk.bounding_box().to_vec()];
    let mut extraneous = Vec::new();
    let mut effort = 0u64;
    let mut depth = 0u32;
    while !queue.is_empty() && extraneous.len() < MAX_EXTRANEOUS {
        effort += queue.len() as u64;
        let outcomes: Vec<Outcome> = queue
            .par_iter()
            .map(|b| {
                if disk.box_is_outside(&b[0], &b[1]) {
                    return Outcome::Done;
                }
                if squares.iter().any(|s| s[0].contains_interval(&b[0]) && s[1].contains_interval(&b[1])) {
                    return Outcome::Done;
                }
                if !both_zero && (b0.excludes_zero(b) || b1.excludes_zero(b)) {
                    return Outcome::Done;
                }
                if depth >= opts.max_depth || max_width(b) < min_width {
                    return Outcome::Fail;
                }
                Outcome::Split
            })
            .collect();
        let mut next = Vec::new();
        for (b, o) in queue.into_iter().zip(outcomes) {
            match o {
                Outcome::Done => {}
                Outcome::Fail => {
                    if extraneous.len() < MAX_EXTRANEOUS {
                        extraneous.push(b);
                    }
                }
                Outcome::Split => next.extend(split_box(&b)),
            }
        }
        queue = next;
        depth += 1;
    }
    ZeroSetReport { confirmed_points: confirmed, rejected_points: rejected, extraneous_boxes: extraneous, effort }
}

/// Deterministic pseudo-random points of the closed disk (for sampling checks).
pub fn disk_samples(disk: &Disk, n: usize, seed: u64) -> Vec<[f64; 2]> {
    let [cx, cy] = disk.center_f64();
    let r = disk.radius_f64();
    let mut s = seed ^ 0x9E37_79B9_7F4A_7C15;
    let mut next = move || {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        (s >> 11) as f64 / (1u64 << 53) as f64
    };
    (0..n)
        .map(|_| {
            let rho = r * next().sqrt();
            let th = std::f64::consts::TAU * next();
            [cx + rho * th.cos(), cy + rho * th.sin()]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn p2(s: &str) -> Poly2 {
        s.parse().unwrap()
    }
    fn p3(s: &str) -> Poly3 {
        s.parse().unwrap()
    }
    fn unit() -> Disk {
        Disk::centered(int(1))
    }

    #[test]
    fn positive_examples() {
        assert!(certify_positive(&p2("1"), &unit(), 24).is_positive());
        assert!(certify_positive(&p2("24 - (x - y)^2"), &Disk::centered(int(2)), 24).is_positive());
        let c = certify_positive(&p2("x"), &unit(), 24);
        assert_eq!(c.verdict, Verdict::Failed);
        let w = c.witness.unwrap();
        assert!(w[0].lo <= int(0));
    }

    #[test]
    fn positive_xt_examples() {
        let d = Disk::centered(int(2));
        let t01 = Interval::new(int(0), int(1));
        assert!(certify_positive_xt(&p3("1 - 3/4*t^2"), &d, &t01, 24).is_positive());
        assert!(certify_positive_xt(&p3("(1 + 2/3*t)^2 - 16/9*t^2"), &d, &t01, 24).is_positive());
        let c = certify_positive_xt(&p3("1 - 3/4*t^2"), &d, &Interval::new(int(0), rat(6, 5)), 24);
        assert_eq!(c.verdict, Verdict::Failed);
        let w = c.witness.unwrap();
        let (lo, hi) = w[2].to_f64();
        let root = 2.0 * 3f64.sqrt() / 3.0;
        assert!(hi >= root - 0.1 && lo <= 6.0 / 5.0, "{lo} {hi}");
    }

    #[test]
    fn exact_and_rounded_agree() {
        let d = Disk::new(Point(rat(1, 3), int(0)), rat(3, 2));
        for s in ["2 + x*y", "x^2 + y^2 + 1/10", "x - 1/2", "3 - x^3 + y"] {
            let a = certify_positive_with(&p2(s), &d, &Options::default());
            let e = certify_positive_with(&p2(s), &d, &Options { arithmetic: Arithmetic::Exact, ..Default::default() });
            assert_eq!(a.verdict, e.verdict, "{s}");
        }
    }

    #[test]
    fn box_test_is_exact() {
        let d = unit();
        let a = Interval::new(int(1), int(2));
        let b = Interval::new(int(0), int(1));
        assert!(!d.box_is_outside(&a, &b));
        let a2 = Interval::new(rat(1, 1) + rat(1, 1_000_000_000), int(2));
        assert!(d.box_is_outside(&a2, &b));
    }

    #[test]
    fn zero_set_examples() {
        let r2 = Disk::centered(int(2));
        let o = Point(int(0), int(0));
        let rep = verify_zero_set(&(p2("x"), p2("y")), &r2, &[o.clone()], 24);
        assert!(rep.is_verified());
        assert_eq!(rep.confirmed_points, vec![o.clone()]);

        let f = (p2("x^2 - y^2/2 - 1/2"), p2("-x^2/2 + y^2 - 1/2"));
        let pts: Vec<Point> = [(1, 1), (1, -1), (-1, 1), (-1, -1)].iter().map(|&(a, b)| Point(int(a), int(b))).collect();
        let rep = verify_zero_set(&f, &r2, &pts, 24);
        assert!(rep.is_verified(), "{rep:?}");
        assert_eq!(rep.confirmed_points.len(), 4);

        let g = (p2("x^2 + y^2 - 1"), p2("y"));
        let rep = verify_zero_set(&g, &r2, &[Point(int(1), int(0)), Point(int(-1), int(0))], 24);
        assert!(rep.is_verified());

        let w = (p2("x^2"), p2("y^2"));
        assert!(verify_zero_set(&w, &r2, &[o.clone()], 24).is_verified());
    }

    #[test]
    fn zero_set_detects_mismatch() {
        let r2 = Disk::centered(int(2));
        let rep = verify_zero_set(&(p2("x"), p2("y")), &r2, &[Point(int(1), int(0))], 24);
        assert!(!rep.is_verified());
        assert_eq!(rep.rejected_points.len(), 1);
        assert!(!rep.extraneous_boxes.is_empty());
        assert!(rep.extraneous_boxes.iter().all(|b| b[0].contains(&int(0)) && b[1].contains(&int(0))));
    }

    #[test]
    fn zero_set_is_scale_invariant() {
        let r2 = Disk::centered(int(2));
        let f = (p2("x^2 + y^2 - 1"), p2("y"));
        let g = (f.0.scale(&int(7)), f.1.scale(&int(7)));
        let pts = [Point(int(1), int(0)), Point(int(-1), int(0))];
        assert_eq!(verify_zero_set(&f, &r2, &pts, 24), verify_zero_set(&g, &r2, &pts, 24));
    }

    #[test]
    fn certificate_json() {
        let c = certify_positive(&p2("x"), &unit(), 24);
        let j = serde_json::to_string(&c).unwrap();
        let back: Certificate = serde_json::from_str(&j).unwrap();
        assert_eq!(back, c);
        assert!(j.contains("\"verdict\":\"Failed\""));
    }
}
