//! Isolation of regular common zeros of a pair by subdivision and the Krawczyk test.

use crate::certify::{Disk, Options};
use crate::interval::{interval_eval, Bounder, Enclosure, FInterval, Interval};
use crate::poly::{Poly2, X, Y};
use crate::rational::{from_f64, to_f64, Rational};
use num_traits::{Signed, Zero};

/// A box containing exactly one common zero of the pair, at which the Jacobian is invertible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatedZero {
    /// Tight enclosure of the zero.
    pub bx: [Interval; 2],
    /// Box in which the zero is the only one.
    pub region: [Interval; 2],
}

impl IsolatedZero {
    pub fn mid_f64(&self) -> [f64; 2] {
        [to_f64(&self.bx[0].mid()), to_f64(&self.bx[1].mid())]
    }
}

#[derive(Clone, Debug)]
pub struct ZeroIsolation {
    pub zeros: Vec<IsolatedZero>,
    /// Boxes that could be neither excluded nor isolated.
    pub unresolved: Vec<[Interval; 2]>,
}

struct Jac {
    f: [Poly2; 2],
    d: [[Poly2; 2]; 2],
}

impl Jac {
    fn new(pair: &(Poly2, Poly2)) -> Self {
        let f = [pair.0.clone(), pair.1.clone()];
        let d = [[f[0].partial(X), f[0].partial(Y)], [f[1].partial(X), f[1].partial(Y)]];
        Jac { f, d }
    }
}

fn outward(iv: &Interval, bits: u32) -> Interval {
    let s = Rational::from_integer(num_traits::pow(num_bigint::BigInt::from(2), bits as usize));
    let lo = (&iv.lo * &s).floor() / &s;
    let hi = (&iv.hi * &s).ceil() / &s;
    Interval::new(lo, hi)
}

/// One Krawczyk step. Returns `K(X)` and whether it lies in the interior of `X`.
fn krawczyk(j: &Jac, b: &[Interval; 2]) -> Option<([Interval; 2], bool)> {
    let c = [b[0].mid(), b[1].mid()];
    let jc: Vec<f64> = j.d.iter().flatten().map(|p| p.eval_f64(&[to_f64(&c[0]), to_f64(&c[1])])).collect();
    let det = jc[0] * jc[3] - jc[1] * jc[2];
    if !det.is_finite() || det == 0.0 {
        return None;
    }
    let y = [[jc[3] / det, -jc[1] / det], [-jc[2] / det, jc[0] / det]];
    let y: Vec<Vec<Rational>> = y.iter().map(|r| r.iter().map(|v| from_f64(*v).unwrap_or_else(Rational::zero)).collect()).collect();
    let fc = [j.f[0].eval(&c), j.f[1].eval(&c)];
    let jx: Vec<Vec<Interval>> = j.d.iter().map(|r| r.iter().map(|p| interval_eval(p, b)).collect()).collect();
    let dx = [b[0].sub(&Interval::point(c[0].clone())), b[1].sub(&Interval::point(c[1].clone()))];
    let mut k: Vec<Interval> = Vec::with_capacity(2);
    for i in 0..2 {
        let yf = &y[i][0] * &fc[0] + &y[i][1] * &fc[1];
        let mut acc = Interval::point(&c[i] - yf);
        for l in 0..2 {
            // (I - Y J(X))_{il}
            let mut m = Interval::point(if i == l { Rational::from_integer(1.into()) } else { Rational::zero() });
            for q in 0..2 {
                m = m.sub(&Interval::point(y[i][q].clone()).mul(&jx[q][l]));
            }
            acc = acc.add(&m.mul(&dx[l]));
        }
        k.push(acc);
    }
    let inside = (0..2).all(|i| k[i].lo > b[i].lo && k[i].hi < b[i].hi);
    Some(([k[0].clone(), k[1].clone()], inside))
}

fn contract(j: &Jac, b: &[Interval; 2], rounds: usize) -> [Interval; 2] {
    let mut cur = b.clone();
    for _ in 0..rounds {
        if (0..2).all(|i| to_f64(&cur[i].width()) < 1e-30) {
            break;
        }
        let Some((k, _)) = krawczyk(j, &cur) else { break };
        let mut next = cur.clone();
        for i in 0..2 {
            let lo = if k[i].lo > cur[i].lo { k[i].lo.clone() } else { cur[i].lo.clone() };
            let hi = if k[i].hi < cur[i].hi { k[i].hi.clone() } else { cur[i].hi.clone() };
            if lo > hi {
                return cur;
            }
            let w = to_f64(&(&hi - &lo)).abs().max(1e-300);
            let bits = (-(w.log2()) + 40.0).clamp(8.0, 160.0) as u32;
            next[i] = outward(&Interval::new(lo, hi), bits).intersect(&cur[i]);
        }
        if next == cur {
            break;
        }
        cur = next;
    }
    cur
}

fn inflate(b: &[Interval; 2]) -> [Interval; 2] {
    std::array::from_fn(|i| {
        let h = b[i].width() / Rational::from_integer(4.into());
        Interval::new(&b[i].lo - &h, &b[i].hi + &h)
    })
}

fn box_inside_open_disk(disk: &Disk, b: &[Interval; 2]) -> bool {
    let c = disk.center().coords();
    let r2 = &disk.radius * &disk.radius;
    let mut far = Rational::zero();
    for i in 0..2 {
        let a = (&b[i].lo - &c[i]).abs();
        let e = (&b[i].hi - &c[i]).abs();
        let m = if a > e { a } else { e };
        far += &m * &m;
    }
    far < r2
}

/// Finds all common zeros of `pair` in the closed disk, each in a Krawczyk box.
///
/// Subdivision stops at `opts.max_depth`; boxes left undecided are reported as unresolved
/// (singular zeros, tangencies or zeros on the boundary circle end up there).
pub fn isolate_common_zeros(pair: &(Poly2, Poly2), disk: &Disk, opts: &Options) -> ZeroIsolation {
    let j = Jac::new(pair);
    let b0: Bounder<FInterval> = Bounder::new(&pair.0);
    let b1: Bounder<FInterval> = Bounder::new(&pair.1);
    let bb = disk.bounding_box();
    let mut queue: Vec<[Interval; 2]> = vec![[bb[0].clone(), bb[1].clone()]];
    let mut zeros: Vec<IsolatedZero> = Vec::new();
    let mut unresolved = Vec::new();
    let mut depth = 0;
    while !queue.is_empty() {
        let mut next = Vec::new();
        for b in queue {
            if disk.box_is_outside(&b[0], &b[1]) {
                continue;
            }
            let fb = [FInterval::from_interval(&b[0]), FInterval::from_interval(&b[1])];
            if b0.bound(&fb).excludes_zero() || b1.bound(&fb).excludes_zero() {
                continue;
            }
            if depth >= 3 {
                let wide = inflate(&b);
                if let Some((_, true)) = krawczyk(&j, &wide) {
                    let z = IsolatedZero { bx: contract(&j, &wide, 12), region: wide };
                    if !zeros.iter().any(|o| same_zero(o, &z)) {
                        zeros.push(z);
                    }
                    continue;
                }
            }
            if depth >= opts.max_depth {
                unresolved.push(b);
                continue;
            }
            let (l0, r0) = b[0].split();
            let (l1, r1) = b[1].split();
            next.push([l0.clone(), l1.clone()]);
            next.push([l0, r1.clone()]);
            next.push([r0.clone(), l1]);
            next.push([r0, r1]);
        }
        queue = next;
        depth += 1;
    }
    // Zeros found from inflated boxes may lie outside the disk.
    let mut kept = Vec::new();
    for z in zeros {
        let mut bx = z.bx.clone();
        let mut decided = false;
        for _ in 0..8 {
            if box_inside_open_disk(disk, &bx) {
                kept.push(IsolatedZero { bx: bx.clone(), region: z.region.clone() });
                decided = true;
                break;
            }
            if disk.box_is_outside(&bx[0], &bx[1]) {
                decided = true;
                break;
            }
            bx = contract(&j, &bx, 4);
        }
        if !decided {
            unresolved.push(bx);
        }
    }
    kept.sort_by(|a, b| (a.bx[0].lo.clone(), a.bx[1].lo.clone()).cmp(&(b.bx[0].lo.clone(), b.bx[1].lo.clone())));
    ZeroIsolation { zeros: kept, unresolved }
}

/// Two isolations hold the same zero when one tight box lies in the other's region.
/// Distinct zeros are never merged: a region holds only one zero.
fn same_zero(a: &IsolatedZero, b: &IsolatedZero) -> bool {
    let within = |inner: &[Interval; 2], outer: &[Interval; 2]| (0..2).all(|i| outer[i].contains_interval(&inner[i]));
    within(&a.bx, &b.region) || within(&b.bx, &a.region)
}

/// Sign of `q` at the zero isolated by `z`; `None` when it cannot be decided
/// (e.g. `q` vanishes there).
pub fn sign_at_zero(pair: &(Poly2, Poly2), z: &IsolatedZero, q: &Poly2) -> Option<i32> {
    let j = Jac::new(pair);
    let mut bx = z.bx.clone();
    for _ in 0..12 {
        let v = interval_eval(q, &bx);
        if v.lo.is_positive() {
            return Some(1);
        }
        if v.hi.is_negative() {
            return Some(-1);
        }
        let nb = contract(&j, &bx, 3);
        if nb == bx {
            break;
        }
        bx = nb;
    }
    None
}
