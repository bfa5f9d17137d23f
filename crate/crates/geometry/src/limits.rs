//! Limit points over a center point: the direction function along the tangent cone,
//! the closure of its image, and the resulting arcs on the exceptional circle.

use crate::GeometryError;
use blowup_core::algebraic::RealAlgebraic;
use blowup_core::interval::interval_eval;
use blowup_core::rational::format_rational;
use blowup_core::{resultant, Interval, Pair, Point, Poly1, Poly2, Rational, RationalFunction1, X, Y};
use num_traits::{One, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use std::cmp::Ordering;
use std::f64::consts::PI;

/// Point of the extended real line.
#[derive(Clone, Debug)]
pub enum Ext {
    NegInf,
    Finite(RealAlgebraic),
    PosInf,
}

impl Ext {
    pub fn rational(r: Rational) -> Self {
        Ext::Finite(RealAlgebraic::rational(r))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Ext::Finite(a) => a.as_rational(),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Ext::NegInf => f64::NEG_INFINITY,
            Ext::PosInf => f64::INFINITY,
            Ext::Finite(a) => a.to_f64(),
        }
    }

    pub fn cmp_exact(&self, o: &Ext) -> Ordering {
        match (self, o) {
            (Ext::NegInf, Ext::NegInf) | (Ext::PosInf, Ext::PosInf) => Ordering::Equal,
            (Ext::NegInf, _) | (_, Ext::PosInf) => Ordering::Less,
            (_, Ext::NegInf) | (Ext::PosInf, _) => Ordering::Greater,
            (Ext::Finite(a), Ext::Finite(b)) => a.cmp_exact(b),
        }
    }
}

impl PartialEq for Ext {
    fn eq(&self, o: &Ext) -> bool {
        self.cmp_exact(o) == Ordering::Equal
    }
}

impl Serialize for Ext {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Ext::NegInf => s.serialize_str("-inf"),
            Ext::PosInf => s.serialize_str("+inf"),
            Ext::Finite(a) => match a.as_rational() {
                Some(r) => s.serialize_str(&format_rational(r)),
                None => {
                    let mut m = s.serialize_map(Some(3))?;
                    m.serialize_entry("root_of", &a.poly().to_text())?;
                    m.serialize_entry("in", &[format_rational(&a.interval().lo), format_rational(&a.interval().hi)])?;
                    m.serialize_entry("approx", &a.to_f64())?;
                    m.end()
                }
            },
        }
    }
}

/// Finite union of closed intervals of the extended real line, sorted and disjoint.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtendedIntervalSet {
    pub intervals: Vec<(Ext, Ext)>,
}

impl ExtendedIntervalSet {
    pub fn new(mut iv: Vec<(Ext, Ext)>) -> Self {
        iv.sort_by(|a, b| a.0.cmp_exact(&b.0));
        let mut out: Vec<(Ext, Ext)> = Vec::new();
        for (lo, hi) in iv {
            if let Some(last) = out.last_mut() {
                if lo.cmp_exact(&last.1) != Ordering::Greater {
                    if hi.cmp_exact(&last.1) == Ordering::Greater {
                        last.1 = hi;
                    }
                    continue;
                }
            }
            out.push((lo, hi));
        }
        ExtendedIntervalSet { intervals: out }
    }

    pub fn full() -> Self {
        ExtendedIntervalSet { intervals: vec![(Ext::NegInf, Ext::PosInf)] }
    }

    pub fn is_full(&self) -> bool {
        self.intervals.len() == 1 && matches!(self.intervals[0], (Ext::NegInf, Ext::PosInf))
    }

    pub fn to_f64(&self) -> Vec<[f64; 2]> {
        self.intervals.iter().map(|(a, b)| [a.to_f64(), b.to_f64()]).collect()
    }
}

/// `ϱ(w) = f0^[m,p](p + (1, w)) / f1^[m,p](p + (1, w))` for the degree-`m` leading forms
/// of the pair at `p`.
pub fn rho_function(pair: &Pair, p: &Point) -> Result<RationalFunction1, GeometryError> {
    let c = p.coords();
    let s0 = pair.0.shift(&c);
    let s1 = pair.1.shift(&c);
    let (m0, m1) = (s0.min_degree(), s1.min_degree());
    let m = match (m0, m1) {
        (Some(a), Some(b)) if a == b && a > 0 => a,
        _ => return Err(GeometryError::UnsupportedLimitConfiguration),
    };
    let (l0, l1) = (s0.homogeneous_part(m), s1.homogeneous_part(m));
    let along = |l: &Poly2| -> Poly1 { l.subst_value(X, &Rational::one()).permute::<1>([0, 0]) };
    let (d0, d1) = (along(&l0), along(&l1));
    // Both forms divisible by x: common factor in the direction w → ∞.
    if d0.degree().unwrap_or(0) < m && d1.degree().unwrap_or(0) < m {
        return Err(GeometryError::UnsupportedLimitConfiguration);
    }
    let g = d0.gcd(&d1);
    if !g.is_constant() && !RealAlgebraic::roots_of(&g).is_empty() {
        return Err(GeometryError::UnsupportedLimitConfiguration);
    }
    Ok(RationalFunction1::new(d0, d1)?)
}

fn limit_at_infinity(rho: &RationalFunction1) -> Option<Rational> {
    let (dp, dq) = (rho.numerator.degree().unwrap_or(0), rho.denominator.degree().unwrap_or(0));
    match dp.cmp(&dq) {
        Ordering::Less => Some(Rational::zero()),
        Ordering::Equal => Some(rho.numerator.leading_coeff() / rho.denominator.leading_coeff()),
        Ordering::Greater => None,
    }
}

/// `ϱ(c)` at a real root `c` of the derivative numerator, as an exact algebraic number.
fn value_at(rho: &RationalFunction1, d: &Poly1, c: &RealAlgebraic) -> RealAlgebraic {
    if let Some(r) = c.as_rational() {
        return RealAlgebraic::rational(rho.eval(r).expect("not a pole"));
    }
    // ϱ(c) is a root of Res_w(P(w) - v Q(w), D(w)).
    let lift = |p: &Poly1| -> Poly2 { p.permute([X]) };
    let a = &lift(&rho.numerator) - &(&lift(&rho.denominator) * &Poly2::var(Y));
    let r = resultant(&a, &lift(d), X).expect("positive degrees").permute::<1>([0, 0]);
    let mut cands = RealAlgebraic::roots_of(&r);
    let mut c = c.clone();
    loop {
        let iv = [c.interval().clone()];
        let q = interval_eval(&rho.denominator, &iv);
        if !q.contains(&Rational::zero()) {
            let p = interval_eval(&rho.numerator, &iv);
            let e = divide(&p, &q);
            let hits: Vec<usize> = (0..cands.len())
                .filter(|&k| {
                    let ci = cands[k].interval();
                    !(ci.hi < e.lo || e.hi < ci.lo)
                })
                .collect();
            if hits.len() == 1 {
                return cands.swap_remove(hits[0]);
            }
        }
        let w = c.interval().width() / Rational::from_integer(4.into());
        c.refine(&w);
        if let Some(rv) = c.as_rational() {
            return RealAlgebraic::rational(rho.eval(rv).expect("not a pole"));
        }
        for k in cands.iter_mut() {
            if k.as_rational().is_none() {
                let w = k.interval().width() / Rational::from_integer(2.into());
                k.refine(&w);
            }
        }
    }
}

fn divide(p: &Interval, q: &Interval) -> Interval {
    let cands = [&p.lo / &q.lo, &p.lo / &q.hi, &p.hi / &q.lo, &p.hi / &q.hi];
    let lo = cands.iter().min().unwrap().clone();
    let hi = cands.iter().max().unwrap().clone();
    Interval::new(lo, hi)
}

/// Removes from `d` every factor it shares with `q`.
fn strip_common(d: &Poly1, q: &Poly1) -> Poly1 {
    let mut d = d.clone();
    loop {
        let g = d.gcd(q);
        if g.is_constant() {
            return d;
        }
        d = d.div_exact(&g).expect("gcd divides");
    }
}

/// Closure of `ϱ(ℝ ∖ poles)` in the extended real line.
pub fn image_closure(rho: &RationalFunction1) -> ExtendedIntervalSet {
    if rho.is_constant() {
        let c = rho.numerator.constant_term() / rho.denominator.constant_term();
        return ExtendedIntervalSet { intervals: vec![(Ext::rational(c.clone()), Ext::rational(c))] };
    }
    let d = rho.derivative_numerator();
    let dc = strip_common(&d, &rho.denominator);
    enum Kind {
        Pole,
        Critical,
    }
    let mut breaks: Vec<(RealAlgebraic, Kind)> = RealAlgebraic::roots_of(&rho.denominator)
        .into_iter()
        .map(|r| (r, Kind::Pole))
        .chain(RealAlgebraic::roots_of(&dc).into_iter().map(|r| (r, Kind::Critical)))
        .collect();
    breaks.sort_by(|a, b| a.0.cmp_exact(&b.0));
    separate(&mut breaks);
    // A rational point inside each piece between consecutive breakpoints.
    let n = breaks.len();
    let mut probes = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let lo = if k == 0 { None } else { Some(breaks[k - 1].0.interval().hi.clone()) };
        let hi = if k == n { None } else { Some(breaks[k].0.interval().lo.clone()) };
        let q = match (lo, hi) {
            (None, None) => Rational::zero(),
            (None, Some(h)) => h - Rational::one(),
            (Some(l), None) => l + Rational::one(),
            (Some(l), Some(h)) => (l + h) / Rational::from_integer(2.into()),
        };
        probes.push(q);
    }
    let inf = limit_at_infinity(rho);
    let mut pieces = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let up = blowup_core::rational::sign(&d.at1(&probes[k])) > 0;
        let left = if k == 0 {
            match &inf {
                Some(l) => Ext::rational(l.clone()),
                None if up => Ext::NegInf,
                None => Ext::PosInf,
            }
        } else {
            match &breaks[k - 1] {
                (_, Kind::Pole) if up => Ext::NegInf,
                (_, Kind::Pole) => Ext::PosInf,
                (c, Kind::Critical) => Ext::Finite(value_at(rho, &dc, c)),
            }
        };
        let right = if k == n {
            match &inf {
                Some(l) => Ext::rational(l.clone()),
                None if up => Ext::PosInf,
                None => Ext::NegInf,
            }
        } else {
            match &breaks[k] {
                (_, Kind::Pole) if up => Ext::PosInf,
                (_, Kind::Pole) => Ext::NegInf,
                (c, Kind::Critical) => Ext::Finite(value_at(rho, &dc, c)),
            }
        };
        pieces.push(if up { (left, right) } else { (right, left) });
    }
    ExtendedIntervalSet::new(pieces).exactify()
}

impl ExtendedIntervalSet {
    fn exactify(self) -> Self {
        ExtendedIntervalSet {
            intervals: self
                .intervals
                .into_iter()
                .map(|(a, b)| {
                    let f = |e: Ext| match e {
                        Ext::Finite(r) => Ext::Finite(r.exact_if_rational()),
                        o => o,
                    };
                    (f(a), f(b))
                })
                .collect(),
        }
    }
}

/// Refines isolating intervals of distinct sorted algebraic numbers until they are
/// pairwise disjoint.
fn separate<K>(v: &mut [(RealAlgebraic, K)]) {
    for k in 1..v.len() {
        loop {
            if v[k - 1].0.interval().hi < v[k].0.interval().lo {
                break;
            }
            let (a, b) = v.split_at_mut(k);
            let x = &mut a[k - 1].0;
            let y = &mut b[0].0;
            for r in [x, y] {
                if r.as_rational().is_none() {
                    let w = r.interval().width() / Rational::from_integer(2.into());
                    r.refine(&w);
                }
            }
            if v[k - 1].0.as_rational().is_some() && v[k].0.as_rational().is_some() {
                break;
            }
        }
    }
}

/// Limit points over one center point as arcs of the exceptional circle, in the angle
/// `β` of the torus picture, `tan(β/2) = f1/f0`.
#[derive(Clone, Debug, Serialize)]
pub struct LimitArc {
    pub center: Point,
    /// Closure of the values of `f1/f0` along the tangent directions.
    pub tau: ExtendedIntervalSet,
    pub beta_ranges: Vec<[f64; 2]>,
    pub angular_length: f64,
}

impl LimitArc {
    pub fn is_full_fiber(&self) -> bool {
        self.tau.is_full()
    }
}

fn beta_of(e: &Ext) -> f64 {
    match e {
        Ext::NegInf => -PI,
        Ext::PosInf => PI,
        Ext::Finite(a) => 2.0 * a.to_f64().atan(),
    }
}

/// Limit arc over `p`. Fails for unequal multiplicities or leading forms with a common
/// real linear factor.
pub fn limit_arcs(pair: &Pair, p: &Point) -> Result<LimitArc, GeometryError> {
    let rho = rho_function(pair, p)?;
    let tau = image_closure(&rho.recip()?);
    let beta_ranges: Vec<[f64; 2]> = tau.intervals.iter().map(|(a, b)| [beta_of(a), beta_of(b)]).collect();
    let angular_length = beta_ranges.iter().map(|r| r[1] - r[0]).sum();
    Ok(LimitArc { center: p.clone(), tau, beta_ranges, angular_length })
}

pub fn arc_angular_length(arc: &LimitArc) -> f64 {
    arc.angular_length
}
