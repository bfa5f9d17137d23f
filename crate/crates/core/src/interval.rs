//! Interval enclosures: exact rational intervals and outward-rounded binary64
//! intervals, plus Horner and centered-form polynomial range bounds.

use crate::poly::Poly;
use crate::rational::{to_f64, Rational};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "crate::rational::serde_rational")]
    pub lo: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "interval with lo > hi");
        Interval { lo, hi }
    }

    pub fn point(v: Rational) -> Self {
        Interval { lo: v.clone(), hi: v }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn contains(&self, v: &Rational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_interval(&self, o: &Interval) -> bool {
        self.lo <= o.lo && o.hi <= self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn split(&self) -> (Interval, Interval) {
        let m = self.mid();
        (Interval::new(self.lo.clone(), m.clone()), Interval::new(m, self.hi.clone()))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.lo), to_f64(&self.hi))
    }
}

/// Arithmetic needed to evaluate polynomial enclosures.
pub trait Enclosure: Clone + Send + Sync {
    fn from_rational(r: &Rational) -> Self;
    fn zero() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// Tight power: even powers of intervals straddling zero start at zero.
    fn pow(&self, k: u32) -> Self;
    fn intersect(&self, o: &Self) -> Self;
    /// True if every point is strictly positive.
    fn is_positive(&self) -> bool;
    /// True if zero is not contained.
    fn excludes_zero(&self) -> bool;
    /// Symmetric interval `[-h, h]` of the same radius as `self`, around zero.
    fn centered_radius(&self) -> Self;
    fn midpoint(&self) -> Self;
}

impl Enclosure for Interval {
    fn from_rational(r: &Rational) -> Self {
        Interval::point(r.clone())
    }

    fn zero() -> Self {
        Interval::point(Rational::zero())
    }

    fn add(&self, o: &Self) -> Self {
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    fn sub(&self, o: &Self) -> Self {
        Interval { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    fn mul(&self, o: &Self) -> Self {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval { lo, hi }
    }

    fn pow(&self, k: u32) -> Self {
        if k == 0 {
            return Interval::point(Rational::one());
        }
        let a = num_traits::pow(self.lo.clone(), k as usize);
        let b = num_traits::pow(self.hi.clone(), k as usize);
        if k % 2 == 1 {
            Interval { lo: a, hi: b }
        } else if !self.lo.is_negative() {
            Interval { lo: a, hi: b }
        } else if !self.hi.is_positive() {
            Interval { lo: b, hi: a }
        } else {
            Interval { lo: Rational::zero(), hi: if a > b { a } else { b } }
        }
    }

    fn intersect(&self, o: &Self) -> Self {
        let lo = if self.lo > o.lo { self.lo.clone() } else { o.lo.clone() };
        let hi = if self.hi < o.hi { self.hi.clone() } else { o.hi.clone() };
        if lo <= hi {
            Interval { lo, hi }
        } else {
            self.clone()
        }
    }

    fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    fn excludes_zero(&self) -> bool {
        self.lo.is_positive() || self.hi.is_negative()
    }

    fn centered_radius(&self) -> Self {
        let h = self.width() / Rational::from_integer(2.into());
        Interval { lo: -h.clone(), hi: h }
    }

    fn midpoint(&self) -> Self {
        Interval::point(self.mid())
    }
}

/// Binary64 interval with outward rounding after every operation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FInterval {
    pub lo: f64,
    pub hi: f64,
}

fn down(x: f64) -> f64 {
    if x.is_nan() {
        f64::NEG_INFINITY
    } else {
        x.next_down()
    }
}

fn up(x: f64) -> f64 {
    if x.is_nan() {
        f64::INFINITY
    } else {
        x.next_up()
    }
}

impl FInterval {
    pub fn new(lo: f64, hi: f64) -> Self {
        FInterval { lo, hi }
    }

    /// Outward enclosure of a rational interval.
    pub fn from_interval(iv: &Interval) -> Self {
        let a = Self::from_rational(&iv.lo);
        let b = Self::from_rational(&iv.hi);
        FInterval { lo: a.lo, hi: b.hi }
    }

    fn mul_lo(a: f64, b: f64) -> f64 {
        if a == 0.0 || b == 0.0 {
            0.0
        } else {
            down(a * b)
        }
    }

    fn mul_hi(a: f64, b: f64) -> f64 {
        if a == 0.0 || b == 0.0 {
            0.0
        } else {
            up(a * b)
        }
    }
}

impl Enclosure for FInterval {
    fn from_rational(r: &Rational) -> Self {
        if r.is_zero() {
            return FInterval { lo: 0.0, hi: 0.0 };
        }
        let v = to_f64(r);
        if !v.is_finite() {
            return if r.is_negative() {
                FInterval { lo: f64::NEG_INFINITY, hi: f64::MIN }
            } else {
                FInterval { lo: f64::MAX, hi: f64::INFINITY }
            };
        }
        if r.is_integer() && v.abs() < 9.0e15 {
            return FInterval { lo: v, hi: v };
        }
        FInterval { lo: down(down(v)), hi: up(up(v)) }
    }

    fn zero() -> Self {
        FInterval { lo: 0.0, hi: 0.0 }
    }

    fn add(&self, o: &Self) -> Self {
        FInterval { lo: down(self.lo + o.lo), hi: up(self.hi + o.hi) }
    }

    fn sub(&self, o: &Self) -> Self {
        FInterval { lo: down(self.lo - o.hi), hi: up(self.hi - o.lo) }
    }

    fn mul(&self, o: &Self) -> Self {
        let (a, b, c, d) = (self.lo, self.hi, o.lo, o.hi);
        let lo = Self::mul_lo(a, c).min(Self::mul_lo(a, d)).min(Self::mul_lo(b, c)).min(Self::mul_lo(b, d));
        let hi = Self::mul_hi(a, c).max(Self::mul_hi(a, d)).max(Self::mul_hi(b, c)).max(Self::mul_hi(b, d));
        FInterval { lo, hi }
    }

    fn pow(&self, k: u32) -> Self {
        if k == 0 {
            return FInterval { lo: 1.0, hi: 1.0 };
        }
        let mut acc = *self;
        for _ in 1..k {
            acc = acc.mul(self);
        }
        if k % 2 == 0 {
            acc.lo = acc.lo.max(0.0);
            if self.lo >= 0.0 || self.hi <= 0.0 {
                let a = self.lo.abs().min(self.hi.abs());
                let mut m = a;
                for _ in 1..k {
                    m = Self::mul_lo(m, a);
                }
                acc.lo = acc.lo.max(m);
            }
        }
        acc
    }

    fn intersect(&self, o: &Self) -> Self {
        let lo = self.lo.max(o.lo);
        let hi = self.hi.min(o.hi);
        if lo <= hi {
            FInterval { lo, hi }
        } else {
            *self
        }
    }

    fn is_positive(&self) -> bool {
        self.lo > 0.0
    }

    fn excludes_zero(&self) -> bool {
        self.lo > 0.0 || self.hi < 0.0
    }

    fn centered_radius(&self) -> Self {
        let m = 0.5 * (self.lo + self.hi);
        let h = up((self.hi - m).max(m - self.lo));
        FInterval { lo: -h, hi: h }
    }

    fn midpoint(&self) -> Self {
        let m = 0.5 * (self.lo + self.hi);
        FInterval { lo: m, hi: m }
    }
}

/// Nested Horner scheme, compiled once and evaluated on many boxes.
#[derive(Clone, Debug)]
pub struct Horner<I: Enclosure> {
    node: Node<I>,
}

#[derive(Clone, Debug)]
enum Node<I: Enclosure> {
    Const(I),
    /// Powers of variable `var` in descending order with their coefficient nodes.
    Var { var: usize, parts: Vec<(u32, Node<I>)> },
}

impl<I: Enclosure> Horner<I> {
    pub fn new<const N: usize>(p: &Poly<N>) -> Self {
        let terms: Vec<([u32; N], Rational)> = p.terms().map(|(m, c)| (m.0, c.clone())).collect();
        Horner { node: build::<I, N>(&terms, N) }
    }

    pub fn eval(&self, b: &[I]) -> I {
        eval_node(&self.node, b)
    }
}

fn build<I: Enclosure, const N: usize>(terms: &[([u32; N], Rational)], nvars: usize) -> Node<I> {
    if terms.is_empty() {
        return Node::Const(I::zero());
    }
    if nvars == 0 {
        return Node::Const(I::from_rational(&terms[0].1));
    }
    let var = nvars - 1;
    let mut groups: std::collections::BTreeMap<u32, Vec<([u32; N], Rational)>> = Default::default();
    for (e, c) in terms {
        groups.entry(e[var]).or_default().push((*e, c.clone()));
    }
    if groups.len() == 1 && groups.contains_key(&0) {
        return build::<I, N>(terms, var);
    }
    let parts = groups.into_iter().rev().map(|(k, ts)| (k, build::<I, N>(&ts, var))).collect();
    Node::Var { var, parts }
}

fn eval_node<I: Enclosure>(n: &Node<I>, b: &[I]) -> I {
    match n {
        Node::Const(c) => c.clone(),
        Node::Var { var, parts } => {
            let x = &b[*var];
            let mut acc = eval_node(&parts[0].1, b);
            let mut cur = parts[0].0;
            for (k, child) in &parts[1..] {
                acc = acc.mul(&x.pow(cur - k)).add(&eval_node(child, b));
                cur = *k;
            }
            if cur > 0 {
                acc = acc.mul(&x.pow(cur));
            }
            acc
        }
    }
}

/// Horner-form interval evaluation with exact rational endpoints.
pub fn interval_eval<const N: usize>(p: &Poly<N>, b: &[Interval; N]) -> Interval {
    Horner::<Interval>::new(p).eval(b)
}

/// Dense coefficient tensor used for centered-form bounds.
#[derive(Clone, Debug)]
pub struct Dense<I: Enclosure> {
    degs: Vec<usize>,
    coeffs: Vec<I>,
}

impl<I: Enclosure> Dense<I> {
    pub fn new<const N: usize>(p: &Poly<N>) -> Self {
        let degs: Vec<usize> = (0..N).map(|i| p.degree_in(i).unwrap_or(0) as usize).collect();
        let size: usize = degs.iter().map(|d| d + 1).product();
        let mut coeffs = vec![I::zero(); size];
        for (m, c) in p.terms() {
            coeffs[index(&degs, &m.0)] = I::from_rational(c);
        }
        Dense { degs, coeffs }
    }

    /// Range bound on the box via expansion around its midpoint.
    pub fn centered_eval(&self, b: &[I]) -> I {
        let mut c = self.coeffs.clone();
        let n = self.degs.len();
        let strides = strides(&self.degs);
        for k in 0..n {
            let m = b[k].midpoint();
            let d = self.degs[k];
            if d == 0 {
                continue;
            }
            // Taylor shift along axis k for every line.
            for base in 0..c.len() {
                if (base / strides[k]) % (d + 1) != 0 {
                    continue;
                }
                for i in 0..d {
                    for j in (i..d).rev() {
                        let hi = c[base + (j + 1) * strides[k]].clone();
                        let v = c[base + j * strides[k]].add(&m.mul(&hi));
                        c[base + j * strides[k]] = v;
                    }
                }
            }
        }
        let radii: Vec<I> = b.iter().map(|x| x.centered_radius()).collect();
        let mut acc = I::zero();
        let mut e = vec![0usize; n];
        for (idx, coef) in c.iter().enumerate() {
            for k in 0..n {
                e[k] = (idx / strides[k]) % (self.degs[k] + 1);
            }
            let mut t = coef.clone();
            for k in 0..n {
                if e[k] > 0 {
                    t = t.mul(&radii[k].pow(e[k] as u32));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }
}

fn strides(degs: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; degs.len()];
    for k in 1..degs.len() {
        s[k] = s[k - 1] * (degs[k - 1] + 1);
    }
    s
}

fn index(degs: &[usize], e: &[u32]) -> usize {
    let s = strides(degs);
    e.iter().zip(s.iter()).map(|(a, b)| *a as usize * b).sum()
}

/// A polynomial prepared for repeated range bounds: Horner and centered forms, intersected.
#[derive(Clone, Debug)]
pub struct Bounder<I: Enclosure> {
    horner: Horner<I>,
    dense: Dense<I>,
}

impl<I: Enclosure> Bounder<I> {
    pub fn new<const N: usize>(p: &Poly<N>) -> Self {
        Bounder { horner: Horner::new(p), dense: Dense::new(p) }
    }

    pub fn bound(&self, b: &[I]) -> I {
        self.horner.eval(b).intersect(&self.dense.centered_eval(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{Poly2, Poly3};
    use crate::rational::{int, rat};

    fn iv(a: Rational, b: Rational) -> Interval {
        Interval::new(a, b)
    }

    #[test]
    fn horner_examples() {
        let p: Poly2 = "x^2 + y^2".parse().unwrap();
        let r = interval_eval(&p, &[iv(int(0), int(1)), iv(int(0), int(1))]);
        assert!(r.lo <= int(0) && r.hi >= int(2));
        let q: Poly3 = "1 - 3/4*t^2".parse().unwrap();
        let r = interval_eval(&q, &[Interval::point(int(0)), Interval::point(int(0)), iv(int(0), int(1))]);
        assert!(r.lo <= rat(1, 4) && r.hi >= int(1));
        let s: Poly2 = "3*x*y".parse().unwrap();
        let r = interval_eval(&s, &[iv(rat(1, 2), int(1)), iv(rat(1, 2), int(1))]);
        assert!(r.lo <= rat(3, 4) && r.hi >= int(3));
        assert_eq!(r, iv(rat(3, 4), int(3)));
    }

    #[test]
    fn even_powers_are_tight() {
        let p: Poly2 = "x^2".parse().unwrap();
        let r = interval_eval(&p, &[iv(int(-1), int(2)), Interval::point(int(0))]);
        assert_eq!(r, iv(int(0), int(4)));
    }

    #[test]
    fn rounded_contains_exact() {
        let p: Poly2 = "x^3 - 2/3*x*y + 1/7".parse().unwrap();
        let b = [iv(rat(-1, 3), rat(1, 5)), iv(rat(1, 9), rat(2, 3))];
        let e = interval_eval(&p, &b);
        let fb = [FInterval::from_interval(&b[0]), FInterval::from_interval(&b[1])];
        let f = Bounder::<FInterval>::new(&p).bound(&fb);
        assert!(f.lo <= to_f64(&e.lo) && f.hi >= to_f64(&e.hi));
    }

    #[test]
    fn centered_form_is_tight_on_small_boxes() {
        let p: Poly2 = "x^2 - y^2 + 3*x*y".parse().unwrap();
        let b = [FInterval::new(0.99, 1.01), FInterval::new(1.99, 2.01)];
        let c = Dense::<FInterval>::new(&p).centered_eval(&b);
        let v = p.eval_f64(&[1.0, 2.0]);
        assert!(c.lo <= v && v <= c.hi);
        assert!(c.hi - c.lo < 0.2);
    }
}
