//! Univariate tools over `Q[w]`: division, gcd, Sturm sequences and real root isolation.

use crate::interval::Interval;
use crate::poly::Poly1;
use crate::rational::Rational;
use crate::PolyError;
use num_traits::{One, Signed, Zero};

/// Dense coefficients in ascending powers, trailing zeros trimmed.
fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn eval_dense(v: &[Rational], x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in v.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn div_rem_dense(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let b = trim(b.to_vec());
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lb = b.last().unwrap().clone();
    let mut q = vec![Rational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let k = r.len() - b.len();
        let c = r.last().unwrap() / &lb;
        for (i, bc) in b.iter().enumerate() {
            r[k + i] -= &c * bc;
        }
        q[k] = c;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

impl Poly1 {
    pub fn derivative(&self) -> Poly1 {
        self.partial(0)
    }

    /// Quotient and remainder of Euclidean division.
    pub fn div_rem(&self, d: &Poly1) -> (Poly1, Poly1) {
        let (q, r) = div_rem_dense(&self.dense(), &d.dense());
        (Poly1::from_dense(&q), Poly1::from_dense(&r))
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, o: &Poly1) -> Poly1 {
        let mut a = self.dense();
        let mut b = o.dense();
        while !trim(b.clone()).is_empty() {
            let (_, r) = div_rem_dense(&a, &b);
            a = b;
            b = r;
        }
        Poly1::from_dense(&a).monic()
    }

    /// Bezout: `(g, s, t)` with `s*self + t*o = g` and `g` monic.
    pub fn ext_gcd(&self, o: &Poly1) -> (Poly1, Poly1, Poly1) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly1::one(), Poly1::zero());
        let (mut t0, mut t1) = (Poly1::zero(), Poly1::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s2 = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s2);
            let t2 = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.leading_coeff().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Inverse of `self` modulo `m`, if it exists.
    pub fn inverse_mod(&self, m: &Poly1) -> Option<Poly1> {
        let (g, s, _) = self.ext_gcd(m);
        if g.is_one_poly() {
            Some(s.div_rem(m).1)
        } else {
            None
        }
    }

    fn is_one_poly(&self) -> bool {
        self.is_constant() && self.constant_term().is_one()
    }

    /// Removes repeated factors.
    pub fn squarefree(&self) -> Poly1 {
        if self.is_zero() || self.is_constant() {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0
    }

    pub fn sturm_sequence(&self) -> Vec<Poly1> {
        let mut seq = vec![self.clone()];
        let d = self.derivative();
        if d.is_zero() {
            return seq;
        }
        seq.push(d);
        loop {
            let n = seq.len();
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(-r);
        }
        seq
    }
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs.filter(|s| *s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn sgn(r: &Rational) -> i32 {
    crate::rational::sign(r)
}

/// Sturm sequence in dense form for repeated evaluation.
pub struct Sturm {
    seq: Vec<Vec<Rational>>,
}

impl Sturm {
    pub fn new(p: &Poly1) -> Self {
        Sturm { seq: p.sturm_sequence().iter().map(|q| q.dense()).collect() }
    }

    pub fn variations_at(&self, x: &Rational) -> usize {
        variations(self.seq.iter().map(|q| sgn(&eval_dense(q, x))))
    }

    pub fn variations_at_neg_inf(&self) -> usize {
        variations(self.seq.iter().map(|q| {
            let s = sgn(q.last().unwrap());
            if (q.len() - 1) % 2 == 1 {
                -s
            } else {
                s
            }
        }))
    }

    pub fn variations_at_pos_inf(&self) -> usize {
        variations(self.seq.iter().map(|q| sgn(q.last().unwrap())))
    }

    /// Distinct roots in `(a, b]`.
    pub fn count(&self, a: &Rational, b: &Rational) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }
}

/// Cauchy bound: every root has absolute value below the result.
pub fn root_bound(p: &Poly1) -> Rational {
    let d = p.dense();
    let lc = d.last().unwrap().abs();
    let m = d[..d.len() - 1].iter().map(|c| c.abs() / &lc).max().unwrap_or_else(Rational::zero);
    m + Rational::one()
}

/// Isolates the distinct real roots of `p` in `within` (closed), or on the whole line.
///
/// Each returned interval is either a point (an exact rational root) or an interval
/// `[lo, hi]` with `lo < hi` whose open interior contains exactly one root and whose
/// endpoints are not roots. Intervals are sorted and pairwise disjoint.
pub fn isolate_real_roots(p: &Poly1, within: Option<&Interval>) -> Result<Vec<Interval>, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if p.is_constant() {
        return Ok(Vec::new());
    }
    let mut q = p.squarefree();
    let mut out = Vec::new();
    let (lo, hi) = match within {
        Some(iv) => {
            let mut ends = Vec::new();
            for e in [&iv.lo, &iv.hi] {
                if q.at1(e).is_zero() {
                    let lin = Poly1::from_dense(&[-e.clone(), Rational::one()]);
                    q = q.div_rem(&lin).0;
                    ends.push(e.clone());
                }
            }
            ends.dedup();
            for e in ends {
                out.push(Interval::point(e));
            }
            if iv.is_point() {
                return Ok(out);
            }
            (iv.lo.clone(), iv.hi.clone())
        }
        None => {
            let b = root_bound(&q);
            (-b.clone(), b)
        }
    };
    if !q.is_constant() {
        let st = Sturm::new(&q);
        let n = st.count(&lo, &hi);
        bisect(&q, &st, lo, hi, n, &mut out);
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    Ok(out)
}

fn bisect(q: &Poly1, st: &Sturm, lo: Rational, hi: Rational, n: usize, out: &mut Vec<Interval>) {
    if n == 0 {
        return;
    }
    if n == 1 {
        out.push(Interval::new(lo, hi));
        return;
    }
    let two = Rational::from_integer(2.into());
    let mid = (&lo + &hi) / &two;
    if q.at1(&mid).is_zero() {
        out.push(Interval::point(mid.clone()));
        let eps = find_gap(q, &lo, &mid, &hi);
        let a = &mid - &eps;
        let b = &mid + &eps;
        let nl = st.count(&lo, &a);
        let nr = st.count(&b, &hi);
        bisect(q, st, lo, a, nl, out);
        bisect(q, st, b, hi, nr, out);
        return;
    }
    let nl = st.count(&lo, &mid);
    bisect(q, st, lo, mid.clone(), nl, out);
    bisect(q, st, mid, hi, n - nl, out);
}

/// Radius `eps` such that `[mid-eps, mid+eps]` holds only the root `mid`,
/// with non-root endpoints, inside `(lo, hi)`.
fn find_gap(q: &Poly1, lo: &Rational, mid: &Rational, hi: &Rational) -> Rational {
    let two = Rational::from_integer(2.into());
    let st = Sturm::new(q);
    let mut eps = std::cmp::min(mid - lo, hi - mid) / &two;
    loop {
        let a = mid - &eps;
        let b = mid + &eps;
        if !q.at1(&a).is_zero() && !q.at1(&b).is_zero() && st.count(&a, &b) == 1 {
            return eps;
        }
        eps /= &two;
    }
}

/// Shrinks an isolating interval of a squarefree `q` below `width`.
pub fn refine_root(q: &Poly1, iv: &Interval, width: &Rational) -> Interval {
    if iv.is_point() {
        return iv.clone();
    }
    let mut lo = iv.lo.clone();
    let mut hi = iv.hi.clone();
    let slo = sgn(&q.at1(&lo));
    while &(&hi - &lo) > width {
        let mid = (&lo + &hi) / Rational::from_integer(2.into());
        let s = sgn(&q.at1(&mid));
        if s == 0 {
            return Interval::point(mid);
        }
        if s == slo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Interval::new(lo, hi)
}
