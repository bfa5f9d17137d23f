//! Real algebraic numbers given by a squarefree polynomial and an isolating interval.

use crate::interval::Interval;
use crate::poly::Poly1;
use crate::rational::{to_f64, Rational};
use crate::univariate::{isolate_real_roots, refine_root, Sturm};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

/// The unique root of `poly` in `iv`. A point interval is an exact rational.
#[derive(Clone, Debug)]
pub struct RealAlgebraic {
    poly: Poly1,
    iv: Interval,
}

impl RealAlgebraic {
    pub fn rational(r: Rational) -> Self {
        RealAlgebraic { poly: Poly1::from_dense(&[-r.clone(), Rational::one()]), iv: Interval::point(r) }
    }

    /// `iv` must isolate a root of the squarefree `poly` as produced by `isolate_real_roots`.
    pub fn from_isolated(poly: Poly1, iv: Interval) -> Self {
        if iv.is_point() {
            return Self::rational(iv.lo);
        }
        RealAlgebraic { poly, iv }
    }

    /// All real roots of `p`, sorted.
    pub fn roots_of(p: &Poly1) -> Vec<Self> {
        let q = p.squarefree();
        isolate_real_roots(&q, None)
            .unwrap_or_default()
            .into_iter()
            .map(|iv| Self::from_isolated(q.clone(), iv).exact_if_rational())
            .collect()
    }

    /// A rational root `a/b` of the primitive integer form of `poly` has `b | lc`,
    /// so refining below `1/(2 lc)` leaves a single candidate.
    pub fn exact_if_rational(self) -> Self {
        if self.iv.is_point() {
            return self;
        }
        let (_, prim) = self.poly.primitive();
        let lc = prim.leading_coeff();
        let w = (Rational::from_integer(2.into()) * &lc).recip();
        let r = self.refined(&w);
        if r.iv.is_point() {
            return r;
        }
        let cand = (r.iv.mid() * &lc).round() / &lc;
        if r.iv.contains(&cand) && self.poly.at1(&cand).is_zero() {
            return Self::rational(cand);
        }
        r
    }

    pub fn poly(&self) -> &Poly1 {
        &self.poly
    }

    pub fn interval(&self) -> &Interval {
        &self.iv
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.iv.is_point() {
            Some(&self.iv.lo)
        } else {
            None
        }
    }

    pub fn refine(&mut self, width: &Rational) {
        self.iv = refine_root(&self.poly, &self.iv, width);
    }

    pub fn refined(&self, width: &Rational) -> Self {
        let mut c = self.clone();
        c.refine(width);
        if c.iv.is_point() {
            return Self::rational(c.iv.lo);
        }
        c
    }

    pub fn to_f64(&self) -> f64 {
        if self.iv.is_point() {
            return to_f64(&self.iv.lo);
        }
        let w = Rational::new(1.into(), num_traits::pow(num_bigint::BigInt::from(2), 60));
        let scale = self.iv.lo.abs().max(self.iv.hi.abs()).max(Rational::one());
        let r = self.refined(&(w * scale));
        to_f64(&r.iv.mid())
    }

    /// Sign of `p` at this number.
    pub fn sign_of(&self, p: &Poly1) -> i32 {
        if let Some(r) = self.as_rational() {
            return crate::rational::sign(&p.at1(r));
        }
        let g = self.poly.gcd(p);
        if !g.is_constant() && Sturm::new(&g).count(&self.iv.lo, &self.iv.hi) == 1 {
            return 0;
        }
        // p has no root at self: refine until p has no root in the interval.
        let mut c = self.clone();
        let q = p.squarefree();
        let st = Sturm::new(&q);
        loop {
            let v_lo = q.at1(&c.iv.lo);
            if !v_lo.is_zero() && !q.at1(&c.iv.hi).is_zero() && st.count(&c.iv.lo, &c.iv.hi) == 0 {
                return crate::rational::sign(&p.at1(&c.iv.mid()));
            }
            let w = c.iv.width() / Rational::from_integer(2.into());
            c.refine(&w);
            if let Some(r) = c.as_rational() {
                return crate::rational::sign(&p.at1(r));
            }
        }
    }

    /// Exact comparison.
    pub fn cmp_exact(&self, o: &Self) -> Ordering {
        let mut a = self.clone();
        let mut b = o.clone();
        loop {
            if a.iv.hi < b.iv.lo {
                return Ordering::Less;
            }
            if b.iv.hi < a.iv.lo {
                return Ordering::Greater;
            }
            if a.iv.is_point() && b.iv.is_point() {
                return a.iv.lo.cmp(&b.iv.lo);
            }
            if a.iv.is_point() {
                match b.sign_of(&a.poly) {
                    0 => return Ordering::Equal,
                    _ => {}
                }
            } else if b.iv.is_point() {
                if a.sign_of(&b.poly) == 0 {
                    return Ordering::Equal;
                }
            } else {
                let g = a.poly.gcd(&b.poly);
                if !g.is_constant() {
                    let lo = if a.iv.lo < b.iv.lo { &a.iv.lo } else { &b.iv.lo };
                    let hi = if a.iv.hi > b.iv.hi { &a.iv.hi } else { &b.iv.hi };
                    let st = Sturm::new(&g);
                    let ga = st.count(&a.iv.lo, &a.iv.hi) == 1;
                    let gb = st.count(&b.iv.lo, &b.iv.hi) == 1;
                    if ga && gb && !g.at1(lo).is_zero() && !g.at1(hi).is_zero() && st.count(lo, hi) == 1 {
                        return Ordering::Equal;
                    }
                }
            }
            let wa = a.iv.width() / Rational::from_integer(2.into());
            let wb = b.iv.width() / Rational::from_integer(2.into());
            if !a.iv.is_point() {
                a.refine(&wa);
            }
            if !b.iv.is_point() {
                b.refine(&wb);
            }
        }
    }
}

impl PartialEq for RealAlgebraic {
    fn eq(&self, o: &Self) -> bool {
        self.cmp_exact(o) == Ordering::Equal
    }
}
