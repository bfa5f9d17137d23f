//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Monomials are ordered by total degree, then lexicographically on the
//! exponent tuple `(ex, ey, et)`, so `x^2 > x*y > y^2 > x > y > 1`.

use crate::rational::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

pub const X: usize = 0;
pub const Y: usize = 1;
pub const T: usize = 2;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Mono<const N: usize>(pub [u32; N]);

impl<const N: usize> Mono<N> {
    pub fn one() -> Self {
        Mono([0; N])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(o.0.iter()) {
            *a += *b;
        }
        Mono(e)
    }

    /// `self / o` if `o` divides `self`.
    pub fn div(&self, o: &Self) -> Option<Self> {
        let mut e = [0; N];
        for i in 0..N {
            e[i] = self.0[i].checked_sub(o.0[i])?;
        }
        Some(Mono(e))
    }
}

impl<const N: usize> Ord for Mono<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl<const N: usize> PartialOrd for Mono<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly<const N: usize> {
    terms: BTreeMap<Mono<N>, Rational>,
}

pub type Poly1 = Poly<1>;
pub type Poly2 = Poly<2>;
pub type Poly3 = Poly<3>;

impl<const N: usize> Poly<N> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(Mono::one(), c)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(c)))
    }

    pub fn var(i: usize) -> Self {
        assert!(i < N, "variable index {i} out of range for {N} variables");
        let mut e = [0; N];
        e[i] = 1;
        Self::term(Mono(e), Rational::one())
    }

    pub fn term(m: Mono<N>, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn monomial(exps: [u32; N], c: Rational) -> Self {
        Self::term(Mono(exps), c)
    }

    /// Builds from `(exponents, coefficient)` pairs, merging duplicates.
    pub fn from_terms<I: IntoIterator<Item = ([u32; N], Rational)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in it {
            p.add_term(Mono(e), c);
        }
        p
    }

    pub fn add_term(&mut self, m: Mono<N>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono<N>, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: [u32; N]) -> Rational {
        self.terms.get(&Mono(exps)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff([0; N])
    }

    /// Leading term in the canonical order.
    pub fn leading(&self) -> Option<(&Mono<N>, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    /// Lowest total degree among the terms.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).min()
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.0[var] > 0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect() }
    }

    pub fn mul_mono(&self, m: &Mono<N>, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly { terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, pt: &[Rational; N]) -> Rational {
        let mut pows: Vec<Vec<Rational>> = Vec::with_capacity(N);
        for i in 0..N {
            let d = self.degree_in(i).unwrap_or(0) as usize;
            let mut v = Vec::with_capacity(d + 1);
            v.push(Rational::one());
            for k in 1..=d {
                let next = &v[k - 1] * &pt[i];
                v.push(next);
            }
            pows.push(v);
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..N {
                if m.0[i] > 0 {
                    t *= &pows[i][m.0[i] as usize];
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, pt: &[f64; N]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = crate::rational::to_f64(c);
                for i in 0..N {
                    if m.0[i] > 0 {
                        t *= pt[i].powi(m.0[i] as i32);
                    }
                }
                t
            })
            .sum()
    }

    pub fn partial(&self, var: usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e > 0 {
                let mut k = m.0;
                k[var] -= 1;
                out.terms.insert(Mono(k), c * Rational::from_integer(BigInt::from(e)));
            }
        }
        out
    }

    /// Coefficients with respect to `var`: entry `k` multiplies `var^k`.
    pub fn coeffs_in(&self, var: usize) -> Vec<Self> {
        let d = match self.degree_in(var) {
            Some(d) => d as usize,
            None => return Vec::new(),
        };
        let mut out = vec![Self::zero(); d + 1];
        for (m, c) in &self.terms {
            let mut k = m.0;
            let e = k[var] as usize;
            k[var] = 0;
            out[e].terms.insert(Mono(k), c.clone());
        }
        out
    }

    pub fn from_coeffs_in(var: usize, coeffs: &[Self]) -> Self {
        let mut out = Self::zero();
        for (e, c) in coeffs.iter().enumerate() {
            let mut shift = [0u32; N];
            shift[var] = e as u32;
            for (m, a) in &c.terms {
                out.add_term(m.mul(&Mono(shift)), a.clone());
            }
        }
        out
    }

    /// Leading coefficient with respect to `var`, as a polynomial free of `var`.
    pub fn lc_in(&self, var: usize) -> Self {
        self.coeffs_in(var).pop().unwrap_or_else(Self::zero)
    }

    /// Substitutes the polynomial `q` for variable `var`.
    pub fn subst(&self, var: usize, q: &Self) -> Self {
        let coeffs = self.coeffs_in(var);
        let mut acc = Self::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * q) + c;
        }
        acc
    }

    /// Substitutes a rational value for `var`.
    pub fn subst_value(&self, var: usize, v: &Rational) -> Self {
        self.subst(var, &Self::constant(v.clone()))
    }

    /// `p(x + c)`, i.e. the expansion around `c` expressed in shifted variables.
    pub fn shift(&self, c: &[Rational; N]) -> Self {
        let mut p = self.clone();
        for i in 0..N {
            if !c[i].is_zero() && p.uses_var(i) {
                let q = &Self::var(i) + &Self::constant(c[i].clone());
                p = p.subst(i, &q);
            }
        }
        p
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Copies exponents into a polynomial with `M` variables.
    /// Panics if a dropped variable actually occurs.
    pub fn to_dim<const M: usize>(&self) -> Poly<M> {
        let mut out = Poly::<M>::zero();
        for (m, c) in &self.terms {
            let mut e = [0u32; M];
            for i in 0..N {
                if i < M {
                    e[i] = m.0[i];
                } else {
                    assert_eq!(m.0[i], 0, "variable {i} occurs but target has {M} variables");
                }
            }
            out.add_term(Mono(e), c.clone());
        }
        out
    }

    /// Renames variables: variable `i` of `self` becomes variable `perm[i]`.
    pub fn permute<const M: usize>(&self, perm: [usize; N]) -> Poly<M> {
        let mut out = Poly::<M>::zero();
        for (m, c) in &self.terms {
            let mut e = [0u32; M];
            for i in 0..N {
                e[perm[i]] += m.0[i];
            }
            out.add_term(Mono(e), c.clone());
        }
        out
    }

    /// Positive rational `c` and primitive integer polynomial `q` with `self = c*q`,
    /// where `q` has positive leading coefficient. Zero maps to `(0, 0)`.
    pub fn primitive(&self) -> (Rational, Self) {
        if self.is_zero() {
            return (Rational::zero(), Self::zero());
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut content = Rational::new(num_gcd, den_lcm);
        if self.leading_coeff().is_negative() {
            content = -content;
        }
        let inv = content.recip();
        (content, self.scale(&inv))
    }

    /// Scales to content one with positive leading coefficient.
    pub fn normalized(&self) -> Self {
        self.primitive().1
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.leading_coeff().recip())
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (dm, dc) = d.leading()?;
        let (dm, dc) = (*dm, dc.clone());
        if d.terms.len() == 1 {
            let mut q = Self::zero();
            for (m, c) in &self.terms {
                q.terms.insert(m.div(&dm)?, c / &dc);
            }
            return Some(q);
        }
        let mut r = self.clone();
        let mut q = Self::zero();
        loop {
            let (m, c) = match r.leading() {
                Some((m, c)) => (*m, c.clone()),
                None => break,
            };
            let tm = m.div(&dm)?;
            let tc = &c / &dc;
            r -= &d.mul_mono(&tm, &tc);
            q.add_term(tm, tc);
        }
        Some(q)
    }

    pub fn map_coeffs<F: Fn(&Rational) -> Rational>(&self, f: F) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, f(c));
        }
        out
    }

    /// Largest absolute coefficient as a double (0 for the zero polynomial).
    pub fn max_abs_coeff_f64(&self) -> f64 {
        self.terms
            .values()
            .map(|c| crate::rational::to_f64(&c.abs()))
            .fold(0.0, f64::max)
    }
}

impl Poly2 {
    pub fn x() -> Self {
        Self::var(X)
    }
    pub fn y() -> Self {
        Self::var(Y)
    }

    pub fn at(&self, x: &Rational, y: &Rational) -> Rational {
        self.eval(&[x.clone(), y.clone()])
    }

    /// Embeds into `Q[x,y,t]`.
    pub fn lift(&self) -> Poly3 {
        self.to_dim::<3>()
    }
}

impl Poly3 {
    /// Exact substitution `t := v`, returning a polynomial in `x, y`.
    pub fn at_t(&self, v: &Rational) -> Poly2 {
        self.subst_value(T, v).to_dim::<2>()
    }
}

impl Poly1 {
    pub fn w() -> Self {
        Self::var(0)
    }

    /// Coefficients in ascending powers.
    pub fn dense(&self) -> Vec<Rational> {
        let d = match self.degree() {
            Some(d) => d as usize,
            None => return Vec::new(),
        };
        let mut v = vec![Rational::zero(); d + 1];
        for (m, c) in &self.terms {
            v[m.0[0] as usize] = c.clone();
        }
        v
    }

    pub fn from_dense(c: &[Rational]) -> Self {
        Self::from_terms(c.iter().enumerate().map(|(i, a)| ([i as u32], a.clone())))
    }

    pub fn at1(&self, v: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.dense().iter().rev() {
            acc = acc * v + c;
        }
        acc
    }
}

impl<'a, const N: usize> Add<&'a Poly<N>> for &'a Poly<N> {
    type Output = Poly<N>;
    fn add(self, o: &'a Poly<N>) -> Poly<N> {
        let mut out = self.clone();
        out += o;
        out
    }
}

impl<const N: usize> AddAssign<&Poly<N>> for Poly<N> {
    fn add_assign(&mut self, o: &Poly<N>) {
        for (m, c) in &o.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl<const N: usize> SubAssign<&Poly<N>> for Poly<N> {
    fn sub_assign(&mut self, o: &Poly<N>) {
        for (m, c) in &o.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl<'a, const N: usize> Sub<&'a Poly<N>> for &'a Poly<N> {
    type Output = Poly<N>;
    fn sub(self, o: &'a Poly<N>) -> Poly<N> {
        let mut out = self.clone();
        out -= o;
        out
    }
}

impl<'a, const N: usize> Mul<&'a Poly<N>> for &'a Poly<N> {
    type Output = Poly<N>;
    fn mul(self, o: &'a Poly<N>) -> Poly<N> {
        let mut acc: BTreeMap<Mono<N>, Rational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.entry(m) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(c);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += c;
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Poly { terms: acc }
    }
}

impl<const N: usize> Neg for &Poly<N> {
    type Output = Poly<N>;
    fn neg(self) -> Poly<N> {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect() }
    }
}

impl<const N: usize> Neg for Poly<N> {
    type Output = Poly<N>;
    fn neg(self) -> Poly<N> {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl<const N: usize> $tr<Poly<N>> for Poly<N> {
            type Output = Poly<N>;
            fn $f(self, o: Poly<N>) -> Poly<N> {
                (&self).$f(&o)
            }
        }
        impl<'a, const N: usize> $tr<&'a Poly<N>> for Poly<N> {
            type Output = Poly<N>;
            fn $f(self, o: &'a Poly<N>) -> Poly<N> {
                (&self).$f(o)
            }
        }
        impl<'a, const N: usize> $tr<Poly<N>> for &'a Poly<N> {
            type Output = Poly<N>;
            fn $f(self, o: Poly<N>) -> Poly<N> {
                self.$f(&o)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<const N: usize> Mul<&Rational> for &Poly<N> {
    type Output = Poly<N>;
    fn mul(self, c: &Rational) -> Poly<N> {
        self.scale(c)
    }
}

impl<const N: usize> Mul<Rational> for Poly<N> {
    type Output = Poly<N>;
    fn mul(self, c: Rational) -> Poly<N> {
        self.scale(&c)
    }
}

impl<const N: usize> From<Rational> for Poly<N> {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}
