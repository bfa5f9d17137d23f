//! Multivariate gcd, resultants, Taylor forms and multiplicities.

use crate::poly::{Poly, Poly2};
use crate::rational::Rational;
use crate::PolyError;

/// Pseudo-remainder of `a` by `b` with respect to `var`.
pub fn prem<const N: usize>(a: &Poly<N>, b: &Poly<N>, var: usize) -> Poly<N> {
    let db = b.degree_in(var).unwrap_or(0);
    let lb = b.lc_in(var);
    let mut r = a.clone();
    while let Some(dr) = r.degree_in(var) {
        if dr < db || r.is_zero() {
            break;
        }
        let lr = r.lc_in(var);
        let mut e = [0u32; N];
        e[var] = dr - db;
        let shift = Poly::monomial(e, Rational::from_integer(1.into()));
        r = &(&lb * &r) - &(&(&lr * &shift) * b);
    }
    r
}

/// Gcd of the coefficients of `p` with respect to `var`.
fn content_in<const N: usize>(p: &Poly<N>, var: usize, rest: &[usize]) -> Poly<N> {
    let mut g = Poly::zero();
    for c in p.coeffs_in(var) {
        if c.is_zero() {
            continue;
        }
        g = gcd_rec(&g, &c, rest);
        if g.is_constant() {
            return Poly::one();
        }
    }
    g
}

fn gcd_rec<const N: usize>(a: &Poly<N>, b: &Poly<N>, vars: &[usize]) -> Poly<N> {
    if a.is_zero() {
        return b.normalized();
    }
    if b.is_zero() {
        return a.normalized();
    }
    let Some((&v, rest)) = vars.split_last() else {
        return Poly::one();
    };
    if !a.uses_var(v) && !b.uses_var(v) {
        return gcd_rec(a, b, rest);
    }
    let ca = content_in(a, v, rest);
    let cb = content_in(b, v, rest);
    let c = gcd_rec(&ca, &cb, rest);
    let pa = a.div_exact(&ca).expect("content divides").normalized();
    let pb = b.div_exact(&cb).expect("content divides").normalized();
    let (mut r0, mut r1) = if pa.degree_in(v) >= pb.degree_in(v) { (pa, pb) } else { (pb, pa) };
    while r1.uses_var(v) {
        let r = prem(&r0, &r1, v);
        if r.is_zero() {
            break;
        }
        let cr = content_in(&r, v, rest);
        r0 = std::mem::replace(&mut r1, r.div_exact(&cr).expect("content divides").normalized());
    }
    let g = if r1.uses_var(v) { r1 } else { Poly::one() };
    (&c * &g).normalized()
}

/// Greatest common divisor, normalized to content one and positive leading coefficient.
pub fn gcd<const N: usize>(a: &Poly<N>, b: &Poly<N>) -> Result<Poly<N>, PolyError> {
    if a.is_zero() && b.is_zero() {
        return Err(PolyError::BothZero);
    }
    let vars: Vec<usize> = (0..N).collect();
    Ok(gcd_rec(a, b, &vars))
}

pub fn gcd2(a: &Poly2, b: &Poly2) -> Result<Poly2, PolyError> {
    gcd(a, b)
}

/// Determinant by fraction-free Gaussian elimination.
pub fn det_bareiss<const N: usize>(mut m: Vec<Vec<Poly<N>>>) -> Poly<N> {
    let n = m.len();
    if n == 0 {
        return Poly::one();
    }
    let mut sign = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = !sign;
                }
                None => return Poly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Sylvester resultant with respect to `var`; the result does not involve `var`.
pub fn resultant<const N: usize>(a: &Poly<N>, b: &Poly<N>, var: usize) -> Result<Poly<N>, PolyError> {
    let ca = a.coeffs_in(var);
    let cb = b.coeffs_in(var);
    if ca.len() < 2 || cb.len() < 2 {
        return Err(PolyError::DegenerateDegrees);
    }
    let m = ca.len() - 1;
    let n = cb.len() - 1;
    let size = m + n;
    let mut s = vec![vec![Poly::zero(); size]; size];
    for i in 0..n {
        for (j, c) in ca.iter().rev().enumerate() {
            s[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in cb.iter().rev().enumerate() {
            s[n + i][i + j] = c.clone();
        }
    }
    Ok(det_bareiss(s))
}

/// Degree-`i` homogeneous component of `p` expanded around `center`,
/// written back in the original variables.
pub fn taylor_form<const N: usize>(p: &Poly<N>, center: &[Rational; N], i: u32) -> Poly<N> {
    let shifted = p.shift(center);
    let neg: [Rational; N] = std::array::from_fn(|k| -center[k].clone());
    shifted.homogeneous_part(i).shift(&neg)
}

/// Order of vanishing of `p` at `center`.
pub fn multiplicity<const N: usize>(p: &Poly<N>, center: &[Rational; N]) -> Result<u32, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    Ok(p.shift(center).min_degree().unwrap_or(0))
}

/// Squarefree part: `p / gcd(p, dp/dx_1, ..., dp/dx_N)`, normalized.
pub fn squarefree<const N: usize>(p: &Poly<N>) -> Poly<N> {
    if p.is_zero() || p.is_constant() {
        return p.normalized();
    }
    let mut g = p.clone();
    for i in 0..N {
        let d = p.partial(i);
        if !d.is_zero() {
            g = gcd(&g, &d).expect("nonzero");
        }
    }
    p.div_exact(&g).expect("gcd divides").normalized()
}
