//! Tensor-product Bernstein approximation of sampled families and exact endpoint
//! correction.

use crate::analytic::SampledFamily;
use blowup_core::rational::dyadic_round;
use blowup_core::{Poly3, PolyMatrix2, PolyMatrix2T, Rational, T};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Bits of the dyadic denominators of the control values.
pub const CONTROL_BITS: u32 = 53;

fn binom(n: u32, k: u32) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// `T[l][i]`: coefficient of `s^l` in `B_{i,d}(s)`.
fn to_monomial(d: u32) -> Vec<Vec<Rational>> {
    let mut t = vec![vec![Rational::zero(); d as usize + 1]; d as usize + 1];
    for i in 0..=d {
        for l in i..=d {
            let mut c = binom(d, i) * binom(d - i, l - i);
            if (l - i) % 2 == 1 {
                c = -c;
            }
            t[l as usize][i as usize] = Rational::from_integer(c);
        }
    }
    t
}

/// Applies `mat` along axis `axis` of a dense 3-tensor with shape `dims`.
fn mode_product(a: &[Rational], dims: [usize; 3], axis: usize, mat: &[Vec<Rational>]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len()];
    let idx = |i: [usize; 3]| (i[0] * dims[1] + i[1]) * dims[2] + i[2];
    for i0 in 0..dims[0] {
        for i1 in 0..dims[1] {
            for i2 in 0..dims[2] {
                let src = [i0, i1, i2];
                let v = &a[idx(src)];
                if v.is_zero() {
                    continue;
                }
                for (l, row) in mat.iter().enumerate() {
                    let c = &row[src[axis]];
                    if c.is_zero() {
                        continue;
                    }
                    let mut dst = src;
                    dst[axis] = l;
                    out[idx(dst)] += c * v;
                }
            }
        }
    }
    out
}

/// Fits each entry by the tensor Bernstein polynomial of degree `(dx, dy, dt)` on the
/// grid's bounding square times `[0, 1]`. Control values are read off the samples by
/// trilinear interpolation and rounded to dyadic rationals.
pub fn bernstein_fit(samples: &SampledFamily, degree: (u32, u32, u32)) -> PolyMatrix2T {
    let (dx, dy, dt) = degree;
    let dims = [dx as usize + 1, dy as usize + 1, dt as usize + 1];
    let mats = [to_monomial(dx), to_monomial(dy), to_monomial(dt)];
    let frac = |i: usize, d: u32| if d == 0 { 0.0 } else { i as f64 / d as f64 };
    let mut control: [Vec<Rational>; 4] = Default::default();
    for i in 0..dims[0] {
        for j in 0..dims[1] {
            for k in 0..dims[2] {
                let v = samples.interpolate(frac(i, dx), frac(j, dy), frac(k, dt));
                for (e, c) in control.iter_mut().enumerate() {
                    c.push(dyadic_round(v[e / 2][e % 2], CONTROL_BITS));
                }
            }
        }
    }
    let r = dyadic_round(samples.radius, CONTROL_BITS);
    let lo = [
        dyadic_round(samples.center[0], CONTROL_BITS) - &r,
        dyadic_round(samples.center[1], CONTROL_BITS) - &r,
    ];
    let inv = (&r + &r).recip();
    let entry = |c: &Vec<Rational>| -> Poly3 {
        let mut a = c.clone();
        for (axis, m) in mats.iter().enumerate() {
            a = mode_product(&a, dims, axis, m);
        }
        // Polynomial in the unit-cube coordinates, then back to (x, y).
        let mut p = Poly3::zero();
        let mut scale = [Rational::one(), Rational::one()];
        let mut pows_x = Vec::new();
        for _ in 0..dims[0] {
            pows_x.push(scale[0].clone());
            scale[0] = &scale[0] * &inv;
        }
        let mut pows_y = Vec::new();
        for _ in 0..dims[1] {
            pows_y.push(scale[1].clone());
            scale[1] = &scale[1] * &inv;
        }
        for i in 0..dims[0] {
            for j in 0..dims[1] {
                for k in 0..dims[2] {
                    let v = &a[(i * dims[1] + j) * dims[2] + k];
                    if !v.is_zero() {
                        let c = v * &pows_x[i] * &pows_y[j];
                        p.add_term(blowup_core::poly::Mono([i as u32, j as u32, k as u32]), c);
                    }
                }
            }
        }
        p.shift(&[-lo[0].clone(), -lo[1].clone(), Rational::zero()])
    };
    let [m11, m12, m21, m22] = control.each_ref().map(entry);
    PolyMatrix2T::new(m11, m12, m21, m22)
}

/// `P̄ + (1 - t)(N - P̄(·, 0)) + t(M - P̄(·, 1))`: equals `N` at `t = 0` and `M` at `t = 1`.
pub fn endpoint_correct(pbar: &PolyMatrix2T, n: &PolyMatrix2, m: &PolyMatrix2) -> PolyMatrix2T {
    let t = Poly3::var(T);
    let one_minus_t = &Poly3::one() - &t;
    let c0 = n.sub(&pbar.at_t(&Rational::zero())).lift();
    let c1 = m.sub(&pbar.at_t(&Rational::one())).lift();
    pbar.add(&c0.scale_poly(&one_minus_t)).add(&c1.scale_poly(&t))
}
