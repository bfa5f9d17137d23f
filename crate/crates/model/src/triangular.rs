//! Centers in triangular form: the real roots `v` of a squarefree `m`, each paired with
//! the other coordinate `g(v)`. Covers rational centers and centers with irrational
//! coordinates alike.

use crate::ModelError;
use blowup_core::algebraic::RealAlgebraic;
use blowup_core::univariate::Sturm;
use blowup_core::certify::Options;
use blowup_core::zeros::isolate_common_zeros;
use blowup_core::{jacobian, resultant, Disk, Pair, Point, Poly1, Poly2, Rational, X, Y};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangularCenter {
    /// Variable carried by `m`: `X` means points `(v, g(v))`, `Y` means `(g(v), v)`.
    pub var: usize,
    pub m: Poly1,
    pub g: Poly1,
}

/// Interpolating polynomial of degree `< n` through `(v_i, w_i)`.
pub fn lagrange(v: &[Rational], w: &[Rational]) -> Poly1 {
    let mut out = Poly1::zero();
    for i in 0..v.len() {
        let mut basis = Poly1::constant(w[i].clone());
        for j in 0..v.len() {
            if i != j {
                let d = &v[i] - &v[j];
                basis = &basis * &Poly1::from_dense(&[-&v[j] / &d, d.recip()]);
            }
        }
        out += &basis;
    }
    out
}

fn poly_from_roots(v: &[Rational]) -> Poly1 {
    v.iter().fold(Poly1::one(), |acc, r| &acc * &Poly1::from_dense(&[-r.clone(), Rational::one()]))
}

/// `q(v, g(v))` (or `q(g(v), v)`) as a univariate polynomial in `v`.
fn restrict(q: &Poly2, var: usize, g: &Poly1) -> Poly1 {
    let other = 1 - var;
    let lifted_g: Poly2 = g.permute([var]);
    let r = q.subst(other, &lifted_g);
    let mut perm = [0usize; 2];
    perm[var] = 0;
    perm[other] = 0;
    r.permute::<1>(perm)
}

impl TriangularCenter {
    /// Points with pairwise distinct coordinates in `var`.
    pub fn from_points(points: &[Point], var: usize) -> Option<Self> {
        let v: Vec<Rational> = points.iter().map(|p| p.coords()[var].clone()).collect();
        let w: Vec<Rational> = points.iter().map(|p| p.coords()[1 - var].clone()).collect();
        let mut s = v.clone();
        s.sort();
        s.dedup();
        if s.len() != v.len() || v.is_empty() {
            return None;
        }
        Some(TriangularCenter { var, m: poly_from_roots(&v), g: lagrange(&v, &w) })
    }

    /// Triangular form of the common zeros of a pair in which one polynomial has degree 1
    /// in some variable. All roots of the eliminant must be real and every point must
    /// lie in the open disk.
    pub fn from_pair(pair: &Pair, disk: &Disk) -> Result<Self, ModelError> {
        for (lin, other) in [(&pair.0, &pair.1), (&pair.1, &pair.0)] {
            for solved in [X, Y] {
                if lin.degree_in(solved) != Some(1) {
                    continue;
                }
                let var = 1 - solved;
                let c = lin.coeffs_in(solved);
                let to1 = |p: &Poly2| -> Poly1 {
                    let mut perm = [0usize; 2];
                    perm[var] = 0;
                    perm[solved] = 0;
                    p.permute::<1>(perm)
                };
                if c[1].uses_var(solved) {
                    continue;
                }
                let (a, b) = (to1(&c[1]), to1(&c[0]));
                let res = resultant(lin, other, solved)?;
                let m = to1(&res).squarefree().monic();
                if m.is_constant() {
                    continue;
                }
                let Some(ainv) = a.inverse_mod(&m) else { continue };
                let g = (&(-&b) * &ainv).div_rem(&m).1;
                let tc = TriangularCenter { var, m, g };
                tc.check(pair, disk)?;
                return Ok(tc);
            }
        }
        Err(ModelError::Unsupported("neither polynomial is linear in a variable with invertible coefficient".into()))
    }

    fn check(&self, pair: &Pair, disk: &Disk) -> Result<(), ModelError> {
        let deg = self.m.degree().unwrap_or(0) as usize;
        let st = Sturm::new(&self.m);
        if st.variations_at_neg_inf() - st.variations_at_pos_inf() != deg {
            return Err(ModelError::Unsupported("eliminant has non-real roots".into()));
        }
        for q in [&pair.0, &pair.1] {
            if !self.reduce(q).is_zero() {
                return Err(ModelError::Unsupported("pair does not vanish on the triangular set".into()));
            }
        }
        let c = disk.center();
        let r2 = &disk.radius * &disk.radius;
        let inside = &(&(&Poly2::x() - &Poly2::constant(c.0.clone())).pow(2) + &(&Poly2::y() - &Poly2::constant(c.1)).pow(2))
            - &Poly2::constant(r2);
        if self.signs(&inside).iter().any(|s| *s >= 0) {
            return Err(ModelError::Unsupported("a common zero lies outside the open disk".into()));
        }
        Ok(())
    }

    /// Certifies that the common zeros of `pair` on the closed disk are exactly the
    /// points of this set: each point is a zero by exact reduction, and a Krawczyk
    /// isolation finds no others.
    pub fn verify_zero_set(&self, pair: &Pair, disk: &Disk, opts: &Options) -> Result<(), ModelError> {
        self.check(pair, disk)?;
        let iso = isolate_common_zeros(pair, disk, opts);
        if !iso.unresolved.is_empty() || iso.zeros.len() != self.len() {
            return Err(ModelError::Unsupported(format!(
                "isolation found {} zeros and {} unresolved boxes for {} declared points",
                iso.zeros.len(),
                iso.unresolved.len(),
                self.len()
            )));
        }
        Ok(())
    }

    /// Signs of `det ∂f` at the points; fails if one of them is zero.
    pub fn sign_pattern(&self, pair: &Pair) -> Result<Vec<i8>, ModelError> {
        let s = self.signs(&jacobian(pair).det());
        if s.contains(&0) {
            return Err(ModelError::NotRegular);
        }
        Ok(s.into_iter().map(|v| v as i8).collect())
    }

    pub fn len(&self) -> usize {
        self.m.degree().unwrap_or(0) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `q` restricted to the triangular set, reduced modulo `m`.
    pub fn reduce(&self, q: &Poly2) -> Poly1 {
        restrict(q, self.var, &self.g).div_rem(&self.m).1
    }

    pub fn roots(&self) -> Vec<RealAlgebraic> {
        RealAlgebraic::roots_of(&self.m)
    }

    /// Sign of `q` at each point, in increasing order of the `var` coordinate.
    pub fn signs(&self, q: &Poly2) -> Vec<i32> {
        let r = self.reduce(q);
        self.roots().iter().map(|a| a.sign_of(&r)).collect()
    }

    pub fn points_f64(&self) -> Vec<[f64; 2]> {
        self.roots()
            .iter()
            .map(|a| {
                let v = a.to_f64();
                let w = self.g.eval_f64(&[v]);
                if self.var == X {
                    [v, w]
                } else {
                    [w, v]
                }
            })
            .collect()
    }

    /// Exact rational points, when every root is rational.
    pub fn rational_points(&self) -> Option<Vec<Point>> {
        self.roots()
            .iter()
            .map(|a| {
                let v = a.as_rational()?.clone();
                let w = self.g.at1(&v);
                Some(if self.var == X { Point::new(v, w) } else { Point::new(w, v) })
            })
            .collect()
    }

    /// `h = chi / m'` modulo `m`, so that the triangular pair has `det = chi` on the center.
    pub fn cofactor(&self, chi: &Poly1) -> Option<Poly1> {
        let inv = self.m.derivative().inverse_mod(&self.m)?;
        Some((chi * &inv).div_rem(&self.m).1)
    }

    /// `(m(x), h(x)(y - g(x)))` for `var = X`, `(h(y)(x - g(y)), m(y))` for `var = Y`.
    pub fn pair(&self, h: &Poly1) -> Pair {
        let lift = |p: &Poly1| -> Poly2 { p.permute([self.var]) };
        let other = Poly2::var(1 - self.var);
        let m = lift(&self.m);
        let second = &lift(h) * &(&other - &lift(&self.g));
        if self.var == X {
            (m, second)
        } else {
            (second, m)
        }
    }

    /// A polynomial whose sign at the `i`-th root is `signs[i]` (product of linear
    /// factors through rational separators of the roots).
    pub fn sign_interpolant(&self, signs: &[i8]) -> Poly1 {
        let roots = self.roots();
        assert_eq!(roots.len(), signs.len());
        let mut c = Poly1::one();
        for i in 1..roots.len() {
            if signs[i] != signs[i - 1] {
                let s = separator(&roots[i - 1], &roots[i]);
                c = &c * &Poly1::from_dense(&[-s, Rational::one()]);
            }
        }
        // Sign at the first root: (-1)^(number of factors), since all separators lie above it.
        let flips = (c.degree().unwrap_or(0) % 2) as i8;
        let first = if flips == 1 { -1 } else { 1 };
        if signs.first().copied().unwrap_or(1) != first {
            c = c.scale(&-Rational::one());
        }
        c
    }
}

/// A rational strictly between `a < b`.
fn separator(a: &RealAlgebraic, b: &RealAlgebraic) -> Rational {
    let mut a = a.clone();
    let mut b = b.clone();
    loop {
        if a.interval().hi < b.interval().lo {
            return (&a.interval().hi + &b.interval().lo) / Rational::from_integer(2.into());
        }
        let wa = a.interval().width() / Rational::from_integer(2.into());
        let wb = b.interval().width() / Rational::from_integer(2.into());
        if !wa.is_zero() {
            a.refine(&wa);
        }
        if !wb.is_zero() {
            b.refine(&wb);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use blowup_core::{int, rat};

    fn p2(s: &str) -> Poly2 {
        s.parse().unwrap()
    }

    fn p1(s: &str) -> Poly1 {
        s.parse().unwrap()
    }

    #[test]
    fn triangle_from_three_point_pair() {
        let pair = (p2("(x - 1)/2 + y^2"), p2("(x + 1/2)*y"));
        let tc = TriangularCenter::from_pair(&pair, &Disk::centered(int(2))).unwrap();
        assert_eq!(tc.var, Y);
        assert_eq!(tc.m, p1("w^3 - 3/4*w"));
        assert_eq!(tc.g, p1("-2*w^2 + 1"));
        // det at p2 = (-1/2, -sqrt3/2), p3 = (1, 0), p1 = (-1/2, sqrt3/2)
        assert_eq!(tc.signs(&jacobian(&pair).det()), vec![-1, 1, -1]);
        assert_eq!(tc.reduce(&jacobian(&pair).det()), p1("-3*w^2 + 3/4"));
        assert_eq!(tc.sign_pattern(&pair), Ok(vec![-1, 1, -1]));
        tc.verify_zero_set(&pair, &Disk::centered(int(2)), &Options::default()).unwrap();
        let moved = (pair.0.clone(), &pair.1 * &p2("x - 1/4"));
        assert!(tc.verify_zero_set(&moved, &Disk::centered(int(2)), &Options::default()).is_err());
    }

    #[test]
    fn cofactor_reproduces_constant_sign_pair() {
        let tc = TriangularCenter { var: Y, m: p1("w^3 - 3/4*w"), g: p1("-2*w^2 + 1") };
        let h = tc.cofactor(&Poly1::one()).unwrap();
        assert_eq!(h, p1("4/3*(2*w^2 - 1)"));
        let f = tc.pair(&h);
        assert_eq!(f.0, p2("4/3*(2*y^2 - 1)*(x + 2*y^2 - 1)"));
        assert_eq!(f.1, p2("y^3 - 3/4*y"));
        assert_eq!(tc.reduce(&jacobian(&f).det()), Poly1::one());
    }

    #[test]
    fn rational_points_and_interpolation() {
        let pts = vec![Point::new(int(1), int(0)), Point::new(int(-1), int(0)), Point::new(rat(1, 2), int(1))];
        let tc = TriangularCenter::from_points(&pts, X).unwrap();
        let mut back = tc.rational_points().unwrap();
        back.sort();
        let mut want = pts.clone();
        want.sort();
        assert_eq!(back, want);
        for signs in [[1i8, -1, 1], [-1, -1, 1], [1, 1, 1], [-1, 1, -1]] {
            let c = tc.sign_interpolant(&signs);
            let got: Vec<i32> = tc.roots().iter().map(|r| r.sign_of(&c)).collect();
            assert_eq!(got, signs.iter().map(|s| *s as i32).collect::<Vec<_>>());
        }
    }
}
