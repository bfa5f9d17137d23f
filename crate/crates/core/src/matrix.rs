//! 2×2 matrices of polynomials acting on pairs from the right.

use crate::poly::{Poly, Poly2, X, Y};
use crate::rational::Rational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyMatrix<const N: usize> {
    pub m11: Poly<N>,
    pub m12: Poly<N>,
    pub m21: Poly<N>,
    pub m22: Poly<N>,
}

pub type PolyMatrix2 = PolyMatrix<2>;
pub type PolyMatrix2T = PolyMatrix<3>;

/// A pair `(f0, f1)`.
pub type Pair = (Poly2, Poly2);

impl<const N: usize> PolyMatrix<N> {
    pub fn new(m11: Poly<N>, m12: Poly<N>, m21: Poly<N>, m22: Poly<N>) -> Self {
        PolyMatrix { m11, m12, m21, m22 }
    }

    pub fn identity() -> Self {
        Self::scalar(Poly::one())
    }

    pub fn scalar(c: Poly<N>) -> Self {
        PolyMatrix { m11: c.clone(), m12: Poly::zero(), m21: Poly::zero(), m22: c }
    }

    pub fn from_rationals(m: [[Rational; 2]; 2]) -> Self {
        let [[a, b], [c, d]] = m;
        PolyMatrix::new(Poly::constant(a), Poly::constant(b), Poly::constant(c), Poly::constant(d))
    }

    /// Parses four entries in row order.
    pub fn parse(entries: [&str; 4]) -> Result<Self, crate::format::ParseError> {
        Ok(PolyMatrix::new(entries[0].parse()?, entries[1].parse()?, entries[2].parse()?, entries[3].parse()?))
    }

    pub fn entries(&self) -> [&Poly<N>; 4] {
        [&self.m11, &self.m12, &self.m21, &self.m22]
    }

    pub fn map<const M: usize, F: Fn(&Poly<N>) -> Poly<M>>(&self, f: F) -> PolyMatrix<M> {
        PolyMatrix::new(f(&self.m11), f(&self.m12), f(&self.m21), f(&self.m22))
    }

    pub fn det(&self) -> Poly<N> {
        &(&self.m11 * &self.m22) - &(&self.m12 * &self.m21)
    }

    pub fn trace(&self) -> Poly<N> {
        &self.m11 + &self.m22
    }

    pub fn adjugate(&self) -> Self {
        PolyMatrix::new(self.m22.clone(), -&self.m12, -&self.m21, self.m11.clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        PolyMatrix::new(
            &(&self.m11 * &o.m11) + &(&self.m12 * &o.m21),
            &(&self.m11 * &o.m12) + &(&self.m12 * &o.m22),
            &(&self.m21 * &o.m11) + &(&self.m22 * &o.m21),
            &(&self.m21 * &o.m12) + &(&self.m22 * &o.m22),
        )
    }

    pub fn add(&self, o: &Self) -> Self {
        PolyMatrix::new(&self.m11 + &o.m11, &self.m12 + &o.m12, &self.m21 + &o.m21, &self.m22 + &o.m22)
    }

    pub fn sub(&self, o: &Self) -> Self {
        PolyMatrix::new(&self.m11 - &o.m11, &self.m12 - &o.m12, &self.m21 - &o.m21, &self.m22 - &o.m22)
    }

    pub fn scale_poly(&self, c: &Poly<N>) -> Self {
        self.map(|e| e * c)
    }

    pub fn eval(&self, pt: &[Rational; N]) -> [[Rational; 2]; 2] {
        [[self.m11.eval(pt), self.m12.eval(pt)], [self.m21.eval(pt), self.m22.eval(pt)]]
    }

    pub fn eval_f64(&self, pt: &[f64; N]) -> [[f64; 2]; 2] {
        [[self.m11.eval_f64(pt), self.m12.eval_f64(pt)], [self.m21.eval_f64(pt), self.m22.eval_f64(pt)]]
    }

    pub fn is_zero(&self) -> bool {
        self.entries().iter().all(|e| e.is_zero())
    }
}

impl PolyMatrix2 {
    pub fn lift(&self) -> PolyMatrix2T {
        self.map(|e| e.lift())
    }

    /// Row vector times matrix: `(f0*M11 + f1*M21, f0*M12 + f1*M22)`.
    pub fn apply(&self, f: &Pair) -> Pair {
        (&(&f.0 * &self.m11) + &(&f.1 * &self.m21), &(&f.0 * &self.m12) + &(&f.1 * &self.m22))
    }
}

impl PolyMatrix2T {
    pub fn at_t(&self, t: &Rational) -> PolyMatrix2 {
        self.map(|e| e.at_t(t))
    }
}

/// Jacobian laid out with rows `d/dx`, `d/dy` and columns `f0`, `f1`.
pub fn jacobian(f: &Pair) -> PolyMatrix2 {
    PolyMatrix::new(f.0.partial(X), f.1.partial(X), f.0.partial(Y), f.1.partial(Y))
}

/// Determinant of a constant 2×2 rational matrix.
pub fn det_rat(m: &[[Rational; 2]; 2]) -> Rational {
    &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
}

pub fn is_identity(m: &[[Rational; 2]; 2]) -> bool {
    m[0][0].is_one() && m[1][1].is_one() && m[0][1].is_zero() && m[1][0].is_zero()
}
