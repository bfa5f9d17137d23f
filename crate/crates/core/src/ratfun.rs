//! Univariate rational functions in lowest terms.

use crate::poly::Poly1;
use crate::rational::Rational;
use crate::PolyError;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalFunction1 {
    pub numerator: Poly1,
    pub denominator: Poly1,
}

impl RationalFunction1 {
    /// Reduces by the gcd and makes the denominator monic.
    pub fn new(num: Poly1, den: Poly1) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        if num.is_zero() {
            return Ok(RationalFunction1 { numerator: Poly1::zero(), denominator: Poly1::one() });
        }
        let g = num.gcd(&den);
        let (mut n, _) = num.div_rem(&g);
        let (mut d, _) = den.div_rem(&g);
        let lc = d.leading_coeff();
        n = n.scale(&lc.recip());
        d = d.scale(&lc.recip());
        Ok(RationalFunction1 { numerator: n, denominator: d })
    }

    pub fn constant(c: Rational) -> Self {
        RationalFunction1 { numerator: Poly1::constant(c), denominator: Poly1::one() }
    }

    pub fn is_constant(&self) -> bool {
        self.numerator.is_constant() && self.denominator.is_constant()
    }

    /// Value at `w`, or `None` at a pole.
    pub fn eval(&self, w: &Rational) -> Option<Rational> {
        let d = self.denominator.at1(w);
        if d.is_zero() {
            None
        } else {
            Some(self.numerator.at1(w) / d)
        }
    }

    pub fn eval_f64(&self, w: f64) -> f64 {
        self.numerator.eval_f64(&[w]) / self.denominator.eval_f64(&[w])
    }

    /// Numerator of the derivative: `P'Q - PQ'`.
    pub fn derivative_numerator(&self) -> Poly1 {
        &(&self.numerator.derivative() * &self.denominator) - &(&self.numerator * &self.denominator.derivative())
    }

    pub fn recip(&self) -> Result<Self, PolyError> {
        Self::new(self.denominator.clone(), self.numerator.clone())
    }

    pub fn to_text(&self) -> String {
        format!("({}) / ({})", self.numerator.to_text(), self.denominator.to_text())
    }
}
