//! Strongly regular pairs: generators of the vanishing ideal of the center with a
//! prescribed Jacobian determinant at each point.

use crate::spec::BlowupSpec;
use crate::triangular::{lagrange, TriangularCenter};
use crate::ModelError;
use blowup_core::groebner::groebner;
use blowup_core::{Pair, Point, Poly2, Rational, X};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// Output of the construction, kept in triangular form for division.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StronglyRegularPair {
    pub pair: Pair,
    /// The construction lives in coordinates `(u, y) = (x + k*y, y)`.
    #[serde(with = "blowup_core::rational::serde_rational")]
    pub shear: Rational,
    /// Center in sheared coordinates, `var = X`.
    pub center: TriangularCenter,
    pub h: blowup_core::Poly1,
}

impl StronglyRegularPair {
    /// `(x, y) ↦ (x + k*y, y)` applied to `p`.
    pub fn to_sheared(&self, p: &Poly2) -> Poly2 {
        shear(p, &-&self.shear)
    }

    pub fn from_sheared(&self, p: &Poly2) -> Poly2 {
        shear(p, &self.shear)
    }
}

/// Substitutes `x ↦ x + k*y`.
fn shear(p: &Poly2, k: &Rational) -> Poly2 {
    if k.is_zero() {
        return p.clone();
    }
    let u = &Poly2::x() + &Poly2::y().scale(k);
    p.subst(X, &u)
}

/// Shear parameters tried in order: 0, 1, -1, 2, -2, ...
fn shear_candidates() -> impl Iterator<Item = Rational> {
    (0i64..).flat_map(|k| if k == 0 { vec![0] } else { vec![k, -k] }).map(|k| Rational::from_integer(k.into()))
}

pub fn strongly_regular_pair(center: &[Point], chi: &[Rational]) -> Result<StronglyRegularPair, ModelError> {
    if center.is_empty() {
        return Err(ModelError::EmptyCenter);
    }
    assert_eq!(center.len(), chi.len(), "one chi value per point");
    if chi.iter().any(|c| c.is_zero()) {
        return Err(ModelError::NotRegular);
    }
    let mut sorted = center.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != center.len() {
        return Err(ModelError::DuplicatePoints);
    }
    for k in shear_candidates() {
        let moved: Vec<Point> = center.iter().map(|p| Point::new(&p.0 + &k * &p.1, p.1.clone())).collect();
        let Some(tc) = TriangularCenter::from_points(&moved, X) else { continue };
        let us: Vec<Rational> = moved.iter().map(|p| p.0.clone()).collect();
        let chi_poly = lagrange(&us, chi);
        let h = tc.cofactor(&chi_poly).expect("m is squarefree");
        let (a, b) = tc.pair(&h);
        let pair = (shear(&a, &k), shear(&b, &k));
        return Ok(StronglyRegularPair { pair, shear: k, center: tc, h });
    }
    unreachable!("some shear separates finitely many points")
}

/// `f0 = ∏(x - x_i)`, `f1 = h(x)(y - g(x))` (up to a shear) with `det ∂f(p_i) = chi(p_i)`.
pub fn construct_strongly_regular_pair(center: &[Point], chi: &[Rational]) -> Result<Pair, ModelError> {
    Ok(strongly_regular_pair(center, chi)?.pair)
}

/// The pair generates the vanishing ideal of the center (compared through reduced
/// Gröbner bases), and is therefore reduced and regular.
pub fn is_strongly_regular(spec: &BlowupSpec) -> bool {
    let f = spec.pair();
    if f.0.is_zero() && f.1.is_zero() {
        return false;
    }
    let gf = groebner(&[f.0, f.1]);
    if spec.center.is_empty() {
        return gf == vec![Poly2::one()];
    }
    let ones = vec![Rational::from_integer(1.into()); spec.center.len()];
    let Ok(t) = strongly_regular_pair(&spec.center, &ones) else { return false };
    gf == groebner(&[t.pair.0, t.pair.1])
}
