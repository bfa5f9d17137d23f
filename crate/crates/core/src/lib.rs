//! Exact polynomial algebra over the rationals and certified sign decisions on disks.

pub mod algebra;
pub mod algebraic;
pub mod certify;
pub mod format;
pub mod groebner;
pub mod interval;
pub mod matrix;
pub mod poly;
pub mod ratfun;
pub mod rational;
pub mod univariate;
pub mod zeros;

pub use algebra::{gcd, gcd2, multiplicity, resultant, squarefree, taylor_form};
pub use certify::{
    certify_positive, certify_positive_xt, verify_zero_set, Certificate, Disk, Point, Verdict, ZeroSetReport,
};
pub use interval::{interval_eval, Interval};
pub use matrix::{jacobian, Pair, PolyMatrix, PolyMatrix2, PolyMatrix2T};
pub use poly::{Poly, Poly1, Poly2, Poly3, T, X, Y};
pub use ratfun::RationalFunction1;
pub use rational::{int, rat, Rational};
pub use univariate::isolate_real_roots;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("gcd of two zero polynomials")]
    BothZero,
    #[error("resultant needs positive degree in the eliminated variable")]
    DegenerateDegrees,
}
