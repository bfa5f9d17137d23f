//! Implicit equation of the torus picture of a blowup.

use crate::torus::TorusParams;
use crate::GeometryError;
use blowup_core::{resultant, squarefree, Pair, Poly, Poly3};

/// Names of the output variables.
pub const UVW: [&str; 3] = ["u", "v", "w"];

/// Eliminates `s = r - y` from `f0(u, r - s)·w - f1(u, r - s)·(v + s)` and
/// `s² - v² - w²` (the half-angle form of the torus map). The zero set of the result
/// contains the image of the blowup; extraneous components are possible.
pub fn implicitize(pair: &Pair, tp: &TorusParams) -> Result<Poly3, GeometryError> {
    // Variables (u, v, w, s).
    let s = Poly::<4>::var(3);
    let y = &Poly::<4>::constant(tp.r.clone()) - &s;
    let lift = |p: &blowup_core::Poly2| p.to_dim::<4>().subst(1, &y);
    let (f0, f1) = (lift(&pair.0), lift(&pair.1));
    let (v, w) = (Poly::<4>::var(1), Poly::<4>::var(2));
    let a = &(&f0 * &w) - &(&f1 * &(&v + &s));
    let b = &(&(&s * &s) - &(&v * &v)) - &(&w * &w);
    let res = resultant(&a, &b, 3).map_err(|_| GeometryError::DegenerateElimination)?;
    if res.is_zero() {
        return Err(GeometryError::DegenerateElimination);
    }
    let out = squarefree(&res.to_dim::<3>());
    Ok(out.primitive().1)
}

/// `|F(q)|` relative to the sum of the absolute values of the terms of `F` at `q`.
pub fn relative_residual(f: &Poly3, q: [f64; 3]) -> f64 {
    let mut val = 0.0;
    let mut scale = 0.0;
    for (m, c) in f.terms() {
        let t = blowup_core::rational::to_f64(c) * (0..3).map(|i| q[i].powi(m.0[i] as i32)).product::<f64>();
        val += t;
        scale += t.abs();
    }
    if scale == 0.0 {
        0.0
    } else {
        val.abs() / scale
    }
}

pub fn to_text(f: &Poly3) -> String {
    f.to_text_with(&UVW)
}
