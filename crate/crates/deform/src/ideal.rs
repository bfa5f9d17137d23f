use crate::DeformError;
use blowup_core::certify::{certify_positive_with, Options};
use blowup_core::rational::sign;
use blowup_core::{Certificate, Disk, Pair, Point, Poly2, PolyMatrix2, Rational, X, Y};
use blowup_model::StronglyRegularPair;
use num_traits::{One, Zero};

/// `f·M` with `f` a row vector.
pub fn apply_matrix(f: &Pair, m: &PolyMatrix2) -> Pair {
    m.apply(f)
}

/// Division by `d`, monic in `var`, over the ring of the other variable.
fn divide_monic(g: &Poly2, d: &Poly2, var: usize) -> (Poly2, Poly2) {
    let dd = d.degree_in(var).unwrap_or(0);
    let mut rem = g.clone();
    let mut quo = Poly2::zero();
    loop {
        let k = match rem.degree_in(var) {
            Some(k) if k >= dd && !rem.is_zero() => k,
            _ => break,
        };
        let c = rem.coeffs_in(var).pop().unwrap();
        let t = &c * &Poly2::var(var).pow(k - dd);
        rem = &rem - &(&t * d);
        quo = &quo + &t;
    }
    (quo, rem)
}

/// Cofactors `(q0, q1)` with `g = q0·f0 + q1·f1` for a pair from the strongly regular
/// construction.
pub fn represent_in_ideal(g: &Poly2, f: &StronglyRegularPair) -> Result<(Poly2, Poly2), DeformError> {
    let tc = &f.center;
    let lift = |p: &blowup_core::Poly1| -> Poly2 { p.permute([0]) };
    let gs = f.to_sheared(g);
    let graph = &Poly2::y() - &lift(&tc.g);
    let (a, r) = divide_monic(&gs, &graph, Y);
    let m = lift(&tc.m);
    let s = r.div_exact(&m).ok_or(DeformError::NotInIdeal)?;
    let hinv = f.h.inverse_mod(&tc.m).ok_or(DeformError::NotInIdeal)?;
    // 1 - h·hinv = k·m
    let k = (&blowup_core::Poly1::one() - &(&f.h * &hinv)).div_exact(&tc.m).ok_or(DeformError::NotInIdeal)?;
    let q0 = &s + &(&(&a * &lift(&k)) * &graph);
    // Reduce q1 modulo f0; the multiple moves to q0.
    let (c, q1) = divide_monic(&(&a * &lift(&hinv)), &m, X);
    let q0 = &q0 + &(&c * &(&lift(&f.h) * &graph));
    let (q0, q1) = (f.from_sheared(&q0), f.from_sheared(&q1));
    debug_assert_eq!(&(&q0 * &f.pair.0) + &(&q1 * &f.pair.1), *g);
    Ok((q0, q1))
}

/// `N + γ (g1 f1, -g0 f1; -g1 f0, g0 f0)`: same product with `f`, same values on the
/// center, determinant raised by `γ (g0² + g1²)`.
pub fn n_gamma(n: &PolyMatrix2, f: &Pair, g: &Pair, gamma: &Rational) -> Result<PolyMatrix2, DeformError> {
    if &apply_matrix(f, n) != g {
        return Err(DeformError::PairMismatch);
    }
    if gamma.is_zero() {
        return Ok(n.clone());
    }
    let c = PolyMatrix2::new(&g.1 * &f.1, -&(&g.0 * &f.1), -&(&g.1 * &f.0), &g.0 * &f.0);
    Ok(n.add(&c.scale_poly(&Poly2::constant(gamma.clone()))))
}

/// Smallest power of two `γ ≥ 1` (up to `2^64`) with `det N_γ` certified positive on the
/// closed disk. Fails immediately if `det N` is not positive at a center point.
pub fn find_gamma(
    n: &PolyMatrix2,
    f: &Pair,
    g: &Pair,
    disk: &Disk,
    center: &[Point],
    opts: &Options,
) -> Result<(Rational, Certificate), DeformError> {
    let det = n.det();
    if center.iter().any(|p| sign(&det.eval(&p.coords())) <= 0) {
        return Err(DeformError::GammaSearchExhausted);
    }
    if &apply_matrix(f, n) != g {
        return Err(DeformError::PairMismatch);
    }
    let sq = &(&g.0 * &g.0) + &(&g.1 * &g.1);
    let mut gamma = Rational::one();
    for _ in 0..=64 {
        let cert = certify_positive_with(&(&det + &sq.scale(&gamma)), disk, opts);
        if cert.is_positive() {
            return Ok((gamma, cert));
        }
        gamma = &gamma * Rational::from_integer(2.into());
    }
    Err(DeformError::GammaSearchExhausted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use blowup_core::{int, rat};
    use blowup_model::strongly_regular_pair;

    fn p2(s: &str) -> Poly2 {
        s.parse().unwrap()
    }

    fn two_point() -> StronglyRegularPair {
        strongly_regular_pair(&[Point::new(int(1), int(0)), Point::new(int(-1), int(0))], &[int(1), int(1)]).unwrap()
    }

    #[test]
    fn triangular_division() {
        let f = two_point();
        assert_eq!(f.pair, (p2("x^2 - 1"), p2("x*y/2")));
        assert_eq!(represent_in_ideal(&f.pair.0, &f).unwrap(), (Poly2::one(), Poly2::zero()));
        let g = &(&p2("y") * &f.pair.1) + &(&p2("x") * &f.pair.0);
        assert_eq!(represent_in_ideal(&g, &f).unwrap(), (p2("x"), p2("y")));
        let c = p2("x^2 + y^2 - 1");
        let (q0, q1) = represent_in_ideal(&c, &f).unwrap();
        assert_eq!(&(&q0 * &f.pair.0) + &(&q1 * &f.pair.1), c);
        assert_eq!(represent_in_ideal(&p2("x - 1"), &f), Err(DeformError::NotInIdeal));
    }

    #[test]
    fn gamma_zero_and_mismatch() {
        let f = (p2("x"), p2("y"));
        let n = PolyMatrix2::parse(["1", "x", "0", "2"]).unwrap();
        let g = apply_matrix(&f, &n);
        assert_eq!(n_gamma(&n, &f, &g, &int(0)).unwrap(), n);
        assert_eq!(n_gamma(&n, &f, &f, &rat(1, 2)), Err(DeformError::PairMismatch));
    }

    #[test]
    fn gamma_search() {
        let d = Disk::centered(int(2));
        let o = [Point::new(int(0), int(0))];
        let f = (p2("x"), p2("y"));
        let n = PolyMatrix2::parse(["1", "0", "0", "1 - x^2"]).unwrap();
        let g = apply_matrix(&f, &n);
        let (gamma, cert) = find_gamma(&n, &f, &g, &d, &o, &Options::default()).unwrap();
        assert!(cert.is_positive());
        assert!(gamma >= int(1));
        let bad = PolyMatrix2::parse(["-1", "0", "0", "1"]).unwrap();
        let gb = apply_matrix(&f, &bad);
        assert_eq!(find_gamma(&bad, &f, &gb, &d, &o, &Options::default()), Err(DeformError::GammaSearchExhausted));
    }
}
