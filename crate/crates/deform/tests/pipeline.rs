use blowup_core::certify::Options;
use blowup_core::{int, rat, Disk, Pair, Point, Poly2, PolyMatrix2, PolyMatrix2T, Rational};
use blowup_deform::*;
use blowup_model::BlowupSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn p2(s: &str) -> Poly2 {
    s.parse().unwrap()
}

fn disk() -> Disk {
    Disk::centered(int(2))
}

fn fixture(name: &str) -> BlowupSpec {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    let s: BlowupSpec = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    s.verify().unwrap()
}

fn rand_rat(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-9..=9), rng.gen_range(1..=4))
}

fn rand_poly(rng: &mut ChaCha8Rng, deg: u32) -> Poly2 {
    let mut terms = Vec::new();
    for i in 0..=deg {
        for j in 0..=deg - i {
            if rng.gen_bool(0.6) {
                terms.push(([i, j], rand_rat(rng)));
            }
        }
    }
    Poly2::from_terms(terms)
}

fn random_point(rng: &mut ChaCha8Rng, r: f64) -> [f64; 2] {
    loop {
        let p = [rng.gen_range(-r..r), rng.gen_range(-r..r)];
        if p[0] * p[0] + p[1] * p[1] <= r * r {
            return p;
        }
    }
}

fn det_f64(m: [[f64; 2]; 2]) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Family checks shared by every synthesized family: exact endpoints, certificate, and
/// a numeric determinant probe at random points of the disk times [0, 1].
fn check_family(fam: &IsotopyFamily, r: f64, seed: u64) {
    assert_eq!(family_at(fam, &int(0)).unwrap(), fam.endpoints.0);
    assert_eq!(family_at(fam, &int(1)).unwrap(), fam.endpoints.1);
    assert!(fam.certificate.is_positive());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..20 {
        let p = random_point(&mut rng, r);
        let t: f64 = rng.gen_range(0.0..=1.0);
        assert!(det_f64(fam.matrix.eval_f64(&[p[0], p[1], t])) > 0.0);
    }
}

#[test]
fn n_gamma_determinant_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let center = [Point::new(int(1), int(0)), Point::new(int(-1), int(0))];
    for _ in 0..100 {
        let f: Pair = (rand_poly(&mut rng, 2), rand_poly(&mut rng, 2));
        let n = PolyMatrix2::new(rand_poly(&mut rng, 2), rand_poly(&mut rng, 1), rand_poly(&mut rng, 1), rand_poly(&mut rng, 2));
        let g = apply_matrix(&f, &n);
        let gamma = rand_rat(&mut rng);
        let ng = n_gamma(&n, &f, &g, &gamma).unwrap();
        let lhs = &(&ng.det() - &n.det()) - &(&(&g.0 * &g.0) + &(&g.1 * &g.1)).scale(&gamma);
        assert!(lhs.is_zero());
        assert_eq!(apply_matrix(&f, &ng), g);
        // Pointwise: N_γ agrees with N wherever f vanishes; take f through the center.
        let fz: Pair = (&f.0 * &p2("x^2 - 1"), &f.1 * &p2("y"));
        let gz = apply_matrix(&fz, &n);
        let nz = n_gamma(&n, &fz, &gz, &gamma).unwrap();
        for p in &center {
            assert_eq!(nz.eval(&p.coords()), n.eval(&p.coords()));
        }
    }
}

#[test]
fn rotation_family_midpoint() {
    let m = PolyMatrix2T::parse(["1 - t", "t/2", "-t/2", "1 + t"]).unwrap();
    let fam = IsotopyFamily {
        matrix: m.clone(),
        base_pair: Some((p2("x"), p2("y"))),
        certificate: blowup_core::Certificate::trivial(),
        endpoints: (m.at_t(&int(0)), m.at_t(&int(1))),
        unit_factor: None,
        provenance: vec![],
    };
    let half = family_at(&fam, &rat(1, 2)).unwrap();
    assert_eq!(half, PolyMatrix2::parse(["1/2", "1/4", "-1/4", "3/2"]).unwrap());
    assert_eq!(half.det(), Poly2::constant(rat(13, 16)));
    assert_eq!(family_at(&fam, &rat(3, 2)), Err(DeformError::OutOfRange));
    // Applying the t = 1 matrix to (x, y) gives (-y/2, x/2 + 2y).
    assert_eq!(apply_matrix(&(p2("x"), p2("y")), &m.at_t(&int(1))), (p2("-y/2"), p2("x/2 + 2*y")));
}

#[test]
fn linear_shortcut() {
    let o = Options::default();
    let id = PolyMatrix2::identity();
    let m = PolyMatrix2::parse(["x", "-2", "3", "y"]).unwrap();
    let (ok, cert) = linear_family_check(&id, &m, &disk(), &o);
    assert!(ok && cert.is_positive());
    let fam = polynomial_connecting_family(&id, &m, &disk(), &PipelineOptions::default()).unwrap();
    assert_eq!(fam.provenance, vec!["linear".to_string()]);
    assert_eq!(fam.matrix, PolyMatrix2T::parse(["t*x + 1 - t", "-2*t", "3*t", "t*y + 1 - t"]).unwrap());
    check_family(&fam, 2.0, 1);
    assert!(linear_family_check(&id, &id, &disk(), &o).0);
    let quarter = PolyMatrix2::parse(["0", "-1", "1", "0"]).unwrap();
    assert!(linear_family_check(&id, &quarter, &disk(), &o).0);
    let minus = PolyMatrix2::parse(["-1", "0", "0", "-1"]).unwrap();
    assert!(!linear_family_check(&id, &minus, &disk(), &o).0);
}

#[test]
fn constant_and_bump_stages() {
    let d = disk();
    let m = PolyMatrix2::parse(["x", "-2", "3", "y"]).unwrap();
    let fam = polynomial_connecting_family(&m, &m, &d, &PipelineOptions::default()).unwrap();
    assert_eq!(fam.provenance, vec!["constant".to_string()]);
    check_family(&fam, 2.0, 2);
    let id = PolyMatrix2::identity();
    let minus = PolyMatrix2::parse(["-1", "0", "0", "-1"]).unwrap();
    let fam = polynomial_connecting_family(&id, &minus, &d, &PipelineOptions::default()).unwrap();
    assert!(fam.provenance[0].starts_with("bump"));
    check_family(&fam, 2.0, 3);
}

#[test]
fn bernstein_stage_half_turn() {
    let d = disk();
    let id = PolyMatrix2::identity();
    let minus = PolyMatrix2::parse(["-1", "0", "0", "-1"]).unwrap();
    let fam = polynomial_connecting_family(&id, &minus, &d, &PipelineOptions::bernstein_only()).unwrap();
    // Regression: the lowest degree of the schedule already certifies.
    assert_eq!(fam.provenance, vec!["bernstein degree=4".to_string()]);
    check_family(&fam, 2.0, 4);
    let none = PipelineOptions { schedule: vec![], ..PipelineOptions::bernstein_only() };
    assert!(matches!(
        polynomial_connecting_family(&id, &minus, &d, &none),
        Err(DeformError::DegreeEscalationExhausted(_))
    ));
}

#[test]
fn bernstein_stage_spatial() {
    // Both endpoints vary over the disk; the linear segment passes through a singular
    // matrix where x = 0 because M has the negative eigenvalue -2 there.
    let d = Disk::centered(int(1));
    let n = PolyMatrix2::parse(["2 + x", "y/2", "0", "1"]).unwrap();
    let m = PolyMatrix2::parse(["-2 + x^2", "1", "0", "-1 - y^2/2"]).unwrap();
    assert!(!linear_family_check(&n, &m, &d, &Options::default()).0);
    let fam = polynomial_connecting_family(&n, &m, &d, &PipelineOptions::bernstein_only()).unwrap();
    // Regression: certified at the first degree of the schedule.
    assert_eq!(fam.provenance, vec!["bernstein degree=4".to_string()]);
    check_family(&fam, 1.0, 5);
}

#[test]
fn endpoint_must_be_positive() {
    let id = PolyMatrix2::identity();
    let bad = PolyMatrix2::parse(["x", "0", "0", "1"]).unwrap();
    assert!(matches!(
        polynomial_connecting_family(&id, &bad, &disk(), &PipelineOptions::default()),
        Err(DeformError::EndpointNotPositive(_))
    ));
}

#[test]
fn angle_track_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let d = disk();
    let m = PolyMatrix2::parse(["x", "-2", "3", "y"]).unwrap();
    for _ in 0..100 {
        let p = random_point(&mut rng, 2.0);
        let (a, b) = angle_track(&m, &d, p, 4).unwrap();
        let (a2, b2) = angle_track(&m, &d, p, 8).unwrap();
        assert!((a - a2).abs() < 1e-6 && (b - b2).abs() < 1e-6);
        assert!(b - a > 0.0 && b - a < PI);
        // The angles reproduce the columns.
        let v = m.eval_f64(&p);
        let l1 = v[0][0].hypot(v[1][0]);
        assert!((l1 * a.cos() - v[0][0]).abs() < 1e-9 && (l1 * a.sin() - v[1][0]).abs() < 1e-9);
    }
}

#[test]
fn rational_families() {
    let d = disk();
    let po = PipelineOptions::default();
    let m = PolyMatrix2::parse(["x", "-2", "3", "y"]).unwrap();
    let fam = rational_connecting_family(&m, &Poly2::one(), &d, &po).unwrap();
    assert_eq!(fam.denominator, Poly2::one());
    assert_eq!(fam.numerator.at_t(&int(1)), m);
    let g = p2("1 + x^2/8 + y^2/8");
    let fam = rational_connecting_family(&m, &g, &d, &po).unwrap();
    assert!(fam.certificate.is_positive());
    assert_eq!(fam.numerator.at_t(&int(0)), PolyMatrix2::scalar(g.clone()));
    assert_eq!(fam.numerator.at_t(&int(1)), m);
    let v = fam.eval_f64([1.0, 0.5, 1.0]);
    assert!((v[0][0] - 1.0 / (1.0 + 1.25 / 8.0)).abs() < 1e-12);
    // Negative denominator: both parts flip sign.
    let fam = rational_connecting_family(&m.scale_poly(&p2("-1")), &p2("-2"), &d, &po).unwrap();
    assert_eq!(fam.denominator, p2("2"));
    let s = p2("3 + x^2");
    let fam = rational_connecting_family(&PolyMatrix2::scalar(s), &p2("2 + x^2"), &d, &po).unwrap();
    assert_eq!(fam.provenance, vec!["linear".to_string()]);
    assert_eq!(rational_connecting_family(&m, &p2("x"), &d, &po), Err(DeformError::PoleOnDomain));
}

#[test]
fn connect_identical_and_non_isomorphic() {
    let b = fixture("two-point-b.json");
    let fam = connect_blowups(&b, &b, &PipelineOptions::default()).unwrap();
    assert_eq!(fam.matrix, PolyMatrix2::identity().lift());
    let c = fixture("two-point-c.json");
    assert_eq!(connect_blowups(&b, &c, &PipelineOptions::default()), Err(DeformError::NotIsomorphic));
}

fn check_connection(a: &BlowupSpec, b: &BlowupSpec, fam: &IsotopyFamily, seed: u64) {
    check_family(fam, 2.0, seed);
    let fa = a.pair();
    let fb = b.pair();
    assert_eq!(fam.base_pair.as_ref(), Some(&fa));
    let end = apply_matrix(&fa, &fam.endpoints.1);
    let u = fam.unit_factor.clone().unwrap_or_else(Poly2::one);
    assert_eq!(end, (&fb.0 * &u, &fb.1 * &u));
    assert!(blowup_core::certify_positive(&u, &a.disk, 16).is_positive());
    // t = 0 is a positive constant multiple of the identity.
    let e0 = &fam.endpoints.0;
    assert!(e0.m12.is_zero() && e0.m21.is_zero() && e0.m11 == e0.m22);
}

#[test]
fn connect_sheared_pair() {
    let a = fixture("two-point-b.json");
    let b = fixture("two-point-b-sheared.json");
    let fam = connect_blowups(&a, &b, &PipelineOptions::default()).unwrap();
    check_connection(&a, &b, &fam, 6);
    // Regression: both cofactor matrices certify without γ and the segment suffices.
    assert_eq!(fam.provenance[0], "middle pair (x^2 - 1, 1/2*y)");
    assert_eq!(&fam.provenance[1..], ["a: gamma=0", "b: gamma=0", "linear"]);
    assert_eq!(fam.unit_factor, None);
    let back = connect_blowups(&b, &a, &PipelineOptions::default()).unwrap();
    check_connection(&b, &a, &back, 7);
    // Reversal swaps the endpoints.
    let r = fam.reversed();
    assert_eq!(r.at(&int(0)).unwrap(), fam.endpoints.1);
    assert_eq!(r.at(&int(1)).unwrap(), fam.endpoints.0);
}

#[test]
fn connect_four_point() {
    let f = fixture("four-point-f.json");
    let g = fixture("four-point-g.json");
    let fam = connect_blowups(&f, &g, &PipelineOptions::default()).unwrap();
    check_connection(&f, &g, &fam, 8);
}

