use blowup_core::certify::{Options, Verdict};
use blowup_core::matrix::det_rat;
use blowup_core::{
    certify_positive, int, jacobian, rat, resultant, Disk, Pair, Point, Poly1, Poly2, Poly3, PolyMatrix2, PolyMatrix2T,
    Rational, RationalFunction1, X,
};
use blowup_deform::{apply_matrix, connect_blowups, family_at, linear_family_check, n_gamma, PipelineOptions};
use blowup_geometry::*;
use blowup_model::*;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

/// Numeric length tolerance for limit arcs.
const ARC_TOL: f64 = 1e-6;
/// Hausdorff tolerance between exact and sampled image closures.
const IMAGE_TOL: f64 = 1e-3;
/// Both image sets are clamped to [-IMAGE_CLAMP, IMAGE_CLAMP] before comparing.
const IMAGE_CLAMP: f64 = 1e3;
const IMAGE_SAMPLES: usize = 100_000;
/// Slack in the torus inequality and the relative residual of the implicit equation.
const TORUS_TOL: f64 = 1e-9;
const IMPLICIT_TOL: f64 = 1e-9;
/// Circle radius versus `r - y`, relative.
const RADIUS_TOL: f64 = 1e-12;
const CLOSE_TOL: f64 = 1e-6;
const SEPARATION: f64 = 1e-3;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn p2(s: &str) -> Poly2 {
    s.parse().unwrap()
}

fn p3(s: &str) -> Poly3 {
    s.parse().unwrap()
}

fn disk() -> Disk {
    Disk::centered(int(2))
}

fn origin() -> Point {
    Point::new(int(0), int(0))
}

fn torus() -> TorusParams {
    TorusParams::new(int(2), int(4)).unwrap()
}

fn fixture(name: &str) -> BlowupSpec {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    let s: BlowupSpec = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    s.verify().unwrap()
}

fn dist3(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Determinant of a square rational matrix by Gaussian elimination.
fn det_exact(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| !m[r][c].is_zero()) else { return Rational::zero() };
        if piv != c {
            m.swap(piv, c);
            det = -det;
        }
        det *= &m[c][c];
        for r in c + 1..n {
            let k = &m[r][c] / &m[c][c];
            for j in c..n {
                let v = &m[c][j] * &k;
                m[r][j] -= v;
            }
        }
    }
    det
}

/// Central difference quotients; exact for polynomials of degree at most two.
fn det_by_differences(f: &Pair, p: &Point, h: &Rational) -> Rational {
    let z = int(0);
    let d = |q: &Poly2, dx: &Rational, dy: &Rational| {
        let a = q.eval(&[&p.0 + dx, &p.1 + dy]);
        let b = q.eval(&[&p.0 - dx, &p.1 - dy]);
        (a - b) / (int(2) * h)
    };
    d(&f.0, h, &z) * d(&f.1, &z, h) - d(&f.1, h, &z) * d(&f.0, &z, h)
}

fn det_sign_oracle(f: &Pair, p: &Point) -> i8 {
    let det = det_by_differences(f, p, &rat(1, 1 << 40));
    if det > rat(1, 1000) {
        1
    } else if det < rat(-1, 1000) {
        -1
    } else {
        panic!("oracle cannot decide at {p:?}")
    }
}

fn grid_points() -> Vec<Point> {
    let mut v = Vec::new();
    for i in -3..=3 {
        for j in -3..=3 {
            v.push(Point::new(rat(i, 2), rat(j, 3)));
        }
    }
    v
}

fn c1() -> Outcome {
    let m = PolyMatrix2T::parse(["1 - t", "t/2", "-t/2", "1 + t"]).unwrap();
    let expected = p3("1 - 3/4*t^2");
    ensure(m.det() == expected, || format!("det = {}", m.det()))?;
    // Hand expansion at rational times.
    for k in -6..=6 {
        let t = rat(k, 3);
        let [[a, b], [c, d]] = m.eval(&[int(0), int(0), t.clone()]);
        let want = int(1) - rat(3, 4) * &t * &t;
        ensure(&a * &d - &b * &c == want, || format!("t = {t}"))?;
    }
    Ok("det M(t) = 1 - 3/4 t^2".into())
}

fn c2() -> Outcome {
    let a = int(1);
    let half = rat(1, 2);
    let f: Pair = (p2("x^2 - y^2/2 - 1/2"), p2("-x^2/2 + y^2 - 1/2"));
    let c = &a - &half;
    let g: Pair = (
        &(&p2("x^2") + &p2("y^2").scale(&c)) - &Poly2::constant(&a + &half),
        &(&p2("x^2").scale(&c) + &p2("y^2")) - &Poly2::constant(&a + &half),
    );
    ensure(g == (p2("x^2 + 1/2*y^2 - 3/2"), p2("1/2*x^2 + y^2 - 3/2")), || "g at a = 1".into())?;

    let jf = jacobian(&f).det();
    ensure(jf == p2("3*x*y"), || format!("det jacobian f = {jf}"))?;
    let h = rat(1, 7);
    for p in grid_points() {
        let want = int(3) * &p.0 * &p.1;
        ensure(det_by_differences(&f, &p, &h) == want, || format!("difference oracle at {p:?}"))?;
    }
    let jg = jacobian(&g).det();
    let jg_want = p2("x*y").scale(&(int(4) * (int(1) - &c * &c)));
    ensure(jg == jg_want, || format!("det jacobian g = {jg}"))?;

    let res = resultant(&g.0, &g.1, X).unwrap();
    let inner = p2("1 - y^2").scale(&(&c * &c - int(1)));
    let res_want = &inner * &inner;
    ensure(res == res_want, || format!("Res_x = {res}"))?;
    // Sylvester determinant at rational heights.
    for k in -5..=5 {
        let y = rat(k, 2);
        // Coefficients of q(x, y) as a quadratic in x.
        let coeffs = |q: &Poly2| {
            let q0 = q.subst_value(1, &y);
            let at0 = |r: &Poly2| r.eval(&[int(0), int(0)]);
            [at0(&q0), at0(&q0.partial(X)), at0(&q0.partial(X).partial(X)) / int(2)]
        };
        let [a0, a1, a2] = coeffs(&g.0);
        let [b0, b1, b2] = coeffs(&g.1);
        let z = int(0);
        let syl = vec![
            vec![a2.clone(), a1.clone(), a0.clone(), z.clone()],
            vec![z.clone(), a2, a1, a0],
            vec![b2.clone(), b1.clone(), b0.clone(), z.clone()],
            vec![z, b2, b1, b0],
        ];
        let want = res_want.eval(&[int(0), y.clone()]);
        ensure(det_exact(syl) == want, || format!("Sylvester oracle at y = {y}"))?;
    }

    let m = PolyMatrix2::new(
        Poly2::constant(int(1) + rat(2, 3) * &a),
        Poly2::constant(rat(4, 3) * &a),
        Poly2::constant(rat(4, 3) * &a),
        Poly2::constant(int(1) + rat(2, 3) * &a),
    );
    ensure(m.apply(&f) == g, || "f M != g".into())?;
    let [[m11, m12], [m21, m22]] = m.eval(&[int(0), int(0)]);
    for p in grid_points() {
        let (f0, f1) = (f.0.eval(&p.coords()), f.1.eval(&p.coords()));
        ensure(&f0 * &m11 + &f1 * &m21 == g.0.eval(&p.coords()), || format!("row product at {p:?}"))?;
        ensure(&f0 * &m12 + &f1 * &m22 == g.1.eval(&p.coords()), || format!("row product at {p:?}"))?;
    }

    let mt = PolyMatrix2T::parse(["1 + 2/3*t", "4/3*t", "4/3*t", "1 + 2/3*t"]).unwrap();
    ensure(mt.det() == p3("(1 + 2/3*t)^2 - 16/9*t^2"), || format!("det M(t) = {}", mt.det()))?;
    ensure(mt.at_t(&int(0)) == PolyMatrix2::identity(), || "M(0) != I".into())?;
    ensure(mt.at_t(&int(1)) == m, || "M(1) != M".into())?;
    Ok("jacobian, resultant, f M = g, det M(t), endpoints".into())
}

fn random_center(rng: &mut ChaCha8Rng, n: usize) -> Vec<Point> {
    let mut pts: Vec<Point> = Vec::new();
    while pts.len() < n {
        let p = Point::new(rat(rng.gen_range(-10..=10), 8), rat(rng.gen_range(-10..=10), 8));
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    pts
}

fn c3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut total = 0;
    for n in 1..=3 {
        let center = random_center(&mut rng, n);
        let mut specs = Vec::new();
        let mut twins = Vec::new();
        for mask in 0..(1u32 << n) {
            let pattern: Vec<i8> = (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
            let chi: Vec<Rational> = pattern.iter().map(|s| int(*s as i64)).collect();
            let f = construct_strongly_regular_pair(&center, &chi).map_err(|e| e.to_string())?;
            let spec = make_spec(disk(), center.clone(), f.clone()).map_err(|e| e.to_string())?;
            let sd = sign_distribution(&spec).map_err(|e| e.to_string())?;
            for (p, s) in center.iter().zip(&pattern) {
                ensure(sd.get(p) == Some(*s), || format!("n = {n}, pattern {pattern:?}: sign at {p:?}"))?;
                ensure(det_sign_oracle(&f, p) == *s, || format!("oracle disagrees at {p:?}"))?;
            }
            // Same pattern, other magnitudes.
            let chi2: Vec<Rational> =
                pattern.iter().map(|s| int(*s as i64) * rat(rng.gen_range(1..=9), rng.gen_range(1..=9))).collect();
            let f2 = construct_strongly_regular_pair(&center, &chi2).map_err(|e| e.to_string())?;
            twins.push(make_spec(disk(), center.clone(), f2).map_err(|e| e.to_string())?);
            specs.push(spec);
        }
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for i in 0..specs.len() {
            match classes.iter_mut().find(|c| classify(&specs[c[0]], &specs[i]).unwrap()) {
                Some(c) => c.push(i),
                None => classes.push(vec![i]),
            }
        }
        ensure(classes.len() == 1 << n && classes.iter().all(|c| c.len() == 1), || {
            format!("n = {n}: {} classes", classes.len())
        })?;
        for (i, a) in specs.iter().enumerate() {
            for (j, b) in twins.iter().enumerate() {
                ensure(classify(a, b).unwrap() == (i == j), || format!("n = {n}: classify({i}, twin {j})"))?;
            }
        }
        total += specs.len();
    }
    Ok(format!("{total} specs, all singleton classes"))
}

fn c4() -> Outcome {
    let b = fixture("two-point-b.json");
    let c = fixture("two-point-c.json");
    let (p, m) = (Point::new(int(1), int(0)), Point::new(int(-1), int(0)));
    let sb = sign_distribution(&b).map_err(|e| e.to_string())?;
    let sc = sign_distribution(&c).map_err(|e| e.to_string())?;
    ensure(sb.get(&p) == Some(1) && sb.get(&m) == Some(-1), || format!("B: {sb:?}"))?;
    ensure(sc.get(&p) == Some(1) && sc.get(&m) == Some(1), || format!("C: {sc:?}"))?;
    for (spec, want) in [(&b, [1, -1]), (&c, [1, 1])] {
        ensure(det_sign_oracle(&spec.pair(), &p) == want[0] && det_sign_oracle(&spec.pair(), &m) == want[1], || {
            "difference oracle".into()
        })?;
    }
    ensure(!classify(&b, &c).map_err(|e| e.to_string())?, || "B and C classified isomorphic".into())?;
    let h: Pair = (p2("2*x*y^2 - y^2 - x + 1"), p2("4*y^3 - 3*y"));
    let d = jacobian(&h).det();
    ensure(d == p2("3*(2*y^2 - 1)*(4*y^2 - 1)"), || format!("det dh = {d}"))?;
    Ok("B = {+1, -1}, C = {+1, +1}, not isomorphic; det dh exact".into())
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

fn c5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(46);
    let mut done = 0;
    for _ in 0..10 {
        let n_pts = rng.gen_range(1..=3);
        let center = random_center(&mut rng, n_pts);
        let chi: Vec<Rational> = (0..n_pts).map(|_| if rng.gen_bool(0.5) { int(1) } else { int(-1) }).collect();
        let f = construct_strongly_regular_pair(&center, &chi).map_err(|e| e.to_string())?;
        for _ in 0..10 {
            let n = PolyMatrix2::new(rand_poly(&mut rng, 2), rand_poly(&mut rng, 1), rand_poly(&mut rng, 1), rand_poly(&mut rng, 2));
            let g = apply_matrix(&f, &n);
            let gamma = loop {
                let g = rand_rat(&mut rng);
                if !g.is_zero() {
                    break g;
                }
            };
            let ng = n_gamma(&n, &f, &g, &gamma).map_err(|e| e.to_string())?;
            let sq = &(&g.0 * &g.0) + &(&g.1 * &g.1);
            let lhs = &(&ng.det() - &n.det()) - &sq.scale(&gamma);
            ensure(lhs.is_zero(), || format!("instance {done}: residual {lhs}"))?;
            ensure(apply_matrix(&f, &ng) == g, || format!("instance {done}: f N_gamma != g"))?;
            for p in &center {
                ensure(ng.eval(&p.coords()) == n.eval(&p.coords()), || format!("instance {done}: differs at {p:?}"))?;
            }
            // Pointwise, from evaluated entries only.
            for _ in 0..3 {
                let q = [rand_rat(&mut rng), rand_rat(&mut rng)];
                let (a, b) = (g.0.eval(&q), g.1.eval(&q));
                let d = det_rat(&ng.eval(&q)) - det_rat(&n.eval(&q)) - &gamma * (&a * &a + &b * &b);
                ensure(d.is_zero(), || format!("instance {done}: pointwise residual at {q:?}"))?;
            }
            done += 1;
        }
    }
    Ok(format!("{done} instances"))
}

fn c6() -> Outcome {
    let o = Options::default();
    let m = PolyMatrix2::parse(["x", "-2", "3", "y"]).unwrap();
    let disc = &(&m.trace() * &m.trace()) - &m.det().scale(&int(4));
    ensure(disc == p2("(x - y)^2 - 24"), || format!("tr^2 - 4 det = {disc}"))?;
    let cert = certify_positive(&-&disc, &disk(), 24);
    ensure(cert.verdict == Verdict::PositiveEverywhere, || "24 - (x - y)^2 not certified".into())?;
    let (ok, cert) = linear_family_check(&PolyMatrix2::identity(), &m, &disk(), &o);
    ensure(ok && cert.verdict == Verdict::PositiveEverywhere, || "linear check on (I, M) failed".into())?;
    let minus = PolyMatrix2::parse(["-1", "0", "0", "-1"]).unwrap();
    let (bad, _) = linear_family_check(&PolyMatrix2::identity(), &minus, &disk(), &o);
    ensure(!bad, || "linear check on (I, -I) passed".into())?;
    Ok(format!("certificate effort {} boxes; control rejected", cert.effort))
}

fn c7() -> Outcome {
    let a = fixture("two-point-b.json");
    let mt = PolyMatrix2T::parse(["1 - x*y*t", "x*y*t", "-x*y*t", "1 + x*y*t"]).unwrap();
    ensure(mt.det() == Poly3::one(), || "det of the xy family is not 1".into())?;
    let g = mt.at_t(&int(1)).apply(&a.pair());
    let b = a.with_pair(g).verify().map_err(|e| e.to_string())?;
    let fam = connect_blowups(&a, &b, &PipelineOptions::default()).map_err(|e| e.to_string())?;
    ensure(family_at(&fam, &int(0)).unwrap() == fam.endpoints.0, || "t = 0 substitution".into())?;
    ensure(family_at(&fam, &int(1)).unwrap() == fam.endpoints.1, || "t = 1 substitution".into())?;
    let (fa, fb) = (a.pair(), b.pair());
    ensure(fam.base_pair.as_ref() == Some(&fa), || "base pair".into())?;
    let u = fam.unit_factor.clone().unwrap_or_else(Poly2::one);
    ensure(certify_positive(&u, &a.disk, 16).is_positive(), || "unit factor not certified positive".into())?;
    ensure(apply_matrix(&fa, &fam.endpoints.1) == (&fb.0 * &u, &fb.1 * &u), || "t = 1 endpoint".into())?;
    let e0 = &fam.endpoints.0;
    let c0 = e0.m11.eval(&[int(0), int(0)]);
    ensure(e0.m12.is_zero() && e0.m21.is_zero() && e0.m11 == e0.m22 && e0.m11 == Poly2::constant(c0.clone()) && c0.is_positive(), || {
        "t = 0 endpoint is not a positive multiple of the identity".into()
    })?;
    ensure(fam.certificate.verdict == Verdict::PositiveEverywhere, || "determinant certificate".into())?;
    // Sampled determinant on the closed disk times [0, 1], boundary included.
    let mut rng = ChaCha8Rng::seed_from_u64(70);
    for k in 0..2000 {
        let (r, th) = if k % 4 == 0 { (2.0, rng.gen_range(0.0..2.0 * PI)) } else { (2.0 * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..2.0 * PI)) };
        let t = if k % 10 == 0 { (k / 10 % 2) as f64 } else { rng.gen::<f64>() };
        let m = fam.matrix.eval_f64(&[r * th.cos(), r * th.sin(), t]);
        let d = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        ensure(d > 0.0, || format!("det {d} at r = {r}, theta = {th}, t = {t}"))?;
    }
    Ok(format!("provenance {:?}", fam.provenance))
}

fn whitney(t: &Rational) -> Pair {
    let s = |r: Rational| Poly2::constant(r);
    let half = rat(1, 2);
    (
        &(&s(int(1) - t) * &p2("x^2")) - &(&s(t * &half) * &p2("y^2")),
        &(&s(t * &half) * &p2("x^2")) + &(&s(int(1) + t) * &p2("y^2")),
    )
}

/// Over the quadrant (x², y²) the direction sweeps the cone between the two coefficient
/// columns; β doubles that angle.
fn whitney_length_oracle(t: f64) -> f64 {
    let (a, b) = ((1.0 - t, t / 2.0), (-t / 2.0, 1.0 + t));
    2.0 * (a.0 * b.1 - a.1 * b.0).atan2(a.0 * b.0 + a.1 * b.1)
}

fn c8() -> Outcome {
    let full = limit_arcs(&(p2("x"), p2("y")), &origin()).map_err(|e| e.to_string())?;
    ensure(full.is_full_fiber(), || "(x, y) is not a full fiber".into())?;
    let arc = limit_arcs(&whitney(&int(0)), &origin()).map_err(|e| e.to_string())?;
    ensure(arc.tau.intervals.len() == 1, || format!("{:?}", arc.tau))?;
    ensure(arc.tau.intervals[0].0.as_rational() == Some(&int(0)) && arc.tau.intervals[0].1 == Ext::PosInf, || {
        format!("tau = {:?}", arc.tau)
    })?;
    ensure(arc.beta_ranges == vec![[0.0, PI]], || format!("beta = {:?}", arc.beta_ranges))?;
    let ts = [(int(0), 0.0), (rat(1, 2), 0.5), (int(1), 1.0), (rat(11, 10), 1.1), (rat(23, 20), 1.15)];
    let mut lens = Vec::new();
    for (t, tf) in &ts {
        let l = limit_arcs(&whitney(t), &origin()).map_err(|e| e.to_string())?.angular_length;
        let want = whitney_length_oracle(*tf);
        ensure((l - want).abs() < ARC_TOL, || format!("t = {t}: {l} vs {want}"))?;
        lens.push(l);
    }
    ensure(lens.windows(2).all(|w| w[1] < w[0]), || format!("not decreasing: {lens:?}"))?;
    ensure(lens[4] < 0.2, || format!("lambda(23/20) = {}", lens[4]))?;
    Ok(format!("lengths {:?}", lens.iter().map(|l| format!("{l:.6}")).collect::<Vec<_>>()))
}

fn rand_poly1(rng: &mut ChaCha8Rng) -> Poly1 {
    let deg = rng.gen_range(0..=4);
    let mut s = String::from("0");
    for k in 0..=deg {
        s += &format!(" + {}*w^{k}", rng.gen_range(-5i32..=5));
    }
    s.parse().unwrap()
}

fn merge(mut iv: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    iv.sort_by(|a, b| a[0].total_cmp(&b[0]));
    let mut out: Vec<[f64; 2]> = Vec::new();
    for i in iv {
        match out.last_mut() {
            Some(l) if i[0] <= l[1] => l[1] = l[1].max(i[1]),
            _ => out.push(i),
        }
    }
    out
}

/// Image of `ρ` sampled on `w = tan φ`, one interval per step, clamped.
fn sampled_image(rho: &RationalFunction1) -> Vec<[f64; 2]> {
    let c = |v: f64| v.clamp(-IMAGE_CLAMP, IMAGE_CLAMP);
    let n = IMAGE_SAMPLES;
    let ws: Vec<f64> = (0..n).map(|k| (-PI / 2.0 + PI * (k as f64 + 0.5) / n as f64).tan()).collect();
    let q = |w: f64| rho.denominator.eval_f64(&[w]);
    let mut iv = Vec::new();
    for k in 0..n {
        let (w0, w1) = (ws[k], ws[(k + 1) % n]);
        let (v0, v1) = (rho.eval_f64(w0), rho.eval_f64(w1));
        // The wrap-around step passes w = ∞, a pole when deg P > deg Q.
        let pole = if k + 1 < n {
            q(w0) * q(w1) < 0.0
        } else {
            rho.numerator.degree().unwrap_or(0) > rho.denominator.degree().unwrap_or(0)
        };
        if pole {
            iv.push(if v0 > 0.0 { [c(v0), IMAGE_CLAMP] } else { [-IMAGE_CLAMP, c(v0)] });
            iv.push(if v1 > 0.0 { [c(v1), IMAGE_CLAMP] } else { [-IMAGE_CLAMP, c(v1)] });
        } else {
            iv.push([c(v0.min(v1)), c(v0.max(v1))]);
        }
    }
    merge(iv)
}

fn dist(x: f64, set: &[[f64; 2]]) -> f64 {
    set.iter().map(|i| if x < i[0] { i[0] - x } else if x > i[1] { x - i[1] } else { 0.0 }).fold(f64::INFINITY, f64::min)
}

/// sup over `a` of the distance to `b`; attained at endpoints of `a` or at midpoints of
/// gaps in `b` that `a` covers.
fn directed(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    let mut cands: Vec<f64> = a.iter().flat_map(|i| [i[0], i[1]]).collect();
    for g in b.windows(2) {
        let m = 0.5 * (g[0][1] + g[1][0]);
        if dist(m, a) == 0.0 {
            cands.push(m);
        }
    }
    cands.into_iter().map(|x| dist(x, b)).fold(0.0, f64::max)
}

fn c9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < 50 {
        let (n, d) = (rand_poly1(&mut rng), rand_poly1(&mut rng));
        let Ok(rho) = RationalFunction1::new(n, d) else { continue };
        done += 1;
        let exact = merge(
            image_closure(&rho)
                .to_f64()
                .into_iter()
                .map(|i| [i[0].clamp(-IMAGE_CLAMP, IMAGE_CLAMP), i[1].clamp(-IMAGE_CLAMP, IMAGE_CLAMP)])
                .collect(),
        );
        let sampled = sampled_image(&rho);
        let h = directed(&exact, &sampled).max(directed(&sampled, &exact));
        ensure(h < IMAGE_TOL, || format!("{rho:?}: {exact:?} vs {sampled:?} (Hausdorff {h})"))?;
        worst = worst.max(h);
    }
    Ok(format!("{done} functions, worst Hausdorff {worst:.2e}"))
}

fn c10() -> Outcome {
    let s = fixture("superfluous.json");
    let sup = superfluous_points(&s).map_err(|e| e.to_string())?;
    ensure(sup == vec![origin()], || format!("superfluous = {sup:?}"))?;
    let fib = exceptional_fibers(&s).map_err(|e| e.to_string())?;
    // Dividing by x² + y² leaves (2, 1 + x), which is (2 : 1) at the origin.
    let want = Fiber::SinglePoint(ProjPoint::from_ints(2, 1));
    ensure(fib.get(&origin()) == Some(&want), || format!("fiber {:?}", fib.get(&origin())))?;
    for name in ["moebius.json", "two-point-b.json", "two-point-c.json", "four-point-f.json", "four-point-g.json"] {
        let t = fixture(name);
        ensure(superfluous_points(&t).map_err(|e| e.to_string())?.is_empty(), || format!("{name}: superfluous"))?;
        let f = exceptional_fibers(&t).map_err(|e| e.to_string())?;
        ensure(t.center.iter().all(|p| f.get(p) == Some(&Fiber::FullFiber)), || format!("{name}: {f:?}"))?;
    }
    Ok("(2:1) single point; coprime fixtures full".into())
}

fn c11() -> Outcome {
    let tp = torus();
    let (rho, r) = (2.0f64, 4.0f64);
    let s = fixture("moebius.json");
    let m = mesh_open_kernel(&s.pair(), &s.disk, &s.center, &tp, 5);
    ensure(m.vertices.len() > 1000, || format!("{} vertices", m.vertices.len()))?;
    let f = implicitize(&s.pair(), &tp).map_err(|e| e.to_string())?;
    for q in &m.vertices {
        let d = r - q[1].hypot(q[2]);
        ensure(q[0] * q[0] + d * d < rho * rho + TORUS_TOL, || format!("{q:?} outside the torus"))?;
        ensure(relative_residual(&f, *q) < IMPLICIT_TOL, || format!("{q:?} off the implicit surface"))?;
    }
    let mut circles = 0;
    for spec in [s.clone(), fixture("four-point-f.json")] {
        let rings = exceptional_circles(&spec.center, &[], &tp, 97);
        for (p, ring) in spec.center.iter().zip(&rings) {
            let [x, y] = p.to_f64();
            for q in ring {
                let want = r - y;
                ensure(((q[1].hypot(q[2]) - want) / want).abs() < RADIUS_TOL && q[0] == x, || {
                    format!("circle over {p:?}: {q:?}")
                })?;
            }
            circles += 1;
        }
        for q in rings.concat().into_iter().filter(|_| spec.center.len() == 1) {
            ensure(relative_residual(&f, q) < IMPLICIT_TOL, || format!("circle point {q:?} off the implicit surface"))?;
        }
    }
    Ok(format!("{} vertices, {circles} circles", m.vertices.len()))
}

fn c12() -> Outcome {
    let tp = torus();
    let curve = p2("x^2 - y^2 - 1/2*x^4");
    let out = strict_transform_polyline(&curve, &(p2("x"), p2("y")), &disk(), &[origin()], &tp, 400);
    ensure(out.len() == 1, || format!("{} components", out.len()))?;
    let l = &out[0];
    let (a, b) = (l.points[0], *l.points.last().unwrap());
    ensure(l.closed && dist3(a, b) < CLOSE_TOL, || format!("gap {}", dist3(a, b)))?;
    let pts = &l.points[..l.points.len() - 1];
    let n = pts.len();
    let mut best = f64::INFINITY;
    for i in 0..n {
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            best = best.min(dist3(pts[i], pts[j]));
        }
    }
    ensure(best > SEPARATION, || format!("non-adjacent samples {best} apart"))?;
    Ok(format!("{n} samples, min non-adjacent distance {best:.3e}"))
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let secs = Duration::from_secs;
    let all = [
        Criterion { id: 1, name: "family determinant", budget: secs(1), run: c1 },
        Criterion { id: 2, name: "quadric identities at a = 1", budget: secs(1), run: c2 },
        Criterion { id: 3, name: "classification of sign patterns", budget: secs(30), run: c3 },
        Criterion { id: 4, name: "sign fixtures", budget: secs(5), run: c4 },
        Criterion { id: 5, name: "N_gamma identity", budget: secs(30), run: c5 },
        Criterion { id: 6, name: "linear shortcut", budget: secs(30), run: c6 },
        Criterion { id: 7, name: "full pipeline", budget: secs(300), run: c7 },
        Criterion { id: 8, name: "limit arcs", budget: secs(10), run: c8 },
        Criterion { id: 9, name: "image closure vs sampling", budget: secs(60), run: c9 },
        Criterion { id: 10, name: "superfluous points", budget: secs(1), run: c10 },
        Criterion { id: 11, name: "geometry consistency", budget: secs(60), run: c11 },
        Criterion { id: 12, name: "strict transform of the lemniscate", budget: secs(60), run: c12 },
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for c in all.iter().filter(|c| filter.is_empty() || filter.contains(&c.id)) {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let took = start.elapsed();
        let res = match res {
            Ok(_) if took > c.budget => Err(format!("over budget ({:.1}s > {}s)", took.as_secs_f64(), c.budget.as_secs())),
            r => r,
        };
        let (tag, detail) = match &res {
            Ok(d) => ("PASS", d.clone()),
            Err(d) => {
                failed += 1;
                ("FAIL", d.clone())
            }
        };
        println!("criterion {:>2} {tag} {:>7.2}s  {}: {detail}", c.id, took.as_secs_f64(), c.name);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
