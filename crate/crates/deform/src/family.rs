//! Polynomial and rational connecting families and the isotopy pipeline between
//! isomorphic blowups.

use crate::analytic::{two_sided_family, Grid};
use crate::bernstein::{bernstein_fit, endpoint_correct};
use crate::ideal::{find_gamma, represent_in_ideal};
use crate::DeformError;
use blowup_core::certify::{certify_positive_with, certify_positive_xt_with, Options};
use blowup_core::rational::format_rational;
use blowup_core::{Certificate, Disk, Interval, Pair, Poly2, Poly3, PolyMatrix2, PolyMatrix2T, Rational, T};
use blowup_model::{classify, sign_distribution, strongly_regular_pair, BlowupSpec};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Stage of the connecting pipeline that produced a family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stage {
    Constant,
    Linear,
    /// `(1 - t)N + tM + μ t(1 - t) J` with `J` the quarter turn.
    Bump(#[serde(with = "blowup_core::rational::serde_rational")] Rational),
    Bernstein(u32),
}

impl Stage {
    fn label(&self) -> String {
        match self {
            Stage::Constant => "constant".into(),
            Stage::Linear => "linear".into(),
            Stage::Bump(mu) => format!("bump mu={}", format_rational(mu)),
            Stage::Bernstein(d) => format!("bernstein degree={d}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PipelineOptions {
    pub certify: Options,
    pub linear: bool,
    pub bump: bool,
    /// Bernstein degrees tried in order; empty disables the stage.
    pub schedule: Vec<u32>,
    pub grid: Grid,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { certify: Options::default(), linear: true, bump: true, schedule: vec![4, 6, 8, 12], grid: Grid::default() }
    }
}

impl PipelineOptions {
    /// Only the sampled Bernstein path.
    pub fn bernstein_only() -> Self {
        PipelineOptions { linear: false, bump: false, ..Default::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsotopyFamily {
    pub matrix: PolyMatrix2T,
    pub base_pair: Option<Pair>,
    /// Positivity of `det matrix` on the closed disk times `[0, 1]`.
    pub certificate: Certificate,
    pub endpoints: (PolyMatrix2, PolyMatrix2),
    /// `u` with `base_pair · matrix(1) = u · target`; absent when `u = 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit_factor: Option<Poly2>,
    pub provenance: Vec<String>,
}

impl IsotopyFamily {
    pub fn at(&self, t: &Rational) -> Result<PolyMatrix2, DeformError> {
        family_at(self, t)
    }

    /// The family run backwards: `t ↦ 1 - t`.
    pub fn reversed(&self) -> IsotopyFamily {
        let s = &Poly3::one() - &Poly3::var(T);
        IsotopyFamily {
            matrix: self.matrix.map(|e| e.subst(T, &s)),
            base_pair: None,
            certificate: self.certificate.clone(),
            endpoints: (self.endpoints.1.clone(), self.endpoints.0.clone()),
            unit_factor: None,
            provenance: self.provenance.iter().cloned().chain(["reversed".to_string()]).collect(),
        }
    }
}

/// Exact substitution of `t`.
pub fn family_at(fam: &IsotopyFamily, t: &Rational) -> Result<PolyMatrix2, DeformError> {
    if t < &Rational::zero() || t > &Rational::one() {
        return Err(DeformError::OutOfRange);
    }
    Ok(fam.matrix.at_t(t))
}

fn unit_time() -> Interval {
    Interval::new(Rational::zero(), Rational::one())
}

fn certify_xt(m: &PolyMatrix2T, disk: &Disk, opts: &Options) -> Certificate {
    certify_positive_xt_with(&m.det(), disk, &unit_time(), opts)
}

fn linear(n: &PolyMatrix2, m: &PolyMatrix2) -> PolyMatrix2T {
    let t = Poly3::var(T);
    n.lift().scale_poly(&(&Poly3::one() - &t)).add(&m.lift().scale_poly(&t))
}

/// Whether `det((1 - t)N + tM)` is certified positive on the closed disk times `[0, 1]`.
pub fn linear_family_check(n: &PolyMatrix2, m: &PolyMatrix2, disk: &Disk, opts: &Options) -> (bool, Certificate) {
    let c = certify_xt(&linear(n, m), disk, opts);
    (c.is_positive(), c)
}

fn bump(n: &PolyMatrix2, m: &PolyMatrix2, mu: &Rational) -> PolyMatrix2T {
    let t = Poly3::var(T);
    let c = (&t * &(&Poly3::one() - &t)).scale(mu);
    let j = PolyMatrix2T::new(Poly3::zero(), -&c, c.clone(), Poly3::zero());
    linear(n, m).add(&j)
}

const BUMPS: [(i64, i64); 10] = [(1, 2), (-1, 2), (1, 1), (-1, 1), (2, 1), (-2, 1), (4, 1), (-4, 1), (8, 1), (-8, 1)];

fn family(matrix: PolyMatrix2T, n: &PolyMatrix2, m: &PolyMatrix2, cert: Certificate, stage: Stage) -> IsotopyFamily {
    IsotopyFamily {
        matrix,
        base_pair: None,
        certificate: cert,
        endpoints: (n.clone(), m.clone()),
        unit_factor: None,
        provenance: vec![stage.label()],
    }
}

/// A polynomial family from `n` (`t = 0`) to `m` (`t = 1`) with determinant certified
/// positive on the closed disk times `[0, 1]`.
pub fn polynomial_connecting_family(
    n: &PolyMatrix2,
    m: &PolyMatrix2,
    disk: &Disk,
    opts: &PipelineOptions,
) -> Result<IsotopyFamily, DeformError> {
    for e in [n, m] {
        let c = certify_positive_with(&e.det(), disk, &opts.certify);
        if !c.is_positive() {
            return Err(DeformError::EndpointNotPositive(Box::new(c)));
        }
    }
    if n == m {
        let mat = n.lift();
        let c = certify_xt(&mat, disk, &opts.certify);
        return Ok(family(mat, n, m, c, Stage::Constant));
    }
    if opts.linear {
        let mat = linear(n, m);
        let c = certify_xt(&mat, disk, &opts.certify);
        if c.is_positive() {
            return Ok(family(mat, n, m, c, Stage::Linear));
        }
    }
    if opts.bump {
        for (p, q) in BUMPS {
            let mu = Rational::new(p.into(), q.into());
            let mat = bump(n, m, &mu);
            let c = certify_xt(&mat, disk, &opts.certify);
            if c.is_positive() {
                return Ok(family(mat, n, m, c, Stage::Bump(mu)));
            }
        }
    }
    let mut last = None;
    if !opts.schedule.is_empty() {
        let fine = 2 * *opts.schedule.iter().max().unwrap() as usize + 1;
        let grid = Grid::new(opts.grid.n.max(fine), opts.grid.nt.max(fine));
        let samples = two_sided_family(n, m, disk, grid)?;
        for &d in &opts.schedule {
            let mat = endpoint_correct(&bernstein_fit(&samples, (d, d, d)), n, m);
            let c = certify_xt(&mat, disk, &opts.certify);
            if c.is_positive() {
                return Ok(family(mat, n, m, c, Stage::Bernstein(d)));
            }
            last = Some(c);
        }
    }
    let c = last.unwrap_or(Certificate { verdict: blowup_core::Verdict::Failed, witness: None, effort: 0 });
    Err(DeformError::DegreeEscalationExhausted(Box::new(c)))
}

/// `numerator(t) / denominator`, equal to the identity at `t = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalFamily {
    pub numerator: PolyMatrix2T,
    pub denominator: Poly2,
    pub certificate: Certificate,
    pub provenance: Vec<String>,
}

impl RationalFamily {
    pub fn eval_f64(&self, p: [f64; 3]) -> [[f64; 2]; 2] {
        let g = self.denominator.eval_f64(&[p[0], p[1]]);
        self.numerator.eval_f64(&p).map(|r| r.map(|v| v / g))
    }
}

/// Connects the identity to `numerator / denominator` through matrices of rational
/// functions without poles on the closed disk.
pub fn rational_connecting_family(
    numerator: &PolyMatrix2,
    denominator: &Poly2,
    disk: &Disk,
    opts: &PipelineOptions,
) -> Result<RationalFamily, DeformError> {
    let (h, g) = if certify_positive_with(denominator, disk, &opts.certify).is_positive() {
        (numerator.clone(), denominator.clone())
    } else if certify_positive_with(&-denominator, disk, &opts.certify).is_positive() {
        (numerator.scale_poly(&Poly2::from_int(-1)), -denominator)
    } else {
        return Err(DeformError::PoleOnDomain);
    };
    let fam = polynomial_connecting_family(&PolyMatrix2::scalar(g.clone()), &h, disk, opts)?;
    Ok(RationalFamily { numerator: fam.matrix, denominator: g, certificate: fam.certificate, provenance: fam.provenance })
}

/// An isotopy from `a` to `b`: a family `K` with `K(0) = 1` up to a positive constant and
/// `a · K(1) = u · b` for a polynomial `u` certified positive on the closed disk.
pub fn connect_blowups(a: &BlowupSpec, b: &BlowupSpec, opts: &PipelineOptions) -> Result<IsotopyFamily, DeformError> {
    if !classify(a, b)? {
        return Err(DeformError::NotIsomorphic);
    }
    let (fa, fb) = (a.pair(), b.pair());
    if fa == fb {
        let id = PolyMatrix2::identity();
        let mut fam = family(id.lift(), &id, &id, Certificate::trivial(), Stage::Constant);
        fam.base_pair = Some(fa);
        return Ok(fam);
    }
    let chi = sign_distribution(a)?;
    let points: Vec<_> = chi.entries.iter().map(|(p, _)| p.clone()).collect();
    let signs: Vec<Rational> = chi.entries.iter().map(|(_, s)| Rational::from_integer((*s as i64).into())).collect();
    let srp = strongly_regular_pair(&points, &signs)?;
    let f = srp.pair.clone();
    let mut provenance = vec![format!("middle pair ({}, {})", f.0.to_text(), f.1.to_text())];
    let over = |g: &Pair, tag: &str, prov: &mut Vec<String>| -> Result<PolyMatrix2, DeformError> {
        let (q0, q1) = represent_in_ideal(&g.0, &srp)?;
        let (r0, r1) = represent_in_ideal(&g.1, &srp)?;
        let n = PolyMatrix2::new(q0, r0, q1, r1);
        if certify_positive_with(&n.det(), &a.disk, &opts.certify).is_positive() {
            prov.push(format!("{tag}: gamma=0"));
            return Ok(n);
        }
        let (gamma, _) = find_gamma(&n, &f, g, &a.disk, &points, &opts.certify)?;
        prov.push(format!("{tag}: gamma={}", format_rational(&gamma)));
        crate::ideal::n_gamma(&n, &f, g, &gamma)
    };
    let na = over(&fa, "a", &mut provenance)?;
    let nb = over(&fb, "b", &mut provenance)?;
    let p = polynomial_connecting_family(&na, &nb, &a.disk, opts)?;
    provenance.extend(p.provenance.iter().cloned());
    let det_a = na.det();
    let mut k = na.adjugate().lift().mul(&p.matrix);
    let mut unit = det_a.clone();
    if det_a.is_constant() {
        let c = det_a.constant_term().recip();
        k = k.map(|e| e.scale(&c));
        unit = Poly2::one();
    }
    let certificate = certify_xt(&k, &a.disk, &opts.certify);
    let endpoints = (k.at_t(&Rational::zero()), k.at_t(&Rational::one()));
    Ok(IsotopyFamily {
        matrix: k,
        base_pair: Some(fa),
        certificate,
        endpoints,
        unit_factor: if unit == Poly2::one() { None } else { Some(unit) },
        provenance,
    })
}
