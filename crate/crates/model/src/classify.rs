use crate::spec::{cofactors, BlowupSpec};
use crate::ModelError;
use blowup_core::rational::sign;
use blowup_core::{jacobian, Point};
use serde::{Deserialize, Serialize};

/// `p ↦ sgn det(∂f)(p)` on the center.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignDistribution {
    /// Sorted by point.
    pub entries: Vec<(Point, i8)>,
}

impl SignDistribution {
    pub fn new(mut entries: Vec<(Point, i8)>) -> Self {
        entries.sort();
        SignDistribution { entries }
    }

    pub fn get(&self, p: &Point) -> Option<i8> {
        self.entries.iter().find(|(q, _)| q == p).map(|(_, s)| *s)
    }

    pub fn pattern(&self) -> Vec<i8> {
        self.entries.iter().map(|(_, s)| *s).collect()
    }
}

fn det_signs(spec: &BlowupSpec) -> Vec<(Point, i32)> {
    let det = jacobian(&spec.pair()).det();
    spec.center.iter().map(|p| (p.clone(), sign(&det.eval(&p.coords())))).collect()
}

/// Rank 2 Jacobian at every center point.
pub fn is_regular(spec: &BlowupSpec) -> bool {
    det_signs(spec).iter().all(|(_, s)| *s != 0)
}

pub fn sign_distribution(spec: &BlowupSpec) -> Result<SignDistribution, ModelError> {
    let s = det_signs(spec);
    if s.iter().any(|(_, v)| *v == 0) {
        return Err(ModelError::NotRegular);
    }
    Ok(SignDistribution::new(s.into_iter().map(|(p, v)| (p, v as i8)).collect()))
}

/// Divides the pair by its gcd. For a verified regular spec the gcd has no zero on the
/// closed disk, so the blowup and its sign distribution are unchanged.
pub fn reduce_pair(spec: &BlowupSpec) -> Result<BlowupSpec, ModelError> {
    if !is_regular(spec) {
        return Err(ModelError::NotRegular);
    }
    let (h, g) = cofactors(spec)?;
    if h.is_constant() {
        return Ok(spec.clone());
    }
    let mut out = spec.with_pair(g);
    if spec.is_verified() {
        out = out.verify()?;
    }
    Ok(out)
}

fn same_domain(a: &BlowupSpec, b: &BlowupSpec) -> bool {
    let mut ca = a.center.clone();
    let mut cb = b.center.clone();
    ca.sort();
    cb.sort();
    a.disk == b.disk && ca == cb
}

/// Isomorphic iff the sign distributions agree.
pub fn classify(a: &BlowupSpec, b: &BlowupSpec) -> Result<bool, ModelError> {
    if !same_domain(a, b) {
        return Err(ModelError::DomainMismatch);
    }
    Ok(sign_distribution(a)? == sign_distribution(b)?)
}

/// Number of isomorphism classes of regular blowups with the given center.
pub fn type_count(center: &[Point]) -> u128 {
    assert!(center.len() < 128, "center too large");
    1u128 << center.len()
}
