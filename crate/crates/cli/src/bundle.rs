//! Scene bundles: the frames of one animation plus what produced them.

use blowup_core::{Pair, PolyMatrix2T, Rational};
use blowup_geometry::{render_frame, Frame, GeometryError, TorusParams};
use blowup_model::BlowupSpec;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// A matrix family acting on a base pair; reads both hand-written files and the output
/// of `connect`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyInput {
    pub matrix: PolyMatrix2T,
    #[serde(default)]
    pub base_pair: Option<Pair>,
}

impl FamilyInput {
    /// `base · K(t)`, with the input pair as base when the family has none.
    pub fn pair_at(&self, spec: &BlowupSpec, t: &Rational) -> Pair {
        let base = self.base_pair.clone().unwrap_or_else(|| spec.pair());
        self.matrix.at_t(t).apply(&base)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub certificates: Vec<String>,
}

impl Provenance {
    pub fn new(certificates: Vec<String>) -> Self {
        Provenance { tool: env!("CARGO_PKG_NAME").into(), version: env!("CARGO_PKG_VERSION").into(), certificates }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SceneBundle {
    pub schema_version: u32,
    pub torus: TorusParams,
    pub frames: Vec<Frame>,
    pub specs: Vec<BlowupSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<PolyMatrix2T>,
    pub provenance: Provenance,
}

impl SceneBundle {
    /// Frame times strictly increasing in `[0, 1]`.
    pub fn check(&self) -> bool {
        self.frames.iter().all(|f| (0.0..=1.0).contains(&f.t)) && self.frames.windows(2).all(|w| w[0].t < w[1].t)
    }
}

/// `k / (n - 1)` for `k = 0..n`; a single frame sits at 0.
pub fn frame_times(n: usize) -> Vec<Rational> {
    if n <= 1 {
        return vec![Rational::zero()];
    }
    (0..n).map(|k| Rational::new((k as i64).into(), ((n - 1) as i64).into())).collect()
}

pub fn frame_for(
    spec: &BlowupSpec,
    family: Option<&FamilyInput>,
    t: &Rational,
    tp: &TorusParams,
    resolution: u32,
) -> Result<Frame, GeometryError> {
    let pair = match family {
        Some(f) => f.pair_at(spec, t),
        None => spec.pair(),
    };
    render_frame(blowup_core::rational::to_f64(t), &pair, &spec.disk, &spec.center, tp, resolution)
}

pub fn build_bundle(
    spec: &BlowupSpec,
    family: Option<&FamilyInput>,
    times: &[Rational],
    tp: &TorusParams,
    resolution: u32,
    certificates: Vec<String>,
) -> Result<SceneBundle, GeometryError> {
    let frames = times.iter().map(|t| frame_for(spec, family, t, tp, resolution)).collect::<Result<Vec<_>, _>>()?;
    Ok(SceneBundle {
        schema_version: SCHEMA_VERSION,
        torus: tp.clone(),
        frames,
        specs: vec![spec.clone()],
        family: family.map(|f| f.matrix.clone()),
        provenance: Provenance::new(certificates),
    })
}

/// Times for a family bundle; without a family only `t = 0` is meaningful.
pub fn default_times(family: bool, frames: usize) -> Vec<Rational> {
    if family {
        frame_times(frames)
    } else {
        vec![Rational::zero()]
    }
}

/// `|cx| + |cy| + R`, an upper bound for the distance of the disk from the origin, and
/// twice that for the core radius.
pub fn default_torus(spec: &BlowupSpec) -> (Rational, Rational) {
    let c = spec.disk.center();
    let rho = num_traits::Signed::abs(&c.0) + num_traits::Signed::abs(&c.1) + &spec.disk.radius;
    let rho = if rho.is_zero() { Rational::one() } else { rho };
    let r = &rho * Rational::from_integer(2.into());
    (rho, r)
}
