use crate::ModelError;
use blowup_core::certify::Options;
use blowup_core::{gcd2, Disk, Pair, Point, Poly2, Rational};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

/// `Bl_U(f)` for the open disk `U`, declared center `Z` and pair `f = (f0, f1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlowupSpec {
    pub disk: Disk,
    pub center: Vec<Point>,
    pub f0: Poly2,
    pub f1: Poly2,
    #[serde(skip)]
    verified: bool,
}

impl BlowupSpec {
    /// A spec that has not been through `verify_zero_set`.
    pub fn unverified(disk: Disk, center: Vec<Point>, pair: Pair) -> Self {
        BlowupSpec { disk, center, f0: pair.0, f1: pair.1, verified: false }
    }

    pub fn pair(&self) -> Pair {
        (self.f0.clone(), self.f1.clone())
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    /// Same disk and center, new pair; the result is unverified.
    pub fn with_pair(&self, pair: Pair) -> Self {
        BlowupSpec::unverified(self.disk.clone(), self.center.clone(), pair)
    }

    /// Runs the zero-set verification on a deserialized or modified spec.
    pub fn verify(self) -> Result<Self, ModelError> {
        make_spec(self.disk, self.center, (self.f0, self.f1))
    }

    pub fn verify_with(self, opts: &Options) -> Result<Self, ModelError> {
        make_spec_with(self.disk, self.center, (self.f0, self.f1), opts)
    }
}

pub fn make_spec(disk: Disk, center: Vec<Point>, pair: Pair) -> Result<BlowupSpec, ModelError> {
    make_spec_with(disk, center, pair, &Options::default())
}

pub fn make_spec_with(disk: Disk, center: Vec<Point>, pair: Pair, opts: &Options) -> Result<BlowupSpec, ModelError> {
    let mut sorted = center.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != center.len() {
        return Err(ModelError::DuplicatePoints);
    }
    let report = blowup_core::certify::verify_zero_set_with(&pair, &disk, &center, opts);
    if !report.is_verified() {
        return Err(ModelError::CenterMismatch(Box::new(report)));
    }
    Ok(BlowupSpec { disk, center, f0: pair.0, f1: pair.1, verified: true })
}

/// A point `(a : b)` of the projective line, stored as coprime integers with the
/// first nonzero coordinate positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProjPoint {
    #[serde(with = "blowup_core::rational::serde_rational")]
    pub a: Rational,
    #[serde(with = "blowup_core::rational::serde_rational")]
    pub b: Rational,
}

impl ProjPoint {
    /// Panics if both coordinates vanish.
    pub fn new(a: Rational, b: Rational) -> Self {
        assert!(!(a.is_zero() && b.is_zero()), "(0:0) is not a projective point");
        let p = Poly2::from_terms([([1, 0], a), ([0, 1], b)]);
        let (_, prim) = p.primitive();
        let mut a = prim.coeff([1, 0]);
        let mut b = prim.coeff([0, 1]);
        if a.is_negative() || (a.is_zero() && b.is_negative()) {
            a = -a;
            b = -b;
        }
        ProjPoint { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        ProjPoint::new(Rational::from_integer(a.into()), Rational::from_integer(b.into()))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (blowup_core::rational::to_f64(&self.a), blowup_core::rational::to_f64(&self.b))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Fiber {
    FullFiber,
    SinglePoint(ProjPoint),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberDescription {
    pub fibers: Vec<(Point, Fiber)>,
}

impl FiberDescription {
    pub fn get(&self, p: &Point) -> Option<&Fiber> {
        self.fibers.iter().find(|(q, _)| q == p).map(|(_, f)| f)
    }
}

/// `f / gcd(f0, f1)`.
pub(crate) fn cofactors(spec: &BlowupSpec) -> Result<(Poly2, Pair), ModelError> {
    let h = gcd2(&spec.f0, &spec.f1)?;
    let g0 = spec.f0.div_exact(&h).expect("gcd divides");
    let g1 = spec.f1.div_exact(&h).expect("gcd divides");
    Ok((h, (g0, g1)))
}

/// Center points at which the pair divided by its gcd no longer vanishes.
pub fn superfluous_points(spec: &BlowupSpec) -> Result<Vec<Point>, ModelError> {
    let (_, g) = cofactors(spec)?;
    Ok(spec
        .center
        .iter()
        .filter(|p| {
            let c = p.coords();
            !(g.0.eval(&c).is_zero() && g.1.eval(&c).is_zero())
        })
        .cloned()
        .collect())
}

pub fn exceptional_fibers(spec: &BlowupSpec) -> Result<FiberDescription, ModelError> {
    let (_, g) = cofactors(spec)?;
    let fibers = spec
        .center
        .iter()
        .map(|p| {
            let c = p.coords();
            let (a, b) = (g.0.eval(&c), g.1.eval(&c));
            let fiber = if a.is_zero() && b.is_zero() { Fiber::FullFiber } else { Fiber::SinglePoint(ProjPoint::new(a, b)) };
            (p.clone(), fiber)
        })
        .collect();
    Ok(FiberDescription { fibers })
}

#[cfg(test)]
mod tests {
    use super::*;
    use blowup_core::{int, rat};

    fn p2(s: &str) -> Poly2 {
        s.parse().unwrap()
    }

    fn origin() -> Vec<Point> {
        vec![Point::new(int(0), int(0))]
    }

    #[test]
    fn make_spec_cases() {
        let d = Disk::centered(int(2));
        assert!(make_spec(d.clone(), origin(), (p2("x"), p2("y"))).unwrap().is_verified());
        assert!(make_spec(d.clone(), origin(), (p2("x^2"), p2("y^2"))).is_ok());
        let bad = make_spec(d.clone(), vec![Point::new(int(1), int(0))], (p2("x"), p2("y")));
        match bad {
            Err(ModelError::CenterMismatch(r)) => {
                assert_eq!(r.rejected_points.len(), 1);
                assert!(!r.extraneous_boxes.is_empty());
            }
            other => panic!("{other:?}"),
        }
        let dup = make_spec(d, vec![Point::new(int(0), int(0)); 2], (p2("x"), p2("y")));
        assert_eq!(dup, Err(ModelError::DuplicatePoints));
    }

    #[test]
    fn proj_point_normalization() {
        assert_eq!(ProjPoint::new(int(-4), int(-2)), ProjPoint::from_ints(2, 1));
        assert_eq!(ProjPoint::new(rat(1, 3), rat(1, 2)), ProjPoint::from_ints(2, 3));
        assert_eq!(ProjPoint::new(int(0), int(-5)), ProjPoint::from_ints(0, 1));
    }

    #[test]
    fn superfluous_and_fibers() {
        let d = Disk::centered(int(2));
        let s = make_spec(d.clone(), origin(), (p2("2*(x^2 + y^2)"), p2("(1 + x)*(x^2 + y^2)"))).unwrap();
        assert_eq!(superfluous_points(&s).unwrap(), origin());
        let f = exceptional_fibers(&s).unwrap();
        assert_eq!(f.get(&origin()[0]), Some(&Fiber::SinglePoint(ProjPoint::from_ints(2, 1))));

        let m = make_spec(d.clone(), origin(), (p2("x"), p2("y"))).unwrap();
        assert!(superfluous_points(&m).unwrap().is_empty());
        assert_eq!(exceptional_fibers(&m).unwrap().fibers[0].1, Fiber::FullFiber);

        let two = vec![Point::new(int(1), int(0)), Point::new(int(-1), int(0))];
        let c = make_spec(d, two.clone(), (p2("x^2 - 1"), p2("x*y"))).unwrap();
        for p in &two {
            assert_eq!(exceptional_fibers(&c).unwrap().get(p), Some(&Fiber::FullFiber));
        }
    }

    #[test]
    fn json_shape() {
        let s = make_spec(Disk::centered(int(2)), origin(), (p2("x"), p2("y"))).unwrap();
        let v: serde_json::Value = serde_json::to_value(&s).unwrap();
        assert_eq!(v["disk"]["radius"], "2");
        assert_eq!(v["center"][0][0], "0");
        let text = r#"{"disk":{"center":[0,0],"radius":2},"center":[[0,0]],"f0":"x","f1":"y"}"#;
        let back: BlowupSpec = serde_json::from_str(text).unwrap();
        assert!(!back.is_verified());
        assert_eq!(back.verify().unwrap(), s);
    }
}
