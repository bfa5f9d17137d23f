//! The solid torus picture of the disk times the projective line.

use crate::GeometryError;
use blowup_core::rational::{to_f64, serde_rational};
use blowup_core::{Disk, Rational};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusParams {
    /// Tube radius.
    #[serde(with = "serde_rational")]
    pub rho: Rational,
    /// Distance of the tube's core circle from the axis.
    #[serde(with = "serde_rational")]
    pub r: Rational,
}

impl TorusParams {
    pub fn new(rho: Rational, r: Rational) -> Result<Self, GeometryError> {
        if !(rho > Rational::zero() && rho < r) {
            return Err(GeometryError::InvalidTorus);
        }
        Ok(TorusParams { rho, r })
    }

    /// The open disk must lie in the open disk of radius `rho` about the origin.
    pub fn check_disk(&self, disk: &Disk) -> Result<(), GeometryError> {
        let c = disk.center();
        let slack = &self.rho - &disk.radius;
        if slack >= Rational::zero() && &c.0 * &c.0 + &c.1 * &c.1 <= &slack * &slack {
            Ok(())
        } else {
            Err(GeometryError::InvalidTorus)
        }
    }

    pub fn r_f64(&self) -> f64 {
        to_f64(&self.r)
    }

    pub fn rho_f64(&self) -> f64 {
        to_f64(&self.rho)
    }

    /// `u² + (r - √(v² + w²))² - ρ²`, negative inside the open solid torus.
    pub fn inside_value(&self, q: [f64; 3]) -> f64 {
        let d = self.r_f64() - q[1].hypot(q[2]);
        q[0] * q[0] + d * d - self.rho_f64() * self.rho_f64()
    }
}

/// `((x, y), (x0 : x1)) ↦ (x, (r - y)(x0² - x1²)/(x0² + x1²), (r - y) 2x0x1/(x0² + x1²))`.
pub fn iota(tp: &TorusParams, p: [f64; 2], q: (f64, f64)) -> [f64; 3] {
    let s = tp.r_f64() - p[1];
    let n = q.0 * q.0 + q.1 * q.1;
    [p[0], s * (q.0 * q.0 - q.1 * q.1) / n, s * 2.0 * q.0 * q.1 / n]
}

/// The same map in the doubled angle: `(x, (r - y) cos β, (r - y) sin β)`.
pub fn iota_beta(tp: &TorusParams, p: [f64; 2], beta: f64) -> [f64; 3] {
    let s = tp.r_f64() - p[1];
    [p[0], s * beta.cos(), s * beta.sin()]
}

/// `β = 2·atan2(x1, x0)`, the angle of `ι` on the fiber over a point.
pub fn beta_of(q: (f64, f64)) -> f64 {
    let b = 2.0 * q.1.atan2(q.0);
    if b > std::f64::consts::PI {
        b - 2.0 * std::f64::consts::PI
    } else if b <= -std::f64::consts::PI {
        b + 2.0 * std::f64::consts::PI
    } else {
        b
    }
}
