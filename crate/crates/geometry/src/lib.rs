//! Limit arcs, the solid torus picture, meshes, strict transforms and implicit equations.

pub mod implicit;
pub mod limits;
pub mod mesh;
pub mod scene;
pub mod strict;
pub mod torus;

pub use implicit::{implicitize, relative_residual};
pub use limits::{arc_angular_length, image_closure, limit_arcs, rho_function, Ext, ExtendedIntervalSet, LimitArc};
pub use mesh::{exceptional_circles, limit_arc_polyline, mesh_open_kernel, Mesh, Polyline};
pub use scene::{render_frame, ArcEntry, Frame};
pub use strict::{strict_transform_polyline, CurveLift};
pub use torus::{beta_of, iota, iota_beta, TorusParams};

use blowup_core::PolyError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("unequal multiplicities or leading forms with a common linear factor")]
    UnsupportedLimitConfiguration,
    #[error("torus parameters need 0 < rho < r and the disk inside the tube")]
    InvalidTorus,
    #[error("resultant vanishes identically")]
    DegenerateElimination,
    #[error("malformed OBJ: {0}")]
    Obj(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}
