//! Embedded blowups of a disk: specifications, regularity, exceptional fibers,
//! sign distributions, strongly regular pairs and the classification test.

pub mod classify;
pub mod spec;
pub mod strong;
pub mod triangular;

pub use classify::{classify, is_regular, reduce_pair, sign_distribution, type_count, SignDistribution};
pub use spec::{exceptional_fibers, make_spec, superfluous_points, BlowupSpec, Fiber, FiberDescription, ProjPoint};
pub use strong::{construct_strongly_regular_pair, is_strongly_regular, strongly_regular_pair, StronglyRegularPair};
pub use triangular::TriangularCenter;

use blowup_core::{PolyError, ZeroSetReport};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("declared center does not match the zero set of the pair on the closed disk")]
    CenterMismatch(Box<ZeroSetReport>),
    #[error("pair is not regular at every center point")]
    NotRegular,
    #[error("specs live on different disks or centers")]
    DomainMismatch,
    #[error("center points must be distinct")]
    DuplicatePoints,
    #[error("center is empty")]
    EmptyCenter,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}
