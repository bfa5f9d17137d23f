//! Families of polynomial 2×2 matrices with certified positive determinant, and the
//! synthesis of isotopies between isomorphic blowups.

pub mod analytic;
pub mod bernstein;
pub mod family;
pub mod ideal;

pub use analytic::{analytic_family_samples, angle_track, two_sided_family, Grid, SampledFamily};
pub use bernstein::{bernstein_fit, endpoint_correct};
pub use family::{
    connect_blowups, family_at, linear_family_check, polynomial_connecting_family, rational_connecting_family,
    IsotopyFamily, PipelineOptions, RationalFamily, Stage,
};
pub use ideal::{apply_matrix, find_gamma, n_gamma, represent_in_ideal};

use blowup_core::Certificate;
use blowup_model::ModelError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DeformError {
    #[error("g is not f·N")]
    PairMismatch,
    #[error("polynomial is not in the ideal of the triangular pair")]
    NotInIdeal,
    #[error("no power-of-two gamma up to 2^64 gave a certified positive determinant")]
    GammaSearchExhausted,
    #[error("column vector vanishes along the tracking path")]
    StepUnderflow,
    #[error("sampled matrix with non-positive determinant at a grid node")]
    NonPositiveSample,
    #[error("no certified family up to the last degree of the schedule")]
    DegreeEscalationExhausted(Box<Certificate>),
    #[error("endpoint determinant is not certified positive on the closed disk")]
    EndpointNotPositive(Box<Certificate>),
    #[error("blowups are not isomorphic")]
    NotIsomorphic,
    #[error("denominator is not certified zero-free on the closed disk")]
    PoleOnDomain,
    #[error("time parameter outside [0, 1]")]
    OutOfRange,
    #[error(transparent)]
    Model(#[from] ModelError),
}
