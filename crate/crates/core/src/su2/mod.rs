//! SU(2) prolongation structure over a free differential graded algebra.

mod akns;
mod context;
mod gauge;
mod identities;
mod surface;

pub use akns::{extract_pde, kdv_spec, theta_components, AknsSpec, ExtractedPde, ThetaComponents};
pub use context::{Su2Context, PSEUDOPOTENTIALS};
pub use gauge::{curvature, gauge_transform, GaugeResult};
pub use identities::{
    build_forms, decompose, verify_all, verify_identity, Correction, Decomposition, IdentityComponent,
    IdentityReport, IdentityStatus, Su2Forms, Su2Identity,
};
pub use surface::{surface_data, SurfaceData};

use thiserror::Error;

use crate::coeff::CoeffError;
use crate::forms::FormError;
use crate::jet::JetError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Su2Error {
    #[error("gauge matrix has determinant {0}, not 1")]
    NotUnimodular(String),
    #[error("alpha1^alpha2 vanishes; curvature undefined")]
    Degenerate,
    #[error("invalid input: {0}")]
    InvalidSpec(String),
    #[error("cannot extract an evolution system: {0}")]
    Extraction(String),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}
