//! Prime-degree isogenies (Vélu), explicit curve isomorphisms, the universal
//! 3-isogeny family, dual kernels and pointed isogeny graphs.

mod dual;
mod family;
mod graph;
mod iso;
mod velu;

use crate::curve::CurveError;
use crate::field::FieldError;

pub use dual::{all_lines, dual_kernel, stable_lines};
pub use family::family_e3;
pub use graph::{
    audit_arm, audit_basis, build_pointed_graphs, enumerate_source_curves, locate_arm, Arm, ArmRecord, AuditFailure,
    AuditTally, GraphBuild, GraphOptions, GraphRecord, LocatedArm, PointedGraph, SourceFamily,
};
pub use iso::{curves_isomorphic, to_short_form, CurveIsomorphism};
pub use velu::{velu_quotient, Isogeny, MAX_DEGREE};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IsogenyError {
    #[error("kernel point does not have prime order")]
    NotPrimeOrder,
    #[error("Vélu codomain is singular")]
    SingularCodomain,
    #[error("parameters give a singular curve")]
    SingularParameters,
    #[error("capability exceeded: {0}")]
    Capability(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Field(#[from] FieldError),
}
