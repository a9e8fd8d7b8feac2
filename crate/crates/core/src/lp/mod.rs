//! Exact linear programming: the simplex engine, the construction LPs for
//! hyperbolic structures, and extraction of face-subset certificates from
//! dual solutions.

mod certificate;
mod construct;
mod simplex;

use thiserror::Error;

use crate::angles::AnglesError;
use crate::feasibility::FeasibilityError;

pub use certificate::{
    extract_level_set_certificate, extract_subset_certificate, CertificateMode, DualAssignment,
    LevelSetDual, ShiftStep,
};
pub use construct::{
    build_closure_lp, build_construction_lp, build_strict_lp, construct_structure, decision_lp, lp_check,
    Construction, LpLayout,
};
pub use simplex::{simplex_solve, LpOutcome, LpProblem, Sense};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("not an infeasibility certificate: {0}")]
    NotACertificate(String),
    #[error("extracted subset does not violate its inequality: {0}")]
    VerificationFailed(String),
    #[error("internal solver error: {0}")]
    Internal(String),
    #[error(transparent)]
    Feasibility(#[from] FeasibilityError),
    #[error(transparent)]
    Angles(#[from] AnglesError),
}
