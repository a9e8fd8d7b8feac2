//! Existence, construction and certification of spherical and hyperbolic
//! angle structures on closed triangulated surfaces with a prescribed edge
//! invariant or Delaunay invariant.
//!
//! All values are exact rational multiples of π ([`RatPi`]). Two independent
//! decision paths are provided: exhaustive subset enumeration
//! ([`feasibility`]) and an exact two-phase simplex ([`lp`]) which also
//! builds witness structures and extracts violating face subsets from dual
//! solutions.

pub mod angles;
pub mod exactnum;
pub mod feasibility;
pub mod generate;
pub mod io;
pub mod lp;
pub mod surface;

pub use angles::{
    classify_structure, classify_triangle, corner_transform, corner_transform_inverse,
    delaunay_invariant, edge_invariant, AngleStructure, AnglesError, CornerValues, EdgeFunction,
    GeometryClass, InvariantKind,
};
pub use exactnum::{NumError, RatPi, Rational};
pub use feasibility::{
    Checker, FeasibilityError, FeasibilityReport, Geometry, Method, Quantifier, Theorem, Verdict,
};
pub use surface::{Corner, FaceSubset, SurfaceError, Triangulation};
