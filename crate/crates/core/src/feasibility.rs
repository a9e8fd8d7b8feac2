//! Exhaustive subset-condition checkers.
//!
//! Each existence criterion is a family of linear inequalities indexed by
//! face subsets `X`. The checkers walk every subset in Gray-code order,
//! keep `Σ_{e∈E(X)} w(e)` up to date in O(1) per step, and report the
//! subset with the smallest margin. Arithmetic is exact: weights are scaled
//! to a common denominator and summed as `i128` when they fit, `BigInt`
//! otherwise.

use std::fmt;
use std::ops::{Add, AddAssign, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::angles::{EdgeFunction, InvariantKind};
use crate::exactnum::RatPi;
use crate::surface::{FaceSubset, SurfaceError, Triangulation, DEFAULT_ENUMERATION_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FeasibilityError {
    #[error("{theorem}: value {value} on edge {edge} is outside the admissible range {range}")]
    RangeViolation { theorem: Theorem, edge: usize, value: RatPi, range: &'static str },
    #[error("{theorem} expects a {expected:?} invariant, got {found:?}")]
    KindMismatch { theorem: Theorem, expected: InvariantKind, found: InvariantKind },
    #[error("edge function has {found} values but the surface has {expected} edges")]
    LengthMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// The target geometry of an existence question.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Hyperbolic,
    Spherical,
}

/// Which characterization a report was produced for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Theorem {
    /// Spherical structures with prescribed edge invariant `D: E → (0, π)`.
    T1,
    /// Hyperbolic structures with prescribed edge invariant `D: E → (0, 2π)`.
    T2,
    /// Spherical structures with prescribed Delaunay invariant `𝒟: E → (−2π, 2π)`.
    T3,
    /// Hyperbolic structures with prescribed Delaunay invariant `𝒟: E → (0, 2π)`.
    T4,
    /// Closure of the hyperbolic edge-invariant set, `D: E → [0, 2π]`.
    L7,
}

impl Theorem {
    pub fn for_problem(geometry: Geometry, kind: InvariantKind) -> Theorem {
        match (geometry, kind) {
            (Geometry::Spherical, InvariantKind::Edge) => Theorem::T1,
            (Geometry::Hyperbolic, InvariantKind::Edge) => Theorem::T2,
            (Geometry::Spherical, InvariantKind::Delaunay) => Theorem::T3,
            (Geometry::Hyperbolic, InvariantKind::Delaunay) => Theorem::T4,
        }
    }

    pub fn kind(self) -> InvariantKind {
        match self {
            Theorem::T1 | Theorem::T2 | Theorem::L7 => InvariantKind::Edge,
            Theorem::T3 | Theorem::T4 => InvariantKind::Delaunay,
        }
    }

    pub fn quantifier(self) -> Quantifier {
        match self {
            Theorem::T1 | Theorem::T4 => Quantifier::NonemptySubsets,
            Theorem::T2 | Theorem::T3 | Theorem::L7 => Quantifier::ProperSubsetsInclEmpty,
        }
    }

    fn is_strict(self) -> bool {
        self != Theorem::L7
    }

    /// Checks the invariant kind and the per-edge admissible interval.
    pub fn check_domain(self, t: &Triangulation, f: &EdgeFunction) -> Result<(), FeasibilityError> {
        if f.kind != self.kind() {
            return Err(FeasibilityError::KindMismatch {
                theorem: self,
                expected: self.kind(),
                found: f.kind,
            });
        }
        if f.len() != t.num_edges() {
            return Err(FeasibilityError::LengthMismatch { expected: t.num_edges(), found: f.len() });
        }
        let (lo, hi, range) = match self {
            Theorem::T1 => (0, 1, "(0, π)"),
            Theorem::T2 | Theorem::T4 => (0, 2, "(0, 2π)"),
            Theorem::T3 => (-2, 2, "(−2π, 2π)"),
            Theorem::L7 => (0, 2, "[0, 2π]"),
        };
        let (lo, hi) = (RatPi::from_int(lo), RatPi::from_int(hi));
        for (edge, v) in f.values().iter().enumerate() {
            let ok = if self.is_strict() { v.in_open(&lo, &hi) } else { v.in_closed(&lo, &hi) };
            if !ok {
                return Err(FeasibilityError::RangeViolation {
                    theorem: self,
                    edge,
                    value: v.clone(),
                    range,
                });
            }
        }
        Ok(())
    }

    /// The per-edge weight `w` entering the subset inequalities:
    /// `D` itself for edge invariants, `π − ½𝒟` for Delaunay invariants.
    pub fn weights(self, f: &EdgeFunction) -> Vec<RatPi> {
        match self.kind() {
            InvariantKind::Edge => f.values().to_vec(),
            InvariantKind::Delaunay => f.delaunay_to_edge().values().to_vec(),
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantifier {
    /// Every `X ⊆ F` with `X ≠ ∅`.
    NonemptySubsets,
    /// Every `X ⊊ F`, including `∅`.
    ProperSubsetsInclEmpty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Feasible,
    Infeasible,
    /// The closure is nonempty but the open set is empty: some inequality
    /// holds only with equality, or some value sits on the boundary.
    ClosureOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Enumerate,
    Lp,
}

/// Outcome of one existence check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FeasibilityReport {
    pub verdict: Verdict,
    pub theorem: Theorem,
    pub quantifier: Quantifier,
    pub method: Method,
    /// A subset violating its inequality; present iff the verdict is infeasible.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<FaceSubset>,
    /// Minimum margin over the checked subsets (enumeration), or the margin
    /// of the certificate (LP). Positive means the inequality holds strictly.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slack: Option<RatPi>,
    /// The subset attaining `slack`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tightest: Option<FaceSubset>,
}

impl FeasibilityReport {
    /// True when the checked set (or its closure, for `L7`) is nonempty.
    pub fn is_feasible(&self) -> bool {
        self.verdict != Verdict::Infeasible
    }
}

/// Both sides of one subset inequality, oriented so that it reads
/// `larger > smaller` (`≥` for `L7`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetCondition {
    pub larger: RatPi,
    pub smaller: RatPi,
    pub holds: bool,
}

impl SubsetCondition {
    pub fn margin(&self) -> RatPi {
        &self.larger - &self.smaller
    }
}

/// Evaluates the inequality of `theorem` on a single subset `x`.
///
/// * `T1`, `T4`: `π|X| < Σ_{e∈E(X)} w(e)`
/// * `T2`, `T3`: `π(|F|−|X|) > Σ_{e∉E(X)} w(e)`
/// * `L7`: `π(|F|−|X|) ≥ Σ_{e∉E(X)} w(e)`
pub fn evaluate_condition(
    t: &Triangulation,
    theorem: Theorem,
    f: &EdgeFunction,
    x: &FaceSubset,
) -> Result<SubsetCondition, FeasibilityError> {
    t.check_subset(x)?;
    if f.len() != t.num_edges() {
        return Err(FeasibilityError::LengthMismatch { expected: t.num_edges(), found: f.len() });
    }
    let w = theorem.weights(f);
    let inside = t.edge_set(x);
    let size = x.len() as i64;
    let (larger, smaller) = match theorem.quantifier() {
        Quantifier::NonemptySubsets => {
            (inside.iter().map(|&e| &w[e]).sum(), RatPi::from_int(size))
        }
        Quantifier::ProperSubsetsInclEmpty => {
            let outside: RatPi =
                (0..t.num_edges()).filter(|e| !inside.contains(e)).map(|e| &w[e]).sum();
            (RatPi::from_int(t.num_faces() as i64 - size), outside)
        }
    };
    let holds = if theorem.is_strict() { larger > smaller } else { larger >= smaller };
    Ok(SubsetCondition { larger, smaller, holds })
}

/// Subset-enumeration checker with a configurable face cap.
#[derive(Debug, Clone, Copy)]
pub struct Checker {
    cap: usize,
}

impl Default for Checker {
    fn default() -> Self {
        Checker { cap: DEFAULT_ENUMERATION_CAP }
    }
}

impl Checker {
    pub fn with_cap(cap: usize) -> Self {
        Checker { cap }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn spherical_edge(&self, t: &Triangulation, d: &EdgeFunction) -> Result<FeasibilityReport, FeasibilityError> {
        self.check(t, Theorem::T1, d)
    }

    pub fn hyperbolic_edge(&self, t: &Triangulation, d: &EdgeFunction) -> Result<FeasibilityReport, FeasibilityError> {
        self.check(t, Theorem::T2, d)
    }

    pub fn spherical_delaunay(&self, t: &Triangulation, dd: &EdgeFunction) -> Result<FeasibilityReport, FeasibilityError> {
        self.check(t, Theorem::T3, dd)
    }

    pub fn hyperbolic_delaunay(&self, t: &Triangulation, dd: &EdgeFunction) -> Result<FeasibilityReport, FeasibilityError> {
        self.check(t, Theorem::T4, dd)
    }

    pub fn closure(&self, t: &Triangulation, d: &EdgeFunction) -> Result<FeasibilityReport, FeasibilityError> {
        self.check(t, Theorem::L7, d)
    }

    pub fn check(
        &self,
        t: &Triangulation,
        theorem: Theorem,
        f: &EdgeFunction,
    ) -> Result<FeasibilityReport, FeasibilityError> {
        theorem.check_domain(t, f)?;
        if theorem == Theorem::T3 {
            // spherical 𝒟 is the hyperbolic problem for D = π − ½𝒟
            let report = self.check(t, Theorem::T2, &f.delaunay_to_edge())?;
            return Ok(FeasibilityReport { theorem: Theorem::T3, ..report });
        }
        // Size check before any enumeration work.
        t.enumerate_subsets(true, true, self.cap)?;

        let weights = theorem.weights(f);
        let base = match theorem.quantifier() {
            Quantifier::NonemptySubsets => ScanBase::Inside,
            Quantifier::ProperSubsetsInclEmpty => ScanBase::Outside,
        };
        let (margin, mask) = scan_scaled(t, &weights, base);
        let tightest = FaceSubset::from_mask(mask);
        let verdict = if theorem.is_strict() {
            if margin.is_positive() { Verdict::Feasible } else { Verdict::Infeasible }
        } else if margin.is_negative() {
            Verdict::Infeasible
        } else if margin.is_positive() && open_range(f) {
            Verdict::Feasible
        } else {
            Verdict::ClosureOnly
        };
        Ok(FeasibilityReport {
            verdict,
            theorem,
            quantifier: theorem.quantifier(),
            method: Method::Enumerate,
            certificate: (verdict == Verdict::Infeasible).then(|| tightest.clone()),
            slack: Some(margin),
            tightest: Some(tightest),
        })
    }
}

/// Every value strictly inside `(0, 2π)`; otherwise the open hyperbolic set
/// is empty even when its closure is not.
pub(crate) fn open_range(d: &EdgeFunction) -> bool {
    let (lo, hi) = (RatPi::zero(), RatPi::from_int(2));
    d.values().iter().all(|v| v.in_open(&lo, &hi))
}

pub fn check_spherical_edge(t: &Triangulation, d: &EdgeFunction) -> Result<FeasibilityReport, FeasibilityError> {
    Checker::default().spherical_edge(t, d)
}

pub fn check_hyperbolic_edge(t: &Triangulation, d: &EdgeFunction) -> Result<FeasibilityReport, FeasibilityError> {
    Checker::default().hyperbolic_edge(t, d)
}

pub fn check_spherical_delaunay(t: &Triangulation, dd: &EdgeFunction) -> Result<FeasibilityReport, FeasibilityError> {
    Checker::default().spherical_delaunay(t, dd)
}

pub fn check_hyperbolic_delaunay(t: &Triangulation, dd: &EdgeFunction) -> Result<FeasibilityReport, FeasibilityError> {
    Checker::default().hyperbolic_delaunay(t, dd)
}

pub fn check_closure(t: &Triangulation, d: &EdgeFunction) -> Result<FeasibilityReport, FeasibilityError> {
    Checker::default().closure(t, d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ScanBase {
    /// margin = Σ_{E(X)} w − |X|, over nonempty X (full set included)
    Inside,
    /// margin = (|F| − |X|) − Σ_{E∖E(X)} w, over proper X (empty set included)
    Outside,
}

/// Returns the minimal margin (in π-units) and the mask attaining it.
fn scan_scaled(t: &Triangulation, weights: &[RatPi], base: ScanBase) -> (RatPi, u64) {
    let denom = weights.iter().fold(BigInt::one(), |l, w| l.lcm(w.denom()));
    let scaled: Vec<BigInt> = weights.iter().map(|w| w.numer() * (&denom / w.denom())).collect();
    let small: Option<Vec<i128>> = scaled.iter().map(|n| n.to_i64().map(i128::from)).collect();
    let (margin, mask): (BigInt, u64) = match (small, denom.to_i64()) {
        (Some(ws), Some(unit)) => {
            let (m, mask) = scan(t, &ws, i128::from(unit), base);
            (BigInt::from(m), mask)
        }
        _ => scan(t, &scaled, denom.clone(), base),
    };
    (RatPi::from_coeff(BigRational::new(margin, denom)), mask)
}

fn scan<T>(t: &Triangulation, weights: &[T], unit: T, base: ScanBase) -> (T, u64)
where
    T: Clone + Ord + Zero + for<'a> AddAssign<&'a T> + for<'a> SubAssign<&'a T>,
    for<'a> &'a T: Add<&'a T, Output = T> + Sub<&'a T, Output = T>,
{
    let n = t.num_faces();
    let full: u64 = if n == 64 { u64::MAX } else { (1 << n) - 1 };
    let total = weights.iter().fold(T::zero(), |mut acc, w| {
        acc += w;
        acc
    });
    let mut offset = T::zero();
    if base == ScanBase::Outside {
        for _ in 0..n {
            offset += &unit;
        }
        offset -= &total;
    }

    let mut slot_count = vec![0u8; t.num_edges()];
    let mut inside = T::zero();
    let mut size_term = T::zero();
    let mut mask = 0u64;
    let mut best: Option<(T, u32, u64)> = None;

    let mut consider = |mask: u64, inside: &T, size_term: &T| {
        let qualifies = match base {
            ScanBase::Inside => mask != 0,
            ScanBase::Outside => mask != full,
        };
        if !qualifies {
            return;
        }
        let margin = &(&offset + inside) - size_term;
        let key = (margin, mask.count_ones(), mask);
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
    };

    consider(mask, &inside, &size_term);
    for step in 1..=full {
        let face = step.trailing_zeros() as usize;
        let adding = mask >> face & 1 == 0;
        mask ^= 1 << face;
        for &e in &t.faces()[face] {
            if adding {
                if slot_count[e] == 0 {
                    inside += &weights[e];
                }
                slot_count[e] += 1;
            } else {
                slot_count[e] -= 1;
                if slot_count[e] == 0 {
                    inside -= &weights[e];
                }
            }
        }
        if adding {
            size_term += &unit;
        } else {
            size_term -= &unit;
        }
        consider(mask, &inside, &size_term);
    }
    let (margin, _, mask) = best.expect("at least one qualifying subset");
    (margin, mask)
}
