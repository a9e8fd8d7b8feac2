//! Turning dual solutions of the construction LPs into violating face subsets.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use super::LpError;
use crate::angles::{EdgeFunction, InvariantKind};
use crate::exactnum::{RatPi, Rational};
use crate::feasibility::{evaluate_condition, Theorem};
use crate::surface::{FaceSubset, Triangulation};

/// How strongly a dual solution certifies infeasibility.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateMode {
    /// Positive objective: even the closure is empty.
    Closure,
    /// Zero objective with a nonzero dual: the closure may be nonempty but
    /// the open set is empty.
    Open,
}

/// Dual variables of the edge-invariant LP, one per face row and one per
/// edge row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualAssignment {
    pub y_face: Vec<Rational>,
    pub y_edge: Vec<Rational>,
}

/// One application of the zero-set shift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftStep {
    /// `X = {f : y_f = 0}` before the shift.
    pub zero_set: FaceSubset,
    /// `a = max{y_f : f ∉ X}`, always negative.
    pub amount: Rational,
    /// `(|X| − |F|) + Σ_{e∉E(X)} D(e)`; the objective changes by `amount · gain`.
    pub gain: Rational,
    pub next: DualAssignment,
}

impl DualAssignment {
    /// Splits LP row duals laid out as face rows followed by edge rows.
    pub fn from_rows(t: &Triangulation, y: &[Rational]) -> Result<Self, LpError> {
        let (nf, ne) = (t.num_faces(), t.num_edges());
        if y.len() < nf + ne {
            return Err(LpError::DimensionMismatch(format!(
                "{} dual values for {} face and {ne} edge rows",
                y.len(),
                nf
            )));
        }
        Ok(DualAssignment { y_face: y[..nf].to_vec(), y_edge: y[nf..nf + ne].to_vec() })
    }

    /// `Σ_f y_f + Σ_e D(e) y_e`, in units of π.
    pub fn objective(&self, d: &EdgeFunction) -> Rational {
        let faces: Rational = self.y_face.iter().sum();
        let edges: Rational = self.y_edge.iter().zip(d.values()).map(|(y, v)| y * v.coeff()).sum();
        faces + edges
    }

    /// `3Σy_f + 2Σy_e`.
    pub fn normalization(&self) -> Rational {
        let three = Rational::from_integer(3.into());
        let two = Rational::from_integer(2.into());
        three * self.y_face.iter().sum::<Rational>() + two * self.y_edge.iter().sum::<Rational>()
    }

    /// `y_f ≤ 0` for every face and `y_f + y_e ≤ 0` whenever `e` is a side of `f`.
    pub fn is_feasible(&self, t: &Triangulation) -> bool {
        self.y_face.len() == t.num_faces()
            && self.y_edge.len() == t.num_edges()
            && self.y_face.iter().all(|v| !v.is_positive())
            && t.faces().iter().enumerate().all(|(f, edges)| {
                edges.iter().all(|&e| !(&self.y_face[f] + &self.y_edge[e]).is_positive())
            })
    }

    pub fn is_zero(&self) -> bool {
        self.y_face.iter().chain(&self.y_edge).all(Zero::is_zero)
    }

    pub fn zero_set(&self) -> FaceSubset {
        FaceSubset::from_faces((0..self.y_face.len()).filter(|&f| self.y_face[f].is_zero()))
    }

    /// Raises every nonzero face dual by `−a` and lowers every edge dual
    /// outside `E(X)` by the same amount. `None` once all face duals are 0.
    pub fn shift(&self, t: &Triangulation, d: &EdgeFunction) -> Option<ShiftStep> {
        let zero_set = self.zero_set();
        let amount = self.y_face.iter().filter(|v| !v.is_zero()).max()?.clone();
        let covered = t.edge_set(&zero_set);
        let mut next = self.clone();
        for (f, v) in next.y_face.iter_mut().enumerate() {
            if !zero_set.contains(f) {
                *v -= &amount;
            }
        }
        let mut gain = Rational::from_integer((zero_set.len() as i64 - t.num_faces() as i64).into());
        for (e, v) in next.y_edge.iter_mut().enumerate() {
            if !covered.contains(&e) {
                *v += &amount;
                gain += d.values()[e].coeff();
            }
        }
        Some(ShiftStep { zero_set, amount, gain, next })
    }
}

/// Walks the zero-set shift from `y` until it meets a subset `X` whose
/// inequality fails, then re-verifies that subset exactly.
///
/// With `z(y) > 0` the returned subset violates the closure condition
/// (`L7`); with `z(y) = 0` and `y ≠ 0` it violates the strict hyperbolic
/// condition (`T2`). Every shift taken has negative gain and so strictly
/// raises `z`, while `y_f ≡ 0` forces `z ≤ 0`; the walk therefore stops at a
/// violated subset before the face duals run out.
pub fn extract_subset_certificate(
    t: &Triangulation,
    d: &EdgeFunction,
    y: &DualAssignment,
) -> Result<(FaceSubset, CertificateMode), LpError> {
    if d.kind != InvariantKind::Edge || d.len() != t.num_edges() {
        return Err(LpError::NotACertificate("expected an edge invariant on every edge".into()));
    }
    if !y.is_feasible(t) {
        return Err(LpError::NotACertificate("dual assignment is infeasible".into()));
    }
    let mut z = y.objective(d);
    let mode = if z.is_positive() {
        CertificateMode::Closure
    } else if z.is_zero() && !y.is_zero() {
        CertificateMode::Open
    } else {
        return Err(LpError::NotACertificate(format!("objective {z} is not positive")));
    };

    let mut current = y.clone();
    while let Some(step) = current.shift(t, d) {
        let violated = match mode {
            CertificateMode::Closure => step.gain.is_positive(),
            CertificateMode::Open => !step.gain.is_negative(),
        };
        if violated {
            let theorem = match mode {
                CertificateMode::Closure => Theorem::L7,
                CertificateMode::Open => Theorem::T2,
            };
            let cond = evaluate_condition(t, theorem, d, &step.zero_set)?;
            if cond.holds {
                return Err(LpError::VerificationFailed(format!(
                    "{theorem} holds on {:?}",
                    step.zero_set.members()
                )));
            }
            return Ok((step.zero_set, mode));
        }
        let next_z = step.next.objective(d);
        if !step.next.is_feasible(t) || next_z < z || next_z != &z + &step.amount * &step.gain {
            return Err(LpError::VerificationFailed("shift step broke its invariants".into()));
        }
        z = next_z;
        current = step.next;
    }
    Err(LpError::VerificationFailed(
        "all face duals reached zero without a violated subset".into(),
    ))
}

/// Dual variables of the Delaunay-invariant LP after the change of
/// variables `w_f = u_f + Σ_{slots of f} v_e`, `s_e = −2 v_e`, under which the
/// objective reads `Σ_f w_f + Σ_e (1 − ½𝒟(e)) s_e` and the corner columns
/// read `w_f + s_e ≤ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSetDual {
    pub w_face: Vec<Rational>,
    pub s_edge: Vec<Rational>,
}

impl LevelSetDual {
    /// From LP row duals laid out as face rows followed by edge rows.
    pub fn from_rows(t: &Triangulation, y: &[Rational]) -> Result<Self, LpError> {
        let raw = DualAssignment::from_rows(t, y)?;
        let w_face = t
            .faces()
            .iter()
            .zip(&raw.y_face)
            .map(|(edges, u)| edges.iter().fold(u.clone(), |acc, &e| acc + &raw.y_edge[e]))
            .collect();
        let minus_two = Rational::from_integer((-2).into());
        let s_edge = raw.y_edge.iter().map(|v| v * &minus_two).collect();
        Ok(LevelSetDual { w_face, s_edge })
    }

    pub fn objective(&self, weights: &[RatPi]) -> Rational {
        let faces: Rational = self.w_face.iter().sum();
        let edges: Rational = self.s_edge.iter().zip(weights).map(|(s, w)| s * w.coeff()).sum();
        faces + edges
    }

    pub fn normalization(&self) -> Rational {
        let three = Rational::from_integer(3.into());
        let two = Rational::from_integer(2.into());
        three * self.w_face.iter().sum::<Rational>() + two * self.s_edge.iter().sum::<Rational>()
    }

    pub fn is_zero(&self) -> bool {
        self.w_face.iter().chain(&self.s_edge).all(Zero::is_zero)
    }

    /// Corner columns `w_f + s_e ≤ 0` and slack columns `w_f + ½Σ s_e ≤ 0`.
    pub fn is_feasible(&self, t: &Triangulation) -> bool {
        let half = Rational::new(1.into(), 2.into());
        self.w_face.len() == t.num_faces()
            && self.s_edge.len() == t.num_edges()
            && t.faces().iter().enumerate().all(|(f, edges)| {
                let w = &self.w_face[f];
                let slots: Rational = edges.iter().map(|&e| &self.s_edge[e]).sum();
                edges.iter().all(|&e| !(w + &self.s_edge[e]).is_positive())
                    && !(w + slots * &half).is_positive()
            })
    }
}

/// Finds a violating subset for a Delaunay-invariant problem among the
/// upper level sets `{f : w_f ≥ v}`, `v > 0`, of the face duals.
///
/// For weights in `(0, π)` the objective is bounded by the integral over
/// `τ ≥ 0` of `|X_τ| − Σ_{E(X_τ)} w(e)`, so a positive (or zero, in open mode)
/// objective forces some level set to violate the inequality.
pub fn extract_level_set_certificate(
    t: &Triangulation,
    dd: &EdgeFunction,
    y: &LevelSetDual,
) -> Result<(FaceSubset, CertificateMode), LpError> {
    if dd.kind != InvariantKind::Delaunay || dd.len() != t.num_edges() {
        return Err(LpError::NotACertificate("expected a Delaunay invariant on every edge".into()));
    }
    if !y.is_feasible(t) {
        return Err(LpError::NotACertificate("dual assignment is infeasible".into()));
    }
    let weights = Theorem::T4.weights(dd);
    let z = y.objective(&weights);
    let mode = if z.is_positive() {
        CertificateMode::Closure
    } else if z.is_zero() && !y.is_zero() {
        CertificateMode::Open
    } else {
        return Err(LpError::NotACertificate(format!("objective {z} is not positive")));
    };

    let levels: BTreeSet<&Rational> = y.w_face.iter().filter(|w| w.is_positive()).collect();
    let mut best: Option<(Rational, FaceSubset)> = None;
    for level in levels.into_iter().rev() {
        let x = FaceSubset::from_faces((0..t.num_faces()).filter(|&f| &y.w_face[f] >= level));
        let covered: Rational = t.edge_set(&x).iter().map(|&e| weights[e].coeff()).sum();
        let excess = Rational::from_integer((x.len() as i64).into()) - covered;
        if best.as_ref().is_none_or(|(b, _)| excess > *b) {
            best = Some((excess, x));
        }
    }
    let Some((excess, x)) = best else {
        return Err(LpError::VerificationFailed("no positive face dual".into()));
    };
    let violated = match mode {
        CertificateMode::Closure => excess.is_positive(),
        CertificateMode::Open => !excess.is_negative(),
    };
    let cond = evaluate_condition(t, Theorem::T4, dd, &x)?;
    if !violated || cond.holds {
        return Err(LpError::VerificationFailed(format!(
            "best level set {:?} has excess {excess}",
            x.members()
        )));
    }
    Ok((x, mode))
}
