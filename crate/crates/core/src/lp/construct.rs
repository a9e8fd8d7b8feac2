//! Construction LPs for hyperbolic structures with a prescribed invariant,
//! and the spherical problems reduced to them through the corner transform.
//!
//! Corner angles are written `x_c = a_c + ε` with `a_c ≥ 0`, and each face
//! gets a slack `t_f ≥ 0`. All quantities are in units of π:
//!
//! ```text
//! face f:        Σ_{c∈f} a_c + t_f + 3ε = 1
//! edge e:        a_i + a_i' + 2ε = D(e)                 (edge invariant)
//! edge e:        Σ_{sides c} (a_j + a_k − a_c) + 2ε = 𝒟(e)   (Delaunay)
//! maximize ε
//! ```
//!
//! The face rows admit `Σx = π` when `t_f = 0`, so a positive optimum does
//! not by itself give a hyperbolic structure: on the tetrahedron with
//! `D ≡ 2π/3` the optimum `ε = π/3` is the Euclidean point. When the witness
//! has a Euclidean face the problem is re-solved with `4ε` in the face rows,
//! which forces `Σx ≤ π − ε`; that LP decides existence exactly.

use num_traits::{One, Signed, Zero};

use super::certificate::{
    extract_level_set_certificate, extract_subset_certificate, CertificateMode, DualAssignment,
    LevelSetDual,
};
use super::simplex::{simplex_solve, LpOutcome, LpProblem, Sense};
use super::LpError;
use crate::angles::{
    classify_structure, corner_transform, corner_transform_inverse, delaunay_invariant,
    edge_invariant, AngleStructure, CornerValues, EdgeFunction, GeometryClass, InvariantKind,
};
use crate::exactnum::{RatPi, Rational};
use crate::feasibility::{
    evaluate_condition, open_range, FeasibilityError, FeasibilityReport, Geometry, Method, Theorem, Verdict,
};
use crate::surface::{Corner, FaceSubset, Triangulation};

/// Column and row positions of a construction LP.
///
/// Columns: `a_c` at `c.index()`, then `t_f`, then `ε` (if present).
/// Rows: faces, then edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LpLayout {
    pub faces: usize,
    pub edges: usize,
    pub has_epsilon: bool,
}

impl LpLayout {
    fn new(t: &Triangulation, has_epsilon: bool) -> Self {
        LpLayout { faces: t.num_faces(), edges: t.num_edges(), has_epsilon }
    }

    pub fn corner_col(&self, c: Corner) -> usize {
        c.index()
    }

    pub fn slack_col(&self, f: usize) -> usize {
        3 * self.faces + f
    }

    pub fn epsilon_col(&self) -> Option<usize> {
        self.has_epsilon.then_some(4 * self.faces)
    }

    pub fn num_cols(&self) -> usize {
        4 * self.faces + usize::from(self.has_epsilon)
    }

    pub fn face_row(&self, f: usize) -> usize {
        f
    }

    pub fn edge_row(&self, e: usize) -> usize {
        self.faces + e
    }

    pub fn num_rows(&self) -> usize {
        self.faces + self.edges
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Form {
    Closure,
    Standard,
    Strict,
}

/// The invariant a hyperbolic structure must carry so that the target
/// structure exists, per theorem:
///
/// * hyperbolic problems: `f` itself;
/// * spherical edge `D`: Delaunay invariant `2π − 2D`, mapped by the corner transform;
/// * spherical Delaunay `𝒟`: edge invariant `π − ½𝒟`, mapped by its inverse.
fn hyperbolic_target(theorem: Theorem, f: &EdgeFunction) -> EdgeFunction {
    match theorem {
        Theorem::T1 => f.edge_to_delaunay(),
        Theorem::T3 => f.delaunay_to_edge(),
        Theorem::T2 | Theorem::T4 | Theorem::L7 => f.clone(),
    }
}

fn build(t: &Triangulation, h: &EdgeFunction, form: Form) -> Result<(LpProblem, LpLayout), LpError> {
    if h.len() != t.num_edges() {
        return Err(LpError::DimensionMismatch(format!(
            "{} invariant values for {} edges",
            h.len(),
            t.num_edges()
        )));
    }
    let layout = LpLayout::new(t, form != Form::Closure);
    let (m, n) = (layout.num_rows(), layout.num_cols());
    let int = |v: i64| Rational::from_integer(v.into());
    let mut a = vec![vec![Rational::zero(); n]; m];
    let mut b = vec![Rational::zero(); m];

    for f in 0..layout.faces {
        let row = &mut a[layout.face_row(f)];
        for slot in 0..3 {
            row[layout.corner_col(Corner::new(f, slot))] = Rational::one();
        }
        row[layout.slack_col(f)] = Rational::one();
        if let Some(eps) = layout.epsilon_col() {
            row[eps] = int(if form == Form::Strict { 4 } else { 3 });
        }
        b[layout.face_row(f)] = Rational::one();
    }
    for e in 0..layout.edges {
        let row = layout.edge_row(e);
        let (ci, cj) = t.corners_facing(e).map_err(FeasibilityError::from)?;
        for c in [ci, cj] {
            match h.kind {
                InvariantKind::Edge => a[row][layout.corner_col(c)] += Rational::one(),
                InvariantKind::Delaunay => {
                    a[row][layout.corner_col(c)] -= Rational::one();
                    for o in c.others() {
                        a[row][layout.corner_col(o)] += Rational::one();
                    }
                }
            }
        }
        if let Some(eps) = layout.epsilon_col() {
            a[row][eps] = int(2);
        }
        b[row] = h.values()[e].coeff().clone();
    }

    let mut c = vec![Rational::zero(); n];
    if let Some(eps) = layout.epsilon_col() {
        c[eps] = -Rational::one();
    }
    Ok((LpProblem::new(a, b, c, Sense::Min)?, layout))
}

/// The construction LP for a hyperbolic structure with invariant `h`
/// (edge or Delaunay rows according to `h.kind`), minimizing `−ε`.
pub fn build_construction_lp(t: &Triangulation, h: &EdgeFunction) -> Result<(LpProblem, LpLayout), LpError> {
    build(t, h, Form::Standard)
}

/// As [`build_construction_lp`] with `4ε` in the face rows.
pub fn build_strict_lp(t: &Triangulation, h: &EdgeFunction) -> Result<(LpProblem, LpLayout), LpError> {
    build(t, h, Form::Strict)
}

/// Feasibility of the closed system (no `ε`, angles allowed to vanish).
pub fn build_closure_lp(t: &Triangulation, h: &EdgeFunction) -> Result<(LpProblem, LpLayout), LpError> {
    build(t, h, Form::Closure)
}

/// The first LP [`lp_check`] solves for `theorem`: the closure LP for `L7`,
/// otherwise the construction LP of the hyperbolic problem it reduces to.
pub fn decision_lp(t: &Triangulation, theorem: Theorem, f: &EdgeFunction) -> Result<LpProblem, LpError> {
    theorem.check_domain(t, f)?;
    let h = hyperbolic_target(theorem, f);
    let (p, _) = if theorem == Theorem::L7 { build_closure_lp(t, &h)? } else { build_construction_lp(t, &h)? };
    Ok(p)
}

/// Result of [`construct_structure`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Construction {
    /// A verified structure of the requested geometry and invariant, with the
    /// optimal `ε` of the construction LP.
    Witness { structure: AngleStructure, epsilon: RatPi },
    /// A subset violating the theorem's inequality, with its margin.
    Infeasible { certificate: FaceSubset, margin: RatPi },
}

fn solve(p: &LpProblem) -> Result<LpOutcome, LpError> {
    match simplex_solve(p)? {
        LpOutcome::Unbounded { .. } => Err(LpError::Internal("construction LP is bounded".into())),
        outcome => Ok(outcome),
    }
}

/// Pulls a violating subset for `h` out of the row duals `y`, then checks
/// that it violates `theorem` on the original `f`.
fn certificate_from_dual(
    t: &Triangulation,
    theorem: Theorem,
    f: &EdgeFunction,
    h: &EdgeFunction,
    y: &[Rational],
) -> Result<(FaceSubset, RatPi, CertificateMode), LpError> {
    let (x, mode) = match h.kind {
        InvariantKind::Edge => extract_subset_certificate(t, h, &DualAssignment::from_rows(t, y)?)?,
        InvariantKind::Delaunay => {
            extract_level_set_certificate(t, h, &LevelSetDual::from_rows(t, y)?)?
        }
    };
    let cond = evaluate_condition(t, theorem, f, &x)?;
    if cond.holds {
        return Err(LpError::VerificationFailed(format!(
            "{theorem} holds on {:?}",
            x.members()
        )));
    }
    Ok((x, cond.margin(), mode))
}

fn corner_values(layout: &LpLayout, x: &[Rational], eps: &Rational) -> CornerValues {
    CornerValues::new(
        (0..3 * layout.faces).map(|i| RatPi::from_coeff(&x[i] + eps)).collect(),
    )
}

fn strictly_hyperbolic(t: &Triangulation, x: &CornerValues) -> bool {
    (0..t.num_faces()).all(|f| {
        let [a, b, c] = x.face(f).expect("corner values cover every face");
        a + b + c < RatPi::pi()
    })
}

/// A hyperbolic witness with its `ε`, or a violating subset with its margin.
type Solved = Result<(CornerValues, RatPi), (FaceSubset, RatPi)>;

/// Finds a hyperbolic structure with invariant `h` or a dual certificate.
fn solve_hyperbolic(
    t: &Triangulation,
    theorem: Theorem,
    f: &EdgeFunction,
    h: &EdgeFunction,
) -> Result<Solved, LpError> {
    let (p, layout) = build_construction_lp(t, h)?;
    let (x, value, dual) = match solve(&p)? {
        LpOutcome::Infeasible { certificate } => {
            let (s, margin, _) = certificate_from_dual(t, theorem, f, h, &certificate)?;
            return Ok(Err((s, margin)));
        }
        LpOutcome::Optimal { x, value, dual } => (x, value, dual),
        LpOutcome::Unbounded { .. } => unreachable!(),
    };
    let eps = -value;
    if !eps.is_positive() {
        let (s, margin, _) = certificate_from_dual(t, theorem, f, h, &dual)?;
        return Ok(Err((s, margin)));
    }
    let hyp = corner_values(&layout, &x, &eps);
    if strictly_hyperbolic(t, &hyp) {
        return Ok(Ok((hyp, RatPi::from_coeff(eps))));
    }
    let (p, layout) = build_strict_lp(t, h)?;
    let (x, value, dual) = match solve(&p)? {
        LpOutcome::Optimal { x, value, dual } => (x, value, dual),
        _ => return Err(LpError::Internal("strict LP lost feasibility".into())),
    };
    let eps = -value;
    if !eps.is_positive() {
        let (s, margin, _) = certificate_from_dual(t, theorem, f, h, &dual)?;
        return Ok(Err((s, margin)));
    }
    let hyp = corner_values(&layout, &x, &eps);
    Ok(Ok((hyp, RatPi::from_coeff(eps))))
}

/// Builds a structure of `geometry` whose invariant (edge or Delaunay,
/// according to `f.kind`) equals `f`, or returns a violating face subset.
///
/// Spherical problems are solved as hyperbolic ones and mapped back: an edge
/// invariant `D` through `y = T(x)` with `x` carrying Delaunay invariant
/// `2π − 2D`; a Delaunay invariant `𝒟` through `x = T⁻¹(w)` with `w`
/// carrying edge invariant `π − ½𝒟`. Every witness is re-checked exactly.
pub fn construct_structure(
    t: &Triangulation,
    f: &EdgeFunction,
    geometry: Geometry,
) -> Result<Construction, LpError> {
    let theorem = Theorem::for_problem(geometry, f.kind);
    theorem.check_domain(t, f)?;
    let h = hyperbolic_target(theorem, f);
    let (hyp, epsilon) = match solve_hyperbolic(t, theorem, f, &h)? {
        Ok(found) => found,
        Err((certificate, margin)) => return Ok(Construction::Infeasible { certificate, margin }),
    };
    let values = match theorem {
        Theorem::T1 => corner_transform(t, &hyp)?,
        Theorem::T3 => corner_transform_inverse(t, &hyp)?,
        _ => hyp,
    };
    let structure = values
        .into_structure(t)
        .map_err(|e| LpError::Internal(format!("witness out of range: {e}")))?;
    let expected_class = match geometry {
        Geometry::Hyperbolic => GeometryClass::Hyperbolic,
        Geometry::Spherical => GeometryClass::Spherical,
    };
    let class = classify_structure(t, &structure)?;
    let invariant = match f.kind {
        InvariantKind::Edge => edge_invariant(t, &structure)?,
        InvariantKind::Delaunay => delaunay_invariant(t, &structure)?,
    };
    if class != expected_class || invariant != *f {
        return Err(LpError::Internal(format!(
            "witness check failed: class {class}, invariant match {}",
            invariant == *f
        )));
    }
    Ok(Construction::Witness { structure, epsilon })
}

/// Answers the existence question of `theorem` by linear programming.
///
/// Infeasible reports carry an LP-extracted certificate and its margin.
/// For `L7` the closure LP decides emptiness of the closure; when it is
/// nonempty and `D` lies in `(0, 2π)`, the construction LP decides whether
/// the open set is nonempty too.
pub fn lp_check(t: &Triangulation, theorem: Theorem, f: &EdgeFunction) -> Result<FeasibilityReport, LpError> {
    theorem.check_domain(t, f)?;
    let report = |verdict, certificate: Option<(FaceSubset, RatPi)>| {
        let (certificate, slack) = certificate.unzip();
        FeasibilityReport {
            verdict,
            theorem,
            quantifier: theorem.quantifier(),
            method: Method::Lp,
            certificate,
            slack,
            tightest: None,
        }
    };
    if theorem == Theorem::L7 {
        let (p, _) = build_closure_lp(t, f)?;
        return Ok(match solve(&p)? {
            LpOutcome::Infeasible { certificate } => {
                let (s, margin, _) = certificate_from_dual(t, theorem, f, f, &certificate)?;
                report(Verdict::Infeasible, Some((s, margin)))
            }
            _ if !open_range(f) => report(Verdict::ClosureOnly, None),
            _ => match solve_hyperbolic(t, Theorem::T2, f, f)? {
                Ok(_) => report(Verdict::Feasible, None),
                Err(_) => report(Verdict::ClosureOnly, None),
            },
        });
    }
    let geometry = match theorem {
        Theorem::T1 | Theorem::T3 => Geometry::Spherical,
        _ => Geometry::Hyperbolic,
    };
    Ok(match construct_structure(t, f, geometry)? {
        Construction::Witness { .. } => report(Verdict::Feasible, None),
        Construction::Infeasible { certificate, margin } => {
            report(Verdict::Infeasible, Some((certificate, margin)))
        }
    })
}
