//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#![allow(clippy::needless_range_loop)]

use std::process::ExitCode;
use std::time::Instant;

use anglestruct::feasibility::{evaluate_condition, Checker};
use anglestruct::generate::{
    random_gluing, random_ratpi_between, random_structure, random_structure_below, seeded,
};
use anglestruct::lp::{construct_structure, simplex_solve, Construction, LpOutcome, LpProblem, Sense};
use anglestruct::surface::fixtures::tetrahedron;
use anglestruct::{
    classify_structure, corner_transform_inverse, delaunay_invariant, edge_invariant, EdgeFunction,
    FaceSubset, Geometry, GeometryClass, InvariantKind, RatPi, Rational, Theorem, Triangulation,
    Verdict,
};
use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const SIZES: [usize; 5] = [2, 4, 6, 8, 10];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn r(p: i64, q: i64) -> RatPi {
    RatPi::new(p, q)
}

/// Per-edge draws from `(lo, hi)` with denominators at most 40.
fn draw(rng: &mut ChaCha8Rng, t: &Triangulation, kind: InvariantKind, lo: &RatPi, hi: &RatPi) -> EdgeFunction {
    let values = (0..t.num_edges()).map(|_| random_ratpi_between(rng, lo, hi, 40)).collect();
    EdgeFunction::new(kind, values)
}

/// The certificate must violate the theorem's inequality when re-evaluated.
fn recheck(t: &Triangulation, theorem: Theorem, f: &EdgeFunction, x: &FaceSubset) -> Result<(), String> {
    match evaluate_condition(t, theorem, f, x) {
        Ok(c) if !c.holds => Ok(()),
        Ok(_) => Err(format!("{theorem} certificate {:?} does not violate", x.members())),
        Err(e) => Err(e.to_string()),
    }
}

/// Enumeration verdict against LP construction for one geometry and edge
/// invariants drawn from the given bands.
fn edge_agreement(seed: u64, geometry: Geometry, bands: &[(RatPi, RatPi)]) -> Outcome {
    let theorem = Theorem::for_problem(geometry, InvariantKind::Edge);
    let mut rng = seeded(seed);
    let (mut feasible, mut infeasible) = (0, 0);
    for i in 0..200 {
        let t = random_gluing(&mut rng, SIZES[i % SIZES.len()]).unwrap();
        let (lo, hi) = &bands[rng.random_range(0..bands.len())];
        let d = draw(&mut rng, &t, InvariantKind::Edge, lo, hi);
        let report = Checker::default().check(&t, theorem, &d).map_err(|e| e.to_string())?;
        let built = construct_structure(&t, &d, geometry).map_err(|e| format!("case {i}: {e}"))?;
        match (&report.verdict, &built) {
            (Verdict::Feasible, Construction::Witness { .. }) => feasible += 1,
            (Verdict::Infeasible, Construction::Infeasible { certificate, .. }) => {
                recheck(&t, theorem, &d, certificate)?;
                recheck(&t, theorem, &d, report.certificate.as_ref().unwrap())?;
                infeasible += 1;
            }
            _ => return Err(format!("case {i}: enumeration {:?} vs LP {built:?}", report.verdict)),
        }
    }
    Ok(format!("200/200 agree ({feasible} feasible, {infeasible} infeasible)"))
}

fn criterion_1() -> Outcome {
    let bands = [(r(0, 1), r(1, 1)), (r(1, 2), r(1, 1)), (r(3, 5), r(1, 1))];
    edge_agreement(101, Geometry::Spherical, &bands)
}

fn criterion_2() -> Outcome {
    let bands = [(r(0, 1), r(2, 1)), (r(0, 1), r(1, 1)), (r(0, 1), r(4, 5))];
    edge_agreement(202, Geometry::Hyperbolic, &bands)
}

fn criterion_3() -> Outcome {
    let mut rng = seeded(303);
    let checker = Checker::default();
    let bands = [(r(-2, 1), r(2, 1)), (r(0, 1), r(2, 1)), (r(1, 2), r(2, 1))];
    let (mut feasible, mut infeasible) = (0, 0);
    for i in 0..200 {
        let t = random_gluing(&mut rng, SIZES[i % SIZES.len()]).unwrap();
        let (lo, hi) = &bands[rng.random_range(0..bands.len())];
        let dd = draw(&mut rng, &t, InvariantKind::Delaunay, lo, hi);
        let h = dd.delaunay_to_edge();
        let sph = checker.spherical_delaunay(&t, &dd).map_err(|e| e.to_string())?;
        let hyp = checker.hyperbolic_edge(&t, &h).map_err(|e| e.to_string())?;
        if sph.verdict != hyp.verdict || sph.certificate != hyp.certificate {
            return Err(format!("case {i}: {sph:?} vs {hyp:?}"));
        }
        if sph.verdict == Verdict::Infeasible {
            infeasible += 1;
            continue;
        }
        let Construction::Witness { structure: w, .. } =
            construct_structure(&t, &h, Geometry::Hyperbolic).map_err(|e| e.to_string())?
        else {
            return Err(format!("case {i}: feasible but no hyperbolic witness"));
        };
        let x = corner_transform_inverse(&t, &w).unwrap();
        let x = x.into_structure(&t).map_err(|e| format!("case {i}: {e}"))?;
        if classify_structure(&t, &x).unwrap() != GeometryClass::Spherical
            || delaunay_invariant(&t, &x).unwrap() != dd
        {
            return Err(format!("case {i}: mapped witness is not spherical with invariant 𝒟"));
        }
        feasible += 1;
    }
    Ok(format!("200/200 agree, identical certificates ({feasible} feasible, {infeasible} infeasible)"))
}

fn criterion_4() -> Outcome {
    let mut rng = seeded(404);
    let checker = Checker::default();
    let (mut checks, mut skipped) = (0, 0);
    for class in [GeometryClass::Hyperbolic, GeometryClass::Spherical] {
        for i in 0..500 {
            let n = 2 * rng.random_range(1..=5);
            let t = random_gluing(&mut rng, n).unwrap();
            // Spherical edge invariants reach past π unless angles stay below π/2,
            // and the edge theorem only speaks about D < π.
            let x = if class == GeometryClass::Spherical && i % 2 == 0 {
                random_structure_below(&mut rng, &t, class, &r(1, 2)).unwrap()
            } else {
                random_structure(&mut rng, &t, class).unwrap()
            };
            let d = edge_invariant(&t, &x).unwrap();
            let dd = delaunay_invariant(&t, &x).unwrap();
            let (edge_thm, del_thm) = match class {
                GeometryClass::Hyperbolic => (Theorem::T2, Theorem::T4),
                _ => (Theorem::T1, Theorem::T3),
            };
            // Out-of-domain invariants are outside every theorem's scope. The edge
            // invariant of a hyperbolic structure and the Delaunay invariant of a
            // spherical one always lie in range, as does D under the π/2 bound.
            let must = [
                class == GeometryClass::Hyperbolic || i % 2 == 0,
                class == GeometryClass::Spherical,
            ];
            let mut targets = Vec::new();
            for ((thm, f), required) in [(edge_thm, &d), (del_thm, &dd)].into_iter().zip(must) {
                if thm.check_domain(&t, f).is_ok() {
                    targets.push((thm, f));
                } else if required {
                    return Err(format!("{class} case {i}: invariant outside {thm} domain"));
                } else {
                    skipped += 1;
                }
            }
            for (thm, f) in targets {
                let rep = checker.check(&t, thm, f).map_err(|e| e.to_string())?;
                if rep.verdict != Verdict::Feasible {
                    return Err(format!("{class} case {i}: {thm} says {:?}", rep.verdict));
                }
                checks += 1;
            }
        }
    }
    Ok(format!("1000 structures, {checks} checks, {skipped} out of domain, zero false infeasibility"))
}

fn criterion_5() -> Outcome {
    let t = tetrahedron();
    let checker = Checker::default();
    let d = |p, q| EdgeFunction::constant(InvariantKind::Edge, 6, r(p, q));
    let mut rows = Vec::new();
    let mut expect = |name: &str, ok: bool| {
        rows.push(name.to_string());
        if ok { Ok(()) } else { Err(format!("{name} failed")) }
    };
    let verdict = |thm, f: &EdgeFunction| checker.check(&t, thm, f).unwrap();
    let lp = |f: &EdgeFunction, g| construct_structure(&t, f, g).unwrap();

    let rep = verdict(Theorem::T1, &d(7, 10));
    expect("7/10 T1 feasible", rep.verdict == Verdict::Feasible)?;
    expect("7/10 T1 witness", matches!(lp(&d(7, 10), Geometry::Spherical), Construction::Witness { .. }))?;
    let rep = verdict(Theorem::T2, &d(7, 10));
    expect("7/10 T2 infeasible at ∅", rep.verdict == Verdict::Infeasible && rep.certificate == Some(FaceSubset::empty()))?;
    expect(
        "7/10 T2 LP certificate ∅",
        matches!(lp(&d(7, 10), Geometry::Hyperbolic), Construction::Infeasible { certificate, .. } if certificate.is_empty()),
    )?;
    let rep = verdict(Theorem::T1, &d(3, 5));
    expect("3/5 T1 infeasible at F", rep.verdict == Verdict::Infeasible && rep.certificate == Some(FaceSubset::full(4)))?;
    expect(
        "3/5 T1 LP certificate F",
        matches!(lp(&d(3, 5), Geometry::Spherical), Construction::Infeasible { certificate, .. } if certificate == FaceSubset::full(4)),
    )?;
    expect("3/5 T2 feasible", verdict(Theorem::T2, &d(3, 5)).verdict == Verdict::Feasible)?;
    expect(
        "3/5 T2 ε = 3/10",
        matches!(lp(&d(3, 5), Geometry::Hyperbolic), Construction::Witness { epsilon, .. } if epsilon == r(3, 10)),
    )?;
    let rep = verdict(Theorem::T2, &d(2, 3));
    expect("2/3 T2 infeasible", rep.verdict == Verdict::Infeasible && rep.slack == Some(RatPi::zero()))?;
    let rep = verdict(Theorem::L7, &d(2, 3));
    expect(
        "2/3 closure nonempty, equality at ∅",
        rep.verdict == Verdict::ClosureOnly && rep.slack == Some(RatPi::zero()) && rep.tightest == Some(FaceSubset::empty()),
    )?;
    Ok(format!("{} table entries exact", rows.len()))
}

fn criterion_6() -> Outcome {
    let mut rng = seeded(606);
    let two = RatPi::from_int(2);
    for i in 0..100 {
        let n = 2 * rng.random_range(1..=5);
        let t = random_gluing(&mut rng, n).unwrap();
        let x = random_structure(&mut rng, &t, GeometryClass::Euclidean).unwrap();
        for f in 0..t.num_faces() {
            let [a, b, c] = x.face(f).unwrap();
            if a + b + c != RatPi::pi() {
                return Err(format!("case {i}: face {f} sum is not π"));
            }
        }
        let d = edge_invariant(&t, &x).unwrap();
        let dd = delaunay_invariant(&t, &x).unwrap();
        if let Some(e) = (0..t.num_edges()).find(|&e| d.values()[e].mul_int(2) + &dd.values()[e] != two) {
            return Err(format!("case {i}: 2D + 𝒟 ≠ 2π on edge {e}"));
        }
    }
    Ok("100 structures, relation exact on every edge".into())
}

fn criterion_7() -> Outcome {
    let mut rng = seeded(707);
    let mut instances = vec![tetrahedron()];
    for i in 0..300 {
        instances.push(random_gluing(&mut rng, SIZES[i % SIZES.len()]).unwrap());
    }
    let mut subsets = 0u64;
    for t in &instances {
        let n = t.num_faces();
        for mask in 1..(1u64 << n) - 1 {
            let x = FaceSubset::from_mask(mask);
            let e = t.edge_set(&x).len();
            if 2 * e < 3 * x.len() + 1 {
                return Err(format!("{:?} on {:?}", x.members(), t.faces()));
            }
            subsets += 1;
        }
    }
    Ok(format!("{} instances, {subsets} subsets", instances.len()))
}

fn random_entry(rng: &mut ChaCha8Rng) -> Rational {
    let q = rng.random_range(1..=4i64);
    Rational::new(rng.random_range(-5 * q..=5 * q).into(), q.into())
}

fn criterion_8() -> Outcome {
    let mut rng = seeded(808);
    let (mut feasible, mut infeasible) = (0, 0);
    for i in 0..100 {
        let m = rng.random_range(1..=8);
        let n = rng.random_range(1..=8);
        let a: Vec<Vec<Rational>> = (0..m).map(|_| (0..n).map(|_| random_entry(&mut rng)).collect()).collect();
        let b: Vec<Rational> = if rng.random_bool(0.5) {
            // consistent right-hand side from a nonnegative point
            let x: Vec<Rational> = (0..n).map(|_| random_entry(&mut rng).abs()).collect();
            a.iter().map(|row| row.iter().zip(&x).map(|(p, q)| p * q).sum()).collect()
        } else {
            (0..m).map(|_| random_entry(&mut rng)).collect()
        };
        let primal = LpProblem::new(a.clone(), b.clone(), vec![Rational::zero(); n], Sense::Min).unwrap();
        let primal_feasible = match simplex_solve(&primal).map_err(|e| e.to_string())? {
            LpOutcome::Optimal { .. } => true,
            LpOutcome::Infeasible { certificate: y } => {
                for j in 0..n {
                    let col: Rational = (0..m).map(|k| &a[k][j] * &y[k]).sum();
                    if col.is_positive() {
                        return Err(format!("case {i}: Farkas column {j} positive"));
                    }
                }
                let by: Rational = b.iter().zip(&y).map(|(p, q)| p * q).sum();
                if !by.is_positive() {
                    return Err(format!("case {i}: Farkas bᵀy = {by}"));
                }
                false
            }
            LpOutcome::Unbounded { .. } => return Err(format!("case {i}: zero objective unbounded")),
        };
        // max bᵀy s.t. Aᵀy ≤ 0, y free: y = u − v, Aᵀ(u − v) + s = 0.
        let cols = 2 * m + n;
        let dual_a: Vec<Vec<Rational>> = (0..n)
            .map(|j| {
                let mut row = vec![Rational::zero(); cols];
                for k in 0..m {
                    row[k] = a[k][j].clone();
                    row[m + k] = -a[k][j].clone();
                }
                row[2 * m + j] = Rational::from_integer(1.into());
                row
            })
            .collect();
        let mut dual_c = vec![Rational::zero(); cols];
        for k in 0..m {
            dual_c[k] = b[k].clone();
            dual_c[m + k] = -b[k].clone();
        }
        let dual = LpProblem::new(dual_a, vec![Rational::zero(); n], dual_c, Sense::Max).unwrap();
        let dual_max_nonpositive = match simplex_solve(&dual).map_err(|e| e.to_string())? {
            LpOutcome::Optimal { value, .. } => !value.is_positive(),
            LpOutcome::Unbounded { .. } => false,
            LpOutcome::Infeasible { .. } => return Err(format!("case {i}: y = 0 is dual feasible")),
        };
        if primal_feasible != dual_max_nonpositive {
            return Err(format!("case {i}: primal feasible {primal_feasible}, dual max ≤ 0 {dual_max_nonpositive}"));
        }
        if primal_feasible { feasible += 1 } else { infeasible += 1 }
    }
    Ok(format!("100/100 agree ({feasible} feasible, {infeasible} infeasible)"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("spherical edge invariant: enumeration vs construction", criterion_1),
        ("hyperbolic edge invariant: enumeration vs construction", criterion_2),
        ("spherical Delaunay invariant reduction", criterion_3),
        ("soundness on random structures", criterion_4),
        ("tetrahedron table", criterion_5),
        ("Euclidean relation 2D + 𝒟 = 2π", criterion_6),
        ("2|E(X)| ≥ 3|X| + 1", criterion_7),
        ("Farkas alternative", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
