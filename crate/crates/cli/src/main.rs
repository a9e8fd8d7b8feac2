//! `anglestruct`: decide, construct and verify spherical and hyperbolic
//! angle structures from JSON instance files.
//!
//! Exit status: 0 feasible (or closure-only), 1 infeasible or failed
//! verification, 2 invalid input or internal error.

use std::fs;
use std::io::{self, Read};
use std::process::ExitCode;

use anglestruct::feasibility::{Checker, FeasibilityError, FeasibilityReport};
use anglestruct::generate::{random_gluing, random_structure, seeded, GenerateError};
use anglestruct::io::{error_json, Instance, InstanceFile, IoError};
use anglestruct::lp::{construct_structure, decision_lp, lp_check, Construction, LpError};
use anglestruct::surface::DEFAULT_ENUMERATION_CAP;
use anglestruct::{
    classify_structure, delaunay_invariant, edge_invariant, AnglesError, FaceSubset, Geometry,
    GeometryClass, InvariantKind, RatPi, Theorem, Triangulation, Verdict,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Faces up to which `--method auto` enumerates subsets.
const AUTO_ENUMERATION_LIMIT: usize = 12;

#[derive(Parser)]
#[command(name = "anglestruct", version, about = "Spherical and hyperbolic angle structures with prescribed invariants")]
struct Cli {
    /// Decision procedure for `check`.
    #[arg(long, value_enum, default_value_t = MethodArg::Auto, global = true)]
    method: MethodArg,
    /// Run both procedures and fail if they disagree.
    #[arg(long, global = true)]
    cross_check: bool,
    /// Largest face count for subset enumeration.
    #[arg(long, env = "ANGLESTRUCT_CAP", default_value_t = DEFAULT_ENUMERATION_CAP, global = true)]
    cap: usize,
    /// Print the LP to stderr before solving.
    #[arg(long, global = true)]
    dump_lp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a structure with the prescribed invariant exists.
    Check {
        /// Instance file, or `-` for stdin.
        path: String,
        #[arg(long, value_enum, required_unless_present = "closure")]
        geometry: Option<GeometryArg>,
        #[arg(long, value_enum, default_value_t = InvariantArg::Edge)]
        invariant: InvariantArg,
        /// Decide the closure of the hyperbolic edge-invariant set instead.
        #[arg(long, conflicts_with = "geometry")]
        closure: bool,
    },
    /// Build a witness structure, or print a violating face subset.
    Construct {
        path: String,
        #[arg(long, value_enum)]
        geometry: GeometryArg,
        #[arg(long, value_enum, default_value_t = InvariantArg::Edge)]
        invariant: InvariantArg,
    },
    /// Compute both invariants and the geometry class of a structure.
    Invariants { path: String },
    /// Generate a random connected instance.
    Gen {
        #[arg(long)]
        faces: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also sample a structure of this class.
        #[arg(long, value_enum)]
        geometry: Option<ClassArg>,
    },
    /// Recompute a structure's invariants and class and compare them with
    /// the values stated in the file.
    Verify { path: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Enumerate,
    Lp,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum GeometryArg {
    Spherical,
    Hyperbolic,
}

impl From<GeometryArg> for Geometry {
    fn from(g: GeometryArg) -> Self {
        match g {
            GeometryArg::Spherical => Geometry::Spherical,
            GeometryArg::Hyperbolic => Geometry::Hyperbolic,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum InvariantArg {
    Edge,
    Delaunay,
}

impl From<InvariantArg> for InvariantKind {
    fn from(k: InvariantArg) -> Self {
        match k {
            InvariantArg::Edge => InvariantKind::Edge,
            InvariantArg::Delaunay => InvariantKind::Delaunay,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Hyperbolic,
    Spherical,
    Euclidean,
}

impl From<ClassArg> for GeometryClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Hyperbolic => GeometryClass::Hyperbolic,
            ClassArg::Spherical => GeometryClass::Spherical,
            ClassArg::Euclidean => GeometryClass::Euclidean,
        }
    }
}

struct Failure {
    kind: &'static str,
    message: String,
}

impl Failure {
    fn new(kind: &'static str, message: impl Into<String>) -> Self {
        Failure { kind, message: message.into() }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::new(e.kind(), e.to_string())
    }
}

impl From<FeasibilityError> for Failure {
    fn from(e: FeasibilityError) -> Self {
        let kind = match &e {
            FeasibilityError::RangeViolation { .. } => "range-violation",
            FeasibilityError::KindMismatch { .. } => "kind-mismatch",
            FeasibilityError::LengthMismatch { .. } => "length-mismatch",
            FeasibilityError::Surface(anglestruct::SurfaceError::TooLarge { .. }) => "too-large",
            FeasibilityError::Surface(_) => "invalid-surface",
        };
        Failure::new(kind, e.to_string())
    }
}

impl From<LpError> for Failure {
    fn from(e: LpError) -> Self {
        match e {
            LpError::Feasibility(e) => e.into(),
            LpError::Angles(e) => e.into(),
            e => Failure::new("solver", e.to_string()),
        }
    }
}

impl From<AnglesError> for Failure {
    fn from(e: AnglesError) -> Self {
        Failure::new("invalid-angles", e.to_string())
    }
}

impl From<GenerateError> for Failure {
    fn from(e: GenerateError) -> Self {
        let kind = match e {
            GenerateError::OddFaceCount(_) => "odd-face-count",
            GenerateError::TooFewFaces(_) => "too-few-faces",
            GenerateError::UnsupportedClass(_) => "unsupported-class",
        };
        Failure::new(kind, e.to_string())
    }
}

fn read_instance(path: &str) -> Result<Instance, Failure> {
    let text = if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::new("io", e.to_string()))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure::new("io", format!("{path}: {e}")))?
    };
    Ok(Instance::parse(&text)?)
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("output serializes"));
}

fn exit_for(verdict: Verdict) -> u8 {
    match verdict {
        Verdict::Infeasible => 1,
        Verdict::Feasible | Verdict::ClosureOnly => 0,
    }
}

fn dump_lp(cli: &Cli, t: &Triangulation, theorem: Theorem, f: &anglestruct::EdgeFunction) -> Result<(), Failure> {
    if cli.dump_lp {
        eprint!("{}", decision_lp(t, theorem, f)?.dump());
    }
    Ok(())
}

fn check(cli: &Cli, path: &str, geometry: Option<GeometryArg>, kind: InvariantKind, closure: bool) -> Result<u8, Failure> {
    let inst = read_instance(path)?;
    let t = &inst.triangulation;
    let f = inst.invariant(kind)?;
    let theorem = match geometry {
        _ if closure => Theorem::L7,
        Some(g) => Theorem::for_problem(g.into(), kind),
        None => unreachable!("clap requires --geometry without --closure"),
    };
    theorem.check_domain(t, f)?;
    let checker = Checker::with_cap(cli.cap);
    let enumerate = || checker.check(t, theorem, f).map_err(Failure::from);
    let lp = || -> Result<FeasibilityReport, Failure> {
        dump_lp(cli, t, theorem, f)?;
        Ok(lp_check(t, theorem, f)?)
    };
    let use_lp = match cli.method {
        MethodArg::Enumerate => false,
        MethodArg::Lp => true,
        MethodArg::Auto => t.num_faces() > AUTO_ENUMERATION_LIMIT,
    };
    let report = if use_lp { lp()? } else { enumerate()? };
    if cli.cross_check {
        let other = if use_lp { enumerate()? } else { lp()? };
        if other.verdict != report.verdict {
            return Err(Failure::new(
                "cross-check-mismatch",
                format!("{:?} by {:?}, {:?} by {:?}", report.verdict, report.method, other.verdict, other.method),
            ));
        }
    }
    print_json(&report);
    Ok(exit_for(report.verdict))
}

#[derive(Serialize)]
struct CertificateOutput {
    verdict: Verdict,
    theorem: Theorem,
    certificate: FaceSubset,
    slack: RatPi,
}

fn construct(cli: &Cli, path: &str, geometry: Geometry, kind: InvariantKind) -> Result<u8, Failure> {
    let inst = read_instance(path)?;
    let t = &inst.triangulation;
    let f = inst.invariant(kind)?;
    let theorem = Theorem::for_problem(geometry, kind);
    dump_lp(cli, t, theorem, f)?;
    match construct_structure(t, f, geometry)? {
        Construction::Witness { structure, .. } => {
            let mut out = Instance::new(t.clone());
            out.set_invariant(f.clone());
            out.class = Some(classify_structure(t, &structure)?);
            out.structure = Some(structure.into_values());
            println!("{}", out.to_json());
            Ok(0)
        }
        Construction::Infeasible { certificate, margin } => {
            print_json(&CertificateOutput { verdict: Verdict::Infeasible, theorem, certificate, slack: margin });
            Ok(1)
        }
    }
}

#[derive(Serialize)]
struct InvariantsOutput {
    #[serde(flatten)]
    instance: InstanceFile,
    euclidean_relation: bool,
}

fn invariants(path: &str) -> Result<u8, Failure> {
    let inst = read_instance(path)?.with_computed_invariants()?;
    let (d, dd) = (inst.edge.as_ref().unwrap(), inst.delaunay.as_ref().unwrap());
    let two = RatPi::from_int(2);
    let euclidean_relation = d.values().iter().zip(dd.values()).all(|(a, b)| a.mul_int(2) + b == two);
    print_json(&InvariantsOutput { instance: inst.to_file(), euclidean_relation });
    Ok(0)
}

fn gen(faces: usize, seed: u64, class: Option<ClassArg>) -> Result<u8, Failure> {
    let mut rng = seeded(seed);
    let t = random_gluing(&mut rng, faces)?;
    let mut inst = Instance::new(t);
    if let Some(class) = class {
        inst.structure = Some(random_structure(&mut rng, &inst.triangulation, class.into())?);
        inst.class = Some(class.into());
    }
    println!("{}", inst.to_json());
    Ok(0)
}

#[derive(Serialize)]
struct VerifyOutput {
    valid: bool,
    problems: Vec<String>,
}

fn verify(path: &str) -> Result<u8, Failure> {
    let inst = read_instance(path)?;
    let t = &inst.triangulation;
    let x = inst.structure.as_ref().ok_or(IoError::Missing("structure"))?;
    if inst.edge.is_none() && inst.delaunay.is_none() && inst.class.is_none() {
        return Err(Failure::new("missing-field", "nothing to verify: no D, Dd or class"));
    }
    let mut problems = Vec::new();
    if let Err(e) = x.clone().into_structure(t) {
        problems.push(e.to_string());
    }
    for stated in [&inst.edge, &inst.delaunay].into_iter().flatten() {
        let (name, computed) = match stated.kind {
            InvariantKind::Edge => ("D", edge_invariant(t, x)?),
            InvariantKind::Delaunay => ("Dd", delaunay_invariant(t, x)?),
        };
        for (e, (want, got)) in stated.values().iter().zip(computed.values()).enumerate() {
            if want != got {
                problems.push(format!("{name} on edge {e}: stated {want}, computed {got}"));
            }
        }
    }
    if let Some(class) = inst.class {
        match classify_structure(t, x) {
            Ok(got) if got == class => {}
            Ok(got) => problems.push(format!("class: stated {class}, computed {got}")),
            Err(e) => problems.push(format!("class: {e}")),
        }
    }
    let valid = problems.is_empty();
    print_json(&VerifyOutput { valid, problems });
    Ok(if valid { 0 } else { 1 })
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    match &cli.command {
        Command::Check { path, geometry, invariant, closure } => {
            check(cli, path, *geometry, (*invariant).into(), *closure)
        }
        Command::Construct { path, geometry, invariant } => {
            construct(cli, path, (*geometry).into(), (*invariant).into())
        }
        Command::Invariants { path } => invariants(path),
        Command::Gen { faces, seed, geometry } => gen(*faces, *seed, *geometry),
        Command::Verify { path } => verify(path),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            println!("{}", error_json(f.kind, &f.message));
            ExitCode::from(2)
        }
    }
}
