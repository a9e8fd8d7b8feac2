//! Seeded random instances: connected gluings, angle structures of a given
//! class, and edge functions. Everything is driven by [`ChaCha8Rng`] so a
//! seed reproduces the same output on every platform.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::angles::{classify_triangle, CornerValues, EdgeFunction, GeometryClass, InvariantKind};
use crate::exactnum::{RatPi, Rational};
use crate::surface::{SurfaceError, Triangulation};

/// Largest denominator drawn by the default samplers.
pub const DEFAULT_MAX_DENOM: i64 = 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("face count {0} is odd; a closed triangulated surface has an even number of faces")]
    OddFaceCount(usize),
    #[error("need at least 2 faces, got {0}")]
    TooFewFaces(usize),
    #[error("cannot sample a triangle of class {0} under the given bound")]
    UnsupportedClass(GeometryClass),
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A uniformly random pairing of the `3n` face slots, redrawn until the
/// surface is connected. Edge ids are assigned in order of first appearance.
pub fn random_gluing<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<Triangulation, GenerateError> {
    if n % 2 == 1 {
        return Err(GenerateError::OddFaceCount(n));
    }
    if n < 2 {
        return Err(GenerateError::TooFewFaces(n));
    }
    let mut slots: Vec<usize> = (0..3 * n).collect();
    loop {
        slots.shuffle(rng);
        let mut edge_of = vec![usize::MAX; 3 * n];
        for (e, pair) in slots.chunks_exact(2).enumerate() {
            edge_of[pair[0]] = e;
            edge_of[pair[1]] = e;
        }
        let mut relabel = vec![usize::MAX; 3 * n / 2];
        let mut next = 0;
        let faces: Vec<[usize; 3]> = edge_of
            .chunks_exact(3)
            .map(|face| {
                face.iter()
                    .map(|&e| {
                        if relabel[e] == usize::MAX {
                            relabel[e] = next;
                            next += 1;
                        }
                        relabel[e]
                    })
                    .collect::<Vec<_>>()
                    .try_into()
                    .expect("three slots per face")
            })
            .collect();
        match Triangulation::validate(&faces) {
            Ok(t) => return Ok(t),
            Err(SurfaceError::Disconnected { .. }) => continue,
            Err(e) => unreachable!("pairing produced an invalid gluing: {e}"),
        }
    }
}

/// A rational `p/q` strictly between `lo` and `hi` (in π-units) with
/// `2 ≤ q ≤ max_denom`.
pub fn random_ratpi<R: Rng + ?Sized>(rng: &mut R, lo: i64, hi: i64, max_denom: i64) -> RatPi {
    random_ratpi_between(rng, &RatPi::from_int(lo), &RatPi::from_int(hi), max_denom)
}

/// As [`random_ratpi`] with rational bounds. Denominators with no
/// admissible numerator are redrawn.
pub fn random_ratpi_between<R: Rng + ?Sized>(
    rng: &mut R,
    lo: &RatPi,
    hi: &RatPi,
    max_denom: i64,
) -> RatPi {
    assert!(lo < hi && max_denom >= 2);
    loop {
        let q = rng.random_range(2..=max_denom);
        let scale = Rational::from_integer(BigInt::from(q));
        let first: BigInt = (lo.coeff() * &scale).floor().to_integer() + 1;
        let last: BigInt = (hi.coeff() * &scale).ceil().to_integer() - 1;
        if first > last {
            continue;
        }
        let (first, last) = (first.to_i64().expect("small bound"), last.to_i64().expect("small bound"));
        return RatPi::new(rng.random_range(first..=last), q);
    }
}

/// An independent uniform draw per edge from `(lo, hi)`.
pub fn random_edge_function<R: Rng + ?Sized>(
    rng: &mut R,
    t: &Triangulation,
    kind: InvariantKind,
    lo: i64,
    hi: i64,
) -> EdgeFunction {
    let values = (0..t.num_edges()).map(|_| random_ratpi(rng, lo, hi, DEFAULT_MAX_DENOM)).collect();
    EdgeFunction::new(kind, values)
}

/// One triangle of the requested class, by rejection.
pub fn random_triangle<R: Rng + ?Sized>(
    rng: &mut R,
    class: GeometryClass,
) -> Result<[RatPi; 3], GenerateError> {
    random_triangle_below(rng, class, &RatPi::pi())
}

/// One triangle of the requested class with every angle below `max`.
pub fn random_triangle_below<R: Rng + ?Sized>(
    rng: &mut R,
    class: GeometryClass,
    max: &RatPi,
) -> Result<[RatPi; 3], GenerateError> {
    if class == GeometryClass::NotGeometric {
        return Err(GenerateError::UnsupportedClass(class));
    }
    let zero = RatPi::zero();
    let draw = |rng: &mut R| random_ratpi_between(rng, &zero, max, DEFAULT_MAX_DENOM);
    for _ in 0..10_000 {
        let a = draw(rng);
        let b = draw(rng);
        let c = match class {
            GeometryClass::Euclidean => RatPi::pi() - &a - &b,
            _ => draw(rng),
        };
        if c.in_open(&zero, max) && classify_triangle(&a, &b, &c) == Ok(class) {
            return Ok([a, b, c]);
        }
    }
    Err(GenerateError::UnsupportedClass(class))
}

/// Independent triangles of one class on every face.
pub fn random_structure<R: Rng + ?Sized>(
    rng: &mut R,
    t: &Triangulation,
    class: GeometryClass,
) -> Result<CornerValues, GenerateError> {
    random_structure_below(rng, t, class, &RatPi::pi())
}

/// As [`random_structure`] with every angle below `max`.
pub fn random_structure_below<R: Rng + ?Sized>(
    rng: &mut R,
    t: &Triangulation,
    class: GeometryClass,
    max: &RatPi,
) -> Result<CornerValues, GenerateError> {
    let mut values = Vec::with_capacity(t.num_corners());
    for _ in 0..t.num_faces() {
        values.extend(random_triangle_below(rng, class, max)?);
    }
    Ok(CornerValues::new(values))
}
