//! Combinatorial model of a closed triangulated surface.
//!
//! A surface is a list of faces, each an ordered triple of edge indices.
//! Slot `k` of a face holds the edge opposite corner `k`. Every edge index
//! must occur in exactly two face slots (possibly of the same face), and the
//! faces must form a single connected piece. Vertices are not modelled.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default bound on `|F|` for exhaustive subset enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 20;

/// Hard ceiling on any enumeration cap: subsets are walked as `u64` masks.
pub const MAX_ENUMERATION_CAP: usize = 63;

pub type FaceId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("triangulation has no faces")]
    Empty,
    #[error("edge {edge} occurs {count} times (every edge must be glued exactly twice)")]
    EdgeDegree { edge: EdgeId, count: usize },
    #[error("triangulation is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("unknown face {0}")]
    UnknownFace(FaceId),
    #[error("{faces} faces exceeds the enumeration cap of {cap}")]
    TooLarge { faces: usize, cap: usize },
}

/// The corner at `slot` of `face`; it faces the edge stored in that slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Corner {
    pub face: FaceId,
    pub slot: u8,
}

impl Corner {
    pub fn new(face: FaceId, slot: u8) -> Self {
        debug_assert!(slot < 3);
        Corner { face, slot }
    }

    /// Dense index `3·face + slot`.
    pub fn index(self) -> usize {
        3 * self.face + self.slot as usize
    }

    pub fn from_index(i: usize) -> Self {
        Corner { face: i / 3, slot: (i % 3) as u8 }
    }

    /// The other two corners of the same face, in slot order.
    pub fn others(self) -> [Corner; 2] {
        let [a, b] = match self.slot {
            0 => [1, 2],
            1 => [0, 2],
            _ => [0, 1],
        };
        [Corner::new(self.face, a), Corner::new(self.face, b)]
    }
}

impl fmt::Display for Corner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.face, self.slot)
    }
}

/// A set of faces `X ⊆ F`, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FaceSubset {
    members: Vec<FaceId>,
}

impl FaceSubset {
    pub fn empty() -> Self {
        FaceSubset::default()
    }

    pub fn full(num_faces: usize) -> Self {
        FaceSubset { members: (0..num_faces).collect() }
    }

    pub fn from_faces<I: IntoIterator<Item = FaceId>>(faces: I) -> Self {
        let set: BTreeSet<FaceId> = faces.into_iter().collect();
        FaceSubset { members: set.into_iter().collect() }
    }

    pub fn from_mask(mask: u64) -> Self {
        FaceSubset { members: (0..64).filter(|f| mask >> f & 1 == 1).collect() }
    }

    /// Bit `f` set iff face `f` is a member. `None` if some face index is ≥ 64.
    pub fn mask(&self) -> Option<u64> {
        self.members
            .iter()
            .try_fold(0u64, |m, &f| (f < 64).then(|| m | 1 << f))
    }

    pub fn members(&self) -> &[FaceId] {
        &self.members
    }

    pub fn contains(&self, f: FaceId) -> bool {
        self.members.binary_search(&f).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_subset_of(&self, other: &FaceSubset) -> bool {
        self.members.iter().all(|&f| other.contains(f))
    }
}

/// A validated, immutable triangulated closed surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    faces: Vec<[EdgeId; 3]>,
    /// For each edge, its two facing corners in increasing corner order.
    facing: Vec<[Corner; 2]>,
}

impl Triangulation {
    /// Validates a raw incidence list.
    ///
    /// Edge identifiers are dense indices: the edge set is `0..=max id`, so
    /// an unused index below the maximum is reported as an edge of degree 0.
    pub fn validate(raw: &[[EdgeId; 3]]) -> Result<Self, SurfaceError> {
        if raw.is_empty() {
            return Err(SurfaceError::Empty);
        }
        let num_edges = raw.iter().flatten().max().map_or(0, |m| m + 1);
        let mut occurrences: Vec<Vec<Corner>> = vec![Vec::with_capacity(2); num_edges];
        for (f, slots) in raw.iter().enumerate() {
            for (k, &e) in slots.iter().enumerate() {
                occurrences[e].push(Corner::new(f, k as u8));
            }
        }
        let mut facing = Vec::with_capacity(num_edges);
        for (edge, occ) in occurrences.iter().enumerate() {
            match occ.as_slice() {
                [a, b] => facing.push([*a, *b]),
                _ => return Err(SurfaceError::EdgeDegree { edge, count: occ.len() }),
            }
        }
        let t = Triangulation { faces: raw.to_vec(), facing };
        let components = t.count_components();
        if components != 1 {
            return Err(SurfaceError::Disconnected { components });
        }
        debug_assert_eq!(2 * t.num_edges(), 3 * t.num_faces());
        Ok(t)
    }

    fn count_components(&self) -> usize {
        let n = self.faces.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for [a, b] in &self.facing {
            let (ra, rb) = (find(&mut parent, a.face), find(&mut parent, b.face));
            if ra != rb {
                parent[ra] = rb;
            }
        }
        (0..n).filter(|&x| find(&mut parent, x) == x).count()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn num_edges(&self) -> usize {
        self.facing.len()
    }

    pub fn num_corners(&self) -> usize {
        3 * self.faces.len()
    }

    pub fn faces(&self) -> &[[EdgeId; 3]] {
        &self.faces
    }

    pub fn face(&self, f: FaceId) -> Result<[EdgeId; 3], SurfaceError> {
        self.faces.get(f).copied().ok_or(SurfaceError::UnknownFace(f))
    }

    /// The edge a corner faces.
    pub fn edge_of(&self, c: Corner) -> EdgeId {
        self.faces[c.face][c.slot as usize]
    }

    /// All corners in dense index order.
    pub fn corners(&self) -> impl Iterator<Item = Corner> + '_ {
        (0..self.num_corners()).map(Corner::from_index)
    }

    /// The two corners facing `e`. For a self-glued edge both lie in one face.
    pub fn corners_facing(&self, e: EdgeId) -> Result<(Corner, Corner), SurfaceError> {
        self.facing
            .get(e)
            .map(|[a, b]| (*a, *b))
            .ok_or(SurfaceError::UnknownEdge(e))
    }

    /// The distinct faces containing `e` (one face if `e` is self-glued).
    pub fn faces_of_edge(&self, e: EdgeId) -> Result<Vec<FaceId>, SurfaceError> {
        let (a, b) = self.corners_facing(e)?;
        Ok(if a.face == b.face { vec![a.face] } else { vec![a.face, b.face] })
    }

    /// `E(X)`: every edge of some face of `x`, without multiplicity.
    pub fn edge_set(&self, x: &FaceSubset) -> BTreeSet<EdgeId> {
        x.members()
            .iter()
            .filter_map(|&f| self.faces.get(f))
            .flatten()
            .copied()
            .collect()
    }

    pub fn check_subset(&self, x: &FaceSubset) -> Result<(), SurfaceError> {
        match x.members().iter().find(|&&f| f >= self.num_faces()) {
            Some(&f) => Err(SurfaceError::UnknownFace(f)),
            None => Ok(()),
        }
    }

    /// Every face subset, each exactly once, in increasing mask order.
    pub fn enumerate_subsets(
        &self,
        include_empty: bool,
        include_full: bool,
        cap: usize,
    ) -> Result<SubsetIter, SurfaceError> {
        let n = self.num_faces();
        let cap = cap.min(MAX_ENUMERATION_CAP);
        if n > cap {
            return Err(SurfaceError::TooLarge { faces: n, cap });
        }
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        Ok(SubsetIter {
            next: Some(u64::from(!include_empty)),
            full,
            include_full,
        })
    }
}

/// Iterator returned by [`Triangulation::enumerate_subsets`].
#[derive(Debug, Clone)]
pub struct SubsetIter {
    next: Option<u64>,
    full: u64,
    include_full: bool,
}

impl Iterator for SubsetIter {
    type Item = FaceSubset;

    fn next(&mut self) -> Option<FaceSubset> {
        let mask = self.next?;
        if mask == self.full && !self.include_full {
            self.next = None;
            return None;
        }
        self.next = (mask < self.full).then_some(mask + 1);
        Some(FaceSubset::from_mask(mask))
    }
}

/// Standard test surfaces.
pub mod fixtures {
    use super::*;

    /// Boundary of a tetrahedron: 4 faces, 6 edges.
    pub fn tetrahedron() -> Triangulation {
        Triangulation::validate(&[[0, 1, 2], [0, 3, 4], [1, 3, 5], [2, 4, 5]]).unwrap()
    }

    /// Boundary of an octahedron: 8 faces, 12 edges.
    pub fn octahedron() -> Triangulation {
        // Vertices N, S and an equatorial square a b c d; faces N-ab, N-bc,
        // N-cd, N-da, S-ab, S-bc, S-cd, S-da. Edges: Na Nb Nc Nd (0-3),
        // Sa Sb Sc Sd (4-7), ab bc cd da (8-11).
        Triangulation::validate(&[
            [8, 1, 0],
            [9, 2, 1],
            [10, 3, 2],
            [11, 0, 3],
            [8, 5, 4],
            [9, 6, 5],
            [10, 7, 6],
            [11, 4, 7],
        ])
        .unwrap()
    }

    /// Two faces glued along all three edges.
    pub fn pillow() -> Triangulation {
        Triangulation::validate(&[[0, 1, 2], [0, 1, 2]]).unwrap()
    }

    /// Two faces each with one self-glued edge: `[e0,e0,e1]`, `[e1,e2,e2]`.
    pub fn self_glued_pair() -> Triangulation {
        Triangulation::validate(&[[0, 0, 1], [1, 2, 2]]).unwrap()
    }
}
