//! Angle structures, their geometry class and their two edge invariants.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::RatPi;
use crate::surface::{Corner, EdgeId, Triangulation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnglesError {
    #[error("angle {value} at corner {corner} is outside (0, π)")]
    OutOfRange { corner: Corner, value: RatPi },
    #[error("angle {0} is outside (0, π)")]
    TriangleOutOfRange(RatPi),
    #[error("no value for corner {0}")]
    MissingCorner(Corner),
    #[error("no value for edge {0}")]
    MissingEdge(EdgeId),
    #[error("corner {0} does not exist on this surface")]
    UnknownCorner(Corner),
    #[error("edge {0} does not exist on this surface")]
    UnknownEdge(EdgeId),
}

/// Which invariant an [`EdgeFunction`] prescribes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InvariantKind {
    /// `D(e)`: sum of the two corners facing `e`.
    Edge,
    /// `𝒟(e)`: the four non-facing corners at `e` minus the two facing ones.
    Delaunay,
}

/// A value per edge, indexed densely by edge id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeFunction {
    pub kind: InvariantKind,
    values: Vec<RatPi>,
}

impl EdgeFunction {
    pub fn new(kind: InvariantKind, values: Vec<RatPi>) -> Self {
        EdgeFunction { kind, values }
    }

    pub fn constant(kind: InvariantKind, num_edges: usize, value: RatPi) -> Self {
        EdgeFunction { kind, values: vec![value; num_edges] }
    }

    /// Builds a function from a sparse map, requiring every edge of `t`.
    pub fn from_map(
        t: &Triangulation,
        kind: InvariantKind,
        map: &BTreeMap<EdgeId, RatPi>,
    ) -> Result<Self, AnglesError> {
        if let Some(&e) = map.keys().find(|&&e| e >= t.num_edges()) {
            return Err(AnglesError::UnknownEdge(e));
        }
        let values = (0..t.num_edges())
            .map(|e| map.get(&e).cloned().ok_or(AnglesError::MissingEdge(e)))
            .collect::<Result<_, _>>()?;
        Ok(EdgeFunction { kind, values })
    }

    pub fn values(&self) -> &[RatPi] {
        &self.values
    }

    pub fn get(&self, e: EdgeId) -> Option<&RatPi> {
        self.values.get(e)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `e ↦ π − ½·self(e)`, the edge invariant matching a Delaunay invariant
    /// under the corner transform.
    pub fn delaunay_to_edge(&self) -> EdgeFunction {
        let values = self.values.iter().map(|v| RatPi::pi() - v.half()).collect();
        EdgeFunction { kind: InvariantKind::Edge, values }
    }

    /// `e ↦ 2π − 2·self(e)`.
    pub fn edge_to_delaunay(&self) -> EdgeFunction {
        let values = self.values.iter().map(|v| RatPi::from_int(2) - v.mul_int(2)).collect();
        EdgeFunction { kind: InvariantKind::Delaunay, values }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeometryClass {
    Euclidean,
    Hyperbolic,
    Spherical,
    NotGeometric,
}

impl fmt::Display for GeometryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeometryClass::Euclidean => "euclidean",
            GeometryClass::Hyperbolic => "hyperbolic",
            GeometryClass::Spherical => "spherical",
            GeometryClass::NotGeometric => "not-geometric",
        })
    }
}

/// One value per corner with no range constraint. Transform outputs live
/// here until they are validated into an [`AngleStructure`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CornerValues {
    values: Vec<RatPi>,
}

impl CornerValues {
    pub fn new(values: Vec<RatPi>) -> Self {
        CornerValues { values }
    }

    pub fn constant(t: &Triangulation, value: RatPi) -> Self {
        CornerValues { values: vec![value; t.num_corners()] }
    }

    pub fn from_map(t: &Triangulation, map: &BTreeMap<Corner, RatPi>) -> Result<Self, AnglesError> {
        if let Some(c) = map.keys().find(|c| c.face >= t.num_faces() || c.slot > 2) {
            return Err(AnglesError::UnknownCorner(*c));
        }
        let values = t
            .corners()
            .map(|c| map.get(&c).cloned().ok_or(AnglesError::MissingCorner(c)))
            .collect::<Result<_, _>>()?;
        Ok(CornerValues { values })
    }

    pub fn values(&self) -> &[RatPi] {
        &self.values
    }

    pub fn get(&self, c: Corner) -> Option<&RatPi> {
        self.values.get(c.index())
    }

    pub fn set(&mut self, c: Corner, value: RatPi) {
        self.values[c.index()] = value;
    }

    pub fn face(&self, f: usize) -> Option<[&RatPi; 3]> {
        let s = self.values.get(3 * f..3 * f + 3)?;
        Some([&s[0], &s[1], &s[2]])
    }

    fn covers(&self, t: &Triangulation) -> Result<(), AnglesError> {
        if self.values.len() < t.num_corners() {
            return Err(AnglesError::MissingCorner(Corner::from_index(self.values.len())));
        }
        Ok(())
    }

    fn at(&self, c: Corner) -> &RatPi {
        &self.values[c.index()]
    }

    /// Checks every value lies in `(0, π)`.
    pub fn into_structure(self, t: &Triangulation) -> Result<AngleStructure, AnglesError> {
        self.covers(t)?;
        let (zero, pi) = (RatPi::zero(), RatPi::pi());
        for c in t.corners() {
            let v = self.at(c);
            if !v.in_open(&zero, &pi) {
                return Err(AnglesError::OutOfRange { corner: c, value: v.clone() });
            }
        }
        Ok(AngleStructure(self))
    }
}

/// A [`CornerValues`] whose every value lies in `(0, π)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AngleStructure(CornerValues);

impl AngleStructure {
    pub fn into_values(self) -> CornerValues {
        self.0
    }
}

impl Deref for AngleStructure {
    type Target = CornerValues;
    fn deref(&self) -> &CornerValues {
        &self.0
    }
}

/// Classifies three angles in `(0, π)`.
pub fn classify_triangle(a: &RatPi, b: &RatPi, c: &RatPi) -> Result<GeometryClass, AnglesError> {
    let (zero, pi) = (RatPi::zero(), RatPi::pi());
    for v in [a, b, c] {
        if !v.in_open(&zero, &pi) {
            return Err(AnglesError::TriangleOutOfRange(v.clone()));
        }
    }
    let sum = a + b + c;
    Ok(match sum.cmp(&pi) {
        std::cmp::Ordering::Equal => GeometryClass::Euclidean,
        std::cmp::Ordering::Less => GeometryClass::Hyperbolic,
        std::cmp::Ordering::Greater => {
            // v_j + v_k − v_i = sum − 2·v_i
            if [a, b, c].iter().all(|v| &sum - v.mul_int(2) < pi) {
                GeometryClass::Spherical
            } else {
                GeometryClass::NotGeometric
            }
        }
    })
}

/// The common class of all faces, or `NotGeometric` if they disagree.
pub fn classify_structure(t: &Triangulation, x: &CornerValues) -> Result<GeometryClass, AnglesError> {
    x.covers(t)?;
    let mut common = None;
    for f in 0..t.num_faces() {
        let [a, b, c] = x.face(f).expect("covered");
        let class = classify_triangle(a, b, c).map_err(|_| {
            let bad = t
                .corners()
                .skip(3 * f)
                .take(3)
                .find(|&k| !x.at(k).in_open(&RatPi::zero(), &RatPi::pi()))
                .expect("some corner is out of range");
            AnglesError::OutOfRange { corner: bad, value: x.at(bad).clone() }
        })?;
        match common {
            None => common = Some(class),
            Some(prev) if prev != class => return Ok(GeometryClass::NotGeometric),
            _ => {}
        }
    }
    Ok(common.unwrap_or(GeometryClass::NotGeometric))
}

/// `D_x(e) = x_i + x_i'` over the two corners facing `e`.
pub fn edge_invariant(t: &Triangulation, x: &CornerValues) -> Result<EdgeFunction, AnglesError> {
    x.covers(t)?;
    let values = (0..t.num_edges())
        .map(|e| {
            let (i, j) = t.corners_facing(e).expect("edge in range");
            x.at(i) + x.at(j)
        })
        .collect();
    Ok(EdgeFunction::new(InvariantKind::Edge, values))
}

/// `𝒟_x(e) = x_j + x_k + x_j' + x_k' − x_i − x_i'`.
///
/// For a self-glued edge both facing corners sit in one face, and each side
/// contributes that face's two corners other than its own facing corner.
pub fn delaunay_invariant(t: &Triangulation, x: &CornerValues) -> Result<EdgeFunction, AnglesError> {
    x.covers(t)?;
    let side = |c: Corner| {
        let [j, k] = c.others();
        x.at(j) + x.at(k) - x.at(c)
    };
    let values = (0..t.num_edges())
        .map(|e| {
            let (i, j) = t.corners_facing(e).expect("edge in range");
            side(i) + side(j)
        })
        .collect();
    Ok(EdgeFunction::new(InvariantKind::Delaunay, values))
}

/// `y_i = (π + x_i − x_j − x_k) / 2` per face.
pub fn corner_transform(t: &Triangulation, x: &CornerValues) -> Result<CornerValues, AnglesError> {
    x.covers(t)?;
    let values = t
        .corners()
        .map(|c| {
            let [j, k] = c.others();
            (RatPi::pi() + x.at(c) - x.at(j) - x.at(k)).half()
        })
        .collect();
    Ok(CornerValues::new(values))
}

/// `x_i = π − y_j − y_k` per face; inverse of [`corner_transform`].
pub fn corner_transform_inverse(
    t: &Triangulation,
    y: &CornerValues,
) -> Result<CornerValues, AnglesError> {
    y.covers(t)?;
    let values = t
        .corners()
        .map(|c| {
            let [j, k] = c.others();
            RatPi::pi() - y.at(j) - y.at(k)
        })
        .collect();
    Ok(CornerValues::new(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::fixtures::*;

    fn r(p: i64, q: i64) -> RatPi {
        RatPi::new(p, q)
    }

    #[test]
    fn triangle_classes() {
        let third = r(1, 3);
        assert_eq!(classify_triangle(&third, &third, &third), Ok(GeometryClass::Euclidean));
        let s = r(7, 20);
        assert_eq!(classify_triangle(&s, &s, &s), Ok(GeometryClass::Spherical));
        assert_eq!(
            classify_triangle(&r(9, 10), &r(9, 10), &r(1, 20)),
            Ok(GeometryClass::NotGeometric)
        );
        assert_eq!(
            classify_triangle(&r(1, 5), &r(3, 10), &r(2, 5)),
            Ok(GeometryClass::Hyperbolic)
        );
        // boundary: b + c − a = π exactly is not spherical
        assert_eq!(
            classify_triangle(&r(1, 4), &r(5, 8), &r(5, 8)),
            Ok(GeometryClass::NotGeometric)
        );
        assert!(classify_triangle(&r(0, 1), &third, &third).is_err());
        assert!(classify_triangle(&RatPi::pi(), &third, &third).is_err());
    }

    #[test]
    fn structure_classes() {
        let t = tetrahedron();
        let sph = CornerValues::constant(&t, r(7, 20));
        assert_eq!(classify_structure(&t, &sph), Ok(GeometryClass::Spherical));
        let hyp = CornerValues::constant(&t, r(3, 10));
        assert_eq!(classify_structure(&t, &hyp), Ok(GeometryClass::Hyperbolic));

        let p = pillow();
        let mut mixed = CornerValues::constant(&p, r(1, 3));
        mixed.set(Corner::new(1, 0), r(1, 4));
        assert_eq!(classify_structure(&p, &mixed), Ok(GeometryClass::NotGeometric));

        let short = CornerValues::new(vec![r(1, 3); 5]);
        assert_eq!(
            classify_structure(&p, &short),
            Err(AnglesError::MissingCorner(Corner::new(1, 2)))
        );
    }

    #[test]
    fn invariants_of_constant_structures() {
        let t = tetrahedron();
        let x = CornerValues::constant(&t, r(7, 20));
        let d = edge_invariant(&t, &x).unwrap();
        assert!(d.values().iter().all(|v| *v == r(7, 10)));
        assert_eq!(d.len(), 6);
        let dd = delaunay_invariant(&t, &x).unwrap();
        assert!(dd.values().iter().all(|v| *v == r(7, 10)));

        let e = CornerValues::constant(&t, r(1, 3));
        let d = edge_invariant(&t, &e).unwrap();
        let dd = delaunay_invariant(&t, &e).unwrap();
        for (a, b) in d.values().iter().zip(dd.values()) {
            assert_eq!(*a, r(2, 3));
            assert_eq!(*b, r(2, 3));
            assert_eq!(a.mul_int(2) + b, RatPi::from_int(2));
        }
    }

    #[test]
    fn self_glued_invariants() {
        let t = self_glued_pair();
        let (u, v, w) = (r(1, 5), r(1, 4), r(1, 3));
        let x = CornerValues::new(vec![u.clone(), v.clone(), w.clone(), r(1, 6), r(1, 7), r(1, 8)]);
        let d = edge_invariant(&t, &x).unwrap();
        assert_eq!(d.values()[0], &u + &v);
        // each side: face 0 minus its own facing corner
        let dd = delaunay_invariant(&t, &x).unwrap();
        let side0 = &v + &w - &u;
        let side1 = &u + &w - &v;
        assert_eq!(dd.values()[0], side0 + side1);
        assert_eq!(dd.values()[0], w.mul_int(2));
    }

    #[test]
    fn transform_examples() {
        let t = tetrahedron();
        let y = corner_transform(&t, &CornerValues::constant(&t, r(3, 10))).unwrap();
        assert!(y.values().iter().all(|v| *v == r(7, 20)));
        assert_eq!(classify_structure(&t, &y), Ok(GeometryClass::Spherical));
        let fixed = CornerValues::constant(&t, r(1, 3));
        assert_eq!(corner_transform(&t, &fixed).unwrap(), fixed);

        let x = corner_transform_inverse(&t, &CornerValues::constant(&t, r(7, 20))).unwrap();
        assert!(x.values().iter().all(|v| *v == r(3, 10)));
        assert_eq!(corner_transform_inverse(&t, &fixed).unwrap(), fixed);
    }

    #[test]
    fn validation_into_structure() {
        let t = pillow();
        let mut x = CornerValues::constant(&t, r(1, 3));
        assert!(x.clone().into_structure(&t).is_ok());
        x.set(Corner::new(1, 1), RatPi::pi());
        assert_eq!(
            x.into_structure(&t),
            Err(AnglesError::OutOfRange { corner: Corner::new(1, 1), value: RatPi::pi() })
        );
    }

    #[test]
    fn maps_must_be_complete() {
        let t = pillow();
        let mut map = BTreeMap::new();
        for c in t.corners().take(5) {
            map.insert(c, r(1, 3));
        }
        assert_eq!(
            CornerValues::from_map(&t, &map),
            Err(AnglesError::MissingCorner(Corner::new(1, 2)))
        );
        map.insert(Corner::new(2, 0), r(1, 3));
        assert_eq!(
            CornerValues::from_map(&t, &map),
            Err(AnglesError::UnknownCorner(Corner::new(2, 0)))
        );
        let mut d = BTreeMap::new();
        d.insert(0, r(1, 2));
        d.insert(1, r(1, 2));
        assert_eq!(
            EdgeFunction::from_map(&t, InvariantKind::Edge, &d),
            Err(AnglesError::MissingEdge(2))
        );
    }
}
