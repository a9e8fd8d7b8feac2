//! JSON instance files. See `docs/format.md` for the exact layout.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::angles::{
    classify_structure, delaunay_invariant, edge_invariant, AnglesError, CornerValues,
    EdgeFunction, GeometryClass, InvariantKind,
};
use crate::exactnum::{NumError, RatPi};
use crate::surface::{Corner, SurfaceError, Triangulation};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Angles(#[from] AnglesError),
    #[error("malformed corner key {0:?}, expected \"face/slot\"")]
    CornerKey(String),
    #[error("corner {0} listed twice")]
    DuplicateCorner(Corner),
    #[error("instance has no {0}")]
    Missing(&'static str),
}

impl IoError {
    /// Stable machine-readable name for error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            IoError::Json(_) => "json",
            IoError::Num(NumError::ZeroDenominator(_)) => "zero-denominator",
            IoError::Num(_) => "malformed-number",
            IoError::Surface(_) => "invalid-surface",
            IoError::Angles(_) => "invalid-angles",
            IoError::CornerKey(_) | IoError::DuplicateCorner(_) => "invalid-corner",
            IoError::Missing(_) => "missing-field",
        }
    }
}

/// Raw file contents. Rationals are kept as strings until the surface is
/// known so that parse errors and range errors are reported separately.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub faces: Vec<[usize; 3]>,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    pub edge: Option<BTreeMap<usize, String>>,
    #[serde(rename = "Dd", default, skip_serializing_if = "Option::is_none")]
    pub delaunay: Option<BTreeMap<usize, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<GeometryClass>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureFile {
    pub corners: Vec<(String, String)>,
}

/// A parsed and validated instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub triangulation: Triangulation,
    pub edge: Option<EdgeFunction>,
    pub delaunay: Option<EdgeFunction>,
    pub structure: Option<CornerValues>,
    pub class: Option<GeometryClass>,
}

fn parse_corner(key: &str) -> Result<Corner, IoError> {
    let bad = || IoError::CornerKey(key.to_string());
    let (f, s) = key.split_once('/').ok_or_else(bad)?;
    let face = f.parse().map_err(|_| bad())?;
    let slot: u8 = s.parse().map_err(|_| bad())?;
    if slot > 2 {
        return Err(bad());
    }
    Ok(Corner { face, slot })
}

fn parse_edges(
    t: &Triangulation,
    kind: InvariantKind,
    raw: &BTreeMap<usize, String>,
) -> Result<EdgeFunction, IoError> {
    let map = raw
        .iter()
        .map(|(&e, v)| Ok((e, v.parse::<RatPi>()?)))
        .collect::<Result<BTreeMap<_, _>, IoError>>()?;
    Ok(EdgeFunction::from_map(t, kind, &map)?)
}

fn render_edges(f: &EdgeFunction) -> BTreeMap<usize, String> {
    f.values().iter().enumerate().map(|(e, v)| (e, v.to_string())).collect()
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Validates the surface, then every payload against it.
    pub fn resolve(&self) -> Result<Instance, IoError> {
        let t = Triangulation::validate(&self.faces)?;
        let edge = self.edge.as_ref().map(|m| parse_edges(&t, InvariantKind::Edge, m)).transpose()?;
        let delaunay =
            self.delaunay.as_ref().map(|m| parse_edges(&t, InvariantKind::Delaunay, m)).transpose()?;
        let structure = match &self.structure {
            None => None,
            Some(s) => {
                let mut map = BTreeMap::new();
                for (key, value) in &s.corners {
                    let c = parse_corner(key)?;
                    if map.insert(c, value.parse::<RatPi>()?).is_some() {
                        return Err(IoError::DuplicateCorner(c));
                    }
                }
                Some(CornerValues::from_map(&t, &map)?)
            }
        };
        Ok(Instance { triangulation: t, edge, delaunay, structure, class: self.class })
    }
}

impl Instance {
    pub fn parse(text: &str) -> Result<Self, IoError> {
        InstanceFile::parse(text)?.resolve()
    }

    pub fn new(triangulation: Triangulation) -> Self {
        Instance { triangulation, edge: None, delaunay: None, structure: None, class: None }
    }

    /// The prescribed invariant of the given kind.
    pub fn invariant(&self, kind: InvariantKind) -> Result<&EdgeFunction, IoError> {
        match kind {
            InvariantKind::Edge => self.edge.as_ref().ok_or(IoError::Missing("\"D\" map")),
            InvariantKind::Delaunay => self.delaunay.as_ref().ok_or(IoError::Missing("\"Dd\" map")),
        }
    }

    pub fn set_invariant(&mut self, f: EdgeFunction) {
        match f.kind {
            InvariantKind::Edge => self.edge = Some(f),
            InvariantKind::Delaunay => self.delaunay = Some(f),
        }
    }

    /// Fills in both invariants and the class from the structure.
    pub fn with_computed_invariants(mut self) -> Result<Self, IoError> {
        let x = self.structure.as_ref().ok_or(IoError::Missing("structure"))?;
        let t = &self.triangulation;
        self.edge = Some(edge_invariant(t, x)?);
        self.delaunay = Some(delaunay_invariant(t, x)?);
        self.class = Some(classify_structure(t, x)?);
        Ok(self)
    }

    pub fn to_file(&self) -> InstanceFile {
        InstanceFile {
            faces: self.triangulation.faces().to_vec(),
            edge: self.edge.as_ref().map(render_edges),
            delaunay: self.delaunay.as_ref().map(render_edges),
            structure: self.structure.as_ref().map(|x| StructureFile {
                corners: self
                    .triangulation
                    .corners()
                    .map(|c| (c.to_string(), x.values()[c.index()].to_string()))
                    .collect(),
            }),
            class: self.class,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("instance files always serialize")
    }
}

/// `{"error": kind, "message": text}`.
pub fn error_json(kind: &str, message: &str) -> String {
    serde_json::to_string(&serde_json::json!({ "error": kind, "message": message }))
        .expect("string map serializes")
}
