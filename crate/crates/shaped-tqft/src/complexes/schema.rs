use serde::{Deserialize, Serialize};

use super::{build_complex, local_edge, GaugeFixing, Gluing, ShapeStructure, Triangulation};
use crate::error::{Error, Result};

pub const SCHEMA: &str = "shaped-triangulation/1";

/// A local edge `{v0, v1}` of tetrahedron `tet`, naming its quotient edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeRef {
    pub tet: usize,
    pub edge: [usize; 2],
}

impl EdgeRef {
    pub fn resolve(&self, x: &Triangulation) -> Result<usize> {
        let [a, b] = self.edge;
        if self.tet >= x.num_tetrahedra() || a > 3 || b > 3 || a == b {
            return Err(Error::InvalidParameter(format!("bad edge reference {self:?}")));
        }
        Ok(x.edge(self.tet, local_edge(a, b)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaugeTerm {
    #[serde(flatten)]
    pub edge: EdgeRef,
    pub coeff: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FileGluing {
    pub a: [usize; 2],
    pub b: [usize; 2],
    /// defaults to the order-preserving identification
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perm: Option<[usize; 3]>,
}

/// On-disk triangulation:
/// `{ "tets", "orientations", "gluings": [{ "a", "b", "perm" }], "angles" }`
/// plus optional gauge terms, boundary state, and the distinguished edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    #[serde(default = "default_schema")]
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub tets: usize,
    pub orientations: Vec<i8>,
    pub gluings: Vec<FileGluing>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angles: Option<Vec<[f64; 3]>>,
    /// one coordinate term per interior vertex, in vertex order
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauge: Option<Vec<GaugeTerm>>,
    /// values on the boundary edges, in increasing edge order
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_state: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub knot_edge: Option<EdgeRef>,
}

fn default_schema() -> String {
    SCHEMA.to_string()
}

impl ComplexFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let f: Self = serde_json::from_str(text).map_err(|e| {
            Error::InvalidParameter(format!("line {} column {}: {e}", e.line(), e.column()))
        })?;
        if f.schema != SCHEMA {
            return Err(Error::InvalidParameter(format!("unsupported schema {:?}", f.schema)));
        }
        if f.orientations.len() != f.tets {
            return Err(Error::InvalidParameter(format!(
                "field orientations: {} entries for {} tetrahedra",
                f.orientations.len(),
                f.tets
            )));
        }
        if let Some(a) = &f.angles {
            if a.len() != f.tets {
                return Err(Error::InvalidParameter(format!(
                    "field angles: {} entries for {} tetrahedra",
                    a.len(),
                    f.tets
                )));
            }
        }
        Ok(f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn gluings(&self) -> Vec<Gluing> {
        self.gluings
            .iter()
            .map(|g| match g.perm {
                Some(perm) => Gluing { a: g.a, b: g.b, perm },
                None => Gluing::ordered(g.a[0], g.a[1], g.b[0], g.b[1]),
            })
            .collect()
    }

    pub fn triangulation(&self) -> Result<Triangulation> {
        build_complex(&self.orientations, &self.gluings())
    }

    pub fn shape(&self) -> Result<ShapeStructure> {
        let a = self
            .angles
            .clone()
            .ok_or_else(|| Error::InvalidParameter("field angles is missing".into()))?;
        ShapeStructure::new(a)
    }

    /// The stored gauge; vertex order follows the interior vertices.
    pub fn gauge_fixing(&self, x: &Triangulation) -> Result<Option<GaugeFixing>> {
        let Some(terms) = &self.gauge else { return Ok(None) };
        let interior = x.interior_vertices();
        if terms.len() != interior.len() {
            return Err(Error::InvalidGauge(format!(
                "{} gauge terms for {} interior vertices",
                terms.len(),
                interior.len()
            )));
        }
        let mut forms = Vec::new();
        for (v, t) in interior.iter().zip(terms) {
            forms.push((*v, t.edge.resolve(x)?, t.coeff));
        }
        Ok(Some(GaugeFixing::coordinate(&forms)))
    }

    pub fn from_parts(
        name: &str,
        orientations: &[i8],
        gluings: &[Gluing],
        angles: Option<Vec<[f64; 3]>>,
    ) -> Self {
        Self {
            schema: default_schema(),
            name: Some(name.to_string()),
            tets: orientations.len(),
            orientations: orientations.to_vec(),
            gluings: gluings.iter().map(|g| FileGluing { a: g.a, b: g.b, perm: Some(g.perm) }).collect(),
            angles,
            gauge: None,
            boundary_state: None,
            knot_edge: None,
        }
    }
}
