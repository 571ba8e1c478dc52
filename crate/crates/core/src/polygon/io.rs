//! JSON polygon files.
//!
//! ```json
//! { "model": "klein", "vertices": [[u, v], ...], "angles": [[1, 2], null, ...], "name": "..." }
//! ```
//!
//! `angles[k]` is the interior angle between sides `k+1` and `k+2` (labels),
//! i.e. the angle at the vertex ending side `k+1`. `null` entries and a
//! missing list mean "measure from the coordinates".

use serde::{Deserialize, Serialize};

use super::{LabeledPolygon, PolygonError, ValidationReport};
use crate::hyperbolic::HPoint;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Klein,
    Poincare,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonFile {
    pub model: Model,
    pub vertices: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angles: Option<Vec<Option<[u32; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl PolygonFile {
    pub fn to_polygon(&self) -> Result<LabeledPolygon, PolygonError> {
        let pts = self
            .vertices
            .iter()
            .map(|[u, v]| match self.model {
                Model::Klein => HPoint::from_klein(*u, *v),
                Model::Poincare => HPoint::from_poincare(*u, *v),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut poly = LabeledPolygon::from_vertices(pts)?;
        if let Some(angles) = &self.angles {
            let decl: Vec<Option<(u32, u32)>> = angles.iter().map(|a| a.map(|[p, q]| (p, q))).collect();
            poly = poly.with_declared_angles(&decl)?;
        }
        if let Some(name) = &self.name {
            poly = poly.with_name(name.clone());
        }
        Ok(poly)
    }

    /// Klein-model description of a polygon, with its declared angles.
    pub fn from_polygon(poly: &LabeledPolygon) -> PolygonFile {
        let angles: Vec<Option<[u32; 2]>> = poly.angles().iter().map(|a| a.declared().map(|(p, q)| [p, q])).collect();
        PolygonFile {
            model: Model::Klein,
            vertices: poly.klein_vertices(),
            angles: angles.iter().any(Option::is_some).then_some(angles),
            name: poly.name.clone(),
        }
    }
}

/// Parse and validate a polygon file.
pub fn load_polygon(json: &str) -> Result<(LabeledPolygon, ValidationReport), PolygonError> {
    let file: PolygonFile = serde_json::from_str(json).map_err(|e| PolygonError::Parse(e.to_string()))?;
    let poly = file.to_polygon()?;
    let report = poly.validate();
    Ok((poly, report))
}
