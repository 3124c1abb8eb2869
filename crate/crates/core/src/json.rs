//! JSON documents shared by the CLI, the library, and other-language
//! bindings.
//!
//! Scalars serialize per pipeline: exact rationals as `"p/q"` strings,
//! floats as JSON numbers. Field names follow the shared schema: `n`, `N`,
//! `points` or `lifts`, `monodromy`, `a`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::polygon::{InvariantField, LiftedPolygon, ProjectivePoint, TwistedPolygon};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldDoc<S> {
    pub n: usize,
    #[serde(rename = "N")]
    pub num_vertices: usize,
    pub a: Vec<Vec<S>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LiftedPolygonDoc<S> {
    pub n: usize,
    #[serde(rename = "N")]
    pub num_vertices: usize,
    pub lifts: Vec<Vec<S>>,
    pub monodromy: Vec<Vec<S>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TwistedPolygonDoc<S> {
    pub n: usize,
    #[serde(rename = "N")]
    pub num_vertices: usize,
    pub points: Vec<Vec<S>>,
    pub monodromy: Vec<Vec<S>>,
}

/// Either polygon flavor, distinguished by its vertex key.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolygonDoc<S> {
    Lifted(LiftedPolygonDoc<S>),
    Twisted(TwistedPolygonDoc<S>),
}

/// Output of `generate`: the sampled field and its reconstruction.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenerateDoc<S> {
    pub invariants: FieldDoc<S>,
    pub polygon: LiftedPolygonDoc<S>,
}

impl<S: Scalar> FieldDoc<S> {
    pub fn from_field(inv: &InvariantField<S>) -> Self {
        FieldDoc {
            n: inv.dim(),
            num_vertices: inv.num_vertices(),
            a: inv.rows().to_vec(),
        }
    }

    pub fn into_field(self) -> Result<InvariantField<S>> {
        if self.a.len() != self.num_vertices {
            return Err(Error::InvalidInput(format!(
                "N = {} but {} invariant rows",
                self.num_vertices,
                self.a.len()
            )));
        }
        InvariantField::new(self.n, self.a)
    }
}

impl<S: Scalar> LiftedPolygonDoc<S> {
    pub fn from_polygon(lp: &LiftedPolygon<S>) -> Self {
        LiftedPolygonDoc {
            n: lp.dim(),
            num_vertices: lp.num_vertices(),
            lifts: lp.lifts().to_vec(),
            monodromy: lp.monodromy().to_rows(),
        }
    }

    pub fn into_polygon(self) -> Result<LiftedPolygon<S>> {
        if self.lifts.len() != self.num_vertices {
            return Err(Error::InvalidInput(format!(
                "N = {} but {} lifts",
                self.num_vertices,
                self.lifts.len()
            )));
        }
        LiftedPolygon::new(self.n, self.lifts, Matrix::from_rows(self.monodromy))
    }
}

impl<S: Scalar> TwistedPolygonDoc<S> {
    pub fn from_polygon(poly: &TwistedPolygon<S>) -> Self {
        TwistedPolygonDoc {
            n: poly.dim(),
            num_vertices: poly.num_vertices(),
            points: poly.points().iter().map(|p| p.coords().to_vec()).collect(),
            monodromy: poly.monodromy().to_rows(),
        }
    }

    pub fn into_polygon(self) -> Result<TwistedPolygon<S>> {
        if self.points.len() != self.num_vertices {
            return Err(Error::InvalidInput(format!(
                "N = {} but {} points",
                self.num_vertices,
                self.points.len()
            )));
        }
        let points = self
            .points
            .into_iter()
            .map(ProjectivePoint::new)
            .collect::<Result<Vec<_>>>()?;
        TwistedPolygon::new(self.n, points, Matrix::from_rows(self.monodromy))
    }
}
