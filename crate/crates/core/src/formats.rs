//! JSON documents exchanged with the command line.
//!
//! Floats are written by `serde_json` in shortest round-trip form, so every
//! document reads back to the identical `f64` values.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::embed::{self, classify, Isometry, IsometryClass, Model, PlanePolygon};
use crate::error::{Error, Result};
use crate::hyperelliptic::HyperParams;
use crate::teich::TeichParams;

/// Which chart a θ vector belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChartKind {
    Teich,
    Hyperelliptic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaDoc {
    pub genus: usize,
    pub kind: ChartKind,
    pub theta: Vec<f64>,
}

/// A θ document checked against its chart's layout.
#[derive(Clone, Debug, PartialEq)]
pub enum Theta {
    Teich(TeichParams),
    Hyper(HyperParams),
}

impl ThetaDoc {
    pub fn into_params(self) -> Result<Theta> {
        match self.kind {
            ChartKind::Teich => TeichParams::new(self.genus, self.theta).map(Theta::Teich),
            ChartKind::Hyperelliptic => HyperParams::new(self.genus, self.theta).map(Theta::Hyper),
        }
    }
}

impl From<&TeichParams> for ThetaDoc {
    fn from(p: &TeichParams) -> Self {
        ThetaDoc {
            genus: p.genus,
            kind: ChartKind::Teich,
            theta: p.theta.clone(),
        }
    }
}

impl From<&HyperParams> for ThetaDoc {
    fn from(p: &HyperParams) -> Self {
        ThetaDoc {
            genus: p.genus,
            kind: ChartKind::Hyperelliptic,
            theta: p.theta.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerticesDoc {
    pub model: Model,
    pub vertices: Vec<[f64; 2]>,
}

impl From<&PlanePolygon> for VerticesDoc {
    fn from(pp: &PlanePolygon) -> Self {
        VerticesDoc {
            model: pp.model,
            vertices: pp.vertices.iter().map(|v| [v.x, v.y]).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorDoc {
    pub matrix: [f64; 4],
    pub trace: f64,
    pub class: IsometryClass,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorsDoc {
    pub generators: Vec<GeneratorDoc>,
    pub relation_defect: f64,
}

impl GeneratorsDoc {
    pub fn new(gens: &[Isometry]) -> Self {
        let generators = gens
            .iter()
            .map(|g| {
                let n = g.normalized();
                GeneratorDoc {
                    matrix: n.to_array(),
                    trace: n.trace(),
                    class: classify(&n),
                }
            })
            .collect();
        GeneratorsDoc {
            generators,
            relation_defect: embed::relation_defect(gens),
        }
    }
}

/// Parse a document; syntax and shape errors become [`Error::MalformedInput`].
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::MalformedInput(e.to_string()))
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}
