//! The serialized form of a necklace.

use serde::{Deserialize, Serialize};

use super::json::to_canonical_json;
use super::IoError;
use crate::diagram::parse_pd;
use crate::inversive::{encode, Shape};
use crate::necklace::{Ball, BallRole, BallSource, CrossingRecord, Necklace};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    /// The input diagram as PD code.
    pub diagram: String,
    /// Outer-face disk radius.
    pub outer_radius: f64,
    /// Requested solver precision.
    pub precision: f64,
    /// Precision the packing was actually solved to.
    pub solver_precision: f64,
    /// Version of the tool that wrote the document.
    pub version: String,
}

impl Default for Metadata {
    fn default() -> Self {
        Metadata {
            diagram: String::new(),
            outer_radius: 1.0,
            precision: crate::circlepack::DEFAULT_PRECISION,
            solver_precision: crate::circlepack::DEFAULT_PRECISION,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallRow {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub r: f64,
    /// `medial`, `crossing` or `bridge`.
    pub role: String,
    /// `arc:<label>` or `crossing:<index>`.
    pub source: String,
}

/// The balls of one crossing, so that a loaded document can be verified.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingRow {
    pub crossing: usize,
    pub pyramid: [usize; 5],
    pub bridges: [usize; 2],
    pub closest: i8,
    pub over: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct NecklaceDocument {
    pub metadata: Metadata,
    pub balls: Vec<BallRow>,
    pub threads: Vec<Vec<usize>>,
    #[serde(default)]
    pub crossings: Vec<CrossingRow>,
}

impl NecklaceDocument {
    pub fn from_necklace(necklace: &Necklace) -> Self {
        let balls = necklace
            .balls()
            .iter()
            .map(|b| {
                let [x, y, z] = b.center();
                BallRow { id: b.id, x, y, z, r: b.radius(), role: b.role.name().into(), source: b.source.to_string() }
            })
            .collect();
        let crossings = necklace
            .crossings()
            .iter()
            .map(|c| CrossingRow {
                crossing: c.crossing,
                pyramid: c.pyramid,
                bridges: c.bridges,
                closest: c.closest,
                over: c.over,
            })
            .collect();
        NecklaceDocument {
            metadata: Metadata {
                diagram: necklace.diagram().to_string(),
                outer_radius: necklace.outer_radius(),
                precision: necklace.precision(),
                solver_precision: necklace.solver_precision(),
                version: env!("CARGO_PKG_VERSION").to_string(),
            },
            balls,
            threads: necklace.threads().to_vec(),
            crossings,
        }
    }

    /// Checks the document invariants: positive radii, ids equal to their
    /// positions, and thread ids referencing existing balls.
    pub fn validate(&self) -> Result<(), IoError> {
        for (i, b) in self.balls.iter().enumerate() {
            if b.id != i {
                return Err(IoError::Parse(format!("ball at position {i} has id {}", b.id)));
            }
            if !(b.r > 0.0 && b.r.is_finite()) || ![b.x, b.y, b.z].iter().all(|c| c.is_finite()) {
                return Err(IoError::Parse(format!("ball {i} has invalid center or radius")));
            }
        }
        if let Some(id) = self.threads.iter().flatten().find(|&&id| id >= self.balls.len()) {
            return Err(IoError::Parse(format!("thread references missing ball {id}")));
        }
        Ok(())
    }

    /// Rebuilds the necklace (diagram, inversive coordinates, records).
    pub fn to_necklace(&self) -> Result<Necklace, IoError> {
        self.validate()?;
        let diagram = parse_pd(&self.metadata.diagram).map_err(|e| IoError::Parse(format!("metadata.diagram: {e}")))?;
        let mut balls = Vec::with_capacity(self.balls.len());
        for row in &self.balls {
            let role = BallRole::from_name(&row.role)
                .ok_or_else(|| IoError::Parse(format!("ball {}: unknown role {:?}", row.id, row.role)))?;
            let source: BallSource = row.source.parse().map_err(IoError::Parse)?;
            let coords = encode(&Shape::Solid { center: vec![row.x, row.y, row.z], radius: row.r })
                .map_err(|e| IoError::Parse(format!("ball {}: {e}", row.id)))?;
            balls.push(Ball { id: row.id, role, source, coords });
        }
        let crossings = self
            .crossings
            .iter()
            .map(|c| CrossingRecord {
                crossing: c.crossing,
                pyramid: c.pyramid,
                bridges: c.bridges,
                closest: c.closest,
                over: c.over,
            })
            .collect();
        let necklace = Necklace::from_parts(
            diagram,
            balls,
            self.threads.clone(),
            crossings,
            self.metadata.precision,
            self.metadata.outer_radius,
        )?;
        Ok(necklace.with_solver_precision(self.metadata.solver_precision))
    }

    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self, IoError> {
        let doc: NecklaceDocument = serde_json::from_str(text).map_err(|e| IoError::Parse(e.to_string()))?;
        doc.validate()?;
        Ok(doc)
    }
}
