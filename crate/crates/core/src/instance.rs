//! Instance documents: a ground set, a matroid and an objective.
//!
//! ```json
//! {
//!   "name": "triangle",
//!   "ground": { "n": 3 },
//!   "matroid": { "kind": "graphic", "edges": [[0, 1], [1, 2], [0, 2]] },
//!   "objective": { "kind": "linear", "weights": [1.0, 2.0, 3.0] }
//! }
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matroid::{build_matroid, GroundSet, MatroidError, MatroidOracle, MatroidSpec};
use crate::objective::{build_objective, ObjectiveError, ObjectiveOracle, ObjectiveSpec};

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed instance document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("instance has no objective section")]
    MissingObjective,
    #[error("matroid and objective disagree on the ground set")]
    GroundMismatch,
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Objective(#[from] ObjectiveError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroundDoc {
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceDoc {
    #[serde(default)]
    pub name: String,
    pub ground: GroundDoc,
    pub matroid: MatroidSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<ObjectiveSpec>,
}

impl InstanceDoc {
    pub fn from_json(text: &str) -> Result<Self, InstanceError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, InstanceError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|source| InstanceError::Io { path: path.display().to_string(), source })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance documents always serialize")
    }

    pub fn build_matroid(&self) -> Result<MatroidOracle, InstanceError> {
        Ok(build_matroid(self.matroid.clone(), GroundSet::dense(self.ground.n))?)
    }

    pub fn build(&self) -> Result<Instance, InstanceError> {
        let matroid = self.build_matroid()?;
        let spec = self.objective.clone().ok_or(InstanceError::MissingObjective)?;
        let objective = build_objective(spec, &GroundSet::dense(self.ground.n))?;
        Instance::new(self.name.clone(), matroid, objective)
    }
}

/// A compiled instance. Elements are `0..n`.
#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub matroid: MatroidOracle,
    pub objective: ObjectiveOracle,
}

impl Instance {
    pub fn new(name: impl Into<String>, matroid: MatroidOracle, objective: ObjectiveOracle) -> Result<Self, InstanceError> {
        if matroid.ground() != objective.ground() {
            return Err(InstanceError::GroundMismatch);
        }
        Ok(Instance { name: name.into(), matroid, objective })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, InstanceError> {
        InstanceDoc::load(path)?.build()
    }

    pub fn n(&self) -> usize {
        self.matroid.len()
    }

    pub fn elements(&self) -> &[usize] {
        self.matroid.ground().elements()
    }
}
