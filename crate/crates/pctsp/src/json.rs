//! Canonical instance files: versioned JSON with external vertex labels.

use std::fs;
use std::path::Path;

use pctsp_core::graph::{Cost, Prize};
use pctsp_core::{GraphError, Instance, InstanceMeta, SparseGraph};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FORMAT: &str = "pctsp-instance";
pub const VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum InstanceFileError {
    #[error("cannot read or write {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed instance file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported instance format {format} version {version}")]
    Version { format: String, version: u32 },
    #[error("invalid instance: {0}")]
    InvariantViolation(#[from] GraphError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub id: u64,
    pub prize: Prize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub u: u64,
    pub v: u64,
    pub cost: Cost,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MetadataRecord {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub base: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub kappa: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub prize_mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cost_mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub format: String,
    pub version: u32,
    pub name: String,
    /// External id of the root vertex.
    pub root: u64,
    pub quota: Prize,
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub metadata: Option<MetadataRecord>,
}

impl From<&Instance> for InstanceRecord {
    fn from(inst: &Instance) -> Self {
        let g = &inst.graph;
        InstanceRecord {
            format: FORMAT.into(),
            version: VERSION,
            name: inst.name.clone(),
            root: g.label(inst.root),
            quota: inst.quota,
            vertices: (0..g.n()).map(|v| VertexRecord { id: g.label(v), prize: g.prize(v) }).collect(),
            edges: g.edges().iter().map(|e| EdgeRecord { u: g.label(e.u), v: g.label(e.v), cost: e.cost }).collect(),
            metadata: inst.meta.as_ref().map(|m| MetadataRecord {
                base: m.base.clone(),
                kappa: m.kappa,
                alpha: m.alpha,
                prize_mode: m.prize_mode.clone(),
                cost_mode: m.cost_mode.clone(),
                seed: m.seed,
            }),
        }
    }
}

impl TryFrom<InstanceRecord> for Instance {
    type Error = InstanceFileError;

    fn try_from(rec: InstanceRecord) -> Result<Self, Self::Error> {
        if rec.format != FORMAT || rec.version != VERSION {
            return Err(InstanceFileError::Version { format: rec.format, version: rec.version });
        }
        let vertices: Vec<(u64, Prize)> = rec.vertices.iter().map(|v| (v.id, v.prize)).collect();
        let edges: Vec<(u64, u64, Cost)> = rec.edges.iter().map(|e| (e.u, e.v, e.cost)).collect();
        let graph = SparseGraph::new(&vertices, &edges)?;
        let root = graph.vertex_of_label(rec.root).ok_or(GraphError::RootNotInGraph(rec.root))?;
        let mut inst = Instance::new(rec.name, graph, root, rec.quota)?;
        inst.meta = rec.metadata.map(|m| InstanceMeta {
            base: m.base,
            kappa: m.kappa,
            alpha: m.alpha,
            prize_mode: m.prize_mode,
            cost_mode: m.cost_mode,
            seed: m.seed,
        });
        Ok(inst)
    }
}

pub fn to_json(inst: &Instance) -> String {
    let mut s = serde_json::to_string_pretty(&InstanceRecord::from(inst)).expect("instance records serialize");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<Instance, InstanceFileError> {
    serde_json::from_str::<InstanceRecord>(text)?.try_into()
}

pub fn save_instance(inst: &Instance, path: &Path) -> Result<(), InstanceFileError> {
    fs::write(path, to_json(inst)).map_err(|source| InstanceFileError::Io { path: path.display().to_string(), source })
}

pub fn load_instance(path: &Path) -> Result<Instance, InstanceFileError> {
    let text =
        fs::read_to_string(path).map_err(|source| InstanceFileError::Io { path: path.display().to_string(), source })?;
    from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use pctsp_core::instances::random_connected_instance;

    #[test]
    fn round_trip() {
        let inst = random_connected_instance(4, 9, 2, 20, 10, 0.5);
        let text = to_json(&inst);
        let back = from_json(&text).unwrap();
        assert_eq!(back, inst);
        assert_eq!(to_json(&back), text);
    }

    fn doc(edges: &str) -> String {
        format!(
            r#"{{"format":"pctsp-instance","version":1,"name":"t","root":1,"quota":1,
            "vertices":[{{"id":1,"prize":1}},{{"id":2,"prize":1}},{{"id":3,"prize":1}},{{"id":4,"prize":1}}],
            "edges":[{edges}]}}"#
        )
    }

    #[test]
    fn rejects_duplicate_edges() {
        let text = doc(r#"{"u":1,"v":2,"cost":1},{"u":2,"v":1,"cost":3},{"u":2,"v":3,"cost":1},{"u":3,"v":4,"cost":1}"#);
        assert!(matches!(from_json(&text), Err(InstanceFileError::InvariantViolation(GraphError::ParallelEdge(..)))));
    }

    #[test]
    fn rejects_disconnected_graphs() {
        let text = doc(r#"{"u":1,"v":2,"cost":1},{"u":3,"v":4,"cost":1}"#);
        assert!(matches!(from_json(&text), Err(InstanceFileError::InvariantViolation(GraphError::Disconnected))));
    }

    #[test]
    fn rejects_garbage_and_unknown_versions() {
        assert!(matches!(from_json("{"), Err(InstanceFileError::Parse(_))));
        let text = doc(r#"{"u":1,"v":2,"cost":1},{"u":2,"v":3,"cost":1},{"u":3,"v":4,"cost":1}"#).replace("\"version\":1", "\"version\":7");
        assert!(matches!(from_json(&text), Err(InstanceFileError::Version { .. })));
    }
}
