use thiserror::Error;

use crate::graph::VertexId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("duplicate vertex label {0}")]
    DuplicateVertex(u64),
    #[error("edge references unknown vertex {0}")]
    UnknownVertex(u64),
    #[error("self-loop at vertex {0}")]
    SelfLoop(u64),
    #[error("parallel edge between {0} and {1}")]
    ParallelEdge(u64, u64),
    #[error("graph is not connected")]
    Disconnected,
    #[error("root {0} is not a vertex of the graph")]
    RootNotInGraph(u64),
    #[error("total cost or prize overflows 64 bits")]
    Overflow,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TourError {
    #[error("empty vertex sequence")]
    Empty,
    #[error("vertex {0} appears more than once")]
    NotSimple(VertexId),
    #[error("no edge between consecutive vertices {0} and {1}")]
    MissingEdge(VertexId, VertexId),
    #[error("tour does not contain the root")]
    RootAbsent,
    #[error("a tour needs at least three vertices, got {0}")]
    TooShort(usize),
    #[error("vertex {0} is out of range")]
    UnknownVertex(VertexId),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PreprocessError {
    #[error("root has no incident edges")]
    RootIsolated,
}
