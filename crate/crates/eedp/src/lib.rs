//! Algorithmic toolkit for the edge-disjoint paths problem on Eulerian
//! digraphs: incidence multigraphs with splitting off and Menger
//! primitives, instance normalization with small-cut reductions, an
//! exhaustive oracle, Frank's two-star solver via the directed cut
//! criterion, wall/jump/cross/router/swirl structure analysis, and the
//! router-based irrelevant-cycle reduction pipeline.

pub mod dot;
pub mod flow;
pub mod format;
pub mod generate;
pub mod graph;
pub mod normalize;
pub mod oracle;
pub mod path;
pub mod reducer;
pub mod structure;
pub mod twostar;

pub use graph::{induced_cut, line_graph, Cut, EdgeId, IncidenceDigraph, VertexId};
pub use oracle::{solve_exact, Budget, Verdict};
pub use path::{euler_decompose, Instance, Linkage, Trail, TrailKind};

/// Library-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EedpError {
    #[error("graph: {0}")]
    Graph(String),
    #[error("path: {0}")]
    Path(String),
    #[error("two-star: {0}")]
    TwoStar(String),
    #[error("reduction: {0}")]
    Reduction(String),
    #[error("structure: {0}")]
    Structure(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}
