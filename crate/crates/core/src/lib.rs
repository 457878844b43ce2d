//! Cost-sharing pairwise distance preservers.
//!
//! Given a weighted graph and demand pairs, find a subgraph `H` that keeps
//! every pair's distance while maximizing the savings `U − c(H)` against the
//! sum of pair distances `U`.

pub mod bench;
pub mod error;
pub mod generate;
pub mod graph;
pub mod hardness;
pub mod io;
pub mod local;
pub mod lp;
pub mod main_algo;
pub mod oracle;
pub mod pipeline;
pub mod reduction;
pub mod solution;
pub mod thick;
pub mod thickness;

pub use error::{Error, Result};
pub use graph::{Edge, EdgeId, Instance, NodeId, Weight, WeightedGraph};
pub use local::{build_local_graph, Path, ShortestPathDag};
pub use pipeline::{solve, Algorithm, SolveOptions};
pub use solution::{savings_report, trivial_upper_bound, verify_feasible, PreserverSolution};
pub use thickness::{classify_edges, ThicknessProfile};
