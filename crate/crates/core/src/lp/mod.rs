//! Restricted relaxation over thin edges and its randomized rounding.
//!
//! Flow variables live on the arcs of each pair's local graph, so flow
//! conservation is checked per local node. Edge-level values `x_e^(s,t)` are
//! the sum over the (at most two) arcs of edge `e`.

pub mod decompose;
pub mod mixing;
pub mod restricted;
pub mod rounding;

use crate::graph::{EdgeId, Instance};
use crate::local::{Path, ShortestPathDag};

pub use decompose::{path_decompose, PathFlow};
pub use mixing::{mix_solutions, uniform_extension_solution};
pub use restricted::{build_restricted_lp, solve_lp, RestrictedLp};
pub use rounding::{algorithm2_with, expected_savings, run_algorithm2, Algorithm2Outcome, ExpectedSavings};

/// Conservation and capacity tolerance.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// Fractional point of the restricted polytope.
#[derive(Clone, Debug, PartialEq)]
pub struct FractionalSolution {
    /// `x[pair][arc]`, arcs indexed as in the pair's local graph.
    pub x: Vec<Vec<f64>>,
    /// `y[e]` for every edge of the graph.
    pub y: Vec<f64>,
    /// `Σ_{qualifying e} (Σ_pairs x_e − y_e) c(e)`.
    pub objective: f64,
}

impl FractionalSolution {
    /// Builds a solution from arc flows, setting `y_e = max_pair x_e` and
    /// evaluating the objective on `qualifying` edges.
    pub fn from_flows(instance: &Instance, dags: &[ShortestPathDag], x: Vec<Vec<f64>>, qualifying: &[bool]) -> Self {
        let m = instance.graph().edge_count();
        let mut y = vec![0.0f64; m];
        for (dag, flows) in dags.iter().zip(&x) {
            for (e, v) in edge_values(dag, flows) {
                y[e] = y[e].max(v);
            }
        }
        let mut sol = Self { x, y, objective: 0.0 };
        sol.objective = edge_savings(instance, dags, &sol)
            .iter()
            .enumerate()
            .filter(|&(e, _)| qualifying[e])
            .map(|(_, s)| s)
            .sum();
        sol
    }

    /// Indicator of one path per pair.
    pub fn from_paths(instance: &Instance, dags: &[ShortestPathDag], paths: &[Path], qualifying: &[bool]) -> Self {
        let x = dags
            .iter()
            .zip(paths)
            .map(|(dag, p)| {
                let mut flows = vec![0.0; dag.arcs().len()];
                for i in dag.path_arcs(p).expect("path lies in its local graph") {
                    flows[i] += 1.0;
                }
                flows
            })
            .collect();
        Self::from_flows(instance, dags, x, qualifying)
    }

    /// `x_e^(s,t)` for pair `pair`, as `(edge, value)` with edges ascending.
    pub fn pair_edge_values(&self, dags: &[ShortestPathDag], pair: usize) -> Vec<(EdgeId, f64)> {
        edge_values(&dags[pair], &self.x[pair])
    }

    /// Largest `|in − out − d_v|` over the local nodes of `pair`.
    pub fn conservation_residual(&self, dags: &[ShortestPathDag], pair: usize) -> f64 {
        conservation_residual(&dags[pair], &self.x[pair])
    }
}

/// Aggregates arc flows into edge values (edges ascending).
pub fn edge_values(dag: &ShortestPathDag, flows: &[f64]) -> Vec<(EdgeId, f64)> {
    let mut out: Vec<(EdgeId, f64)> = dag.edge_ids().iter().map(|&e| (e, 0.0)).collect();
    for (a, &f) in dag.arcs().iter().zip(flows) {
        let k = dag.edge_ids().binary_search(&a.edge).expect("arc edge is listed");
        out[k].1 += f;
    }
    for v in &mut out {
        v.1 = v.1.min(1.0);
    }
    out
}

/// `(Σ_pairs x_e − y_e) c(e)` for every edge.
pub fn edge_savings(instance: &Instance, dags: &[ShortestPathDag], sol: &FractionalSolution) -> Vec<f64> {
    let graph = instance.graph();
    let mut total = vec![0.0f64; graph.edge_count()];
    for (dag, flows) in dags.iter().zip(&sol.x) {
        for (e, v) in edge_values(dag, flows) {
            total[e] += v;
        }
    }
    total
        .iter()
        .enumerate()
        .map(|(e, &sum)| (sum - sol.y[e]) * graph.weight(e) as f64)
        .collect()
}

/// Largest violation of `in − out = d_v` (−1 at `s`, +1 at `t`).
pub fn conservation_residual(dag: &ShortestPathDag, flows: &[f64]) -> f64 {
    let n = dag.nodes().len();
    let mut balance = vec![0.0f64; n];
    for (a, &f) in dag.arcs().iter().zip(flows) {
        balance[dag.position(a.to).unwrap()] += f;
        balance[dag.position(a.from).unwrap()] -= f;
    }
    let s = dag.position(dag.source()).unwrap();
    let t = dag.position(dag.target()).unwrap();
    balance[s] += 1.0;
    balance[t] -= 1.0;
    balance.iter().fold(0.0f64, |acc, b| acc.max(b.abs()))
}
