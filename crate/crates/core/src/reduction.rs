//! Undirected → directed reduction.
//!
//! Every undirected edge `{v_i, v_j}` of weight `c` becomes a gadget with two
//! fresh nodes `v'` and `v''`, four zero-weight arcs `v_i → v'`, `v_j → v'`,
//! `v'' → v_i`, `v'' → v_j`, and the middle arc `v' → v''` of weight `c`.
//! The reduced graph has `n + 2m` nodes and `5m` edges, keeps all pairwise
//! distances between original nodes, and solutions correspond through the
//! middle arcs with equal objective.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeId, Instance, NodeId, WeightedGraph};
use crate::local::Path;
use crate::solution::{verify_feasible, PreserverSolution};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gadget {
    pub original_edge: EdgeId,
    pub entry: NodeId,
    pub exit: NodeId,
    /// `[v_i→v', v_j→v', v'→v'', v''→v_i, v''→v_j]`
    pub edges: [EdgeId; 5],
}

impl Gadget {
    pub fn middle(&self) -> EdgeId {
        self.edges[2]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionMap {
    pub original_nodes: usize,
    /// `(v_i, v_j)` of every original edge.
    pub endpoints: Vec<(NodeId, NodeId)>,
    pub gadgets: Vec<Gadget>,
}

pub fn undirected_to_directed(instance: &Instance) -> Result<(Instance, ReductionMap)> {
    let graph = instance.graph();
    if graph.is_directed() {
        return Err(Error::AlreadyDirected);
    }
    let n = graph.node_count();
    let mut edges = Vec::with_capacity(5 * graph.edge_count());
    let mut gadgets = Vec::with_capacity(graph.edge_count());
    for (id, e) in graph.edges().iter().enumerate() {
        let entry = n + 2 * id;
        let exit = entry + 1;
        let base = edges.len();
        edges.extend([
            Edge { tail: e.tail, head: entry, weight: 0 },
            Edge { tail: e.head, head: entry, weight: 0 },
            Edge { tail: entry, head: exit, weight: e.weight },
            Edge { tail: exit, head: e.tail, weight: 0 },
            Edge { tail: exit, head: e.head, weight: 0 },
        ]);
        gadgets.push(Gadget {
            original_edge: id,
            entry,
            exit,
            edges: [base, base + 1, base + 2, base + 3, base + 4],
        });
    }
    let reduced = WeightedGraph::new(true, n + 2 * graph.edge_count(), edges)?;
    let directed = Instance::new(reduced, instance.pairs().to_vec(), instance.epsilon())?;
    Ok((
        directed,
        ReductionMap {
            original_nodes: n,
            endpoints: graph.edges().iter().map(|e| (e.tail, e.head)).collect(),
            gadgets,
        },
    ))
}

impl ReductionMap {
    /// Which gadget a reduced edge id belongs to.
    pub fn gadget_of(&self, reduced_edge: EdgeId) -> &Gadget {
        &self.gadgets[reduced_edge / 5]
    }

    /// Maps an undirected solution to the reduced graph (all five gadget
    /// edges per selected edge). Witness paths are translated when present.
    pub fn map_solution_forward(&self, solution: &PreserverSolution) -> PreserverSolution {
        let edges = solution
            .edges()
            .iter()
            .flat_map(|&e| self.gadgets[e].edges)
            .collect();
        let witnesses = solution
            .witnesses()
            .iter()
            .map(|p| {
                let mut out = Path {
                    nodes: vec![p.nodes[0]],
                    edges: Vec::new(),
                };
                for (i, &e) in p.edges.iter().enumerate() {
                    let g = &self.gadgets[e];
                    let (from, to) = (p.nodes[i], p.nodes[i + 1]);
                    let tail = self.endpoints[e].0;
                    let enter = if from == tail { g.edges[0] } else { g.edges[1] };
                    let leave = if to == tail { g.edges[3] } else { g.edges[4] };
                    out.nodes.extend([g.entry, g.exit, to]);
                    out.edges.extend([enter, g.middle(), leave]);
                }
                out
            })
            .collect();
        PreserverSolution::from_edges(edges).with_witnesses(witnesses)
    }

    /// Maps a feasible reduced solution back: an original edge is selected
    /// iff its gadget's middle arc is.
    pub fn map_solution_back(
        &self,
        reduced: &Instance,
        directed_solution: &PreserverSolution,
    ) -> Result<PreserverSolution> {
        let verdict = verify_feasible(reduced, directed_solution.edges());
        if !verdict.is_feasible() {
            return Err(Error::InfeasibleInput(format!(
                "{} pairs violated on the reduced instance",
                verdict.violated.len()
            )));
        }
        let edges: Vec<EdgeId> = directed_solution
            .edges()
            .iter()
            .filter(|&&e| e % 5 == 2)
            .map(|&e| self.gadget_of(e).original_edge)
            .collect();
        let witnesses: Vec<Path> = directed_solution
            .witnesses()
            .iter()
            .map(|p| Path {
                nodes: p.nodes.iter().copied().filter(|&v| v < self.original_nodes).collect(),
                edges: p
                    .edges
                    .iter()
                    .filter(|&&e| e % 5 == 2)
                    .map(|&e| self.gadget_of(e).original_edge)
                    .collect(),
            })
            .collect();
        Ok(PreserverSolution::from_edges(edges).with_witnesses(witnesses))
    }

    /// One `orig_edge_id v' v'' mid_edge_id` line per original edge.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for g in &self.gadgets {
            let _ = writeln!(out, "{} {} {} {}", g.original_edge, g.entry, g.exit, g.middle());
        }
        out
    }
}
