//! Weighted (di)graphs, demand-pair instances and exact integer shortest paths.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use crate::error::{Error, Result};

pub type NodeId = usize;
pub type EdgeId = usize;
pub type Weight = u64;

/// Distance sentinel for unreachable nodes.
pub const INFINITY: Weight = Weight::MAX;

/// Largest accepted edge weight; keeps path sums far from overflow.
pub const MAX_WEIGHT: Weight = 1 << 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub tail: NodeId,
    pub head: NodeId,
    pub weight: Weight,
}

/// One traversal direction of an edge. Directed graphs have exactly one arc
/// per edge, undirected graphs two.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arc {
    pub from: NodeId,
    pub to: NodeId,
    pub edge: EdgeId,
}

#[derive(Clone, Debug)]
pub struct WeightedGraph {
    directed: bool,
    node_count: usize,
    edges: Vec<Edge>,
    out_arcs: Vec<Vec<Arc>>,
    in_arcs: Vec<Vec<Arc>>,
}

impl PartialEq for WeightedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.directed == other.directed
            && self.node_count == other.node_count
            && self.edges == other.edges
    }
}

impl WeightedGraph {
    pub fn new(directed: bool, node_count: usize, edges: Vec<Edge>) -> Result<Self> {
        let mut out_arcs = vec![Vec::new(); node_count];
        let mut in_arcs = vec![Vec::new(); node_count];
        for (id, e) in edges.iter().enumerate() {
            if e.tail >= node_count || e.head >= node_count {
                return Err(Error::Validation(format!(
                    "edge {id} references a node outside [0, {node_count})"
                )));
            }
            if e.tail == e.head {
                return Err(Error::Validation(format!("edge {id} is a self-loop")));
            }
            if e.weight > MAX_WEIGHT {
                return Err(Error::Validation(format!("edge {id} weight exceeds {MAX_WEIGHT}")));
            }
            let fwd = Arc { from: e.tail, to: e.head, edge: id };
            out_arcs[e.tail].push(fwd);
            in_arcs[e.head].push(fwd);
            if !directed {
                let back = Arc { from: e.head, to: e.tail, edge: id };
                out_arcs[e.head].push(back);
                in_arcs[e.tail].push(back);
            }
        }
        for list in &mut out_arcs {
            list.sort_by_key(|a| (a.to, a.edge));
        }
        for list in &mut in_arcs {
            list.sort_by_key(|a| (a.from, a.edge));
        }
        Ok(Self {
            directed,
            node_count,
            edges,
            out_arcs,
            in_arcs,
        })
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    pub fn weight(&self, id: EdgeId) -> Weight {
        self.edges[id].weight
    }

    /// Arcs leaving `node`, sorted by (head, edge id).
    pub fn out_arcs(&self, node: NodeId) -> &[Arc] {
        &self.out_arcs[node]
    }

    /// Arcs entering `node`, sorted by (tail, edge id).
    pub fn in_arcs(&self, node: NodeId) -> &[Arc] {
        &self.in_arcs[node]
    }

    pub fn total_weight(&self, edges: impl IntoIterator<Item = EdgeId>) -> Weight {
        edges.into_iter().map(|e| self.weight(e)).sum()
    }

    /// Single-source distances; unreachable nodes get [`INFINITY`].
    pub fn shortest_distances(&self, source: NodeId) -> Vec<Weight> {
        self.dijkstra(source, |n| &self.out_arcs[n], |a| a.to, None)
    }

    /// Distances from every node *to* `target`.
    pub fn distances_to(&self, target: NodeId) -> Vec<Weight> {
        self.dijkstra(target, |n| &self.in_arcs[n], |a| a.from, None)
    }

    /// Single-source distances in the subgraph whose edges have `mask[e] == true`.
    pub fn shortest_distances_within(&self, source: NodeId, mask: &[bool]) -> Vec<Weight> {
        self.dijkstra(source, |n| &self.out_arcs[n], |a| a.to, Some(mask))
    }

    fn dijkstra<'a>(
        &'a self,
        source: NodeId,
        arcs: impl Fn(NodeId) -> &'a [Arc],
        next: impl Fn(&Arc) -> NodeId,
        mask: Option<&[bool]>,
    ) -> Vec<Weight> {
        let mut dist = vec![INFINITY; self.node_count];
        let mut heap = BinaryHeap::new();
        dist[source] = 0;
        heap.push(Reverse((0, source)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for arc in arcs(u) {
                if mask.is_some_and(|m| !m[arc.edge]) {
                    continue;
                }
                let v = next(arc);
                let nd = d + self.edges[arc.edge].weight;
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push(Reverse((nd, v)));
                }
            }
        }
        dist
    }
}

/// A CSPDP instance: graph, demand pairs and the approximation parameter.
#[derive(Clone, Debug)]
pub struct Instance {
    graph: WeightedGraph,
    pairs: Vec<(NodeId, NodeId)>,
    distances: Vec<Weight>,
    epsilon: f64,
}

impl Instance {
    /// Validates pairs (range, `s != t`, reachability) and ε ∈ (0, 1).
    /// Repeated pairs are dropped with a warning, keeping the first occurrence.
    pub fn new(graph: WeightedGraph, pairs: Vec<(NodeId, NodeId)>, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::Validation(format!("epsilon {epsilon} is outside (0, 1)")));
        }
        let n = graph.node_count();
        let mut seen = BTreeSet::new();
        let mut unique = Vec::with_capacity(pairs.len());
        for (s, t) in pairs {
            if s >= n || t >= n {
                return Err(Error::Validation(format!("pair ({s}, {t}) is out of range")));
            }
            if s == t {
                return Err(Error::Validation(format!("pair ({s}, {t}) has s == t")));
            }
            let key = if graph.is_directed() { (s, t) } else { (s.min(t), s.max(t)) };
            if !seen.insert(key) {
                log::warn!("dropping repeated demand pair ({s}, {t})");
                continue;
            }
            unique.push((s, t));
        }
        let mut distances = Vec::with_capacity(unique.len());
        for &(s, t) in &unique {
            let d = graph.shortest_distances(s)[t];
            if d == INFINITY {
                return Err(Error::UnreachablePair(s, t));
            }
            distances.push(d);
        }
        Ok(Self {
            graph,
            pairs: unique,
            distances,
            epsilon,
        })
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn pairs(&self) -> &[(NodeId, NodeId)] {
        &self.pairs
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `dist_G(s, t)` for the pair at `index`.
    pub fn distance(&self, index: usize) -> Weight {
        self.distances[index]
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::Validation(format!("epsilon {epsilon} is outside (0, 1)")));
        }
        self.epsilon = epsilon;
        Ok(self)
    }

    /// The same graph and ε restricted to the pairs at `indices` (in that order).
    pub fn restrict_pairs(&self, indices: &[usize]) -> Instance {
        Instance {
            graph: self.graph.clone(),
            pairs: indices.iter().map(|&i| self.pairs[i]).collect(),
            distances: indices.iter().map(|&i| self.distances[i]).collect(),
            epsilon: self.epsilon,
        }
    }
}
