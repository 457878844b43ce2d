//! Seeded random and grid instance generators.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Edge, Instance, NodeId, Weight, WeightedGraph, INFINITY};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomSpec {
    pub nodes: usize,
    pub edges: usize,
    pub pairs: usize,
    pub min_weight: Weight,
    pub max_weight: Weight,
    pub directed: bool,
    pub epsilon: f64,
    pub seed: u64,
}

fn edge_key(directed: bool, u: NodeId, v: NodeId) -> (NodeId, NodeId) {
    if directed {
        (u, v)
    } else {
        (u.min(v), u.max(v))
    }
}

/// A random spanning tree (random orientation when directed) plus distinct
/// extra edges, then `pairs` distinct reachable pairs.
pub fn gen_random(spec: RandomSpec) -> Result<Instance> {
    let RandomSpec { nodes: n, edges: m, pairs: p, directed, .. } = spec;
    if n < 2 {
        return Err(Error::InfeasibleParameters("need at least two nodes".into()));
    }
    if spec.min_weight > spec.max_weight {
        return Err(Error::InfeasibleParameters("empty weight range".into()));
    }
    let max_edges = if directed { n * (n - 1) } else { n * (n - 1) / 2 };
    if m < n - 1 || m > max_edges {
        return Err(Error::InfeasibleParameters(format!("{m} edges do not fit {n} connected nodes")));
    }
    let max_pairs = if directed { n * (n - 1) } else { n * (n - 1) / 2 };
    if p > max_pairs {
        return Err(Error::InfeasibleParameters(format!("{p} pairs exceed the {max_pairs} available")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut order: Vec<NodeId> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut used = BTreeSet::new();
    let mut ends: Vec<(NodeId, NodeId)> = Vec::with_capacity(m);
    for i in 1..n {
        let a = order[i];
        let b = order[rng.gen_range(0..i)];
        let (u, v) = if directed && rng.gen_bool(0.5) { (b, a) } else { (a, b) };
        used.insert(edge_key(directed, u, v));
        ends.push((u, v));
    }
    let extra = m - (n - 1);
    if 2 * m > max_edges {
        let mut candidates: Vec<(NodeId, NodeId)> = (0..n)
            .flat_map(|u| (0..n).map(move |v| (u, v)))
            .filter(|&(u, v)| u != v && (directed || u < v) && !used.contains(&edge_key(directed, u, v)))
            .collect();
        candidates.shuffle(&mut rng);
        ends.extend(candidates.into_iter().take(extra));
    } else {
        while ends.len() < m {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v && used.insert(edge_key(directed, u, v)) {
                ends.push((u, v));
            }
        }
    }
    let edges = ends
        .into_iter()
        .map(|(tail, head)| Edge {
            tail,
            head,
            weight: rng.gen_range(spec.min_weight..=spec.max_weight),
        })
        .collect();
    let graph = WeightedGraph::new(directed, n, edges)?;
    let pairs = sample_pairs(&graph, p, &mut rng)?;
    Instance::new(graph, pairs, spec.epsilon)
}

fn sample_pairs(graph: &WeightedGraph, p: usize, rng: &mut ChaCha8Rng) -> Result<Vec<(NodeId, NodeId)>> {
    let n = graph.node_count();
    let mut reach: Vec<Option<Vec<Weight>>> = vec![None; n];
    let mut seen = BTreeSet::new();
    let mut pairs = Vec::with_capacity(p);
    let mut attempts = 0usize;
    let limit = 1000 * p + 1000;
    while pairs.len() < p {
        attempts += 1;
        if attempts > limit {
            return Err(Error::InfeasibleParameters(format!(
                "found only {} reachable pairs after {limit} attempts",
                pairs.len()
            )));
        }
        let s = rng.gen_range(0..n);
        let t = rng.gen_range(0..n);
        if s == t || seen.contains(&edge_key(graph.is_directed(), s, t)) {
            continue;
        }
        let dist = reach[s].get_or_insert_with(|| graph.shortest_distances(s));
        if dist[t] == INFINITY {
            continue;
        }
        seen.insert(edge_key(graph.is_directed(), s, t));
        pairs.push((s, t));
    }
    Ok(pairs)
}

/// Undirected `rows × cols` grid with unit weights; edges listed row by row,
/// right neighbour before lower neighbour.
pub fn gen_grid(rows: usize, cols: usize, pairs: usize, epsilon: f64, seed: u64) -> Result<Instance> {
    if rows * cols < 2 {
        return Err(Error::InfeasibleParameters("grid needs at least two nodes".into()));
    }
    let n = rows * cols;
    if pairs > n * (n - 1) / 2 {
        return Err(Error::InfeasibleParameters(format!("{pairs} pairs exceed the grid's node pairs")));
    }
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push(Edge { tail: id(r, c), head: id(r, c + 1), weight: 1 });
            }
            if r + 1 < rows {
                edges.push(Edge { tail: id(r, c), head: id(r + 1, c), weight: 1 });
            }
        }
    }
    let graph = WeightedGraph::new(false, n, edges)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = sample_pairs(&graph, pairs, &mut rng)?;
    Instance::new(graph, pairs, epsilon)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(seed: u64) -> RandomSpec {
        RandomSpec {
            nodes: 10,
            edges: 20,
            pairs: 5,
            min_weight: 1,
            max_weight: 4,
            directed: true,
            epsilon: 0.5,
            seed,
        }
    }

    #[test]
    fn same_seed_same_instance() {
        let a = gen_random(spec(4)).unwrap();
        let b = gen_random(spec(4)).unwrap();
        assert_eq!(a.graph(), b.graph());
        assert_eq!(a.pairs(), b.pairs());
        let c = gen_random(spec(5)).unwrap();
        assert!(a.graph() != c.graph() || a.pairs() != c.pairs());
    }

    #[test]
    fn grid_three_by_three_has_twelve_edges() {
        let g = gen_grid(3, 3, 4, 0.5, 1).unwrap();
        assert_eq!(g.graph().edge_count(), 12);
        assert_eq!(g.pair_count(), 4);
    }

    #[test]
    fn no_duplicate_edges_even_when_dense() {
        let inst = gen_random(RandomSpec { edges: 40, directed: false, ..spec(2) }).unwrap();
        let keys: BTreeSet<_> = inst
            .graph()
            .edges()
            .iter()
            .map(|e| edge_key(false, e.tail, e.head))
            .collect();
        assert_eq!(keys.len(), 40);
    }

    #[test]
    fn impossible_parameters_are_rejected() {
        assert!(matches!(gen_random(RandomSpec { edges: 5, ..spec(0) }), Err(Error::InfeasibleParameters(_))));
        assert!(matches!(gen_random(RandomSpec { edges: 91, ..spec(0) }), Err(Error::InfeasibleParameters(_))));
        assert!(matches!(gen_grid(1, 1, 1, 0.5, 0), Err(Error::InfeasibleParameters(_))));
    }
}
