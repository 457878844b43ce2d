//! Candidate preservers, feasibility checks and the savings objective.

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Instance, Weight, INFINITY};
use crate::local::{build_local_graph, Path, ShortestPathDag};

/// A subgraph `H` given by edge ids, with one witness path per demand pair
/// (in pair order) once finalized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreserverSolution {
    edges: Vec<EdgeId>,
    witnesses: Vec<Path>,
}

impl PreserverSolution {
    /// `H` is the union of the witness paths.
    pub fn from_witnesses(witnesses: Vec<Path>) -> Self {
        let mut edges: Vec<EdgeId> = witnesses.iter().flat_map(|p| p.edges.iter().copied()).collect();
        edges.sort_unstable();
        edges.dedup();
        Self { edges, witnesses }
    }

    /// An edge set without witnesses.
    pub fn from_edges(mut edges: Vec<EdgeId>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        Self {
            edges,
            witnesses: Vec::new(),
        }
    }

    pub fn with_witnesses(mut self, witnesses: Vec<Path>) -> Self {
        self.witnesses = witnesses;
        self
    }

    /// Sorted edge ids of `H`.
    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn witnesses(&self) -> &[Path] {
        &self.witnesses
    }

    pub fn cost(&self, instance: &Instance) -> Weight {
        instance.graph().total_weight(self.edges.iter().copied())
    }

    /// `U − c(H)`; negative when `H` is wasteful.
    pub fn objective(&self, instance: &Instance) -> i64 {
        trivial_bound_of(instance) as i64 - self.cost(instance) as i64
    }

    pub fn edge_mask(&self, edge_count: usize) -> Vec<bool> {
        let mut mask = vec![false; edge_count];
        for &e in &self.edges {
            mask[e] = true;
        }
        mask
    }
}

pub fn local_graphs(instance: &Instance) -> Result<Vec<ShortestPathDag>> {
    instance
        .pairs()
        .iter()
        .map(|&(s, t)| build_local_graph(instance.graph(), s, t))
        .collect()
}

/// `U = Σ dist_G(s, t)` over all demand pairs.
pub fn trivial_upper_bound(instance: &Instance) -> Result<Weight> {
    Ok(trivial_bound_of(instance))
}

fn trivial_bound_of(instance: &Instance) -> Weight {
    (0..instance.pair_count()).map(|i| instance.distance(i)).sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityVerdict {
    /// Indices of pairs whose distance `H` fails to preserve.
    pub violated: Vec<usize>,
}

impl FeasibilityVerdict {
    pub fn is_feasible(&self) -> bool {
        self.violated.is_empty()
    }
}

/// Compares `dist_H(s, t)` with `dist_G(s, t)` for every pair.
pub fn verify_feasible(instance: &Instance, edges: &[EdgeId]) -> FeasibilityVerdict {
    let graph = instance.graph();
    let mut mask = vec![false; graph.edge_count()];
    for &e in edges {
        if e < mask.len() {
            mask[e] = true;
        }
    }
    let violated = instance
        .pairs()
        .iter()
        .enumerate()
        .filter(|&(i, &(s, t))| {
            let d = graph.shortest_distances_within(s, &mask)[t];
            d == INFINITY || d != instance.distance(i)
        })
        .map(|(i, _)| i)
        .collect();
    FeasibilityVerdict { violated }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SavingsReport {
    pub upper_bound: Weight,
    pub cost: Weight,
    pub objective: i64,
    /// `(e, u_e, (u_e − 1)·c(e))` for every edge of `H`.
    pub per_edge: Vec<(EdgeId, usize, i64)>,
}

/// Evaluates `U − c(H)` and `Σ (u_e − 1) c(e)` and checks that they agree.
pub fn savings_report(instance: &Instance, solution: &PreserverSolution) -> Result<SavingsReport> {
    let graph = instance.graph();
    if solution.witnesses().len() != instance.pair_count() {
        return Err(Error::InfeasibleInput(format!(
            "{} witness paths for {} pairs",
            solution.witnesses().len(),
            instance.pair_count()
        )));
    }
    let in_h = solution.edge_mask(graph.edge_count());
    let mut uses = vec![0usize; graph.edge_count()];
    for (i, (path, &(s, t))) in solution.witnesses().iter().zip(instance.pairs()).enumerate() {
        let valid = path.is_walk_in(graph)
            && path.source() == Some(s)
            && path.target() == Some(t)
            && path.weight(graph) == instance.distance(i)
            && path.edges.iter().all(|&e| in_h[e]);
        if !valid {
            return Err(Error::NonShortestWitness(s, t));
        }
        for &e in &path.edges {
            uses[e] += 1;
        }
    }
    let upper_bound = trivial_bound_of(instance);
    let cost = solution.cost(instance);
    let objective = upper_bound as i64 - cost as i64;
    let per_edge: Vec<(EdgeId, usize, i64)> = solution
        .edges()
        .iter()
        .map(|&e| (e, uses[e], (uses[e] as i64 - 1) * graph.weight(e) as i64))
        .collect();
    if let Some(&(e, _, _)) = per_edge.iter().find(|&&(e, u, _)| u == 0 && graph.weight(e) > 0) {
        return Err(Error::UncoveredEdge(e));
    }
    let decomposed: i64 = per_edge.iter().map(|&(_, _, s)| s).sum();
    debug_assert_eq!(decomposed, objective);
    if decomposed != objective {
        return Err(Error::InfeasibleInput(format!(
            "objective {objective} disagrees with per-edge savings {decomposed}"
        )));
    }
    Ok(SavingsReport {
        upper_bound,
        cost,
        objective,
        per_edge,
    })
}

/// Completes per-pair witnesses: pairs without one get a path inside `H` when
/// `H` already preserves their distance, otherwise the lexicographically
/// smallest shortest path of `G`. `H` becomes the union of the witnesses.
pub fn complete_witnesses(
    instance: &Instance,
    dags: &[ShortestPathDag],
    edges: &[EdgeId],
    mut witnesses: Vec<Option<Path>>,
) -> PreserverSolution {
    let mut mask = vec![false; instance.graph().edge_count()];
    for &e in edges {
        mask[e] = true;
    }
    witnesses.resize(instance.pair_count(), None);
    let paths = witnesses
        .into_iter()
        .zip(dags)
        .map(|(w, dag)| {
            w.unwrap_or_else(|| dag.path_within(&mask).unwrap_or_else(|| dag.first_path()))
        })
        .collect();
    PreserverSolution::from_witnesses(paths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Edge, WeightedGraph};

    fn chain() -> Instance {
        let edges = [(0, 1), (1, 2), (2, 3)]
            .iter()
            .map(|&(tail, head)| Edge { tail, head, weight: 1 })
            .collect();
        let g = WeightedGraph::new(true, 4, edges).unwrap();
        Instance::new(g, vec![(0, 2), (1, 3)], 0.5).unwrap()
    }

    #[test]
    fn upper_bound_sums_distances() {
        assert_eq!(trivial_upper_bound(&chain()).unwrap(), 4);
    }

    #[test]
    fn whole_graph_is_feasible_and_empty_is_not() {
        let inst = chain();
        assert!(verify_feasible(&inst, &[0, 1, 2]).is_feasible());
        assert_eq!(verify_feasible(&inst, &[]).violated, vec![0, 1]);
    }

    #[test]
    fn chain_savings_report() {
        let inst = chain();
        let dags = local_graphs(&inst).unwrap();
        let sol = complete_witnesses(&inst, &dags, &[], vec![]);
        let r = savings_report(&inst, &sol).unwrap();
        assert_eq!((r.upper_bound, r.cost, r.objective), (4, 3, 1));
        assert_eq!(r.per_edge, vec![(0, 1, 0), (1, 2, 1), (2, 1, 0)]);
    }

    #[test]
    fn non_shortest_witness_is_rejected() {
        let edges = vec![
            Edge { tail: 0, head: 1, weight: 1 },
            Edge { tail: 1, head: 2, weight: 1 },
            Edge { tail: 0, head: 2, weight: 3 },
        ];
        let g = WeightedGraph::new(true, 3, edges).unwrap();
        let inst = Instance::new(g, vec![(0, 2)], 0.5).unwrap();
        let detour = Path { nodes: vec![0, 2], edges: vec![2] };
        let sol = PreserverSolution::from_witnesses(vec![detour]);
        assert!(matches!(savings_report(&inst, &sol), Err(Error::NonShortestWitness(0, 2))));
    }

    #[test]
    fn uncovered_positive_edge_is_rejected() {
        let inst = chain();
        let dags = local_graphs(&inst).unwrap();
        let sol = complete_witnesses(&inst, &dags, &[], vec![]);
        let padded = PreserverSolution::from_edges(vec![0, 1, 2]).with_witnesses(vec![
            sol.witnesses()[0].clone(),
            Path { nodes: vec![1, 2, 3], edges: vec![1, 2] },
        ]);
        assert!(savings_report(&inst, &padded).is_ok());
        let single = Instance::new(inst.graph().clone(), vec![(0, 2)], 0.5).unwrap();
        let extra = PreserverSolution::from_edges(vec![0, 1, 2]).with_witnesses(vec![sol.witnesses()[0].clone()]);
        assert!(matches!(savings_report(&single, &extra), Err(Error::UncoveredEdge(2))));
    }
}
