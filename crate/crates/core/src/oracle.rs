//! Exhaustive optimum over per-pair shortest-path selections.
//!
//! The search walks the Cartesian product of every pair's simple shortest
//! paths in lexicographic order of the path-index vector. Adding a path to the
//! partial selection earns `c(e)` for each edge already used by an earlier
//! pair, which is exactly the increment of `Σ_e (Σ x − y) c(e)`.

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Instance, Weight};
use crate::local::{Path, ShortestPathDag};
use crate::solution::{local_graphs, PreserverSolution};
use crate::thickness::{classify_edges, ThicknessProfile};

pub const DEFAULT_CAP: u64 = 1_000_000;

/// Past this many optimal selections the classifiers answer `Unknown`.
pub const MAX_OPTIMA: usize = 10_000;

#[derive(Clone, Debug)]
pub struct OracleResult {
    pub objective: i64,
    /// Index into each pair's path list.
    pub choice: Vec<usize>,
    pub solution: PreserverSolution,
    /// Complete selections evaluated.
    pub examined: u64,
}

/// Every optimal selection of one search, or `None` for `choices` when there
/// are more than [`MAX_OPTIMA`] of them.
#[derive(Clone, Debug)]
pub struct OptimalSet {
    pub objective: i64,
    pub paths: Vec<Vec<Path>>,
    pub choices: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dominance {
    ThickDominant,
    ThinDominant,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lightness {
    Light,
    Heavy,
}

pub fn enumerate_shortest_paths(dag: &ShortestPathDag, cap: u64) -> Result<Vec<Path>> {
    dag.all_paths(cap)
}

/// Per-pair path lists, failing when the product of their sizes exceeds `cap`.
pub fn path_lists(dags: &[ShortestPathDag], cap: u64) -> Result<Vec<Vec<Path>>> {
    let mut product: u64 = 1;
    let mut lists = Vec::with_capacity(dags.len());
    for dag in dags {
        let paths = dag.all_paths(cap)?;
        product = product.saturating_mul(paths.len() as u64);
        if product > cap {
            return Err(Error::PathExplosion(cap));
        }
        lists.push(paths);
    }
    Ok(lists)
}

pub fn brute_force_optimum(instance: &Instance, cap: u64) -> Result<OracleResult> {
    brute_force_restricted(instance, None, cap)
}

/// Exhaustive optimum of the objective restricted to edges with `mask[e]`
/// (all edges when `mask` is `None`).
pub fn brute_force_restricted(instance: &Instance, mask: Option<&[bool]>, cap: u64) -> Result<OracleResult> {
    let dags = local_graphs(instance)?;
    let lists = path_lists(&dags, cap)?;
    let mut search = Search::new(instance, &lists, mask, false);
    search.run();
    let choice = search.best_choice.clone().unwrap_or_default();
    let objective = search.best;
    let witnesses = choice.iter().zip(&lists).map(|(&i, l)| l[i].clone()).collect();
    Ok(OracleResult {
        objective,
        choice,
        solution: PreserverSolution::from_witnesses(witnesses),
        examined: search.examined,
    })
}

pub fn optimal_set(instance: &Instance, mask: Option<&[bool]>, cap: u64) -> Result<OptimalSet> {
    let dags = local_graphs(instance)?;
    let lists = path_lists(&dags, cap)?;
    let mut search = Search::new(instance, &lists, mask, true);
    search.run();
    let choices = if search.overflow { None } else { Some(search.optima) };
    Ok(OptimalSet {
        objective: search.best,
        paths: lists,
        choices,
    })
}

/// Savings `Σ (u_e − 1) c(e)` of a selection, counted on edges where
/// `keep(e)` holds.
pub fn selection_savings(
    instance: &Instance,
    paths: &[&Path],
    keep: impl Fn(EdgeId) -> bool,
) -> i64 {
    let graph = instance.graph();
    let mut uses = vec![0i64; graph.edge_count()];
    for p in paths {
        for &e in &p.edges {
            uses[e] += 1;
        }
    }
    uses.iter()
        .enumerate()
        .filter(|&(e, &u)| u > 0 && keep(e))
        .map(|(e, &u)| (u - 1) * graph.weight(e) as i64)
        .sum()
}

/// Thick-dominant iff some optimum earns more than `z / m^ε` on thick edges.
pub fn classify_dominance(instance: &Instance, optima: &OptimalSet) -> Dominance {
    if optima.objective <= 0 {
        return Dominance::ThinDominant;
    }
    let Some(choices) = &optima.choices else {
        return Dominance::Unknown;
    };
    let dags = match local_graphs(instance) {
        Ok(d) => d,
        Err(_) => return Dominance::Unknown,
    };
    let profile = classify_edges(instance, &dags);
    let m = instance.graph().edge_count() as f64;
    let bound = optima.objective as f64 / m.powf(instance.epsilon());
    let thick_dominant = choices.iter().any(|c| {
        let sel: Vec<&Path> = c.iter().zip(&optima.paths).map(|(&i, l)| &l[i]).collect();
        selection_savings(instance, &sel, |e| profile.is_thick(e)) as f64 > bound
    });
    if thick_dominant {
        Dominance::ThickDominant
    } else {
        Dominance::ThinDominant
    }
}

/// Optimum of the objective restricted to thin edges.
pub fn thin_restricted_optimum(instance: &Instance, profile: &ThicknessProfile, cap: u64) -> Result<OracleResult> {
    let mask: Vec<bool> = (0..profile.edge_count).map(|e| !profile.is_thick(e)).collect();
    brute_force_restricted(instance, Some(&mask), cap)
}

/// Thin savings of `thin_optimum` kept by the pairs with `b² ≥ m`, compared
/// against `(1 − 1/m^ε)` of the thin optimum. Returns the verdict together
/// with `(retained, total)`.
pub fn classify_lightness(
    instance: &Instance,
    profile: &ThicknessProfile,
    thin_optimum: &OracleResult,
) -> (Lightness, i64, i64) {
    let retained_paths: Vec<&Path> = thin_optimum
        .solution
        .witnesses()
        .iter()
        .enumerate()
        .filter(|&(i, _)| !profile.is_sparse_pair(i))
        .map(|(_, p)| p)
        .collect();
    let retained = selection_savings(instance, &retained_paths, |e| !profile.is_thick(e));
    let total = thin_optimum.objective;
    let m = instance.graph().edge_count() as f64;
    let limit = (1.0 - m.powf(-instance.epsilon())) * total as f64;
    let verdict = if retained as f64 <= limit {
        Lightness::Light
    } else {
        Lightness::Heavy
    };
    (verdict, retained, total)
}

struct Search<'a> {
    lists: &'a [Vec<Path>],
    weights: Vec<Weight>,
    /// Best possible gain of pairs `i..` (suffix sums of each pair's heaviest path).
    optimistic: Vec<i64>,
    uses: Vec<u32>,
    current: Vec<usize>,
    best: i64,
    best_choice: Option<Vec<usize>>,
    collect_all: bool,
    optima: Vec<Vec<usize>>,
    overflow: bool,
    examined: u64,
}

impl<'a> Search<'a> {
    fn new(instance: &Instance, lists: &'a [Vec<Path>], mask: Option<&[bool]>, collect_all: bool) -> Self {
        let graph = instance.graph();
        let weights: Vec<Weight> = (0..graph.edge_count())
            .map(|e| if mask.is_none_or(|m| m[e]) { graph.weight(e) } else { 0 })
            .collect();
        let mut optimistic = vec![0i64; lists.len() + 1];
        for i in (0..lists.len()).rev() {
            let heaviest = lists[i]
                .iter()
                .map(|p| p.edges.iter().map(|&e| weights[e] as i64).sum::<i64>())
                .max()
                .unwrap_or(0);
            optimistic[i] = optimistic[i + 1] + heaviest;
        }
        Self {
            lists,
            weights,
            optimistic,
            uses: vec![0; graph.edge_count()],
            current: Vec::with_capacity(lists.len()),
            best: i64::MIN,
            best_choice: None,
            collect_all,
            optima: Vec::new(),
            overflow: false,
            examined: 0,
        }
    }

    fn run(&mut self) {
        self.descend(0, 0);
    }

    fn descend(&mut self, depth: usize, value: i64) {
        if depth == self.lists.len() {
            self.examined += 1;
            if value > self.best {
                self.best = value;
                self.best_choice = Some(self.current.clone());
                self.optima.clear();
                self.overflow = false;
            }
            if self.collect_all && value == self.best {
                if self.optima.len() < MAX_OPTIMA {
                    self.optima.push(self.current.clone());
                } else {
                    self.overflow = true;
                }
            }
            return;
        }
        let reach = value + self.optimistic[depth];
        if reach < self.best || (!self.collect_all && reach == self.best) {
            return;
        }
        let lists = self.lists;
        for (i, path) in lists[depth].iter().enumerate() {
            let mut gain = 0i64;
            for &e in &path.edges {
                if self.uses[e] > 0 {
                    gain += self.weights[e] as i64;
                }
                self.uses[e] += 1;
            }
            self.current.push(i);
            self.descend(depth + 1, value + gain);
            self.current.pop();
            for &e in &path.edges {
                self.uses[e] -= 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Edge, WeightedGraph};
    use crate::solution::savings_report;

    fn digraph(n: usize, edges: &[(usize, usize, u64)]) -> WeightedGraph {
        let edges = edges
            .iter()
            .map(|&(tail, head, weight)| Edge { tail, head, weight })
            .collect();
        WeightedGraph::new(true, n, edges).unwrap()
    }

    fn diamond_pairs() -> Instance {
        // s=0, a=1, b=2, t=3
        let g = digraph(4, &[(0, 1, 1), (1, 3, 1), (0, 2, 1), (2, 3, 1)]);
        Instance::new(g, vec![(0, 3), (1, 3)], 0.5).unwrap()
    }

    #[test]
    fn single_pair_is_zero() {
        let g = digraph(3, &[(0, 1, 2), (1, 2, 3)]);
        let inst = Instance::new(g, vec![(0, 2)], 0.5).unwrap();
        let r = brute_force_optimum(&inst, DEFAULT_CAP).unwrap();
        assert_eq!(r.objective, 0);
        assert_eq!(r.examined, 1);
    }

    #[test]
    fn chain_optimum_is_one() {
        let g = digraph(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1)]);
        let inst = Instance::new(g, vec![(0, 2), (1, 3)], 0.5).unwrap();
        let r = brute_force_optimum(&inst, DEFAULT_CAP).unwrap();
        assert_eq!(r.objective, 1);
        assert_eq!(savings_report(&inst, &r.solution).unwrap().objective, 1);
    }

    #[test]
    fn diamond_shares_the_common_edge() {
        let inst = diamond_pairs();
        let r = brute_force_optimum(&inst, DEFAULT_CAP).unwrap();
        assert_eq!(r.objective, 1);
        assert_eq!(r.choice, vec![0, 0]);
        assert_eq!(r.solution.witnesses()[0].nodes, vec![0, 1, 3]);
        // independent recount over both choices for the (s, t) pair
        let dags = local_graphs(&inst).unwrap();
        let lists = path_lists(&dags, 100).unwrap();
        let best = lists[0]
            .iter()
            .map(|p| selection_savings(&inst, &[p, &lists[1][0]], |_| true))
            .max()
            .unwrap();
        assert_eq!(best, r.objective);
    }

    #[test]
    fn series_diamonds_count_doubles() {
        for k in 1..=6usize {
            let mut edges = Vec::new();
            for d in 0..k {
                let base = 3 * d;
                edges.push((base, base + 1, 1));
                edges.push((base, base + 2, 1));
                edges.push((base + 1, base + 3, 1));
                edges.push((base + 2, base + 3, 1));
            }
            let g = digraph(3 * k + 1, &edges);
            let dag = crate::local::build_local_graph(&g, 0, 3 * k).unwrap();
            let paths = enumerate_shortest_paths(&dag, 1 << 10).unwrap();
            assert_eq!(paths.len(), 1 << k);
            let mut sorted = paths.clone();
            sorted.sort_by(|a, b| a.nodes.cmp(&b.nodes));
            assert_eq!(sorted, paths);
        }
    }

    #[test]
    fn cap_is_enforced_on_the_product() {
        let inst = diamond_pairs();
        assert!(matches!(brute_force_optimum(&inst, 1), Err(Error::PathExplosion(1))));
    }

    #[test]
    fn zero_objective_is_thin_dominant() {
        let g = digraph(3, &[(0, 1, 2), (1, 2, 3)]);
        let inst = Instance::new(g, vec![(0, 2)], 0.5).unwrap();
        let set = optimal_set(&inst, None, DEFAULT_CAP).unwrap();
        assert_eq!(classify_dominance(&inst, &set), Dominance::ThinDominant);
    }

    #[test]
    fn all_thick_positive_is_thick_dominant() {
        let g = digraph(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1)]);
        let inst = Instance::new(g, vec![(0, 2), (1, 3)], 0.5).unwrap();
        let set = optimal_set(&inst, None, DEFAULT_CAP).unwrap();
        assert_eq!(set.choices.as_ref().unwrap().len(), 1);
        assert_eq!(classify_dominance(&inst, &set), Dominance::ThickDominant);
    }

    #[test]
    fn optimal_set_lists_every_tie() {
        // two disjoint routes, one pair: both paths are optimal with value 0
        let g = digraph(4, &[(0, 1, 1), (1, 3, 1), (0, 2, 1), (2, 3, 1)]);
        let inst = Instance::new(g, vec![(0, 3)], 0.5).unwrap();
        let set = optimal_set(&inst, None, DEFAULT_CAP).unwrap();
        assert_eq!(set.choices.unwrap(), vec![vec![0], vec![1]]);
    }

    #[test]
    fn heavy_when_nothing_is_dropped() {
        let g = digraph(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1)]);
        let inst = Instance::new(g, vec![(0, 2), (1, 3)], 0.9).unwrap();
        let dags = local_graphs(&inst).unwrap();
        let mut profile = classify_edges(&inst, &dags);
        // force every edge thin and every pair dense
        profile.thick = vec![false; 3];
        profile.thin_count = vec![2, 2];
        let opt = thin_restricted_optimum(&inst, &profile, DEFAULT_CAP).unwrap();
        assert_eq!(opt.objective, 1);
        let (verdict, retained, total) = classify_lightness(&inst, &profile, &opt);
        assert_eq!((retained, total), (1, 1));
        assert_eq!(verdict, Lightness::Heavy);
        profile.thin_count = vec![1, 1];
        assert_eq!(classify_lightness(&inst, &profile, &opt).0, Lightness::Light);
    }

    #[test]
    fn optimal_selections_satisfy_the_multiplicity_inequality() {
        // (Σx − y)·v_e·c(e) ≤ (Σx)(v_e − 1)c(e) on every edge of every optimum
        let g = digraph(6, &[(0, 1, 1), (1, 2, 2), (2, 3, 1), (0, 4, 2), (4, 2, 1), (3, 5, 1), (1, 4, 1)]);
        let inst = Instance::new(g, vec![(0, 3), (1, 5), (0, 5), (4, 5)], 0.5).unwrap();
        let dags = local_graphs(&inst).unwrap();
        let profile = classify_edges(&inst, &dags);
        let set = optimal_set(&inst, None, DEFAULT_CAP).unwrap();
        for c in set.choices.unwrap() {
            let mut uses = vec![0i64; inst.graph().edge_count()];
            for (&i, l) in c.iter().zip(&set.paths) {
                for &e in &l[i].edges {
                    uses[e] += 1;
                }
            }
            for (e, &u) in uses.iter().enumerate() {
                let y = i64::from(u > 0);
                let v = profile.multiplicity[e] as i64;
                let w = inst.graph().weight(e) as i64;
                assert!((u - y) * v * w <= u * (v - 1) * w);
            }
        }
    }
}
