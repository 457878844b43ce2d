//! The main loop: run both algorithms, keep the better answer, prune pairs
//! with few thin edges, and repeat on the smaller pair set. The kept answer is
//! finally patched so that every original pair is served.

use serde::Serialize;

use crate::error::Result;
use crate::graph::Instance;
use crate::local::{Path, ShortestPathDag};
use crate::lp::algorithm2_with;
use crate::lp::rounding::DEFAULT_TRIALS;
use crate::solution::{complete_witnesses, local_graphs, verify_feasible, PreserverSolution};
use crate::thick::algorithm1_with;
use crate::thickness::{classify_edges, ThicknessProfile};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MainOptions {
    pub trials: usize,
    pub seed: u64,
}

impl Default for MainOptions {
    fn default() -> Self {
        Self {
            trials: DEFAULT_TRIALS,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub pairs_at_entry: usize,
    pub threshold: f64,
    /// Objectives against the original pairs, after completing witnesses.
    pub alg1_objective: i64,
    pub alg2_objective: i64,
    pub pairs_removed: usize,
    pub lower_bound: i64,
    pub non_contiguous: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct MainTrace {
    pub iterations: Vec<IterationRecord>,
    /// Original pair indices whose distance the kept subgraph missed.
    pub patched_pairs: Vec<usize>,
    pub final_objective: i64,
    pub iteration_cap: usize,
    pub hit_cap: bool,
}

/// `⌈2/ε⌉ + 1`
pub fn iteration_cap(epsilon: f64) -> usize {
    (2.0 / epsilon).ceil() as usize + 1
}

/// Indices of pairs with `b² ≥ m`.
pub fn prune_pairs(profile: &ThicknessProfile) -> Vec<usize> {
    (0..profile.thin_count.len())
        .filter(|&i| !profile.is_sparse_pair(i))
        .collect()
}

pub fn run_main(instance: &Instance, options: MainOptions) -> Result<(PreserverSolution, MainTrace)> {
    let all_dags = local_graphs(instance)?;
    let cap = iteration_cap(instance.epsilon());
    let mut trace = MainTrace {
        iteration_cap: cap,
        ..MainTrace::default()
    };
    let mut active: Vec<usize> = (0..instance.pair_count()).collect();
    let mut lower_bound = 0i64;
    let mut kept: Option<PreserverSolution> = None;

    for iteration in 0..cap {
        if active.is_empty() {
            break;
        }
        let current = instance.restrict_pairs(&active);
        let dags: Vec<ShortestPathDag> = active.iter().map(|&i| all_dags[i].clone()).collect();
        let profile = classify_edges(&current, &dags);

        let thick = algorithm1_with(&current, &dags, &profile)?;
        let thin = algorithm2_with(
            &current,
            &dags,
            &profile,
            options.trials,
            options.seed.wrapping_add(iteration as u64),
        )?;
        let alg1 = lift(instance, &all_dags, &active, thick.solution.witnesses());
        let alg2 = lift(instance, &all_dags, &active, thin.solution.witnesses());
        let alg1_objective = alg1.objective(instance);
        let alg2_objective = alg2.objective(instance);
        for (value, candidate) in [(alg1_objective, alg1), (alg2_objective, alg2)] {
            if kept.is_none() || value >= lower_bound {
                lower_bound = value;
                kept = Some(candidate);
            }
        }

        let retained = prune_pairs(&profile);
        let removed = active.len() - retained.len();
        trace.iterations.push(IterationRecord {
            iteration,
            pairs_at_entry: active.len(),
            threshold: profile.threshold,
            alg1_objective,
            alg2_objective,
            pairs_removed: removed,
            lower_bound,
            non_contiguous: thick.non_contiguous.len(),
        });
        log::debug!(
            "iteration {iteration}: |P| = {}, alg1 {alg1_objective}, alg2 {alg2_objective}, removed {removed}",
            active.len()
        );
        if removed == 0 {
            break;
        }
        active = retained.iter().map(|&k| active[k]).collect();
        if iteration + 1 == cap && !active.is_empty() {
            trace.hit_cap = true;
        }
    }

    let kept = kept.unwrap_or_else(|| complete_witnesses(instance, &all_dags, &[], vec![]));
    let verdict = verify_feasible(instance, kept.edges());
    trace.patched_pairs = verdict.violated;
    let witnesses: Vec<Option<Path>> = kept.witnesses().iter().cloned().map(Some).collect();
    let solution = complete_witnesses(instance, &all_dags, kept.edges(), witnesses);
    trace.final_objective = solution.objective(instance);
    Ok((solution, trace))
}

/// Witnesses for the active pairs plus paths for the dropped ones, measured
/// against the original pair set.
fn lift(instance: &Instance, all_dags: &[ShortestPathDag], active: &[usize], witnesses: &[Path]) -> PreserverSolution {
    let edges: Vec<usize> = witnesses.iter().flat_map(|p| p.edges.iter().copied()).collect();
    let mut slots: Vec<Option<Path>> = vec![None; instance.pair_count()];
    for (&i, w) in active.iter().zip(witnesses) {
        slots[i] = Some(w.clone());
    }
    complete_witnesses(instance, all_dags, &edges, slots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Edge, WeightedGraph};
    use crate::oracle::{brute_force_optimum, DEFAULT_CAP};

    fn digraph(n: usize, edges: &[(usize, usize, u64)]) -> WeightedGraph {
        let edges = edges
            .iter()
            .map(|&(tail, head, weight)| Edge { tail, head, weight })
            .collect();
        WeightedGraph::new(true, n, edges).unwrap()
    }

    #[test]
    fn single_pair_is_trivial() {
        let inst = Instance::new(digraph(3, &[(0, 1, 1), (1, 2, 1)]), vec![(0, 2)], 0.5).unwrap();
        let (sol, trace) = run_main(&inst, MainOptions::default()).unwrap();
        assert_eq!(sol.objective(&inst), 0);
        assert!(verify_feasible(&inst, sol.edges()).is_feasible());
        assert!(trace.iterations.len() <= trace.iteration_cap);
    }

    #[test]
    fn chain_reaches_oracle_value() {
        let inst = Instance::new(digraph(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1)]), vec![(0, 2), (1, 3)], 0.5).unwrap();
        let (sol, trace) = run_main(&inst, MainOptions::default()).unwrap();
        let oracle = brute_force_optimum(&inst, DEFAULT_CAP).unwrap();
        assert_eq!(sol.objective(&inst), oracle.objective);
        assert_eq!(trace.final_objective, 1);
        assert!(trace.patched_pairs.is_empty());
    }

    #[test]
    fn prune_keeps_dense_pairs_only() {
        let profile = ThicknessProfile {
            multiplicity: vec![],
            threshold: 0.0,
            thick: vec![],
            thin_count: vec![0, 3, 1, 2],
            edge_count: 4,
        };
        assert_eq!(prune_pairs(&profile), vec![1, 3]);
        let sparse = ThicknessProfile {
            thin_count: vec![0, 1],
            ..profile
        };
        assert!(prune_pairs(&sparse).is_empty());
    }

    #[test]
    fn cap_formula() {
        assert_eq!(iteration_cap(0.5), 5);
        assert_eq!(iteration_cap(0.3), 8);
    }
}
