//! Sampling one path per pair from the decomposed flow, plus the closed-form
//! expectation of the sampled savings.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::decompose::{path_decompose, PathFlow};
use super::mixing::{mix_solutions, uniform_extension_solution};
use super::restricted::{build_restricted_lp, solve_lp};
use super::{edge_values, FractionalSolution};
use crate::error::Result;
use crate::graph::{EdgeId, Instance};
use crate::local::{Path, ShortestPathDag};
use crate::solution::{local_graphs, PreserverSolution};
use crate::thickness::{classify_edges, ThicknessProfile};

pub const DEFAULT_TRIALS: usize = 32;

#[derive(Clone, Debug, PartialEq)]
pub struct ExpectedSavings {
    /// `(e, E[s_e])` for every edge where `mask` holds and some pair has flow.
    pub per_edge: Vec<(EdgeId, f64)>,
    pub total: f64,
}

/// `E[s_e] = (Σ x_e − (1 − Π (1 − x_e))) c(e)` for independent per-pair
/// choices, summed over edges with `mask[e]` (all edges when `None`).
pub fn expected_savings(
    instance: &Instance,
    dags: &[ShortestPathDag],
    x: &[Vec<f64>],
    mask: Option<&[bool]>,
) -> ExpectedSavings {
    let m = instance.graph().edge_count();
    let mut sum = vec![0.0f64; m];
    let mut miss = vec![1.0f64; m];
    let mut touched = vec![false; m];
    for (dag, flows) in dags.iter().zip(x) {
        for (e, v) in edge_values(dag, flows) {
            let v = v.clamp(0.0, 1.0);
            sum[e] += v;
            miss[e] *= 1.0 - v;
            touched[e] = true;
        }
    }
    let per_edge: Vec<(EdgeId, f64)> = (0..m)
        .filter(|&e| touched[e] && mask.is_none_or(|q| q[e]))
        .map(|e| (e, (sum[e] - (1.0 - miss[e])) * instance.graph().weight(e) as f64))
        .collect();
    let total = per_edge.iter().map(|(_, s)| s).sum();
    ExpectedSavings { per_edge, total }
}

/// One path per pair drawn with probability `f_p`.
pub fn sample_paths<R: Rng>(flow: &PathFlow, rng: &mut R) -> Vec<Path> {
    flow.flows
        .iter()
        .map(|paths| {
            let total: f64 = paths.iter().map(|(_, f)| f).sum();
            let mut r = rng.gen::<f64>() * total;
            for (p, f) in paths {
                if r < *f {
                    return p.clone();
                }
                r -= f;
            }
            paths.last().expect("every pair has a path").0.clone()
        })
        .collect()
}

/// Generator for trial `trial` under `seed`.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

#[derive(Clone, Debug)]
pub struct Algorithm2Outcome {
    pub solution: PreserverSolution,
    pub qualifying: Vec<bool>,
    pub xstar: FractionalSolution,
    pub xone: FractionalSolution,
    pub xtwo: FractionalSolution,
    pub flow: PathFlow,
    /// Expected savings on qualifying edges under `flow`.
    pub expected: ExpectedSavings,
    /// Objective of every trial, in trial order.
    pub trial_objectives: Vec<i64>,
}

pub fn run_algorithm2(instance: &Instance, trials: usize, seed: u64) -> Result<PreserverSolution> {
    let dags = local_graphs(instance)?;
    let profile = classify_edges(instance, &dags);
    Ok(algorithm2_with(instance, &dags, &profile, trials, seed)?.solution)
}

/// Solves the restricted LP, mixes with the uniform extension, decomposes,
/// and keeps the best of `trials` samples (highest objective, then the
/// lexicographically smallest edge set).
pub fn algorithm2_with(
    instance: &Instance,
    dags: &[ShortestPathDag],
    profile: &ThicknessProfile,
    trials: usize,
    seed: u64,
) -> Result<Algorithm2Outcome> {
    let lp = build_restricted_lp(instance, dags, profile);
    let xstar = solve_lp(instance, dags, &lp)?;
    let xone = uniform_extension_solution(instance, dags, profile);
    let xtwo = mix_solutions(instance, dags, &xstar, &xone, &lp.qualifying)?;
    let flow = path_decompose(dags, &xtwo)?;
    let expected = expected_savings(instance, dags, &flow.recompose(dags), Some(&lp.qualifying));

    let mut best: Option<(i64, PreserverSolution)> = None;
    let mut trial_objectives = Vec::with_capacity(trials.max(1));
    for trial in 0..trials.max(1) {
        let mut rng = trial_rng(seed, trial);
        let candidate = PreserverSolution::from_witnesses(sample_paths(&flow, &mut rng));
        let value = candidate.objective(instance);
        trial_objectives.push(value);
        let better = match &best {
            None => true,
            Some((v, h)) => value > *v || (value == *v && candidate.edges() < h.edges()),
        };
        if better {
            best = Some((value, candidate));
        }
    }
    let (_, solution) = best.expect("at least one trial");
    Ok(Algorithm2Outcome {
        solution,
        qualifying: lp.qualifying,
        xstar,
        xone,
        xtwo,
        flow,
        expected,
        trial_objectives,
    })
}
