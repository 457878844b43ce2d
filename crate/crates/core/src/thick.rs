//! Centric-path dynamic program for instances whose savings sit on thick edges.
//!
//! Every thick edge gets weight `(v_e − 1) c(e)`, thin edges get 0. The
//! heaviest shortest path over all pairs becomes the centric path, and every
//! pair is then routed along a shortest path that overlaps it as much as
//! possible (by cost).

use crate::error::Result;
use crate::graph::{EdgeId, Instance, Weight};
use crate::local::{Path, ShortestPathDag};
use crate::solution::{local_graphs, PreserverSolution};
use crate::thickness::{classify_edges, ThicknessProfile};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentricPathChoice {
    /// Index of `(s*, t*)` in the pair list.
    pub pair: usize,
    pub path: Path,
    /// `a*`
    pub weight: Weight,
    /// `a_(s,t)` for every pair.
    pub pair_weights: Vec<Weight>,
}

#[derive(Clone, Debug)]
pub struct ThickOutcome {
    pub solution: PreserverSolution,
    pub centric: CentricPathChoice,
    /// Pairs whose route meets the centric path in more than one stretch.
    pub non_contiguous: Vec<usize>,
}

/// Step-2 weights: `(v_e − 1) c(e)` on thick edges, 0 on thin ones.
pub fn thick_weights(instance: &Instance, profile: &ThicknessProfile) -> Vec<Weight> {
    (0..profile.edge_count)
        .map(|e| {
            if profile.is_thick(e) {
                profile.multiplicity[e].saturating_sub(1) as Weight * instance.graph().weight(e)
            } else {
                0
            }
        })
        .collect()
}

/// Heaviest path over all local graphs; ties go to the earliest pair.
pub fn centric_path(dags: &[ShortestPathDag], weights: &[Weight]) -> Result<CentricPathChoice> {
    let mut best: Option<(usize, Path, Weight)> = None;
    let mut pair_weights = Vec::with_capacity(dags.len());
    for (i, dag) in dags.iter().enumerate() {
        let (path, w) = dag.max_weight_path(|e| weights[e])?;
        pair_weights.push(w);
        if best.as_ref().is_none_or(|b| w > b.2) {
            best = Some((i, path, w));
        }
    }
    let (pair, path, weight) = best.unwrap_or_default();
    Ok(CentricPathChoice {
        pair,
        path,
        weight,
        pair_weights,
    })
}

pub fn run_algorithm1(instance: &Instance) -> Result<PreserverSolution> {
    let dags = local_graphs(instance)?;
    let profile = classify_edges(instance, &dags);
    Ok(algorithm1_with(instance, &dags, &profile)?.solution)
}

pub fn algorithm1_with(
    instance: &Instance,
    dags: &[ShortestPathDag],
    profile: &ThicknessProfile,
) -> Result<ThickOutcome> {
    let weights = thick_weights(instance, profile);
    let centric = centric_path(dags, &weights)?;
    let mut on_centric = vec![false; profile.edge_count];
    for &e in &centric.path.edges {
        on_centric[e] = true;
    }
    let graph = instance.graph();
    let mut routes = Vec::with_capacity(dags.len());
    let mut non_contiguous = Vec::new();
    for (i, dag) in dags.iter().enumerate() {
        let (route, _) = dag.max_weight_path(|e| if on_centric[e] { graph.weight(e) } else { 0 })?;
        if !overlap_is_contiguous(&centric.path, &route) {
            log::warn!(
                "pair {i}: route meets the centric path of pair {} in several stretches",
                centric.pair
            );
            non_contiguous.push(i);
        }
        routes.push(route);
    }
    Ok(ThickOutcome {
        solution: PreserverSolution::from_witnesses(routes),
        centric,
        non_contiguous,
    })
}

/// Whether the edges `route` shares with `centric` form one consecutive run
/// of `centric`'s edge sequence.
pub fn overlap_is_contiguous(centric: &Path, route: &Path) -> bool {
    let shared: Vec<EdgeId> = route.edges.iter().copied().filter(|e| centric.edges.contains(e)).collect();
    if shared.is_empty() {
        return true;
    }
    let Some(start) = centric.edges.iter().position(|&e| e == shared[0]) else {
        return false;
    };
    centric.edges.get(start..start + shared.len()) == Some(&shared[..])
}
