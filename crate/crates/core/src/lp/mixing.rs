//! The uniform-extension solution and the half-half mix with the LP optimum.

use super::decompose::PathFlow;
use super::FractionalSolution;
use crate::error::{Error, Result};
use crate::graph::Instance;
use crate::local::{Path, ShortestPathDag};
use crate::thickness::ThicknessProfile;

/// Per pair: the paths of the uniform extension and their flows.
///
/// A sparse pair with `b ≥ 1` sends `1/b` along an extension of each of its
/// thin edges; every other pair sends 1 along its first path.
pub fn uniform_extension_flow(dags: &[ShortestPathDag], profile: &ThicknessProfile) -> PathFlow {
    let flows = dags
        .iter()
        .enumerate()
        .map(|(i, dag)| {
            let b = profile.thin_count[i];
            if b == 0 || !profile.is_sparse_pair(i) {
                return vec![(dag.first_path(), 1.0)];
            }
            let share = 1.0 / b as f64;
            dag.edge_ids()
                .iter()
                .filter(|&&e| !profile.is_thick(e))
                .map(|&e| {
                    let arc = dag
                        .arcs()
                        .iter()
                        .position(|a| a.edge == e)
                        .expect("local edge has an arc");
                    let path: Path = dag.extend_arc(arc, |_| true).unwrap_or_else(|| dag.first_path());
                    (path, share)
                })
                .collect()
        })
        .collect();
    PathFlow { flows }
}

/// `(x¹, y¹)` with `y¹_e = max_pair x¹_e`.
pub fn uniform_extension_solution(
    instance: &Instance,
    dags: &[ShortestPathDag],
    profile: &ThicknessProfile,
) -> FractionalSolution {
    let x = uniform_extension_flow(dags, profile).recompose(dags);
    FractionalSolution::from_flows(instance, dags, x, &profile.qualifying_edges(dags))
}

/// `x² = ½ (x¹ + x*)`, `y²_e = max_pair x²_e`.
pub fn mix_solutions(
    instance: &Instance,
    dags: &[ShortestPathDag],
    xstar: &FractionalSolution,
    xone: &FractionalSolution,
    qualifying: &[bool],
) -> Result<FractionalSolution> {
    if xstar.x.len() != xone.x.len() || xstar.x.len() != dags.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} and {} pairs for {} local graphs",
            xstar.x.len(),
            xone.x.len(),
            dags.len()
        )));
    }
    let mut x = Vec::with_capacity(dags.len());
    for (i, (a, b)) in xstar.x.iter().zip(&xone.x).enumerate() {
        if a.len() != b.len() || a.len() != dags[i].arcs().len() {
            return Err(Error::DimensionMismatch(format!("pair {i}: {} and {} arcs", a.len(), b.len())));
        }
        x.push(a.iter().zip(b).map(|(p, q)| 0.5 * (p + q)).collect());
    }
    Ok(FractionalSolution::from_flows(instance, dags, x, qualifying))
}
