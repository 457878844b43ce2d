//! Link-to-path decomposition of per-pair arc flows.

use super::conservation_residual;
use super::FractionalSolution;
use crate::error::{Error, Result};
use crate::local::{Path, ShortestPathDag};

/// Flow below this is treated as zero.
const DUST: f64 = 1e-12;

/// Largest conservation residual accepted before decomposing.
pub const CONSERVATION_TOL: f64 = 1e-6;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PathFlow {
    /// Per pair: `(path, f_p)` in extraction order.
    pub flows: Vec<Vec<(Path, f64)>>,
}

impl PathFlow {
    /// `Σ_{p ∋ a} f_p` for every arc of every pair.
    pub fn recompose(&self, dags: &[ShortestPathDag]) -> Vec<Vec<f64>> {
        self.flows
            .iter()
            .zip(dags)
            .map(|(paths, dag)| {
                let mut x = vec![0.0; dag.arcs().len()];
                for (p, f) in paths {
                    for a in dag.path_arcs(p).expect("path lies in its local graph") {
                        x[a] += f;
                    }
                }
                x
            })
            .collect()
    }

    pub fn path_count(&self) -> usize {
        self.flows.iter().map(Vec::len).sum()
    }

    pub fn pair_total(&self, pair: usize) -> f64 {
        self.flows[pair].iter().map(|(_, f)| f).sum()
    }
}

/// Repeatedly takes the arc with the smallest positive flow (ties by edge id,
/// then arc order), extends it to an `s → t` path inside the support and
/// peels that path off with the arc's flow. Each round zeroes at least one
/// arc, so a pair needs at most as many rounds as its local graph has arcs.
/// Leftover circulations are discarded.
pub fn path_decompose(dags: &[ShortestPathDag], x: &FractionalSolution) -> Result<PathFlow> {
    let mut flows = Vec::with_capacity(dags.len());
    for (pair, (dag, input)) in dags.iter().zip(&x.x).enumerate() {
        let residual = conservation_residual(dag, input);
        if residual > CONSERVATION_TOL {
            return Err(Error::NonConservingInput { pair, residual });
        }
        let mut rest: Vec<f64> = input.iter().map(|v| v.clamp(0.0, 1.0)).collect();
        let mut paths: Vec<(Path, f64)> = Vec::new();
        for _ in 0..dag.arcs().len() {
            let Some(min_arc) = (0..rest.len())
                .filter(|&i| rest[i] > DUST)
                .min_by(|&i, &j| {
                    rest[i]
                        .total_cmp(&rest[j])
                        .then(dag.arcs()[i].edge.cmp(&dag.arcs()[j].edge))
                        .then(i.cmp(&j))
                })
            else {
                break;
            };
            let amount = rest[min_arc];
            match dag.extend_arc(min_arc, |i| rest[i] > DUST) {
                Some(path) => {
                    let arcs = dag.path_arcs(&path).expect("extension stays in the local graph");
                    let amount = arcs.iter().map(|&a| rest[a]).fold(amount, f64::min);
                    for &a in &arcs {
                        rest[a] -= amount;
                    }
                    rest[min_arc] = 0.0;
                    paths.push((path, amount));
                }
                None => rest[min_arc] = 0.0,
            }
        }
        let total: f64 = paths.iter().map(|(_, f)| f).sum();
        if total > 0.0 && (total - 1.0).abs() > 1e-15 {
            for (_, f) in &mut paths {
                *f /= total;
            }
        }
        if paths.is_empty() {
            paths.push((dag.first_path(), 1.0));
        }
        flows.push(paths);
    }
    Ok(PathFlow { flows })
}
