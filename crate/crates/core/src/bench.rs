//! Batch runs with feasibility checks and oracle ratios.

use std::time::Instant;

use serde::Serialize;

use crate::graph::Instance;
use crate::oracle::brute_force_optimum;
use crate::pipeline::{solve, Algorithm, SolveOptions};
use crate::solution::verify_feasible;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub pairs: usize,
    pub epsilon: f64,
    pub algorithm: String,
    pub objective: Option<i64>,
    pub feasible: Option<bool>,
    pub oracle: Option<i64>,
    /// `z_opt / objective` when both are known and the objective is positive.
    pub ratio: Option<f64>,
    /// `m^(1/2 + 2ε)`
    pub ratio_target: f64,
    pub wall_ms: f64,
    pub error: Option<String>,
}

impl BenchRow {
    fn blank(name: &str, instance: &Instance, algorithm: Algorithm) -> Self {
        let m = instance.graph().edge_count();
        Self {
            instance: name.to_string(),
            n: instance.graph().node_count(),
            m,
            pairs: instance.pair_count(),
            epsilon: instance.epsilon(),
            algorithm: algorithm.name().to_string(),
            objective: None,
            feasible: None,
            oracle: None,
            ratio: None,
            ratio_target: (m as f64).powf(0.5 + 2.0 * instance.epsilon()),
            wall_ms: 0.0,
            error: None,
        }
    }
}

/// One row per (instance, algorithm), in input order. Errors are recorded in
/// the row and never stop the batch. The oracle runs once per instance when
/// `with_oracle` is set.
pub fn bench(
    instances: &[(String, Instance)],
    algorithms: &[Algorithm],
    options: SolveOptions,
    with_oracle: bool,
) -> Vec<BenchRow> {
    let mut rows = Vec::with_capacity(instances.len() * algorithms.len());
    for (name, instance) in instances {
        let oracle = if with_oracle {
            brute_force_optimum(instance, options.cap).ok().map(|r| r.objective)
        } else {
            None
        };
        for &algorithm in algorithms {
            let mut row = BenchRow::blank(name, instance, algorithm);
            row.oracle = oracle;
            let start = Instant::now();
            match solve(instance, algorithm, options) {
                Ok((solution, _)) => {
                    let objective = solution.objective(instance);
                    row.objective = Some(objective);
                    row.feasible = Some(verify_feasible(instance, solution.edges()).is_feasible());
                    if let Some(z) = oracle {
                        if objective > 0 {
                            row.ratio = Some(z as f64 / objective as f64);
                        }
                    }
                }
                Err(e) => row.error = Some(e.to_string()),
            }
            row.wall_ms = start.elapsed().as_secs_f64() * 1e3;
            rows.push(row);
        }
    }
    rows
}

/// JSON lines, one row per line.
pub fn report_lines(rows: &[BenchRow]) -> String {
    rows.iter()
        .map(|r| serde_json::to_string(r).expect("rows serialize") + "\n")
        .collect()
}
