#![allow(dead_code)]

use std::io::Write;

use cspdp::generate::{gen_random, RandomSpec};
use cspdp::lp::{build_restricted_lp, mix_solutions, solve_lp, uniform_extension_solution, FractionalSolution};
use cspdp::solution::local_graphs;
use cspdp::{classify_edges, Instance, ShortestPathDag, ThicknessProfile};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Prints one verdict line and fails the test when `ok` is false. Writes to
/// the raw stderr handle so the line survives libtest's output capture.
pub fn verdict(id: &str, name: &str, ok: bool, detail: &str) {
    let tag = if ok { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "[{tag}] {id} {name}: {detail}");
    assert!(ok, "{id} {name}: {detail}");
}

/// Small random instance; parameters drawn from `seed`.
pub fn desk_instance(seed: u64, max_nodes: usize, max_edges: usize, max_pairs: usize, epsilon: f64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    loop {
        let n = rng.gen_range(6..=max_nodes);
        let directed = rng.gen_bool(0.5);
        let cap = if directed { n * (n - 1) } else { n * (n - 1) / 2 };
        let m = rng.gen_range(n..=max_edges.min(cap).max(n));
        let pairs = rng.gen_range(2..=max_pairs);
        let spec = RandomSpec {
            nodes: n,
            edges: m,
            pairs,
            min_weight: 1,
            max_weight: rng.gen_range(1..=4),
            directed,
            epsilon,
            seed: rng.gen(),
        };
        if let Ok(inst) = gen_random(spec) {
            return inst;
        }
    }
}

/// Instances with many pairs relative to `m^(1/2+ε)` so that thin edges and
/// sparse pairs exist.
pub fn thin_heavy_instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7417);
    loop {
        let n = rng.gen_range(6..=10);
        let directed = rng.gen_bool(0.5);
        let m = rng.gen_range(n + 2..=2 * n);
        let spec = RandomSpec {
            nodes: n,
            edges: m,
            pairs: rng.gen_range(8..=12),
            min_weight: 1,
            max_weight: rng.gen_range(1..=3),
            directed,
            epsilon: 0.1,
            seed: rng.gen(),
        };
        if let Ok(inst) = gen_random(spec) {
            return inst;
        }
    }
}

pub struct LpState {
    pub dags: Vec<ShortestPathDag>,
    pub profile: ThicknessProfile,
    pub qualifying: Vec<bool>,
    pub xstar: FractionalSolution,
    pub xone: FractionalSolution,
    pub xtwo: FractionalSolution,
}

pub fn lp_state(instance: &Instance) -> LpState {
    let dags = local_graphs(instance).unwrap();
    let profile = classify_edges(instance, &dags);
    let lp = build_restricted_lp(instance, &dags, &profile);
    let xstar = solve_lp(instance, &dags, &lp).unwrap();
    let xone = uniform_extension_solution(instance, &dags, &profile);
    let xtwo = mix_solutions(instance, &dags, &xstar, &xone, &lp.qualifying).unwrap();
    LpState {
        dags,
        profile,
        qualifying: lp.qualifying,
        xstar,
        xone,
        xtwo,
    }
}

/// Instances from `thin_heavy_instance` whose restricted LP has a positive
/// optimum.
pub fn lp_instances(count: usize) -> Vec<(Instance, LpState)> {
    let mut out = Vec::with_capacity(count);
    let mut seed = 0;
    while out.len() < count {
        let inst = thin_heavy_instance(seed);
        seed += 1;
        let state = lp_state(&inst);
        if state.xstar.objective > 0.5 {
            out.push((inst, state));
        }
    }
    out
}

/// Per-edge savings `(Σ_pairs x_e − max_pair x_e) c(e)` and `max_pair x_e`,
/// recomputed here from the arc flows.
pub fn savings_and_max(instance: &Instance, dags: &[ShortestPathDag], x: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let m = instance.graph().edge_count();
    let mut sum = vec![0.0; m];
    let mut max = vec![0.0f64; m];
    for (dag, flows) in dags.iter().zip(x) {
        let mut per_edge = vec![0.0; m];
        for (a, f) in dag.arcs().iter().zip(flows) {
            per_edge[a.edge] += f;
        }
        for e in 0..m {
            sum[e] += per_edge[e];
            max[e] = max[e].max(per_edge[e]);
        }
    }
    let savings = (0..m)
        .map(|e| (sum[e] - max[e]) * instance.graph().weight(e) as f64)
        .collect();
    (savings, max)
}

/// Sparse unit-weight graphs with many pairs and small ε: long local graphs
/// full of thin edges, so pairs with `b² ≥ m` are common.
pub fn sparse_long_instance(seed: u64) -> Option<Instance> {
    let n = 12 + (seed % 5) as usize;
    gen_random(RandomSpec {
        nodes: n,
        edges: n + 2 + (seed % 4) as usize,
        pairs: 18 + (seed % 8) as usize,
        min_weight: 1,
        max_weight: 1 + (seed % 2),
        directed: seed.is_multiple_of(3),
        epsilon: 0.05,
        seed,
    })
    .ok()
}
