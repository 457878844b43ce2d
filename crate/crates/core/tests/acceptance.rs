//! Acceptance suite. Every test prints one `[PASS]`/`[FAIL] ACn` line.

mod common;

use std::fs;
use std::process::Command;
use std::time::Instant;

use cspdp::generate::{gen_random, RandomSpec};
use cspdp::hardness::{check_path_structure, generate_cspdp, maxrep_brute_force, random_maxrep};
use cspdp::io::{write_instance, SolutionFile};
use cspdp::lp::decompose::CONSERVATION_TOL;
use cspdp::lp::rounding::{sample_paths, trial_rng};
use cspdp::lp::{conservation_residual, expected_savings, path_decompose};
use cspdp::main_algo::{iteration_cap, run_main, MainOptions};
use cspdp::oracle::{brute_force_optimum, brute_force_restricted, classify_dominance, optimal_set, Dominance};
use cspdp::reduction::undirected_to_directed;
use cspdp::thick::run_algorithm1;
use cspdp::{solve, verify_feasible, Algorithm, Error, Instance, SolveOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{desk_instance, lp_instances, savings_and_max, verdict};

const ORACLE_CAP: u64 = 1_000_000;

fn oracle_instances(count: usize, start: u64, directed_only: Option<bool>) -> Vec<(Instance, i64)> {
    let mut out = Vec::new();
    let mut seed = start;
    while out.len() < count {
        let eps = if seed.is_multiple_of(2) { 0.3 } else { 0.5 };
        let inst = desk_instance(seed, 14, 30, 7, eps);
        seed += 1;
        if directed_only.is_some_and(|d| d != inst.graph().is_directed()) {
            continue;
        }
        match brute_force_optimum(&inst, ORACLE_CAP) {
            Ok(r) => out.push((inst, r.objective)),
            Err(Error::PathExplosion { .. }) => continue,
            Err(e) => panic!("oracle failed: {e}"),
        }
    }
    out
}

#[test]
fn ac01_feasibility() {
    let mut runs = 0;
    let mut violations = Vec::new();
    let mut oracle_skipped = 0;
    for seed in 0..200u64 {
        let eps = [0.3, 0.5][seed as usize % 2];
        let inst = desk_instance(seed, 30, 120, 12, eps);
        for alg in Algorithm::ALL {
            let options = SolveOptions {
                cap: ORACLE_CAP,
                ..SolveOptions::default()
            };
            match solve(&inst, alg, options) {
                Ok((sol, _)) => {
                    runs += 1;
                    if !verify_feasible(&inst, sol.edges()).is_feasible() {
                        violations.push(format!("seed {seed} {alg}"));
                    }
                }
                Err(Error::PathExplosion { .. }) if alg == Algorithm::Oracle => oracle_skipped += 1,
                Err(e) => violations.push(format!("seed {seed} {alg}: {e}")),
            }
        }
    }
    verdict(
        "AC1",
        "every output preserves every pair distance",
        violations.is_empty(),
        &format!("{runs} runs on 200 instances, {oracle_skipped} oracle runs over the path cap, violations {violations:?}"),
    );
}

#[test]
fn ac02_main_guarantee() {
    let mut failures = Vec::new();
    let mut positive = 0;
    for (idx, (inst, z)) in oracle_instances(50, 1000, None).iter().enumerate() {
        let (sol, _) = run_main(inst, MainOptions::default()).unwrap();
        let obj = sol.objective(inst);
        let m = inst.graph().edge_count() as f64;
        let eps = inst.epsilon();
        let factor = (1.0 - m.powf(-eps)).powi(iteration_cap(eps) as i32) / (4.0 * m.powf(0.5 + 2.0 * eps));
        let floor = factor * *z as f64;
        if *z > 0 {
            positive += 1;
        }
        if obj > *z || (obj as f64) < floor {
            failures.push(format!("#{idx}: main {obj}, optimum {z}, floor {floor:.4}"));
        }
    }
    verdict(
        "AC2",
        "main objective between the guaranteed floor and the optimum",
        failures.is_empty(),
        &format!("50 instances ({positive} with positive optimum), failures {failures:?}"),
    );
}

#[test]
fn ac03_thick_dominant() {
    let mut certified = 0;
    let mut failures = Vec::new();
    let mut seed = 5000u64;
    while certified < 20 && seed < 7000 {
        let eps = [0.3, 0.5][seed as usize % 2];
        let inst = desk_instance(seed, 12, 24, 6, eps);
        seed += 1;
        let Ok(optima) = optimal_set(&inst, None, ORACLE_CAP) else {
            continue;
        };
        if optima.objective <= 0 || classify_dominance(&inst, &optima) != Dominance::ThickDominant {
            continue;
        }
        certified += 1;
        let obj = run_algorithm1(&inst).unwrap().objective(&inst);
        let m = inst.graph().edge_count() as f64;
        let floor = optima.objective as f64 / m.powf(0.5 + 2.0 * eps);
        if (obj as f64) < floor || obj > optima.objective {
            failures.push(format!("seed {}: thick {obj}, optimum {}, floor {floor:.4}", seed - 1, optima.objective));
        }
    }
    verdict(
        "AC3",
        "thick-edge algorithm on certified thick-dominant instances",
        certified >= 20 && failures.is_empty(),
        &format!("{certified} certified instances, failures {failures:?}"),
    );
}

#[test]
fn ac04_mixing() {
    const TOL_SAVINGS: f64 = 1e-6;
    const TOL_FLOOR: f64 = 1e-9;
    let mut checked = 0;
    let mut failures = Vec::new();
    for (idx, (inst, st)) in lp_instances(20).iter().enumerate() {
        let m = inst.graph().edge_count() as f64;
        let (s_star, _) = savings_and_max(inst, &st.dags, &st.xstar.x);
        let (s_two, max_two) = savings_and_max(inst, &st.dags, &st.xtwo.x);
        for e in (0..st.qualifying.len()).filter(|&e| st.qualifying[e]) {
            checked += 1;
            if s_two[e] < 0.5 * s_star[e] - TOL_SAVINGS {
                failures.push(format!("#{idx} edge {e}: s(x2) {} < s(x*)/2 {}", s_two[e], 0.5 * s_star[e]));
            }
            if max_two[e] < 1.0 / (2.0 * m.sqrt()) - TOL_FLOOR {
                failures.push(format!("#{idx} edge {e}: max x2 {} below 1/(2 sqrt m)", max_two[e]));
            }
        }
    }
    verdict(
        "AC4",
        "mixed solution keeps half the savings and a flow floor",
        failures.is_empty() && checked > 0,
        &format!("20 instances, {checked} qualifying edges, failures {failures:?}"),
    );
}

#[test]
fn ac05_decomposition() {
    const TOL_SUM: f64 = 1e-9;
    let mut failures = Vec::new();
    let mut worst_residual = 0.0f64;
    let mut worst_sum = 0.0f64;
    let mut instances = 0;
    let mut seed = 0u64;
    while instances < 50 {
        let inst = common::thin_heavy_instance(seed + 300);
        seed += 1;
        let st = common::lp_state(&inst);
        instances += 1;
        let flow = path_decompose(&st.dags, &st.xtwo).unwrap();
        let back = flow.recompose(&st.dags);
        for (pair, (orig, rec)) in st.xtwo.x.iter().zip(&back).enumerate() {
            let diff = orig.iter().zip(rec).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            worst_residual = worst_residual.max(diff);
            let sum_dev = (flow.pair_total(pair) - 1.0).abs();
            worst_sum = worst_sum.max(sum_dev);
            if diff >= CONSERVATION_TOL || sum_dev > TOL_SUM {
                failures.push(format!("seed {} pair {pair}: residual {diff:e}, sum dev {sum_dev:e}", seed - 1));
            }
            if conservation_residual(&st.dags[pair], rec) >= CONSERVATION_TOL {
                failures.push(format!("seed {} pair {pair}: recomposed flow not conserving", seed - 1));
            }
        }
        let limit = inst.pair_count() * inst.graph().edge_count();
        if flow.path_count() > limit {
            failures.push(format!("seed {}: {} paths > {limit}", seed - 1, flow.path_count()));
        }
    }
    verdict(
        "AC5",
        "path decomposition reproduces the flow",
        failures.is_empty(),
        &format!("50 instances, worst residual {worst_residual:e}, worst sum deviation {worst_sum:e}, failures {failures:?}"),
    );
}

#[test]
fn ac06_rounding_expectation() {
    const SAMPLES: usize = 100_000;
    const SIGMAS: f64 = 3.0;
    const TOL: f64 = 1e-9;
    let mut failures = Vec::new();
    let mut lines = Vec::new();
    for (idx, (inst, st)) in lp_instances(10).iter().enumerate() {
        let m = inst.graph().edge_count() as f64;
        let flow = path_decompose(&st.dags, &st.xtwo).unwrap();
        let predicted = expected_savings(inst, &st.dags, &flow.recompose(&st.dags), Some(&st.qualifying)).total;
        let mut rng = trial_rng(0xac06, idx);
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        let graph = inst.graph();
        let mut uses = vec![0u32; graph.edge_count()];
        for _ in 0..SAMPLES {
            uses.iter_mut().for_each(|u| *u = 0);
            for p in sample_paths(&flow, &mut rng) {
                for &e in &p.edges {
                    uses[e] += 1;
                }
            }
            let s: f64 = (0..uses.len())
                .filter(|&e| st.qualifying[e] && uses[e] > 0)
                .map(|e| (uses[e] - 1) as f64 * graph.weight(e) as f64)
                .sum();
            sum += s;
            sum_sq += s * s;
        }
        let n = SAMPLES as f64;
        let mean = sum / n;
        let se = ((sum_sq / n - mean * mean).max(0.0) / (n - 1.0)).sqrt();
        if (mean - predicted).abs() > SIGMAS * se + TOL {
            failures.push(format!("#{idx}: mean {mean:.5}, predicted {predicted:.5}, se {se:.5}"));
        }
        let (s_two, _) = savings_and_max(inst, &st.dags, &st.xtwo.x);
        let lp_savings: f64 = (0..s_two.len()).filter(|&e| st.qualifying[e]).map(|e| s_two[e]).sum();
        let floor = lp_savings / (2.0 * m.sqrt());
        if predicted < floor - TOL {
            failures.push(format!("#{idx}: expectation {predicted:.5} below floor {floor:.5}"));
        }
        lines.push(format!("{mean:.3}/{predicted:.3}"));
    }
    verdict(
        "AC6",
        "sampled savings match the predicted expectation",
        failures.is_empty(),
        &format!("10 instances x {SAMPLES} samples, mean/predicted {lines:?}, failures {failures:?}"),
    );
}

#[test]
fn ac07_union_inequality() {
    // f64 rounding of the product can undershoot an exact zero slightly.
    const TOL: f64 = 1e-12;
    let mut rng = ChaCha8Rng::seed_from_u64(0xac07);
    let mut worst = f64::INFINITY;
    let mut violations = 0;
    for _ in 0..10_000 {
        let k = rng.gen_range(1..=20);
        let xs: Vec<f64> = (0..k).map(|_| rng.gen::<f64>()).collect();
        let value = xs.iter().sum::<f64>() - 1.0 + xs.iter().map(|x| 1.0 - x).product::<f64>();
        worst = worst.min(value);
        if value < -TOL {
            violations += 1;
        }
    }
    verdict(
        "AC7",
        "sum x - 1 + prod(1 - x) >= 0",
        violations == 0,
        &format!("10000 vectors, smallest value {worst:e}, violations {violations}"),
    );
}

#[test]
fn ac08_reduction() {
    let mut failures = Vec::new();
    for (idx, (inst, z)) in oracle_instances(25, 9000, Some(false)).iter().enumerate() {
        let (reduced, _) = undirected_to_directed(inst).unwrap();
        let n = inst.graph().node_count();
        let m = inst.graph().edge_count();
        if reduced.graph().node_count() != n + 2 * m || reduced.graph().edge_count() != 5 * m {
            failures.push(format!("#{idx}: counts {}/{}", reduced.graph().node_count(), reduced.graph().edge_count()));
        }
        match brute_force_optimum(&reduced, ORACLE_CAP) {
            Ok(r) if r.objective == *z => {}
            Ok(r) => failures.push(format!("#{idx}: optimum {z} became {}", r.objective)),
            Err(e) => failures.push(format!("#{idx}: {e}")),
        }
    }
    verdict(
        "AC8",
        "undirected-to-directed reduction keeps the optimum",
        failures.is_empty(),
        &format!("25 undirected instances, failures {failures:?}"),
    );
}

#[test]
fn ac09_hardness_gadget() {
    let mut failures = Vec::new();
    let mut seed = 0u64;
    let mut done = 0;
    while done < 15 {
        let k = 1 + (seed % 2) as usize;
        let part_size = 1 + (seed % 3) as usize;
        let density = [0.3, 0.5, 0.8][(seed / 3 % 3) as usize];
        seed += 1;
        let maxrep = random_maxrep(k, part_size, density, seed).unwrap();
        let (inst, layout) = generate_cspdp(&maxrep, 0.5).unwrap();
        let expected = maxrep_brute_force(&maxrep, 1_000_000).unwrap().covered as i64;
        let got = brute_force_optimum(&inst, 1_000_000).unwrap().objective;
        if got != expected {
            failures.push(format!("seed {seed} k {k} parts {part_size}: optimum {got}, max-rep {expected}"));
        }
        let structure = check_path_structure(&maxrep, &layout, &inst);
        if !structure.holds() {
            failures.push(format!("seed {seed}: {:?}", structure.problems));
        }
        done += 1;
    }
    verdict(
        "AC9",
        "gadget optimum equals the MAX-REP optimum",
        failures.is_empty(),
        &format!("15 MAX-REP instances, failures {failures:?}"),
    );
}

#[test]
fn ac10_lp_upper_bound() {
    const TOL: f64 = 1e-6;
    let mut failures = Vec::new();
    let mut gaps = Vec::new();
    for (idx, (inst, st)) in lp_instances(20).iter().enumerate() {
        let integral = match brute_force_restricted(inst, Some(&st.qualifying), 1_000_000) {
            Ok(r) => r.objective as f64,
            Err(e) => {
                failures.push(format!("#{idx}: {e}"));
                continue;
            }
        };
        gaps.push(format!("{:.3}>={integral}", st.xstar.objective));
        if st.xstar.objective < integral - TOL {
            failures.push(format!("#{idx}: lp {} < integral {integral}", st.xstar.objective));
        }
    }
    verdict(
        "AC10",
        "restricted LP bounds the integral restricted optimum",
        failures.is_empty(),
        &format!("20 instances, {gaps:?}, failures {failures:?}"),
    );
}

#[test]
fn ac11_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let inst = desk_instance(11, 20, 50, 8, 0.5);
    let input = dir.path().join("inst.txt");
    fs::write(&input, write_instance(&inst)).unwrap();
    let mut failures = Vec::new();
    for alg in ["oracle", "thick", "thin", "main"] {
        let mut outputs = Vec::new();
        for run in 0..10 {
            let out = dir.path().join(format!("{alg}-{run}.sol"));
            let status = Command::new(env!("CARGO_BIN_EXE_preserver"))
                .args(["solve", "--alg", alg, "--seed", "7", "-o"])
                .arg(&out)
                .arg(&input)
                .status()
                .unwrap();
            if !status.success() {
                failures.push(format!("{alg} run {run}: exit {status}"));
                continue;
            }
            outputs.push(fs::read(&out).unwrap());
        }
        if outputs.windows(2).any(|w| w[0] != w[1]) {
            failures.push(format!("{alg}: outputs differ"));
        }
    }
    verdict(
        "AC11",
        "repeated solve runs are byte-identical",
        failures.is_empty(),
        &format!("4 algorithms x 10 runs, failures {failures:?}"),
    );
}

#[test]
fn ac12_scale() {
    const LIMIT_SECS: f64 = 60.0;
    let dir = tempfile::tempdir().unwrap();
    let inst = gen_random(RandomSpec {
        nodes: 200,
        edges: 800,
        pairs: 40,
        min_weight: 1,
        max_weight: 10,
        directed: true,
        epsilon: 0.5,
        seed: 12,
    })
    .unwrap();
    let input = dir.path().join("big.txt");
    let out = dir.path().join("big.sol");
    fs::write(&input, write_instance(&inst)).unwrap();
    let start = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_preserver"))
        .args(["solve", "--alg", "main", "--epsilon", "0.5", "-o"])
        .arg(&out)
        .arg(&input)
        .status()
        .unwrap();
    let secs = start.elapsed().as_secs_f64();
    let file = SolutionFile::parse(&fs::read_to_string(&out).unwrap()).unwrap();
    let feasible = verify_feasible(&inst, &file.edges).is_feasible();
    verdict(
        "AC12",
        "main loop on n=200, m=800, 40 pairs",
        status.success() && feasible && secs < LIMIT_SECS,
        &format!("{secs:.2}s (limit {LIMIT_SECS}s), feasible {feasible}, objective {}", file.objective),
    );
}

