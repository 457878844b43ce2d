//! CSPDP instances built from MAX-REP instances.
//!
//! Every `v ∈ A_i` becomes a path `p_v` from `s_i` to `t_i` through nodes
//! `x_v^1 … x_v^{2n}`. Every `u ∈ B_j` becomes a path `q_u` from `o_j` to `d_j`
//! that enters `y_u` and then runs through slot `r` (the 1-based index of `u`
//! in `V₂`) of each neighbour's path, sharing the unit edge
//! `x_v^{2r−1} → x_v^{2r}`. Choosing `p_v` and `q_u` therefore saves exactly one
//! unit per adjacent pair of representatives, i.e. per covered super-edge.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeId, Instance, NodeId, Weight, WeightedGraph};
use crate::local::Path;
use crate::solution::{local_graphs, savings_report, PreserverSolution};

/// Bipartite graph with `V₁ = V₂ = {0, …, n−1}`, `n = k · part_size`; part
/// `A_i` (and `B_i`) holds vertices `i·part_size … (i+1)·part_size − 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxRepInstance {
    pub k: usize,
    pub part_size: usize,
    /// `(v ∈ V₁, u ∈ V₂)`, sorted and unique.
    pub edges: Vec<(usize, usize)>,
}

impl MaxRepInstance {
    pub fn new(k: usize, part_size: usize, mut edges: Vec<(usize, usize)>) -> Result<Self> {
        if k == 0 || part_size == 0 {
            return Err(Error::InvalidPartition("k and part size must be positive".into()));
        }
        let n = k * part_size;
        if let Some(&(v, u)) = edges.iter().find(|&&(v, u)| v >= n || u >= n) {
            return Err(Error::InvalidPartition(format!("edge ({v}, {u}) leaves [0, {n})")));
        }
        edges.sort_unstable();
        let before = edges.len();
        edges.dedup();
        if edges.len() != before {
            return Err(Error::InvalidPartition("repeated edge".into()));
        }
        Ok(Self { k, part_size, edges })
    }

    pub fn side_size(&self) -> usize {
        self.k * self.part_size
    }

    pub fn part_of(&self, vertex: usize) -> usize {
        vertex / self.part_size
    }

    pub fn part(&self, i: usize) -> std::ops::Range<usize> {
        i * self.part_size..(i + 1) * self.part_size
    }

    pub fn is_edge(&self, v: usize, u: usize) -> bool {
        self.edges.binary_search(&(v, u)).is_ok()
    }

    /// Sorted V₁-neighbours of `u ∈ V₂`.
    pub fn neighbours_of_right(&self, u: usize) -> Vec<usize> {
        self.edges.iter().filter(|e| e.1 == u).map(|e| e.0).collect()
    }

    pub fn max_degree(&self) -> usize {
        let n = self.side_size();
        let mut deg = vec![0usize; 2 * n];
        for &(v, u) in &self.edges {
            deg[v] += 1;
            deg[n + u] += 1;
        }
        deg.into_iter().max().unwrap_or(0)
    }

    /// Super-edges `(i, j)` covered by representatives `v_reps[i] ∈ A_i`,
    /// `u_reps[j] ∈ B_j`.
    pub fn covered(&self, v_reps: &[usize], u_reps: &[usize]) -> usize {
        v_reps
            .iter()
            .map(|&v| u_reps.iter().filter(|&&u| self.is_edge(v, u)).count())
            .sum()
    }
}

/// Each `(v, u)` pair is an edge with probability `density`.
pub fn random_maxrep(k: usize, part_size: usize, density: f64, seed: u64) -> Result<MaxRepInstance> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InfeasibleParameters(format!("density {density} is outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = k * part_size;
    let mut edges = Vec::new();
    for v in 0..n {
        for u in 0..n {
            if rng.gen_bool(density) {
                edges.push((v, u));
            }
        }
    }
    MaxRepInstance::new(k, part_size, edges)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeRole {
    Source { part: usize },
    Sink { part: usize },
    PathNode { part: usize, vertex: usize, step: usize },
    Origin { part: usize },
    Destination { part: usize },
    Entry { part: usize, vertex: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetLayout {
    pub u_max: Weight,
    pub s: Vec<NodeId>,
    pub t: Vec<NodeId>,
    pub o: Vec<NodeId>,
    pub d: Vec<NodeId>,
    /// `x[v][r − 1]` for `r = 1 … 2n`.
    pub x: Vec<Vec<NodeId>>,
    pub y: Vec<NodeId>,
    /// `p_v` for every `v ∈ V₁`.
    pub p_paths: Vec<Path>,
    /// `q_u` for every `u ∈ V₂`.
    pub q_paths: Vec<Path>,
    pub roles: Vec<NodeRole>,
}

impl GadgetLayout {
    /// One `node role part vertex step` line per node, `-` for missing fields.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (id, role) in self.roles.iter().enumerate() {
            let (name, part, vertex, step) = match *role {
                NodeRole::Source { part } => ("s", part, None, None),
                NodeRole::Sink { part } => ("t", part, None, None),
                NodeRole::PathNode { part, vertex, step } => ("x", part, Some(vertex), Some(step)),
                NodeRole::Origin { part } => ("o", part, None, None),
                NodeRole::Destination { part } => ("d", part, None, None),
                NodeRole::Entry { part, vertex } => ("y", part, Some(vertex), None),
            };
            let show = |v: Option<usize>| v.map_or_else(|| "-".to_string(), |v| v.to_string());
            let _ = writeln!(out, "{id} {name} {part} {} {}", show(vertex), show(step));
        }
        out
    }
}

struct Builder {
    edges: Vec<Edge>,
}

impl Builder {
    fn add(&mut self, tail: NodeId, head: NodeId, weight: Weight) -> EdgeId {
        self.edges.push(Edge { tail, head, weight });
        self.edges.len() - 1
    }
}

pub fn generate_cspdp(maxrep: &MaxRepInstance, epsilon: f64) -> Result<(Instance, GadgetLayout)> {
    let k = maxrep.k;
    let n = maxrep.side_size();
    let u_max = 3 * maxrep.max_degree().max(1) as Weight;
    let nw = n as Weight;

    let mut roles = Vec::new();
    let mut s = Vec::with_capacity(k);
    let mut t = Vec::with_capacity(k);
    for i in 0..k {
        s.push(roles.len());
        roles.push(NodeRole::Source { part: i });
        t.push(roles.len());
        roles.push(NodeRole::Sink { part: i });
    }
    let mut x = Vec::with_capacity(n);
    for v in 0..n {
        let part = maxrep.part_of(v);
        let row: Vec<NodeId> = (1..=2 * n)
            .map(|step| {
                roles.push(NodeRole::PathNode { part, vertex: v, step });
                roles.len() - 1
            })
            .collect();
        x.push(row);
    }
    let mut o = Vec::with_capacity(k);
    let mut d = Vec::with_capacity(k);
    for j in 0..k {
        o.push(roles.len());
        roles.push(NodeRole::Origin { part: j });
        d.push(roles.len());
        roles.push(NodeRole::Destination { part: j });
    }
    let y: Vec<NodeId> = (0..n)
        .map(|u| {
            roles.push(NodeRole::Entry { part: maxrep.part_of(u), vertex: u });
            roles.len() - 1
        })
        .collect();

    let mut b = Builder { edges: Vec::new() };
    // unit edge x_v^{2r−1} → x_v^{2r}, per (v, r)
    let mut unit = vec![vec![0; n]; n];
    let mut p_paths = Vec::with_capacity(n);
    for v in 0..n {
        let i = maxrep.part_of(v);
        let mut nodes = vec![s[i]];
        let mut edges = vec![b.add(s[i], x[v][0], u_max)];
        nodes.push(x[v][0]);
        for r in 1..=n {
            let e = b.add(x[v][2 * r - 2], x[v][2 * r - 1], 1);
            unit[v][r - 1] = e;
            edges.push(e);
            nodes.push(x[v][2 * r - 1]);
            let next = if r < n { x[v][2 * r] } else { t[i] };
            edges.push(b.add(x[v][2 * r - 1], next, u_max));
            nodes.push(next);
        }
        p_paths.push(Path { nodes, edges });
    }

    let mut q_paths = Vec::with_capacity(n);
    for u in 0..n {
        let j = maxrep.part_of(u);
        let r = u + 1;
        let nbrs = maxrep.neighbours_of_right(u);
        let mut nodes = vec![o[j], y[u]];
        let mut edges = vec![b.add(o[j], y[u], 2 * nw * u_max)];
        if nbrs.is_empty() {
            edges.push(b.add(y[u], d[j], (2 * nw + 1) * u_max - 1));
            nodes.push(d[j]);
        } else {
            let u_b = 3 * nbrs.len() as Weight - 1;
            let mut prev = y[u];
            for (idx, &v) in nbrs.iter().enumerate() {
                let w = if idx == 0 { 0 } else { 2 };
                edges.push(b.add(prev, x[v][2 * r - 2], w));
                nodes.push(x[v][2 * r - 2]);
                edges.push(unit[v][r - 1]);
                nodes.push(x[v][2 * r - 1]);
                prev = x[v][2 * r - 1];
            }
            edges.push(b.add(prev, d[j], (2 * nw + 1) * u_max - u_b));
            nodes.push(d[j]);
        }
        q_paths.push(Path { nodes, edges });
    }

    let graph = WeightedGraph::new(true, roles.len(), b.edges)?;
    let pairs: Vec<(NodeId, NodeId)> = (0..k).map(|i| (s[i], t[i])).chain((0..k).map(|j| (o[j], d[j]))).collect();
    let instance = Instance::new(graph, pairs, epsilon)?;
    Ok((
        instance,
        GadgetLayout {
            u_max,
            s,
            t,
            o,
            d,
            x,
            y,
            p_paths,
            q_paths,
            roles,
        },
    ))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxRepOptimum {
    pub v_reps: Vec<usize>,
    pub u_reps: Vec<usize>,
    pub covered: usize,
}

/// Exhaustive search over one representative per part. For fixed `V₁`
/// representatives each `B_j` is chosen independently. Fails when
/// `part_size^(2k)` exceeds `cap`.
pub fn maxrep_brute_force(maxrep: &MaxRepInstance, cap: u64) -> Result<MaxRepOptimum> {
    let k = maxrep.k;
    let ps = maxrep.part_size as u64;
    let total = (0..2 * k).try_fold(1u64, |acc, _| acc.checked_mul(ps));
    if total.is_none_or(|t| t > cap) {
        return Err(Error::Explosion(cap));
    }
    let mut best: Option<MaxRepOptimum> = None;
    let mut digits = vec![0usize; k];
    loop {
        let v_reps: Vec<usize> = (0..k).map(|i| i * maxrep.part_size + digits[i]).collect();
        let mut u_reps = Vec::with_capacity(k);
        for j in 0..k {
            let mut best_u = (0, maxrep.part(j).start);
            for u in maxrep.part(j) {
                let c = v_reps.iter().filter(|&&v| maxrep.is_edge(v, u)).count();
                if c > best_u.0 {
                    best_u = (c, u);
                }
            }
            u_reps.push(best_u.1);
        }
        let covered = maxrep.covered(&v_reps, &u_reps);
        if best.as_ref().is_none_or(|b| covered > b.covered) {
            best = Some(MaxRepOptimum { v_reps, u_reps, covered });
        }
        // next digit vector
        let mut pos = 0;
        while pos < k {
            digits[pos] += 1;
            if digits[pos] < maxrep.part_size {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
        if pos == k {
            break;
        }
    }
    Ok(best.expect("at least one choice"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Correspondence {
    pub v_reps: Vec<usize>,
    pub u_reps: Vec<usize>,
    pub covered: usize,
    pub savings: i64,
    pub matches: bool,
}

/// Reads representatives off the witness paths and compares the savings of
/// the solution with the super-edges those representatives cover.
pub fn verify_correspondence(
    maxrep: &MaxRepInstance,
    layout: &GadgetLayout,
    generated: &Instance,
    solution: &PreserverSolution,
) -> Result<Correspondence> {
    let k = maxrep.k;
    let witnesses = solution.witnesses();
    if witnesses.len() != 2 * k {
        return Err(Error::StructureViolation(witnesses.len().min(2 * k)));
    }
    let mut v_reps = Vec::with_capacity(k);
    for (i, w) in witnesses[..k].iter().enumerate() {
        let v = maxrep
            .part(i)
            .find(|&v| &layout.p_paths[v] == w)
            .ok_or(Error::StructureViolation(i))?;
        v_reps.push(v);
    }
    let mut u_reps = Vec::with_capacity(k);
    for (j, w) in witnesses[k..].iter().enumerate() {
        let u = maxrep
            .part(j)
            .find(|&u| &layout.q_paths[u] == w)
            .ok_or(Error::StructureViolation(k + j))?;
        u_reps.push(u);
    }
    let savings = savings_report(generated, solution)?.objective;
    let covered = maxrep.covered(&v_reps, &u_reps);
    Ok(Correspondence {
        matches: savings == covered as i64,
        v_reps,
        u_reps,
        covered,
        savings,
    })
}

/// The solution choosing `p_v` for `v_reps` and `q_u` for `u_reps`.
pub fn solution_for(layout: &GadgetLayout, v_reps: &[usize], u_reps: &[usize]) -> PreserverSolution {
    let witnesses = v_reps
        .iter()
        .map(|&v| layout.p_paths[v].clone())
        .chain(u_reps.iter().map(|&u| layout.q_paths[u].clone()))
        .collect();
    PreserverSolution::from_witnesses(witnesses)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructureVerdict {
    pub problems: Vec<String>,
}

impl StructureVerdict {
    pub fn holds(&self) -> bool {
        self.problems.is_empty()
    }
}

/// Checks that the shortest paths of `(s_i, t_i)` are exactly the `p_v` with
/// `v ∈ A_i` and those of `(o_j, d_j)` exactly the `q_u` with `u ∈ B_j`.
pub fn check_path_structure(maxrep: &MaxRepInstance, layout: &GadgetLayout, generated: &Instance) -> StructureVerdict {
    let mut verdict = StructureVerdict::default();
    let dags = match local_graphs(generated) {
        Ok(d) => d,
        Err(e) => {
            verdict.problems.push(e.to_string());
            return verdict;
        }
    };
    let k = maxrep.k;
    for (idx, dag) in dags.iter().enumerate() {
        let expected: BTreeSet<&Path> = if idx < k {
            maxrep.part(idx).map(|v| &layout.p_paths[v]).collect()
        } else {
            maxrep.part(idx - k).map(|u| &layout.q_paths[u]).collect()
        };
        match dag.all_paths(expected.len() as u64 + 1) {
            Ok(found) => {
                let found: BTreeSet<&Path> = found.iter().collect();
                if found != expected {
                    verdict.problems.push(format!(
                        "pair {idx}: {} shortest paths, {} expected, {} in common",
                        found.len(),
                        expected.len(),
                        found.intersection(&expected).count()
                    ));
                }
            }
            Err(e) => verdict.problems.push(format!("pair {idx}: {e}")),
        }
    }
    verdict
}
