//! Text formats: instances, solutions, MAX-REP edge lists and bench manifests.
//!
//! Instance:
//! ```text
//! cspdp <directed|undirected> <n> <m> <p>
//! e <tail> <head> <weight>      (m lines, edge ids in order)
//! q <s> <t>                     (p lines)
//! ```
//! Blank lines and anything after `#` are ignored.

use std::fmt::Write as _;
use std::path::Path as FsPath;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeId, Instance, NodeId, Weight, WeightedGraph};
use crate::hardness::MaxRepInstance;
use crate::local::Path;
use crate::solution::{savings_report, verify_feasible, PreserverSolution};

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("");
        let fields: Vec<&str> = body.split_whitespace().collect();
        (!fields.is_empty()).then_some((i + 1, fields))
    })
}

fn number<T: std::str::FromStr>(line: usize, field: &str, what: &str) -> Result<T> {
    field
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid {what} '{field}'")))
}

fn expect_len(line: usize, fields: &[&str], len: usize) -> Result<()> {
    if fields.len() != len {
        return Err(Error::parse(line, format!("expected {len} fields, found {}", fields.len())));
    }
    Ok(())
}

pub fn parse_instance(text: &str, epsilon: f64) -> Result<Instance> {
    let mut recs = records(text);
    let (line, header) = recs.next().ok_or_else(|| Error::parse(1, "empty instance"))?;
    expect_len(line, &header, 5)?;
    if header[0] != "cspdp" {
        return Err(Error::parse(line, "header must start with 'cspdp'"));
    }
    let directed = match header[1] {
        "directed" => true,
        "undirected" => false,
        other => return Err(Error::parse(line, format!("unknown graph kind '{other}'"))),
    };
    let n: usize = number(line, header[2], "node count")?;
    let m: usize = number(line, header[3], "edge count")?;
    let p: usize = number(line, header[4], "pair count")?;
    let mut edges = Vec::with_capacity(m);
    let mut pairs = Vec::with_capacity(p);
    let mut last_line = line;
    for (line, f) in recs {
        last_line = line;
        match f[0] {
            "e" => {
                if !pairs.is_empty() {
                    return Err(Error::parse(line, "edge after pair records"));
                }
                expect_len(line, &f, 4)?;
                let tail: NodeId = number(line, f[1], "tail")?;
                let head: NodeId = number(line, f[2], "head")?;
                let weight: Weight = number(line, f[3], "weight")?;
                if tail >= n || head >= n {
                    return Err(Error::parse(line, format!("node out of range [0, {n})")));
                }
                edges.push(Edge { tail, head, weight });
                if edges.len() > m {
                    return Err(Error::parse(line, format!("more than {m} edges")));
                }
            }
            "q" => {
                expect_len(line, &f, 3)?;
                let s: NodeId = number(line, f[1], "source")?;
                let t: NodeId = number(line, f[2], "target")?;
                if s >= n || t >= n {
                    return Err(Error::parse(line, format!("node out of range [0, {n})")));
                }
                pairs.push((s, t));
                if pairs.len() > p {
                    return Err(Error::parse(line, format!("more than {p} pairs")));
                }
            }
            other => return Err(Error::parse(line, format!("unknown record '{other}'"))),
        }
    }
    if edges.len() != m || pairs.len() != p {
        return Err(Error::parse(
            last_line,
            format!("header announces {m} edges and {p} pairs, found {} and {}", edges.len(), pairs.len()),
        ));
    }
    let graph = WeightedGraph::new(directed, n, edges)?;
    Instance::new(graph, pairs, epsilon)
}

pub fn read_instance(path: impl AsRef<FsPath>, epsilon: f64) -> Result<Instance> {
    parse_instance(&std::fs::read_to_string(path)?, epsilon)
}

/// Canonical text of an instance (ε is not part of the format).
pub fn write_instance(instance: &Instance) -> String {
    let g = instance.graph();
    let mut out = String::new();
    let kind = if g.is_directed() { "directed" } else { "undirected" };
    let _ = writeln!(out, "cspdp {kind} {} {} {}", g.node_count(), g.edge_count(), instance.pair_count());
    for e in g.edges() {
        let _ = writeln!(out, "e {} {} {}", e.tail, e.head, e.weight);
    }
    for &(s, t) in instance.pairs() {
        let _ = writeln!(out, "q {s} {t}");
    }
    out
}

/// Lowercase hex SHA-256 of the canonical instance text.
pub fn instance_hash(instance: &Instance) -> String {
    let digest = Sha256::digest(write_instance(instance).as_bytes());
    digest.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolutionFile {
    pub instance_hash: String,
    pub algorithm: String,
    pub epsilon: f64,
    pub seed: u64,
    pub trials: usize,
    pub edges: Vec<EdgeId>,
    pub upper_bound: Weight,
    pub cost: Weight,
    pub objective: i64,
    pub feasible: bool,
    /// `(s, t, nodes)` per pair.
    pub paths: Vec<(NodeId, NodeId, Vec<NodeId>)>,
}

impl SolutionFile {
    pub fn new(instance: &Instance, solution: &PreserverSolution, algorithm: &str, seed: u64, trials: usize) -> Self {
        let upper_bound = (0..instance.pair_count()).map(|i| instance.distance(i)).sum();
        Self {
            instance_hash: instance_hash(instance),
            algorithm: algorithm.to_string(),
            epsilon: instance.epsilon(),
            seed,
            trials,
            edges: solution.edges().to_vec(),
            upper_bound,
            cost: solution.cost(instance),
            objective: solution.objective(instance),
            feasible: verify_feasible(instance, solution.edges()).is_feasible(),
            paths: solution
                .witnesses()
                .iter()
                .zip(instance.pairs())
                .map(|(p, &(s, t))| (s, t, p.nodes.clone()))
                .collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("cspdp-solution\n");
        let _ = writeln!(out, "instance {}", self.instance_hash);
        let _ = writeln!(out, "algorithm {}", self.algorithm);
        let _ = writeln!(out, "epsilon {}", self.epsilon);
        let _ = writeln!(out, "seed {}", self.seed);
        let _ = writeln!(out, "trials {}", self.trials);
        out.push('H');
        for e in &self.edges {
            let _ = write!(out, " {e}");
        }
        out.push('\n');
        let _ = writeln!(out, "U {}", self.upper_bound);
        let _ = writeln!(out, "cost {}", self.cost);
        let _ = writeln!(out, "objective {}", self.objective);
        let _ = writeln!(out, "feasible {}", self.feasible);
        for (s, t, nodes) in &self.paths {
            let _ = write!(out, "path {s} {t}");
            for v in nodes {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut recs = records(text);
        match recs.next() {
            Some((_, f)) if f == ["cspdp-solution"] => {}
            Some((line, _)) => return Err(Error::parse(line, "missing 'cspdp-solution' header")),
            None => return Err(Error::parse(1, "empty solution file")),
        }
        let mut file = SolutionFile {
            instance_hash: String::new(),
            algorithm: String::new(),
            epsilon: 0.0,
            seed: 0,
            trials: 0,
            edges: Vec::new(),
            upper_bound: 0,
            cost: 0,
            objective: 0,
            feasible: false,
            paths: Vec::new(),
        };
        let mut seen_h = false;
        for (line, f) in recs {
            let single = || -> Result<&str> {
                expect_len(line, &f, 2)?;
                Ok(f[1])
            };
            match f[0] {
                "instance" => file.instance_hash = single()?.to_string(),
                "algorithm" => file.algorithm = single()?.to_string(),
                "epsilon" => file.epsilon = number(line, single()?, "epsilon")?,
                "seed" => file.seed = number(line, single()?, "seed")?,
                "trials" => file.trials = number(line, single()?, "trials")?,
                "U" => file.upper_bound = number(line, single()?, "U")?,
                "cost" => file.cost = number(line, single()?, "cost")?,
                "objective" => file.objective = number(line, single()?, "objective")?,
                "feasible" => file.feasible = number(line, single()?, "flag")?,
                "H" => {
                    seen_h = true;
                    file.edges = f[1..]
                        .iter()
                        .map(|x| number(line, x, "edge id"))
                        .collect::<Result<_>>()?;
                }
                "path" => {
                    if f.len() < 4 {
                        return Err(Error::parse(line, "path needs s, t and at least one node"));
                    }
                    let s = number(line, f[1], "source")?;
                    let t = number(line, f[2], "target")?;
                    let nodes = f[3..]
                        .iter()
                        .map(|x| number(line, x, "node"))
                        .collect::<Result<_>>()?;
                    file.paths.push((s, t, nodes));
                }
                other => return Err(Error::parse(line, format!("unknown record '{other}'"))),
            }
        }
        if !seen_h {
            return Err(Error::parse(1, "missing 'H' record"));
        }
        Ok(file)
    }

    /// Rebuilds the solution, choosing for every hop of a witness the
    /// cheapest edge of `H` (then the smallest id) joining the two nodes.
    pub fn to_solution(&self, instance: &Instance) -> Result<PreserverSolution> {
        let g = instance.graph();
        let mut in_h = vec![false; g.edge_count()];
        for &e in &self.edges {
            if e >= g.edge_count() {
                return Err(Error::Validation(format!("edge id {e} out of range")));
            }
            in_h[e] = true;
        }
        let mut witnesses = Vec::with_capacity(self.paths.len());
        for (s, t, nodes) in &self.paths {
            if nodes.first() != Some(s) || nodes.last() != Some(t) {
                return Err(Error::NonShortestWitness(*s, *t));
            }
            let mut edges = Vec::with_capacity(nodes.len().saturating_sub(1));
            for w in nodes.windows(2) {
                if w[0] >= g.node_count() || w[1] >= g.node_count() {
                    return Err(Error::NonShortestWitness(*s, *t));
                }
                let arc = g
                    .out_arcs(w[0])
                    .iter()
                    .filter(|a| a.to == w[1] && in_h[a.edge])
                    .min_by_key(|a| (g.weight(a.edge), a.edge))
                    .ok_or(Error::NonShortestWitness(*s, *t))?;
                edges.push(arc.edge);
            }
            witnesses.push(Path {
                nodes: nodes.clone(),
                edges,
            });
        }
        Ok(PreserverSolution::from_edges(self.edges.clone()).with_witnesses(witnesses))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub hash_matches: bool,
    pub feasible: bool,
    pub violated: Vec<usize>,
    pub recomputed_objective: i64,
    pub objective_matches: bool,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.hash_matches && self.feasible && self.objective_matches
    }
}

/// Re-verifies a solution file from scratch against `instance`.
pub fn verify_solution_file(instance: &Instance, file: &SolutionFile) -> Result<VerifyReport> {
    let verdict = verify_feasible(instance, &file.edges);
    // Witnesses cannot be rebuilt from an infeasible H; report U − c(H) instead.
    let solution = if verdict.is_feasible() {
        file.to_solution(instance)?
    } else {
        PreserverSolution::from_edges(file.edges.clone())
    };
    let recomputed_objective = if solution.witnesses().is_empty() {
        solution.objective(instance)
    } else {
        savings_report(instance, &solution)?.objective
    };
    Ok(VerifyReport {
        hash_matches: file.instance_hash == instance_hash(instance),
        feasible: verdict.is_feasible(),
        violated: verdict.violated,
        recomputed_objective,
        objective_matches: recomputed_objective == file.objective,
    })
}

/// `maxrep <k> <part_size> <num_edges>` followed by `e <v> <u>` lines.
pub fn parse_maxrep(text: &str) -> Result<MaxRepInstance> {
    let mut recs = records(text);
    let (line, header) = recs.next().ok_or_else(|| Error::parse(1, "empty MAX-REP file"))?;
    expect_len(line, &header, 4)?;
    if header[0] != "maxrep" {
        return Err(Error::parse(line, "header must start with 'maxrep'"));
    }
    let k = number(line, header[1], "k")?;
    let part_size = number(line, header[2], "part size")?;
    let count: usize = number(line, header[3], "edge count")?;
    let mut edges = Vec::with_capacity(count);
    for (line, f) in recs {
        if f[0] != "e" {
            return Err(Error::parse(line, format!("unknown record '{}'", f[0])));
        }
        expect_len(line, &f, 3)?;
        edges.push((number(line, f[1], "vertex")?, number(line, f[2], "vertex")?));
    }
    if edges.len() != count {
        return Err(Error::parse(line, format!("header announces {count} edges, found {}", edges.len())));
    }
    MaxRepInstance::new(k, part_size, edges)
}

pub fn write_maxrep(maxrep: &MaxRepInstance) -> String {
    let mut out = format!("maxrep {} {} {}\n", maxrep.k, maxrep.part_size, maxrep.edges.len());
    for (v, u) in &maxrep.edges {
        let _ = writeln!(out, "e {v} {u}");
    }
    out
}

/// Instance paths listed one per line.
pub fn parse_manifest(text: &str) -> Vec<String> {
    records(text).map(|(_, f)| f.join(" ")).collect()
}
