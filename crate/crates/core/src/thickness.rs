//! Thick/thin edge classification.

use crate::graph::{EdgeId, Instance};
use crate::local::ShortestPathDag;

/// Edge multiplicities over the local graphs of the current pair set, and the
/// split into thick and thin edges at `|P| / m^(1/2 + ε)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThicknessProfile {
    /// `v_e`: number of local graphs containing edge `e`.
    pub multiplicity: Vec<usize>,
    pub threshold: f64,
    pub thick: Vec<bool>,
    /// `b_(s,t)`: number of thin edges in each pair's local graph.
    pub thin_count: Vec<usize>,
    pub edge_count: usize,
}

pub fn classify_edges(instance: &Instance, dags: &[ShortestPathDag]) -> ThicknessProfile {
    let m = instance.graph().edge_count();
    let mut multiplicity = vec![0usize; m];
    for dag in dags {
        for &e in dag.edge_ids() {
            multiplicity[e] += 1;
        }
    }
    let threshold = thick_threshold(dags.len(), m, instance.epsilon());
    let thick: Vec<bool> = multiplicity.iter().map(|&v| v as f64 >= threshold).collect();
    let thin_count = dags
        .iter()
        .map(|d| d.edge_ids().iter().filter(|&&e| !thick[e]).count())
        .collect();
    ThicknessProfile {
        multiplicity,
        threshold,
        thick,
        thin_count,
        edge_count: m,
    }
}

pub fn thick_threshold(pair_count: usize, edge_count: usize, epsilon: f64) -> f64 {
    pair_count as f64 / (edge_count as f64).powf(0.5 + epsilon)
}

impl ThicknessProfile {
    pub fn is_thick(&self, e: EdgeId) -> bool {
        self.thick[e]
    }

    pub fn thick_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edge_count).filter(|&e| self.thick[e])
    }

    pub fn thin_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edge_count).filter(|&e| !self.thick[e])
    }

    /// `b_(s,t) < √m`, decided exactly as `b² < m`.
    pub fn is_sparse_pair(&self, pair: usize) -> bool {
        let b = self.thin_count[pair];
        b * b < self.edge_count
    }

    /// Thin edges lying in the local graph of at least one sparse pair.
    /// These carry the objective of the restricted relaxation.
    pub fn qualifying_edges(&self, dags: &[ShortestPathDag]) -> Vec<bool> {
        let mut q = vec![false; self.edge_count];
        for (i, dag) in dags.iter().enumerate() {
            if self.is_sparse_pair(i) {
                for &e in dag.edge_ids() {
                    if !self.thick[e] {
                        q[e] = true;
                    }
                }
            }
        }
        q
    }
}
