//! The restricted relaxation: savings counted only on qualifying thin edges.

use minilp::{ComparisonOp, OptimizationDirection, Problem};

use super::{conservation_residual, FractionalSolution, FEASIBILITY_TOL};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Instance};
use crate::local::ShortestPathDag;
use crate::thickness::ThicknessProfile;

/// Relative objective tolerance accepted from the solver.
pub const OBJECTIVE_TOL: f64 = 1e-7;

/// `(terms, op, rhs)` with terms as `(variable, coefficient)`.
pub type Row = (Vec<(usize, f64)>, ComparisonOp, f64);

#[derive(Clone, Debug)]
pub struct RestrictedLp {
    /// Edges carrying objective weight: thin and inside the local graph of a
    /// pair with `b² < m`.
    pub qualifying: Vec<bool>,
    /// Pairs whose local graph meets a qualifying edge. Other pairs cannot
    /// change the objective and are routed on their first path.
    pub lp_pairs: Vec<usize>,
    /// `x_var[k][arc]` for the `k`-th LP pair.
    pub x_var: Vec<Vec<usize>>,
    /// `y_var[e]` for qualifying edges.
    pub y_var: Vec<Option<usize>>,
    pub objective: Vec<f64>,
    pub bounds: Vec<(f64, f64)>,
    pub rows: Vec<Row>,
}

impl RestrictedLp {
    pub fn variable_count(&self) -> usize {
        self.objective.len()
    }

    /// Number of variables with a nonzero objective coefficient on `y`.
    pub fn objective_edges(&self) -> Vec<EdgeId> {
        (0..self.qualifying.len()).filter(|&e| self.qualifying[e]).collect()
    }
}

pub fn build_restricted_lp(instance: &Instance, dags: &[ShortestPathDag], profile: &ThicknessProfile) -> RestrictedLp {
    let graph = instance.graph();
    let qualifying = profile.qualifying_edges(dags);
    let lp_pairs: Vec<usize> = (0..dags.len())
        .filter(|&i| dags[i].edge_ids().iter().any(|&e| qualifying[e]))
        .collect();
    let mut objective = Vec::new();
    let mut bounds = Vec::new();
    let mut rows = Vec::new();
    let mut add_var = |coef: f64| {
        objective.push(coef);
        bounds.push((0.0, 1.0));
        objective.len() - 1
    };
    let mut y_var = vec![None; graph.edge_count()];
    for e in 0..graph.edge_count() {
        if qualifying[e] {
            y_var[e] = Some(add_var(-(graph.weight(e) as f64)));
        }
    }
    let mut x_var = Vec::with_capacity(lp_pairs.len());
    for &p in &lp_pairs {
        let dag = &dags[p];
        let vars: Vec<usize> = dag
            .arcs()
            .iter()
            .map(|a| add_var(if qualifying[a.edge] { graph.weight(a.edge) as f64 } else { 0.0 }))
            .collect();
        // in − out = d_v; the row at t is implied by the others
        let t = dag.position(dag.target()).unwrap();
        for v in 0..dag.nodes().len() {
            if v == t {
                continue;
            }
            let mut terms: Vec<(usize, f64)> = dag.in_arcs(v).iter().map(|&i| (vars[i], 1.0)).collect();
            terms.extend(dag.out_arcs(v).iter().map(|&i| (vars[i], -1.0)));
            let rhs = if dag.nodes()[v] == dag.source() { -1.0 } else { 0.0 };
            rows.push((terms, ComparisonOp::Eq, rhs));
        }
        // x_e ≤ y_e, summing both arcs of an undirected edge
        for &e in dag.edge_ids() {
            if let Some(y) = y_var[e] {
                let mut terms: Vec<(usize, f64)> = dag
                    .arcs()
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| a.edge == e)
                    .map(|(i, _)| (vars[i], 1.0))
                    .collect();
                terms.push((y, -1.0));
                rows.push((terms, ComparisonOp::Le, 0.0));
            }
        }
        x_var.push(vars);
    }
    RestrictedLp {
        qualifying,
        lp_pairs,
        x_var,
        y_var,
        objective,
        bounds,
        rows,
    }
}

/// Solves the relaxation, clamps to `[0, 1]`, routes pairs outside the LP on
/// their first path and resets `y_e` to `max_pair x_e`.
pub fn solve_lp(instance: &Instance, dags: &[ShortestPathDag], lp: &RestrictedLp) -> Result<FractionalSolution> {
    let mut x: Vec<Vec<f64>> = Vec::with_capacity(dags.len());
    let mut lp_value = 0.0;
    let mut values = vec![0.0; lp.variable_count()];
    if !lp.lp_pairs.is_empty() {
        let mut problem = Problem::new(OptimizationDirection::Maximize);
        let vars: Vec<_> = lp
            .objective
            .iter()
            .zip(&lp.bounds)
            .map(|(&c, &b)| problem.add_var(c, b))
            .collect();
        for (terms, op, rhs) in &lp.rows {
            let expr: Vec<_> = terms.iter().map(|&(v, c)| (vars[v], c)).collect();
            problem.add_constraint(&expr[..], *op, *rhs);
        }
        let solution = problem.solve().map_err(|e| match e {
            minilp::Error::Infeasible => Error::LpInfeasible,
            other => Error::LpNumericalFailure(other.to_string()),
        })?;
        lp_value = solution.objective();
        for (k, v) in vars.iter().enumerate() {
            values[k] = solution.var_value(*v).clamp(0.0, 1.0);
        }
    }
    let mut k = 0;
    for (i, dag) in dags.iter().enumerate() {
        if lp.lp_pairs.get(k) == Some(&i) {
            x.push(lp.x_var[k].iter().map(|&v| values[v]).collect());
            k += 1;
        } else {
            let mut flows = vec![0.0; dag.arcs().len()];
            for a in dag.path_arcs(&dag.first_path()).expect("first path lies in the local graph") {
                flows[a] = 1.0;
            }
            x.push(flows);
        }
    }
    for (i, dag) in dags.iter().enumerate() {
        let r = conservation_residual(dag, &x[i]);
        if r > 1e-6 {
            return Err(Error::LpNumericalFailure(format!("pair {i} violates conservation by {r}")));
        }
    }
    let sol = FractionalSolution::from_flows(instance, dags, x, &lp.qualifying);
    let scale = lp_value.abs().max(1.0);
    if sol.objective + OBJECTIVE_TOL * scale + FEASIBILITY_TOL < lp_value {
        return Err(Error::LpNumericalFailure(format!(
            "post-processed objective {} fell below the solver value {lp_value}",
            sol.objective
        )));
    }
    Ok(sol)
}
