//! Per-pair local graphs: the union of all shortest `s → t` paths.
//!
//! An arc `u → v` of edge `e` belongs to the local graph of `(s, t)` iff
//! `dist(s, u) + c(e) + dist(v, t) == dist(s, t)`, compared in exact integers.
//! Along every such arc `dist(s, ·)` grows by exactly `c(e)`, so every
//! `s → t` walk inside the local graph is a shortest walk and every cycle
//! consists of zero-weight arcs. Those cycles are contracted into strongly
//! connected components wherever acyclicity is needed.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{Arc, EdgeId, NodeId, Weight, WeightedGraph, INFINITY};

/// A path given both as its node sequence and its edge sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    pub nodes: Vec<NodeId>,
    pub edges: Vec<EdgeId>,
}

impl Path {
    pub fn weight(&self, graph: &WeightedGraph) -> Weight {
        graph.total_weight(self.edges.iter().copied())
    }

    pub fn source(&self) -> Option<NodeId> {
        self.nodes.first().copied()
    }

    pub fn target(&self) -> Option<NodeId> {
        self.nodes.last().copied()
    }

    /// Whether the path is a valid walk in `graph` from its first to its last node.
    pub fn is_walk_in(&self, graph: &WeightedGraph) -> bool {
        if self.nodes.len() != self.edges.len() + 1 {
            return false;
        }
        self.edges.iter().enumerate().all(|(i, &e)| {
            e < graph.edge_count()
                && graph
                    .out_arcs(self.nodes[i])
                    .iter()
                    .any(|a| a.edge == e && a.to == self.nodes[i + 1])
        })
    }

    pub(crate) fn from_arcs(start: NodeId, arcs: impl IntoIterator<Item = Arc>) -> Self {
        let mut path = Path {
            nodes: vec![start],
            edges: Vec::new(),
        };
        for arc in arcs {
            debug_assert_eq!(path.nodes.last(), Some(&arc.from));
            path.nodes.push(arc.to);
            path.edges.push(arc.edge);
        }
        path
    }

    /// Removes cycles so that no node repeats (keeps the first visit).
    pub(crate) fn shortcut(self) -> Path {
        let mut nodes: Vec<NodeId> = vec![self.nodes[0]];
        let mut edges: Vec<EdgeId> = Vec::new();
        for (i, &e) in self.edges.iter().enumerate() {
            let next = self.nodes[i + 1];
            if let Some(pos) = nodes.iter().position(|&n| n == next) {
                nodes.truncate(pos + 1);
                edges.truncate(pos);
            } else {
                nodes.push(next);
                edges.push(e);
            }
        }
        Path { nodes, edges }
    }
}

#[derive(Clone, Debug)]
pub struct ShortestPathDag {
    source: NodeId,
    target: NodeId,
    dist: Weight,
    /// Sorted global ids of the nodes in the local graph.
    nodes: Vec<NodeId>,
    /// Sorted by (from, to, edge).
    arcs: Vec<Arc>,
    /// Sorted, deduplicated edge ids.
    edge_ids: Vec<EdgeId>,
    /// Per local node: indices into `arcs`, sorted by (to, edge).
    out: Vec<Vec<usize>>,
    /// Per local node: indices into `arcs`, sorted by (from, edge).
    inc: Vec<Vec<usize>>,
    /// Per local node: component id; ids follow a topological order.
    comp: Vec<usize>,
    comp_count: usize,
    /// Distance from `source` of every local node.
    from_source: Vec<Weight>,
}

/// Builds the local graph of `(s, t)` from two shortest-path sweeps.
pub fn build_local_graph(graph: &WeightedGraph, s: NodeId, t: NodeId) -> Result<ShortestPathDag> {
    let ds = graph.shortest_distances(s);
    let dt = graph.distances_to(t);
    let dist = ds[t];
    if dist == INFINITY {
        return Err(Error::UnreachablePair(s, t));
    }
    let mut arcs = Vec::new();
    for u in 0..graph.node_count() {
        if ds[u] == INFINITY || ds[u] > dist {
            continue;
        }
        for arc in graph.out_arcs(u) {
            if dt[arc.to] == INFINITY {
                continue;
            }
            if ds[u] + graph.weight(arc.edge) + dt[arc.to] == dist {
                arcs.push(*arc);
            }
        }
    }
    arcs.sort();
    let mut nodes: Vec<NodeId> = arcs.iter().flat_map(|a| [a.from, a.to]).collect();
    nodes.push(s);
    nodes.push(t);
    nodes.sort_unstable();
    nodes.dedup();
    let mut edge_ids: Vec<EdgeId> = arcs.iter().map(|a| a.edge).collect();
    edge_ids.sort_unstable();
    edge_ids.dedup();

    let pos = |n: NodeId| nodes.binary_search(&n).expect("arc endpoint is a local node");
    let mut out = vec![Vec::new(); nodes.len()];
    let mut inc = vec![Vec::new(); nodes.len()];
    for (i, a) in arcs.iter().enumerate() {
        out[pos(a.from)].push(i);
        inc[pos(a.to)].push(i);
    }
    for list in &mut inc {
        list.sort_by_key(|&i| (arcs[i].from, arcs[i].edge));
    }
    let from_source = nodes.iter().map(|&n| ds[n]).collect();

    let mut dag = ShortestPathDag {
        source: s,
        target: t,
        dist,
        nodes,
        arcs,
        edge_ids,
        out,
        inc,
        comp: Vec::new(),
        comp_count: 0,
        from_source,
    };
    dag.condense();
    Ok(dag)
}

impl ShortestPathDag {
    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn target(&self) -> NodeId {
        self.target
    }

    pub fn pair(&self) -> (NodeId, NodeId) {
        (self.source, self.target)
    }

    /// `dist_G(s, t)`.
    pub fn distance(&self) -> Weight {
        self.dist
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn edge_ids(&self) -> &[EdgeId] {
        &self.edge_ids
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edge_ids.binary_search(&e).is_ok()
    }

    /// Local index of a global node id.
    pub fn position(&self, node: NodeId) -> Option<usize> {
        self.nodes.binary_search(&node).ok()
    }

    /// Indices into [`arcs`](Self::arcs) leaving the node at local index `pos`.
    pub fn out_arcs(&self, pos: usize) -> &[usize] {
        &self.out[pos]
    }

    /// Indices into [`arcs`](Self::arcs) entering the node at local index `pos`.
    pub fn in_arcs(&self, pos: usize) -> &[usize] {
        &self.inc[pos]
    }

    /// `dist(s, v)` for a global node id inside the local graph.
    pub fn distance_from_source(&self, node: NodeId) -> Option<Weight> {
        self.position(node).map(|p| self.from_source[p])
    }

    /// Index of `arc` in [`arcs`](Self::arcs).
    pub fn arc_index(&self, arc: &Arc) -> Option<usize> {
        self.arcs.binary_search(arc).ok()
    }

    /// Arc indices of a path inside the local graph.
    pub fn path_arcs(&self, path: &Path) -> Option<Vec<usize>> {
        path.edges
            .iter()
            .enumerate()
            .map(|(i, &edge)| {
                self.arc_index(&Arc {
                    from: path.nodes[i],
                    to: path.nodes[i + 1],
                    edge,
                })
            })
            .collect()
    }

    /// True when no zero-weight cycle exists.
    pub fn is_acyclic(&self) -> bool {
        self.comp_count == self.nodes.len()
    }

    pub fn component_count(&self) -> usize {
        self.comp_count
    }

    // Iterative Tarjan. Components complete in reverse topological order,
    // so ids are flipped at the end.
    fn condense(&mut self) {
        let n = self.nodes.len();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut comp = vec![usize::MAX; n];
        let mut next_index = 0;
        let mut count = 0;
        let pos = |n: NodeId, nodes: &[NodeId]| nodes.binary_search(&n).unwrap();

        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            index[root] = next_index;
            low[root] = next_index;
            next_index += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (v, ref mut child)) = call.last_mut() {
                if *child < self.out[v].len() {
                    let w = pos(self.arcs[self.out[v][*child]].to, &self.nodes);
                    *child += 1;
                    if index[w] == usize::MAX {
                        index[w] = next_index;
                        low[w] = next_index;
                        next_index += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        while let Some(w) = stack.pop() {
                            on_stack[w] = false;
                            comp[w] = count;
                            if w == v {
                                break;
                            }
                        }
                        count += 1;
                    }
                }
            }
        }
        for c in &mut comp {
            *c = count - 1 - *c;
        }
        self.comp = comp;
        self.comp_count = count;
    }

    fn local(&self, node: NodeId) -> usize {
        self.position(node).expect("node belongs to the local graph")
    }

    /// Maximum-weight `s → t` path under `weights` (indexed by edge id), by
    /// dynamic programming over the condensation. Ties prefer the smallest next
    /// node (then edge id) at every step, which yields the lexicographically
    /// smallest node sequence among optimal paths when the local graph is acyclic.
    pub fn max_weight_path(&self, weights: impl Fn(EdgeId) -> Weight) -> Result<(Path, Weight)> {
        for a in &self.arcs {
            if self.comp[self.local(a.from)] == self.comp[self.local(a.to)] && weights(a.edge) > 0 {
                return Err(Error::CyclicAfterContraction);
            }
        }
        // best[c]: heaviest continuation from component c to t.
        let mut best = vec![None::<Weight>; self.comp_count];
        let t_comp = self.comp[self.local(self.target)];
        best[t_comp] = Some(0);
        let mut by_comp: Vec<Vec<usize>> = vec![Vec::new(); self.comp_count];
        for (i, a) in self.arcs.iter().enumerate() {
            by_comp[self.comp[self.local(a.from)]].push(i);
        }
        for c in (0..self.comp_count).rev() {
            for &i in &by_comp[c] {
                let a = &self.arcs[i];
                let d = self.comp[self.local(a.to)];
                if d == c {
                    continue;
                }
                if let Some(rest) = best[d] {
                    let cand = weights(a.edge) + rest;
                    if best[c].is_none_or(|b| cand > b) {
                        best[c] = Some(cand);
                    }
                }
            }
        }
        let total = best[self.comp[self.local(self.source)]].expect("t is reachable from s");

        let mut arcs_taken: Vec<Arc> = Vec::new();
        let mut cur = self.local(self.source);
        loop {
            let c = self.comp[cur];
            if c == t_comp {
                let inner = self
                    .bfs(cur, self.local(self.target), |i| {
                        self.comp[self.local(self.arcs[i].from)] == c
                            && self.comp[self.local(self.arcs[i].to)] == c
                    }, &[])
                    .expect("strongly connected component");
                arcs_taken.extend(inner.iter().map(|&i| self.arcs[i]));
                break;
            }
            let goal = best[c].unwrap();
            let mut chosen: Option<(Vec<NodeId>, EdgeId, Vec<usize>, usize)> = None;
            for &i in &by_comp[c] {
                let a = &self.arcs[i];
                let d = self.comp[self.local(a.to)];
                if d == c || best[d].is_none_or(|r| weights(a.edge) + r != goal) {
                    continue;
                }
                let from = self.local(a.from);
                let inner = if from == cur {
                    Vec::new()
                } else {
                    self.bfs(cur, from, |j| {
                        self.comp[self.local(self.arcs[j].from)] == c
                            && self.comp[self.local(self.arcs[j].to)] == c
                    }, &[])
                    .expect("strongly connected component")
                };
                let mut key: Vec<NodeId> = inner.iter().map(|&j| self.arcs[j].to).collect();
                key.push(a.to);
                let better = match &chosen {
                    None => true,
                    Some((k, e, _, _)) => (&key, a.edge) < (k, *e),
                };
                if better {
                    chosen = Some((key, a.edge, inner, i));
                }
            }
            let (_, _, inner, exit) = chosen.expect("optimal continuation exists");
            arcs_taken.extend(inner.iter().map(|&j| self.arcs[j]));
            arcs_taken.push(self.arcs[exit]);
            cur = self.local(self.arcs[exit].to);
        }
        Ok((Path::from_arcs(self.source, arcs_taken), total))
    }

    /// The lexicographically smallest shortest path (all weights zero).
    pub fn first_path(&self) -> Path {
        self.max_weight_path(|_| 0).expect("zero weights never fail").0
    }

    /// Fewest-hop path from local node `from` to local node `to` using arcs
    /// accepted by `allowed` and avoiding local nodes in `forbidden`.
    /// Returns arc indices.
    pub(crate) fn bfs(
        &self,
        from: usize,
        to: usize,
        allowed: impl Fn(usize) -> bool,
        forbidden: &[usize],
    ) -> Option<Vec<usize>> {
        if from == to {
            return Some(Vec::new());
        }
        let mut parent = vec![usize::MAX; self.nodes.len()];
        let mut seen = vec![false; self.nodes.len()];
        for &f in forbidden {
            seen[f] = true;
        }
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            for &i in &self.out[u] {
                if !allowed(i) {
                    continue;
                }
                let v = self.local(self.arcs[i].to);
                if seen[v] {
                    continue;
                }
                seen[v] = true;
                parent[v] = i;
                if v == to {
                    let mut arcs = Vec::new();
                    let mut cur = to;
                    while cur != from {
                        let i = parent[cur];
                        arcs.push(i);
                        cur = self.local(self.arcs[i].from);
                    }
                    arcs.reverse();
                    return Some(arcs);
                }
                queue.push_back(v);
            }
        }
        None
    }

    /// Extends the arc at index `arc` to a simple `s → t` path inside the
    /// local graph using only arcs accepted by `allowed`. The result contains
    /// the arc unless it lies on a zero-weight cycle that cannot be avoided.
    pub(crate) fn extend_arc(&self, arc: usize, allowed: impl Fn(usize) -> bool) -> Option<Path> {
        let a = self.arcs[arc];
        let s = self.local(self.source);
        let t = self.local(self.target);
        let (from, to) = (self.local(a.from), self.local(a.to));
        let head = self.bfs(s, from, &allowed, &[to])?;
        let mut used: Vec<usize> = head.iter().map(|&i| self.local(self.arcs[i].from)).collect();
        used.push(from);
        let tail = self.bfs(to, t, &allowed, &used).or_else(|| self.bfs(to, t, &allowed, &[]))?;
        let arcs = head
            .iter()
            .chain(std::iter::once(&arc))
            .chain(tail.iter())
            .map(|&i| self.arcs[i]);
        Some(Path::from_arcs(self.source, arcs).shortcut())
    }

    /// Some simple `s → t` path that only uses edges with `mask[e] == true`.
    pub fn path_within(&self, mask: &[bool]) -> Option<Path> {
        let arcs = self.bfs(
            self.local(self.source),
            self.local(self.target),
            |i| mask[self.arcs[i].edge],
            &[],
        )?;
        Some(Path::from_arcs(self.source, arcs.into_iter().map(|i| self.arcs[i])))
    }

    /// All simple `s → t` paths in lexicographic node order. Fails once more
    /// than `cap` paths have been found.
    pub fn all_paths(&self, cap: u64) -> Result<Vec<Path>> {
        let mut found = Vec::new();
        let s = self.local(self.source);
        let t = self.local(self.target);
        let mut visited = vec![false; self.nodes.len()];
        visited[s] = true;
        // (node, next child cursor)
        let mut stack: Vec<(usize, usize)> = vec![(s, 0)];
        let mut arc_stack: Vec<usize> = Vec::new();
        while let Some(&mut (u, ref mut cursor)) = stack.last_mut() {
            if u == t {
                if found.len() as u64 >= cap {
                    return Err(Error::PathExplosion(cap));
                }
                found.push(Path::from_arcs(
                    self.source,
                    arc_stack.iter().map(|&i| self.arcs[i]),
                ));
                stack.pop();
                arc_stack.pop();
                visited[u] = false;
                continue;
            }
            if *cursor < self.out[u].len() {
                let i = self.out[u][*cursor];
                *cursor += 1;
                let v = self.local(self.arcs[i].to);
                if !visited[v] {
                    visited[v] = true;
                    stack.push((v, 0));
                    arc_stack.push(i);
                }
            } else {
                visited[u] = false;
                stack.pop();
                arc_stack.pop();
            }
        }
        Ok(found)
    }
}
