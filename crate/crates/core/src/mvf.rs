//! Strongly connected components, condensations and the MVF measure.
//!
//! `mvf(G, v)` is the largest number of distinct vertices a single walk
//! from `v` can visit. It equals the heaviest path from `v`'s component in
//! the condensation, where a component weighs its size, so it can be
//! computed in linear time with one SCC pass and one memoized DFS.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{DescriptionGraph, Vertex};

/// Largest graph the brute-force oracle accepts.
pub const ORACLE_MAX_VERTICES: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccPartition {
    pub components: Vec<Vec<Vertex>>,
    pub component_of: Vec<usize>,
}

/// Tarjan's algorithm with an explicit stack; edge roles are ignored.
/// Components come out in reverse topological order.
pub fn scc(g: &DescriptionGraph) -> SccPartition {
    const UNSEEN: usize = usize::MAX;
    let n = g.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<Vertex> = Vec::new();
    let mut component_of = vec![UNSEEN; n];
    let mut components: Vec<Vec<Vertex>> = Vec::new();
    let mut next = 0usize;

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        // (vertex, position in its successor list)
        let mut call: Vec<(Vertex, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let succ = g.successors(v);
            if *pos < succ.len() {
                let w = succ[*pos].1;
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let id = components.len();
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("v is on the stack");
                    on_stack[w] = false;
                    component_of[w] = id;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                components.push(comp);
            }
        }
    }
    SccPartition {
        components,
        component_of,
    }
}

/// The DAG of components. `cyclic[c]` marks components that contain a cycle
/// (more than one vertex, or a self-loop), i.e. support unbounded walks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condensation {
    pub partition: SccPartition,
    pub weights: Vec<usize>,
    pub dag_edges: Vec<Vec<usize>>,
    pub cyclic: Vec<bool>,
}

impl Condensation {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn component_of(&self, v: Vertex) -> usize {
        self.partition.component_of[v]
    }

    pub fn edge_set(&self) -> BTreeSet<(usize, usize)> {
        self.dag_edges
            .iter()
            .enumerate()
            .flat_map(|(c, out)| out.iter().map(move |&d| (c, d)))
            .collect()
    }
}

pub fn condensation(g: &DescriptionGraph) -> Condensation {
    let partition = scc(g);
    let k = partition.components.len();
    let weights = partition.components.iter().map(Vec::len).collect();
    let mut dag: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); k];
    let mut cyclic: Vec<bool> = partition.components.iter().map(|c| c.len() > 1).collect();
    for (s, _, t) in g.edges() {
        let (cs, ct) = (partition.component_of[s], partition.component_of[t]);
        if cs != ct {
            dag[cs].insert(ct);
        } else if s == t {
            cyclic[cs] = true;
        }
    }
    Condensation {
        partition,
        weights,
        dag_edges: dag.into_iter().map(|s| s.into_iter().collect()).collect(),
        cyclic,
    }
}

/// Memoized heaviest-path search over a condensation.
///
/// `evaluations` counts how many components had their weight computed; each
/// is computed at most once per instance.
pub struct MaxWeight<'c> {
    cond: &'c Condensation,
    wgt: Vec<Option<usize>>,
    pub evaluations: usize,
}

impl<'c> MaxWeight<'c> {
    pub fn new(cond: &'c Condensation) -> Self {
        MaxWeight {
            cond,
            wgt: vec![None; cond.len()],
            evaluations: 0,
        }
    }

    /// Heaviest path starting at component `start`.
    pub fn eval(&mut self, start: usize) -> usize {
        if let Some(w) = self.wgt[start] {
            return w;
        }
        // Explicit-stack form of the recursive DFS: a frame keeps the running
        // maximum over the successors inspected so far.
        let mut frames: Vec<(usize, usize, usize)> = vec![(start, 0, 0)];
        while let Some(&mut (c, ref mut pos, ref mut current)) = frames.last_mut() {
            let succ = &self.cond.dag_edges[c];
            if *pos < succ.len() {
                let next = succ[*pos];
                match self.wgt[next] {
                    Some(w) => {
                        *current = (*current).max(w);
                        *pos += 1;
                    }
                    None => frames.push((next, 0, 0)),
                }
                continue;
            }
            let total = *current + self.cond.weights[c];
            self.wgt[c] = Some(total);
            self.evaluations += 1;
            frames.pop();
            if let Some(&mut (_, ref mut ppos, ref mut pcur)) = frames.last_mut() {
                *pcur = (*pcur).max(total);
                *ppos += 1;
            }
        }
        self.wgt[start].expect("start was evaluated")
    }
}

/// Heaviest path from `start` in a condensation.
pub fn max_weight(cond: &Condensation, start: usize) -> usize {
    MaxWeight::new(cond).eval(start)
}

pub fn mvf(g: &DescriptionGraph, v: Vertex) -> usize {
    let cond = condensation(g);
    max_weight(&cond, cond.component_of(v))
}

/// MVF of every vertex, sharing one memo table.
pub fn mvf_all(g: &DescriptionGraph) -> Vec<usize> {
    let cond = condensation(g);
    let mut mw = MaxWeight::new(&cond);
    for c in 0..cond.len() {
        mw.eval(c);
    }
    g.vertices().map(|v| mw.eval(cond.component_of(v))).collect()
}

/// Largest MVF over all vertices (0 for the empty graph).
pub fn mmvf(g: &DescriptionGraph) -> usize {
    mvf_all(g).into_iter().max().unwrap_or(0)
}

/// Number of vertices reachable from `v`, including `v`.
pub fn reach_count(g: &DescriptionGraph, v: Vertex) -> usize {
    let mut seen = vec![false; g.len()];
    seen[v] = true;
    let mut queue = VecDeque::from([v]);
    let mut count = 1;
    while let Some(x) = queue.pop_front() {
        for (_, y) in g.successors(x) {
            if !seen[*y] {
                seen[*y] = true;
                count += 1;
                queue.push_back(*y);
            }
        }
    }
    count
}

/// Exact MVF by exhaustive search over `(current vertex, visited set)`.
pub fn mvf_oracle(g: &DescriptionGraph, v: Vertex) -> Result<usize> {
    if g.len() > ORACLE_MAX_VERTICES {
        return Err(Error::ResourceCap {
            what: "oracle graph size",
            limit: ORACLE_MAX_VERTICES,
        });
    }
    let start = (v, 1u32 << v);
    let mut seen: HashMap<(Vertex, u32), ()> = HashMap::new();
    seen.insert(start, ());
    let mut stack = vec![start];
    let mut best = 1;
    while let Some((x, visited)) = stack.pop() {
        best = best.max(visited.count_ones() as usize);
        for (_, y) in g.successors(x) {
            let state = (*y, visited | (1 << y));
            if seen.insert(state, ()).is_none() {
                stack.push(state);
            }
        }
    }
    Ok(best)
}
