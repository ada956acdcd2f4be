//! Description graphs, description trees, unravellings and products.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::concept::{Concept, ConceptKind, Interner, Name};
use crate::error::{Error, Result};
use crate::interpretation::Interpretation;

pub type Vertex = usize;

/// Default cap on materialized vertices for unravellings and products.
pub const DEFAULT_NODE_CAP: usize = 1 << 20;

/// A vertex-labelled graph with role-labelled edges.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DescriptionGraph {
    names: Vec<String>,
    labels: Vec<BTreeSet<Name>>,
    succ: Vec<Vec<(Name, Vertex)>>,
}

impl DescriptionGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, name: impl Into<String>, labels: BTreeSet<Name>) -> Vertex {
        self.names.push(name.into());
        self.labels.push(labels);
        self.succ.push(Vec::new());
        self.names.len() - 1
    }

    /// Adds `(source, role, target)`; duplicate edges are ignored.
    pub fn add_edge(&mut self, source: Vertex, role: Name, target: Vertex) {
        let out = &mut self.succ[source];
        let key = (role, target);
        if let Err(pos) = out.binary_search(&key) {
            out.insert(pos, key);
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.names.len()
    }

    pub fn label(&self, v: Vertex) -> &BTreeSet<Name> {
        &self.labels[v]
    }

    /// Outgoing edges of `v`, sorted by role then target.
    pub fn successors(&self, v: Vertex) -> &[(Name, Vertex)] {
        &self.succ[v]
    }

    pub fn has_edge(&self, source: Vertex, role: &str, target: Vertex) -> bool {
        self.succ[source].iter().any(|(r, t)| &**r == role && *t == target)
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vertex, &Name, Vertex)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(s, out)| out.iter().map(move |(r, t)| (s, r, *t)))
    }

    pub fn vertex_name(&self, v: Vertex) -> &str {
        &self.names[v]
    }

    pub fn find_vertex(&self, name: &str) -> Result<Vertex> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }
}

/// `G(I)`: one vertex per domain element, labelled with its concept names.
pub fn graph_of_interpretation(i: &Interpretation) -> DescriptionGraph {
    let mut g = DescriptionGraph::new();
    for e in i.elements() {
        g.add_vertex(i.element_name(e), BTreeSet::new());
    }
    for (name, ext) in i.concepts() {
        for &e in ext {
            g.labels[e].insert(name.clone());
        }
    }
    for (name, ext) in i.roles() {
        for &(s, t) in ext {
            g.add_edge(s, name.clone(), t);
        }
    }
    g
}

/// A walk `v0 r0 v1 … r(n-1) vn` in a description graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Walk {
    pub start: Vertex,
    pub steps: Vec<(Name, Vertex)>,
}

impl Walk {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The last vertex of the walk.
    pub fn last(&self) -> Vertex {
        self.steps.last().map_or(self.start, |s| s.1)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        std::iter::once(self.start).chain(self.steps.iter().map(|s| s.1))
    }

    pub fn is_walk_in(&self, g: &DescriptionGraph) -> bool {
        let mut at = self.start;
        for (r, v) in &self.steps {
            if !g.has_edge(at, r, *v) {
                return false;
            }
            at = *v;
        }
        true
    }

    /// Concatenated vertex and role names, e.g. `a1b2a`.
    pub fn render(&self, g: &DescriptionGraph) -> String {
        let mut s = g.vertex_name(self.start).to_string();
        for (r, v) in &self.steps {
            s.push_str(r);
            s.push_str(g.vertex_name(*v));
        }
        s
    }
}

/// A description graph that is a directed tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescriptionTree {
    pub graph: DescriptionGraph,
    pub root: Vertex,
    parent: Vec<Option<(Vertex, Name)>>,
    /// For unravellings: the graph vertex each node's walk ends in.
    delta: Vec<Vertex>,
}

impl DescriptionTree {
    fn single(name: String, labels: BTreeSet<Name>, delta: Option<Vertex>) -> Self {
        let mut graph = DescriptionGraph::new();
        let root = graph.add_vertex(name, labels);
        DescriptionTree {
            graph,
            root,
            parent: vec![None],
            delta: delta.into_iter().collect(),
        }
    }

    fn add_child(&mut self, parent: Vertex, role: Name, name: String, labels: BTreeSet<Name>) -> Vertex {
        let v = self.graph.add_vertex(name, labels);
        self.graph.add_edge(parent, role.clone(), v);
        self.parent.push(Some((parent, role)));
        v
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn parent(&self, v: Vertex) -> Option<(Vertex, &Name)> {
        self.parent[v].as_ref().map(|(p, r)| (*p, r))
    }

    pub fn node_depth(&self, mut v: Vertex) -> usize {
        let mut d = 0;
        while let Some((p, _)) = self.parent(v) {
            d += 1;
            v = p;
        }
        d
    }

    pub fn height(&self) -> usize {
        self.graph.vertices().map(|v| self.node_depth(v)).max().unwrap_or(0)
    }

    /// The walk in the unravelled graph that a node stands for, if this
    /// tree is an unravelling.
    pub fn walk(&self, mut v: Vertex) -> Option<Walk> {
        if self.delta.len() != self.len() {
            return None;
        }
        let mut steps = Vec::new();
        while let Some((p, r)) = self.parent(v) {
            steps.push((r.clone(), self.delta[v]));
            v = p;
        }
        steps.reverse();
        Some(Walk {
            start: self.delta[v],
            steps,
        })
    }

    /// Checks the tree invariants: unique parents, acyclic, everything
    /// reachable from the root.
    pub fn is_valid(&self) -> bool {
        let n = self.len();
        let mut indeg = vec![0usize; n];
        for (_, _, t) in self.graph.edges() {
            indeg[t] += 1;
        }
        if indeg[self.root] != 0 || (0..n).any(|v| v != self.root && indeg[v] != 1) {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            if std::mem::replace(&mut seen[v], true) {
                return false;
            }
            stack.extend(self.graph.successors(v).iter().map(|e| e.1));
        }
        seen.into_iter().all(|s| s)
    }

    /// Keeps only nodes at depth at most `depth`.
    pub fn truncate(&self, depth: usize) -> DescriptionTree {
        let mut out = DescriptionTree::single(
            self.graph.vertex_name(self.root).to_string(),
            self.graph.label(self.root).clone(),
            self.delta.get(self.root).copied(),
        );
        let keep_delta = !self.delta.is_empty();
        let mut queue = VecDeque::from([(self.root, 0usize, 0usize)]);
        while let Some((v, mapped, d)) = queue.pop_front() {
            if d == depth {
                continue;
            }
            for (r, w) in self.graph.successors(v) {
                let m = out.add_child(
                    mapped,
                    r.clone(),
                    self.graph.vertex_name(*w).to_string(),
                    self.graph.label(*w).clone(),
                );
                if keep_delta {
                    out.delta.push(self.delta[*w]);
                }
                queue.push_back((*w, m, d + 1));
            }
        }
        out
    }
}

/// Structural comparison of trees up to reordering of children.
pub fn trees_isomorphic(a: &DescriptionTree, b: &DescriptionTree) -> bool {
    fn canon(t: &DescriptionTree, v: Vertex) -> String {
        let mut kids: Vec<String> = t
            .graph
            .successors(v)
            .iter()
            .map(|(r, w)| format!("{r}:{}", canon(t, *w)))
            .collect();
        kids.sort();
        let labels: Vec<&str> = t.graph.label(v).iter().map(|s| &**s).collect();
        format!("[{}|{}]", labels.join(","), kids.join(";"))
    }
    canon(a, a.root) == canon(b, b.root)
}

/// `G(C)` for a canonical concept other than `Bottom`.
pub fn tree_of_concept(c: &Concept) -> Result<DescriptionTree> {
    tree_of_concept_capped(c, DEFAULT_NODE_CAP)
}

pub fn tree_of_concept_capped(c: &Concept, cap: usize) -> Result<DescriptionTree> {
    if c.is_bottom() {
        return Err(Error::BottomHasNoTree);
    }
    let (labels, kids) = split_node(c);
    let mut t = DescriptionTree::single("n0".into(), labels, None);
    let mut stack: Vec<(Vertex, Vec<(Name, Concept)>)> = vec![(t.root, kids)];
    while let Some((v, kids)) = stack.pop() {
        for (r, f) in kids {
            if t.len() >= cap {
                return Err(Error::ResourceCap {
                    what: "description tree size",
                    limit: cap,
                });
            }
            let (labels, grandkids) = split_node(&f);
            let name = format!("n{}", t.len());
            let w = t.add_child(v, r, name, labels);
            stack.push((w, grandkids));
        }
    }
    Ok(t)
}

fn split_node(c: &Concept) -> (BTreeSet<Name>, Vec<(Name, Concept)>) {
    let mut labels = BTreeSet::new();
    let mut kids = Vec::new();
    for conj in c.conjuncts() {
        match conj.kind() {
            ConceptKind::Atom(a) => {
                labels.insert(a.clone());
            }
            ConceptKind::Exists(r, f) => kids.push((r.clone(), f.clone())),
            ConceptKind::Bottom => panic!("canonical concepts never contain a nested Bottom"),
            ConceptKind::Top | ConceptKind::And(_) => {}
        }
    }
    (labels, kids)
}

/// The description graph of a concept with one vertex per distinct
/// sub-concept, so shared sub-concepts are not expanded. Its unravelling
/// from the root is `G(C)`.
pub fn graph_of_concept(c: &Concept) -> Result<(DescriptionGraph, Vertex)> {
    if c.is_bottom() {
        return Err(Error::BottomHasNoTree);
    }
    let mut g = DescriptionGraph::new();
    let mut ids: HashMap<Concept, Vertex> = HashMap::new();
    // Only concepts that head a vertex (the root and existential fillers)
    // are materialized.
    let mut order = Vec::new();
    let mut stack = vec![c.clone()];
    while let Some(x) = stack.pop() {
        if ids.contains_key(&x) {
            continue;
        }
        let (labels, kids) = split_node(&x);
        let v = g.add_vertex(format!("n{}", g.len()), labels);
        ids.insert(x.clone(), v);
        for (_, f) in &kids {
            stack.push(f.clone());
        }
        order.push((v, kids));
    }
    for (v, kids) in order {
        for (r, f) in kids {
            g.add_edge(v, r, ids[&f]);
        }
    }
    Ok((g, ids[c]))
}

/// `C(G_v)` of a tree, canonicalized.
pub fn concept_of_tree(t: &DescriptionTree) -> Concept {
    let mut interner = Interner::default();
    concept_below(&t.graph, t.root, &mut interner)
}

fn concept_below(g: &DescriptionGraph, v: Vertex, interner: &mut Interner) -> Concept {
    // Post-order without recursion; unravellings can be deep.
    let mut done: HashMap<Vertex, Concept> = HashMap::new();
    let mut stack = vec![(v, false)];
    while let Some((x, expanded)) = stack.pop() {
        if expanded {
            let parts: Vec<Concept> = g
                .label(x)
                .iter()
                .map(|a| Concept::atom(a.clone()))
                .chain(
                    g.successors(x)
                        .iter()
                        .map(|(r, w)| Concept::exists(r.clone(), done[w].clone())),
                )
                .collect();
            let c = interner.and(parts);
            done.insert(x, c);
        } else {
            stack.push((x, true));
            for (_, w) in g.successors(x) {
                stack.push((*w, false));
            }
        }
    }
    done.remove(&v).unwrap()
}

/// `G^x_d`: the tree of walks from `x` of length at most `d`.
pub fn unravel(g: &DescriptionGraph, x: Vertex, d: usize) -> Result<DescriptionTree> {
    unravel_capped(g, x, d, DEFAULT_NODE_CAP)
}

pub fn unravel_capped(g: &DescriptionGraph, x: Vertex, d: usize, cap: usize) -> Result<DescriptionTree> {
    if x >= g.len() {
        return Err(Error::UnknownVertex(x.to_string()));
    }
    let mut t = DescriptionTree::single(g.vertex_name(x).to_string(), g.label(x).clone(), Some(x));
    let mut queue = VecDeque::from([(t.root, 0usize)]);
    while let Some((node, depth)) = queue.pop_front() {
        if depth == d {
            continue;
        }
        let at = t.delta[node];
        for (r, w) in g.successors(at) {
            if t.len() >= cap {
                return Err(Error::ResourceCap {
                    what: "unravelling size",
                    limit: cap,
                });
            }
            let name = format!("{}{}{}", t.graph.vertex_name(node), r, g.vertex_name(*w));
            let child = t.add_child(node, r.clone(), name, g.label(*w).clone());
            t.delta.push(*w);
            queue.push_back((child, depth + 1));
        }
    }
    Ok(t)
}

/// Product of trees restricted to the part reachable from the tuple of
/// roots. Labels are intersected; an edge exists iff every component has one
/// with the same role.
pub fn product_trees(ts: &[DescriptionTree]) -> Result<DescriptionTree> {
    product_trees_capped(ts, DEFAULT_NODE_CAP)
}

pub fn product_trees_capped(ts: &[DescriptionTree], cap: usize) -> Result<DescriptionTree> {
    assert!(!ts.is_empty(), "product of an empty family of trees");
    if ts.len() == 1 {
        return Ok(ts[0].clone());
    }
    let graphs: Vec<&DescriptionGraph> = ts.iter().map(|t| &t.graph).collect();
    let root_tuple: Vec<Vertex> = ts.iter().map(|t| t.root).collect();
    let mut out = DescriptionTree::single(
        tuple_name(&graphs, &root_tuple),
        intersect_labels(&graphs, &root_tuple),
        None,
    );
    let mut queue = VecDeque::from([(out.root, root_tuple)]);
    while let Some((node, tuple)) = queue.pop_front() {
        for (role, next) in product_successors(&graphs, &tuple) {
            if out.len() >= cap {
                return Err(Error::ResourceCap {
                    what: "product tree size",
                    limit: cap,
                });
            }
            let child = out.add_child(node, role, tuple_name(&graphs, &next), intersect_labels(&graphs, &next));
            queue.push_back((child, next));
        }
    }
    Ok(out)
}

fn tuple_name(graphs: &[&DescriptionGraph], tuple: &[Vertex]) -> String {
    let parts: Vec<&str> = graphs.iter().zip(tuple).map(|(g, &v)| g.vertex_name(v)).collect();
    format!("({})", parts.join(","))
}

fn intersect_labels(graphs: &[&DescriptionGraph], tuple: &[Vertex]) -> BTreeSet<Name> {
    let mut it = graphs.iter().zip(tuple);
    let (g0, &v0) = it.next().expect("non-empty tuple");
    let mut acc = g0.label(v0).clone();
    for (g, &v) in it {
        acc.retain(|a| g.label(v).contains(a));
    }
    acc
}

/// All `(role, tuple')` such that every component has an edge with that role.
fn product_successors(graphs: &[&DescriptionGraph], tuple: &[Vertex]) -> Vec<(Name, Vec<Vertex>)> {
    let mut out = Vec::new();
    let first = graphs[0].successors(tuple[0]);
    let mut i = 0;
    while i < first.len() {
        let role = first[i].0.clone();
        let mut j = i;
        while j < first.len() && first[j].0 == role {
            j += 1;
        }
        let mut options: Vec<Vec<Vertex>> = vec![first[i..j].iter().map(|e| e.1).collect()];
        for (g, &v) in graphs.iter().zip(tuple).skip(1) {
            let targets: Vec<Vertex> = g
                .successors(v)
                .iter()
                .filter(|(r, _)| *r == role)
                .map(|e| e.1)
                .collect();
            options.push(targets);
        }
        if options.iter().all(|o| !o.is_empty()) {
            let mut combos: Vec<Vec<Vertex>> = vec![Vec::new()];
            for opts in &options {
                combos = combos
                    .into_iter()
                    .flat_map(|prefix| {
                        opts.iter().map(move |&t| {
                            let mut p = prefix.clone();
                            p.push(t);
                            p
                        })
                    })
                    .collect();
            }
            out.extend(combos.into_iter().map(|c| (role.clone(), c)));
        }
        i = j;
    }
    out
}

/// The part of the `n`-fold product of a graph reachable from a tuple.
#[derive(Debug, Clone)]
pub struct ProductGraph {
    pub graph: DescriptionGraph,
    pub tuples: Vec<Vec<Vertex>>,
    pub root: Vertex,
}

impl ProductGraph {
    pub fn tuple(&self, v: Vertex) -> &[Vertex] {
        &self.tuples[v]
    }
}

impl fmt::Display for ProductGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in self.graph.vertices() {
            writeln!(f, "{} {:?}", self.graph.vertex_name(v), self.graph.label(v))?;
        }
        Ok(())
    }
}

/// Materializes the vertices of `g × … × g` reachable from `start`.
pub fn product_reachable(g: &DescriptionGraph, start: &[Vertex], cap: usize) -> Result<ProductGraph> {
    assert!(!start.is_empty(), "product of an empty family of graphs");
    for &v in start {
        if v >= g.len() {
            return Err(Error::UnknownVertex(v.to_string()));
        }
    }
    let graphs: Vec<&DescriptionGraph> = vec![g; start.len()];
    let mut pg = DescriptionGraph::new();
    let mut ids: HashMap<Vec<Vertex>, Vertex> = HashMap::new();
    let mut tuples = Vec::new();
    let root = pg.add_vertex(tuple_name(&graphs, start), intersect_labels(&graphs, start));
    ids.insert(start.to_vec(), root);
    tuples.push(start.to_vec());
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let tuple = tuples[v].clone();
        for (role, next) in product_successors(&graphs, &tuple) {
            let w = match ids.get(&next) {
                Some(&w) => w,
                None => {
                    if pg.len() >= cap {
                        return Err(Error::ResourceCap {
                            what: "reachable product size",
                            limit: cap,
                        });
                    }
                    let w = pg.add_vertex(tuple_name(&graphs, &next), intersect_labels(&graphs, &next));
                    ids.insert(next.clone(), w);
                    tuples.push(next);
                    queue.push_back(w);
                    w
                }
            };
            pg.add_edge(v, role, w);
        }
    }
    Ok(ProductGraph {
        graph: pg,
        tuples,
        root,
    })
}
