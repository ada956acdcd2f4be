//! Completion-based entailment for EL⊥ TBoxes.
//!
//! Every sub-concept of the TBox and of the queries gets a name that is
//! fully defined by it, conjunctions are binarized with fresh names, and the
//! standard completion rules are applied until nothing changes. Then
//! `T ⊨ C ⊑ D` iff `name(D) ∈ S(name(C))` or `⊥ ∈ S(name(C))`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::concept::{Concept, ConceptInclusion, ConceptKind, Name, TBox};

type Id = u32;

const TOP: Id = 0;
const BOTTOM: Id = 1;

/// Normal-form axioms over numbered names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormalAxiom {
    /// `A ⊑ B` (with `B = ⊥` for disjointness).
    Sub(Id, Id),
    /// `A1 ⊓ A2 ⊑ B`.
    Conj(Id, Id, Id),
    /// `A ⊑ ∃r.B`.
    ExistsRhs(Id, u32, Id),
    /// `∃r.A ⊑ B`.
    ExistsLhs(u32, Id, Id),
}

/// A normalized TBox: the original concepts map to names, and the axioms
/// are a conservative extension of the input.
#[derive(Debug, Default, Clone)]
pub struct NormalizedTBox {
    pub axioms: Vec<NormalAxiom>,
    names: HashMap<Concept, Id>,
    roles: HashMap<Name, u32>,
    next: Id,
}

impl NormalizedTBox {
    pub fn new() -> Self {
        let mut t = NormalizedTBox {
            next: 2,
            ..Default::default()
        };
        t.names.insert(Concept::top(), TOP);
        t.names.insert(Concept::bottom(), BOTTOM);
        t
    }

    /// Number of names, including `⊤`, `⊥` and fresh ones.
    pub fn name_count(&self) -> usize {
        self.next as usize
    }

    fn fresh(&mut self) -> Id {
        let id = self.next;
        self.next += 1;
        id
    }

    fn role(&mut self, r: &Name) -> u32 {
        let n = self.roles.len() as u32;
        *self.roles.entry(r.clone()).or_insert(n)
    }

    pub fn name_of(&self, c: &Concept) -> Option<Id> {
        self.names.get(c).copied()
    }

    /// Names `c` and all of its sub-concepts, adding defining axioms for new
    /// ones.
    pub fn define(&mut self, c: &Concept) -> Id {
        if let Some(id) = self.name_of(c) {
            return id;
        }
        for sub in c.subconcepts() {
            if self.names.contains_key(&sub) {
                continue;
            }
            let id = self.fresh();
            match sub.kind() {
                ConceptKind::Top | ConceptKind::Bottom | ConceptKind::Atom(_) => {}
                ConceptKind::Exists(r, f) => {
                    let (r, f) = (self.role(r), self.names[f]);
                    self.axioms.push(NormalAxiom::ExistsRhs(id, r, f));
                    self.axioms.push(NormalAxiom::ExistsLhs(r, f, id));
                }
                ConceptKind::And(cs) => {
                    let parts: Vec<Id> = cs.iter().map(|x| self.names[x]).collect();
                    for &p in &parts {
                        self.axioms.push(NormalAxiom::Sub(id, p));
                    }
                    let mut acc = parts[0];
                    for (k, &p) in parts.iter().enumerate().skip(1) {
                        let target = if k + 1 == parts.len() { id } else { self.fresh() };
                        self.axioms.push(NormalAxiom::Conj(acc, p, target));
                        acc = target;
                    }
                }
            }
            self.names.insert(sub, id);
        }
        self.names[c]
    }

    pub fn add_inclusion(&mut self, ci: &ConceptInclusion) {
        let l = self.define(&ci.lhs);
        let r = self.define(&ci.rhs);
        self.axioms.push(NormalAxiom::Sub(l, r));
    }
}

/// Saturated completion state for a TBox plus query concepts.
#[derive(Clone)]
pub struct Reasoner {
    norm: NormalizedTBox,
    subs: Vec<HashSet<Id>>,
    // rule indexes, keyed by the premise name
    told: Vec<Vec<Id>>,
    conj: Vec<Vec<(Id, Id)>>,
    ex_rhs: Vec<Vec<(u32, Id)>>,
    ex_lhs: Vec<Vec<(u32, Id)>>,
    preds: Vec<Vec<(u32, Id)>>,
    succs: Vec<Vec<(u32, Id)>>,
    edges: HashSet<(Id, u32, Id)>,
    indexed: usize,
    queue: VecDeque<Task>,
}

#[derive(Clone)]
enum Task {
    Sub(Id, Id),
    Edge(Id, u32, Id),
}

impl Reasoner {
    pub fn new(t: &TBox) -> Self {
        let mut norm = NormalizedTBox::new();
        for ci in t.inclusions() {
            norm.add_inclusion(&ci);
        }
        let mut r = Reasoner {
            norm,
            subs: Vec::new(),
            told: Vec::new(),
            conj: Vec::new(),
            ex_rhs: Vec::new(),
            ex_lhs: Vec::new(),
            preds: Vec::new(),
            succs: Vec::new(),
            edges: HashSet::new(),
            indexed: 0,
            queue: VecDeque::new(),
        };
        r.saturate();
        r
    }

    pub fn normalized(&self) -> &NormalizedTBox {
        &self.norm
    }

    /// Does the TBox entail `ci`?
    pub fn entails(&mut self, ci: &ConceptInclusion) -> bool {
        self.prepare([&ci.lhs, &ci.rhs]);
        self.entails_prepared(ci)
    }

    /// Answers many queries after one saturation pass.
    pub fn entails_all(&mut self, cis: &[ConceptInclusion]) -> Vec<bool> {
        self.prepare(cis.iter().flat_map(|ci| [&ci.lhs, &ci.rhs]));
        cis.iter().map(|ci| self.entails_prepared(ci)).collect()
    }

    /// Defines the given concepts and saturates. Adding definitions for fresh
    /// names is conservative, so earlier conclusions stay valid.
    pub fn prepare<'a>(&mut self, concepts: impl IntoIterator<Item = &'a Concept>) {
        for c in concepts {
            self.norm.define(c);
        }
        self.saturate();
    }

    /// Assumes both sides were passed to [`Reasoner::prepare`].
    pub fn entails_prepared(&self, ci: &ConceptInclusion) -> bool {
        if ci.lhs.is_bottom() || ci.rhs.is_top() {
            return true;
        }
        let l = self.norm.name_of(&ci.lhs).expect("query was prepared");
        let r = self.norm.name_of(&ci.rhs).expect("query was prepared");
        let s = &self.subs[l as usize];
        s.contains(&BOTTOM) || s.contains(&r)
    }

    /// Is `c` unsatisfiable w.r.t. the TBox?
    pub fn unsatisfiable(&mut self, c: &Concept) -> bool {
        self.entails(&ConceptInclusion::new(c.clone(), Concept::bottom()))
    }

    /// Makes a role known so that queries can mention it.
    pub fn register_role(&mut self, r: &Name) {
        self.norm.role(r);
    }

    fn role_id(&self, r: &Name) -> Option<u32> {
        self.norm.roles.get(r).copied()
    }

    /// Names added to a node by an `r`-edge to a node with subsumers `subs`.
    fn edge_effects(&self, role: u32, subs: impl Iterator<Item = Id>) -> Vec<Id> {
        let mut out = Vec::new();
        for s in subs {
            if s == BOTTOM {
                out.push(BOTTOM);
            }
            out.extend(self.ex_lhs[s as usize].iter().filter(|e| e.0 == role).map(|e| e.1));
        }
        out
    }

    /// Is `d` satisfied by a canonical-model node with the given subsumers
    /// and edges?
    fn satisfies(&self, member: &dyn Fn(Id) -> bool, edges: &[(u32, Succ)], d: &Concept) -> bool {
        if member(BOTTOM) {
            return true;
        }
        if let Some(id) = self.norm.name_of(d) {
            return member(id);
        }
        match d.kind() {
            ConceptKind::Top => true,
            ConceptKind::Bottom | ConceptKind::Atom(_) => false,
            ConceptKind::And(cs) => cs.iter().all(|x| self.satisfies(member, edges, x)),
            ConceptKind::Exists(r, f) => {
                let Some(role) = self.role_id(r) else {
                    return false;
                };
                edges.iter().filter(|e| e.0 == role).any(|(_, s)| self.succ_satisfies(s, f))
            }
        }
    }

    fn succ_satisfies(&self, s: &Succ, d: &Concept) -> bool {
        match s {
            Succ::Name(b) => {
                let subs = &self.subs[*b as usize];
                let edges: Vec<(u32, Succ)> = self.succs[*b as usize]
                    .iter()
                    .map(|&(r, c)| (r, Succ::Name(c)))
                    .collect();
                self.satisfies(&|x| subs.contains(&x), &edges, d)
            }
            Succ::Local(n) => self.satisfies(&|x| n.members.binary_search(&x).is_ok(), &n.edges, d),
        }
    }

    fn saturate(&mut self) {
        let n = self.norm.name_count();
        let old = self.subs.len();
        self.subs.resize_with(n, HashSet::new);
        self.told.resize_with(n, Vec::new);
        self.conj.resize_with(n, Vec::new);
        self.ex_rhs.resize_with(n, Vec::new);
        self.ex_lhs.resize_with(n, Vec::new);
        self.preds.resize_with(n, Vec::new);
        self.succs.resize_with(n, Vec::new);
        let fresh_axioms: Vec<NormalAxiom> = self.norm.axioms[self.indexed..].to_vec();
        self.indexed = self.norm.axioms.len();
        for a in &fresh_axioms {
            match *a {
                NormalAxiom::Sub(x, y) => self.told[x as usize].push(y),
                NormalAxiom::Conj(x, y, z) => {
                    self.conj[x as usize].push((y, z));
                    self.conj[y as usize].push((x, z));
                }
                NormalAxiom::ExistsRhs(x, r, y) => self.ex_rhs[x as usize].push((r, y)),
                NormalAxiom::ExistsLhs(r, x, y) => self.ex_lhs[x as usize].push((r, y)),
            }
        }
        for a in old..n {
            self.queue.push_back(Task::Sub(a as Id, a as Id));
            self.queue.push_back(Task::Sub(a as Id, TOP));
        }
        // New axioms may fire on names saturated earlier.
        if old > 0 && !fresh_axioms.is_empty() {
            let premises: HashSet<Id> = fresh_axioms
                .iter()
                .map(|a| match *a {
                    NormalAxiom::Sub(x, _)
                    | NormalAxiom::Conj(x, _, _)
                    | NormalAxiom::ExistsRhs(x, _, _)
                    | NormalAxiom::ExistsLhs(_, x, _) => x,
                })
                .filter(|&x| (x as usize) < old)
                .collect();
            let mut holders: HashMap<Id, Vec<Id>> = HashMap::new();
            for (a, s) in self.subs.iter().enumerate().take(old) {
                for x in s.iter().filter(|x| premises.contains(x)) {
                    holders.entry(*x).or_default().push(a as Id);
                }
            }
            for a in fresh_axioms {
                self.refire(a, &holders);
            }
        }
        self.run();
    }

    fn refire(&mut self, axiom: NormalAxiom, holders: &HashMap<Id, Vec<Id>>) {
        let of = |x: Id| holders.get(&x).map(Vec::as_slice).unwrap_or(&[]);
        match axiom {
            NormalAxiom::Sub(x, y) => {
                for &a in of(x) {
                    self.queue.push_back(Task::Sub(a, y));
                }
            }
            NormalAxiom::Conj(x, y, z) => {
                for &a in of(x) {
                    if self.subs[a as usize].contains(&y) {
                        self.queue.push_back(Task::Sub(a, z));
                    }
                }
            }
            NormalAxiom::ExistsRhs(x, r, y) => {
                for &a in of(x) {
                    self.queue.push_back(Task::Edge(a, r, y));
                }
            }
            NormalAxiom::ExistsLhs(r, x, y) => {
                for &b in of(x) {
                    for &(s, a) in &self.preds[b as usize] {
                        if s == r {
                            self.queue.push_back(Task::Sub(a, y));
                        }
                    }
                }
            }
        }
    }

    fn run(&mut self) {
        while let Some(task) = self.queue.pop_front() {
            match task {
                Task::Sub(a, x) => {
                    if !self.subs[a as usize].insert(x) {
                        continue;
                    }
                    let xi = x as usize;
                    for &b in &self.told[xi] {
                        self.queue.push_back(Task::Sub(a, b));
                    }
                    for &(y, b) in &self.conj[xi] {
                        if self.subs[a as usize].contains(&y) {
                            self.queue.push_back(Task::Sub(a, b));
                        }
                    }
                    for &(r, b) in &self.ex_rhs[xi] {
                        self.queue.push_back(Task::Edge(a, r, b));
                    }
                    for &(r, p) in &self.preds[a as usize] {
                        if x == BOTTOM {
                            self.queue.push_back(Task::Sub(p, BOTTOM));
                        }
                        for &(s, c) in &self.ex_lhs[xi] {
                            if s == r {
                                self.queue.push_back(Task::Sub(p, c));
                            }
                        }
                    }
                }
                Task::Edge(a, r, b) => {
                    if !self.edges.insert((a, r, b)) {
                        continue;
                    }
                    self.preds[b as usize].push((r, a));
                    self.succs[a as usize].push((r, b));
                    for &x in &self.subs[b as usize] {
                        if x == BOTTOM {
                            self.queue.push_back(Task::Sub(a, BOTTOM));
                        }
                        for &(s, c) in &self.ex_lhs[x as usize] {
                            if s == r {
                                self.queue.push_back(Task::Sub(a, c));
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Successor of a node in the canonical model.
#[derive(Clone)]
pub enum Succ {
    Name(Id),
    Local(Arc<LocalNode>),
}

/// Canonical-model node of a concept that only occurs on left-hand sides.
/// It has no name; its subsumers follow from those of its conjuncts and
/// successors, which it cannot change.
pub struct LocalNode {
    members: Vec<Id>,
    edges: Vec<(u32, Succ)>,
}

enum Undo {
    Member(Id),
    Edge(Option<(u32, Id)>),
}

/// Subsumers of a conjunction, built up one conjunct at a time and undone
/// in stack order. Concept names must have been passed to
/// [`Reasoner::prepare`] and roles to [`Reasoner::register_role`].
pub struct LocalQuery<'r> {
    r: &'r Reasoner,
    member: FixedBitSet,
    edges: Vec<(u32, Succ)>,
    named_edges: HashSet<(u32, Id)>,
    trail: Vec<Undo>,
    marks: Vec<usize>,
    queue: Vec<Id>,
    // what an `r`-edge to a named node adds
    edge_effects: HashMap<(u32, Id), Arc<[Id]>>,
    nodes: HashMap<Concept, Arc<LocalNode>>,
}

impl<'r> LocalQuery<'r> {
    /// The query for `⊤`.
    pub fn new(r: &'r Reasoner) -> Self {
        let mut q = LocalQuery {
            r,
            member: FixedBitSet::with_capacity(r.norm.name_count()),
            edges: Vec::new(),
            named_edges: HashSet::new(),
            trail: Vec::new(),
            marks: Vec::new(),
            queue: Vec::new(),
            edge_effects: HashMap::new(),
            nodes: HashMap::new(),
        };
        q.insert_subs(TOP);
        q.close();
        q.trail.clear();
        q
    }

    /// Conjoins `c` to the query.
    pub fn push(&mut self, c: &Concept) {
        self.marks.push(self.trail.len());
        match c.kind() {
            ConceptKind::And(cs) => {
                for x in cs {
                    self.add_conjunct(x);
                }
            }
            _ => self.add_conjunct(c),
        }
        self.close();
    }

    /// Removes the concept pushed last.
    pub fn pop(&mut self) {
        let mark = self.marks.pop().expect("pop matches a push");
        for undo in self.trail.drain(mark..) {
            match undo {
                Undo::Member(x) => self.member.set(x as usize, false),
                Undo::Edge(named) => {
                    self.edges.pop();
                    if let Some(e) = named {
                        self.named_edges.remove(&e);
                    }
                }
            }
        }
    }

    pub fn unsatisfiable(&self) -> bool {
        self.member.contains(BOTTOM as usize)
    }

    /// Does the TBox entail `query ⊑ d`?
    pub fn entails(&self, d: &Concept) -> bool {
        if self.unsatisfiable() {
            return true;
        }
        if let Some(id) = self.r.norm.name_of(d) {
            return self.member.contains(id as usize);
        }
        self.r
            .satisfies(&|x| self.member.contains(x as usize), &self.edges, d)
    }

    fn add_conjunct(&mut self, c: &Concept) {
        if let Some(id) = self.r.norm.name_of(c) {
            self.insert_subs(id);
            return;
        }
        match c.kind() {
            ConceptKind::Exists(role, f) => {
                let role = self.r.role_id(role).expect("role was registered");
                let succ = self.node(f);
                self.add_edge(role, succ);
            }
            ConceptKind::And(cs) => {
                for x in cs {
                    self.add_conjunct(x);
                }
            }
            _ => panic!("concept name {c} was not prepared"),
        }
    }

    fn node(&mut self, f: &Concept) -> Succ {
        if let Some(id) = self.r.norm.name_of(f) {
            return Succ::Name(id);
        }
        if let Some(n) = self.nodes.get(f) {
            return Succ::Local(n.clone());
        }
        let mut sub = LocalQuery::new(self.r);
        sub.nodes = std::mem::take(&mut self.nodes);
        sub.edge_effects = std::mem::take(&mut self.edge_effects);
        sub.push(f);
        let node = Arc::new(LocalNode {
            members: sub.member.ones().map(|x| x as Id).collect(),
            edges: std::mem::take(&mut sub.edges),
        });
        self.nodes = std::mem::take(&mut sub.nodes);
        self.edge_effects = std::mem::take(&mut sub.edge_effects);
        self.nodes.insert(f.clone(), node.clone());
        Succ::Local(node)
    }

    fn add_edge(&mut self, role: u32, succ: Succ) {
        let r = self.r;
        let named = match succ {
            Succ::Name(b) => {
                if !self.named_edges.insert((role, b)) {
                    return;
                }
                Some((role, b))
            }
            Succ::Local(_) => None,
        };
        let effects: Arc<[Id]> = match &succ {
            Succ::Name(b) => self
                .edge_effects
                .entry((role, *b))
                .or_insert_with(|| r.edge_effects(role, r.subs[*b as usize].iter().copied()).into())
                .clone(),
            Succ::Local(n) => r.edge_effects(role, n.members.iter().copied()).into(),
        };
        self.edges.push((role, succ));
        self.trail.push(Undo::Edge(named));
        for &y in effects.iter() {
            self.insert(y);
        }
    }

    fn insert_subs(&mut self, id: Id) {
        for &x in &self.r.subs[id as usize] {
            self.insert(x);
        }
    }

    fn close(&mut self) {
        let r = self.r;
        while let Some(x) = self.queue.pop() {
            let xi = x as usize;
            for &b in &r.told[xi] {
                self.insert(b);
            }
            for &(y, z) in &r.conj[xi] {
                if self.member.contains(y as usize) {
                    self.insert(z);
                }
            }
            for &(role, b) in &r.ex_rhs[xi] {
                self.add_edge(role, Succ::Name(b));
            }
        }
    }

    fn insert(&mut self, x: Id) {
        if !self.member.put(x as usize) {
            self.trail.push(Undo::Member(x));
            self.queue.push(x);
        }
    }
}

/// `t ⊨ ci`.
pub fn entails(t: &TBox, ci: &ConceptInclusion) -> bool {
    Reasoner::new(t).entails(ci)
}
