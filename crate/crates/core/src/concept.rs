//! EL⊥ concept expressions, concept inclusions and TBoxes.
//!
//! [`Concept`] values are always in canonical form: the only way to build
//! one is through the smart constructors below (or [`canonicalize`]), which
//! flatten conjunctions, drop `Top` from non-trivial conjunctions, sort and
//! deduplicate conjuncts, and collapse anything containing `Bottom` to
//! `Bottom`. Sub-concepts are reference counted, so concepts produced by
//! unravelling large graphs are stored as DAGs and cloning is cheap.

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// Concept or role name.
pub type Name = Arc<str>;

/// A canonical EL⊥ concept expression.
#[derive(Clone)]
pub struct Concept(Arc<Node>);

struct Node {
    kind: ConceptKind,
    hash: u64,
    depth: usize,
    size: usize,
}

/// The shape of a canonical concept.
///
/// `And` holds at least two conjuncts, none of which is `Top`, `Bottom` or
/// another `And`; `Exists` never has a `Bottom` filler.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ConceptKind {
    Top,
    Bottom,
    Atom(Name),
    And(Vec<Concept>),
    Exists(Name, Concept),
}

/// A concept tree with no normalization applied, as produced by the parser.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawConcept {
    Top,
    Bottom,
    Atom(String),
    And(Vec<RawConcept>),
    Exists(String, Box<RawConcept>),
}

impl Concept {
    fn from_kind(kind: ConceptKind) -> Self {
        let mut h = DefaultHasher::new();
        kind.hash(&mut h);
        let (depth, size) = match &kind {
            ConceptKind::Top | ConceptKind::Bottom | ConceptKind::Atom(_) => (0, 1),
            ConceptKind::And(cs) => (
                cs.iter().map(Concept::role_depth).max().unwrap_or(0),
                cs.iter().fold(0usize, |acc, c| acc.saturating_add(c.size())),
            ),
            ConceptKind::Exists(_, f) => (f.role_depth() + 1, f.size().saturating_add(1)),
        };
        Concept(Arc::new(Node {
            kind,
            hash: h.finish(),
            depth,
            size,
        }))
    }

    pub fn top() -> Self {
        Self::from_kind(ConceptKind::Top)
    }

    pub fn bottom() -> Self {
        Self::from_kind(ConceptKind::Bottom)
    }

    pub fn atom(name: impl Into<Name>) -> Self {
        Self::from_kind(ConceptKind::Atom(name.into()))
    }

    /// `∃role.filler`; collapses to `Bottom` when the filler is `Bottom`.
    pub fn exists(role: impl Into<Name>, filler: Concept) -> Self {
        if filler.is_bottom() {
            return Self::bottom();
        }
        Self::from_kind(ConceptKind::Exists(role.into(), filler))
    }

    /// `∃role^n.filler`, i.e. `n` nested existential restrictions.
    pub fn exists_n(role: impl Into<Name>, n: usize, filler: Concept) -> Self {
        let role = role.into();
        (0..n).fold(filler, |c, _| Concept::exists(role.clone(), c))
    }

    /// Canonical conjunction of the given concepts.
    pub fn and<I: IntoIterator<Item = Concept>>(conjuncts: I) -> Self {
        let mut flat: Vec<Concept> = Vec::new();
        for c in conjuncts {
            match c.kind() {
                ConceptKind::Bottom => return Self::bottom(),
                ConceptKind::Top => {}
                ConceptKind::And(inner) => flat.extend(inner.iter().cloned()),
                _ => flat.push(c),
            }
        }
        flat.sort();
        flat.dedup();
        match flat.len() {
            0 => Self::top(),
            1 => flat.pop().unwrap(),
            _ => Self::from_kind(ConceptKind::And(flat)),
        }
    }

    pub fn kind(&self) -> &ConceptKind {
        &self.0.kind
    }

    pub fn is_top(&self) -> bool {
        matches!(self.kind(), ConceptKind::Top)
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self.kind(), ConceptKind::Bottom)
    }

    /// Top-level conjuncts; a non-conjunction is its own single conjunct and
    /// `Top` has none.
    pub fn conjuncts(&self) -> &[Concept] {
        match self.kind() {
            ConceptKind::And(cs) => cs,
            ConceptKind::Top => &[],
            _ => std::slice::from_ref(self),
        }
    }

    pub fn role_depth(&self) -> usize {
        self.0.depth
    }

    /// Number of syntax nodes other than conjunctions, counted as a tree
    /// (shared sub-concepts count once per occurrence; saturates).
    pub fn size(&self) -> usize {
        self.0.size
    }

    /// Pointer identity, used as a cheap memoization key.
    pub fn ptr_eq(&self, other: &Concept) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn to_raw(&self) -> RawConcept {
        match self.kind() {
            ConceptKind::Top => RawConcept::Top,
            ConceptKind::Bottom => RawConcept::Bottom,
            ConceptKind::Atom(a) => RawConcept::Atom(a.to_string()),
            ConceptKind::And(cs) => RawConcept::And(cs.iter().map(Concept::to_raw).collect()),
            ConceptKind::Exists(r, f) => RawConcept::Exists(r.to_string(), Box::new(f.to_raw())),
        }
    }

    /// Concept and role names occurring in this concept.
    pub fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        let mut seen = HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(c) = stack.pop() {
            if !seen.insert(c.clone()) {
                continue;
            }
            match c.kind() {
                ConceptKind::Atom(a) => {
                    sig.concept_names.insert(a.clone());
                }
                ConceptKind::And(cs) => stack.extend(cs.iter().cloned()),
                ConceptKind::Exists(r, f) => {
                    sig.role_names.insert(r.clone());
                    stack.push(f.clone());
                }
                _ => {}
            }
        }
        sig
    }

    /// Distinct sub-concepts (including `self`), children before parents.
    pub fn subconcepts(&self) -> Vec<Concept> {
        let mut order = Vec::new();
        let mut seen: HashSet<Concept> = HashSet::new();
        let mut stack = vec![(self.clone(), false)];
        while let Some((c, expanded)) = stack.pop() {
            if expanded {
                order.push(c);
                continue;
            }
            if seen.contains(&c) {
                continue;
            }
            seen.insert(c.clone());
            stack.push((c.clone(), true));
            match c.kind() {
                ConceptKind::And(cs) => {
                    for x in cs.iter().rev() {
                        if !seen.contains(x) {
                            stack.push((x.clone(), false));
                        }
                    }
                }
                ConceptKind::Exists(_, f) if !seen.contains(f) => stack.push((f.clone(), false)),
                _ => {}
            }
        }
        order
    }

    fn rank(&self) -> u8 {
        match self.kind() {
            ConceptKind::Top => 0,
            ConceptKind::Bottom => 1,
            ConceptKind::Atom(_) => 2,
            ConceptKind::Exists(..) => 3,
            ConceptKind::And(_) => 4,
        }
    }
}

/// Normal form of an arbitrary concept tree.
pub fn canonicalize(raw: &RawConcept) -> Concept {
    match raw {
        RawConcept::Top => Concept::top(),
        RawConcept::Bottom => Concept::bottom(),
        RawConcept::Atom(a) => Concept::atom(a.as_str()),
        RawConcept::And(cs) => Concept::and(cs.iter().map(canonicalize)),
        RawConcept::Exists(r, f) => Concept::exists(r.as_str(), canonicalize(f)),
    }
}

pub fn role_depth(c: &Concept) -> usize {
    c.role_depth()
}

impl PartialEq for Concept {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.hash == other.0.hash && deep_eq(self, other, &mut HashSet::new()))
    }
}

/// Structural equality that visits each pair of shared nodes once, so two
/// separately built DAGs compare in time linear in their size.
fn deep_eq(a: &Concept, b: &Concept, seen: &mut HashSet<(*const Node, *const Node)>) -> bool {
    if Arc::ptr_eq(&a.0, &b.0) {
        return true;
    }
    if a.0.hash != b.0.hash || a.0.depth != b.0.depth || a.0.size != b.0.size {
        return false;
    }
    if !seen.insert((Arc::as_ptr(&a.0), Arc::as_ptr(&b.0))) {
        return true;
    }
    match (a.kind(), b.kind()) {
        (ConceptKind::Top, ConceptKind::Top) | (ConceptKind::Bottom, ConceptKind::Bottom) => true,
        (ConceptKind::Atom(x), ConceptKind::Atom(y)) => x == y,
        (ConceptKind::Exists(r, f), ConceptKind::Exists(s, g)) => r == s && deep_eq(f, g, seen),
        (ConceptKind::And(xs), ConceptKind::And(ys)) => {
            xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| deep_eq(x, y, seen))
        }
        _ => false,
    }
}

impl Eq for Concept {}

impl Hash for Concept {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

// Atoms sort before existentials, so rendered conjunctions list concept
// names first.
impl Ord for Concept {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        match self.rank().cmp(&other.rank()) {
            Ordering::Equal => {}
            o => return o,
        }
        match (self.kind(), other.kind()) {
            (ConceptKind::Atom(a), ConceptKind::Atom(b)) => a.cmp(b),
            (ConceptKind::Exists(r, f), ConceptKind::Exists(s, g)) => r.cmp(s).then_with(|| f.cmp(g)),
            (ConceptKind::And(a), ConceptKind::And(b)) => a.cmp(b),
            _ => Ordering::Equal,
        }
    }
}

impl PartialOrd for Concept {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            ConceptKind::Top => f.write_str("Top"),
            ConceptKind::Bottom => f.write_str("Bottom"),
            ConceptKind::Atom(a) => f.write_str(a),
            ConceptKind::Exists(r, filler) => {
                write!(f, "some {r}.")?;
                match filler.kind() {
                    ConceptKind::Top | ConceptKind::Atom(_) => write!(f, "{filler}"),
                    _ => write!(f, "({filler})"),
                }
            }
            ConceptKind::And(cs) => {
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" and ")?;
                    }
                    match c.kind() {
                        ConceptKind::Exists(..) => write!(f, "({c})")?,
                        _ => write!(f, "{c}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Concept({self})")
    }
}

/// Interns structurally equal concepts to a single shared allocation.
#[derive(Default)]
pub struct Interner {
    table: HashMap<Concept, Concept>,
}

impl Interner {
    pub fn intern(&mut self, c: Concept) -> Concept {
        self.table.entry(c.clone()).or_insert(c).clone()
    }

    pub fn and<I: IntoIterator<Item = Concept>>(&mut self, cs: I) -> Concept {
        let c = Concept::and(cs);
        self.intern(c)
    }

    pub fn exists(&mut self, role: Name, filler: Concept) -> Concept {
        let c = Concept::exists(role, filler);
        self.intern(c)
    }
}

/// Concept names and role names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    pub concept_names: BTreeSet<Name>,
    pub role_names: BTreeSet<Name>,
}

impl Signature {
    pub fn new<A, R>(concepts: A, roles: R) -> Self
    where
        A: IntoIterator,
        A::Item: Into<Name>,
        R: IntoIterator,
        R::Item: Into<Name>,
    {
        Signature {
            concept_names: concepts.into_iter().map(Into::into).collect(),
            role_names: roles.into_iter().map(Into::into).collect(),
        }
    }

    pub fn is_disjoint(&self) -> bool {
        self.concept_names.is_disjoint(&self.role_names)
    }
}

/// `lhs ⊑ rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConceptInclusion {
    pub lhs: Concept,
    pub rhs: Concept,
}

impl ConceptInclusion {
    pub fn new(lhs: Concept, rhs: Concept) -> Self {
        ConceptInclusion { lhs, rhs }
    }
}

impl fmt::Display for ConceptInclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} SubClassOf {}", self.lhs, self.rhs)
    }
}

/// An axiom as written to TBox files.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Axiom {
    SubClassOf(Concept, Concept),
    EquivalentTo(Concept, Concept),
}

impl Axiom {
    /// The concept inclusions this axiom stands for.
    pub fn inclusions(&self) -> Vec<ConceptInclusion> {
        match self {
            Axiom::SubClassOf(c, d) => vec![ConceptInclusion::new(c.clone(), d.clone())],
            Axiom::EquivalentTo(c, d) => vec![
                ConceptInclusion::new(c.clone(), d.clone()),
                ConceptInclusion::new(d.clone(), c.clone()),
            ],
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::SubClassOf(c, d) => write!(f, "{c} SubClassOf {d}"),
            Axiom::EquivalentTo(c, d) => write!(f, "{c} EquivalentTo {d}"),
        }
    }
}

/// A finite, duplicate-free set of axioms in insertion order.
#[derive(Debug, Clone, Default)]
pub struct TBox {
    axioms: Vec<Axiom>,
    seen: HashSet<Axiom>,
}

impl TBox {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an axiom; returns false if it was already present.
    pub fn insert(&mut self, axiom: Axiom) -> bool {
        if self.seen.insert(axiom.clone()) {
            self.axioms.push(axiom);
            true
        } else {
            false
        }
    }

    pub fn add_inclusion(&mut self, lhs: Concept, rhs: Concept) -> bool {
        self.insert(Axiom::SubClassOf(lhs, rhs))
    }

    pub fn add_equivalence(&mut self, lhs: Concept, rhs: Concept) -> bool {
        self.insert(Axiom::EquivalentTo(lhs, rhs))
    }

    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }

    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }

    /// All axioms as plain concept inclusions.
    pub fn inclusions(&self) -> impl Iterator<Item = ConceptInclusion> + '_ {
        self.axioms.iter().flat_map(Axiom::inclusions)
    }

    pub fn max_role_depth(&self) -> usize {
        self.inclusions()
            .map(|ci| ci.lhs.role_depth().max(ci.rhs.role_depth()))
            .max()
            .unwrap_or(0)
    }
}

impl FromIterator<Axiom> for TBox {
    fn from_iter<T: IntoIterator<Item = Axiom>>(iter: T) -> Self {
        let mut t = TBox::new();
        for a in iter {
            t.insert(a);
        }
        t
    }
}

impl FromIterator<ConceptInclusion> for TBox {
    fn from_iter<T: IntoIterator<Item = ConceptInclusion>>(iter: T) -> Self {
        iter.into_iter().map(|ci| Axiom::SubClassOf(ci.lhs, ci.rhs)).collect()
    }
}
