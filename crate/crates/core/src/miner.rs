//! The attribute set `M_I`, closed attribute sets, and base construction.
//!
//! Extensions are bitmasks over the domain, so domains are limited to
//! [`Limits::domain_cap`] elements (at most 64).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;

use crate::concept::{Concept, ConceptInclusion, ConceptKind, Name, TBox};
use crate::error::{Error, Result};
use crate::interpretation::{Element, Interpretation};
use crate::mmsc::{Branch, DepthReport, Limits, MmscEngine};
use crate::reasoner::{LocalQuery, Reasoner};
use crate::simulation::equivalent_empty;
use crate::testkit::{ConceptSpace, WalkEvent};

/// A set of domain elements as a bitmask.
pub type Extent = u64;

pub fn mask_of<'a>(xs: impl IntoIterator<Item = &'a Element>) -> Extent {
    xs.into_iter().fold(0, |m, &x| m | (1 << x))
}

pub fn elements_of(mask: Extent) -> BTreeSet<Element> {
    (0..64).filter(|b| mask & (1 << b) != 0).collect()
}

pub fn full_mask(n: usize) -> Extent {
    if n == 64 {
        u64::MAX
    } else {
        (1 << n) - 1
    }
}

/// `M_I` with precomputed extensions, in the order used for lectic
/// enumeration.
#[derive(Debug, Clone)]
pub struct AttributeSet {
    pub attributes: Vec<Concept>,
    pub ext: Vec<Extent>,
    /// For `∃r.mmsc(X)` attributes: `r` and `X`.
    pub sources: Vec<Option<(Name, Extent)>>,
    /// Depth report of every non-empty `X` whose MMSC was computed.
    pub depth_reports: BTreeMap<Extent, DepthReport>,
    domain: Extent,
}

impl AttributeSet {
    pub fn len(&self) -> usize {
        self.attributes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }

    pub fn domain(&self) -> Extent {
        self.domain
    }

    /// Common extension of a set of attributes (the whole domain for `∅`).
    pub fn extent(&self, u: &FixedBitSet) -> Extent {
        u.ones().fold(self.domain, |m, a| m & self.ext[a])
    }

    /// All attributes whose extension contains `mask`.
    pub fn intent_of(&self, mask: Extent) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.len());
        for (a, &e) in self.ext.iter().enumerate() {
            if mask & !e == 0 {
                out.insert(a);
            }
        }
        out
    }

    /// `⊓U` over the attribute concepts.
    pub fn conjunction(&self, u: &FixedBitSet) -> Concept {
        Concept::and(u.ones().map(|a| self.attributes[a].clone()))
    }

    pub fn index_of(&self, c: &Concept) -> Option<usize> {
        self.attributes.iter().position(|a| a == c)
    }
}

/// An attribute with its extension and, for existentials, its source.
type Attribute = (Concept, Extent, Option<(Name, Extent)>);

pub fn attribute_set(i: &Interpretation) -> Result<AttributeSet> {
    attribute_set_with(&MmscEngine::new(i))
}

/// `{⊥} ∪ N_C ∪ {∃r.mmsc(X) | r ∈ N_R, ∅ ≠ X ⊆ Δ}` over the active
/// signature. Existential attributes are dropped when an earlier one has
/// the same extension and is ∅-equivalent.
pub fn attribute_set_with(engine: &MmscEngine<'_>) -> Result<AttributeSet> {
    let i = engine.interpretation();
    let n = i.len();
    let cap = engine.limits().domain_cap.min(64);
    if n > cap {
        return Err(Error::ResourceCap {
            what: "domain size",
            limit: cap,
        });
    }
    let sig = i.active_signature();
    let mut attrs: Vec<Attribute> = vec![(Concept::bottom(), 0, None)];
    for a in &sig.concept_names {
        attrs.push((Concept::atom(a.clone()), mask_of(&i.concept_ext(a)), None));
    }
    let mut depth_reports = BTreeMap::new();
    if !sig.role_names.is_empty() {
        let mut fillers: Vec<(Extent, Concept, Extent)> = Vec::new();
        for x in 1..=full_mask(n) {
            let (c, report) = engine.mmsc_adaptive_report(&elements_of(x))?;
            depth_reports.insert(x, report.expect("X is non-empty"));
            let ext = mask_of(&engine.extension(&c));
            fillers.push((x, c, ext));
        }
        for r in &sig.role_names {
            let pairs = i.role_ext(r);
            let mut kept: HashMap<Extent, Vec<Concept>> = HashMap::new();
            for (x, c, cext) in &fillers {
                let ext = pairs
                    .iter()
                    .filter(|(_, t)| cext & (1 << t) != 0)
                    .fold(0, |m, (s, _)| m | (1 << s));
                let cand = engine.exists(r.clone(), c.clone());
                let same = kept.entry(ext).or_default();
                if same.iter().any(|k| k == &cand || equivalent_empty(k, &cand)) {
                    continue;
                }
                same.push(cand.clone());
                attrs.push((cand, ext, Some((r.clone(), *x))));
            }
        }
    }
    attrs.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(AttributeSet {
        attributes: attrs.iter().map(|a| a.0.clone()).collect(),
        ext: attrs.iter().map(|a| a.1).collect(),
        sources: attrs.into_iter().map(|a| a.2).collect(),
        depth_reports,
        domain: full_mask(n),
    })
}

/// `{m | ext(⊓U) ⊆ ext(m)}`.
pub fn intent_closure(a: &AttributeSet, u: &FixedBitSet) -> FixedBitSet {
    a.intent_of(a.extent(u))
}

/// Closed attribute sets in lectic order, with their extensions.
#[derive(Debug, Clone, Default)]
pub struct IntentLattice {
    pub intents: Vec<(FixedBitSet, Extent)>,
}

impl IntentLattice {
    pub fn len(&self) -> usize {
        self.intents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intents.is_empty()
    }

    /// Index of the intent with the given extension.
    pub fn position(&self, ext: Extent) -> Option<usize> {
        self.intents.iter().position(|(_, e)| *e == ext)
    }

    /// Pairs `(i, j)` where intent `j` is an upper cover of intent `i`:
    /// `ext(i) ⊂ ext(j)` with no intent strictly between.
    pub fn cover_edges(&self) -> Vec<(usize, usize)> {
        let exts: Vec<Extent> = self.intents.iter().map(|x| x.1).collect();
        let below = |a: Extent, b: Extent| a != b && a & !b == 0;
        let mut out = Vec::new();
        for (i, &ei) in exts.iter().enumerate() {
            for (j, &ej) in exts.iter().enumerate() {
                if below(ei, ej) && !exts.iter().any(|&ek| below(ei, ek) && below(ek, ej)) {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// NextClosure over the attribute order of `a`.
pub fn enumerate_intents(a: &AttributeSet) -> IntentLattice {
    let m = a.len();
    let mut out = Vec::new();
    let mut current = intent_closure(a, &FixedBitSet::with_capacity(m));
    loop {
        out.push((current.clone(), a.extent(&current)));
        if current.count_ones(..) == m {
            break;
        }
        let mut next = None;
        for i in (0..m).rev() {
            if current.contains(i) {
                continue;
            }
            let mut seed = FixedBitSet::with_capacity(m);
            seed.extend(current.ones().filter(|&j| j < i));
            seed.insert(i);
            let closed = intent_closure(a, &seed);
            if closed.ones().take_while(|&j| j < i).eq(current.ones().take_while(|&j| j < i)) {
                next = Some(closed);
                break;
            }
        }
        match next {
            Some(n) => current = n,
            None => break,
        }
    }
    IntentLattice { intents: out }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MiningMode {
    Naive,
    Intents,
}

impl FromStr for MiningMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "naive" => Ok(MiningMode::Naive),
            "intents" => Ok(MiningMode::Intents),
            other => Err(format!("unknown mining mode {other:?} (expected naive or intents)")),
        }
    }
}

impl fmt::Display for MiningMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MiningMode::Naive => "naive",
            MiningMode::Intents => "intents",
        })
    }
}

#[derive(Debug, Clone)]
pub struct MiningReport {
    pub mode: MiningMode,
    pub attribute_count: usize,
    pub intent_count: usize,
    pub axiom_count: usize,
    pub max_role_depth: usize,
    /// One entry per non-empty `X ⊆ Δ`, keyed by its bitmask.
    pub depth_reports: BTreeMap<Extent, DepthReport>,
}

impl MiningReport {
    /// Summary lines for file headers and `--stats`.
    pub fn summary_lines(&self) -> Vec<String> {
        let bounded = self
            .depth_reports
            .values()
            .filter(|r| r.branch == Branch::Bounded)
            .count();
        let deepest = self.depth_reports.values().map(|r| r.chosen_depth).max().unwrap_or(0);
        vec![
            format!("mode: {}", self.mode),
            format!("attributes: {}", self.attribute_count),
            format!("intents: {}", self.intent_count),
            format!("axioms: {}", self.axiom_count),
            format!("max role depth: {}", self.max_role_depth),
            format!(
                "element sets: {} ({} bounded, {} cyclic), largest chosen depth {}",
                self.depth_reports.len(),
                bounded,
                self.depth_reports.len() - bounded,
                deepest
            ),
        ]
    }
}

pub fn build_base(i: &Interpretation, mode: MiningMode) -> Result<(TBox, MiningReport)> {
    build_base_with(i, mode, Limits::default())
}

pub fn build_base_with(i: &Interpretation, mode: MiningMode, limits: Limits) -> Result<(TBox, MiningReport)> {
    let engine = MmscEngine::with_limits(i, limits);
    let attrs = attribute_set_with(&engine)?;
    let lattice = enumerate_intents(&attrs);
    let mut mmsc_memo: HashMap<Extent, Concept> = HashMap::new();
    let mut mmsc_of = |ext: Extent| -> Result<Concept> {
        if let Some(c) = mmsc_memo.get(&ext) {
            return Ok(c.clone());
        }
        let c = engine.mmsc_adaptive(&elements_of(ext))?;
        mmsc_memo.insert(ext, c.clone());
        Ok(c)
    };
    let mut axioms: Vec<(Concept, Concept, bool)> = Vec::new();
    match mode {
        MiningMode::Intents => {
            let reps: Vec<Concept> = lattice
                .intents
                .iter()
                .map(|(u, _)| engine.and(u.ones().map(|a| attrs.attributes[a].clone())))
                .collect();
            let rep_of = |ext: Extent| reps[lattice.position(ext).expect("extents of closures are intents")].clone();
            for (k, (_, ext)) in lattice.intents.iter().enumerate() {
                let m = mmsc_of(*ext)?;
                axioms.push((reps[k].clone(), m, true));
            }
            for (lo, hi) in lattice.cover_edges() {
                axioms.push((reps[lo].clone(), reps[hi].clone(), false));
            }
            // Together with `⊤ ⊑ R(∅'')` and `m ⊑ R(m'')` these let the
            // reasoner derive `⊓U ⊑ R(U'')` for every `U` one attribute at
            // a time.
            axioms.push((Concept::top(), rep_of(attrs.domain()), false));
            let mut attr_intents: BTreeSet<Extent> = BTreeSet::new();
            for (a, c) in attrs.attributes.iter().enumerate() {
                axioms.push((c.clone(), rep_of(attrs.ext[a]), false));
                attr_intents.insert(attrs.ext[a]);
            }
            for (k, (_, ext)) in lattice.intents.iter().enumerate() {
                for &other in &attr_intents {
                    let meet = ext & other;
                    if meet == *ext || meet == other {
                        continue;
                    }
                    let lhs = engine.and([reps[k].clone(), rep_of(other)]);
                    axioms.push((lhs, rep_of(meet), false));
                }
            }
        }
        MiningMode::Naive => {
            let m = attrs.len();
            if m > limits.naive_attribute_cap {
                return Err(Error::ResourceCap {
                    what: "attribute count for naive mining",
                    limit: limits.naive_attribute_cap,
                });
            }
            let reps = first_generators(&attrs.ext, attrs.domain());
            let rep: BTreeMap<Extent, Concept> = reps
                .iter()
                .map(|(&e, u)| (e, engine.and(u.iter().map(|&a| attrs.attributes[a].clone()))))
                .collect();
            for (&e, c) in &rep {
                axioms.push((c.clone(), mmsc_of(e)?, true));
            }
            for (&e1, c1) in &rep {
                for (&e2, c2) in &rep {
                    if e1 != e2 && e1 & !e2 == 0 {
                        axioms.push((c1.clone(), c2.clone(), false));
                    }
                }
            }
            // Valid inclusions between members of Λ_I that tie every `⊓U`
            // to the representative of its extension.
            for (a, c) in attrs.attributes.iter().enumerate() {
                axioms.push((c.clone(), rep[&attrs.ext[a]].clone(), true));
            }
            for (&e, c) in &rep {
                for (a, attr) in attrs.attributes.iter().enumerate() {
                    let meet = e & attrs.ext[a];
                    if meet != e {
                        axioms.push((engine.and([c.clone(), attr.clone()]), rep[&meet].clone(), false));
                    }
                }
            }
        }
    }
    let mut tbox = TBox::new();
    for (lhs, rhs, equiv) in axioms {
        if lhs == rhs || (!equiv && (lhs.is_bottom() || rhs.is_top())) {
            continue;
        }
        if equiv {
            tbox.add_equivalence(lhs, rhs);
        } else {
            tbox.add_inclusion(lhs, rhs);
        }
    }
    if let Some(bad) = violations_in(&engine, &tbox).into_iter().next() {
        return Err(Error::Soundness(format!("mined axiom does not hold in the input: {bad}")));
    }
    let report = MiningReport {
        mode,
        attribute_count: attrs.len(),
        intent_count: lattice.len(),
        axiom_count: tbox.len(),
        max_role_depth: tbox.max_role_depth(),
        depth_reports: attrs.depth_reports.clone(),
    };
    Ok((tbox, report))
}

/// One generating set `U ⊆ M` for every extension `(⊓U)^I`, found by a
/// depth-first search in lectic order. A branch is skipped when an earlier
/// one had the same extension and could add at least the same attributes,
/// since it reaches nothing new; this covers supersets of a set with empty
/// extension. The generator kept is the first one the pruned search meets.
fn first_generators(ext: &[Extent], domain: Extent) -> BTreeMap<Extent, Vec<usize>> {
    struct Search<'a> {
        ext: &'a [Extent],
        out: BTreeMap<Extent, Vec<usize>>,
        /// Smallest start index each extension was expanded from.
        expanded: HashMap<Extent, usize>,
        u: Vec<usize>,
    }
    impl Search<'_> {
        fn visit(&mut self, start: usize, cur: Extent) {
            self.out.entry(cur).or_insert_with(|| self.u.clone());
            if cur == 0 {
                return;
            }
            match self.expanded.get(&cur) {
                Some(&s) if s <= start => return,
                _ => {
                    self.expanded.insert(cur, start);
                }
            }
            for k in start..self.ext.len() {
                self.u.push(k);
                self.visit(k + 1, cur & self.ext[k]);
                self.u.pop();
            }
        }
    }
    let mut search = Search {
        ext,
        out: BTreeMap::new(),
        expanded: HashMap::new(),
        u: Vec::new(),
    };
    search.visit(0, domain);
    search.out
}

fn violations_in(engine: &MmscEngine<'_>, t: &TBox) -> Vec<ConceptInclusion> {
    let mut memo: HashMap<Concept, Extent> = HashMap::new();
    let mut ext = |c: &Concept| -> Extent {
        *memo
            .entry(c.clone())
            .or_insert_with(|| mask_of(&engine.extension(c)))
    };
    t.inclusions()
        .filter(|ci| {
            let (l, r) = (ext(&ci.lhs), ext(&ci.rhs));
            l & !r != 0
        })
        .collect()
}

/// The inclusions of `t` (equivalences split in two) that fail in `i`.
pub fn soundness_violations(i: &Interpretation, t: &TBox) -> Vec<ConceptInclusion> {
    violations_in(&MmscEngine::new(i), t)
}

/// Every axiom of `t` holds in `i`.
pub fn check_base_sound(i: &Interpretation, t: &TBox) -> bool {
    soundness_violations(i, t).is_empty()
}

/// Concept inclusions valid in `i` but not entailed by the TBox, over the
/// enumerated fragment.
#[derive(Debug, Clone, Default)]
pub struct CompletenessReport {
    /// Enumerated left-hand sides.
    pub concepts: usize,
    /// Left-hand sides that needed the pairwise check.
    pub pairwise_checked: usize,
    pub failure_count: usize,
    /// The first failures found (at most [`MAX_REPORTED_FAILURES`]).
    pub failures: Vec<ConceptInclusion>,
}

impl CompletenessReport {
    pub fn is_complete(&self) -> bool {
        self.failure_count == 0
    }
}

pub const MAX_REPORTED_FAILURES: usize = 100;

/// Checks `t ⊨ C ⊑ D` for every pair of enumerated concepts over `Σ_I` with
/// `C^I ⊆ D^I`.
///
/// `D` ranges over `⊥`, concept names and existential restrictions, since a
/// conjunction is entailed iff its conjuncts are. Each `C` is first tested
/// against `mmsc(C^I)` at the enumeration depth: every valid `D` of that
/// depth subsumes it on the empty TBox, so one entailment settles all pairs
/// with this `C`. Only when that test fails are the pairs checked one by
/// one.
pub fn check_base_complete(i: &Interpretation, t: &TBox, depth: usize, size_cap: usize) -> Result<CompletenessReport> {
    if i.len() > 64 {
        return Err(Error::ResourceCap {
            what: "domain size",
            limit: 64,
        });
    }
    let engine = MmscEngine::new(i);
    let space = ConceptSpace::new(&i.active_signature(), depth, size_cap);
    let mut eval = MaskEval::new(i);
    let block_ext: Vec<Extent> = space.blocks.iter().map(|b| eval.extent(b)).collect();
    let domain = full_mask(i.len());

    let mut report = CompletenessReport {
        concepts: 2,
        ..Default::default()
    };
    let mut seen: BTreeSet<Extent> = [domain].into_iter().collect();
    let mut stack = vec![domain];
    space.walk(|e| match e {
        WalkEvent::Enter(b) => {
            let x = stack.last().expect("root extent") & block_ext[b];
            seen.insert(x);
            stack.push(x);
            report.concepts += 1;
        }
        WalkEvent::Leave => {
            stack.pop();
        }
    });

    let mut targets: HashMap<Extent, Concept> = HashMap::new();
    for &x in &seen {
        let c = if x == 0 {
            Concept::bottom()
        } else {
            engine.mmsc_at_depth(&elements_of(x), depth)?
        };
        targets.insert(x, c);
    }
    let sig = i.active_signature();
    let mut reasoner = Reasoner::new(t);
    for r in &sig.role_names {
        reasoner.register_role(r);
    }
    let atoms: Vec<Concept> = sig.concept_names.iter().map(|a| Concept::atom(a.clone())).collect();
    reasoner.prepare(atoms.iter().chain(targets.values()));

    let mut q = LocalQuery::new(&reasoner);
    let mut path: Vec<usize> = Vec::new();
    let mut stack = vec![domain];
    let check = |q: &LocalQuery<'_>, path: &[usize], x: Extent, report: &mut CompletenessReport| {
        if q.entails(&targets[&x]) {
            return;
        }
        report.pairwise_checked += 1;
        let rhs = (x == 0)
            .then(Concept::bottom)
            .into_iter()
            .chain((0..space.blocks.len()).filter(|&d| x & !block_ext[d] == 0).map(|d| space.blocks[d].clone()));
        for d in rhs {
            if !q.entails(&d) {
                report.failure_count += 1;
                if report.failures.len() < MAX_REPORTED_FAILURES {
                    let lhs = Concept::and(path.iter().map(|&k| space.blocks[k].clone()));
                    report.failures.push(ConceptInclusion::new(lhs, d));
                }
            }
        }
    };
    check(&q, &path, domain, &mut report);
    space.walk(|e| match e {
        WalkEvent::Enter(b) => {
            q.push(&space.blocks[b]);
            path.push(b);
            let x = stack.last().expect("root extent") & block_ext[b];
            stack.push(x);
            check(&q, &path, x, &mut report);
        }
        WalkEvent::Leave => {
            q.pop();
            path.pop();
            stack.pop();
        }
    });
    Ok(report)
}

/// Extensions as bitmasks, memoized across concepts.
struct MaskEval {
    domain: Extent,
    atoms: HashMap<Name, Extent>,
    // role -> successor mask per element
    succ: HashMap<Name, Vec<Extent>>,
    memo: HashMap<Concept, Extent>,
}

impl MaskEval {
    fn new(i: &Interpretation) -> Self {
        let sig = i.active_signature();
        let atoms = sig
            .concept_names
            .iter()
            .map(|a| (a.clone(), mask_of(&i.concept_ext(a))))
            .collect();
        let succ = sig
            .role_names
            .iter()
            .map(|r| {
                let mut v = vec![0; i.len()];
                for (s, t) in i.role_ext(r) {
                    v[s] |= 1 << t;
                }
                (r.clone(), v)
            })
            .collect();
        MaskEval {
            domain: full_mask(i.len()),
            atoms,
            succ,
            memo: HashMap::new(),
        }
    }

    fn extent(&mut self, c: &Concept) -> Extent {
        if let Some(&x) = self.memo.get(c) {
            return x;
        }
        for sub in c.subconcepts() {
            if self.memo.contains_key(&sub) {
                continue;
            }
            let x = match sub.kind() {
                ConceptKind::Top => self.domain,
                ConceptKind::Bottom => 0,
                ConceptKind::Atom(a) => self.atoms.get(a).copied().unwrap_or(0),
                ConceptKind::Exists(r, f) => {
                    let fx = self.memo[f];
                    self.succ
                        .get(r)
                        .map(|v| (0..v.len()).filter(|&e| v[e] & fx != 0).fold(0, |m, e| m | 1 << e))
                        .unwrap_or(0)
                }
                ConceptKind::And(cs) => cs.iter().fold(self.domain, |m, x| m & self.memo[x]),
            };
            self.memo.insert(sub, x);
        }
        self.memo[c]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::syntax::parse_concept;

    fn first_generators_unpruned(ext: &[Extent], domain: Extent) -> BTreeMap<Extent, Vec<usize>> {
        fn visit(ext: &[Extent], start: usize, cur: Extent, u: &mut Vec<usize>, out: &mut BTreeMap<Extent, Vec<usize>>) {
            out.entry(cur).or_insert_with(|| u.clone());
            for k in start..ext.len() {
                u.push(k);
                visit(ext, k + 1, cur & ext[k], u, out);
                u.pop();
            }
        }
        let mut out = BTreeMap::new();
        visit(ext, 0, domain, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn pruned_generator_search_reaches_every_extension() {
        use rand::Rng;
        let mut rng = crate::testkit::seeded_rng(7);
        for _ in 0..200 {
            let n = rng.gen_range(1..=4);
            let domain = full_mask(n);
            let m = rng.gen_range(0..=12);
            let ext: Vec<Extent> = (0..m).map(|_| rng.gen_range(0..=domain)).collect();
            let pruned = first_generators(&ext, domain);
            let full = first_generators_unpruned(&ext, domain);
            assert!(pruned.keys().eq(full.keys()), "{ext:?}");
            for (e, u) in &pruned {
                assert_eq!(u.iter().fold(domain, |m, &k| m & ext[k]), *e);
                assert!(u.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn masks_round_trip() {
        let xs: BTreeSet<Element> = [0, 3, 5].into_iter().collect();
        assert_eq!(elements_of(mask_of(&xs)), xs);
        assert_eq!(full_mask(3), 0b111);
    }

    #[test]
    fn trivial_interpretation_has_only_bottom() {
        let i = Interpretation::new(["a"], Vec::<(&str, Vec<&str>)>::new(), Vec::new()).unwrap();
        let a = attribute_set(&i).unwrap();
        assert_eq!(a.attributes, vec![Concept::bottom()]);
        let l = enumerate_intents(&a);
        assert_eq!(l.len(), 2);
    }

    #[test]
    fn fig3_attributes() {
        let i = fixtures::fig3();
        let a = attribute_set(&i).unwrap();
        for n in ["City", "Region", "Party", "Liberal", "Organization"] {
            assert!(a.index_of(&Concept::atom(n)).is_some(), "{n}");
        }
        for r in ["government", "partof", "capital"] {
            assert!(a.sources.iter().flatten().any(|(s, _)| &**s == r));
        }
        assert_eq!(a.ext[0], 0);
        assert!(a.attributes[0].is_bottom());
    }

    #[test]
    fn closure_operator_laws() {
        let i = fixtures::fig3();
        let a = attribute_set(&i).unwrap();
        let m = a.len();
        let empty = FixedBitSet::with_capacity(m);
        let top = intent_closure(&a, &empty);
        for (k, &e) in a.ext.iter().enumerate() {
            assert_eq!(top.contains(k), e == a.domain());
        }
        let mut bottom = FixedBitSet::with_capacity(m);
        bottom.insert(0);
        assert_eq!(intent_closure(&a, &bottom).count_ones(..), m);
        let city = a.index_of(&parse_concept("City").unwrap()).unwrap();
        let mut u = FixedBitSet::with_capacity(m);
        u.insert(city);
        let closed = intent_closure(&a, &u);
        assert!(closed.is_superset(&u));
        assert_eq!(intent_closure(&a, &closed), closed);
        let x12 = mask_of(&i.element_set(&["x1", "x2"]).unwrap());
        for k in 0..m {
            assert_eq!(closed.contains(k), x12 & !a.ext[k] == 0);
        }
    }

    #[test]
    fn intents_are_closed_and_distinct() {
        for i in [fixtures::fig3(), fixtures::fig4i(), fixtures::fig4ii(), fixtures::fig7()] {
            let a = attribute_set(&i).unwrap();
            let l = enumerate_intents(&a);
            let exts: BTreeSet<Extent> = l.intents.iter().map(|x| x.1).collect();
            assert_eq!(exts.len(), l.len());
            for (u, e) in &l.intents {
                assert_eq!(&intent_closure(&a, u), u);
                assert_eq!(a.extent(u), *e);
            }
        }
    }

    #[test]
    fn boolean_context_has_four_intents() {
        let a = AttributeSet {
            attributes: vec![Concept::atom("A"), Concept::atom("B")],
            ext: vec![0b01, 0b10],
            sources: vec![None, None],
            depth_reports: BTreeMap::new(),
            domain: 0b11,
        };
        assert_eq!(enumerate_intents(&a).len(), 4);
        let none = AttributeSet {
            attributes: vec![],
            ext: vec![],
            sources: vec![],
            depth_reports: BTreeMap::new(),
            domain: 0b1,
        };
        assert_eq!(enumerate_intents(&none).len(), 1);
    }

    #[test]
    fn soundness_checks() {
        let i = fixtures::fig3();
        assert!(check_base_sound(&i, &TBox::new()));
        let mut bad = TBox::new();
        bad.add_inclusion(Concept::top(), Concept::bottom());
        assert!(!check_base_sound(&i, &bad));
    }

    #[test]
    fn empty_tbox_is_incomplete_on_fig3() {
        let i = fixtures::fig3();
        let r = check_base_complete(&i, &TBox::new(), 1, 5).unwrap();
        assert!(!r.is_complete());
        let city_partof = ConceptInclusion::new(
            parse_concept("City").unwrap(),
            parse_concept("some partof.Region").unwrap(),
        );
        assert!(r.failures.contains(&city_partof) || r.failure_count > r.failures.len());
    }
}
