//! Brute-force oracles, seeded generators and checks of the structural
//! lemmas behind MMSCs and bases.

use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::concept::{Concept, ConceptInclusion, ConceptKind, Name, Signature, TBox};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::graph::{graph_of_interpretation, product_trees, unravel, DescriptionGraph, DescriptionTree, Vertex};
use crate::interpretation::{Element, Interpretation};
use crate::mmsc::MmscEngine;
use crate::mvf::mvf;
use crate::simulation::{
    bounded_simulation, equivalent_empty, extension, functional_subsimulation, greatest_simulation, is_simulation,
    simulates, subsumed_empty,
};

/// Seed used when `CIFORGE_SEED` is unset.
pub const DEFAULT_SEED: u64 = 20_240_611;

/// The base seed: `CIFORGE_SEED` if set to an integer, else [`DEFAULT_SEED`].
pub fn base_seed() -> u64 {
    std::env::var("CIFORGE_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

/// An independent stream derived from the base seed.
pub fn seeded_rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(base_seed() ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// A random interpretation with `1..=max_domain` elements. Every concept
/// name holds of an element and every role holds of a pair with
/// probability `density`.
pub fn random_interpretation(
    rng: &mut impl Rng,
    max_domain: usize,
    concept_names: &[&str],
    role_names: &[&str],
    density: f64,
) -> Interpretation {
    let n = rng.gen_range(1..=max_domain);
    let domain: Vec<String> = (0..n).map(|k| format!("e{k}")).collect();
    let concepts: Vec<(String, Vec<String>)> = concept_names
        .iter()
        .map(|a| {
            let ext = domain.iter().filter(|_| rng.gen_bool(density)).cloned().collect();
            (a.to_string(), ext)
        })
        .collect();
    let roles: Vec<(String, Vec<(String, String)>)> = role_names
        .iter()
        .map(|r| {
            let mut pairs = Vec::new();
            for s in &domain {
                for t in &domain {
                    if rng.gen_bool(density) {
                        pairs.push((s.clone(), t.clone()));
                    }
                }
            }
            (r.to_string(), pairs)
        })
        .collect();
    Interpretation::new(domain, concepts, roles).expect("generated interpretations are valid")
}

/// A random description graph with `1..=max_vertices` vertices.
pub fn random_graph(
    rng: &mut impl Rng,
    max_vertices: usize,
    labels: &[&str],
    roles: &[&str],
    density: f64,
) -> DescriptionGraph {
    let n = rng.gen_range(1..=max_vertices);
    let mut g = DescriptionGraph::new();
    for v in 0..n {
        let ls = labels.iter().filter(|_| rng.gen_bool(density)).map(|l| Name::from(*l)).collect();
        g.add_vertex(format!("v{v}"), ls);
    }
    for s in 0..n {
        for t in 0..n {
            for r in roles {
                if rng.gen_bool(density) {
                    g.add_edge(s, Name::from(*r), t);
                }
            }
        }
    }
    g
}

/// Canonical concepts over a signature as conjunctions of "blocks" (concept
/// names and existential restrictions). Sizes count the syntax nodes other
/// than conjunctions, so `A ⊓ ∃r.⊤` has size 3.
pub struct ConceptSpace {
    pub blocks: Vec<Concept>,
    pub sizes: Vec<usize>,
    pub size_cap: usize,
}

/// Depth-first traversal events of [`ConceptSpace::walk`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkEvent {
    /// Add a block; the blocks entered so far form the next concept.
    Enter(usize),
    Leave,
}

impl ConceptSpace {
    pub fn new(sig: &Signature, depth: usize, size_cap: usize) -> Self {
        let mut blocks: Vec<(usize, Concept)> = Vec::new();
        if size_cap >= 1 {
            for a in &sig.concept_names {
                blocks.push((1, Concept::atom(a.clone())));
            }
        }
        if depth > 0 && size_cap >= 2 {
            let fillers = enumerate_concepts(sig, depth - 1, size_cap - 1);
            for r in &sig.role_names {
                for f in fillers.iter().filter(|f| !f.is_bottom()) {
                    blocks.push((f.size() + 1, Concept::exists(r.clone(), f.clone())));
                }
            }
        }
        blocks.sort();
        ConceptSpace {
            sizes: blocks.iter().map(|b| b.0).collect(),
            blocks: blocks.into_iter().map(|b| b.1).collect(),
            size_cap,
        }
    }

    /// Visits every non-empty set of distinct blocks whose sizes sum to at
    /// most the cap, each once, depth-first.
    pub fn walk(&self, mut visit: impl FnMut(WalkEvent)) {
        self.walk_from(0, self.size_cap, &mut visit);
    }

    fn walk_from(&self, start: usize, budget: usize, visit: &mut impl FnMut(WalkEvent)) {
        for b in start..self.blocks.len() {
            if self.sizes[b] > budget {
                break;
            }
            visit(WalkEvent::Enter(b));
            self.walk_from(b + 1, budget - self.sizes[b], visit);
            visit(WalkEvent::Leave);
        }
    }

    /// Number of concepts, including `⊤` and `⊥`.
    pub fn count(&self) -> usize {
        let mut n = 2;
        self.walk(|e| {
            if let WalkEvent::Enter(_) = e {
                n += 1;
            }
        });
        n
    }
}

/// Every canonical concept over `sig` with role depth at most `depth` and
/// at most `size_cap` non-conjunction syntax nodes, each exactly once.
pub fn enumerate_concepts(sig: &Signature, depth: usize, size_cap: usize) -> Vec<Concept> {
    if size_cap == 0 {
        return Vec::new();
    }
    let space = ConceptSpace::new(sig, depth, size_cap);
    let mut out = vec![Concept::bottom(), Concept::top()];
    let mut path: Vec<usize> = Vec::new();
    space.walk(|e| match e {
        WalkEvent::Enter(b) => {
            path.push(b);
            out.push(Concept::and(path.iter().map(|&k| space.blocks[k].clone())));
        }
        WalkEvent::Leave => {
            path.pop();
        }
    });
    out
}

/// `C^I` by structural recursion over the concept, independent of the
/// simulation-based evaluation.
pub fn semantic_extension(c: &Concept, i: &Interpretation) -> BTreeSet<Element> {
    let mut memo: HashMap<Concept, BTreeSet<Element>> = HashMap::new();
    for sub in c.subconcepts() {
        let ext = match sub.kind() {
            ConceptKind::Top => i.elements().collect(),
            ConceptKind::Bottom => BTreeSet::new(),
            ConceptKind::Atom(a) => i.concept_ext(a),
            ConceptKind::Exists(r, f) => {
                let fe = &memo[f];
                i.role_ext(r)
                    .into_iter()
                    .filter(|(_, t)| fe.contains(t))
                    .map(|(s, _)| s)
                    .collect()
            }
            ConceptKind::And(cs) => {
                let mut it = cs.iter();
                let first = memo[it.next().expect("conjunctions are non-empty")].clone();
                it.fold(first, |acc, x| acc.intersection(&memo[x]).copied().collect())
            }
        };
        memo.insert(sub, ext);
    }
    memo.remove(c).expect("a concept is its own sub-concept")
}

/// `I ⊨ t`.
pub fn is_model(i: &Interpretation, t: &TBox) -> bool {
    t.inclusions()
        .all(|ci| semantic_extension(&ci.lhs, i).is_subset(&semantic_extension(&ci.rhs, i)))
}

/// Largest number of candidate interpretations [`find_countermodel`] tries.
pub const COUNTERMODEL_BUDGET: u64 = 1 << 22;

/// Searches all interpretations over the names of `t` and `ci` with at
/// most `max_domain` elements for a model of `t` violating `ci`.
pub fn find_countermodel(t: &TBox, ci: &ConceptInclusion, max_domain: usize) -> Result<Option<Interpretation>> {
    let mut sig = ci.lhs.signature();
    for c in [&ci.rhs]
        .into_iter()
        .cloned()
        .chain(t.inclusions().flat_map(|x| [x.lhs, x.rhs]))
    {
        let s = c.signature();
        sig.concept_names.extend(s.concept_names);
        sig.role_names.extend(s.role_names);
    }
    let atoms: Vec<Name> = sig.concept_names.into_iter().collect();
    let roles: Vec<Name> = sig.role_names.into_iter().collect();
    let mut total: u64 = 0;
    for n in 1..=max_domain {
        let bits = n * atoms.len() + n * n * roles.len();
        if bits >= 40 {
            total = u64::MAX;
            break;
        }
        total = total.saturating_add(1 << bits);
    }
    if total > COUNTERMODEL_BUDGET {
        return Err(Error::ResourceCap {
            what: "countermodel search space",
            limit: COUNTERMODEL_BUDGET as usize,
        });
    }
    let axioms: Vec<ConceptInclusion> = t.inclusions().collect();
    for n in 1..=max_domain {
        let abits = n * atoms.len();
        let bits = abits + n * n * roles.len();
        for code in 0u64..(1 << bits) {
            let atom_mask = |k: usize| (code >> (k * n)) & ((1 << n) - 1);
            let role_succ = |k: usize, x: usize| (code >> (abits + k * n * n + x * n)) & ((1 << n) - 1);
            let mut memo: HashMap<Concept, u64> = HashMap::new();
            let mut eval = |c: &Concept| -> u64 {
                for sub in c.subconcepts() {
                    if memo.contains_key(&sub) {
                        continue;
                    }
                    let m = match sub.kind() {
                        ConceptKind::Top => (1 << n) - 1,
                        ConceptKind::Bottom => 0,
                        ConceptKind::Atom(a) => atom_mask(atoms.binary_search(a).expect("collected")),
                        ConceptKind::Exists(r, f) => {
                            let k = roles.binary_search(r).expect("collected");
                            let fm = memo[f];
                            (0..n).filter(|&x| role_succ(k, x) & fm != 0).fold(0, |m, x| m | (1 << x))
                        }
                        ConceptKind::And(cs) => cs.iter().fold((1 << n) - 1, |m, x| m & memo[x]),
                    };
                    memo.insert(sub, m);
                }
                memo[c]
            };
            let holds = |l: u64, r: u64| l & !r == 0;
            if !axioms.iter().all(|ax| holds(eval(&ax.lhs), eval(&ax.rhs))) {
                continue;
            }
            if holds(eval(&ci.lhs), eval(&ci.rhs)) {
                continue;
            }
            let domain: Vec<String> = (0..n).map(|x| format!("d{x}")).collect();
            let concepts = atoms.iter().enumerate().map(|(k, a)| {
                let m = atom_mask(k);
                (a.to_string(), (0..n).filter(|x| m & (1 << x) != 0).map(|x| domain[x].clone()).collect())
            });
            let role_pairs: Vec<(String, Vec<(String, String)>)> = roles
                .iter()
                .enumerate()
                .map(|(k, r)| {
                    let mut pairs = Vec::new();
                    for x in 0..n {
                        for y in 0..n {
                            if role_succ(k, x) & (1 << y) != 0 {
                                pairs.push((domain[x].clone(), domain[y].clone()));
                            }
                        }
                    }
                    (r.to_string(), pairs)
                })
                .collect();
            let concepts: Vec<(String, Vec<String>)> = concepts.collect();
            return Ok(Some(Interpretation::new(domain, concepts, role_pairs)?));
        }
    }
    Ok(None)
}

/// Stabilization of the adaptive MMSC: five more levels of unravelling
/// change nothing.
pub fn stabilization_check(engine: &MmscEngine<'_>, xs: &BTreeSet<Element>) -> Result<bool> {
    if xs.is_empty() {
        return Ok(true);
    }
    let report = engine.adaptable_depth(xs)?;
    let at = engine.extension(&engine.mmsc_adaptive(xs)?);
    let later = engine.extension(&engine.mmsc_at_depth(xs, report.chosen_depth + 5)?);
    Ok(at == later)
}

/// The three defining conditions of `mmsc(X)_d`, with the last one checked
/// against the given candidate concepts.
pub fn mmsc_conditions_check(
    engine: &MmscEngine<'_>,
    xs: &BTreeSet<Element>,
    d: usize,
    candidates: &[Concept],
) -> Result<bool> {
    let m = engine.mmsc_at_depth(xs, d)?;
    if !engine.extension(&m).is_superset(xs) || m.role_depth() > d {
        return Ok(false);
    }
    Ok(candidates
        .iter()
        .filter(|c| c.role_depth() <= d && engine.extension(c).is_superset(xs))
        .all(|c| subsumed_empty(&m, c)))
}

/// `ext(mmsc(ext(C))) = ext(C)`.
pub fn extension_fixpoint_check(engine: &MmscEngine<'_>, c: &Concept) -> Result<bool> {
    let ext = engine.extension(c);
    Ok(engine.extension(&engine.mmsc_adaptive(&ext)?) == ext)
}

/// At a fixed depth, the MMSC of the extension of an MMSC is equivalent to
/// it.
pub fn fixed_depth_closure_check(engine: &MmscEngine<'_>, xs: &BTreeSet<Element>, k: usize) -> Result<bool> {
    let m = engine.mmsc_at_depth(xs, k)?;
    let again = engine.mmsc_at_depth(&engine.extension(&m), k)?;
    Ok(equivalent_empty(&m, &again))
}

/// `ext(∃r.mmsc(ext(C))) = ext(∃r.C)`.
pub fn monotonicity_check(engine: &MmscEngine<'_>, c: &Concept, r: &Name) -> Result<bool> {
    let lifted = Concept::exists(r.clone(), engine.mmsc_adaptive(&engine.extension(c))?);
    Ok(engine.extension(&lifted) == engine.extension(&Concept::exists(r.clone(), c.clone())))
}

/// The lower approximation keeps the extension.
pub fn approximation_check(engine: &MmscEngine<'_>, c: &Concept) -> Result<bool> {
    Ok(engine.extension(&engine.lower_approximation(c)?) == engine.extension(c))
}

/// A simulation from an unravelling into its graph contains a functional
/// simulation.
pub fn functional_extraction_check(g: &DescriptionGraph, v: Vertex, depth: usize) -> Result<bool> {
    let t = unravel(g, v, depth)?;
    let sim = greatest_simulation(&t.graph, g);
    let Some(f) = functional_subsimulation(&t.graph, t.root, g, v, &sim) else {
        return Ok(false);
    };
    Ok(is_simulation(&t.graph, t.root, g, v, &f) && t.graph.vertices().all(|x| f.image(x).count() <= 1))
}

/// A product of trees is simulated by each of its factors.
pub fn product_projection_check(trees: &[DescriptionTree]) -> Result<bool> {
    let p = product_trees(trees)?;
    Ok(trees.iter().all(|t| simulates(&p.graph, p.root, &t.graph, t.root)))
}

/// If `(g', v')` simulates the unravelling of `g` at `v` to depth
/// `d = mvf(g, v) · mvf(g', v')`, it also simulates the unravellings of
/// depth `d + 1 ..= d + 4`.
pub fn claim_dsim_check(g: &DescriptionGraph, v: Vertex, g2: &DescriptionGraph, v2: Vertex) -> bool {
    let d = mvf(g, v) * mvf(g2, v2);
    let layers = bounded_simulation(g, g2, d + 4);
    !layers[d].contains(v, v2) || (d + 1..=d + 4).all(|k| layers[k].contains(v, v2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FbpSide {
    /// `A ⊑ ∃r^n.⊤` in the interpretation with a looping successor.
    Rhs,
    /// `∃s.∃r^n.B ⊑ A` in the interpretation with two looping branches.
    Lhs,
}

/// Checks the families of valid CIs that witness the lack of a finite base
/// with bounded role depth, for `n = 1..=n_max`.
pub fn fbp_witness_check(which: FbpSide, n_max: usize) -> bool {
    (1..=n_max).all(|n| {
        let (i, ci) = match which {
            FbpSide::Rhs => (
                fixtures::fig4i(),
                ConceptInclusion::new(Concept::atom("A"), Concept::exists_n("r", n, Concept::top())),
            ),
            FbpSide::Lhs => (
                fixtures::fig4ii(),
                ConceptInclusion::new(
                    Concept::exists("s", Concept::exists_n("r", n, Concept::atom("B"))),
                    Concept::atom("A"),
                ),
            ),
        };
        extension(&ci.lhs, &i).is_subset(&extension(&ci.rhs, &i))
    })
}

/// The exponential-depth example: the hubs need depth 29 to tell them apart
/// from the self-looping `x4`.
pub fn exponential_depth_check() -> Result<bool> {
    let i = fixtures::fig5();
    let engine = MmscEngine::new(&i);
    let el = |n: &str| i.element(n);
    let hubs: BTreeSet<Element> = i.element_set(&["x1", "x2", "x3"])?;
    let (x4, x5) = (el("x4")?, el("x5")?);
    let a = Concept::atom("A");
    let ext29 = engine.extension(&Concept::exists_n("r", 29, a.clone()));
    if !ext29.is_superset(&hubs) {
        return Ok(false);
    }
    for d in 0..=29 {
        if engine.extension(&Concept::exists_n("r", d, a.clone())).contains(&x4) {
            return Ok(false);
        }
    }
    for d in 0..=35 {
        if !engine.extension(&Concept::exists_n("r", d, a.clone())).contains(&x5) {
            return Ok(false);
        }
    }
    let x1 = el("x1")?;
    for k in 1..=10 {
        let holds = engine.extension(&Concept::exists_n("r", k, a.clone())).contains(&x1);
        if holds != (k % 2 == 1) {
            return Ok(false);
        }
    }
    let at28 = engine.extension(&engine.mmsc_at_depth(&hubs, 28)?);
    let at29 = engine.extension(&engine.mmsc_at_depth(&hubs, 29)?);
    Ok(at28.contains(&x4) && !at29.contains(&x4))
}

/// Every non-empty subset of the domain.
pub fn nonempty_subsets(i: &Interpretation) -> impl Iterator<Item = BTreeSet<Element>> + '_ {
    let n = i.len();
    (1u64..(1 << n)).map(move |m| (0..n).filter(|b| m & (1 << b) != 0).collect())
}

/// Unravellings of every vertex of an interpretation's graph to depth `d`.
pub fn unravellings(i: &Interpretation, d: usize) -> Result<Vec<DescriptionTree>> {
    let g = graph_of_interpretation(i);
    g.vertices().map(|v| unravel(&g, v, d)).collect()
}
