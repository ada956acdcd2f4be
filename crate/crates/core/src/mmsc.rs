//! Model-based most specific concepts, at a fixed role depth and at the
//! adaptable depth `d_I(X)`.
//!
//! The fixed-depth MMSC of `X = {x1..xn}` is the concept of the product of
//! the unravellings `G(I)^{xi}_d`. That tree is usually exponential in `d`,
//! so [`MmscEngine::mmsc_at_depth`] builds the same concept as a shared DAG:
//! on the reachable part of the `n`-fold product of `G(I)` it computes
//! `C(v, k) = ⊓ labels(v) ⊓ ⊓_{(r, w)} ∃r.C(w, k - 1)` for `k = 0..d`.
//! [`mmsc_literal`] keeps the tree construction for cross-checking.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;
use std::fmt;

use crate::concept::{Concept, ConceptKind, Interner, Name};
use crate::error::{Error, Result};
use crate::graph::{
    concept_of_tree, graph_of_interpretation, product_reachable, product_trees_capped, unravel_capped,
    DescriptionGraph, ProductGraph, Vertex, DEFAULT_NODE_CAP,
};
use crate::interpretation::{Element, Interpretation};
use crate::mvf::{condensation, Condensation, MaxWeight};
use crate::simulation::greatest_simulation;

/// Resource limits shared by the MMSC and mining code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Vertices of a reachable product graph.
    pub product_cap: usize,
    /// Nodes of an explicitly built description tree.
    pub tree_cap: usize,
    /// Domain size for anything that enumerates subsets of the domain.
    pub domain_cap: usize,
    /// Attributes allowed in naive mining (it enumerates all subsets).
    pub naive_attribute_cap: usize,
    /// Product graphs above this size skip sibling reduction.
    pub reduction_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            product_cap: 1 << 16,
            tree_cap: DEFAULT_NODE_CAP,
            domain_cap: 12,
            naive_attribute_cap: 16,
            reduction_cap: 2048,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Bounded,
    Cyclic,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Bounded => "bounded",
            Branch::Cyclic => "cyclic",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthReport {
    /// Members of `X` from which every walk has bounded length.
    pub x_lim: BTreeSet<Element>,
    /// MVF of the reachable product at the tuple of `X`.
    pub product_mvf: usize,
    pub chosen_depth: usize,
    pub branch: Branch,
}

impl fmt::Display for DepthReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "branch={} product_mvf={} chosen_depth={} x_lim_size={}",
            self.branch,
            self.product_mvf,
            self.chosen_depth,
            self.x_lim.len()
        )
    }
}

/// Per-interpretation state reused across many MMSC computations.
pub struct MmscEngine<'i> {
    interp: &'i Interpretation,
    gi: DescriptionGraph,
    cond: Condensation,
    /// Per component: can an unbounded walk start here?
    unbounded: Vec<bool>,
    mmvf: usize,
    limits: Limits,
    // Shared across calls so equal sub-concepts of different MMSCs are one
    // allocation, which keeps equality and ordering checks shallow.
    interner: RefCell<Interner>,
    // extensions over the vertices of `gi`, by concept
    extents: RefCell<HashMap<Concept, FixedBitSet>>,
    adaptive: RefCell<HashMap<BTreeSet<Element>, (Concept, DepthReport)>>,
}

impl<'i> MmscEngine<'i> {
    pub fn new(interp: &'i Interpretation) -> Self {
        Self::with_limits(interp, Limits::default())
    }

    pub fn with_limits(interp: &'i Interpretation, limits: Limits) -> Self {
        let gi = graph_of_interpretation(interp);
        let cond = condensation(&gi);
        // Tarjan numbers components after everything they reach, so DAG
        // edges always point to a smaller index.
        let mut unbounded = vec![false; cond.len()];
        for c in 0..cond.len() {
            unbounded[c] = cond.cyclic[c] || cond.dag_edges[c].iter().any(|&d| unbounded[d]);
        }
        let mut mw = MaxWeight::new(&cond);
        let mmvf = (0..cond.len()).map(|c| mw.eval(c)).max().unwrap_or(0);
        MmscEngine {
            interp,
            gi,
            cond,
            unbounded,
            mmvf,
            limits,
            interner: RefCell::new(Interner::default()),
            extents: RefCell::new(HashMap::new()),
            adaptive: RefCell::new(HashMap::new()),
        }
    }

    pub fn interpretation(&self) -> &Interpretation {
        self.interp
    }

    pub fn graph(&self) -> &DescriptionGraph {
        &self.gi
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn mmvf(&self) -> usize {
        self.mmvf
    }

    pub fn bounded_walks(&self, x: Element) -> bool {
        !self.unbounded[self.cond.component_of(x)]
    }

    fn tuple(&self, xs: &BTreeSet<Element>) -> Result<Vec<Vertex>> {
        for &x in xs {
            if x >= self.gi.len() {
                return Err(Error::UnknownVertex(x.to_string()));
            }
        }
        Ok(xs.iter().copied().collect())
    }

    fn product(&self, xs: &BTreeSet<Element>) -> Result<ProductGraph> {
        product_reachable(&self.gi, &self.tuple(xs)?, self.limits.product_cap)
    }

    pub fn adaptable_depth(&self, xs: &BTreeSet<Element>) -> Result<DepthReport> {
        if xs.is_empty() {
            return Err(Error::Validation("the adaptable depth needs a non-empty element set".into()));
        }
        let pg = self.product(xs)?;
        Ok(self.depth_of_product(xs, &pg))
    }

    fn depth_of_product(&self, xs: &BTreeSet<Element>, pg: &ProductGraph) -> DepthReport {
        let pcond = condensation(&pg.graph);
        let product_mvf = MaxWeight::new(&pcond).eval(pcond.component_of(pg.root));
        let x_lim: BTreeSet<Element> = xs.iter().copied().filter(|&x| self.bounded_walks(x)).collect();
        if x_lim.is_empty() {
            DepthReport {
                x_lim,
                product_mvf,
                chosen_depth: product_mvf * self.mmvf,
                branch: Branch::Cyclic,
            }
        } else {
            DepthReport {
                x_lim,
                product_mvf,
                chosen_depth: product_mvf - 1,
                branch: Branch::Bounded,
            }
        }
    }

    /// `mmsc(X)_d`; `Bottom` for empty `X`.
    pub fn mmsc_at_depth(&self, xs: &BTreeSet<Element>, d: usize) -> Result<Concept> {
        if xs.is_empty() {
            return Ok(Concept::bottom());
        }
        let pg = self.product(xs)?;
        Ok(self.concept_of_product(&pg, d))
    }

    /// `mmsc(X)_{d_I(X)}` together with the depth report (`None` for empty `X`).
    pub fn mmsc_adaptive_report(&self, xs: &BTreeSet<Element>) -> Result<(Concept, Option<DepthReport>)> {
        if xs.is_empty() {
            return Ok((Concept::bottom(), None));
        }
        if let Some((c, r)) = self.adaptive.borrow().get(xs) {
            return Ok((c.clone(), Some(r.clone())));
        }
        let pg = self.product(xs)?;
        let report = self.depth_of_product(xs, &pg);
        let c = self.concept_of_product(&pg, report.chosen_depth);
        self.adaptive.borrow_mut().insert(xs.clone(), (c.clone(), report.clone()));
        Ok((c, Some(report)))
    }

    pub fn mmsc_adaptive(&self, xs: &BTreeSet<Element>) -> Result<Concept> {
        Ok(self.mmsc_adaptive_report(xs)?.0)
    }

    /// Canonical conjunction, shared with the engine's other concepts.
    pub fn and(&self, cs: impl IntoIterator<Item = Concept>) -> Concept {
        self.interner.borrow_mut().and(cs)
    }

    pub fn exists(&self, role: Name, filler: Concept) -> Concept {
        self.interner.borrow_mut().exists(role, filler)
    }

    /// `c^I`, evaluated bottom-up over the sub-concepts of `c` and memoized
    /// across calls. Agrees with the simulation-based
    /// [`crate::simulation::extension_in`].
    pub fn extension(&self, c: &Concept) -> BTreeSet<Element> {
        self.extent_bits(c).ones().collect()
    }

    fn extent_bits(&self, c: &Concept) -> FixedBitSet {
        if let Some(x) = self.extents.borrow().get(c) {
            return x.clone();
        }
        let n = self.gi.len();
        let mut memo = self.extents.borrow_mut();
        for sub in c.subconcepts() {
            if memo.contains_key(&sub) {
                continue;
            }
            let mut x = FixedBitSet::with_capacity(n);
            match sub.kind() {
                ConceptKind::Top => x.insert_range(..),
                ConceptKind::Bottom => {}
                ConceptKind::Atom(a) => x.extend(self.gi.vertices().filter(|&v| self.gi.label(v).contains(a))),
                ConceptKind::Exists(r, f) => {
                    let fx = &memo[f];
                    x.extend(
                        self.gi
                            .vertices()
                            .filter(|&v| self.gi.successors(v).iter().any(|(s, u)| s == r && fx.contains(*u))),
                    );
                }
                ConceptKind::And(cs) => {
                    x.insert_range(..);
                    for part in cs {
                        x.intersect_with(&memo[part]);
                    }
                }
            }
            memo.insert(sub, x);
        }
        memo[c].clone()
    }

    /// Replaces every top-level existential filler by the adaptive MMSC of
    /// its extension.
    pub fn lower_approximation(&self, c: &Concept) -> Result<Concept> {
        if c.is_bottom() {
            return Ok(Concept::bottom());
        }
        let mut parts = Vec::new();
        for conj in c.conjuncts() {
            match conj.kind() {
                ConceptKind::Atom(_) => parts.push(conj.clone()),
                ConceptKind::Exists(r, f) => {
                    let ext = self.extension(f);
                    parts.push(Concept::exists(r.clone(), self.mmsc_adaptive(&ext)?));
                }
                _ => {}
            }
        }
        Ok(Concept::and(parts))
    }

    fn concept_of_product(&self, pg: &ProductGraph, d: usize) -> Concept {
        let g = &pg.graph;
        let succ = if g.len() <= self.limits.reduction_cap {
            reduced_successors(g)
        } else {
            g.vertices().map(|v| g.successors(v).to_vec()).collect()
        };
        let mut interner = self.interner.borrow_mut();
        let atoms: Vec<Vec<Concept>> = g
            .vertices()
            .map(|v| g.label(v).iter().map(|a| interner.intern(Concept::atom(a.clone()))).collect())
            .collect();
        let mut layer: Vec<Concept> = atoms.iter().map(|a| interner.and(a.iter().cloned())).collect();
        for _ in 0..d {
            let next: Vec<Concept> = g
                .vertices()
                .map(|v| {
                    let mut parts = atoms[v].clone();
                    for (r, w) in &succ[v] {
                        parts.push(interner.exists(r.clone(), layer[*w].clone()));
                    }
                    interner.and(parts)
                })
                .collect();
            // Without reachable cycles the layers stop changing once `k`
            // exceeds the longest path.
            let stable = next.iter().zip(&layer).all(|(a, b)| a.ptr_eq(b));
            layer = next;
            if stable {
                break;
            }
        }
        layer.swap_remove(pg.root)
    }
}

/// Successor lists without edges `(r, w1)` whose target is simulated by a
/// sibling target `(r, w2)`: then `C(w2, k) ⊑ C(w1, k)` at every depth, so
/// `∃r.C(w1, k)` is implied.
fn reduced_successors(g: &DescriptionGraph) -> Vec<Vec<(Name, Vertex)>> {
    let sim = greatest_simulation(g, g);
    g.vertices()
        .map(|v| {
            let out = g.successors(v);
            out.iter()
                .enumerate()
                .filter(|(i, (r, w1))| {
                    !out.iter().enumerate().any(|(j, (s, w2))| {
                        j != *i
                            && s == r
                            && sim.contains(*w1, *w2)
                            && (!sim.contains(*w2, *w1) || j < *i)
                    })
                })
                .map(|(_, e)| e.clone())
                .collect()
        })
        .collect()
}

/// Every walk from `x` in `G(I)` has bounded length.
pub fn bounded_walks(i: &Interpretation, x: Element) -> bool {
    MmscEngine::new(i).bounded_walks(x)
}

pub fn adaptable_depth(i: &Interpretation, xs: &BTreeSet<Element>) -> Result<DepthReport> {
    MmscEngine::new(i).adaptable_depth(xs)
}

pub fn mmsc_at_depth(i: &Interpretation, xs: &BTreeSet<Element>, d: usize) -> Result<Concept> {
    MmscEngine::new(i).mmsc_at_depth(xs, d)
}

pub fn mmsc_adaptive(i: &Interpretation, xs: &BTreeSet<Element>) -> Result<Concept> {
    MmscEngine::new(i).mmsc_adaptive(xs)
}

pub fn lower_approximation(c: &Concept, i: &Interpretation) -> Result<Concept> {
    MmscEngine::new(i).lower_approximation(c)
}

/// The fixed-depth MMSC built literally: unravel every member of `X` to
/// depth `d`, take the product tree and read off its concept.
pub fn mmsc_literal(i: &Interpretation, xs: &BTreeSet<Element>, d: usize, cap: usize) -> Result<Concept> {
    if xs.is_empty() {
        return Ok(Concept::bottom());
    }
    let g = graph_of_interpretation(i);
    let trees = xs
        .iter()
        .map(|&x| unravel_capped(&g, x, d, cap))
        .collect::<Result<Vec<_>>>()?;
    Ok(concept_of_tree(&product_trees_capped(&trees, cap)?))
}
