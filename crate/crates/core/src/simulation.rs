//! Greatest simulations between description graphs, and the membership,
//! extension and empty-TBox subsumption tests built on them.

use std::collections::{BTreeSet, HashMap, VecDeque};

use fixedbitset::FixedBitSet;

use crate::concept::{Concept, ConceptKind};
use crate::graph::{graph_of_concept, graph_of_interpretation, DescriptionGraph, Vertex};
use crate::interpretation::{Element, Interpretation};

/// A relation between the vertices of two graphs, stored row-wise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationRelation {
    rows: Vec<FixedBitSet>,
}

impl SimulationRelation {
    pub fn empty(n1: usize, n2: usize) -> Self {
        SimulationRelation {
            rows: vec![FixedBitSet::with_capacity(n2); n1],
        }
    }

    pub fn contains(&self, v1: Vertex, v2: Vertex) -> bool {
        self.rows[v1].contains(v2)
    }

    pub fn insert(&mut self, v1: Vertex, v2: Vertex) {
        self.rows[v1].insert(v2);
    }

    /// Vertices of the second graph related to `v1`.
    pub fn image(&self, v1: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.rows[v1].ones()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(v1, row)| row.ones().map(move |v2| (v1, v2)))
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn step_matched(g1: &DescriptionGraph, g2: &DescriptionGraph, rel: &SimulationRelation, v1: Vertex, v2: Vertex) -> bool {
    g1.successors(v1).iter().all(|(r, w1)| {
        g2.successors(v2)
            .iter()
            .any(|(s, w2)| s == r && rel.contains(*w1, *w2))
    })
}

/// The largest relation satisfying the label and forth conditions, found by
/// starting from all label-compatible pairs and deleting violating pairs
/// until nothing changes.
pub fn greatest_simulation(g1: &DescriptionGraph, g2: &DescriptionGraph) -> SimulationRelation {
    let mut rel = SimulationRelation::empty(g1.len(), g2.len());
    for v1 in g1.vertices() {
        for v2 in g2.vertices() {
            if g1.label(v1).is_subset(g2.label(v2)) {
                rel.insert(v1, v2);
            }
        }
    }
    let mut changed = true;
    while changed {
        changed = false;
        // Concept graphs number parents before children, so a reverse sweep
        // usually settles in one pass.
        for v1 in g1.vertices().rev() {
            let candidates: Vec<Vertex> = rel.image(v1).collect();
            for v2 in candidates {
                if !step_matched(g1, g2, &rel, v1, v2) {
                    rel.rows[v1].set(v2, false);
                    changed = true;
                }
            }
        }
    }
    rel
}

/// `layers[k]` relates `v1` to `v2` iff the depth-`k` unravelling of `g1`
/// at `v1` is simulated by `(g2, v2)`, for `k = 0..=depth`.
pub fn bounded_simulation(g1: &DescriptionGraph, g2: &DescriptionGraph, depth: usize) -> Vec<SimulationRelation> {
    let mut base = SimulationRelation::empty(g1.len(), g2.len());
    for v1 in g1.vertices() {
        for v2 in g2.vertices() {
            if g1.label(v1).is_subset(g2.label(v2)) {
                base.insert(v1, v2);
            }
        }
    }
    let mut layers = vec![base.clone()];
    for _ in 0..depth {
        let prev = layers.last().expect("at least one layer");
        let mut next = SimulationRelation::empty(g1.len(), g2.len());
        for (v1, v2) in base.pairs() {
            if step_matched(g1, g2, prev, v1, v2) {
                next.insert(v1, v2);
            }
        }
        layers.push(next);
    }
    layers
}

/// Is `(g2, v2)` a simulation target of the depth-`depth` unravelling of
/// `g1` at `v1`?
pub fn bounded_simulates(g1: &DescriptionGraph, v1: Vertex, g2: &DescriptionGraph, v2: Vertex, depth: usize) -> bool {
    bounded_simulation(g1, g2, depth)[depth].contains(v1, v2)
}

/// Is there a simulation from `(g1, v1)` to `(g2, v2)`?
pub fn simulates(g1: &DescriptionGraph, v1: Vertex, g2: &DescriptionGraph, v2: Vertex) -> bool {
    greatest_simulation(g1, g2).contains(v1, v2)
}

/// Checks the three simulation conditions for an explicit relation.
pub fn is_simulation(
    g1: &DescriptionGraph,
    v1: Vertex,
    g2: &DescriptionGraph,
    v2: Vertex,
    rel: &SimulationRelation,
) -> bool {
    rel.contains(v1, v2)
        && rel.pairs().all(|(w1, w2)| {
            g1.label(w1).is_subset(g2.label(w2)) && step_matched(g1, g2, rel, w1, w2)
        })
}

/// Extracts a sub-simulation that relates every vertex of `g1` to at most one
/// vertex of `g2`. `g1` must be tree-shaped below `v1`. Returns `None` when
/// `(v1, v2)` is not in `sim`.
pub fn functional_subsimulation(
    g1: &DescriptionGraph,
    v1: Vertex,
    g2: &DescriptionGraph,
    v2: Vertex,
    sim: &SimulationRelation,
) -> Option<SimulationRelation> {
    if !sim.contains(v1, v2) {
        return None;
    }
    let mut out = SimulationRelation::empty(g1.len(), g2.len());
    let mut assigned: Vec<Option<Vertex>> = vec![None; g1.len()];
    assigned[v1] = Some(v2);
    out.insert(v1, v2);
    let mut queue = VecDeque::from([v1]);
    while let Some(w1) = queue.pop_front() {
        let w2 = assigned[w1].expect("queued vertices are assigned");
        for (r, u1) in g1.successors(w1) {
            if assigned[*u1].is_some() {
                continue;
            }
            let u2 = g2
                .successors(w2)
                .iter()
                .find(|(s, u2)| s == r && sim.contains(*u1, *u2))
                .map(|e| e.1)?;
            assigned[*u1] = Some(u2);
            out.insert(*u1, u2);
            queue.push_back(*u1);
        }
    }
    Some(out)
}

/// Membership of a domain element in a concept's extension.
pub fn member(x: Element, c: &Concept, i: &Interpretation) -> bool {
    extension(c, i).contains(&x)
}

/// `C^I`, computed with one greatest simulation from the concept's graph
/// into `G(I)`.
pub fn extension(c: &Concept, i: &Interpretation) -> BTreeSet<Element> {
    extension_in(&graph_of_interpretation(i), c)
}

/// Like [`extension`], for a precomputed `G(I)`.
pub fn extension_in(gi: &DescriptionGraph, c: &Concept) -> BTreeSet<Element> {
    if c.is_bottom() {
        return BTreeSet::new();
    }
    if c.is_top() {
        return gi.vertices().collect();
    }
    let (gc, root) = graph_of_concept(c).expect("Bottom handled above");
    let sim = greatest_simulation(&gc, gi);
    sim.image(root).collect()
}

/// `∅ ⊨ c ⊑ d`: a simulation from the concept DAG of `d` into that of `c`
/// relates the roots. Only pairs reachable from the roots are explored.
pub fn subsumed_empty(c: &Concept, d: &Concept) -> bool {
    fn go(c: &Concept, d: &Concept, memo: &mut HashMap<(Concept, Concept), bool>) -> bool {
        if c.is_bottom() || d.is_top() || c.ptr_eq(d) {
            return true;
        }
        if d.is_bottom() {
            return false;
        }
        let key = (c.clone(), d.clone());
        if let Some(&known) = memo.get(&key) {
            return known;
        }
        let holds = d.conjuncts().iter().all(|dp| match dp.kind() {
            ConceptKind::Atom(a) => c
                .conjuncts()
                .iter()
                .any(|cp| matches!(cp.kind(), ConceptKind::Atom(b) if a == b)),
            ConceptKind::Exists(r, f) => c.conjuncts().iter().any(|cp| match cp.kind() {
                ConceptKind::Exists(s, e) => s == r && go(e, f, memo),
                _ => false,
            }),
            _ => true,
        });
        memo.insert(key, holds);
        holds
    }
    go(c, d, &mut HashMap::new())
}

/// [`subsumed_empty`] through the greatest simulation between the full
/// concept graphs.
pub fn subsumed_empty_by_graphs(c: &Concept, d: &Concept) -> bool {
    if c.is_bottom() || d.is_top() {
        return true;
    }
    if d.is_bottom() {
        return false;
    }
    let (gd, rd) = graph_of_concept(d).expect("not Bottom");
    let (gc, rc) = graph_of_concept(c).expect("not Bottom");
    simulates(&gd, rd, &gc, rc)
}

/// Mutual empty-TBox subsumption.
pub fn equivalent_empty(c: &Concept, d: &Concept) -> bool {
    subsumed_empty(c, d) && subsumed_empty(d, c)
}

/// Removes existential conjuncts that are implied by a sibling, at every
/// level. The result is equivalent to the input.
pub fn reduce(c: &Concept) -> Concept {
    let mut memo: HashMap<Concept, Concept> = HashMap::new();
    for sub in c.subconcepts() {
        let reduced = match sub.kind() {
            ConceptKind::Exists(r, f) => Concept::exists(r.clone(), memo[f].clone()),
            ConceptKind::And(cs) => {
                let parts: Vec<Concept> = cs.iter().map(|x| memo[x].clone()).collect();
                Concept::and(drop_implied(parts))
            }
            _ => sub.clone(),
        };
        memo.insert(sub, reduced);
    }
    memo.remove(c).unwrap_or_else(|| c.clone())
}

fn drop_implied(parts: Vec<Concept>) -> Vec<Concept> {
    let mut keep = vec![true; parts.len()];
    for i in 0..parts.len() {
        for j in 0..parts.len() {
            if i == j || !keep[j] || !keep[i] {
                continue;
            }
            // Drop i when j is at least as specific; among equivalents keep
            // the earlier one.
            if subsumed_empty(&parts[j], &parts[i]) && (j < i || !subsumed_empty(&parts[i], &parts[j])) {
                keep[i] = false;
            }
        }
    }
    parts
        .into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::{tree_of_concept, unravel};
    use crate::syntax::parse_concept;

    fn p(s: &str) -> Concept {
        parse_concept(s).unwrap()
    }

    #[test]
    fn identity_is_a_simulation() {
        let g = graph_of_interpretation(&fixtures::fig3());
        for v in g.vertices() {
            assert!(simulates(&g, v, &g, v));
        }
    }

    #[test]
    fn city_tree_into_fig3() {
        let i = fixtures::fig3();
        let g = graph_of_interpretation(&i);
        let t = tree_of_concept(&p("City")).unwrap();
        assert!(simulates(&t.graph, t.root, &g, i.element("x1").unwrap()));
        assert!(!simulates(&t.graph, t.root, &g, i.element("x5").unwrap()));
        let t = tree_of_concept(&p("some capital.City")).unwrap();
        assert!(simulates(&t.graph, t.root, &g, i.element("x7").unwrap()));
        assert!(!simulates(&t.graph, t.root, &g, i.element("x5").unwrap()));
    }

    #[test]
    fn membership() {
        let i = fixtures::fig3();
        assert!(member(i.element("x1").unwrap(), &p("City"), &i));
        for x in i.elements() {
            assert!(!member(x, &Concept::bottom(), &i));
        }
    }

    #[test]
    fn fig5_membership() {
        let i = fixtures::fig5();
        let x4 = i.element("x4").unwrap();
        let a = Concept::atom("A");
        assert!(!member(x4, &Concept::exists_n("r", 29, a.clone()), &i));
        assert!(!member(x4, &Concept::exists_n("r", 28, a), &i));
        for d in [1, 5, 29, 60] {
            assert!(member(x4, &Concept::exists_n("r", d, Concept::top()), &i));
        }
    }

    #[test]
    fn extensions() {
        let i = fixtures::fig3();
        let set = |xs: &[&str]| i.element_set(xs).unwrap();
        assert_eq!(extension(&p("Region"), &i), set(&["x5", "x7"]));
        assert_eq!(extension(&Concept::top(), &i), i.elements().collect());
        assert_eq!(extension(&p("some partof.Region"), &i), set(&["x1", "x2"]));
    }

    #[test]
    fn empty_tbox_subsumption() {
        assert!(subsumed_empty(&p("A and B"), &p("A")));
        assert!(subsumed_empty(&p("some r.(A and B)"), &p("some r.A")));
        assert!(!subsumed_empty(&p("some r.A"), &p("some r.(A and B)")));
        assert!(subsumed_empty(&Concept::bottom(), &p("A")));
        assert!(!subsumed_empty(&p("A"), &Concept::bottom()));
        assert!(subsumed_empty(&p("A"), &Concept::top()));
        assert!(!subsumed_empty(&Concept::top(), &p("A")));
        let sig = crate::concept::Signature::new(["A", "B"], ["r"]);
        let cs = crate::testkit::enumerate_concepts(&sig, 2, 4);
        for c in cs.iter().step_by(3) {
            for d in cs.iter().step_by(2) {
                assert_eq!(subsumed_empty(c, d), subsumed_empty_by_graphs(c, d), "{c} ⊑ {d}");
            }
        }
    }

    #[test]
    fn functional_extraction_on_unravelling() {
        let i = fixtures::fig3();
        let g = graph_of_interpretation(&i);
        let x2 = i.element("x2").unwrap();
        let t = unravel(&g, x2, 6).unwrap();
        let sim = greatest_simulation(&t.graph, &g);
        let f = functional_subsimulation(&t.graph, t.root, &g, x2, &sim).unwrap();
        assert!(is_simulation(&t.graph, t.root, &g, x2, &f));
        for v in t.graph.vertices() {
            assert!(f.image(v).count() <= 1);
        }
    }

    #[test]
    fn bounded_layers_match_literal_unravellings() {
        let i = fixtures::fig5();
        let g = graph_of_interpretation(&i);
        let layers = bounded_simulation(&g, &g, 12);
        for v1 in g.vertices() {
            for k in [0, 1, 4, 12] {
                let t = unravel(&g, v1, k).unwrap();
                let sim = greatest_simulation(&t.graph, &g);
                for v2 in g.vertices() {
                    assert_eq!(layers[k].contains(v1, v2), sim.contains(t.root, v2));
                }
            }
        }
    }

    #[test]
    fn reduction_drops_implied_siblings() {
        let c = p("(some r.A) and (some r.(A and B)) and (some s.Top)");
        let r = reduce(&c);
        assert_eq!(r, p("(some r.(A and B)) and (some s.Top)"));
        assert!(equivalent_empty(&c, &r));
    }
}
