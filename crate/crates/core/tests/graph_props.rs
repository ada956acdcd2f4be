mod common;

use proptest::prelude::*;

use ciforge::graph::{concept_of_tree, product_reachable, product_trees, trees_isomorphic, unravel};
use ciforge::simulation::equivalent_empty;
use ciforge::DescriptionGraph;

fn has_walk_of_length(g: &DescriptionGraph, v: usize, m: usize) -> bool {
    let mut frontier = vec![false; g.len()];
    frontier[v] = true;
    for _ in 0..m {
        let mut next = vec![false; g.len()];
        for x in g.vertices().filter(|&x| frontier[x]) {
            for (_, y) in g.successors(x) {
                next[*y] = true;
            }
        }
        frontier = next;
    }
    frontier.iter().any(|&b| b)
}

proptest! {
    #![proptest_config(common::config(128))]

    #[test]
    fn unravellings_truncate(g in common::graph(5), d in 0usize..5, seed in any::<usize>()) {
        let x = seed % g.len();
        let deep = unravel(&g, x, d).unwrap();
        prop_assert!(deep.is_valid());
        prop_assert!(deep.height() <= d);
        for k in 0..=d {
            let shallow = unravel(&g, x, k).unwrap();
            prop_assert!(trees_isomorphic(&shallow, &deep.truncate(k)), "k={} d={}", k, d);
        }
    }

    #[test]
    fn tree_products_are_symmetric(g in common::graph(4), a in any::<usize>(), b in any::<usize>(), d in 0usize..4) {
        let t1 = unravel(&g, a % g.len(), d).unwrap();
        let t2 = unravel(&g, b % g.len(), d).unwrap();
        let p12 = product_trees(&[t1.clone(), t2.clone()]).unwrap();
        let p21 = product_trees(&[t2, t1]).unwrap();
        prop_assert!(p12.is_valid() && p21.is_valid());
        prop_assert!(equivalent_empty(&concept_of_tree(&p12), &concept_of_tree(&p21)));
    }

    #[test]
    fn product_walks_project_to_components(g in common::graph(5), a in any::<usize>(), b in any::<usize>(), m in 0usize..8) {
        let start = [a % g.len(), b % g.len()];
        let p = product_reachable(&g, &start, 1 << 12).unwrap();
        prop_assert_eq!(p.tuple(p.root), &start[..]);
        if has_walk_of_length(&p.graph, p.root, m) {
            prop_assert!(start.iter().all(|&v| has_walk_of_length(&g, v, m)));
        }
    }
}
