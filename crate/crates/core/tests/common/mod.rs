#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

use ciforge::concept::canonicalize;
use ciforge::testkit::base_seed;
use ciforge::{Concept, DescriptionGraph, Interpretation, Name, RawConcept};

pub const ATOMS: [&str; 3] = ["A", "B", "C"];
pub const ROLES: [&str; 2] = ["r", "s"];

/// Fixed-seed config; `CIFORGE_SEED` changes the seed.
pub fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(base_seed()),
        failure_persistence: None,
        ..Config::default()
    }
}

pub fn raw_concept(depth: u32) -> impl Strategy<Value = RawConcept> {
    let leaf = prop_oneof![
        3 => Just(RawConcept::Top),
        1 => Just(RawConcept::Bottom),
        6 => prop::sample::select(&ATOMS[..]).prop_map(|a| RawConcept::Atom(a.to_string())),
    ];
    leaf.prop_recursive(depth, 24, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 1..4).prop_map(RawConcept::And),
            (prop::sample::select(&ROLES[..]), inner).prop_map(|(r, c)| RawConcept::Exists(r.to_string(), Box::new(c))),
        ]
    })
}

pub fn concept(depth: u32) -> impl Strategy<Value = Concept> {
    raw_concept(depth).prop_map(|r| canonicalize(&r))
}

/// Interpretations over [`ATOMS`] and [`ROLES`] with `1..=max_n` elements.
pub fn interpretation(max_n: usize) -> impl Strategy<Value = Interpretation> {
    (1..=max_n).prop_flat_map(|n| {
        let full = 1u64 << n;
        (
            prop::collection::vec(0..full, ATOMS.len()),
            prop::collection::vec(prop::collection::vec(0..full, n), ROLES.len()),
        )
            .prop_map(move |(atoms, roles)| build(n, &atoms, &roles))
    })
}

fn build(n: usize, atoms: &[u64], roles: &[Vec<u64>]) -> Interpretation {
    let domain: Vec<String> = (0..n).map(|k| format!("e{k}")).collect();
    let concepts: Vec<(String, Vec<String>)> = ATOMS
        .iter()
        .zip(atoms)
        .map(|(a, &m)| (a.to_string(), (0..n).filter(|b| m & (1 << b) != 0).map(|b| domain[b].clone()).collect()))
        .collect();
    let role_ext: Vec<(String, Vec<(String, String)>)> = ROLES
        .iter()
        .zip(roles)
        .map(|(r, succ)| {
            let mut pairs = Vec::new();
            for (s, &m) in succ.iter().enumerate() {
                for t in (0..n).filter(|b| m & (1 << b) != 0) {
                    pairs.push((domain[s].clone(), domain[t].clone()));
                }
            }
            (r.to_string(), pairs)
        })
        .collect();
    Interpretation::new(domain, concepts, role_ext).unwrap()
}

/// Description graphs with `1..=max_v` vertices, labels from [`ATOMS`],
/// edges over [`ROLES`] with density between 0 and 0.5.
pub fn graph(max_v: usize) -> impl Strategy<Value = DescriptionGraph> {
    (1..=max_v, 0u32..=50).prop_flat_map(|(n, density)| {
        (
            prop::collection::vec(0u8..8, n),
            prop::collection::vec(0u32..100, n * n * ROLES.len()),
        )
            .prop_map(move |(labels, coins)| {
                let mut g = DescriptionGraph::new();
                for (v, l) in labels.iter().enumerate() {
                    let ls = ATOMS
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| l & (1 << k) != 0)
                        .map(|(_, a)| Name::from(*a))
                        .collect();
                    g.add_vertex(format!("v{v}"), ls);
                }
                let mut k = 0;
                for s in 0..n {
                    for t in 0..n {
                        for r in ROLES {
                            if coins[k] < density {
                                g.add_edge(s, Name::from(r), t);
                            }
                            k += 1;
                        }
                    }
                }
                g
            })
    })
}

/// Concepts over atoms `A`, `B` and the single role `r`.
pub fn small_concept(depth: u32) -> impl Strategy<Value = Concept> {
    let leaf = prop_oneof![
        2 => Just(RawConcept::Top),
        1 => Just(RawConcept::Bottom),
        4 => prop::sample::select(&ATOMS[..2]).prop_map(|a| RawConcept::Atom(a.to_string())),
    ];
    leaf.prop_recursive(depth, 8, 2, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..3).prop_map(RawConcept::And),
            inner.prop_map(|c| RawConcept::Exists("r".into(), Box::new(c))),
        ]
    })
    .prop_map(|r| canonicalize(&r))
}

pub fn small_signature() -> ciforge::Signature {
    ciforge::Signature::new(["A", "B"], ["r"])
}

/// A non-empty subset of the domain of `i`, picked by `seed`.
pub fn subset(i: &Interpretation, seed: u64) -> std::collections::BTreeSet<usize> {
    let n = i.len();
    let mask = 1 + seed % ((1u64 << n) - 1);
    (0..n).filter(|b| mask & (1 << b) != 0).collect()
}
