//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always shown; exits non-zero if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;

use ciforge::graph::{graph_of_interpretation, product_reachable, unravel, DEFAULT_NODE_CAP};
use ciforge::miner::{build_base_with, check_base_complete, check_base_sound, MiningMode};
use ciforge::mvf::{condensation, mvf, mvf_oracle, MaxWeight};
use ciforge::simulation::equivalent_empty;
use ciforge::testkit::{self, FbpSide};
use ciforge::{fixtures, parse_concept, Concept, ConceptInclusion, Element, Interpretation, Limits, MmscEngine, Reasoner};

/// Naive mining is run past its default attribute cap here: fig3 has 33
/// attributes and fig4ii 19.
const NAIVE_CAP: usize = 64;

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: false,
        detail: detail.into(),
    }
}

fn limits() -> Limits {
    Limits {
        naive_attribute_cap: NAIVE_CAP,
        ..Limits::default()
    }
}

fn set(i: &Interpretation, ids: &[&str]) -> BTreeSet<Element> {
    i.element_set(ids).unwrap()
}

fn random_interpretation(rng: &mut impl Rng) -> Interpretation {
    testkit::random_interpretation(rng, 4, &["A", "B"], &["r", "s"], 0.35)
}

fn random_subset(rng: &mut impl Rng, i: &Interpretation) -> BTreeSet<Element> {
    loop {
        let xs: BTreeSet<Element> = i.elements().filter(|_| rng.gen_bool(0.5)).collect();
        if !xs.is_empty() {
            return xs;
        }
    }
}

fn c1_fig3_mvf() -> Outcome {
    let g = graph_of_interpretation(&fixtures::fig3());
    let (x1, x2) = (g.find_vertex("x1").unwrap(), g.find_vertex("x2").unwrap());
    let (a, b) = (mvf(&g, x1), mvf(&g, x2));
    let detail = format!("mvf(x1) = {a}, mvf(x2) = {b}");
    if a == 3 && b == 3 {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn c2_product_mvf() -> Outcome {
    let g = graph_of_interpretation(&fixtures::fig3());
    let v = |n: &str| g.find_vertex(n).unwrap();
    let at = |xs: &[usize]| {
        let p = product_reachable(&g, xs, DEFAULT_NODE_CAP).unwrap();
        mvf(&p.graph, p.root)
    };
    let a = at(&[v("x1"), v("x2")]);
    let b = at(&[v("x1"), v("x7")]);
    let detail = format!("mvf at (x1,x2) = {a} (expected 2), at (x1,x7) = {b} (expected 1)");
    if a == 2 && b == 1 {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn c3_fig5_boundary() -> Outcome {
    let i = fixtures::fig5();
    let engine = MmscEngine::new(&i);
    let hubs = set(&i, &["x1", "x2", "x3"]);
    let x4 = i.element("x4").unwrap();
    let at28 = engine.extension(&engine.mmsc_at_depth(&hubs, 28).unwrap()).contains(&x4);
    let at29 = engine.extension(&engine.mmsc_at_depth(&hubs, 29).unwrap()).contains(&x4);
    let detail = format!("x4 in extension at depth 28: {at28}, at depth 29: {at29}");
    if at28 && !at29 {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn c4_adaptable_depth() -> Outcome {
    let i = fixtures::fig5();
    let engine = MmscEngine::new(&i);
    let r = engine.adaptable_depth(&set(&i, &["x1"])).unwrap();
    let detail = format!("{r}");
    if r.chosen_depth == 10 {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn c5_mmsc_concepts() -> Outcome {
    let i = fixtures::fig3();
    let engine = MmscEngine::new(&i);
    let xs = set(&i, &["x1", "x2"]);
    let d1 = engine.mmsc_at_depth(&xs, 1).unwrap();
    let d2 = engine.mmsc_at_depth(&xs, 2).unwrap();
    let e1 = parse_concept("City and (some government.Party) and (some partof.Region)").unwrap();
    let e2 = parse_concept("City and (some government.Party) and (some partof.(Region and some capital.Top))").unwrap();
    let (ok1, ok2) = (equivalent_empty(&d1, &e1), equivalent_empty(&d2, &e2));
    let detail = format!("depth 1: {d1} [{ok1}]; depth 2: {d2} [{ok2}]");
    if ok1 && ok2 {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn c6_fbp() -> Outcome {
    let rhs = testkit::fbp_witness_check(FbpSide::Rhs, 20);
    let lhs = testkit::fbp_witness_check(FbpSide::Lhs, 20);
    let i = fixtures::fig4i();
    let mut entailed = Vec::new();
    for mode in [MiningMode::Intents, MiningMode::Naive] {
        let (t, _) = build_base_with(&i, mode, limits()).unwrap();
        let mut r = Reasoner::new(&t);
        let all = (1..=20).all(|n| {
            r.entails(&ConceptInclusion::new(
                Concept::atom("A"),
                Concept::exists_n("r", n, Concept::top()),
            ))
        });
        entailed.push(all);
    }
    let detail = format!("valid in fig4i: {rhs}, valid in fig4ii: {lhs}, entailed by B(fig4i) (intents, naive): {entailed:?}");
    if rhs && lhs && entailed.iter().all(|&b| b) {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn c7_soundness() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    let mut run = |name: String, i: &Interpretation| {
        for mode in [MiningMode::Intents, MiningMode::Naive] {
            match build_base_with(i, mode, limits()) {
                Ok((t, _)) => {
                    checked += 1;
                    if !check_base_sound(i, &t) {
                        bad.push(format!("{name}/{mode}"));
                    }
                }
                // naive mining of fig5 (154 attributes) is out of reach
                Err(ciforge::Error::ResourceCap { .. }) if mode == MiningMode::Naive => {}
                Err(e) => bad.push(format!("{name}/{mode}: {e}")),
            }
        }
    };
    for name in fixtures::FIXTURE_NAMES {
        run(name.to_string(), &fixtures::builtin_fixture(name).unwrap());
    }
    let mut rng = testkit::seeded_rng(7);
    for k in 0..50 {
        run(format!("random #{k}"), &random_interpretation(&mut rng));
    }
    let detail = format!("{checked} bases checked, unsound: {bad:?}");
    if bad.is_empty() {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn c8_completeness() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for name in ["fig3", "fig4i", "fig4ii", "fig7"] {
        let i = fixtures::builtin_fixture(name).unwrap();
        for mode in [MiningMode::Intents, MiningMode::Naive] {
            let (t, _) = build_base_with(&i, mode, limits()).unwrap();
            let r = check_base_complete(&i, &t, 2, 9).unwrap();
            ok &= r.is_complete();
            parts.push(format!("{name}/{mode}: {} concepts, {} missing", r.concepts, r.failure_count));
        }
    }
    let detail = parts.join("; ");
    if ok {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn c9_oracle() -> Outcome {
    let mut rng = testkit::seeded_rng(9);
    let mut mismatches = 0;
    let mut over_budget = 0;
    for _ in 0..200 {
        let g = testkit::random_graph(&mut rng, 8, &["A"], &["r", "s"], 0.2);
        for v in g.vertices() {
            if mvf(&g, v) != mvf_oracle(&g, v).unwrap() {
                mismatches += 1;
            }
        }
        let cond = condensation(&g);
        let mut mw = MaxWeight::new(&cond);
        for c in 0..cond.len() {
            mw.eval(c);
        }
        if mw.evaluations > cond.len() {
            over_budget += 1;
        }
    }
    let detail = format!("200 graphs: {mismatches} mismatches, {over_budget} memo counters over the component count");
    if mismatches == 0 && over_budget == 0 {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn c10_stabilization() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for name in ["fig3", "fig7"] {
        let i = fixtures::builtin_fixture(name).unwrap();
        let engine = MmscEngine::new(&i);
        for xs in testkit::nonempty_subsets(&i) {
            checked += 1;
            if !testkit::stabilization_check(&engine, &xs).unwrap() {
                bad.push(format!("{name} {xs:?}"));
            }
        }
    }
    let mut rng = testkit::seeded_rng(10);
    for k in 0..100 {
        let i = random_interpretation(&mut rng);
        let xs = random_subset(&mut rng, &i);
        checked += 1;
        if !testkit::stabilization_check(&MmscEngine::new(&i), &xs).unwrap() {
            bad.push(format!("random #{k} {xs:?}"));
        }
    }
    let detail = format!("{checked} sets checked, failing: {bad:?}");
    if bad.is_empty() {
        pass(detail)
    } else {
        fail(detail)
    }
}

/// Runs each lemma check on one interpretation and records failures.
fn lemma_round(name: &str, i: &Interpretation, rng: &mut impl Rng, bad: &mut Vec<String>) -> usize {
    let engine = MmscEngine::new(i);
    let sig = i.active_signature();
    let concepts = testkit::enumerate_concepts(&sig, 2, 5);
    let roles: Vec<_> = sig.role_names.iter().cloned().collect();
    let g = graph_of_interpretation(i);
    let mut count = 0;
    let mut record = |what: &str, ok: bool| {
        count += 1;
        if !ok {
            bad.push(format!("{name}: {what}"));
        }
    };
    for _ in 0..3 {
        let c = concepts.choose(rng).unwrap();
        if let Some(r) = roles.choose(rng) {
            record(&format!("monotonicity {c} via {r}"), testkit::monotonicity_check(&engine, c, r).unwrap());
        }
        record(&format!("appSub {c}"), testkit::approximation_check(&engine, c).unwrap());
        record(&format!("r6p {c}"), testkit::extension_fixpoint_check(&engine, c).unwrap());
        let xs = random_subset(rng, i);
        let k = rng.gen_range(0..=3);
        record(&format!("r5 {xs:?} at {k}"), testkit::fixed_depth_closure_check(&engine, &xs, k).unwrap());
        let v = rng.gen_range(0..g.len());
        record(&format!("funcSim at {v}"), testkit::functional_extraction_check(&g, v, 3).unwrap());
        let trees: Vec<_> = (0..2).map(|_| unravel(&g, rng.gen_range(0..g.len()), 2).unwrap()).collect();
        record("product projection", testkit::product_projection_check(&trees).unwrap());
    }
    count
}

fn c11_lemmas() -> Outcome {
    let mut bad = Vec::new();
    let mut checks = 0;
    let mut rng = testkit::seeded_rng(11);
    for name in ["fig3", "fig4i", "fig4ii", "fig7"] {
        let i = fixtures::builtin_fixture(name).unwrap();
        checks += lemma_round(name, &i, &mut rng, &mut bad);
        let g = graph_of_interpretation(&i);
        for v in g.vertices() {
            checks += 1;
            if !testkit::claim_dsim_check(&g, v, &g, v) {
                bad.push(format!("{name}: dsim at {v}"));
            }
        }
    }
    for k in 0..100 {
        let i = random_interpretation(&mut rng);
        checks += lemma_round(&format!("random #{k}"), &i, &mut rng, &mut bad);
        let g1 = testkit::random_graph(&mut rng, 6, &["A", "B"], &["r", "s"], 0.3);
        let g2 = testkit::random_graph(&mut rng, 6, &["A", "B"], &["r", "s"], 0.3);
        let (v1, v2) = (rng.gen_range(0..g1.len()), rng.gen_range(0..g2.len()));
        checks += 1;
        if !testkit::claim_dsim_check(&g1, v1, &g2, v2) {
            bad.push(format!("random #{k}: dsim"));
        }
    }
    let detail = format!("{checks} checks, failing: {bad:?}");
    if bad.is_empty() {
        pass(detail)
    } else {
        fail(detail)
    }
}

/// Number, title, time limit and check.
type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    println!("seed: {}", testkit::base_seed());
    let criteria: [Criterion; 11] = [
        (1, "Fig. 3 MVF golden values", Duration::from_millis(1), c1_fig3_mvf),
        (2, "product MVF golden values", Duration::from_millis(1), c2_product_mvf),
        (3, "Fig. 5 fixpoint boundary", Duration::from_secs(1), c3_fig5_boundary),
        (4, "adaptable depth golden value", Duration::from_millis(10), c4_adaptable_depth),
        (5, "MMSC golden concepts", Duration::from_millis(10), c5_mmsc_concepts),
        (6, "FBP witnesses", Duration::from_secs(5), c6_fbp),
        (7, "base soundness", Duration::from_secs(60), c7_soundness),
        (8, "desk-scale base completeness", Duration::from_secs(300), c8_completeness),
        (9, "MVF oracle equivalence", Duration::from_secs(30), c9_oracle),
        (10, "MMSC stabilization", Duration::from_secs(120), c10_stabilization),
        (11, "lemma suite", Duration::from_secs(120), c11_lemmas),
    ];
    let mut failed = 0;
    for (n, title, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let in_time = took <= limit;
        let ok = outcome.ok && in_time;
        if !ok {
            failed += 1;
        }
        let timing = if in_time { String::new() } else { " OVER TIME LIMIT".to_string() };
        println!(
            "criterion {n:>2} {}: {title}: {} [{took:.2?} of {limit:?}{timing}]",
            if ok { "PASS" } else { "FAIL" },
            outcome.detail
        );
    }
    println!("{} of 11 criteria passed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
