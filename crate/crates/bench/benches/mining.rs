use std::time::Duration;

use criterion::{criterion_group, criterion_main, Criterion, SamplingMode};

use ciforge::fixtures::builtin_fixture;
use ciforge::{build_base, build_base_with, check_base_complete, Limits, MiningMode, MmscEngine};

fn mmsc(c: &mut Criterion) {
    let i = builtin_fixture("fig5").unwrap();
    let hubs = i.element_set(&["x1", "x2", "x3"]).unwrap();
    c.bench_function("mmsc_at_depth/fig5/29", |b| {
        b.iter(|| MmscEngine::new(&i).mmsc_at_depth(&hubs, 29).unwrap())
    });
    c.bench_function("mmsc_adaptive/fig5/x1", |b| {
        let x1 = i.element_set(&["x1"]).unwrap();
        b.iter(|| MmscEngine::new(&i).mmsc_adaptive(&x1).unwrap())
    });
}

fn mining(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_base");
    group.sample_size(10).measurement_time(Duration::from_secs(20));
    let naive = Limits {
        naive_attribute_cap: 64,
        ..Limits::default()
    };
    for name in ["fig3", "fig4ii", "fig7"] {
        let i = builtin_fixture(name).unwrap();
        group.bench_function(format!("intents/{name}"), |b| b.iter(|| build_base(&i, MiningMode::Intents).unwrap()));
        group.bench_function(format!("naive/{name}"), |b| {
            b.iter(|| build_base_with(&i, MiningMode::Naive, naive).unwrap())
        });
    }
    group.finish();

    // Every one of the 4095 element sets needs its own product graph.
    let mut slow = c.benchmark_group("build_base_fig5");
    slow.sample_size(10)
        .sampling_mode(SamplingMode::Flat)
        .measurement_time(Duration::from_secs(120));
    let fig5 = builtin_fixture("fig5").unwrap();
    slow.bench_function("intents", |b| b.iter(|| build_base(&fig5, MiningMode::Intents).unwrap()));
    slow.finish();
}

fn completeness(c: &mut Criterion) {
    let mut group = c.benchmark_group("check_base_complete");
    group.sample_size(10);
    for name in ["fig4ii", "fig7"] {
        let i = builtin_fixture(name).unwrap();
        let (t, _) = build_base(&i, MiningMode::Intents).unwrap();
        group.bench_function(format!("{name}/d2c9"), |b| b.iter(|| check_base_complete(&i, &t, 2, 9).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, mmsc, mining, completeness);
criterion_main!(benches);
