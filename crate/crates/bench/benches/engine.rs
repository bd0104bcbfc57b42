use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use ruin_core::simulate::{self, SimulationSpec};
use ruin_core::{compute_ruin_table, solve_adjustment, ClaimModel, EngineConfig, InterestChain, ReinsuranceTerms};

fn chain() -> InterestChain {
    InterestChain::new(vec![0.03, 0.05], vec![vec![0.4, 0.6], vec![0.3, 0.7]], vec![0.5, 0.5]).unwrap()
}

fn ruin_tables(c: &mut Criterion) {
    let chain = chain();
    let mut group = c.benchmark_group("ruin_table");
    group.sample_size(10);
    for (name, model) in [("exponential", ClaimModel::exponential(1.0).unwrap()), ("pareto", ClaimModel::pareto(1.25, 1.0).unwrap())] {
        for b in [0.2, 1.0] {
            let terms = ReinsuranceTerms::new(0.2, 0.25, b).unwrap();
            let config = EngineConfig::new(10, (0..=5).map(f64::from).collect());
            group.bench_with_input(BenchmarkId::new(name, b), &config, |bench, config| {
                bench.iter(|| compute_ruin_table(&model, &terms, &chain, black_box(config)).unwrap())
            });
        }
    }
    group.finish();
}

fn grid_step_scaling(c: &mut Criterion) {
    let chain = chain();
    let model = ClaimModel::pareto(1.25, 1.0).unwrap();
    let terms = ReinsuranceTerms::new(0.2, 0.25, 0.6).unwrap();
    let mut group = c.benchmark_group("grid_step");
    group.sample_size(10);
    for h in [0.02, 0.01, 0.005] {
        let config = EngineConfig { grid_step: h, ..EngineConfig::new(5, vec![5.0]) };
        group.bench_with_input(BenchmarkId::from_parameter(h), &config, |bench, config| {
            bench.iter(|| compute_ruin_table(&model, &terms, &chain, black_box(config)).unwrap())
        });
    }
    group.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let chain = chain();
    let terms = ReinsuranceTerms::new(0.2, 0.25, 1.0).unwrap();
    let mut group = c.benchmark_group("simulate");
    group.sample_size(10);
    for (name, model) in [("exponential", ClaimModel::exponential(1.0).unwrap()), ("pareto", ClaimModel::pareto(1.25, 1.0).unwrap())] {
        let spec = SimulationSpec { paths: 100_000, horizon: 10, capital: 2.0, state: 0, seed: 1 };
        group.bench_function(name, |bench| bench.iter(|| simulate::run(black_box(&spec), &model, &terms, &chain).unwrap()));
    }
    group.finish();
}

fn adjustment(c: &mut Criterion) {
    let model = ClaimModel::exponential(1.0).unwrap();
    let terms = ReinsuranceTerms::new(0.2, 0.25, 0.7).unwrap();
    c.bench_function("solve_adjustment", |bench| bench.iter(|| solve_adjustment(&model, black_box(&terms)).unwrap()));
}

criterion_group!(benches, ruin_tables, grid_step_scaling, monte_carlo, adjustment);
criterion_main!(benches);
