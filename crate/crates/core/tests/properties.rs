use proptest::prelude::*;
use ruin_core::retention::select_retention;
use ruin_core::{
    compute_ruin_table, solve_adjustment, upper_bound, ClaimModel, EngineConfig, InterestChain, ReinsuranceTerms,
    RetentionOutcome,
};

fn chain() -> InterestChain {
    InterestChain::new(vec![0.03, 0.05], vec![vec![0.4, 0.6], vec![0.3, 0.7]], vec![0.5, 0.5]).unwrap()
}

fn coarse(horizon: usize, capitals: Vec<f64>) -> EngineConfig {
    EngineConfig { grid_step: 0.02, nodes_per_panel: 8, ..EngineConfig::new(horizon, capitals) }
}

fn model(pareto: bool) -> ClaimModel {
    if pareto {
        ClaimModel::pareto(1.25, 1.0).unwrap()
    } else {
        ClaimModel::exponential(1.0).unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tables_are_probabilities_monotone_in_horizon_and_capital(
        pareto in any::<bool>(),
        b in 0.2f64..=1.0,
        p0 in 0.05f64..0.95,
        p1 in 0.05f64..0.95,
        i0 in 0.0f64..0.1,
        i1 in 0.0f64..0.1,
    ) {
        let chain = InterestChain::new(vec![i0, i1], vec![vec![p0, 1.0 - p0], vec![p1, 1.0 - p1]], vec![0.5, 0.5]).unwrap();
        let terms = ReinsuranceTerms::new(0.2, 0.25, b).unwrap();
        let capitals: Vec<f64> = (0..=6).map(|k| k as f64 * 0.75).collect();
        let table = compute_ruin_table(&model(pareto), &terms, &chain, &coarse(4, capitals)).unwrap();
        prop_assert!(table.check_invariants(1e-12).is_ok(), "{:?}", table.check_invariants(1e-12));
    }

    #[test]
    fn ruin_increases_with_retention_above_unit_capital(
        pareto in any::<bool>(),
        u in 1.0f64..5.0,
        b in 0.25f64..0.95,
    ) {
        let capitals = vec![u];
        let lo = ReinsuranceTerms::new(0.2, 0.25, b).unwrap();
        let hi = lo.with_retention(b + 0.05).unwrap();
        let a = compute_ruin_table(&model(pareto), &lo, &chain(), &coarse(5, capitals.clone())).unwrap();
        let z = compute_ruin_table(&model(pareto), &hi, &chain(), &coarse(5, capitals)).unwrap();
        for s in 0..2 {
            prop_assert!(a.psi(5, s, u).unwrap() <= z.psi(5, s, u).unwrap() + 1e-12);
        }
    }

    #[test]
    fn lundberg_bound_dominates_engine(b in 0.25f64..=1.0, u in 0.0f64..6.0) {
        let m = model(false);
        let terms = ReinsuranceTerms::new(0.2, 0.25, b).unwrap();
        let solved = solve_adjustment(&m, &terms).unwrap();
        let table = compute_ruin_table(&m, &terms, &chain(), &coarse(10, vec![u])).unwrap();
        for s in 0..2 {
            let bound = upper_bound(u, s, &solved, &chain()).unwrap().value;
            for n in 1..=10 {
                prop_assert!(table.psi(n, s, u).unwrap() <= bound);
            }
        }
    }
}

#[test]
fn selected_retention_grows_with_capital() {
    let grid = ruin_core::retention::default_retention_grid();
    let capitals: Vec<f64> = (0..=5).map(f64::from).collect();
    for pareto in [false, true] {
        let tables: Vec<_> = grid
            .iter()
            .map(|&b| {
                let terms = ReinsuranceTerms::new(0.2, 0.25, b).unwrap();
                compute_ruin_table(&model(pareto), &terms, &chain(), &coarse(10, capitals.clone())).unwrap()
            })
            .collect();
        for n in [5, 10] {
            for s in 0..2 {
                let rank = |u: f64| {
                    let profile = grid.iter().zip(&tables).map(|(&b, t)| (b, t.psi(n, s, u).unwrap())).collect();
                    let cert = select_retention(profile, 0.05);
                    assert!(cert.verify());
                    match cert.outcome {
                        RetentionOutcome::Lack => 0.0,
                        RetentionOutcome::Retained(b) => b,
                        RetentionOutcome::Full => 1.0,
                    }
                };
                let ranks: Vec<f64> = capitals.iter().map(|&u| rank(u)).collect();
                assert!(ranks.windows(2).all(|w| w[0] <= w[1]), "pareto={pareto} n={n} s={s}: {ranks:?}");
            }
        }
    }
}

#[test]
fn asymptotic_ratio_approaches_one_and_orders_by_retention() {
    use ruin_core::{coefficients, convergence_ratio};
    let m = model(true);
    let coeffs = coefficients(&chain(), 1.25, 3).unwrap();
    let capitals = vec![2.0, 5.0, 10.0, 20.0];
    let mut at_twenty = Vec::new();
    for b in [0.2, 0.4, 0.6, 0.8, 1.0] {
        let terms = ReinsuranceTerms::new(0.2, 0.25, b).unwrap();
        let table = compute_ruin_table(&m, &terms, &chain(), &EngineConfig::new(3, capitals.clone())).unwrap();
        let points = convergence_ratio(&table, &coeffs, &m.retained(b).unwrap(), &capitals, 0).unwrap();
        let gaps: Vec<f64> = points.iter().map(|p| (p.ratio.unwrap() - 1.0).abs()).collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]), "b={b}: {gaps:?}");
        at_twenty.push(points[3].ratio.unwrap());
    }
    // Smaller retentions shrink the claims relative to capital, so their ratio is closer to one.
    assert!(at_twenty.windows(2).all(|w| w[0] > w[1]), "{at_twenty:?}");
}
