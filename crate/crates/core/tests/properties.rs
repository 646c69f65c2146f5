use carnap_core::agents::uniform;
use carnap_core::carnap::{
    check_disjoint_causality, check_exchangeability, check_positive_relatedness, dirichlet_posterior_mean,
};
use carnap_core::nonadditive::{bel_pl, dempster_combine, MassFunction, WeightingFamily};
use carnap_core::tradeoff::{detect_tradeoff_inconsistency, probe_battery, tradeoff_pairs, ProbeGrid};
use carnap_core::{CarnapAgent, CarnapModel, Event, Evidence, OutcomeInterval, SeuAgent, UtilityCurve};
use proptest::prelude::*;

fn simplex(raw: &[f64]) -> Vec<f64> {
    let z: f64 = raw.iter().sum();
    raw.iter().map(|x| x / z).collect()
}

fn model_strategy() -> impl Strategy<Value = (Vec<f64>, f64)> {
    (3usize..7)
        .prop_flat_map(|s| (prop::collection::vec(0.05f64..1.0, s), 0.1f64..20.0))
        .prop_map(|(raw, lambda)| (simplex(&raw), lambda))
}

fn mass_strategy(frame: usize) -> impl Strategy<Value = MassFunction> {
    let subsets = (1u16 << frame) - 1;
    prop::collection::vec((1..=subsets, 0.01f64..1.0), 1..5).prop_map(move |raw| {
        let z: f64 = raw.iter().map(|(_, m)| m).sum();
        let entries: Vec<(u16, f64)> = raw.iter().map(|&(b, m)| (b, m / z)).collect();
        MassFunction::new(frame, &entries).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn update_matches_dirichlet_mean((prior, lambda) in model_strategy(), obs in prop::collection::vec(0usize..3, 0..30)) {
        let s = prior.len();
        let model = CarnapModel::new(prior.clone(), lambda, 50).unwrap();
        let e = Evidence::from_indices(s, obs).unwrap();
        let alpha: Vec<f64> = prior.iter().map(|p| lambda * p).collect();
        let want = dirichlet_posterior_mean(&alpha, e.counts()).unwrap();
        let got = model.update(&e).unwrap().posterior;
        for (a, b) in got.iter().zip(&want) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn update_is_associative((prior, lambda) in model_strategy(), a in prop::collection::vec(0usize..3, 0..10), b in prop::collection::vec(0usize..3, 0..10)) {
        let s = prior.len();
        let model = CarnapModel::new(prior, lambda, 40).unwrap();
        let e1 = Evidence::from_indices(s, a).unwrap();
        let e2 = Evidence::from_indices(s, b).unwrap();
        let staged = model.absorb(&e1).unwrap().update(&e2).unwrap().posterior;
        let joint = model.update(&e1.concat(&e2).unwrap()).unwrap().posterior;
        for (x, y) in staged.iter().zip(&joint) {
            prop_assert!((x - y).abs() <= 1e-14);
        }
    }

    #[test]
    fn carnap_agents_satisfy_the_axioms((prior, lambda) in model_strategy(), obs in prop::collection::vec(0usize..3, 0..5), stake in 1.0f64..100.0) {
        let s = prior.len();
        let iv = OutcomeInterval::new(0.0, 100.0).unwrap();
        let agent = CarnapAgent::new(CarnapModel::new(prior, lambda, 10).unwrap(), UtilityCurve::sqrt(), iv);
        let e = Evidence::from_indices(s, obs).unwrap();
        for d in 0..s {
            prop_assert!(check_positive_relatedness(&agent, &e, d, stake).unwrap().pass);
        }
        prop_assert!(check_exchangeability(&agent, &e, 0, 1, stake).unwrap().pass);
        prop_assert!(check_disjoint_causality(&agent, &e, (0, 1, 2), stake).unwrap().pass);
    }

    #[test]
    fn bel_never_exceeds_pl(m in mass_strategy(4), mask in 1u64..16) {
        let e = Event::from_mask(4, mask).unwrap();
        let (bel, pl) = bel_pl(&m, &e).unwrap();
        prop_assert!(bel <= pl + 1e-15);
        // duality under complement
        let (bel_c, _) = bel_pl(&m, &e.complement()).unwrap();
        prop_assert!((pl - (1.0 - bel_c)).abs() <= 1e-12);
    }

    #[test]
    fn dempster_is_commutative_and_associative(a in mass_strategy(3), b in mass_strategy(3), c in mass_strategy(3)) {
        let (Ok(ab), Ok(ba)) = (dempster_combine(&a, &b), dempster_combine(&b, &a)) else {
            return Ok(());
        };
        for mask in 0u16..8 {
            prop_assert!((ab.mass(mask) - ba.mass(mask)).abs() <= 1e-15);
        }
        let (Ok(left), Ok(bc)) = (dempster_combine(&ab, &c), dempster_combine(&b, &c)) else {
            return Ok(());
        };
        let right = dempster_combine(&a, &bc).unwrap();
        for mask in 0u16..8 {
            prop_assert!((left.mass(mask) - right.mass(mask)).abs() <= 1e-12);
        }
    }

    #[test]
    fn bayesian_masses_have_equal_bel_and_pl(raw in prop::collection::vec(0.01f64..1.0, 4), mask in 1u64..16) {
        let m = MassFunction::bayesian(&simplex(&raw)).unwrap();
        let (bel, pl) = bel_pl(&m, &Event::from_mask(4, mask).unwrap()).unwrap();
        prop_assert_eq!(bel, pl);
    }
}

#[test]
fn inverse_s_weights_are_subadditive_at_small_probabilities() {
    for gamma in [0.3, 0.45, 0.61, 0.8, 0.95] {
        let w = WeightingFamily::Tk { gamma };
        for i in 1..50 {
            for j in 1..=(50 - i) {
                let (p, q) = (i as f64 / 100.0, j as f64 / 100.0);
                assert!(w.eval(p) + w.eval(q) > w.eval(p + q), "gamma {gamma} at ({p}, {q})");
            }
        }
    }
    let lin = WeightingFamily::Linear;
    assert_eq!(lin.eval(0.125) + lin.eval(0.25), lin.eval(0.375));
}

#[test]
fn seu_batteries_are_consistent() {
    let iv = OutcomeInterval::new(0.0, 100.0).unwrap();
    for (probs, u) in [
        (vec![0.5, 0.5], UtilityCurve::sqrt()),
        (vec![0.2, 0.3, 0.5], UtilityCurve::linear()),
        (vec![0.6, 0.1, 0.3], UtilityCurve::power(0.3).unwrap()),
    ] {
        let agent = SeuAgent::new(probs, u, iv).unwrap();
        let grid = ProbeGrid { levels: 5, ..Default::default() };
        let records = probe_battery(&agent, &grid, &Evidence::empty(agent_size(&agent))).unwrap();
        assert!(!records.is_empty());
        let pairs = tradeoff_pairs(&records).unwrap();
        assert!(detect_tradeoff_inconsistency(&pairs, 1e-6).is_empty());
    }
}

fn agent_size(agent: &SeuAgent) -> usize {
    agent.probabilities().len()
}

#[test]
fn uniform_prior_sums_to_one() {
    for s in 2..10 {
        assert!((uniform(s).iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }
}
