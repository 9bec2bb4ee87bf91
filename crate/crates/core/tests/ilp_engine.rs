mod common;

use std::time::Duration;

use common::small_instances;
use hamdec_core::formulations::{
    build_dfj_base, build_mtz_directed, build_mtz_undirected, sec_for_subtour,
};
use hamdec_core::ilp::{
    export_lp, parse_lp, solve, IlpModel, LinearConstraint, Sense, SolveStatus, VarId,
};
use hamdec_core::Side;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BUDGET: Duration = Duration::from_secs(30);

fn exhaustive_feasible(model: &IlpModel) -> bool {
    let m = model.vars().len();
    assert!(model.num_binaries() == m && m <= 24);
    (0u32..(1 << m)).any(|mask| {
        let values: Vec<i64> = (0..m).map(|k| i64::from(mask >> k & 1)).collect();
        model.verify(&values).is_ok()
    })
}

#[test]
fn dfj_models_with_random_cuts_match_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for (spec, inst) in small_instances(60, &[5, 6, 7, 8], 120) {
        let g = &inst.graph;
        let (mut model, mapping) = build_dfj_base(g);
        for _ in 0..rng.random_range(0..5) {
            let size = rng.random_range(2..g.n());
            let mut s: Vec<usize> = (1..=g.n()).collect();
            for k in (1..s.len()).rev() {
                s.swap(k, rng.random_range(0..=k));
            }
            s.truncate(size);
            s.sort_unstable();
            let side = if rng.random_bool(0.5) {
                Side::Z
            } else {
                Side::W
            };
            model
                .add_constraint(sec_for_subtour(g, &mapping, &s, side).unwrap())
                .unwrap();
        }
        let out = solve(&model, BUDGET).unwrap();
        assert_ne!(out.status, SolveStatus::TimedOut);
        assert_eq!(
            out.status == SolveStatus::Feasible,
            exhaustive_feasible(&model),
            "{spec:?}"
        );
    }
}

fn random_binary_model(seed: u64) -> IlpModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = IlpModel::new(format!("random_{seed}"));
    let nv = rng.random_range(1..=14);
    let vars: Vec<VarId> = (0..nv).map(|k| m.add_binary(format!("v{k}"))).collect();
    for c in 0..rng.random_range(0..10) {
        let mut terms = Vec::new();
        for &v in &vars {
            let a: i64 = rng.random_range(-3..=3);
            if a != 0 && rng.random_bool(0.4) {
                terms.push((a, v));
            }
        }
        let sense = [Sense::Le, Sense::Ge, Sense::Eq][rng.random_range(0..3)];
        m.add_constraint(LinearConstraint::new(
            format!("c{c}"),
            terms,
            sense,
            rng.random_range(-3..=4),
        ))
        .unwrap();
    }
    m
}

proptest! {
    #[test]
    fn engine_is_complete_on_small_binary_models(seed in any::<u64>()) {
        let model = random_binary_model(seed);
        let out = solve(&model, BUDGET).unwrap();
        prop_assert_eq!(out.status == SolveStatus::Feasible, exhaustive_feasible(&model));
        if let Some(point) = out.assignment {
            prop_assert!(model.verify(&point).is_ok());
        }
    }

    #[test]
    fn random_models_round_trip_through_lp(seed in any::<u64>()) {
        let model = random_binary_model(seed);
        prop_assert_eq!(parse_lp(&export_lp(&model)).unwrap(), model);
    }
}

#[test]
fn formulation_models_round_trip_through_lp() {
    for (spec, inst) in small_instances(12, &[6, 9, 12], 7) {
        let g = &inst.graph;
        let (dfj, _) = build_dfj_base(g);
        let mtz = if spec.directed {
            build_mtz_directed(g).unwrap().0
        } else {
            build_mtz_undirected(g).unwrap().0
        };
        for model in [dfj, mtz] {
            let text = export_lp(&model);
            assert_eq!(parse_lp(&text).unwrap(), model, "{spec:?}");
            assert_eq!(export_lp(&model), text);
        }
    }
}
