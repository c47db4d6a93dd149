use approx::assert_relative_eq;
use pmcda::mapping::{map_to_slos, map_weight_vector, midpoint_slope, tangent_slope, MappingRequest};
use pmcda::models::{score, to_loss, Model, WeightSet};
use pmcda::{partial_value, CriterionSpec};
use proptest::prelude::*;

fn simplex(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05f64..1.0, n).prop_map(|raw| {
        let s: f64 = raw.iter().sum();
        let mut w: Vec<f64> = raw.iter().map(|x| x / s).collect();
        let rest: f64 = w[..w.len() - 1].iter().sum();
        *w.last_mut().unwrap() = 1.0 - rest;
        w
    })
}

fn utilities_and_weights() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (2usize..7).prop_flat_map(|n| (prop::collection::vec(0.0f64..=1.0, n), simplex(n)))
}

proptest! {
    #[test]
    fn product_never_exceeds_linear((u, w) in utilities_and_weights()) {
        let lin = score(&u, &WeightSet::linear(w.clone()).unwrap()).unwrap().value;
        let prod = score(&u, &WeightSet::product(w).unwrap()).unwrap().value;
        prop_assert!(prod <= lin + 1e-15);
    }

    #[test]
    fn scores_stay_in_range((u, w) in utilities_and_weights()) {
        for ws in [
            WeightSet::linear(w.clone()).unwrap(),
            WeightSet::product(w.clone()).unwrap(),
            WeightSet::multilinear(w.iter().map(|x| x * 0.8).collect(), 0.2).unwrap(),
        ] {
            let s = score(&u, &ws).unwrap().value;
            prop_assert!((-1e-15..=1.0 + 1e-12).contains(&s), "{} gave {s}", ws.model());
        }
        // each SLoS term u^-w is at least 1
        let s = score(&u, &WeightSet::slos(w.clone()).unwrap()).unwrap().value;
        prop_assert!(s >= u.len() as f64 - 1e-12);
    }

    #[test]
    fn utility_models_increase_in_each_coordinate(
        (u, w) in utilities_and_weights(), j in 0usize..6, bump in 0.0f64..0.5
    ) {
        let j = j % u.len();
        let mut v = u.clone();
        v[j] = (v[j] + bump).min(1.0);
        for m in [Model::Linear, Model::Product, Model::Slos] {
            let ws = WeightSet::relaxed(m, w.clone(), 0.0).unwrap();
            let (a, b) = (score(&u, &ws).unwrap(), score(&v, &ws).unwrap());
            prop_assert!(!a.beats(&b).unwrap(), "{m}: raising u[{j}] made things worse");
        }
    }

    #[test]
    fn loss_conversion_keeps_decisions((a, w) in utilities_and_weights(), seed in any::<u64>()) {
        let b: Vec<f64> = a.iter().enumerate().map(|(i, x)| (x * 7.3 + i as f64 + (seed % 97) as f64 * 0.01) % 1.0).collect();
        let ws = WeightSet::linear(w).unwrap();
        let (sa, sb) = (score(&a, &ws).unwrap(), score(&b, &ws).unwrap());
        let (la, lb) = (to_loss(sa).unwrap(), to_loss(sb).unwrap());
        prop_assert_eq!(sa.beats(&sb).unwrap(), la.beats(&lb).unwrap());
    }

    #[test]
    fn slos_mapping_preserves_midpoint_slope(w in 0.01f64..0.99) {
        let s = map_to_slos(w).unwrap();
        let ws = WeightSet::slos(vec![s, 1.0 - s]).unwrap();
        assert_relative_eq!(midpoint_slope(&ws).unwrap(), w / (1.0 - w), max_relative = 1e-9);
    }

    #[test]
    fn tangent_slope_at_midpoint_matches(w in 0.05f64..0.95) {
        for m in [Model::Linear, Model::Product, Model::Slos] {
            let ws = WeightSet::relaxed(m, vec![w, 1.0 - w], 0.0).unwrap();
            let a = tangent_slope(&ws, 0.5, 0.5).unwrap();
            let b = midpoint_slope(&ws).unwrap();
            prop_assert!((a - b).abs() <= 1e-9 * b.max(1.0));
        }
    }

    #[test]
    fn mapped_vectors_keep_their_length(w in simplex(4), c in 0.0f64..0.5) {
        for target in Model::ALL {
            let r = map_weight_vector(&MappingRequest { linear_weights: w.clone(), interaction_mass: c, target }).unwrap();
            prop_assert_eq!(r.weights.len(), 4);
            prop_assert!(r.weights.weights().iter().all(|x| *x >= 0.0));
        }
    }

    #[test]
    fn partial_values_are_clamped(xi in -1.0f64..2.0, lo in 0.0f64..0.4, hi in 0.6f64..1.0) {
        let b = CriterionSpec::benefit("b", hi, lo).unwrap();
        let r = CriterionSpec::risk("r", lo, hi).unwrap();
        for u in [partial_value(&b, xi), partial_value(&r, xi)] {
            prop_assert!((0.0..=1.0).contains(&u));
        }
        if (lo..=hi).contains(&xi) {
            assert_relative_eq!(partial_value(&b, xi) + partial_value(&r, xi), 1.0, epsilon = 1e-12);
        }
    }
}
