mod common;

use std::collections::BTreeMap;

use common::rng;
use oodq::distance::EqValues;
use oodq::metrics::MetricId;
use oodq::quality::{factor_score, uniform_eqs, weights_from_survey, FactorId, QualityModel, WeightProfile};
use oodq::ratio::{frac, int};
use oodq::{Rational, ThresholdProfile};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn random_eqs(r: &mut ChaCha8Rng) -> EqValues {
    MetricId::ALL
        .into_iter()
        .map(|m| (m, frac(r.gen_range(0..=5), 5)))
        .collect()
}

fn random_weights(r: &mut ChaCha8Rng, model: &QualityModel) -> WeightProfile {
    let table: BTreeMap<(MetricId, FactorId), Rational> = model
        .pairs()
        .into_iter()
        .map(|(f, m)| ((m, f), int(r.gen_range(1..=100))))
        .collect();
    weights_from_survey(model, &table).unwrap()
}

#[test]
fn scores_bounded_and_monotone() {
    let model = QualityModel::default();
    let mut r = rng(21);
    for _ in 0..1000 {
        let weights = if r.gen_bool(0.5) {
            WeightProfile::equal(&model)
        } else {
            random_weights(&mut r, &model)
        };
        let eqs = random_eqs(&mut r);
        let metric = MetricId::ALL[r.gen_range(0..14)];
        let mut raised = eqs.clone();
        let current = raised.get(metric).unwrap().clone();
        if current < int(1) {
            raised.0.insert(metric, current + frac(1, 5));
        }
        for factor in FactorId::ALL {
            let a = factor_score(&model, &weights, &eqs, factor).unwrap().score;
            let b = factor_score(&model, &weights, &raised, factor).unwrap().score;
            assert!(a >= int(0) && a <= int(1));
            assert!(b >= a, "{factor} fell after raising {metric}");
        }
    }
}

#[test]
fn convexity_endpoints() {
    let model = QualityModel::default();
    let mut r = rng(22);
    for _ in 0..50 {
        let w = random_weights(&mut r, &model);
        for f in FactorId::ALL {
            assert_eq!(factor_score(&model, &w, &uniform_eqs(int(1)), f).unwrap().score, int(1));
            assert_eq!(factor_score(&model, &w, &uniform_eqs(int(0)), f).unwrap().score, int(0));
        }
    }
}

#[test]
fn unrelated_metric_never_moves_a_factor() {
    let model = QualityModel::default();
    let weights = WeightProfile::equal(&model);
    let mut r = rng(23);
    for _ in 0..200 {
        let eqs = random_eqs(&mut r);
        for f in FactorId::ALL {
            let members = model.metrics_of(f);
            for m in MetricId::ALL.into_iter().filter(|m| !members.contains(m)) {
                let mut changed = eqs.clone();
                changed.0.insert(m, int(1) - eqs.get(m).unwrap());
                assert_eq!(
                    factor_score(&model, &weights, &eqs, f).unwrap().score,
                    factor_score(&model, &weights, &changed, f).unwrap().score
                );
            }
        }
    }
}

#[test]
fn f2_functionality_chain() {
    let m = oodq::ingest::load_inputs(&[common::fixture("f2.odl")], oodq::Execution::Sequential)
        .unwrap()
        .0;
    let metrics = oodq::compute_all(&m);
    let thresholds = ThresholdProfile::default();
    let model = QualityModel::default();
    let scores =
        oodq::quality::all_factor_scores(&model, &WeightProfile::equal(&model), &thresholds, &metrics)
            .unwrap();
    assert_eq!(scores[0].factor, FactorId::Functionality);
    assert_eq!(scores[0].score, frac(1, 5));
}

#[test]
fn weights_sum_to_one() {
    let model = QualityModel::default();
    for w in [WeightProfile::equal(&model), WeightProfile::survey(&model)] {
        for f in FactorId::ALL {
            let sum: Rational = w.weights(f).iter().map(|(_, x)| x).sum();
            assert_eq!(sum, int(1), "{} {f}", w.id);
        }
    }
}
