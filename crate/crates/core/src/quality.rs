//! Factor → criterion → metric hierarchy and factor scoring.
//!
//! A factor score is the weighted mean of the EQ values of the factor's
//! metrics. Weights are non-negative and sum to one per factor, so every score
//! stays in `[0, 1]`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::distance::{EqValues, ThresholdProfile};
use crate::metrics::{MetricId, MetricVector};
use crate::ratio::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FactorId {
    Functionality,
    Effectiveness,
    Understandability,
    Reusability,
    Maintainability,
}

impl FactorId {
    pub const ALL: [FactorId; 5] = [
        FactorId::Functionality,
        FactorId::Effectiveness,
        FactorId::Understandability,
        FactorId::Reusability,
        FactorId::Maintainability,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FactorId::Functionality => "functionality",
            FactorId::Effectiveness => "effectiveness",
            FactorId::Understandability => "understandability",
            FactorId::Reusability => "reusability",
            FactorId::Maintainability => "maintainability",
        }
    }
}

impl fmt::Display for FactorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown factor `{0}`")]
pub struct UnknownFactor(pub String);

impl FromStr for FactorId {
    type Err = UnknownFactor;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FactorId::ALL
            .into_iter()
            .find(|f| f.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UnknownFactor(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Criterion {
    pub name: &'static str,
    pub metric: MetricId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QualityModel {
    factors: Vec<(FactorId, Vec<Criterion>)>,
}

impl Default for QualityModel {
    fn default() -> Self {
        use MetricId::*;
        let c = |name, metric| Criterion { name, metric };
        Self {
            factors: vec![
                (
                    FactorId::Functionality,
                    vec![
                        c("Design Size", Noc),
                        c("Hierarchies", Noh),
                        c("Cohesion", Cam),
                        c("Polymorphism", Nop),
                        c("Messaging", Cis),
                    ],
                ),
                (
                    FactorId::Effectiveness,
                    vec![
                        c("Abstraction", Noa),
                        c("Abstraction", Noh),
                        c("Abstraction", Mdit),
                        c("Encapsulation", Dar),
                        c("Composition", Nar),
                        c("Composition", Nah),
                        c("Inheritance", Fa),
                        c("Polymorphism", Nop),
                    ],
                ),
                (
                    FactorId::Understandability,
                    vec![
                        c("Encapsulation", Dar),
                        c("Cohesion", Cam),
                        c("Inheritance", Fa),
                        c("Polymorphism", Nop),
                    ],
                ),
                (
                    FactorId::Reusability,
                    vec![
                        c("Design Size", Noc),
                        c("Coupling", Dcc),
                        c("Cohesion", Cam),
                        c("Messaging", Cis),
                    ],
                ),
                (
                    FactorId::Maintainability,
                    vec![
                        c("Design Size", Noc),
                        c("Hierarchies", Noh),
                        c("Abstraction", Noa),
                        c("Encapsulation", Dar),
                        c("Coupling", Dcc),
                        c("Coupling", Nom),
                        c("Composition", Nar),
                        c("Composition", Nah),
                        c("Polymorphism", Nop),
                        c("Documentation", Eod),
                    ],
                ),
            ],
        }
    }
}

impl QualityModel {
    pub fn factors(&self) -> impl Iterator<Item = FactorId> + '_ {
        self.factors.iter().map(|(f, _)| *f)
    }

    pub fn criteria(&self, factor: FactorId) -> &[Criterion] {
        self.factors
            .iter()
            .find(|(f, _)| *f == factor)
            .map_or(&[], |(_, c)| c.as_slice())
    }

    pub fn metrics_of(&self, factor: FactorId) -> Vec<MetricId> {
        self.criteria(factor).iter().map(|c| c.metric).collect()
    }

    /// Every (factor, metric) pair in hierarchy order.
    pub fn pairs(&self) -> Vec<(FactorId, MetricId)> {
        self.factors
            .iter()
            .flat_map(|(f, cs)| cs.iter().map(move |c| (*f, c.metric)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QualityError {
    #[error("no EQ value for metric {0}")]
    MissingMetric(MetricId),
    #[error("no weight for {metric} under {factor}")]
    MissingWeight { factor: FactorId, metric: MetricId },
    #[error("no agreement percentage for {metric} under {factor}")]
    MissingPair { factor: FactorId, metric: MetricId },
    #[error("weights for {factor}: {reason}")]
    InvalidWeights { factor: FactorId, reason: String },
    #[error("format error at `{pointer}`: {message}")]
    Format { pointer: String, message: String },
    #[error(transparent)]
    UnknownFactor(#[from] UnknownFactor),
    #[error(transparent)]
    UnknownMetric(#[from] crate::metrics::UnknownMetric),
}

/// Tolerance on the per-factor weight sum of loaded profiles.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightProfile {
    pub id: String,
    weights: BTreeMap<FactorId, Vec<(MetricId, Rational)>>,
}

impl WeightProfile {
    /// `1/n` for each of a factor's `n` metrics.
    pub fn equal(model: &QualityModel) -> Self {
        let weights = model
            .factors()
            .map(|f| {
                let metrics = model.metrics_of(f);
                let w = ratio::frac(1, metrics.len() as i64);
                (f, metrics.into_iter().map(|m| (m, w.clone())).collect())
            })
            .collect();
        Self {
            id: "equal".into(),
            weights,
        }
    }

    /// Weights from the published agreement percentages.
    pub fn survey(model: &QualityModel) -> Self {
        let mut profile = weights_from_survey(model, &crate::survey::published_agreement())
            .expect("bundled agreement table covers the default hierarchy");
        profile.id = "survey".into();
        profile
    }

    pub fn weights(&self, factor: FactorId) -> &[(MetricId, Rational)] {
        self.weights.get(&factor).map_or(&[], Vec::as_slice)
    }

    pub fn weight(&self, factor: FactorId, metric: MetricId) -> Option<&Rational> {
        self.weights(factor)
            .iter()
            .find(|(m, _)| *m == metric)
            .map(|(_, w)| w)
    }

    /// Parses a JSON map of factor to metric to weight. Each factor must list
    /// exactly its metrics from `model`, weights must be non-negative, and each
    /// factor's weights must sum to one within [`WEIGHT_SUM_TOLERANCE`]. Loaded
    /// weights are rescaled so the sums are exactly one.
    pub fn from_json(
        text: &str,
        model: &QualityModel,
        id: impl Into<String>,
    ) -> Result<Self, QualityError> {
        let deserializer = &mut serde_json::Deserializer::from_str(text);
        let raw: BTreeMap<String, BTreeMap<String, f64>> =
            serde_path_to_error::deserialize(deserializer).map_err(|e| QualityError::Format {
                pointer: e.path().iter().map(|s| format!("/{s}")).collect(),
                message: e.inner().to_string(),
            })?;
        let mut parsed: BTreeMap<FactorId, BTreeMap<MetricId, Rational>> = BTreeMap::new();
        for (factor, entries) in raw {
            let factor: FactorId = factor.parse()?;
            let slot = parsed.entry(factor).or_default();
            for (metric, w) in entries {
                let metric: MetricId = metric.parse()?;
                let w = ratio::from_f64(w).ok_or_else(|| QualityError::InvalidWeights {
                    factor,
                    reason: format!("{metric} weight is not finite"),
                })?;
                slot.insert(metric, w);
            }
        }

        let mut weights = BTreeMap::new();
        for factor in model.factors() {
            let given = parsed.remove(&factor).unwrap_or_default();
            let invalid = |reason: String| QualityError::InvalidWeights { factor, reason };
            let metrics = model.metrics_of(factor);
            if let Some(extra) = given.keys().find(|m| !metrics.contains(m)) {
                return Err(invalid(format!("{extra} is not part of this factor")));
            }
            let mut list = Vec::with_capacity(metrics.len());
            for metric in metrics {
                let w = given
                    .get(&metric)
                    .cloned()
                    .ok_or(QualityError::MissingWeight { factor, metric })?;
                if w.is_negative() {
                    return Err(invalid(format!("{metric} weight is negative")));
                }
                list.push((metric, w));
            }
            let sum: Rational = list.iter().map(|(_, w)| w).sum();
            if (ratio::to_f64(&sum) - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
                return Err(invalid(format!(
                    "weights sum to {}, expected 1",
                    ratio::to_f64(&sum)
                )));
            }
            for (_, w) in &mut list {
                *w = &*w / &sum;
            }
            weights.insert(factor, list);
        }
        Ok(Self {
            id: id.into(),
            weights,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contribution {
    pub metric: MetricId,
    pub eq: Rational,
    pub weight: Rational,
    pub term: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorScore {
    pub factor: FactorId,
    pub score: Rational,
    /// In hierarchy order.
    pub contributions: Vec<Contribution>,
}

impl FactorScore {
    /// Contributions ordered by weighted term, largest first; ties keep
    /// hierarchy order.
    pub fn ranked(&self) -> Vec<&Contribution> {
        let mut out: Vec<&Contribution> = self.contributions.iter().collect();
        out.sort_by(|a, b| b.term.cmp(&a.term));
        out
    }
}

pub fn factor_score(
    model: &QualityModel,
    weights: &WeightProfile,
    eqs: &EqValues,
    factor: FactorId,
) -> Result<FactorScore, QualityError> {
    let mut contributions = Vec::new();
    for metric in model.metrics_of(factor) {
        let eq = eqs
            .get(metric)
            .cloned()
            .ok_or(QualityError::MissingMetric(metric))?;
        let weight = weights
            .weight(factor, metric)
            .cloned()
            .ok_or(QualityError::MissingWeight { factor, metric })?;
        let term = &eq * &weight;
        contributions.push(Contribution {
            metric,
            eq,
            weight,
            term,
        });
    }
    let score = contributions.iter().map(|c| &c.term).sum();
    Ok(FactorScore {
        factor,
        score,
        contributions,
    })
}

/// Quantizes every design-level metric, then scores each factor.
pub fn all_factor_scores(
    model: &QualityModel,
    weights: &WeightProfile,
    thresholds: &ThresholdProfile,
    metrics: &MetricVector,
) -> Result<Vec<FactorScore>, QualityError> {
    let eqs = thresholds.quantize_all(metrics);
    model
        .factors()
        .map(|f| factor_score(model, weights, &eqs, f))
        .collect()
}

/// Unweighted mean of the factor scores.
pub fn overall_score(scores: &[FactorScore]) -> Rational {
    ratio::mean(&scores.iter().map(|s| s.score.clone()).collect::<Vec<_>>())
}

/// Within each factor, weight(metric) = pct / sum of the factor's pcts.
pub fn weights_from_survey(
    model: &QualityModel,
    stats: &BTreeMap<(MetricId, FactorId), Rational>,
) -> Result<WeightProfile, QualityError> {
    let mut weights = BTreeMap::new();
    for factor in model.factors() {
        let mut list = Vec::new();
        for metric in model.metrics_of(factor) {
            let pct = stats
                .get(&(metric, factor))
                .cloned()
                .ok_or(QualityError::MissingPair { factor, metric })?;
            list.push((metric, pct));
        }
        let total: Rational = list.iter().map(|(_, p)| p).sum();
        if total.is_zero() {
            return Err(QualityError::InvalidWeights {
                factor,
                reason: "no agreement for any metric".into(),
            });
        }
        for (_, p) in &mut list {
            *p = &*p / &total;
        }
        weights.insert(factor, list);
    }
    Ok(WeightProfile {
        id: "survey-derived".into(),
        weights,
    })
}

/// Builds EQ values that are `value` for every metric.
pub fn uniform_eqs(value: Rational) -> EqValues {
    MetricId::ALL.into_iter().map(|m| (m, value.clone())).collect()
}
