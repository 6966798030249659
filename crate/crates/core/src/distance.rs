//! Distance-based measure construction and EQ quantization.
//!
//! A measurement abstraction is a finite set. The elementary transformations
//! add or remove one element, so the shortest transformation sequence between
//! two abstractions has length `|a Δ b|`. A measure is the distance between an
//! object's abstraction and its reference abstraction, the abstraction the
//! object would have with the lowest possible amount of the property.
//!
//! EQ scales map raw metric values onto a discrete `[0, 1]` scale with either
//! six levels (steps of 0.2) or three levels (steps of 0.5):
//!
//! ```text
//! r  = clamp((value - low) / (high - low), 0, 1)
//! EQ = floor(r * (levels - 1) + 1/2) / (levels - 1)
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Deserialize;
use thiserror::Error;

use crate::metrics::{MetricId, MetricVector};
use crate::model::ClassModel;
use crate::ratio::{self, frac, int, Rational};

/// Length of the shortest add/remove sequence turning `a` into `b`.
pub fn delta<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> usize {
    a.symmetric_difference(b).count()
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Transformation<T> {
    Add(T),
    Remove(T),
}

/// A finite universe of elements; abstractions are subsets of it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceSpace<T: Ord> {
    universe: BTreeSet<T>,
}

impl<T: Ord + Clone> DistanceSpace<T> {
    pub fn new(universe: impl IntoIterator<Item = T>) -> Self {
        Self {
            universe: universe.into_iter().collect(),
        }
    }

    pub fn universe(&self) -> &BTreeSet<T> {
        &self.universe
    }

    pub fn contains(&self, abstraction: &BTreeSet<T>) -> bool {
        abstraction.is_subset(&self.universe)
    }

    /// Every abstraction one elementary transformation away from `a`.
    pub fn neighbours(&self, a: &BTreeSet<T>) -> Vec<(Transformation<T>, BTreeSet<T>)> {
        self.universe
            .iter()
            .map(|x| {
                let mut next = a.clone();
                if next.remove(x) {
                    (Transformation::Remove(x.clone()), next)
                } else {
                    next.insert(x.clone());
                    (Transformation::Add(x.clone()), next)
                }
            })
            .collect()
    }

    /// A shortest transformation sequence from `a` to `b`: removals of
    /// `a \ b`, then additions of `b \ a`.
    pub fn shortest_sequence(&self, a: &BTreeSet<T>, b: &BTreeSet<T>) -> Vec<Transformation<T>> {
        a.difference(b)
            .cloned()
            .map(Transformation::Remove)
            .chain(b.difference(a).cloned().map(Transformation::Add))
            .collect()
    }

    pub fn apply(a: &BTreeSet<T>, steps: &[Transformation<T>]) -> BTreeSet<T> {
        let mut out = a.clone();
        for step in steps {
            match step {
                Transformation::Add(x) => out.insert(x.clone()),
                Transformation::Remove(x) => out.remove(x),
            };
        }
        out
    }
}

type Abstraction<P, T> = Box<dyn Fn(&P) -> BTreeSet<T> + Send + Sync>;

/// A measure for one property: the abstraction function, the reference
/// abstraction, and `measure(p) = delta(abs(p), ref(p))`.
pub struct MeasureDefinition<P, T> {
    pub property: String,
    abstraction: Abstraction<P, T>,
    reference: Abstraction<P, T>,
}

impl<P, T: Ord> MeasureDefinition<P, T> {
    pub fn new(
        property: impl Into<String>,
        abstraction: impl Fn(&P) -> BTreeSet<T> + Send + Sync + 'static,
        reference: impl Fn(&P) -> BTreeSet<T> + Send + Sync + 'static,
    ) -> Self {
        Self {
            property: property.into(),
            abstraction: Box::new(abstraction),
            reference: Box::new(reference),
        }
    }

    /// A measure whose reference abstraction is empty, so it counts elements.
    pub fn counting(
        property: impl Into<String>,
        abstraction: impl Fn(&P) -> BTreeSet<T> + Send + Sync + 'static,
    ) -> Self {
        Self::new(property, abstraction, |_| BTreeSet::new())
    }

    pub fn abstraction(&self, p: &P) -> BTreeSet<T> {
        (self.abstraction)(p)
    }

    pub fn reference(&self, p: &P) -> BTreeSet<T> {
        (self.reference)(p)
    }

    pub fn measure(&self, p: &P) -> usize {
        delta(&self.abstraction(p), &self.reference(p))
    }
}

impl<P, T> fmt::Debug for MeasureDefinition<P, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MeasureDefinition")
            .field("property", &self.property)
            .finish_non_exhaustive()
    }
}

pub fn measure<P, T: Ord>(def: &MeasureDefinition<P, T>, p: &P) -> usize {
    def.measure(p)
}

/// Design size as the distance from the class-free design.
pub fn class_count_measure() -> MeasureDefinition<ClassModel, String> {
    MeasureDefinition::counting("design size", |m: &ClassModel| {
        m.classes().iter().map(|c| c.name.clone()).collect()
    })
}

/// Polymorphism as the distance from a design with no overridden methods.
pub fn polymorphism_measure() -> MeasureDefinition<ClassModel, String> {
    MeasureDefinition::counting("polymorphism", crate::metrics::polymorphic_methods)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Levels {
    Three,
    Six,
}

impl Levels {
    pub fn count(self) -> u32 {
        match self {
            Levels::Three => 3,
            Levels::Six => 6,
        }
    }

    fn from_count(n: u32) -> Option<Self> {
        match n {
            3 => Some(Levels::Three),
            6 => Some(Levels::Six),
            _ => None,
        }
    }

    /// Distance between adjacent EQ values.
    pub fn step(self) -> Rational {
        frac(1, self.count() as i64 - 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThresholdError {
    #[error("format error at `{pointer}`: {message}")]
    Format { pointer: String, message: String },
    #[error(transparent)]
    UnknownMetric(#[from] crate::metrics::UnknownMetric),
    #[error("{metric}: {reason}")]
    InvalidScale { metric: MetricId, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqScale {
    pub metric: MetricId,
    /// Value at and below which EQ is 0.
    pub low: Rational,
    /// Value at and above which EQ is 1.
    pub high: Rational,
    pub levels: Levels,
}

impl EqScale {
    pub fn new(
        metric: MetricId,
        low: Rational,
        high: Rational,
        levels: Levels,
    ) -> Result<Self, ThresholdError> {
        if low >= high {
            return Err(ThresholdError::InvalidScale {
                metric,
                reason: format!(
                    "low anchor {} must be below high anchor {}",
                    ratio::exact_string(&low),
                    ratio::exact_string(&high)
                ),
            });
        }
        Ok(Self {
            metric,
            low,
            high,
            levels,
        })
    }

    pub fn quantize(&self, value: &Rational) -> Rational {
        quantize_eq(self, value)
    }
}

pub fn quantize_eq(scale: &EqScale, value: &Rational) -> Rational {
    let span = &scale.high - &scale.low;
    let r = ((value - &scale.low) / span).clamp(Rational::zero(), Rational::one());
    let steps = BigInt::from(scale.levels.count() - 1);
    let half = frac(1, 2);
    let level = (r * Rational::from_integer(steps.clone()) + half).floor();
    level / Rational::from_integer(steps)
}

/// EQ anchors for all fourteen metrics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdProfile {
    pub id: String,
    scales: Vec<EqScale>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScaleEntry {
    low: f64,
    high: f64,
    levels: u32,
}

impl Default for ThresholdProfile {
    fn default() -> Self {
        use Levels::*;
        use MetricId::*;
        let rows: [(MetricId, Rational, Rational, Levels); 14] = [
            (Noc, int(0), int(8), Six),
            (Noh, int(0), int(5), Six),
            (Noa, int(0), int(6), Six),
            (Mdit, int(1), int(6), Six),
            (Nar, int(0), int(7), Six),
            (Nah, int(0), int(5), Six),
            // CAM is a [0, 1] ratio; its anchors mirror DAR.
            (Cam, frac(5, 100), frac(80, 100), Six),
            (Nop, int(0), int(5), Six),
            (Dar, frac(5, 100), frac(80, 100), Six),
            (Fa, frac(5, 100), frac(80, 100), Three),
            (Dcc, int(1), int(5), Three),
            (Nom, int(0), int(6), Six),
            (Cis, int(0), int(6), Three),
            (Eod, frac(5, 100), int(1), Six),
        ];
        let scales = rows
            .into_iter()
            .map(|(metric, low, high, levels)| EqScale {
                metric,
                low,
                high,
                levels,
            })
            .collect();
        Self {
            id: "default".into(),
            scales,
        }
    }
}

impl ThresholdProfile {
    pub fn get(&self, metric: MetricId) -> &EqScale {
        &self.scales[metric.index()]
    }

    pub fn scales(&self) -> &[EqScale] {
        &self.scales
    }

    pub fn set(&mut self, scale: EqScale) {
        let i = scale.metric.index();
        self.scales[i] = scale;
    }

    /// Default profile overridden by a JSON map of metric id to
    /// `{low, high, levels}`. Metrics absent from the file keep their defaults.
    pub fn from_json(text: &str, id: impl Into<String>) -> Result<Self, ThresholdError> {
        let deserializer = &mut serde_json::Deserializer::from_str(text);
        let entries: BTreeMap<String, ScaleEntry> = serde_path_to_error::deserialize(deserializer)
            .map_err(|e| ThresholdError::Format {
                pointer: e
                    .path()
                    .iter()
                    .map(|s| format!("/{s}"))
                    .collect::<String>(),
                message: e.inner().to_string(),
            })?;
        let mut profile = Self {
            id: id.into(),
            ..Self::default()
        };
        for (key, entry) in entries {
            let metric: MetricId = key.parse()?;
            let invalid = |reason: String| ThresholdError::InvalidScale { metric, reason };
            let low = ratio::from_f64(entry.low).ok_or_else(|| invalid("low is not finite".into()))?;
            let high =
                ratio::from_f64(entry.high).ok_or_else(|| invalid("high is not finite".into()))?;
            let levels = Levels::from_count(entry.levels)
                .ok_or_else(|| invalid(format!("levels must be 3 or 6, got {}", entry.levels)))?;
            profile.set(EqScale::new(metric, low, high, levels)?);
        }
        Ok(profile)
    }

    pub fn quantize_all(&self, metrics: &MetricVector) -> EqValues {
        EqValues(
            metrics
                .iter()
                .map(|(id, value)| (id, self.get(id).quantize(value)))
                .collect(),
        )
    }
}

/// EQ value per metric.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EqValues(pub BTreeMap<MetricId, Rational>);

impl EqValues {
    pub fn get(&self, metric: MetricId) -> Option<&Rational> {
        self.0.get(&metric)
    }
}

impl FromIterator<(MetricId, Rational)> for EqValues {
    fn from_iter<I: IntoIterator<Item = (MetricId, Rational)>>(iter: I) -> Self {
        EqValues(iter.into_iter().collect())
    }
}
