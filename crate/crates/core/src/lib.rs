//! Object-oriented design quality analysis.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`ingest`] turns ODL sources or interchange files into a [`ClassModel`].
//! 2. [`metrics`] computes the fourteen design metrics into a [`MetricVector`].
//! 3. [`distance`] normalizes each metric onto its EQ scale.
//! 4. [`quality`] combines EQ values into five quality-factor scores.
//!
//! [`survey`] ingests questionnaire responses and produces agreement
//! statistics, which can also drive the factor weights.

pub mod cli;
pub mod distance;
pub mod ingest;
pub mod metrics;
pub mod model;
pub mod par;
pub mod quality;
pub mod ratio;
pub mod survey;
pub mod synth;

pub use distance::{delta, quantize_eq, EqScale, ThresholdProfile};
pub use ingest::{load_model_file, merge_models, parse_source, write_model_file, IngestError};
pub use metrics::{compute_all, MetricId, MetricVector};
pub use model::{
    AttributeDef, ClassDef, ClassKind, ClassModel, MethodDef, ModelError, ValidationReport,
    Visibility,
};
pub use par::Execution;
pub use quality::{FactorId, FactorScore, QualityModel, WeightProfile};
pub use ratio::Rational;
pub use survey::{AgreementStat, SurveyDataset};
