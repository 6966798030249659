//! Report structures and their text/JSON/CSV renderings.
//!
//! Every collection is emitted in a fixed order (metrics in id order, classes
//! by name, contributions by weighted term) so machine output is stable.

use std::fmt::Write as _;

use serde::Serialize;

use crate::distance::{EqValues, ThresholdProfile};
use crate::ingest::SourceFile;
use crate::metrics::MetricVector;
use crate::model::{ClassKind, ClassModel};
use crate::quality::{FactorScore, WeightProfile};
use crate::ratio::{exact_string, to_f64, Rational};
use crate::survey::{AgreementStat, FigureTable, SurveyDataset};

#[derive(Debug, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

pub const TOOL: Tool = Tool {
    name: "oodq",
    version: env!("CARGO_PKG_VERSION"),
};

#[derive(Debug, Serialize)]
pub struct InputRecord {
    pub path: String,
    pub sha256: String,
}

impl From<&SourceFile> for InputRecord {
    fn from(s: &SourceFile) -> Self {
        Self {
            path: s.path.display().to_string(),
            sha256: s.sha256.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub classes: usize,
    pub interfaces: usize,
    pub files: usize,
}

#[derive(Debug, Serialize)]
pub struct Number {
    pub value: f64,
    pub exact: String,
}

impl From<&Rational> for Number {
    fn from(r: &Rational) -> Self {
        Self {
            value: to_f64(r),
            exact: exact_string(r),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct MetricRecord {
    pub id: &'static str,
    pub name: &'static str,
    pub value: Number,
    pub eq: Number,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub struct ClassRecord {
    #[serde(rename = "class")]
    pub name: String,
    pub noa: usize,
    pub mdit: usize,
    pub nar: usize,
    pub nop: usize,
    pub cam: Number,
    pub dar: Number,
    pub fa: Number,
    pub dcc: usize,
    pub nom: usize,
    pub cis: usize,
}

#[derive(Debug, Serialize)]
pub struct ContributionRecord {
    pub metric: &'static str,
    pub eq: Number,
    pub weight: Number,
    pub term: Number,
}

#[derive(Debug, Serialize)]
pub struct FactorRecord {
    pub factor: &'static str,
    pub score: Number,
    /// Largest weighted term first.
    pub contributions: Vec<ContributionRecord>,
}

impl From<&FactorScore> for FactorRecord {
    fn from(s: &FactorScore) -> Self {
        Self {
            factor: s.factor.as_str(),
            score: (&s.score).into(),
            contributions: s
                .ranked()
                .into_iter()
                .map(|c| ContributionRecord {
                    metric: c.metric.as_str(),
                    eq: (&c.eq).into(),
                    weight: (&c.weight).into(),
                    term: (&c.term).into(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct AnalysisReport {
    pub tool: Tool,
    pub inputs: Vec<InputRecord>,
    pub thresholds: String,
    pub weights: String,
    pub summary: Summary,
    pub metrics: Vec<MetricRecord>,
    pub classes: Vec<ClassRecord>,
    pub factors: Vec<FactorRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub overall: Option<Number>,
    /// The analysed model in interchange form.
    pub model: serde_json::Value,
}

pub struct AnalysisInputs<'a> {
    pub model: &'a ClassModel,
    pub sources: &'a [SourceFile],
    pub metrics: &'a MetricVector,
    pub eqs: &'a EqValues,
    pub thresholds: &'a ThresholdProfile,
    pub weights: &'a WeightProfile,
    pub scores: &'a [FactorScore],
    pub overall: Option<&'a Rational>,
}

impl AnalysisReport {
    pub fn build(inputs: AnalysisInputs<'_>) -> Self {
        let model_json: serde_json::Value =
            serde_json::from_str(&crate::ingest::write_model_file(inputs.model))
                .expect("interchange output is JSON");
        Self {
            tool: TOOL,
            inputs: inputs.sources.iter().map(InputRecord::from).collect(),
            thresholds: inputs.thresholds.id.clone(),
            weights: inputs.weights.id.clone(),
            summary: Summary {
                classes: inputs.model.len(),
                interfaces: inputs
                    .model
                    .classes()
                    .iter()
                    .filter(|c| c.kind == ClassKind::Interface)
                    .count(),
                files: inputs.sources.len(),
            },
            metrics: inputs
                .metrics
                .iter()
                .map(|(id, value)| MetricRecord {
                    id: id.as_str(),
                    name: id.name(),
                    value: value.into(),
                    eq: inputs.eqs.get(id).expect("every metric quantized").into(),
                })
                .collect(),
            classes: inputs
                .metrics
                .per_class
                .iter()
                .map(|c| ClassRecord {
                    name: c.name.clone(),
                    noa: c.ancestors,
                    mdit: c.depth,
                    nar: c.aggregations,
                    nop: c.polymorphic,
                    cam: (&c.cam).into(),
                    dar: (&c.dar).into(),
                    fa: (&c.fa).into(),
                    dcc: c.dcc,
                    nom: c.nom,
                    cis: c.cis,
                })
                .collect(),
            factors: inputs.scores.iter().map(FactorRecord::from).collect(),
            overall: inputs.overall.map(Number::from),
            model: model_json,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "{} {}: {} classes ({} interfaces) from {} file(s)",
            self.tool.name, self.tool.version, self.summary.classes, self.summary.interfaces, self.summary.files
        )
        .unwrap();
        writeln!(out, "thresholds: {}  weights: {}", self.thresholds, self.weights).unwrap();
        writeln!(out).unwrap();
        writeln!(out, "{:<6} {:<38} {:>10} {:>5}", "metric", "name", "value", "EQ").unwrap();
        for m in &self.metrics {
            writeln!(
                out,
                "{:<6} {:<38} {:>10} {:>5.1}",
                m.id,
                m.name,
                format_value(&m.value),
                m.eq.value
            )
            .unwrap();
        }
        writeln!(out).unwrap();
        out.push_str(&factors_text(&self.factors, self.overall.as_ref()));
        out
    }

    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record(["metric", "value", "exact", "eq"])
            .expect("in-memory write");
        for m in &self.metrics {
            writer
                .write_record([
                    m.id.to_string(),
                    m.value.value.to_string(),
                    m.value.exact.clone(),
                    m.eq.value.to_string(),
                ])
                .expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("flush")).expect("utf-8")
    }
}

fn format_value(n: &Number) -> String {
    if n.exact.contains('/') {
        format!("{:.4}", n.value)
    } else {
        n.exact.clone()
    }
}

pub fn factors_text(factors: &[FactorRecord], overall: Option<&Number>) -> String {
    let mut out = String::new();
    for f in factors {
        writeln!(out, "{:<18} {:.4}", f.factor, f.score.value).unwrap();
        for c in &f.contributions {
            writeln!(
                out,
                "    {:<5} EQ {:.1}  weight {:.4}  term {:.4}",
                c.metric, c.eq.value, c.weight.value, c.term.value
            )
            .unwrap();
        }
    }
    if let Some(overall) = overall {
        writeln!(out, "{:<18} {:.4}", "overall", overall.value).unwrap();
    }
    out
}

#[derive(Debug, Serialize)]
pub struct ScoreReport {
    pub tool: Tool,
    pub inputs: Vec<InputRecord>,
    pub thresholds: String,
    pub weights: String,
    pub factors: Vec<FactorRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub overall: Option<Number>,
}

#[derive(Debug, Serialize)]
pub struct GroupRecord {
    pub n: usize,
    pub yes: usize,
    pub agreement_pct: f64,
}

#[derive(Debug, Serialize)]
pub struct AgreementRecord {
    pub metric: &'static str,
    pub factor: &'static str,
    pub n: usize,
    pub yes: usize,
    pub partial: usize,
    pub agreement_pct: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub industry: Option<Option<GroupRecord>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub academic: Option<Option<GroupRecord>>,
}

impl AgreementRecord {
    pub fn new(stat: &AgreementStat) -> Self {
        Self {
            metric: stat.metric.as_str(),
            factor: stat.factor.as_str(),
            n: stat.n,
            yes: stat.yes_count,
            partial: stat.partial_count,
            agreement_pct: round2(stat.agreement_pct),
            ci_low: round2(stat.ci_low),
            ci_high: round2(stat.ci_high),
            industry: None,
            academic: None,
        }
    }
}

pub fn group_record(stat: Option<AgreementStat>) -> Option<GroupRecord> {
    stat.map(|s| GroupRecord {
        n: s.n,
        yes: s.yes_count,
        agreement_pct: round2(s.agreement_pct),
    })
}

/// Two-decimal rounding used for published percentages.
pub fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

#[derive(Debug, Serialize)]
pub struct TableRecord {
    pub factor: &'static str,
    pub rows: Vec<AgreementRecord>,
}

#[derive(Debug, Serialize)]
pub struct SurveyReport {
    pub tool: Tool,
    pub input: InputRecord,
    pub respondents: usize,
    pub industry: usize,
    pub academic: usize,
    pub industry_share_pct: f64,
    pub rule: &'static str,
    pub tables: Vec<TableRecord>,
}

impl SurveyReport {
    pub fn to_text(&self, show_ci: bool, split: bool) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "{} respondents ({} industry, {} academic; {:.2}% industry)",
            self.respondents, self.industry, self.academic, self.industry_share_pct
        )
        .unwrap();
        for table in &self.tables {
            writeln!(out).unwrap();
            writeln!(out, "{}", table.factor).unwrap();
            let mut header = format!("  {:<6} {:>7} {:>4} {:>4}", "metric", "agree%", "yes", "n");
            if show_ci {
                write!(header, "  {:>15}", "95% CI").unwrap();
            }
            if split {
                write!(header, "  {:>9} {:>9}", "industry", "academic").unwrap();
            }
            writeln!(out, "{}", header.trim_end()).unwrap();
            for row in &table.rows {
                if row.n == 0 {
                    writeln!(out, "  {:<6} {:>7} {:>4} {:>4}", row.metric, "-", 0, 0).unwrap();
                    continue;
                }
                let mut line = format!(
                    "  {:<6} {:>7.2} {:>4} {:>4}",
                    row.metric, row.agreement_pct, row.yes, row.n
                );
                if show_ci {
                    write!(line, "  [{:>5.2}, {:>6.2}]", row.ci_low, row.ci_high).unwrap();
                }
                if split {
                    let cell = |g: &Option<Option<GroupRecord>>| match g {
                        Some(Some(g)) => format!("{:.2}", g.agreement_pct),
                        _ => "-".into(),
                    };
                    write!(line, "  {:>9} {:>9}", cell(&row.industry), cell(&row.academic)).unwrap();
                }
                writeln!(out, "{line}").unwrap();
            }
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record([
                "factor", "metric", "n", "yes", "partial", "agreement_pct", "ci_low", "ci_high",
            ])
            .expect("in-memory write");
        for table in &self.tables {
            for r in &table.rows {
                writer
                    .write_record([
                        r.factor.to_string(),
                        r.metric.to_string(),
                        r.n.to_string(),
                        r.yes.to_string(),
                        r.partial.to_string(),
                        format!("{:.2}", r.agreement_pct),
                        format!("{:.2}", r.ci_low),
                        format!("{:.2}", r.ci_high),
                    ])
                    .expect("in-memory write");
            }
        }
        String::from_utf8(writer.into_inner().expect("flush")).expect("utf-8")
    }
}

pub fn table_records(tables: &[FigureTable]) -> Vec<TableRecord> {
    tables
        .iter()
        .map(|t| TableRecord {
            factor: t.factor.as_str(),
            rows: t.rows.iter().map(AgreementRecord::new).collect(),
        })
        .collect()
}

pub fn survey_counts(dataset: &SurveyDataset) -> (usize, usize, usize, f64) {
    use crate::survey::Group;
    (
        dataset.respondents(),
        dataset.group_size(Group::Industry),
        dataset.group_size(Group::Academic),
        round2(dataset.industry_share_pct()),
    )
}

/// A factor's metrics ordered by agreement, strongest first.
#[derive(Debug, Serialize)]
pub struct Ranking {
    pub factor: &'static str,
    pub order: Vec<&'static str>,
}

pub fn rankings(tables: &[FigureTable]) -> Vec<Ranking> {
    tables
        .iter()
        .map(|t| Ranking {
            factor: t.factor.as_str(),
            order: t
                .rows
                .iter()
                .filter(|r| r.has_data())
                .map(|r| r.metric.as_str())
                .collect(),
        })
        .collect()
}

#[derive(Debug, Serialize)]
pub struct CombinedReport {
    pub analysis: AnalysisReport,
    pub survey: SurveyReport,
    pub rankings: Vec<Ranking>,
}

impl CombinedReport {
    pub fn to_text(&self) -> String {
        let mut out = self.analysis.to_text();
        out.push('\n');
        out.push_str(&self.survey.to_text(true, false));
        out.push('\n');
        out.push_str("influence ranking by agreement\n");
        for r in &self.rankings {
            writeln!(out, "  {:<18} {}", r.factor, r.order.join(" > ")).unwrap();
        }
        out
    }
}
