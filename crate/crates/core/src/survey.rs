//! Questionnaire responses and agreement statistics.
//!
//! Respondents answer yes, no or partial for each (metric, factor) pair.
//! Agreement is the share of "yes" answers; partial answers count as
//! non-agreement unless [`AgreementRule::PartialHalf`] is selected. Each
//! percentage carries a 95% Wilson score interval.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::metrics::MetricId;
use crate::quality::{FactorId, QualityModel};
use crate::ratio::{self, Rational};

pub const HEADER: [&str; 5] = ["respondent", "group", "metric", "factor", "answer"];

/// Normal quantile for a two-sided 95% interval.
pub const Z_95: f64 = 1.96;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Group {
    Industry,
    Academic,
}

impl Group {
    pub fn as_str(self) -> &'static str {
        match self {
            Group::Industry => "industry",
            Group::Academic => "academic",
        }
    }
}

impl FromStr for Group {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "industry" => Ok(Group::Industry),
            "academic" => Ok(Group::Academic),
            other => Err(format!("unknown group `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Answer {
    Yes,
    No,
    Partial,
}

impl FromStr for Answer {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "yes" => Ok(Answer::Yes),
            "no" => Ok(Answer::No),
            "partial" => Ok(Answer::Partial),
            other => Err(format!("unknown answer `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AgreementRule {
    /// Only "yes" counts.
    #[default]
    YesOnly,
    /// "partial" counts as half a "yes".
    PartialHalf,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurveyResponse {
    pub respondent: String,
    pub group: Group,
    pub answers: BTreeMap<(MetricId, FactorId), Answer>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SurveyDataset {
    pub responses: Vec<SurveyResponse>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurveyError {
    #[error("row {row}: {message}")]
    Format { row: u64, message: String },
    #[error("row {row}: respondent `{respondent}` answered {metric}/{factor} twice")]
    Duplicate {
        row: u64,
        respondent: String,
        metric: MetricId,
        factor: FactorId,
    },
    #[error("no answers for {metric}/{factor}{}", group.map(|g| format!(" in group {}", g.as_str())).unwrap_or_default())]
    NoData {
        metric: MetricId,
        factor: FactorId,
        group: Option<Group>,
    },
}

pub fn load_responses(text: &str) -> Result<SurveyDataset, SurveyError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut records = reader.records();
    let format = |row: u64, message: String| SurveyError::Format { row, message };

    match records.next() {
        None => return Ok(SurveyDataset::default()),
        Some(header) => {
            let header = header.map_err(|e| format(1, e.to_string()))?;
            let fields: Vec<&str> = header.iter().collect();
            if fields != HEADER {
                return Err(format(
                    1,
                    format!("expected header `{}`", HEADER.join(",")),
                ));
            }
        }
    }

    let mut index: HashMap<String, usize> = HashMap::new();
    let mut responses: Vec<SurveyResponse> = Vec::new();
    for record in records {
        let record = record.map_err(|e| {
            let row = e.position().map_or(0, |p| p.line());
            format(row, e.to_string())
        })?;
        let row = record.position().map_or(0, |p| p.line());
        if record.len() != HEADER.len() {
            return Err(format(row, format!("expected 5 fields, found {}", record.len())));
        }
        let respondent = record[0].to_string();
        if respondent.is_empty() {
            return Err(format(row, "empty respondent id".into()));
        }
        let group: Group = record[1].parse().map_err(|m| format(row, m))?;
        let metric: MetricId = record[2].parse().map_err(|e: crate::metrics::UnknownMetric| format(row, e.to_string()))?;
        let factor: FactorId = record[3].parse().map_err(|e: crate::quality::UnknownFactor| format(row, e.to_string()))?;
        let answer: Answer = record[4].parse().map_err(|m| format(row, m))?;

        let slot = *index.entry(respondent.clone()).or_insert_with(|| {
            responses.push(SurveyResponse {
                respondent: respondent.clone(),
                group,
                answers: BTreeMap::new(),
            });
            responses.len() - 1
        });
        let response = &mut responses[slot];
        if response.group != group {
            return Err(format(
                row,
                format!("respondent `{respondent}` changes group"),
            ));
        }
        if response.answers.insert((metric, factor), answer).is_some() {
            return Err(SurveyError::Duplicate {
                row,
                respondent,
                metric,
                factor,
            });
        }
    }
    Ok(SurveyDataset { responses })
}

impl SurveyDataset {
    pub fn respondents(&self) -> usize {
        self.responses.len()
    }

    pub fn group_size(&self, group: Group) -> usize {
        self.responses.iter().filter(|r| r.group == group).count()
    }

    /// Industry respondents as a percentage of all respondents.
    pub fn industry_share_pct(&self) -> f64 {
        if self.responses.is_empty() {
            return 0.0;
        }
        100.0 * self.group_size(Group::Industry) as f64 / self.respondents() as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgreementStat {
    pub metric: MetricId,
    pub factor: FactorId,
    pub n: usize,
    pub yes_count: usize,
    pub partial_count: usize,
    pub agreement_pct: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl AgreementStat {
    pub fn has_data(&self) -> bool {
        self.n > 0
    }

    fn empty(metric: MetricId, factor: FactorId) -> Self {
        Self {
            metric,
            factor,
            n: 0,
            yes_count: 0,
            partial_count: 0,
            agreement_pct: 0.0,
            ci_low: 0.0,
            ci_high: 100.0,
        }
    }
}

impl fmt::Display for AgreementStat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{}: {:.2}% ({} of {})",
            self.metric, self.factor, self.agreement_pct, self.yes_count, self.n
        )
    }
}

/// Wilson score interval for `successes` out of `n`, as proportions.
pub fn wilson_interval(successes: f64, n: usize, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = successes / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let low = (centre - half).clamp(0.0, 1.0).min(p);
    let high = (centre + half).clamp(0.0, 1.0).max(p);
    (low, high)
}

fn stat_from<'a>(
    metric: MetricId,
    factor: FactorId,
    answers: impl Iterator<Item = &'a Answer>,
    rule: AgreementRule,
) -> AgreementStat {
    let (mut n, mut yes, mut partial) = (0usize, 0usize, 0usize);
    for answer in answers {
        n += 1;
        match answer {
            Answer::Yes => yes += 1,
            Answer::Partial => partial += 1,
            Answer::No => {}
        }
    }
    if n == 0 {
        return AgreementStat::empty(metric, factor);
    }
    let agreeing = match rule {
        AgreementRule::YesOnly => yes as f64,
        AgreementRule::PartialHalf => yes as f64 + 0.5 * partial as f64,
    };
    let (low, high) = wilson_interval(agreeing, n, Z_95);
    AgreementStat {
        metric,
        factor,
        n,
        yes_count: yes,
        partial_count: partial,
        agreement_pct: 100.0 * agreeing / n as f64,
        ci_low: 100.0 * low,
        ci_high: 100.0 * high,
    }
}

fn answers_for(
    dataset: &SurveyDataset,
    metric: MetricId,
    factor: FactorId,
    group: Option<Group>,
) -> impl Iterator<Item = &Answer> {
    dataset
        .responses
        .iter()
        .filter(move |r| group.is_none_or(|g| r.group == g))
        .filter_map(move |r| r.answers.get(&(metric, factor)))
}

pub fn agreement_with(
    dataset: &SurveyDataset,
    metric: MetricId,
    factor: FactorId,
    group: Option<Group>,
    rule: AgreementRule,
) -> Result<AgreementStat, SurveyError> {
    let stat = stat_from(metric, factor, answers_for(dataset, metric, factor, group), rule);
    if stat.has_data() {
        Ok(stat)
    } else {
        Err(SurveyError::NoData {
            metric,
            factor,
            group,
        })
    }
}

pub fn agreement(
    dataset: &SurveyDataset,
    metric: MetricId,
    factor: FactorId,
) -> Result<AgreementStat, SurveyError> {
    agreement_with(dataset, metric, factor, None, AgreementRule::YesOnly)
}

pub fn group_split(
    dataset: &SurveyDataset,
    metric: MetricId,
    factor: FactorId,
) -> (
    Result<AgreementStat, SurveyError>,
    Result<AgreementStat, SurveyError>,
) {
    (
        agreement_with(dataset, metric, factor, Some(Group::Industry), AgreementRule::YesOnly),
        agreement_with(dataset, metric, factor, Some(Group::Academic), AgreementRule::YesOnly),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureTable {
    pub factor: FactorId,
    /// Descending by agreement; pairs without answers last.
    pub rows: Vec<AgreementStat>,
}

fn sort_rows(rows: &mut [AgreementStat]) {
    rows.sort_by(|a, b| {
        b.has_data()
            .cmp(&a.has_data())
            .then(b.agreement_pct.total_cmp(&a.agreement_pct))
    });
}

/// One table per factor over exactly the hierarchy's (metric, factor) pairs.
pub fn figure_tables(dataset: &SurveyDataset) -> Vec<FigureTable> {
    figure_tables_with(dataset, &QualityModel::default(), None, AgreementRule::YesOnly)
}

pub fn figure_tables_with(
    dataset: &SurveyDataset,
    model: &QualityModel,
    group: Option<Group>,
    rule: AgreementRule,
) -> Vec<FigureTable> {
    model
        .factors()
        .map(|factor| {
            let mut rows: Vec<AgreementStat> = model
                .metrics_of(factor)
                .into_iter()
                .map(|m| stat_from(m, factor, answers_for(dataset, m, factor, group), rule))
                .collect();
            sort_rows(&mut rows);
            FigureTable { factor, rows }
        })
        .collect()
}

/// Agreement for one metric across all five factors, descending.
pub fn metric_impact(dataset: &SurveyDataset, metric: MetricId) -> Vec<AgreementStat> {
    let mut rows: Vec<AgreementStat> = FactorId::ALL
        .into_iter()
        .map(|f| stat_from(metric, f, answers_for(dataset, metric, f, None), AgreementRule::YesOnly))
        .collect();
    sort_rows(&mut rows);
    rows
}

/// Exact agreement percentages for every hierarchy pair, for deriving weights.
pub fn agreement_table(
    dataset: &SurveyDataset,
    model: &QualityModel,
    rule: AgreementRule,
) -> BTreeMap<(MetricId, FactorId), Rational> {
    let mut out = BTreeMap::new();
    for (factor, metric) in model.pairs() {
        let stat = stat_from(metric, factor, answers_for(dataset, metric, factor, None), rule);
        if stat.has_data() {
            let agreeing = match rule {
                AgreementRule::YesOnly => ratio::int(stat.yes_count as i64),
                AgreementRule::PartialHalf => {
                    ratio::int(stat.yes_count as i64) + ratio::frac(stat.partial_count as i64, 2)
                }
            };
            out.insert(
                (metric, factor),
                agreeing * ratio::int(100) / ratio::int(stat.n as i64),
            );
        }
    }
    out
}

const PUBLISHED: &str = include_str!("../assets/published_agreement.csv");

/// Agreement percentages as published for the 31 hierarchy pairs.
pub fn published_agreement() -> BTreeMap<(MetricId, FactorId), Rational> {
    PUBLISHED
        .lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let fields: Vec<&str> = line.split(',').collect();
            let metric: MetricId = fields[0].parse().expect("bundled metric id");
            let factor: FactorId = fields[1].parse().expect("bundled factor id");
            let pct = ratio::parse_decimal(fields[2]).expect("bundled percentage");
            ((metric, factor), pct)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(id: &str, group: &str, m: &str, f: &str, a: &str) -> String {
        format!("{id},{group},{m},{f},{a}\n")
    }

    fn dataset(rows: &[String]) -> SurveyDataset {
        let mut text = HEADER.join(",") + "\n";
        for r in rows {
            text.push_str(r);
        }
        load_responses(&text).unwrap()
    }

    #[test]
    fn header_only_and_empty() {
        assert_eq!(load_responses("respondent,group,metric,factor,answer\n").unwrap().respondents(), 0);
        assert_eq!(load_responses("").unwrap().respondents(), 0);
    }

    #[test]
    fn format_errors_carry_rows() {
        let text = "respondent,group,metric,factor,answer\nr1,industry,NOC,functionality,yes\nr2,industry,NOC,functionality,maybe\n";
        match load_responses(text).unwrap_err() {
            SurveyError::Format { row, message } => {
                assert_eq!(row, 3);
                assert!(message.contains("maybe"));
            }
            other => panic!("unexpected {other:?}"),
        }
        let bad = [
            "who,group,metric,factor,answer\n",
            "respondent,group,metric,factor,answer\nr1,student,NOC,functionality,yes\n",
            "respondent,group,metric,factor,answer\nr1,industry,XYZ,functionality,yes\n",
            "respondent,group,metric,factor,answer\nr1,industry,NOC,speed,yes\n",
            "respondent,group,metric,factor,answer\nr1,industry,NOC\n",
            "respondent,group,metric,factor,answer\nr1,industry,NOC,functionality,yes\nr1,academic,NOH,functionality,yes\n",
        ];
        for text in bad {
            assert!(matches!(load_responses(text), Err(SurveyError::Format { .. })), "{text}");
        }
    }

    #[test]
    fn duplicate_answer() {
        let text = "respondent,group,metric,factor,answer\nr1,industry,NOC,functionality,yes\nr1,industry,noc,Functionality,no\n";
        assert!(matches!(
            load_responses(text),
            Err(SurveyError::Duplicate { row: 3, .. })
        ));
    }

    #[test]
    fn percentages_from_counts() {
        let mut rows = Vec::new();
        for i in 0..52 {
            let answer = if i < 48 { "yes" } else if i < 50 { "partial" } else { "no" };
            rows.push(row(&format!("r{i}"), "industry", "NOC", "functionality", answer));
        }
        let d = dataset(&rows);
        let s = agreement(&d, MetricId::Noc, FactorId::Functionality).unwrap();
        assert_eq!((s.n, s.yes_count, s.partial_count), (52, 48, 2));
        assert_eq!(format!("{:.2}", s.agreement_pct), "92.31");
        assert!(s.ci_low <= s.agreement_pct && s.agreement_pct <= s.ci_high);
        let half = agreement_with(&d, MetricId::Noc, FactorId::Functionality, None, AgreementRule::PartialHalf)
            .unwrap();
        assert!((half.agreement_pct - 100.0 * 49.0 / 52.0).abs() < 1e-12);
        assert!(matches!(
            agreement(&d, MetricId::Noh, FactorId::Functionality),
            Err(SurveyError::NoData { .. })
        ));
    }

    #[test]
    fn group_split_examples() {
        let d = dataset(&[row("a", "industry", "NOC", "reusability", "yes")]);
        let (ind, acad) = group_split(&d, MetricId::Noc, FactorId::Reusability);
        assert_eq!(ind.unwrap().agreement_pct, 100.0);
        assert!(matches!(acad, Err(SurveyError::NoData { group: Some(Group::Academic), .. })));

        let d = dataset(&[
            row("a", "academic", "NOC", "reusability", "partial"),
            row("b", "academic", "NOC", "reusability", "partial"),
        ]);
        let (_, acad) = group_split(&d, MetricId::Noc, FactorId::Reusability);
        assert_eq!(acad.unwrap().agreement_pct, 0.0);
    }

    #[test]
    fn empty_dataset_tables() {
        let tables = figure_tables(&SurveyDataset::default());
        assert_eq!(tables.len(), 5);
        assert!(tables.iter().all(|t| t.rows.iter().all(|r| r.n == 0)));
        assert_eq!(tables.iter().map(|t| t.rows.len()).sum::<usize>(), 31);
    }

    #[test]
    fn wilson_edges() {
        let (lo, hi) = wilson_interval(0.0, 52, Z_95);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.1);
        let (lo, hi) = wilson_interval(52.0, 52, Z_95);
        assert_eq!(hi, 1.0);
        assert!(lo > 0.9);
        assert_eq!(wilson_interval(0.0, 0, Z_95), (0.0, 1.0));
    }

    #[test]
    fn published_table_has_every_pair() {
        let table = published_agreement();
        assert_eq!(table.len(), 31);
        for (f, m) in QualityModel::default().pairs() {
            assert!(table.contains_key(&(m, f)), "{m}/{f}");
        }
        let maint: Rational = table
            .iter()
            .filter(|((_, f), _)| *f == FactorId::Maintainability)
            .map(|(_, p)| p)
            .sum();
        assert_eq!(maint, ratio::parse_decimal("807.69").unwrap());
    }
}
