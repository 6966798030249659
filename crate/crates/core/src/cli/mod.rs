//! The `oodq` command line.
//!
//! [`run`] never panics on bad input and never calls `process::exit`; it
//! returns the exit code so tests can drive it in-process. Machine output goes
//! to `stdout`, diagnostics to `stderr`.

pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::distance::ThresholdProfile;
use crate::ingest::{self, InputKind, SourceFile};
use crate::metrics::{compute_all_with, MetricId};
use crate::par::Execution;
use crate::quality::{self, FactorId, QualityModel, WeightProfile};
use crate::survey::{self, AgreementRule, Group, SurveyDataset};

use report::{
    AgreementRecord, AnalysisInputs, AnalysisReport, CombinedReport, InputRecord, ScoreReport,
    SurveyReport, TableRecord, TOOL,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Environment variable naming a thresholds file used when `--thresholds` is absent.
pub const THRESHOLDS_ENV: &str = "OODQ_THRESHOLDS";

#[derive(Debug, Parser)]
#[command(name = "oodq", version, about = "Object-oriented design quality metrics")]
struct Cli {
    /// Run everything on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute metrics, EQ values and factor scores for a design.
    Analyze(AnalyzeArgs),
    /// Print the five factor scores for a design.
    Score(ScoreArgs),
    /// Summarise questionnaire responses into agreement tables.
    Survey(SurveyArgs),
    /// Analyse a design with weights derived from a response set.
    Report(ReportArgs),
    /// Convert between ODL and the JSON interchange format.
    Convert(ConvertArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct Scoring {
    /// `equal`, `survey`, or a JSON weights file.
    #[arg(long, default_value = "equal")]
    weights: String,
    /// JSON thresholds file overriding the default scales.
    #[arg(long)]
    thresholds: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    /// ODL or interchange files, or directories to search.
    #[arg(required = true)]
    paths: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Also write the merged model in interchange form.
    #[arg(long)]
    model_out: Option<PathBuf>,
    #[command(flatten)]
    scoring: Scoring,
    /// Include the mean of the factor scores.
    #[arg(long)]
    overall: bool,
}

#[derive(Debug, Args)]
struct ScoreArgs {
    #[arg(required = true)]
    paths: Vec<PathBuf>,
    #[command(flatten)]
    scoring: Scoring,
    #[arg(long)]
    overall: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct SurveyArgs {
    /// Response CSV.
    responses: PathBuf,
    /// Only this factor's table.
    #[arg(long)]
    factor: Option<String>,
    /// Agreement of one metric with every factor.
    #[arg(long, conflicts_with = "factor")]
    metric: Option<String>,
    /// Add per-group agreement columns.
    #[arg(long)]
    split_groups: bool,
    /// Show 95% Wilson intervals in text output.
    #[arg(long)]
    ci: bool,
    /// Count a partial answer as half an agreement.
    #[arg(long)]
    partial_half: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// Design inputs followed by the response CSV.
    #[arg(required = true, num_args = 2.., value_name = "PATHS... RESPONSES")]
    inputs: Vec<PathBuf>,
    #[arg(long)]
    thresholds: Option<PathBuf>,
    #[arg(long)]
    partial_half: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct ConvertArgs {
    input: PathBuf,
    /// `.odl` writes ODL, anything else writes interchange JSON.
    output: PathBuf,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Input(String),
}

impl Failure {
    fn input(e: impl std::fmt::Display) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

/// Parses `args` (program name first) and executes the subcommand.
pub fn run<I, T>(args: I, stdout: &mut impl Write, stderr: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    let outcome = match cli.command {
        Command::Analyze(a) => analyze(a, exec),
        Command::Score(a) => score(a, exec),
        Command::Survey(a) => survey_cmd(a),
        Command::Report(a) => report_cmd(a, exec),
        Command::Convert(a) => convert(a),
    };
    match outcome {
        Ok(text) => match stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(stderr, "oodq: cannot write output: {e}");
                EXIT_INPUT
            }
        },
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "oodq: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(stderr, "oodq: {msg}");
            EXIT_INPUT
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn thresholds(explicit: Option<&Path>) -> Result<ThresholdProfile, Failure> {
    let env = std::env::var_os(THRESHOLDS_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from);
    match explicit.map(Path::to_path_buf).or(env) {
        None => Ok(ThresholdProfile::default()),
        Some(path) => {
            let text = read(&path)?;
            ThresholdProfile::from_json(&text, path.display().to_string())
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
        }
    }
}

fn weights(spec: &str, model: &QualityModel) -> Result<WeightProfile, Failure> {
    match spec {
        "equal" => Ok(WeightProfile::equal(model)),
        "survey" => Ok(WeightProfile::survey(model)),
        file => {
            let path = Path::new(file);
            if !path.exists() {
                return Err(Failure::Usage(format!(
                    "--weights expects `equal`, `survey` or a file; `{file}` does not exist"
                )));
            }
            let text = read(path)?;
            WeightProfile::from_json(&text, model, file)
                .map_err(|e| Failure::Input(format!("{file}: {e}")))
        }
    }
}

struct Scored {
    model: crate::model::ClassModel,
    sources: Vec<SourceFile>,
    report: AnalysisReport,
}

fn analyse(
    paths: &[PathBuf],
    thresholds: &ThresholdProfile,
    weights: &WeightProfile,
    overall: bool,
    exec: Execution,
) -> Result<Scored, Failure> {
    let (model, sources) = ingest::load_inputs(paths, exec).map_err(Failure::input)?;
    let metrics = compute_all_with(&model, exec);
    let eqs = thresholds.quantize_all(&metrics);
    let hierarchy = QualityModel::default();
    let scores = quality::all_factor_scores(&hierarchy, weights, thresholds, &metrics)
        .map_err(Failure::input)?;
    let total = overall.then(|| quality::overall_score(&scores));
    let report = AnalysisReport::build(AnalysisInputs {
        model: &model,
        sources: &sources,
        metrics: &metrics,
        eqs: &eqs,
        thresholds,
        weights,
        scores: &scores,
        overall: total.as_ref(),
    });
    Ok(Scored {
        model,
        sources,
        report,
    })
}

fn analyze(args: AnalyzeArgs, exec: Execution) -> Outcome {
    let hierarchy = QualityModel::default();
    let profile = thresholds(args.scoring.thresholds.as_deref())?;
    let weights = weights(&args.scoring.weights, &hierarchy)?;
    let scored = analyse(&args.paths, &profile, &weights, args.overall, exec)?;
    if let Some(out) = &args.model_out {
        std::fs::write(out, ingest::write_model_file(&scored.model))
            .map_err(|e| Failure::Input(format!("{}: {e}", out.display())))?;
    }
    Ok(match args.format {
        Format::Text => scored.report.to_text(),
        Format::Json => json(&scored.report),
        Format::Csv => scored.report.to_csv(),
    })
}

fn score(args: ScoreArgs, exec: Execution) -> Outcome {
    let hierarchy = QualityModel::default();
    let profile = thresholds(args.scoring.thresholds.as_deref())?;
    let weights = weights(&args.scoring.weights, &hierarchy)?;
    let scored = analyse(&args.paths, &profile, &weights, args.overall, exec)?;
    let report = ScoreReport {
        tool: TOOL,
        inputs: scored.sources.iter().map(InputRecord::from).collect(),
        thresholds: profile.id.clone(),
        weights: weights.id.clone(),
        factors: scored.report.factors,
        overall: scored.report.overall,
    };
    match args.format {
        Format::Text => Ok(report::factors_text(&report.factors, report.overall.as_ref())),
        Format::Json => Ok(json(&report)),
        Format::Csv => Err(Failure::Usage("score supports text and json output".into())),
    }
}

fn rule(partial_half: bool) -> AgreementRule {
    if partial_half {
        AgreementRule::PartialHalf
    } else {
        AgreementRule::YesOnly
    }
}

fn rule_name(rule: AgreementRule) -> &'static str {
    match rule {
        AgreementRule::YesOnly => "yes-only",
        AgreementRule::PartialHalf => "partial-half",
    }
}

fn load_survey(path: &Path) -> Result<(SurveyDataset, InputRecord), Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| Failure::Input(format!("{}: not UTF-8", path.display())))?;
    let dataset = survey::load_responses(&text)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let input = InputRecord {
        path: path.display().to_string(),
        sha256: ingest::sha256_hex(&bytes),
    };
    Ok((dataset, input))
}

fn survey_report(
    dataset: &SurveyDataset,
    input: InputRecord,
    tables: Vec<TableRecord>,
    rule: AgreementRule,
) -> SurveyReport {
    let (respondents, industry, academic, share) = report::survey_counts(dataset);
    SurveyReport {
        tool: TOOL,
        input,
        respondents,
        industry,
        academic,
        industry_share_pct: share,
        rule: rule_name(rule),
        tables,
    }
}

fn with_groups(
    rows: &mut [AgreementRecord],
    dataset: &SurveyDataset,
    rule: AgreementRule,
) -> Result<(), Failure> {
    for row in rows {
        let metric: MetricId = row.metric.parse().map_err(Failure::input)?;
        let factor: FactorId = row.factor.parse().map_err(Failure::input)?;
        let group = |g| {
            report::group_record(survey::agreement_with(dataset, metric, factor, Some(g), rule).ok())
        };
        row.industry = Some(group(Group::Industry));
        row.academic = Some(group(Group::Academic));
    }
    Ok(())
}

fn survey_cmd(args: SurveyArgs) -> Outcome {
    let rule = rule(args.partial_half);
    let factor = args
        .factor
        .as_deref()
        .map(str::parse::<FactorId>)
        .transpose()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let metric = args
        .metric
        .as_deref()
        .map(str::parse::<MetricId>)
        .transpose()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let (dataset, input) = load_survey(&args.responses)?;
    let hierarchy = QualityModel::default();

    let mut tables = match metric {
        Some(metric) => {
            let mut rows: Vec<_> = FactorId::ALL
                .into_iter()
                .map(|f| survey::agreement_with(&dataset, metric, f, None, rule))
                .filter_map(Result::ok)
                .collect();
            rows.sort_by(|a, b| b.agreement_pct.total_cmp(&a.agreement_pct));
            vec![TableRecord {
                factor: metric.as_str(),
                rows: rows.iter().map(AgreementRecord::new).collect(),
            }]
        }
        None => {
            let all = survey::figure_tables_with(&dataset, &hierarchy, None, rule);
            let chosen: Vec<_> = all
                .into_iter()
                .filter(|t| factor.is_none_or(|f| t.factor == f))
                .collect();
            report::table_records(&chosen)
        }
    };
    if args.split_groups {
        for t in &mut tables {
            with_groups(&mut t.rows, &dataset, rule)?;
        }
    }
    let report = survey_report(&dataset, input, tables, rule);
    Ok(match args.format {
        Format::Text => report.to_text(args.ci, args.split_groups),
        Format::Json => json(&report),
        Format::Csv => report.to_csv(),
    })
}

fn report_cmd(args: ReportArgs, exec: Execution) -> Outcome {
    let (responses, paths) = args
        .inputs
        .split_last()
        .expect("clap enforces at least two inputs");
    if InputKind::of(responses).is_some() {
        return Err(Failure::Usage(format!(
            "the last argument must be the response CSV, got `{}`",
            responses.display()
        )));
    }
    let rule = rule(args.partial_half);
    let hierarchy = QualityModel::default();
    let profile = thresholds(args.thresholds.as_deref())?;
    let (dataset, input) = load_survey(responses)?;
    let table = survey::agreement_table(&dataset, &hierarchy, rule);
    let weights = quality::weights_from_survey(&hierarchy, &table).map_err(Failure::input)?;
    let scored = analyse(paths, &profile, &weights, true, exec)?;
    let figures = survey::figure_tables_with(&dataset, &hierarchy, None, rule);
    let combined = CombinedReport {
        analysis: scored.report,
        survey: survey_report(&dataset, input, report::table_records(&figures), rule),
        rankings: report::rankings(&figures),
    };
    match args.format {
        Format::Text => Ok(combined.to_text()),
        Format::Json => Ok(json(&combined)),
        Format::Csv => Err(Failure::Usage("report supports text and json output".into())),
    }
}

fn convert(args: ConvertArgs) -> Outcome {
    let (model, _) = ingest::load_path(&args.input).map_err(Failure::input)?;
    let model = ingest::merge_models(vec![model]).map_err(Failure::input)?;
    let wants_odl = args
        .output
        .extension()
        .is_some_and(|e| e == ingest::ODL_EXTENSION);
    let text = if wants_odl {
        ingest::write_odl(&model)
    } else {
        ingest::write_model_file(&model)
    };
    std::fs::write(&args.output, text)
        .map_err(|e| Failure::Input(format!("{}: {e}", args.output.display())))?;
    Ok(String::new())
}
