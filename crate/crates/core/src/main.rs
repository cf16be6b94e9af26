use clap::{Args, Parser, Subcommand, ValueEnum};
use std::process::ExitCode;
use tforms::graph::{graph_elliptic, graph_p1, QuotientGraph};
use tforms::reduction::{phi_p_column, LocalData};
use tforms::report::{
    parse_target, render_markdown, run_full_analysis, toroidal_summary, zeta_report,
    AnalysisOptions, AnalysisTarget,
};
use tforms::Error;

/// CLI failures: either a library error or a plain usage problem.
enum CliError {
    Lib(Error),
    Usage(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Usage(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Lib(Error::from(e))
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Exact analysis of toroidal automorphic forms for the rational function
/// field and the three class-number-one elliptic function fields with small
/// constant field.
#[derive(Parser)]
#[command(name = "tforms", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the complete pipeline and print the full report.
    Analyze(AnalyzeArgs),
    /// Point counts, zeta numerators and the cover quotient only.
    Zeta(ZetaArgs),
    /// Export and validate the quotient graph.
    Graph(GraphArgs),
    /// Reduce the degree-two Hecke cosets to standard vertices.
    Reduce(ReduceArgs),
    /// Summary of the toroidal space: dimension, basis head, spectrum.
    Toroidal(ToroidalArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum CoverChoice {
    /// Quadratic constant-field extension: reports P and Lq.
    Constant,
    /// Genus-two double cover: reports P, the cover numerator and Ltilde.
    Genus2,
}

#[derive(Args)]
struct ZetaArgs {
    /// Analysis target: e2 | e3 | e4 | p1.
    #[arg(long, default_value = "e2")]
    field: String,
    /// Which cover's quotient to report alongside P.
    #[arg(long, value_enum, default_value_t = CoverChoice::Constant)]
    cover: CoverChoice,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Md,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum GraphFormat {
    Json,
    Dot,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Analysis target: e2 | e3 | e4 | p1.
    #[arg(long, default_value = "e2")]
    field: String,
    /// Cusp-ray truncation depth of the form vectors.
    #[arg(long, default_value_t = 32)]
    depth: usize,
    /// Number of toroidal conditions beyond the zeroth row.
    #[arg(long, default_value_t = 28)]
    iterations: usize,
    /// Laurent window length (overrides TFORMS_PRECISION).
    #[arg(long)]
    precision: Option<usize>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    format: ReportFormat,
}

#[derive(Args)]
struct ToroidalArgs {
    /// Analysis target: e2 | e3 | e4 | p1.
    #[arg(long, default_value = "e2")]
    field: String,
    /// Cusp-ray truncation depth of the form vectors.
    #[arg(long, default_value_t = 32)]
    depth: usize,
    /// Number of toroidal conditions beyond the zeroth row.
    #[arg(long, default_value_t = 28)]
    iterations: usize,
    /// Laurent window length (overrides TFORMS_PRECISION).
    #[arg(long)]
    precision: Option<usize>,
}

#[derive(Args)]
struct GraphArgs {
    /// Analysis target: e2 | e3 | e4 | p1.
    #[arg(long, default_value = "e2")]
    field: String,
    /// How far down the cusp ray to export and validate.
    #[arg(long, default_value_t = 32)]
    depth: usize,
    /// Output format.
    #[arg(long, value_enum, default_value_t = GraphFormat::Json)]
    format: GraphFormat,
}

#[derive(Args)]
struct ReduceArgs {
    /// Analysis target: e2 | e3 | e4 (the rational field has no
    /// degree-two torus places).
    #[arg(long, default_value = "e2")]
    field: String,
    /// Laurent window length (overrides TFORMS_PRECISION).
    #[arg(long)]
    precision: Option<usize>,
    /// Restrict to the place with this index.
    #[arg(long)]
    place: Option<usize>,
}

/// Resolve the Laurent window length: flag beats the TFORMS_PRECISION
/// environment variable beats the default of 32.
fn resolve_precision(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("TFORMS_PRECISION")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(32)
}

fn graph_for(target: AnalysisTarget) -> tforms::Result<QuotientGraph> {
    match target {
        AnalysisTarget::Curve(id) => graph_elliptic(id.base_field().order()),
        AnalysisTarget::ProjectiveLine(q) => graph_p1(q),
    }
}

fn run(cli: Cli) -> CliResult<String> {
    match cli.command {
        Command::Analyze(args) => {
            let target = parse_target(&args.field)?;
            let opts = AnalysisOptions {
                depth: args.depth,
                iterations: args.iterations,
                precision: resolve_precision(args.precision),
            };
            let report = run_full_analysis(target, opts)?;
            match args.format {
                ReportFormat::Json => Ok(report.to_json()?),
                ReportFormat::Md => Ok(render_markdown(&report)),
            }
        }
        Command::Zeta(args) => {
            let report = zeta_report(parse_target(&args.field)?)?;
            #[derive(serde::Serialize)]
            struct ZetaView {
                schema_version: u32,
                field: String,
                q: u64,
                cover: &'static str,
                counts: tforms::report::Counts,
                #[serde(rename = "P")]
                p: Vec<i64>,
                #[serde(rename = "Lq", skip_serializing_if = "Option::is_none")]
                lq: Option<Vec<i64>>,
                #[serde(rename = "Ltilde", skip_serializing_if = "Option::is_none")]
                ltilde: Option<Vec<i64>>,
                #[serde(skip_serializing_if = "Option::is_none")]
                genus2: Option<tforms::report::CoverBlock>,
                #[serde(skip_serializing_if = "Option::is_none")]
                group: Option<tforms::report::GroupBlock>,
            }
            let constant = args.cover == CoverChoice::Constant;
            let view = ZetaView {
                schema_version: report.schema_version,
                field: report.field,
                q: report.q,
                cover: if constant { "constant" } else { "genus2" },
                counts: report.counts,
                p: report.lpolys.p,
                lq: constant.then_some(report.lpolys.lq),
                ltilde: (!constant).then_some(report.lpolys.ltilde),
                genus2: if constant { None } else { report.cover },
                group: report.group,
            };
            Ok(serde_json::to_string_pretty(&view)?)
        }
        Command::Graph(args) => {
            let g = graph_for(parse_target(&args.field)?)?;
            let validation = g.validate(args.depth)?;
            if !validation.is_ok() {
                return Err(Error::InvalidGraph(validation.violations.join("; ")).into());
            }
            match args.format {
                GraphFormat::Dot => Ok(g.to_dot(args.depth)?),
                GraphFormat::Json => {
                    #[derive(serde::Serialize)]
                    struct GraphOutput<V, G> {
                        depth: usize,
                        validation: V,
                        graph: G,
                    }
                    Ok(serde_json::to_string_pretty(&GraphOutput {
                        depth: args.depth,
                        validation,
                        graph: g.to_json(args.depth)?,
                    })?)
                }
            }
        }
        Command::Reduce(args) => {
            let target = parse_target(&args.field)?;
            let AnalysisTarget::Curve(id) = target else {
                return Err(CliError::Usage(
                    "the rational function field has no degree-two torus places; \
                     pick one of e2, e3, e4"
                        .into(),
                ));
            };
            let data = LocalData::new(id, resolve_precision(args.precision))?;
            #[derive(serde::Serialize)]
            struct ColumnOutput {
                place_index: usize,
                ell: String,
                tally: Vec<(String, u64)>,
                outcomes: Vec<(String, String)>,
            }
            #[derive(serde::Serialize)]
            struct ReduceOutput {
                schema_version: u32,
                field: String,
                q: u64,
                precision: usize,
                columns: Vec<ColumnOutput>,
            }
            let mut columns = Vec::new();
            for place in &data.places {
                if args.place.is_some_and(|p| p != place.index) {
                    continue;
                }
                let col = phi_p_column(&data, place.index)?;
                columns.push(ColumnOutput {
                    place_index: place.index,
                    ell: place.ell.to_string(),
                    tally: col
                        .tally
                        .iter()
                        .map(|(c, m)| (c.to_string(), *m))
                        .collect(),
                    outcomes: col
                        .outcomes
                        .iter()
                        .map(|(label, class)| (label.clone(), class.to_string()))
                        .collect(),
                });
            }
            if columns.is_empty() {
                let available: Vec<String> =
                    data.places.iter().map(|p| p.index.to_string()).collect();
                return Err(CliError::Usage(format!(
                    "no degree-two place with that index; available: {}",
                    available.join(", ")
                )));
            }
            Ok(serde_json::to_string_pretty(&ReduceOutput {
                schema_version: 1,
                field: id.label().to_string(),
                q: data.curve.base.order(),
                precision: data.precision,
                columns,
            })?)
        }
        Command::Toroidal(args) => {
            let target = parse_target(&args.field)?;
            let opts = AnalysisOptions {
                depth: args.depth,
                iterations: args.iterations,
                precision: resolve_precision(args.precision),
            };
            let report = run_full_analysis(target, opts)?;
            Ok(serde_json::to_string_pretty(&toroidal_summary(&report))?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(output) => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            // A closed pipe (e.g. `tforms ... | head`) is not a failure.
            match writeln!(stdout, "{output}") {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
