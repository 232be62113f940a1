use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use exptype::cyclotomic;
use exptype::laurent::LaurentPoly;
use exptype::pipeline::{
    self, Document, FileOptions, OracleOutcome, PipelineError, PointReport, Status, EXIT_INCONSISTENT,
    EXIT_INPUT, EXIT_OK,
};
use exptype::realization::{realize, roundtrip_check, FormalModuleSpec};
use exptype::resolution::{build_resolution, ResolutionError};

#[derive(Parser)]
#[command(name = "exptype", version, about = "Formal invariants of exponential-type direct images from branch data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Input JSON file; standard input when absent.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// SVG path for the Newton polygon; `{c}` and `{k}` expand per point.
    #[arg(long, global = true)]
    svg: Option<String>,
    /// Number of known holomorphic coefficients per branch [default: 8].
    #[arg(long, global = true)]
    truncation: Option<u32>,
    /// Largest cyclotomic order allowed [default: 10000].
    #[arg(long, global = true)]
    max_order: Option<u32>,
    /// Run the blow-up cross-check [default: on].
    #[arg(long, global = true, value_enum)]
    oracle: Option<Switch>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Subcommand)]
enum Command {
    /// Check branch data and report warnings.
    Validate,
    /// Newton polygon, slopes and irregularity per point.
    Invariants,
    /// Exponential factors with ranks and characteristic polynomials.
    Decompose,
    /// Blow-up resolution for a polar part given as {"alpha": ...}.
    Resolve {
        /// Human-readable tree instead of JSON.
        #[arg(long)]
        text: bool,
    },
    /// Blow-up cross-check of the decomposition only.
    Verify,
    /// Branch data realizing a formal module spec.
    Realize,
    /// Realize a spec, decompose it, and compare.
    Roundtrip,
    /// Full per-point report.
    Report,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Inconsistent(String),
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        Failure::Input(e.to_string())
    }
}

#[derive(Serialize)]
struct ValidateEntry<'a> {
    c: &'a str,
    k: i64,
    branches: &'a [exptype::branch::ValidationReport],
}

#[derive(Serialize)]
struct InvariantsEntry<'a> {
    c: &'a str,
    k: i64,
    polygon: &'a exptype::newton::NewtonPolygon,
    vertices: &'a [(String, String)],
    slopes: &'a [String],
    irregularity: &'a str,
    regular: bool,
}

#[derive(Serialize)]
struct DecomposeEntry<'a> {
    c: &'a str,
    k: i64,
    decomposition: &'a exptype::decomposition::FormalDecomposition,
}

#[derive(Serialize)]
struct VerifyEntry<'a> {
    c: &'a str,
    k: i64,
    status: Status,
    oracle: &'a Option<OracleOutcome>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ResolveInput {
    alpha: LaurentPoly,
}

fn read_text(common: &Common) -> Result<(String, String), Failure> {
    match &common.input {
        Some(p) => Ok((p.display().to_string(), pipeline::read_input(p)?)),
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Input(format!("<stdin>: {e}")))?;
            Ok(("<stdin>".into(), s))
        }
    }
}

fn emit(common: &Common, text: &str) -> Result<(), Failure> {
    match &common.output {
        Some(p) => Ok(pipeline::write_output(p, text)?),
        None => {
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout().lock(), "{}", text.trim_end());
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn flags(common: &Common, force_oracle: Option<bool>) -> FileOptions {
    FileOptions {
        truncation: common.truncation,
        max_order: common.max_order,
        oracle: force_oracle.or(common.oracle.map(|s| matches!(s, Switch::On))),
        svg: common.svg.clone(),
    }
}

fn run_points(common: &Common, force_oracle: Option<bool>) -> Result<Document, Failure> {
    let (name, text) = read_text(common)?;
    let (file, opts) = pipeline::load_problem(&name, &text, &flags(common, force_oracle))?;
    Ok(pipeline::run_problem(&file, &opts)?)
}

fn per_point<'a, T: Serialize>(doc: &'a Document, f: impl Fn(&'a PointReport) -> T) -> String {
    to_json(&doc.points.iter().map(f).collect::<Vec<_>>())
}

fn set_cap(common: &Common) {
    cyclotomic::set_max_order(common.max_order.unwrap_or(cyclotomic::DEFAULT_MAX_ORDER));
}

fn run(cli: &Cli) -> Result<i32, Failure> {
    let common = &cli.common;
    match &cli.command {
        Command::Validate => {
            let doc = run_points(common, Some(false))?;
            emit(common, &per_point(&doc, |r| ValidateEntry { c: &r.c, k: r.k, branches: &r.validation }))?;
            Ok(EXIT_OK)
        }
        Command::Invariants => {
            let doc = run_points(common, Some(false))?;
            emit(
                common,
                &per_point(&doc, |r| InvariantsEntry {
                    c: &r.c,
                    k: r.k,
                    polygon: &r.polygon,
                    vertices: &r.vertices,
                    slopes: &r.slopes,
                    irregularity: &r.irregularity,
                    regular: r.regular,
                }),
            )?;
            Ok(EXIT_OK)
        }
        Command::Decompose => {
            let doc = run_points(common, Some(false))?;
            emit(common, &per_point(&doc, |r| DecomposeEntry { c: &r.c, k: r.k, decomposition: &r.decomposition }))?;
            Ok(EXIT_OK)
        }
        Command::Verify => {
            let doc = run_points(common, Some(true))?;
            emit(common, &per_point(&doc, |r| VerifyEntry { c: &r.c, k: r.k, status: r.status, oracle: &r.oracle }))?;
            Ok(doc.exit_code())
        }
        Command::Report => {
            let doc = run_points(common, None)?;
            emit(common, &to_json(&doc))?;
            Ok(doc.exit_code())
        }
        Command::Resolve { text } => {
            set_cap(common);
            let (name, input) = read_text(common)?;
            let r: ResolveInput = pipeline::parse_json(&name, &input)?;
            let tree = build_resolution(&r.alpha).map_err(|e| match e {
                ResolutionError::NotPolar => Failure::Input(format!("{name}: {e}")),
                e => Failure::Inconsistent(e.to_string()),
            })?;
            emit(common, &if *text { tree.to_text() } else { to_json(&tree) })?;
            Ok(EXIT_OK)
        }
        Command::Realize => {
            set_cap(common);
            let (name, input) = read_text(common)?;
            let spec: FormalModuleSpec = pipeline::parse_json(&name, &input)?;
            let branches = realize(&spec).map_err(|e| Failure::Input(format!("{name}: {e}")))?;
            emit(common, &to_json(&branches))?;
            Ok(EXIT_OK)
        }
        Command::Roundtrip => {
            set_cap(common);
            let (name, input) = read_text(common)?;
            let spec: FormalModuleSpec = pipeline::parse_json(&name, &input)?;
            let report = roundtrip_check(&spec).map_err(|e| Failure::Input(format!("{name}: {e}")))?;
            emit(common, &to_json(&report))?;
            Ok(if report.matches { EXIT_OK } else { EXIT_INCONSISTENT })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            EXIT_INPUT
        }
        Err(Failure::Inconsistent(msg)) => {
            eprintln!("error: {msg}");
            EXIT_INCONSISTENT
        }
    };
    ExitCode::from(code as u8)
}
