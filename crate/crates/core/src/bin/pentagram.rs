//! Command-line driver: deterministic generation, map application, orbit
//! iteration, the verification suite, and conserved-quantity reports.
//!
//! Exit codes: 0 = success / all checks pass, 1 = verification or runtime
//! failure, 2 = input error.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pentagram::error::Error;
use pentagram::integrability::conservation_report;
use pentagram::invariants::pentagram_map_invariants;
use pentagram::json::{FieldDoc, GenerateDoc, LiftedPolygonDoc, PolygonDoc};
use pentagram::linalg::Matrix;
use pentagram::polygon::{
    extract_invariants, extract_invariants_unnormalized, lift_and_normalize, reconstruct,
    InvariantField,
};
use pentagram::sample::Sampler;
use pentagram::scalar::ExactScalar;
use pentagram::suite::{run_suite, CheckResult, Pipeline, RunConfig};

#[derive(Parser)]
#[command(
    name = "pentagram",
    about = "Generalized pentagram map on twisted polygons: exact invariant dynamics and verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a nondegenerate invariant field and its reconstructed polygon
    Generate(ConfigArgs),
    /// Extract the invariant field of a polygon (lifted or twisted JSON)
    Invariants(InputArgs),
    /// Apply the pentagram map to an invariant field
    Map(InputArgs),
    /// Iterate the map, tracing the orbit to CSV
    Iterate(IterateArgs),
    /// Run the verification suite for one configuration
    Verify(ConfigArgs),
    /// Iterate and report conservation of the spectral invariants
    Conserved(ConfigArgs),
}

#[derive(Args)]
struct ConfigArgs {
    /// Ambient projective dimension
    #[arg(long = "n")]
    n: usize,
    /// Number of vertices
    #[arg(long = "N")]
    num_vertices: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "exact")]
    pipeline: PipelineArg,
    /// Orbit length for iteration-based checks
    #[arg(long = "iters", default_value_t = 20)]
    iterations: usize,
    /// Spectral parameter sample, as a rational "p/q" (repeatable)
    #[arg(long = "u")]
    u_samples: Vec<String>,
    /// Write the JSON output here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InputArgs {
    /// Input JSON document
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "exact")]
    pipeline: PipelineArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct IterateArgs {
    /// Input invariant-field JSON (exact pipeline)
    #[arg(long)]
    input: PathBuf,
    #[arg(long = "iters", default_value_t = 10)]
    iterations: usize,
    /// Write the orbit trace (columns: step,k,i,value) here
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write the final field here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum PipelineArg {
    Exact,
    Float,
}

impl From<PipelineArg> for Pipeline {
    fn from(p: PipelineArg) -> Pipeline {
        match p {
            PipelineArg::Exact => Pipeline::Exact,
            PipelineArg::Float => Pipeline::Float,
        }
    }
}

enum CliError {
    Input(String),
    Runtime(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Runtime(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_) | Error::NotCoprime { .. } | Error::ZeroParameter => {
                CliError::Input(e.to_string())
            }
            other => CliError::Runtime(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(format!("bad JSON: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Generate(args) => {
            let config = build_config(&args)?;
            config.validate()?;
            let mut sampler = Sampler::new(config.seed);
            let field = sampler.field(config.n, config.num_vertices)?;
            let polygon = reconstruct(&field, &Matrix::identity(config.n + 1))?;
            let doc = GenerateDoc {
                invariants: FieldDoc::from_field(&field),
                polygon: LiftedPolygonDoc::from_polygon(&polygon),
            };
            emit(&args.out, &pretty(&doc)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Invariants(args) => {
            let text = std::fs::read_to_string(&args.input)?;
            let json = match args.pipeline {
                PipelineArg::Exact => {
                    let doc: PolygonDoc<ExactScalar> = serde_json::from_str(&text)?;
                    let field = match doc {
                        PolygonDoc::Lifted(d) => extract_invariants(&d.into_polygon()?)?,
                        PolygonDoc::Twisted(d) => {
                            extract_invariants_unnormalized(&d.into_polygon()?)?
                        }
                    };
                    pretty(&FieldDoc::from_field(&field))?
                }
                PipelineArg::Float => {
                    let doc: PolygonDoc<f64> = serde_json::from_str(&text)?;
                    let field = match doc {
                        PolygonDoc::Lifted(d) => extract_invariants(&d.into_polygon()?)?,
                        PolygonDoc::Twisted(d) => {
                            extract_invariants(&lift_and_normalize(&d.into_polygon()?)?)?
                        }
                    };
                    pretty(&FieldDoc::from_field(&field))?
                }
            };
            emit(&args.out, &json)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Map(args) => {
            let text = std::fs::read_to_string(&args.input)?;
            let json = match args.pipeline {
                PipelineArg::Exact => {
                    let doc: FieldDoc<ExactScalar> = serde_json::from_str(&text)?;
                    let mapped = pentagram_map_invariants(&doc.into_field()?)?;
                    pretty(&FieldDoc::from_field(&mapped))?
                }
                PipelineArg::Float => {
                    let doc: FieldDoc<f64> = serde_json::from_str(&text)?;
                    let field = doc.into_field()?;
                    let lifted = reconstruct(&field, &Matrix::identity(field.dim() + 1))?;
                    let mapped = pentagram::geometry::pentagram_map_geometric(&lifted)?;
                    pretty(&FieldDoc::from_field(&extract_invariants(&mapped)?))?
                }
            };
            emit(&args.out, &json)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Iterate(args) => {
            let text = std::fs::read_to_string(&args.input)?;
            let doc: FieldDoc<ExactScalar> = serde_json::from_str(&text)?;
            let mut field = doc.into_field()?;
            let mut trace = String::from("step,k,i,value\n");
            append_trace(&mut trace, 0, &field);
            for step in 1..=args.iterations {
                field = pentagram_map_invariants(&field)?;
                append_trace(&mut trace, step, &field);
            }
            if let Some(csv) = &args.csv {
                std::fs::write(csv, trace)?;
            }
            emit(&args.out, &pretty(&FieldDoc::from_field(&field))?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(args) => {
            let config = build_config(&args)?;
            if !config.is_hexagon_case() {
                config.validate()?;
            }
            let report = run_suite(&config)?;
            for check in &report.checks {
                eprintln!(
                    "{}: {} (samples {}, max drift {:.3e})",
                    if check.pass { "pass" } else { "FAIL" },
                    check.check,
                    check.samples,
                    check.max_drift
                );
            }
            emit(&args.out, &pretty(&report)?)?;
            if report.pass {
                Ok(ExitCode::SUCCESS)
            } else {
                let first = report.first_failure().expect("some check failed");
                eprintln!("first failing check: {}", first.check);
                Ok(ExitCode::from(1))
            }
        }
        Command::Conserved(args) => {
            let config = build_config(&args)?;
            config.validate()?;
            let mut sampler = Sampler::new(config.seed);
            let field = sampler.field(config.n, config.num_vertices)?;
            let us = if config.u_samples.is_empty() {
                vec![
                    ExactScalar::from_ratio(1, 2),
                    ExactScalar::from_int(2),
                    ExactScalar::from_int(3),
                ]
            } else {
                config.u_samples.clone()
            };
            let rep = conservation_report(&field, config.iterations, &us)?;
            if let Some(step) = rep.aborted_at {
                eprintln!("orbit aborted on a degenerate field at step {step}");
            }
            let line = CheckResult {
                check: "spectral conservation".into(),
                n: config.n,
                num_vertices: config.num_vertices,
                samples: us.len(),
                max_drift: rep.max_drift,
                pass: rep.pass,
            };
            emit(&args.out, &pretty(&line)?)?;
            Ok(if rep.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn build_config(args: &ConfigArgs) -> Result<RunConfig, CliError> {
    let u_samples = args
        .u_samples
        .iter()
        .map(|s| {
            s.parse::<ExactScalar>()
                .map_err(|e| CliError::Input(format!("bad --u value {s:?}: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RunConfig {
        n: args.n,
        num_vertices: args.num_vertices,
        seed: args.seed,
        pipeline: args.pipeline.into(),
        iterations: args.iterations,
        u_samples,
    })
}

fn append_trace(trace: &mut String, step: usize, field: &InvariantField<ExactScalar>) {
    for (k, row) in field.rows().iter().enumerate() {
        for (idx, value) in row.iter().enumerate() {
            let _ = writeln!(trace, "{step},{k},{},{value}", idx + 1);
        }
    }
}

fn pretty<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}
