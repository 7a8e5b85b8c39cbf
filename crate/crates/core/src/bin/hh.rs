//! `hh`: command-line front end for bound checks, integration and campaigns.
//!
//! Exit codes: 0 holds, 1 usage or IO error, 2 violated, 3 inconclusive.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hh_simplex::bounds::{run_family, Family, IntegratorConfig, Status};
use hh_simplex::campaign::{run_campaign, write_report, CampaignConfig, OutputFormat};
use hh_simplex::functions::FunctionDescriptor;
use hh_simplex::quadrature::{integrate_mc, integrate_polynomial};
use hh_simplex::simplex::Simplex;
use hh_simplex::HhError;

#[derive(Parser)]
#[command(name = "hh", version, about = "Hermite-Hadamard bounds on simplices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Classical,
    Wright,
    StronglyConvex,
    StronglyWright,
    Operator,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Classical => Family::Classical,
            FamilyArg::Wright => Family::Wright,
            FamilyArg::StronglyConvex => Family::StronglyConvex,
            FamilyArg::StronglyWright => Family::StronglyWright,
            FamilyArg::Operator => Family::Operator,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Exact,
    Mc,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one bound family for a simplex and a function.
    Bounds {
        /// Simplex JSON, inline or a file path.
        #[arg(long)]
        simplex: String,
        /// Function descriptor JSON, inline or a file path.
        #[arg(long)]
        function: String,
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a verification campaign.
    Verify {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate a function over a simplex.
    Integrate {
        #[arg(long)]
        simplex: String,
        #[arg(long)]
        function: String,
        #[arg(long, value_enum, default_value = "exact")]
        method: Method,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn env_seed() -> Result<Option<u64>, HhError> {
    match std::env::var("HH_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| HhError::InvalidParameter(format!("HH_SEED is not an integer: {v:?}"))),
        Err(_) => Ok(None),
    }
}

/// Reads JSON given inline (starting with `{`) or from a file.
fn read_json_arg(arg: &str) -> Result<String, HhError> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        Ok(fs::read_to_string(arg)?)
    }
}

fn load_inputs(simplex: &str, function: &str) -> Result<(Simplex, FunctionDescriptor), HhError> {
    let s: Simplex = serde_json::from_str(&read_json_arg(simplex)?)?;
    let f: FunctionDescriptor = serde_json::from_str(&read_json_arg(function)?)?;
    Ok((s, f))
}

fn run(cli: Cli) -> Result<u8, HhError> {
    match cli.command {
        Command::Bounds {
            simplex,
            function,
            family,
            samples,
            seed,
        } => {
            let (s, desc) = load_inputs(&simplex, &function)?;
            let f = desc.build()?;
            let config = IntegratorConfig {
                mc_samples: samples,
                seed: seed.or(env_seed()?).unwrap_or(0),
                prefer_exact: true,
            };
            let report = run_family(family.into(), &f, &s, &config)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            eprintln!(
                "{} bounds for {}: {:.6e} <= {:.6e} <= {:.6e} ({})",
                report.family,
                f.label(),
                report.lower,
                report.middle.value,
                report.upper,
                report.status
            );
            Ok(match report.status {
                Status::Holds => 0,
                Status::Violated => 2,
                Status::Inconclusive => 3,
            })
        }
        Command::Verify {
            config,
            seed,
            samples,
            format,
            out,
        } => {
            let mut cfg = match &config {
                Some(path) => CampaignConfig::from_json(&fs::read_to_string(path)?)?,
                None => CampaignConfig {
                    seed: env_seed()?.unwrap_or(0),
                    ..CampaignConfig::default()
                },
            };
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            if let Some(samples) = samples {
                cfg.mc_samples = samples;
            }
            if let Some(format) = format {
                cfg.format = match format {
                    FormatArg::Json => OutputFormat::Json,
                    FormatArg::Csv => OutputFormat::Csv,
                };
            }
            if let Some(out) = out {
                cfg.output_path = Some(out.to_string_lossy().into_owned());
            }
            let report = run_campaign(&cfg)?;
            match &cfg.output_path {
                Some(path) => write_report(&report, cfg.format, fs::File::create(path)?)?,
                None => write_report(&report, cfg.format, std::io::stdout().lock())?,
            }
            eprintln!("{}", report.summary());
            Ok(report.exit_code() as u8)
        }
        Command::Integrate {
            simplex,
            function,
            method,
            samples,
            seed,
        } => {
            let (s, desc) = load_inputs(&simplex, &function)?;
            let f = desc.build()?;
            if !f.accepts_dim(s.dim()) {
                return Err(HhError::DimensionMismatch {
                    expected: s.dim(),
                    got: f.dim().unwrap_or(0),
                });
            }
            let estimate = match method {
                Method::Exact => {
                    let p = f.polynomial_form(s.dim()).ok_or(HhError::NoPolynomialForm)?;
                    integrate_polynomial(&s, &p)?
                }
                Method::Mc => integrate_mc(&s, |x| f.eval(x), samples, seed.or(env_seed()?).unwrap_or(0))?,
            };
            println!("{}", serde_json::to_string_pretty(&estimate)?);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
