//! `distal`: reproducible Möbius-correlation experiments for skew products
//! over circle rotations.

mod cache;
mod commands;
mod config;
mod error;
mod manifest;
mod table;

use clap::{Args, Parser, Subcommand, ValueEnum};
use commands::{DavenportMode, FiberKind, OrbitArgs};
use config::ExperimentConfig;
use distal_core::flows::PrecisionMode;
use distal_core::summation::with_threads;
use error::CliError;
use manifest::Run;
use serde_json::json;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "distal", version, about = "Möbius correlations along distal flows", long_about = None)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Flat `key = value` config file; flags override its entries
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Largest N sieved
    #[arg(long, global = true)]
    n_max: Option<String>,
    /// Comma-separated N checkpoints, e.g. 1e3,1e4,1e5
    #[arg(long, global = true)]
    grid: Option<String>,
    #[arg(long, global = true)]
    precision_bits: Option<String>,
    /// Stop the Liouville construction once q would exceed this
    #[arg(long, global = true)]
    q_cap: Option<String>,
    /// furstenberg, constant, zero or file:<path>
    #[arg(long, global = true)]
    coeff_rule: Option<String>,
    /// Coefficient bound C
    #[arg(long, global = true)]
    c_bound: Option<String>,
    #[arg(long, global = true)]
    threads: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
    #[arg(long, global = true)]
    cache_dir: Option<String>,
    /// Output file; a manifest is written next to it
    #[arg(long, global = true)]
    out: Option<String>,
    /// csv or json
    #[arg(long, global = true)]
    format: Option<String>,
    /// moebius or liouville
    #[arg(long, global = true)]
    kind: Option<String>,
    /// liouville, golden:<len> or file:<path>
    #[arg(long, global = true)]
    alpha: Option<String>,
    /// Discard any cached sieve table and rebuild it
    #[arg(long, global = true)]
    rebuild: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Double,
    Extended,
}

#[derive(Subcommand)]
enum Command {
    /// Sieve μ (or λ) up to n_max into the cache and report M(N)
    Sieve,
    /// Emit the partial quotients of α in CF text form
    Alpha {
        /// Golden ratio [1; 1, 1, …] of this length instead
        #[arg(long)]
        golden: Option<usize>,
    },
    /// Convergents and errors δ_k of α
    Cf {
        /// Print this many certified decimal digits of α instead
        #[arg(long)]
        value: Option<usize>,
    },
    /// Orbit of the skew product (x, y) ↦ (x + α, y + h(x))
    Orbit {
        #[arg(long, default_value_t = 1000)]
        steps: u64,
        #[arg(long, default_value_t = 0.0)]
        x0: f64,
        #[arg(long, default_value_t = 0.0)]
        y0: f64,
        #[arg(long, value_enum, default_value_t = Mode::Extended)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = FiberKind::Cocycle)]
        fiber: FiberKind,
        /// Truncate h to 1 ≤ |k| ≤ this; defaults to the cutoff at the horizon
        #[arg(long)]
        truncation: Option<usize>,
        /// Birkhoff averages of e(m1·x + m2·y) on the grid instead of points
        #[arg(long, value_name = "M1,M2")]
        average: Option<String>,
    },
    /// Naive against telescoped Birkhoff sums of h
    Cocycle,
    /// S(N) = Σ μ(n) e(y_n) along the orbit, with a decay fit
    Correlate,
    /// Σ μ(n) e(nθ)
    Davenport {
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<f64>,
        /// Maximum over θ = j/G
        #[arg(long, value_name = "G")]
        sup: Option<u64>,
        /// Combined frequency l1:θ1,l2:θ2,…
        #[arg(long)]
        multi: Option<String>,
        /// This many seeded random θ
        #[arg(long, value_name = "COUNT")]
        random: Option<usize>,
    },
    /// Fourier coefficients of e(2c₁cos 2πx) with the Bessel oracle
    Phi {
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        c1: f64,
        #[arg(long, default_value_t = 50)]
        l_max: i64,
        #[arg(long, default_value_t = distal_core::correlation::DEFAULT_NODES)]
        nodes: usize,
    },
    /// Fit |S(N)| ≈ scale·N/(ln N)^A to a series CSV
    Fit {
        #[arg(long)]
        input: PathBuf,
    },
    /// Recheck every checksum listed in a manifest
    Verify {
        #[arg(long)]
        manifest: PathBuf,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Sieve => "sieve",
            Command::Alpha { .. } => "alpha",
            Command::Cf { .. } => "cf",
            Command::Orbit { .. } => "orbit",
            Command::Cocycle => "cocycle",
            Command::Correlate => "correlate",
            Command::Davenport { .. } => "davenport",
            Command::Phi { .. } => "phi",
            Command::Fit { .. } => "fit",
            Command::Verify { .. } => "verify",
        }
    }
}

fn resolve(g: &Global) -> Result<ExperimentConfig, CliError> {
    let mut values = match &g.config {
        Some(p) => config::read_config_file(p)?,
        None => BTreeMap::new(),
    };
    let flags = [
        ("n_max", &g.n_max),
        ("grid", &g.grid),
        ("precision_bits", &g.precision_bits),
        ("q_cap", &g.q_cap),
        ("coeff_rule", &g.coeff_rule),
        ("c_bound", &g.c_bound),
        ("threads", &g.threads),
        ("seed", &g.seed),
        ("cache_dir", &g.cache_dir),
        ("out", &g.out),
        ("format", &g.format),
        ("kind", &g.kind),
        ("alpha", &g.alpha),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            values.insert(k.to_string(), v.clone());
        }
    }
    ExperimentConfig::resolve(&values)
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Command::Verify { manifest } = &cli.command {
        return commands::verify(manifest);
    }
    let cfg = resolve(&cli.global)?;
    let rebuild = cli.global.rebuild;
    let extra = match &cli.command {
        Command::Alpha { golden } => json!({ "golden": golden }),
        Command::Cf { value } => json!({ "value_digits": value }),
        Command::Orbit { steps, x0, y0, mode, fiber, truncation, average } => json!({
            "steps": steps,
            "x0": x0,
            "y0": y0,
            "mode": match mode { Mode::Double => "double", Mode::Extended => "extended" },
            "fiber": match fiber { FiberKind::Zero => "zero", FiberKind::Cocycle => "cocycle" },
            "truncation": truncation,
            "average": average,
        }),
        Command::Davenport { theta, sup, multi, random } => {
            json!({ "theta": theta, "sup": sup, "multi": multi, "random": random })
        }
        Command::Phi { c1, l_max, nodes } => json!({ "c1": c1, "l_max": l_max, "nodes": nodes }),
        Command::Fit { input } => json!({ "input": input }),
        _ => json!({}),
    };
    let mut r = Run::new(cli.command.name(), &cfg, extra);
    with_threads(cfg.threads, || -> Result<(), CliError> {
        match &cli.command {
            Command::Sieve => commands::sieve(&cfg, &mut r, rebuild),
            Command::Alpha { golden } => commands::alpha(&cfg, &mut r, *golden),
            Command::Cf { value } => commands::cf(&cfg, &mut r, *value),
            Command::Orbit { steps, x0, y0, mode, fiber, truncation, average } => {
                let args = OrbitArgs {
                    steps: *steps,
                    x0: *x0,
                    y0: *y0,
                    mode: match mode {
                        Mode::Double => PrecisionMode::Double,
                        Mode::Extended => PrecisionMode::Extended,
                    },
                    fiber: *fiber,
                    truncation: *truncation,
                    average: average.as_deref().map(commands::parse_observable).transpose()?,
                };
                commands::orbit(&cfg, &mut r, &args)
            }
            Command::Cocycle => commands::cocycle_cmd(&cfg, &mut r),
            Command::Correlate => commands::correlate(&cfg, &mut r, rebuild),
            Command::Davenport { theta, sup, multi, random } => {
                let chosen = [theta.is_some(), sup.is_some(), multi.is_some(), random.is_some()];
                if chosen.iter().filter(|&&b| b).count() > 1 {
                    return Err(CliError::Config("choose one of --theta, --sup, --multi, --random".into()));
                }
                let mode = match (theta, sup, multi, random) {
                    (_, Some(g), _, _) => DavenportMode::Sup(*g),
                    (_, _, Some(m), _) => DavenportMode::Multi(commands::parse_multi(m)?),
                    (_, _, _, Some(c)) => DavenportMode::Random(*c),
                    (t, ..) => DavenportMode::Theta(t.unwrap_or(0.0)),
                };
                commands::davenport(&cfg, &mut r, mode, rebuild)
            }
            Command::Phi { c1, l_max, nodes } => commands::phi(&cfg, &mut r, *c1, *l_max, *nodes),
            Command::Fit { input } => commands::fit(&cfg, &mut r, input),
            Command::Verify { .. } => unreachable!("handled above"),
        }
    })?;
    r.finish()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("distal: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
