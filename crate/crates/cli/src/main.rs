//! `gkbound` command-line tool.
//!
//! Exit codes: 0 on success, 1 on input or system errors, 2 when `analyze`
//! finds that the sub-`k` criterion `g̃(k) < g_min(k)` is not met.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use gkbound::bounds::{bound_report, g_tilde};
use gkbound::fock::g_min;
use gkbound::sim::{estimate_with_resamples, sample, DEFAULT_RESAMPLES};
use gkbound::{io, states, sweep, BoundReport, CorrelationReport, SplitSummary};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "gkbound",
    version,
    about = "Bounds on multi-photon content from k-th order correlations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum StateKind {
    Coherent,
    Thermal,
}

#[derive(Subcommand)]
enum Command {
    /// Correlations, P/Q split and bounds for a distribution file or a measured g.
    Analyze {
        /// Distribution file (CSV `n,p` or JSON array).
        #[arg(long, conflicts_with = "g", required_unless_present = "g")]
        input: Option<PathBuf>,
        /// Measured g(k) value instead of a distribution.
        #[arg(long)]
        g: Option<f64>,
        /// Vacuum fraction assumed with `--g`.
        #[arg(long, default_value_t = 0.0, requires = "g")]
        p0: f64,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// p_min and the ratio bound against R = g̃/g_min for several orders.
    Sweep {
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,5,100")]
        k: Vec<usize>,
        #[arg(long, default_value_t = 1000)]
        points: usize,
        /// First R value; defaults to 1/points.
        #[arg(long)]
        r_start: Option<f64>,
        /// Output CSV path; stdout if omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// g(k) along mixtures of two coherent states with mean ratio r and 1/r.
    Mixture {
        #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
        k: Vec<usize>,
        #[arg(long, default_value_t = 10.0)]
        r: f64,
        #[arg(long, default_value_t = 1001)]
        points: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Excitation threshold below which a coherent or thermal state meets the criterion.
    State {
        #[arg(value_enum)]
        kind: StateKind,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Simulated photon counting and post-selected estimation of g̃(k).
    Simulate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1_000_000)]
        events: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_RESAMPLES)]
        resamples: usize,
        /// Write the sampled counts, one per line.
        #[arg(long)]
        export_counts: Option<PathBuf>,
    },
}

#[derive(Serialize)]
#[serde(rename_all = "snake_case")]
enum Status {
    /// `g̃ < g_min`: the bounds below apply.
    SubK,
    /// `g = 0`: no weight at `n >= k`.
    ZeroCorrelation,
    CriterionNotMet,
}

#[derive(Serialize)]
struct AnalyzeReport {
    status: Status,
    criterion_met: bool,
    g_min: f64,
    correlation: Option<CorrelationReport>,
    split: Option<SplitSummary>,
    /// Absent when the criterion is not met.
    bounds: Option<BoundReport>,
}

#[derive(Serialize)]
struct StateReport {
    kind: &'static str,
    k: usize,
    /// `<n>` for coherent states, `λ` for thermal states.
    threshold: f64,
    mean_n: f64,
    g_tilde_at_threshold: f64,
    g_min: f64,
    large_k_limit: Option<f64>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Analyze {
            input,
            g,
            p0,
            k,
            format,
        } => analyze(input.as_deref(), g, p0, k, format),
        Command::Sweep {
            k,
            points,
            r_start,
            output,
        } => {
            if points < 10 {
                bail!("--points must be at least 10, got {points}");
            }
            let table = sweep::bounds_sweep(&k, points, r_start)?;
            emit(&table.to_csv(), output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Mixture {
            k,
            r,
            points,
            output,
        } => {
            let table = sweep::mixture_table(&k, r, points)?;
            emit(&table.to_csv(), output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::State { kind, k, format } => {
            let report = state_report(kind, k)?;
            print!("{}", render(&report, format)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate {
            input,
            k,
            events,
            seed,
            resamples,
            export_counts,
        } => {
            if events == 0 {
                bail!("--events must be at least 1");
            }
            let source = io::read_distribution(&input)?;
            let batch = sample(&source, events, seed);
            if let Some(path) = export_counts {
                fs::write(&path, batch.to_text())
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            let report = estimate_with_resamples(&batch, k, resamples).with_context(|| {
                format!(
                    "cannot estimate g̃({k}) from {events} events of {}",
                    input.display()
                )
            })?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn analyze(
    input: Option<&Path>,
    g: Option<f64>,
    p0: f64,
    k: usize,
    format: Format,
) -> Result<ExitCode> {
    if k < 2 {
        bail!("--k must be at least 2, got {k}");
    }
    let (correlation, split, g, p0) = match (input, g) {
        (Some(path), _) => {
            let s = io::read_distribution(path)?;
            let c = s.correlation_report(k)?;
            let (g, p0) = (c.g, c.p0);
            (Some(c), Some(s.split_at_k(k)?), g, p0)
        }
        (None, Some(g)) => {
            if !(g.is_finite() && g >= 0.0) {
                bail!("--g must be finite and non-negative, got {g}");
            }
            (None, None, g, p0)
        }
        (None, None) => bail!("one of --input or --g is required"),
    };

    let gm = g_min(k);
    let (status, bounds) = if g == 0.0 {
        (
            Status::ZeroCorrelation,
            Some(BoundReport::zero_correlation(k, p0)),
        )
    } else {
        if g_tilde(k, g, p0)? < gm {
            (Status::SubK, Some(bound_report(k, g, p0)?))
        } else {
            (Status::CriterionNotMet, None)
        }
    };
    let met = !matches!(status, Status::CriterionNotMet);
    let report = AnalyzeReport {
        status,
        criterion_met: met,
        g_min: gm,
        correlation,
        split,
        bounds,
    };
    print!("{}", render(&report, format)?);
    if met {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("criterion not met: g̃({k}) >= g_min({k}) = {gm}; bounds are inapplicable");
        Ok(ExitCode::from(2))
    }
}

fn state_report(kind: StateKind, k: usize) -> Result<StateReport> {
    let report = match kind {
        StateKind::Coherent => {
            let x = states::coherent_threshold(k)?;
            StateReport {
                kind: "coherent",
                k,
                threshold: x,
                mean_n: x,
                g_tilde_at_threshold: states::coherent(x)?.g_tilde_k(k)?,
                g_min: g_min(k),
                large_k_limit: Some(states::coherent_threshold_limit()),
            }
        }
        StateKind::Thermal => {
            let lambda = states::thermal_threshold(k)?;
            StateReport {
                kind: "thermal",
                k,
                threshold: lambda,
                mean_n: lambda / (1.0 - lambda),
                g_tilde_at_threshold: states::thermal(lambda)?.g_tilde_k(k)?,
                g_min: g_min(k),
                large_k_limit: None,
            }
        }
    };
    Ok(report)
}

/// JSON as-is, or CSV `field,value` rows with nested objects flattened to
/// dotted names. Absent values are left empty.
fn render<T: Serialize>(value: &T, format: Format) -> Result<String> {
    let json = serde_json::to_value(value)?;
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(&json)? + "\n",
        Format::Csv => {
            let mut out = String::from("field,value\n");
            flatten(&mut out, "", &json);
            out
        }
    })
}

fn flatten(out: &mut String, prefix: &str, v: &serde_json::Value) {
    use serde_json::Value;
    match v {
        Value::Object(map) => {
            for (key, inner) in map {
                let name = if prefix.is_empty() {
                    key.clone()
                } else {
                    format!("{prefix}.{key}")
                };
                flatten(out, &name, inner);
            }
        }
        Value::Null => {
            let _ = writeln!(out, "{prefix},");
        }
        Value::String(text) => {
            let _ = writeln!(out, "{prefix},{text}");
        }
        Value::Number(n) => match n.as_f64() {
            Some(f) if !n.is_i64() && !n.is_u64() => {
                let _ = writeln!(out, "{prefix},{f:.16e}");
            }
            _ => {
                let _ = writeln!(out, "{prefix},{n}");
            }
        },
        other => {
            let _ = writeln!(out, "{prefix},{other}");
        }
    }
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
