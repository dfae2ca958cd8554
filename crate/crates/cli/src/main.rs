//! `itinerary-lab`: command-line front end.
//!
//! Exit codes: 0 on success, 2 for configuration or domain errors, 3 for
//! computational failures (no bracket, reliability collapse, failed checks).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use itinerary_lab::address_space::{critical_itineraries, discontinuities, omega_from_critical, OmegaMode};
use itinerary_lab::config::{parse_point, parse_system, AnySystem};
use itinerary_lab::emit;
use itinerary_lab::map_model::{MapSystem, Variant};
use itinerary_lab::par;
use itinerary_lab::projection::{Homeomorphism, DEFAULT_TOL, HOMEO_DEPTH};
use itinerary_lab::relation::ItineraryConley;
use itinerary_lab::symbolic::{itinerary, DEFAULT_EPS_AMB};
use itinerary_lab::symmetry::{solve_symmetric, SolveOptions};
use itinerary_lab::{Error, Real};

#[derive(Parser)]
#[command(name = "itinerary-lab", version, about = "Itinerary spaces of overlapping two-branch interval maps")]
struct Cli {
    /// System description (JSON).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Output format; each command documents the ones it supports.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Omega,
    OmegaPlus,
    Closure,
}

impl From<ModeArg> for OmegaMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Omega => OmegaMode::Omega,
            ModeArg::OmegaPlus => OmegaMode::OmegaPlus,
            ModeArg::Closure => OmegaMode::Closure,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    LeftClosed,
    RightClosed,
}

#[derive(Subcommand)]
enum Command {
    /// Check branch endpoints and the expansion bound (JSON).
    Validate {
        #[arg(long, default_value_t = 10_000)]
        grid: usize,
    },
    /// Itinerary of one point (JSON).
    Itinerary {
        /// Point in [0, 1]; decimals and `p/q` are read exactly.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = 32)]
        length: usize,
        #[arg(long, value_enum, default_value = "left-closed")]
        variant: VariantArg,
    },
    /// Depth-k prefix set of the address space (json, csv or svg).
    Omega(DepthArgs),
    /// Level-k interval addresses (csv).
    Addresses {
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Threshold at which the address space is flip-symmetric (JSON).
    SolveSymmetric {
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Restrict the search to [LO, HI].
        #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
        bracket: Option<Vec<String>>,
    },
    /// Samples of the flip homeomorphism h (csv or svg).
    Homeo {
        #[arg(long, default_value_t = 1001)]
        samples: usize,
        #[arg(long, default_value_t = HOMEO_DEPTH)]
        length: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Attractor/repeller report of the depth-k itinerary relation (JSON).
    Relation {
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
}

#[derive(Args)]
struct DepthArgs {
    #[arg(long, default_value_t = 4)]
    depth: usize,
    #[arg(long, value_enum, default_value = "closure")]
    mode: ModeArg,
}

fn load(cli: &Cli) -> Result<AnySystem, Error> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Error::Config("--config PATH is required".into()))?;
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_system(&text)
}

fn format_or(cli: &Cli, default: Format, allowed: &[Format]) -> Result<Format, Error> {
    let format = cli.format.unwrap_or(default);
    if allowed.contains(&format) {
        Ok(format)
    } else {
        Err(Error::Config("this command does not support the requested --format".into()))
    }
}

fn pretty(value: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&value).expect("JSON values serialize");
    s.push('\n');
    s
}

fn validate<T: Real>(sys: &MapSystem<T>, grid: usize) -> Result<(String, bool), Error> {
    let report = sys.validate(grid)?;
    let pass = report.pass;
    Ok((pretty(serde_json::to_value(report).expect("report serializes")), pass))
}

fn itinerary_cmd<T: Real>(sys: &MapSystem<T>, x: &str, n: usize, v: Variant) -> Result<String, Error> {
    let x: T = parse_point(x)?;
    let result = itinerary(sys, &x, n, v, DEFAULT_EPS_AMB)?;
    Ok(pretty(serde_json::to_value(result).expect("itinerary serializes")))
}

fn omega_cmd<T: Real>(sys: &MapSystem<T>, k: usize, mode: OmegaMode, format: Format) -> Result<String, Error> {
    let crit = critical_itineraries(sys, k + 1, DEFAULT_EPS_AMB);
    let set = omega_from_critical(&crit, k, mode)?;
    Ok(match format {
        Format::Json => pretty(serde_json::to_value(&set).expect("prefix set serializes")),
        Format::Csv => emit::cylinders_csv(&set.words),
        Format::Svg => emit::cylinders_svg(&set),
    })
}

fn solve_cmd<T: Real>(sys: &MapSystem<T>, tol: f64, bracket: Option<&[String]>) -> Result<String, Error> {
    let bracket = match bracket {
        Some([lo, hi]) => Some((parse_point::<T>(lo)?, parse_point::<T>(hi)?)),
        _ => None,
    };
    let opts = SolveOptions {
        rho_tol: tol,
        bracket,
        ..SolveOptions::default()
    };
    let sol = solve_symmetric(sys, &opts)?;
    Ok(pretty(json!({
        "rho_star": sol.rho_star.display(),
        "rho_star_f64": sol.rho_star.to_f64(),
        "bracket": [sol.bracket.0.display(), sol.bracket.1.display()],
        "iterations": sol.iterations,
        "plateau": sol.plateau,
        "certificate": sol.certificate,
    })))
}

fn relation_cmd(any: &AnySystem, k: usize) -> Result<String, Error> {
    if !(1..=16).contains(&k) {
        return Err(Error::Config(format!("--depth {k} must lie in 1..=16")));
    }
    let crit = match any {
        AnySystem::Rational(s) => critical_itineraries(s, k + 1, DEFAULT_EPS_AMB),
        AnySystem::Float(s) => critical_itineraries(s, k + 1, DEFAULT_EPS_AMB),
    };
    let analysis = ItineraryConley::new(&crit, k)?;
    let relation = &analysis.relation;
    let maximal: Vec<String> = relation
        .maximal_attractor()
        .iter()
        .map(|&i| relation.labels()[i].to_string())
        .collect();
    Ok(pretty(json!({
        "depth": k,
        "nodes": relation.len(),
        "edges": relation.edge_count(),
        "maximal_attractor": maximal,
        "shift_direction": analysis.report.labeled(&analysis.relation.transpose()),
    })))
}

fn homeo_cmd(sys: MapSystem<f64>, samples: usize, n: usize, tol: f64, format: Format) -> Result<String, Error> {
    if samples < 2 {
        return Err(Error::Config("--samples must be at least 2".into()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Config("--tol must be positive".into()));
    }
    let h = Homeomorphism::new(sys, n, tol);
    let xs: Vec<f64> = (0..samples).map(|i| i as f64 / (samples - 1) as f64).collect();
    let ys = h.eval_many(&xs)?;
    let points: Vec<(f64, f64)> = xs.into_iter().zip(ys).collect();
    Ok(match format {
        Format::Svg => emit::graph_svg(&points),
        _ => emit::graph_csv(&points),
    })
}

macro_rules! with_system {
    ($any:expr, $s:ident => $body:expr) => {
        match $any {
            AnySystem::Rational($s) => $body,
            AnySystem::Float($s) => $body,
        }
    };
}

fn run(cli: &Cli) -> Result<String, Error> {
    let any = load(cli)?;
    match &cli.command {
        Command::Validate { grid } => {
            format_or(cli, Format::Json, &[Format::Json])?;
            let (text, pass) = with_system!(&any, s => validate(s, *grid))?;
            if pass {
                Ok(text)
            } else {
                emit_output(cli, &text)?;
                Err(Error::Failed("validation failed".into()))
            }
        }
        Command::Itinerary { x, length, variant } => {
            format_or(cli, Format::Json, &[Format::Json])?;
            let v = match variant {
                VariantArg::LeftClosed => Variant::LeftClosed,
                VariantArg::RightClosed => Variant::RightClosed,
            };
            with_system!(&any, s => itinerary_cmd(s, x, *length, v))
        }
        Command::Omega(args) => {
            let format = format_or(cli, Format::Json, &[Format::Json, Format::Csv, Format::Svg])?;
            with_system!(&any, s => omega_cmd(s, args.depth, args.mode.into(), format))
        }
        Command::Addresses { depth } => {
            format_or(cli, Format::Csv, &[Format::Csv])?;
            if *depth == 0 {
                return Err(Error::Config("--depth must be at least 1".into()));
            }
            Ok(with_system!(&any, s => emit::discontinuities_csv(&discontinuities(s, *depth))))
        }
        Command::SolveSymmetric { tol, bracket } => {
            format_or(cli, Format::Json, &[Format::Json])?;
            with_system!(&any, s => solve_cmd(s, *tol, bracket.as_deref()))
        }
        Command::Homeo { samples, length, tol } => {
            let format = format_or(cli, Format::Csv, &[Format::Csv, Format::Svg])?;
            homeo_cmd(any.to_float(), *samples, *length, *tol, format)
        }
        Command::Relation { depth } => {
            format_or(cli, Format::Json, &[Format::Json])?;
            relation_cmd(&any, *depth)
        }
    }
}

fn emit_output(cli: &Cli, text: &str) -> Result<(), Error> {
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(Error::Io),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Ok(threads) = std::env::var("ITINERARY_LAB_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n > 0 => {
                par::init_threads(n);
            }
            _ => log::warn!("ignoring ITINERARY_LAB_THREADS={threads:?}"),
        }
    }
    let cli = Cli::parse();
    match run(&cli).and_then(|text| emit_output(&cli, &text)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
