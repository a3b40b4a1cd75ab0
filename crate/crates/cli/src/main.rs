use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qdslow::config::load_config;
use qdslow::parallel::{with_threads, Execution};
use qdslow::scenario::{builtin_scenario, run_scenario, Scenario, BUILTIN_IDS, SCENARIO_VERSION};

mod output;

#[derive(Parser)]
#[command(name = "qdslow", about = "Slow-light scenarios for quantum-dot ensembles", disable_version_flag = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a builtin scenario or a config file.
    Run(RunArgs),
    /// Check a config file and print its resolved form.
    Validate { path: PathBuf },
    /// List builtin scenarios.
    List,
    /// Print version information.
    Version,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    scenario: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Worker threads; 1 runs sequentially.
    #[arg(long)]
    jobs: Option<usize>,
    /// Relative quadrature tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

const EXIT_FATAL: u8 = 1;
const EXIT_PARTIAL: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_FATAL } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Run(args) => match run(args) {
            Ok(code) => code,
            Err(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(EXIT_FATAL)
            }
        },
        Command::Validate { path } => match validate(&path) {
            Ok(()) => ExitCode::SUCCESS,
            Err(msg) => {
                eprintln!("error: {}: {msg}", path.display());
                ExitCode::from(EXIT_FATAL)
            }
        },
        Command::List => {
            let mut out = std::io::stdout().lock();
            for id in BUILTIN_IDS {
                let desc = builtin_scenario(id).map(|s| s.description).unwrap_or_default();
                if writeln!(out, "{id:<8} {desc}").is_err() {
                    break;
                }
            }
            ExitCode::SUCCESS
        }
        Command::Version => {
            let _ = writeln!(std::io::stdout(), "qdslow {} (scenario format {SCENARIO_VERSION})", env!("CARGO_PKG_VERSION"));
            ExitCode::SUCCESS
        }
    }
}

fn load(args: &RunArgs) -> Result<(Scenario, Option<serde_json::Value>), String> {
    match (&args.scenario, &args.config) {
        (Some(id), _) => builtin_scenario(id).map(|s| (s, None)).map_err(|e| e.to_string()),
        (None, Some(path)) => {
            let src = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            let c = load_config(&src).map_err(|e| format!("{}: {e}", path.display()))?;
            Ok((c.scenario, Some(c.input)))
        }
        (None, None) => Err("one of --scenario or --config is required".into()),
    }
}

fn run(args: RunArgs) -> Result<ExitCode, String> {
    let (mut scenario, input) = load(&args)?;
    if let Some(t) = args.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err("--tol must be positive".into());
        }
        scenario.quadrature.rel_tol = t;
    }
    if args.jobs == Some(0) {
        return Err("--jobs must be at least 1".into());
    }
    scenario.validate().map_err(|e| e.to_string())?;
    fs::create_dir_all(&args.out).map_err(|e| format!("{}: {e}", args.out.display()))?;
    let exec = if args.jobs == Some(1) { Execution::Sequential } else { Execution::Auto };
    let dataset = with_threads(args.jobs, || run_scenario(&scenario, exec))
        .and_then(|r| r)
        .map_err(|e| e.to_string())?;
    let run_info = serde_json::json!({
        "jobs": args.jobs,
        "tolerance": scenario.quadrature.rel_tol,
        "format": format!("{:?}", args.format).to_lowercase(),
    });
    let paths = output::write(&dataset, &args.out, input, run_info).map_err(|e| e.to_string())?;
    let failures = dataset.failures().count();
    for p in &paths {
        eprintln!("wrote {}", p.display());
    }
    if failures > 0 {
        eprintln!("{failures} of {} points failed; see the metadata file", dataset.rows.len());
        return Ok(ExitCode::from(EXIT_PARTIAL));
    }
    Ok(ExitCode::SUCCESS)
}

fn validate(path: &Path) -> Result<(), String> {
    let src = fs::read_to_string(path).map_err(|e| e.to_string())?;
    let c = load_config(&src).map_err(|e| e.to_string())?;
    let echo = serde_json::to_string_pretty(&c.scenario).map_err(|e| e.to_string())?;
    let _ = writeln!(std::io::stdout(), "{echo}");
    Ok(())
}
