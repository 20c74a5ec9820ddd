use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use entdist_cli::{run, CliError, Command, RunConfig};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    /// Damped log-negativity at the optimal α against the Bell input.
    FigAd,
    /// Advantage regions over the (γ, α) grid.
    Crossover,
    /// Run a checker suite and print a JSON report.
    Check,
    /// Discord and relative entropy of a dephased Bell pair.
    PhaseDamping,
}

#[derive(Debug, Parser)]
#[command(name = "entdist", version, about = "Entanglement distribution experiments")]
struct Args {
    command: Cmd,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// start:stop:step
    #[arg(long)]
    gamma_grid: Option<String>,
    #[arg(long)]
    alpha_grid: Option<String>,
    #[arg(long)]
    p_grid: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
    /// main, noisy, divisible, markov, pauli-opt, subadditive, thm10, teleport, schatten
    #[arg(long)]
    suite: Option<String>,
    /// Markov suite: add the time-reversed witness scenario.
    #[arg(long)]
    reversed_injection: bool,
    /// key=value settings; explicit flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn build(args: &Args) -> Result<RunConfig, CliError> {
    let command = match args.command {
        Cmd::FigAd => Command::FigAd,
        Cmd::Crossover => Command::Crossover,
        Cmd::Check => Command::Check,
        Cmd::PhaseDamping => Command::PhaseDamping,
    };
    let mut cfg = RunConfig::new(command);
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        cfg.apply_file(&text)?;
    }
    let flags = [
        ("seed", args.seed.map(|s| s.to_string())),
        ("trials", args.trials.map(|n| n.to_string())),
        ("gamma-grid", args.gamma_grid.clone()),
        ("alpha-grid", args.alpha_grid.clone()),
        ("p-grid", args.p_grid.clone()),
        ("out", args.out.as_ref().map(|p| p.display().to_string())),
        ("format", args.format.clone()),
        ("suite", args.suite.clone()),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            cfg.set(k, &v)?;
        }
    }
    if args.reversed_injection {
        cfg.reversed_injection = true;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = build(&args).and_then(|cfg| {
        let out = run(&cfg)?;
        if cfg.out_path.is_none() {
            print!("{}", out.text);
        }
        Ok(out.passed)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("entdist: checks failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("entdist: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
