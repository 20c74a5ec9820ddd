//! Experiment runner behind the `entdist` binary: figure tables as CSV and
//! checker suites as JSON reports.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use entdist_core::channels::{apply_on, phase_damping};
use entdist_core::measures::{discord, ree_ppt, Bipartition, DiscordMeasure, OptimizerConfig};
use entdist_core::protocols::{
    alpha_max, amplitude_damping_advantage, en_damped_alpha, run_suite, CheckReport, Suite, SuiteOptions,
};
use entdist_core::states::max_entangled;
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] entdist_core::Error),
}

impl CliError {
    /// Process exit code: 2 for usage errors, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    FigAd,
    Crossover,
    Check,
    PhaseDamping,
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "fig-ad" => Command::FigAd,
            "crossover" => Command::Crossover,
            "check" => Command::Check,
            "phase-damping" => Command::PhaseDamping,
            _ => return usage(format!("unknown command {s:?}")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => usage(format!("unknown format {s:?}")),
        }
    }
}

/// Parses `start:stop:step` into an inclusive ascending grid.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').map(str::trim).collect();
    let nums: Vec<f64> = match parts
        .iter()
        .map(|p| p.parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
    {
        Ok(v) if v.len() == 3 => v,
        _ => return usage(format!("grid must be start:stop:step, got {s:?}")),
    };
    let (a, b, h) = (nums[0], nums[1], nums[2]);
    if !(a.is_finite() && b.is_finite() && h > 0.0 && b >= a) {
        return usage(format!("grid {s:?} needs start <= stop and step > 0"));
    }
    let n = ((b - a) / h + 1e-9).floor() as usize;
    if n > 1_000_000 {
        return usage(format!("grid {s:?} has too many points"));
    }
    Ok((0..=n).map(|k| a + k as f64 * h).collect())
}

/// Everything a run needs. Grids default to the documented figure grids.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub seed: u64,
    pub n_trials: Option<usize>,
    pub gamma_grid: Vec<f64>,
    pub alpha_grid: Vec<f64>,
    pub p_grid: Vec<f64>,
    pub out_path: Option<PathBuf>,
    pub format: Format,
    pub suite: Option<Suite>,
    pub reversed_injection: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            seed: 0,
            n_trials: None,
            gamma_grid: parse_grid("0:0.99:0.01").expect("static grid"),
            alpha_grid: parse_grid("0:0.5:0.005").expect("static grid"),
            p_grid: parse_grid("0:0.5:0.025").expect("static grid"),
            out_path: None,
            format: if command == Command::Check { Format::Json } else { Format::Csv },
            suite: None,
            reversed_injection: false,
        }
    }

    /// Applies one `key=value` setting; keys match the long flag names.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let bad = |what: &str| CliError::Usage(format!("bad {what} {value:?}"));
        match key {
            "seed" => self.seed = value.parse().map_err(|_| bad("seed"))?,
            "trials" => self.n_trials = Some(value.parse().map_err(|_| bad("trial count"))?),
            "gamma-grid" => self.gamma_grid = parse_grid(value)?,
            "alpha-grid" => self.alpha_grid = parse_grid(value)?,
            "p-grid" => self.p_grid = parse_grid(value)?,
            "out" => self.out_path = Some(PathBuf::from(value)),
            "format" => self.format = value.parse()?,
            "suite" => self.suite = Some(value.parse().map_err(|_| bad("suite"))?),
            "reversed-injection" => self.reversed_injection = value.parse().map_err(|_| bad("flag"))?,
            _ => return usage(format!("unknown setting {key:?}")),
        }
        Ok(())
    }

    /// Reads `key=value` lines; blank lines and `#` comments are skipped.
    pub fn apply_file(&mut self, text: &str) -> Result<(), CliError> {
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return usage(format!("config line {}: expected key=value", n + 1));
            };
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let check = |name: &str, g: &[f64], lo: f64, hi: f64, hi_open: bool| -> Result<(), CliError> {
            if g.is_empty() || g.windows(2).any(|w| w[0] > w[1]) {
                return usage(format!("{name} grid must be non-empty and ascending"));
            }
            let ok = |x: f64| x >= lo && if hi_open { x < hi } else { x <= hi + 1e-12 };
            if !g.iter().all(|&x| ok(x)) {
                let close = if hi_open { ")" } else { "]" };
                return usage(format!("{name} grid must lie in [{lo}, {hi}{close}"));
            }
            Ok(())
        };
        match self.command {
            Command::FigAd => check("gamma", &self.gamma_grid, 0.0, 1.0, true),
            Command::Crossover => {
                check("gamma", &self.gamma_grid, 0.0, 1.0, false)?;
                check("alpha", &self.alpha_grid, 0.0, 1.0, false)
            }
            Command::PhaseDamping => check("p", &self.p_grid, 0.0, 0.5, false),
            Command::Check => match self.suite {
                Some(_) => Ok(()),
                None => usage("check needs --suite"),
            },
        }
    }
}

/// Result of a run: the rendered output and whether all hard checks passed.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

/// Formats like C's `%.12g`.
pub fn fmt_g(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    const SIG: i32 = 12;
    let sci = format!("{:.*e}", (SIG - 1) as usize, x);
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= SIG {
        let mant = trim_zeros(mant);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mant}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (SIG - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Header plus rows, rendered as CSV or a JSON array of objects.
struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = self.header.join(",");
                out.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row
                        .iter()
                        .map(|v| match v {
                            Value::Number(n) => fmt_g(n.as_f64().unwrap_or(f64::NAN)),
                            Value::String(s) => s.clone(),
                            other => other.to_string(),
                        })
                        .collect();
                    let _ = writeln!(out, "{}", cells.join(","));
                }
                out
            }
            Format::Json => {
                let objs: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        Value::Object(
                            self.header
                                .iter()
                                .zip(row)
                                .map(|(k, v)| (k.to_string(), v.clone()))
                                .collect(),
                        )
                    })
                    .collect();
                let mut s = serde_json::to_string_pretty(&objs).expect("plain values");
                s.push('\n');
                s
            }
        }
    }
}

fn num(x: f64) -> Value {
    json!(x)
}

/// `gamma, alpha_max, en_alpha_max, en_bell, diff` over the γ grid.
pub fn cmd_fig_ad(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut t = Table::new(&["gamma", "alpha_max", "en_alpha_max", "en_bell", "diff"]);
    for &g in &cfg.gamma_grid {
        let a = alpha_max(g)?;
        let en_a = en_damped_alpha(g, a)?;
        let en_b = en_damped_alpha(g, 0.5)?;
        t.rows.push(vec![num(g), num(a), num(en_a), num(en_b), num(en_a - en_b)]);
    }
    Ok(Outcome {
        text: t.render(cfg.format),
        passed: true,
    })
}

/// `gamma, alpha, en_alpha, en_bell, region` over the γ × α grid.
pub fn cmd_crossover(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut t = Table::new(&["gamma", "alpha", "en_alpha", "en_bell", "region"]);
    for &g in &cfg.gamma_grid {
        for row in amplitude_damping_advantage(g, &cfg.alpha_grid)? {
            t.rows.push(vec![
                num(g),
                num(row.alpha),
                num(row.en_alpha),
                num(row.en_bell),
                json!(row.region.as_str()),
            ]);
        }
    }
    Ok(Outcome {
        text: t.render(cfg.format),
        passed: true,
    })
}

/// Dephased Bell pair: discord, relative entropy of entanglement, the
/// conditional-entropy lower bound and `delta_r − e_r`.
pub fn cmd_phase_damping(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let opt = OptimizerConfig::default();
    let cut = Bipartition::new(&[0], &[1])?;
    let bell = max_entangled(2)?.density();
    let mut t = Table::new(&["p", "delta_r", "e_r", "lower_bound", "gap"]);
    for &p in &cfg.p_grid {
        let rho = apply_on(&phase_damping(p)?, &bell, 1)?;
        let d = discord(&rho, 1, &[0], DiscordMeasure::RelativeEntropy, &opt)?.value;
        let e = ree_ppt(&rho, &cut, &opt)?.value;
        let lower = rho.reduce(&[1])?.entropy() - rho.entropy();
        t.rows.push(vec![num(p), num(d), num(e), num(lower), num(d - e)]);
    }
    Ok(Outcome {
        text: t.render(cfg.format),
        passed: true,
    })
}

/// Runs the selected suite; fails when any hard check fails.
pub fn cmd_check(cfg: &RunConfig) -> Result<(Outcome, CheckReport), CliError> {
    let Some(suite) = cfg.suite else {
        return usage("check needs --suite");
    };
    if cfg.format != Format::Json {
        return usage("check reports are JSON only");
    }
    let opts = SuiteOptions {
        seed: cfg.seed,
        trials: cfg.n_trials,
        reversed_injection: cfg.reversed_injection,
        cfg: OptimizerConfig {
            seed: cfg.seed,
            ..OptimizerConfig::default()
        },
    };
    let report = run_suite(suite, &opts)?;
    let mut text = serde_json::to_string_pretty(&report).expect("report serialises");
    text.push('\n');
    Ok((
        Outcome {
            text,
            passed: report.passed(),
        },
        report,
    ))
}

/// Validates `cfg`, runs its command and writes the output once at the end.
pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let out = match cfg.command {
        Command::FigAd => cmd_fig_ad(cfg)?,
        Command::Crossover => cmd_crossover(cfg)?,
        Command::PhaseDamping => cmd_phase_damping(cfg)?,
        Command::Check => cmd_check(cfg)?.0,
    };
    if let Some(path) = &cfg.out_path {
        write_output(path, &out.text)?;
    }
    Ok(out)
}

fn write_output(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)?;
    Ok(())
}
