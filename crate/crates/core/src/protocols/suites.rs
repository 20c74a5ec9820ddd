//! Seeded sweeps over the checkers, summarised as JSON-serialisable reports.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channels::{
    amplitude_damping, apply_on, compose, pauli_channel, random_channel, random_pauli, weyl_channel,
    weyl_unitaries, KrausChannel, MarkovFamily, MarkovKind, PauliSpec,
};
use crate::error::{Error, Result};
use crate::measures::{
    ep_distance, log_negativity, Bipartition, DiscordMeasure, EntanglementMeasure, OptimizerConfig,
};
use crate::qla::{schatten_norm, tensor, CMatrix, SystemShape};
use crate::states::{max_entangled, random_mixed, DensityMatrix, Ensemble, RandomSpec};

use super::{
    check_divisible_bound, check_main_inequality, check_markov_bound, check_markov_bound_reversed,
    check_noisy_bound, check_pauli_optimality, check_pure_input_bound, check_subadditive_bound,
    check_subadditive_bound_channel, pauli_corrections, teleport_through, DistributionScenario, IneqResult,
    SearchBudget,
};

const SEED_STEP: u64 = 0x9E37_79B9_7F4A_7C15;
const TELEPORT_TOL: f64 = 1e-10;
const NORM_TOL: f64 = 1e-10;
const SCALING_TOL: f64 = 1e-6;

/// A named sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// Discord bound on a single state.
    Main,
    /// Bound by the smaller of the initial and final discords.
    Noisy,
    /// Bound by the discord of an intermediate state.
    Divisible,
    /// Bound along a time grid of a semigroup.
    Markov,
    /// Maximally entangled inputs are optimal for Pauli channels.
    PauliOpt,
    /// Pauli-channel bound for subadditive measures.
    Subadditive,
    /// Bound by the discord of the best pure input.
    #[serde(rename = "thm10")]
    PureInput,
    /// Teleportation simulation of covariant channels.
    Teleport,
    /// Schatten norm factorisation and distance scaling.
    Schatten,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Main,
        Suite::Noisy,
        Suite::Divisible,
        Suite::Markov,
        Suite::PauliOpt,
        Suite::Subadditive,
        Suite::PureInput,
        Suite::Teleport,
        Suite::Schatten,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Main => "main",
            Suite::Noisy => "noisy",
            Suite::Divisible => "divisible",
            Suite::Markov => "markov",
            Suite::PauliOpt => "pauli-opt",
            Suite::Subadditive => "subadditive",
            Suite::PureInput => "thm10",
            Suite::Teleport => "teleport",
            Suite::Schatten => "schatten",
        }
    }

    pub fn default_trials(self) -> usize {
        match self {
            Suite::Main | Suite::Subadditive => 1000,
            Suite::Noisy | Suite::Divisible | Suite::Markov => 300,
            Suite::PauliOpt | Suite::Teleport => 200,
            Suite::PureInput => 10,
            Suite::Schatten => 100,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Contract(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Overrides [`Suite::default_trials`].
    pub trials: Option<usize>,
    /// Markov suite only: add a scenario whose evolution runs backwards in
    /// time and record the violation it should produce.
    pub reversed_injection: bool,
    pub cfg: OptimizerConfig,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0,
            trials: None,
            reversed_injection: false,
            cfg: OptimizerConfig::default(),
        }
    }
}

/// One failing (or, for injected witnesses, expected) comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub trial: usize,
    pub seed: u64,
    pub case: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

/// Suite summary. `worst_slack` is the smallest `lhs − rhs + slack` seen;
/// it is negative exactly when some comparison failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub seed: u64,
    pub n_trials: usize,
    pub worst_slack: f64,
    pub failures: Vec<Failure>,
    #[serde(default)]
    pub notes: Vec<String>,
    #[serde(default)]
    pub expected_violations: Vec<Failure>,
}

impl CheckReport {
    fn new(suite: Suite, seed: u64, n_trials: usize) -> Self {
        CheckReport {
            check: suite.name().to_string(),
            seed,
            n_trials,
            worst_slack: f64::INFINITY,
            failures: Vec::new(),
            notes: Vec::new(),
            expected_violations: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Records `lhs ≥ rhs − slack`.
    fn record(&mut self, trial: usize, seed: u64, case: &str, lhs: f64, rhs: f64, slack: f64) {
        let m = lhs - rhs + slack;
        self.worst_slack = self.worst_slack.min(m);
        if !(m >= 0.0) {
            self.failures.push(Failure {
                trial,
                seed,
                case: case.to_string(),
                lhs,
                rhs,
                slack,
            });
        }
    }

    fn record_ineq(&mut self, trial: usize, seed: u64, case: &str, r: &IneqResult) {
        self.record(trial, seed, case, r.lhs, r.rhs, r.slack);
    }

    /// Records `value ≤ tol` as `tol ≥ value`.
    fn record_small(&mut self, trial: usize, seed: u64, case: &str, value: f64, tol: f64) {
        self.record(trial, seed, case, tol, value, 0.0);
    }
}

pub(crate) fn trial_seed(master: u64, trial: usize) -> u64 {
    master.wrapping_add((trial as u64).wrapping_mul(SEED_STEP))
}

fn random_state(dims: &[usize], seed: u64) -> Result<DensityMatrix> {
    random_mixed(&SystemShape::new(dims)?, RandomSpec::ginibre(seed))
}

fn random_spec(seed: u64) -> Result<PauliSpec> {
    random_pauli(RandomSpec::dirichlet(seed))
}

/// Runs `suite` and summarises every comparison.
pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<CheckReport> {
    let n = opts.trials.unwrap_or(suite.default_trials());
    let mut report = CheckReport::new(suite, opts.seed, n);
    let cfg = &opts.cfg;
    for trial in 0..n {
        let seed = trial_seed(opts.seed, trial);
        let spec = RandomSpec::ginibre(seed);
        match suite {
            Suite::Main => main_trial(&mut report, trial, seed, cfg)?,
            Suite::Noisy => {
                let rho = random_state(&[2, 2, 2], seed)?;
                let channel = if trial % 2 == 0 {
                    pauli_channel(&random_spec(spec.stream(1).seed)?)
                } else {
                    random_channel(2, 1 + trial % 4, spec.stream(1))?
                };
                let s = scenario(rho, channel)?;
                report.record_ineq(trial, seed, "noisy", &check_noisy_bound(&s, cfg)?);
            }
            Suite::Divisible => {
                let rho = random_state(&[2, 2, 2], seed)?;
                let (first, second) = random_split(trial, spec)?;
                let s = scenario(rho, compose(&second, &first)?)?;
                report.record_ineq(trial, seed, "divisible", &check_divisible_bound(&s, (&first, &second), cfg)?);
            }
            Suite::Markov => markov_trial(&mut report, trial, seed, cfg)?,
            Suite::PauliOpt => {
                let p = random_spec(seed)?;
                for m in [EntanglementMeasure::LogNegativity, EntanglementMeasure::Formation] {
                    let r = check_pauli_optimality(&p, m, 8, seed, cfg)?;
                    report.record_ineq(trial, seed, &format!("{m:?}"), &r);
                }
            }
            Suite::Subadditive => {
                let rho = random_state(&[2, 2, 2], seed)?;
                let p = random_spec(spec.stream(1).seed)?;
                let r = check_subadditive_bound(&p, &rho, EntanglementMeasure::LogNegativity, cfg)?;
                report.record_ineq(trial, seed, "pauli", &r);
            }
            Suite::PureInput => {
                let rho = random_state(&[2, 2, 2], seed)?;
                let channel = if trial % 2 == 0 {
                    amplitude_damping(0.3)?
                } else {
                    random_channel(2, 2, spec.stream(1))?
                };
                let budget = SearchBudget {
                    seed,
                    ..SearchBudget::default()
                };
                let r = check_pure_input_bound(
                    &channel,
                    &rho,
                    DiscordMeasure::RelativeEntropy,
                    EntanglementMeasure::RelativeEntropy,
                    &budget,
                    cfg,
                )?;
                if r.margin().abs() <= r.slack {
                    report
                        .notes
                        .push(format!("trial {trial}: searched maximum {:.6} within slack of {:.6}", r.lhs, r.rhs));
                }
                report.record_ineq(trial, seed, "pure-input", &r);
            }
            Suite::Teleport => teleport_trial(&mut report, trial, seed)?,
            Suite::Schatten => schatten_trial(&mut report, trial, seed, cfg)?,
        }
    }
    if suite == Suite::Subadditive && n > 0 {
        product_pauli_run(&mut report, opts.seed, cfg)?;
    }
    if suite == Suite::Markov && opts.reversed_injection {
        reversed_injection(&mut report, cfg)?;
    }
    if suite == Suite::Teleport && n > 0 {
        for k in 0..20 {
            weyl_trial(&mut report, k, trial_seed(opts.seed ^ 0x5745_594C, k))?;
        }
    }
    Ok(report)
}

fn scenario(rho: DensityMatrix, channel: KrausChannel) -> Result<DistributionScenario> {
    DistributionScenario::new(
        rho,
        channel,
        EntanglementMeasure::RelativeEntropy,
        DiscordMeasure::RelativeEntropy,
    )
}

fn main_trial(report: &mut CheckReport, trial: usize, seed: u64, cfg: &OptimizerConfig) -> Result<()> {
    let rho = random_state(&[2, 2, 2], seed)?;
    for (m, d) in [
        (EntanglementMeasure::RelativeEntropy, DiscordMeasure::RelativeEntropy),
        (EntanglementMeasure::Schatten2, DiscordMeasure::Schatten2),
    ] {
        report.record_ineq(trial, seed, &format!("{m:?}"), &check_main_inequality(&rho, m, d, cfg)?);
    }
    Ok(())
}

/// Even trials split amplitude damping by the composition rule, odd trials
/// compose two random Pauli channels.
fn random_split(trial: usize, spec: RandomSpec) -> Result<(KrausChannel, KrausChannel)> {
    if trial % 2 == 0 {
        let mut rng = spec.stream(1).rng();
        let g1: f64 = rng.random_range(0.0..1.0);
        let g2: f64 = rng.random_range(0.0..1.0);
        Ok((amplitude_damping(g1)?, amplitude_damping(g2)?))
    } else {
        Ok((
            pauli_channel(&random_spec(spec.stream(1).seed)?),
            pauli_channel(&random_spec(spec.stream(2).seed)?),
        ))
    }
}

fn time_grid(total: f64) -> Vec<f64> {
    (0..=10).map(|k| total * k as f64 / 10.0).collect()
}

fn markov_trial(report: &mut CheckReport, trial: usize, seed: u64, cfg: &OptimizerConfig) -> Result<()> {
    let rho = random_state(&[2, 2, 2], seed)?;
    let mut rng = RandomSpec::ginibre(seed).stream(1).rng();
    let kind = if trial % 2 == 0 {
        MarkovKind::AmplitudeDamping
    } else {
        MarkovKind::PhaseDamping
    };
    let fam = MarkovFamily::new(kind, rng.random_range(0.1..3.0))?;
    let r = check_markov_bound(
        &fam,
        &rho,
        1.0,
        &time_grid(1.0),
        EntanglementMeasure::RelativeEntropy,
        DiscordMeasure::RelativeEntropy,
        cfg,
    )?;
    let rhs = r.results[0].rhs;
    report.record(trial, seed, "markov", r.min_discord, rhs, r.results[0].slack);
    Ok(())
}

/// `φ⁺` on `AC` with `B` in `|0>`, under strong damping that returns to the
/// identity at the final time. All entanglement is distributed but the
/// discord in mid-evolution is nearly gone, so the bound must fail.
fn reversed_injection(report: &mut CheckReport, cfg: &OptimizerConfig) -> Result<()> {
    let bell = max_entangled(2)?.density();
    let zero = DensityMatrix::basis(SystemShape::new(&[2])?, &[0])?;
    let rho = bell.tensor(&zero)?.permute(&[0, 2, 1])?;
    let fam = MarkovFamily::new(MarkovKind::AmplitudeDamping, 5.0)?;
    let r = check_markov_bound_reversed(
        &fam,
        &rho,
        1.0,
        &time_grid(1.0),
        EntanglementMeasure::RelativeEntropy,
        DiscordMeasure::RelativeEntropy,
        cfg,
    )?;
    let slack = r.results[0].slack;
    let rhs = r.results[0].rhs;
    if r.holds {
        report.notes.push("reversed-time injection produced no violation".to_string());
        report.record(usize::MAX, 0, "reversed-injection", rhs - slack - 1.0, rhs, slack);
    } else {
        report.expected_violations.push(Failure {
            trial: usize::MAX,
            seed: 0,
            case: "reversed-injection".to_string(),
            lhs: r.min_discord,
            rhs,
            slack,
        });
    }
    Ok(())
}

/// Product of two random Pauli channels on a four-level `C`, shape (4, 2, 4).
fn product_pauli_run(report: &mut CheckReport, master: u64, cfg: &OptimizerConfig) -> Result<()> {
    let seed = trial_seed(master ^ 0x5052_4F44, 0);
    let spec = RandomSpec::ginibre(seed);
    let rho = random_state(&[4, 2, 4], seed)?;
    let channel = pauli_channel(&random_spec(spec.stream(1).seed)?)
        .tensor(&pauli_channel(&random_spec(spec.stream(2).seed)?))?;
    let r = check_subadditive_bound_channel(&channel, &rho, EntanglementMeasure::LogNegativity, cfg)?;
    report.record_ineq(usize::MAX, seed, "product-pauli-4x2x4", &r);
    Ok(())
}

fn teleport_trial(report: &mut CheckReport, trial: usize, seed: u64) -> Result<()> {
    let spec = RandomSpec::ginibre(seed);
    let channel = pauli_channel(&random_spec(spec.stream(1).seed)?);
    let rho = random_mixed(&SystemShape::new(&[2, 2])?, spec.stream(2))?;
    let resource = apply_on(&channel, &max_entangled(2)?.density(), 1)?;
    let tau = teleport_through(&resource, &rho, &pauli_corrections())?;
    let want = apply_on(&channel, &rho, 1)?;
    report.record_small(trial, seed, "pauli", 2.0 * tau.trace_distance(&want), TELEPORT_TOL);
    Ok(())
}

fn weyl_trial(report: &mut CheckReport, k: usize, seed: u64) -> Result<()> {
    let spec = RandomSpec::ginibre(seed);
    let mut rng = spec.stream(1).rng();
    let mut probs: Vec<f64> = (0..9).map(|_| rng.random_range(0.0..1.0)).collect();
    let s: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= s);
    let channel = weyl_channel(3, &probs)?;
    let rho = random_mixed(&SystemShape::new(&[2, 3])?, spec.stream(2))?;
    let resource = apply_on(&channel, &max_entangled(3)?.density(), 1)?;
    let tau = teleport_through(&resource, &rho, &weyl_unitaries(3))?;
    let want = apply_on(&channel, &rho, 1)?;
    report.record_small(k, seed, "weyl-3", 2.0 * tau.trace_distance(&want), TELEPORT_TOL);
    Ok(())
}

fn schatten_trial(report: &mut CheckReport, trial: usize, seed: u64, cfg: &OptimizerConfig) -> Result<()> {
    let mut rng = RandomSpec::ginibre(seed).rng();
    let d = 2 + trial % 3;
    let g = crate::states::ginibre_matrix(d, d, &mut rng);
    let m = (&g + &g.adjoint()).scale(0.5);
    let half_id = CMatrix::identity(2).scale(0.5);
    let big = tensor(&m, &half_id)?;
    for p in [1.0, 1.5, 2.0, 3.0] {
        let lhs = schatten_norm(&big, p)?;
        let rhs = 2f64.powf(1.0 / p - 1.0) * schatten_norm(&m, p)?;
        report.record_small(trial, seed, &format!("norm-p{p}"), (lhs - rhs).abs(), NORM_TOL);
    }

    // distance of ρ^{AB} ⊗ I/2 across A|BC against that of ρ^{AB}
    let cut = Bipartition::new(&[0], &[1])?;
    let rho = entangled_pair(seed)?;
    let mixed_c = DensityMatrix::maximally_mixed(SystemShape::new(&[2])?);
    let ext = rho.tensor(&mixed_c)?;
    let e_ab = ep_distance(&rho, &cut, 2, cfg)?.value;
    let e_abc = ep_distance(&ext, &Bipartition::new(&[0], &[1, 2])?, 2, cfg)?.value;
    report.record(trial, seed, "hs-scaling", std::f64::consts::FRAC_1_SQRT_2 * e_ab + SCALING_TOL, e_abc, 0.0);
    Ok(())
}

/// First entangled draw from a seeded stream of two-qubit Ginibre states.
fn entangled_pair(seed: u64) -> Result<DensityMatrix> {
    let shape = SystemShape::new(&[2, 2])?;
    let cut = Bipartition::new(&[0], &[1])?;
    let spec = RandomSpec::ginibre(seed).with_ensemble(Ensemble::GinibreMixed);
    for k in 1.. {
        let rho = random_mixed(&shape, spec.stream(k))?;
        if log_negativity(&rho, &cut)? > 1e-3 {
            return Ok(rho);
        }
    }
    unreachable!()
}
