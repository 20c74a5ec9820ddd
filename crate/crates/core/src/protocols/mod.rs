//! Distribution scenarios, the teleportation simulation of covariant channels,
//! optimal-input search and the inequality checkers.
//!
//! Tripartite states always use subsystem order `(A, B, C)`; the channel acts
//! on `C`, which Alice sends to Bob.

mod damping;
mod search;
mod suites;
mod teleport;

use serde::{Deserialize, Serialize};

use crate::channels::{apply_on, channels_equal, compose, markov_snapshot, KrausChannel, MarkovFamily};
use crate::error::{contract, Result};
use crate::measures::{
    discord_of, entanglement, Bipartition, DiscordMeasure, EntanglementMeasure, Evaluation,
    OptimizerConfig, OptimizerReport,
};
use crate::states::DensityMatrix;

pub use damping::{
    advantage_region, alpha_max, amplitude_damping_advantage, en_damped_alpha, little_entanglement_witness,
    AdvantageRow, Region, Witness,
};
pub use search::{
    check_pauli_optimality, check_pure_input_bound, check_subadditive_bound, check_subadditive_bound_channel,
    optimal_input_search, search_pure_inputs, SearchBudget,
};
pub use suites::{run_suite, CheckReport, Failure, Suite, SuiteOptions};
pub use teleport::{pauli_corrections, teleport_through};

/// Subsystem indices in `(A, B, C)` order.
pub const A: usize = 0;
pub const B: usize = 1;
pub const C: usize = 2;

/// Slack when both sides are closed-form.
pub const EXACT_SLACK: f64 = 1e-9;
/// Slack when a side comes from an optimiser.
pub const VARIATIONAL_SLACK: f64 = 1e-3;
/// Slack for checks involving the approximate trace-distance measure.
pub const TRACE_DISTANCE_SLACK: f64 = 1e-2;

/// The `A|BC` cut.
pub fn cut_a_bc() -> Bipartition {
    Bipartition::new(&[A], &[B, C]).expect("static cut")
}

/// The `AC|B` cut.
pub fn cut_ac_b() -> Bipartition {
    Bipartition::new(&[A, C], &[B]).expect("static cut")
}

/// Outcome of one inequality `lhs ≥ rhs − slack`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IneqResult {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
    pub reports: Vec<OptimizerReport>,
}

impl IneqResult {
    pub fn new(lhs: f64, rhs: f64, slack: f64, reports: Vec<OptimizerReport>) -> Self {
        IneqResult {
            lhs,
            rhs,
            slack,
            holds: lhs >= rhs - slack,
            reports,
        }
    }

    /// `lhs − rhs`; negative values are absorbed by the slack up to `−slack`.
    pub fn margin(&self) -> f64 {
        self.lhs - self.rhs
    }
}

/// Slack appropriate to a set of quantifiers.
pub fn slack_for(measures: &[EntanglementMeasure], discords: &[DiscordMeasure]) -> f64 {
    if measures.contains(&EntanglementMeasure::Schatten1) || discords.contains(&DiscordMeasure::Schatten1) {
        TRACE_DISTANCE_SLACK
    } else if measures.iter().all(|m| m.is_exact()) && discords.is_empty() {
        EXACT_SLACK
    } else {
        VARIATIONAL_SLACK
    }
}

fn collect_reports(evals: &[&Evaluation]) -> Vec<OptimizerReport> {
    evals.iter().filter_map(|e| e.report.clone()).collect()
}

fn check_tripartite(rho: &DensityMatrix) -> Result<()> {
    if rho.shape().len() != 3 {
        return contract(format!(
            "distribution scenarios need an (A, B, C) state, got shape {:?}",
            rho.shape().dims()
        ));
    }
    Ok(())
}

/// Initial state, channel on `C`, and the quantifiers to use.
#[derive(Debug, Clone)]
pub struct DistributionScenario {
    initial: DensityMatrix,
    channel: KrausChannel,
    pub measure: EntanglementMeasure,
    pub discord: DiscordMeasure,
}

impl DistributionScenario {
    pub fn new(
        initial: DensityMatrix,
        channel: KrausChannel,
        measure: EntanglementMeasure,
        discord: DiscordMeasure,
    ) -> Result<Self> {
        check_tripartite(&initial)?;
        if initial.shape().dim(C) != channel.dim() {
            return contract(format!(
                "channel on dimension {} for C of dimension {}",
                channel.dim(),
                initial.shape().dim(C)
            ));
        }
        Ok(DistributionScenario {
            initial,
            channel,
            measure,
            discord,
        })
    }

    pub fn initial(&self) -> &DensityMatrix {
        &self.initial
    }

    pub fn channel(&self) -> &KrausChannel {
        &self.channel
    }

    /// `Λ^C[ρ_i]`.
    pub fn final_state(&self) -> Result<DensityMatrix> {
        apply_on(&self.channel, &self.initial, C)
    }

    fn slack(&self) -> f64 {
        slack_for(&[self.measure], &[self.discord])
    }
}

/// Entanglement gained across the distribution step.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Distributed {
    /// `E^{AC|B}(ρ_i)`.
    pub initial: Evaluation,
    /// `E^{A|BC}(ρ_f)`.
    pub final_: Evaluation,
}

impl Distributed {
    pub fn gain(&self) -> f64 {
        self.final_.value - self.initial.value
    }
}

fn distributed(
    measure: EntanglementMeasure,
    rho_i: &DensityMatrix,
    rho_f: &DensityMatrix,
    cfg: &OptimizerConfig,
) -> Result<Distributed> {
    Ok(Distributed {
        initial: entanglement(measure, rho_i, &cut_ac_b(), cfg)?,
        final_: entanglement(measure, rho_f, &cut_a_bc(), cfg)?,
    })
}

/// `(E^{AC|B}(ρ_i), E^{A|BC}(ρ_f), difference)`.
pub fn distributed_entanglement(
    s: &DistributionScenario,
    cfg: &OptimizerConfig,
) -> Result<(f64, f64, f64)> {
    let d = distributed(s.measure, &s.initial, &s.final_state()?, cfg)?;
    Ok((d.initial.value, d.final_.value, d.gain()))
}

fn discord_c_ab(measure: DiscordMeasure, rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<Evaluation> {
    discord_of(measure, rho, C, &[A, B], cfg)
}

/// `Δ^{C|AB}(ρ) ≥ E^{A|BC}(ρ) − E^{AC|B}(ρ)`.
pub fn check_main_inequality(
    rho: &DensityMatrix,
    measure: EntanglementMeasure,
    discord: DiscordMeasure,
    cfg: &OptimizerConfig,
) -> Result<IneqResult> {
    check_tripartite(rho)?;
    let d = distributed(measure, rho, rho, cfg)?;
    let delta = discord_c_ab(discord, rho, cfg)?;
    Ok(IneqResult::new(
        delta.value,
        d.gain(),
        slack_for(&[measure], &[discord]),
        collect_reports(&[&delta, &d.final_, &d.initial]),
    ))
}

/// `min{Δ(ρ_i), Δ(ρ_f)} ≥ E^{A|BC}(ρ_f) − E^{AC|B}(ρ_i)`.
pub fn check_noisy_bound(s: &DistributionScenario, cfg: &OptimizerConfig) -> Result<IneqResult> {
    let rho_f = s.final_state()?;
    let d = distributed(s.measure, &s.initial, &rho_f, cfg)?;
    let di = discord_c_ab(s.discord, &s.initial, cfg)?;
    let df = discord_c_ab(s.discord, &rho_f, cfg)?;
    Ok(IneqResult::new(
        di.value.min(df.value),
        d.gain(),
        s.slack(),
        collect_reports(&[&di, &df, &d.final_, &d.initial]),
    ))
}

/// Bound by the discord of the intermediate state `Λ₁[ρ_i]`, where the
/// scenario's channel equals `split.1 ∘ split.0` (`split.0` acts first).
pub fn check_divisible_bound(
    s: &DistributionScenario,
    split: (&KrausChannel, &KrausChannel),
    cfg: &OptimizerConfig,
) -> Result<IneqResult> {
    let (first, second) = split;
    if !channels_equal(&compose(second, first)?, &s.channel, 1e-10) {
        return contract("split channels do not compose to the scenario's channel");
    }
    let mid = apply_on(first, &s.initial, C)?;
    let rho_f = apply_on(second, &mid, C)?;
    let d = distributed(s.measure, &s.initial, &rho_f, cfg)?;
    let dm = discord_c_ab(s.discord, &mid, cfg)?;
    Ok(IneqResult::new(
        dm.value,
        d.gain(),
        s.slack(),
        collect_reports(&[&dm, &d.final_, &d.initial]),
    ))
}

/// Per-time results of a Markovian check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MarkovResult {
    pub times: Vec<f64>,
    pub results: Vec<IneqResult>,
    /// `min_t Δ(ρ_t)`.
    pub min_discord: f64,
    /// Whether `min_t Δ(ρ_t) ≥ rhs − slack`.
    pub holds: bool,
}

fn markov_check(
    rho_i: &DensityMatrix,
    t_grid: &[f64],
    snapshot: impl Fn(f64) -> Result<KrausChannel>,
    final_time: f64,
    measure: EntanglementMeasure,
    discord: DiscordMeasure,
    cfg: &OptimizerConfig,
) -> Result<MarkovResult> {
    check_tripartite(rho_i)?;
    if rho_i.shape().dim(C) != 2 {
        return contract("Markovian families act on a qubit C");
    }
    let rho_f = apply_on(&snapshot(final_time)?, rho_i, C)?;
    let d = distributed(measure, rho_i, &rho_f, cfg)?;
    let slack = slack_for(&[measure], &[discord]);
    let mut results = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let rho_t = apply_on(&snapshot(t)?, rho_i, C)?;
        let dt = discord_c_ab(discord, &rho_t, cfg)?;
        results.push(IneqResult::new(
            dt.value,
            d.gain(),
            slack,
            collect_reports(&[&dt, &d.final_, &d.initial]),
        ));
    }
    let min_discord = results.iter().map(|r| r.lhs).fold(f64::INFINITY, f64::min);
    Ok(MarkovResult {
        times: t_grid.to_vec(),
        holds: min_discord >= d.gain() - slack,
        results,
        min_discord,
    })
}

fn check_grid(total: f64, t_grid: &[f64]) -> Result<()> {
    if !(total >= 0.0) || t_grid.is_empty() || t_grid.iter().any(|&t| !(0.0..=total).contains(&t)) {
        return contract(format!("time grid must be non-empty and lie in [0, {total}]"));
    }
    Ok(())
}

/// `Δ^{C|AB}(ρ_t) ≥ E^{A|BC}(ρ_T) − E^{AC|B}(ρ_0)` for each `t` in the grid.
pub fn check_markov_bound(
    fam: &MarkovFamily,
    rho_i: &DensityMatrix,
    total: f64,
    t_grid: &[f64],
    measure: EntanglementMeasure,
    discord: DiscordMeasure,
    cfg: &OptimizerConfig,
) -> Result<MarkovResult> {
    check_grid(total, t_grid)?;
    markov_check(rho_i, t_grid, |t| markov_snapshot(fam, 0.0, t), total, measure, discord, cfg)
}

/// Same check along an evolution that runs forward to `T/2` and then back:
/// the state at `t` is the family's map for `min(t, T − t)`. This evolution is
/// not divisible, so violations are possible and serve as a witness.
pub fn check_markov_bound_reversed(
    fam: &MarkovFamily,
    rho_i: &DensityMatrix,
    total: f64,
    t_grid: &[f64],
    measure: EntanglementMeasure,
    discord: DiscordMeasure,
    cfg: &OptimizerConfig,
) -> Result<MarkovResult> {
    check_grid(total, t_grid)?;
    markov_check(
        rho_i,
        t_grid,
        |t| markov_snapshot(fam, 0.0, t.min(total - t).max(0.0)),
        total,
        measure,
        discord,
        cfg,
    )
}
