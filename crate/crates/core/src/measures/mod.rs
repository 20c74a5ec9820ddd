//! Entanglement and discord quantifiers.
//!
//! Exact quantifiers (concurrence, entanglement of formation, negativity) return
//! plain numbers. Variational ones return an [`OptimizerReport`] whose `value`
//! is always attained by an explicit feasible point, so it is an upper bound on
//! the true minimum, and whose `residual` bounds the remaining gap where a
//! certificate is available.

mod barrier;
mod discord;
mod exact;
mod projection;

use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};
use crate::qla::{partial_trace, CMatrix, SystemShape};
use crate::states::DensityMatrix;

pub use discord::{discord, measured_state, MeasurementBloch};
pub use exact::{
    concurrence, concurrence_pure, entropy_of_entanglement, eof, eof_from_concurrence,
    log_negativity, negativity, trace_norm_pt,
};
pub use projection::ep_distance;

pub use barrier::ree_ppt;

/// A split `X|Y` of subsystem indices. Subsystems in neither group are traced out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bipartition {
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Bipartition {
    pub fn new(left: &[usize], right: &[usize]) -> Result<Self> {
        if left.is_empty() || right.is_empty() {
            return contract("both sides of a bipartition must be non-empty");
        }
        let mut all: Vec<usize> = left.iter().chain(right).copied().collect();
        all.sort_unstable();
        if all.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Index(format!("bipartition {left:?}|{right:?} overlaps")));
        }
        Ok(Bipartition {
            left: left.to_vec(),
            right: right.to_vec(),
        })
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    /// `Y|X`.
    pub fn swapped(&self) -> Self {
        Bipartition {
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }
}

/// Reduced state on the cut, left group first, as a two-party operator.
#[derive(Debug, Clone)]
pub(crate) struct BipartiteView {
    pub mat: CMatrix,
    pub dl: usize,
    pub dr: usize,
}

impl BipartiteView {
    pub fn new(rho: &DensityMatrix, cut: &Bipartition) -> Result<Self> {
        let shape = rho.shape();
        let keep: Vec<usize> = cut.left.iter().chain(&cut.right).copied().collect();
        shape.check_indices(&keep)?;
        let mat = partial_trace(rho.mat(), shape, &keep)?;
        Ok(BipartiteView {
            mat,
            dl: shape.dim_of(&cut.left),
            dr: shape.dim_of(&cut.right),
        })
    }

    pub fn dim(&self) -> usize {
        self.dl * self.dr
    }

    pub fn shape(&self) -> SystemShape {
        SystemShape::new(&[self.dl, self.dr]).expect("both sides have dimension >= 2")
    }

    /// Partial transpose on the right factor.
    pub fn gamma(&self, x: &CMatrix) -> CMatrix {
        pt_right(x, self.dl, self.dr)
    }
}

/// `X^Γ` with the transpose on the second factor of a `(dl, dr)` split.
pub(crate) fn pt_right(x: &CMatrix, dl: usize, dr: usize) -> CMatrix {
    let n = dl * dr;
    CMatrix::from_fn(n, n, |r, c| {
        let (a, b) = (r / dr, r % dr);
        let (p, q) = (c / dr, c % dr);
        x.get(a * dr + q, p * dr + b)
    })
}

/// Which algorithm produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Closed form; no optimisation.
    Exact,
    /// Input already feasible, minimum is zero.
    Feasible,
    /// Log-barrier Newton over the PSD and PPT cones.
    BarrierNewton,
    /// Dykstra alternating projections with a feasibility fix-up.
    Dykstra,
    /// Projected subgradient descent.
    Subgradient,
    /// Bloch-sphere grid followed by Nelder-Mead.
    GridSimplex,
}

/// Value and convergence certificate of a variational quantifier.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimizerReport {
    /// Attained objective; an upper bound on the true minimum.
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Gap bound or stationarity proxy, in the units of `value`.
    pub residual: f64,
    pub method: Method,
    /// Feasible state attaining `value` (state-distance measures).
    #[serde(skip)]
    pub closest: Option<CMatrix>,
    /// Optimal measurement basis (discord).
    pub basis: Option<MeasurementBloch>,
}

impl OptimizerReport {
    pub(crate) fn exact(value: f64, method: Method, closest: Option<CMatrix>) -> Self {
        OptimizerReport {
            value,
            iterations: 0,
            converged: true,
            residual: 0.0,
            method,
            closest,
            basis: None,
        }
    }
}

/// Optimiser budgets. Defaults match the documented values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub max_iters: usize,
    pub tol: f64,
    pub grid_theta: usize,
    pub grid_phi: usize,
    /// Seeds the randomised start when `random_start` is set.
    pub seed: u64,
    pub random_start: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            max_iters: 5000,
            tol: 1e-9,
            grid_theta: 64,
            grid_phi: 32,
            seed: 0,
            random_start: false,
        }
    }
}

/// Entanglement quantifier selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntanglementMeasure {
    LogNegativity,
    Negativity,
    /// Relative entropy distance to the PPT set.
    RelativeEntropy,
    /// Trace distance to the PPT set (approximate).
    Schatten1,
    /// Hilbert-Schmidt distance to the PPT set.
    Schatten2,
    Concurrence,
    Formation,
    /// Square of the entanglement of formation; not subadditive.
    FormationSquared,
}

impl EntanglementMeasure {
    /// Closed-form measures give exact values.
    pub fn is_exact(self) -> bool {
        !matches!(
            self,
            EntanglementMeasure::RelativeEntropy
                | EntanglementMeasure::Schatten1
                | EntanglementMeasure::Schatten2
        )
    }

    /// The discord quantifier built from the same distance, if any.
    pub fn matching_discord(self) -> Option<DiscordMeasure> {
        match self {
            EntanglementMeasure::RelativeEntropy => Some(DiscordMeasure::RelativeEntropy),
            EntanglementMeasure::Schatten1 => Some(DiscordMeasure::Schatten1),
            EntanglementMeasure::Schatten2 => Some(DiscordMeasure::Schatten2),
            _ => None,
        }
    }
}

/// Discord quantifier selector (distance between a state and its pinching).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiscordMeasure {
    RelativeEntropy,
    Schatten1,
    Schatten2,
}

/// Result of evaluating a selector.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Evaluation {
    pub value: f64,
    pub exact: bool,
    pub report: Option<OptimizerReport>,
}

impl Evaluation {
    fn exact(value: f64) -> Self {
        Evaluation {
            value,
            exact: true,
            report: None,
        }
    }

    fn from_report(report: OptimizerReport) -> Self {
        Evaluation {
            value: report.value,
            exact: false,
            report: Some(report),
        }
    }
}

/// Evaluates `measure` on `rho` across `cut`.
pub fn entanglement(
    measure: EntanglementMeasure,
    rho: &DensityMatrix,
    cut: &Bipartition,
    cfg: &OptimizerConfig,
) -> Result<Evaluation> {
    Ok(match measure {
        EntanglementMeasure::LogNegativity => Evaluation::exact(log_negativity(rho, cut)?),
        EntanglementMeasure::Negativity => Evaluation::exact(negativity(rho, cut)?),
        EntanglementMeasure::Concurrence => Evaluation::exact(concurrence(rho, cut)?),
        EntanglementMeasure::Formation => Evaluation::exact(eof(rho, cut)?),
        EntanglementMeasure::FormationSquared => Evaluation::exact(eof(rho, cut)?.powi(2)),
        EntanglementMeasure::RelativeEntropy => Evaluation::from_report(ree_ppt(rho, cut, cfg)?),
        EntanglementMeasure::Schatten1 => Evaluation::from_report(ep_distance(rho, cut, 1, cfg)?),
        EntanglementMeasure::Schatten2 => Evaluation::from_report(ep_distance(rho, cut, 2, cfg)?),
    })
}

/// Evaluates `measure` with subsystem `measured` measured, correlations to `rest`.
pub fn discord_of(
    measure: DiscordMeasure,
    rho: &DensityMatrix,
    measured: usize,
    rest: &[usize],
    cfg: &OptimizerConfig,
) -> Result<Evaluation> {
    Ok(Evaluation::from_report(discord(rho, measured, rest, measure, cfg)?))
}
