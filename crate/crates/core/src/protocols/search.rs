//! Searching pure inputs for the best channel performance, and the checks
//! that compare arbitrary inputs against `|φ⁺>`.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channels::{apply_on, pauli_channel, KrausChannel, PauliSpec};
use crate::error::{contract, Error, Result};
use crate::measures::{
    discord_of, entanglement, Bipartition, DiscordMeasure, EntanglementMeasure, OptimizerConfig,
};
use crate::optim::nelder_mead;
use crate::qla::SystemShape;
use crate::states::{alpha_state, max_entangled, random_mixed, random_pure, DensityMatrix, PureState, RandomSpec};

use super::{distributed, slack_for, IneqResult, C};

/// How hard [`search_pure_inputs`] looks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Points of the α grid on `[0, 1/2]`.
    pub alpha_points: usize,
    /// Random `(α, rotation)` draws.
    pub random_states: usize,
    /// Best candidates refined by Nelder-Mead.
    pub refine_starts: usize,
    /// Iteration cap per refinement.
    pub refine_iters: usize,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            alpha_points: 11,
            random_states: 20,
            refine_starts: 3,
            refine_iters: 300,
            seed: 0,
        }
    }
}

/// `√(1−α)|0>|u0> + √α|1>|u1>` with `(u0, u1)` the columns of `R_z(a) R_y(b)`;
/// α = sin²(x₀) so the search is unconstrained.
fn parametrised(x: &[f64]) -> PureState {
    let alpha = x[0].sin().powi(2);
    let (c, s) = ((x[1] / 2.0).cos(), (x[1] / 2.0).sin());
    let e = Complex64::from_polar(1.0, x[2]);
    let u0 = [Complex64::new(c, 0.0), e * s];
    let u1 = [Complex64::new(-s, 0.0), e * c];
    let (p, q) = ((1.0 - alpha).sqrt(), alpha.sqrt());
    let vec = vec![u0[0] * p, u0[1] * p, u1[0] * q, u1[1] * q];
    PureState::normalized(vec, SystemShape::new(&[2, 2]).expect("static shape"))
        .expect("unit vector by construction")
}

/// Maximises `objective(Λ^C[|ψ><ψ|])` over two-qubit pure inputs `|ψ>^{AC}`.
///
/// Every pure input is a local unitary on `A` (irrelevant) times a rotation
/// on `C` applied to a Schmidt-form state, so the search runs over α and two
/// rotation angles.
pub fn search_pure_inputs(
    channel: &KrausChannel,
    mut objective: impl FnMut(&DensityMatrix) -> Result<f64>,
    budget: &SearchBudget,
) -> Result<(PureState, f64)> {
    if channel.dim() != 2 {
        return contract("pure-input search needs a qubit channel");
    }
    let mut error: Option<Error> = None;
    let mut eval = |x: &[f64]| -> f64 {
        let psi = parametrised(x);
        let out = apply_on(channel, &psi.density(), 1).and_then(|rho| objective(&rho));
        match out {
            Ok(v) => v,
            Err(e) => {
                error.get_or_insert(e);
                f64::NEG_INFINITY
            }
        }
    };

    let mut candidates: Vec<(f64, Vec<f64>)> = Vec::new();
    let n = budget.alpha_points.max(2);
    for k in 0..n {
        let alpha = 0.5 * k as f64 / (n - 1) as f64;
        let x = vec![alpha.sqrt().asin(), 0.0, 0.0];
        candidates.push((eval(&x), x));
    }
    let mut rng = RandomSpec::haar(budget.seed).rng();
    for _ in 0..budget.random_states {
        let x = vec![
            rng.random_range(0.0..std::f64::consts::FRAC_PI_2),
            rng.random_range(0.0..std::f64::consts::PI),
            rng.random_range(0.0..2.0 * std::f64::consts::PI),
        ];
        candidates.push((eval(&x), x));
    }
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = candidates[0].clone();
    for (_, x0) in candidates.iter().take(budget.refine_starts) {
        let r = nelder_mead(|x| -eval(x), x0, &[0.1, 0.2, 0.2], 1e-7, 1e-12, budget.refine_iters);
        if -r.value > best.0 {
            best = (-r.value, r.x);
        }
    }
    if let Some(e) = error {
        return Err(e);
    }
    Ok((parametrised(&best.1), best.0))
}

/// Best pure input for `measure` across `A|C` after the channel.
pub fn optimal_input_search(
    channel: &KrausChannel,
    measure: EntanglementMeasure,
    budget: &SearchBudget,
    cfg: &OptimizerConfig,
) -> Result<(PureState, f64)> {
    let cut = Bipartition::new(&[0], &[1])?;
    search_pure_inputs(channel, |rho| Ok(entanglement(measure, rho, &cut, cfg)?.value), budget)
}

/// `max_ψ Δ^{C|A}(Λ[ψ]) ≥ E^{A|BC}(ρ_f) − E^{AC|B}(ρ_i)`.
///
/// The maximum is only searched for, so `lhs` is a lower bound on the true
/// left side; callers should report rather than assert near-ties.
pub fn check_pure_input_bound(
    channel: &KrausChannel,
    rho_i: &DensityMatrix,
    discord: DiscordMeasure,
    measure: EntanglementMeasure,
    budget: &SearchBudget,
    cfg: &OptimizerConfig,
) -> Result<IneqResult> {
    super::check_tripartite(rho_i)?;
    if rho_i.shape().dim(C) != 2 || rho_i.shape().dim(0) < 2 {
        return contract("the pure-input bound needs a qubit C and d_A >= d_C");
    }
    let coarse = OptimizerConfig {
        grid_theta: 16,
        grid_phi: 8,
        ..*cfg
    };
    let (psi, _) = search_pure_inputs(
        channel,
        |rho| Ok(discord_of(discord, rho, 1, &[0], &coarse)?.value),
        budget,
    )?;
    let out = apply_on(channel, &psi.density(), 1)?;
    let lhs = discord_of(discord, &out, 1, &[0], cfg)?;
    let rho_f = apply_on(channel, rho_i, C)?;
    let d = distributed(measure, rho_i, &rho_f, cfg)?;
    Ok(IneqResult::new(
        lhs.value,
        d.gain(),
        slack_for(&[measure], &[discord]),
        super::collect_reports(&[&lhs, &d.final_, &d.initial]),
    ))
}

/// `E(Λ_p[φ⁺]) ≥ E(Λ_p[ρ])` for sampled two-qubit inputs: `trials` random
/// mixed and pure states (half each) plus a 21-point α grid. `rhs` is the
/// largest sampled value.
pub fn check_pauli_optimality(
    spec: &PauliSpec,
    measure: EntanglementMeasure,
    trials: usize,
    seed: u64,
    cfg: &OptimizerConfig,
) -> Result<IneqResult> {
    let ch = pauli_channel(spec);
    let cut = Bipartition::new(&[0], &[1])?;
    let shape = SystemShape::new(&[2, 2])?;
    let value = |rho: &DensityMatrix| -> Result<f64> {
        Ok(entanglement(measure, &apply_on(&ch, rho, 1)?, &cut, cfg)?.value)
    };
    let lhs = value(&max_entangled(2)?.density())?;
    let mut rhs = f64::NEG_INFINITY;
    for k in 0..=20 {
        rhs = rhs.max(value(&alpha_state(k as f64 / 40.0)?.density())?);
    }
    let master = RandomSpec::ginibre(seed);
    for t in 0..trials {
        let s = master.stream(t as u64);
        let rho = if t % 2 == 0 {
            random_mixed(&shape, s)?
        } else {
            random_pure(&shape, s.with_ensemble(crate::states::Ensemble::HaarPure))?.density()
        };
        rhs = rhs.max(value(&rho)?);
    }
    Ok(IneqResult::new(lhs, rhs, slack_for(&[measure], &[]), Vec::new()))
}

/// [`check_subadditive_bound_channel`] for a single-qubit Pauli channel.
pub fn check_subadditive_bound(
    spec: &PauliSpec,
    rho_i: &DensityMatrix,
    measure: EntanglementMeasure,
    cfg: &OptimizerConfig,
) -> Result<IneqResult> {
    check_subadditive_bound_channel(&pauli_channel(spec), rho_i, measure, cfg)
}

/// `E^{A|C}(Λ[φ⁺]) ≥ E^{A|BC}(ρ_f) − E^{AC|B}(ρ_i)` with `φ⁺` of dimension
/// `d_C`. Intended for Pauli channels and their tensor products; `measure`
/// must be subadditive (log-negativity or relative entropy).
pub fn check_subadditive_bound_channel(
    channel: &KrausChannel,
    rho_i: &DensityMatrix,
    measure: EntanglementMeasure,
    cfg: &OptimizerConfig,
) -> Result<IneqResult> {
    if !matches!(
        measure,
        EntanglementMeasure::LogNegativity | EntanglementMeasure::RelativeEntropy
    ) {
        return contract(format!("{measure:?} is not a supported subadditive measure"));
    }
    super::check_tripartite(rho_i)?;
    let dc = rho_i.shape().dim(C);
    if channel.dim() != dc {
        return contract("channel dimension does not match C");
    }
    let bell = apply_on(channel, &max_entangled(dc)?.density(), 1)?;
    let lhs = entanglement(measure, &bell, &Bipartition::new(&[0], &[1])?, cfg)?;
    let rho_f = apply_on(channel, rho_i, C)?;
    let d = distributed(measure, rho_i, &rho_f, cfg)?;
    Ok(IneqResult::new(
        lhs.value,
        d.gain(),
        slack_for(&[measure], &[]),
        super::collect_reports(&[&lhs, &d.final_, &d.initial]),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{amplitude_damping, phase_damping};
    use crate::qla::binary_entropy;

    #[test]
    fn parametrisation_covers_the_alpha_family() {
        let psi = parametrised(&[0.3_f64.sqrt().asin(), 0.0, 0.0]);
        let want = alpha_state(0.3).unwrap();
        for (a, b) in psi.vec().iter().zip(want.vec()) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn pauli_channel_optimum_is_the_bell_value() {
        let spec = PauliSpec::new([0.7, 0.1, 0.05, 0.15]).unwrap();
        let ch = pauli_channel(&spec);
        let cfg = OptimizerConfig::default();
        let (_, v) = optimal_input_search(&ch, EntanglementMeasure::LogNegativity, &SearchBudget::default(), &cfg).unwrap();
        let bell = apply_on(&ch, &max_entangled(2).unwrap().density(), 1).unwrap();
        let want = entanglement(EntanglementMeasure::LogNegativity, &bell, &Bipartition::new(&[0], &[1]).unwrap(), &cfg)
            .unwrap()
            .value;
        assert!((v - want).abs() < 1e-6, "{v} vs {want}");
    }

    #[test]
    fn damping_optimum_matches_alpha_max() {
        let ch = amplitude_damping(0.5).unwrap();
        let cfg = OptimizerConfig::default();
        let (_, v) = optimal_input_search(&ch, EntanglementMeasure::LogNegativity, &SearchBudget::default(), &cfg).unwrap();
        let want = super::super::en_damped_alpha(0.5, super::super::alpha_max(0.5).unwrap()).unwrap();
        assert!((v - want).abs() < 1e-4, "{v} vs {want}");
        let (_, vf) = optimal_input_search(&ch, EntanglementMeasure::Formation, &SearchBudget::default(), &cfg).unwrap();
        let bell = apply_on(&ch, &max_entangled(2).unwrap().density(), 1).unwrap();
        let wf = crate::measures::eof(&bell, &Bipartition::new(&[0], &[1]).unwrap()).unwrap();
        assert!((vf - wf).abs() < 1e-6, "{vf} vs {wf}");
    }

    #[test]
    fn phase_damping_bound_is_tight() {
        let p = 0.2;
        let ch = phase_damping(p).unwrap();
        let shape = SystemShape::new(&[2, 2, 2]).unwrap();
        let rho = random_mixed(&shape, RandomSpec::ginibre(2)).unwrap();
        let r = check_pure_input_bound(
            &ch,
            &rho,
            DiscordMeasure::RelativeEntropy,
            EntanglementMeasure::RelativeEntropy,
            &SearchBudget::default(),
            &OptimizerConfig::default(),
        )
        .unwrap();
        assert!((r.lhs - (1.0 - binary_entropy(p))).abs() < 1e-4, "{r:?}");
        assert!(r.holds);
    }
}
