//! Amplitude damping: when a weakly entangled input beats `|φ⁺>`.

use serde::{Deserialize, Serialize};

use crate::channels::{amplitude_damping, apply_on};
use crate::error::{contract, Result};
use crate::measures::{log_negativity, Bipartition};
use crate::states::{alpha_state, max_entangled, PureState};

use super::{IneqResult, EXACT_SLACK};

/// Width of the band around `α = (1−γ)/2` classified as the crossover.
pub const CROSSOVER_BAND: f64 = 1e-9;

fn damped_en(gamma: f64, psi: &PureState) -> Result<f64> {
    let out = apply_on(&amplitude_damping(gamma)?, &psi.density(), 1)?;
    log_negativity(&out, &Bipartition::new(&[0], &[1])?)
}

/// `E_n(Λ_ad[|α>])` with the channel on the second qubit.
pub fn en_damped_alpha(gamma: f64, alpha: f64) -> Result<f64> {
    damped_en(gamma, &alpha_state(alpha)?)
}

fn en_damped_bell(gamma: f64) -> Result<f64> {
    damped_en(gamma, &max_entangled(2)?)
}

/// Where `(γ, α)` sits relative to the line `α = (1−γ)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Region {
    Below,
    Crossover,
    Advantage,
}

impl Region {
    pub fn as_str(self) -> &'static str {
        match self {
            Region::Below => "below",
            Region::Crossover => "crossover",
            Region::Advantage => "advantage",
        }
    }
}

pub fn advantage_region(gamma: f64, alpha: f64) -> Region {
    let line = (1.0 - gamma) / 2.0;
    if (alpha - line).abs() <= CROSSOVER_BAND {
        Region::Crossover
    } else if alpha > line {
        Region::Advantage
    } else {
        Region::Below
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdvantageRow {
    pub alpha: f64,
    pub en_alpha: f64,
    pub en_bell: f64,
    /// `en_alpha − en_bell`.
    pub diff: f64,
    pub region: Region,
}

/// One row per α: the damped input's log-negativity against the damped `|φ⁺>`.
pub fn amplitude_damping_advantage(gamma: f64, alpha_grid: &[f64]) -> Result<Vec<AdvantageRow>> {
    let en_bell = en_damped_bell(gamma)?;
    alpha_grid
        .iter()
        .map(|&alpha| {
            let en_alpha = en_damped_alpha(gamma, alpha)?;
            Ok(AdvantageRow {
                alpha,
                en_alpha,
                en_bell,
                diff: en_alpha - en_bell,
                region: advantage_region(gamma, alpha),
            })
        })
        .collect()
}

/// `1/(γ/√(1−γ) + 2)`, the α maximising the damped log-negativity.
pub fn alpha_max(gamma: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&gamma) {
        return contract(format!("alpha_max needs 0 <= gamma < 1, got {gamma}"));
    }
    Ok(1.0 / (gamma / (1.0 - gamma).sqrt() + 2.0))
}

/// A weakly entangled input that still beats `|φ⁺>` through a damping channel.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Witness {
    pub alpha: f64,
    pub gamma: f64,
    /// `E_n(|α>)`, at most ε.
    pub en_state: f64,
    /// `E_n(Λ[|α>]) − E_n(Λ[φ⁺])`.
    pub advantage: f64,
    pub result: IneqResult,
}

/// Largest α below 1/2 with `E_n(|α>) ≤ ε` and a damping parameter strictly
/// inside the advantage interval `(1 − 2α, 1)`.
pub fn little_entanglement_witness(epsilon: f64) -> Result<Witness> {
    if !(epsilon > 0.0) {
        return contract(format!("epsilon must be positive, got {epsilon}"));
    }
    // E_n(|α>) increases on [0, 1/2]; bisect on the value actually reported
    let cut = Bipartition::new(&[0], &[1])?;
    let en = |a: f64| -> Result<f64> { log_negativity(&alpha_state(a)?.density(), &cut) };
    let (mut lo, mut hi) = (0.0_f64, 0.5_f64);
    if en(hi)? <= epsilon {
        lo = hi;
    } else {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if en(mid)? <= epsilon {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    // α = 1/2 makes the interval empty
    let alpha = lo.min(0.49);
    let gamma = ((1.0 - 2.0 * alpha) + 1.0) / 2.0;
    let psi = alpha_state(alpha)?;
    let en_state = log_negativity(&psi.density(), &cut)?;
    let lhs = damped_en(gamma, &psi)?;
    let rhs = en_damped_bell(gamma)?;
    Ok(Witness {
        alpha,
        gamma,
        en_state,
        advantage: lhs - rhs,
        result: IneqResult::new(lhs, rhs, EXACT_SLACK, Vec::new()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Closed form of the damped log-negativity.
    fn en_formula(gamma: f64, alpha: f64) -> f64 {
        let f = (alpha * alpha * gamma * gamma + 4.0 * alpha * (1.0 - alpha) * (1.0 - gamma)).sqrt()
            - alpha * gamma;
        (1.0 + f.max(0.0)).log2()
    }

    #[test]
    fn matrix_evaluation_matches_closed_form() {
        for &g in &[0.0, 0.2, 0.6, 0.95] {
            for &a in &[0.0, 0.1, 0.3, 0.5] {
                assert!((en_damped_alpha(g, a).unwrap() - en_formula(g, a)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn crossover_examples() {
        let g = 0.6;
        let rows = amplitude_damping_advantage(g, &[0.1, 0.2, 0.35, 0.4]).unwrap();
        assert_eq!(rows[0].region, Region::Below);
        assert!(rows[0].diff <= 0.0);
        assert_eq!(rows[1].region, Region::Crossover);
        assert!(rows[1].diff.abs() < 1e-9);
        assert_eq!(rows[2].region, Region::Advantage);
        assert!(rows[2].diff > 0.0);
        assert!(rows[3].diff > 0.0);
        let noiseless = amplitude_damping_advantage(0.0, &[0.1, 0.3, 0.5]).unwrap();
        assert!(noiseless[0].diff < 0.0 && noiseless[1].diff < 0.0);
        assert!(noiseless[2].diff.abs() < 1e-12);
    }

    #[test]
    fn alpha_max_examples() {
        assert_eq!(alpha_max(0.0).unwrap(), 0.5);
        let a = alpha_max(0.5).unwrap();
        assert!((a - 1.0 / (0.5 / 0.5_f64.sqrt() + 2.0)).abs() < 1e-15);
        assert!((a - 0.369398).abs() < 1e-6);
        assert!(alpha_max(0.9999).unwrap() < 0.01);
        assert!(alpha_max(1.0).is_err());
        // argmax oracle on a fine grid
        let best = (0..=50_000)
            .map(|k| k as f64 * 1e-5)
            .max_by(|x, y| en_formula(0.5, *x).total_cmp(&en_formula(0.5, *y)))
            .unwrap();
        assert!((best - a).abs() < 1e-4);
    }

    #[test]
    fn witness_examples() {
        let w = little_entanglement_witness(1.0).unwrap();
        assert!(w.alpha < 0.5);
        for eps in [0.1, 0.01] {
            let w = little_entanglement_witness(eps).unwrap();
            assert!(w.en_state > 0.0 && w.en_state <= eps);
            assert!(w.advantage > 0.0);
            assert!(1.0 - 2.0 * w.alpha < w.gamma && w.gamma < 1.0);
        }
        assert!(little_entanglement_witness(0.0).is_err());
    }
}
