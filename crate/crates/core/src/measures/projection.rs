//! Schatten-distance measures: distance from ρ to the PPT set.

use crate::error::{contract, Result};
use crate::qla::{herm_eig_unchecked, herm_eigvals_unchecked, CMatrix};
use crate::states::DensityMatrix;

use super::barrier::{hs_distance_barrier, is_ppt};
use super::{BipartiteView, Bipartition, Method, OptimizerConfig, OptimizerReport};

/// Subgradient iterations for the trace distance.
const SUBGRADIENT_ITERS: usize = 2000;
/// Dykstra sweeps used to re-project after each subgradient step.
const INNER_SWEEPS: usize = 10;
/// Stationarity threshold for the trace-distance estimate.
const SUBGRADIENT_TOL: f64 = 1e-2;

/// `min_σ ‖ρ − σ‖_p` over PPT states, `p ∈ {1, 2}`.
///
/// `p = 2` runs Dykstra's alternating projections and keeps the better of that
/// and a barrier-Newton polish; `p = 1` runs projected subgradient descent from
/// the `p = 2` minimiser and is only approximate.
pub fn ep_distance(
    rho: &DensityMatrix,
    cut: &Bipartition,
    p: u32,
    cfg: &OptimizerConfig,
) -> Result<OptimizerReport> {
    let view = BipartiteView::new(rho, cut)?;
    match p {
        2 => hs_distance(&view, cfg),
        1 => trace_distance(&view, cfg),
        _ => contract(format!("Schatten distance measure needs p in {{1, 2}}, got {p}")),
    }
}

/// Euclidean projection onto the probability simplex.
pub(crate) fn simplex_projection(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (j, &x) in u.iter().enumerate() {
        cum += x;
        let t = (cum - 1.0) / (j + 1) as f64;
        if x - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|x| (x - theta).max(0.0)).collect()
}

/// Nearest unit-trace PSD matrix in Frobenius norm.
fn project_states(x: &CMatrix) -> CMatrix {
    let e = herm_eig_unchecked(&x.hermitian_part());
    let p = simplex_projection(&e.eigenvalues);
    let n = p.len();
    let v = &e.eigenvectors;
    CMatrix::from_fn(n, n, |i, j| {
        (0..n).map(|k| v.get(i, k) * v.get(j, k).conj() * p[k]).sum()
    })
}

struct Dykstra<'a> {
    view: &'a BipartiteView,
    x: CMatrix,
    p: CMatrix,
    q: CMatrix,
    /// Last iterate from the state set.
    y: CMatrix,
}

impl<'a> Dykstra<'a> {
    fn new(view: &'a BipartiteView, start: CMatrix) -> Self {
        let d = view.dim();
        Dykstra {
            view,
            y: start.clone(),
            x: start,
            p: CMatrix::zeros(d, d),
            q: CMatrix::zeros(d, d),
        }
    }

    /// One sweep; returns the distance between the two sets' iterates.
    fn sweep(&mut self) -> f64 {
        let a = &self.x + &self.p;
        let y = project_states(&a);
        self.p = &a - &y;
        let b = &y + &self.q;
        let x = self.view.gamma(&project_states(&self.view.gamma(&b)));
        self.q = &b - &x;
        let gap = (&x - &y).frobenius();
        self.x = x;
        self.y = y;
        gap
    }
}

/// Mixes a state with `I/d` just enough to make its partial transpose PSD.
fn make_ppt(view: &BipartiteView, s: &CMatrix) -> CMatrix {
    let d = view.dim();
    let e = herm_eigvals_unchecked(&view.gamma(s))[0];
    if e >= 0.0 {
        return s.clone();
    }
    let t = -e / (1.0 / d as f64 - e);
    // slight overshoot so round-off cannot leave a negative eigenvalue
    let t = (t * (1.0 + 1e-12)).min(1.0);
    &s.scale(1.0 - t) + &CMatrix::identity(d).scale(t / d as f64)
}

fn hs_distance(view: &BipartiteView, cfg: &OptimizerConfig) -> Result<OptimizerReport> {
    if is_ppt(view) {
        return Ok(OptimizerReport::exact(0.0, Method::Feasible, Some(view.mat.clone())));
    }
    let mut dy = Dykstra::new(view, view.mat.clone());
    let mut iterations = 0;
    let mut gap = f64::INFINITY;
    let mut prev = dy.y.clone();
    while iterations < cfg.max_iters {
        gap = dy.sweep();
        iterations += 1;
        let moved = (&dy.y - &prev).frobenius();
        prev = dy.y.clone();
        if gap <= cfg.tol && moved <= cfg.tol {
            break;
        }
    }
    let sigma = make_ppt(view, &dy.y);
    let value = (&view.mat - &sigma).frobenius();
    let dykstra = OptimizerReport {
        value,
        iterations,
        converged: gap <= cfg.tol,
        residual: gap + (&sigma - &dy.y).frobenius(),
        method: Method::Dykstra,
        closest: Some(sigma),
        basis: None,
    };
    if dykstra.converged && dykstra.residual <= 1e-8 {
        return Ok(dykstra);
    }
    let polished = hs_distance_barrier(view, cfg)?;
    Ok(if polished.value < dykstra.value {
        OptimizerReport {
            iterations: polished.iterations + iterations,
            ..polished
        }
    } else {
        dykstra
    })
}

fn trace_norm(m: &CMatrix) -> f64 {
    herm_eigvals_unchecked(m).iter().map(|l| l.abs()).sum()
}

fn trace_distance(view: &BipartiteView, cfg: &OptimizerConfig) -> Result<OptimizerReport> {
    if is_ppt(view) {
        return Ok(OptimizerReport::exact(0.0, Method::Feasible, Some(view.mat.clone())));
    }
    let start = hs_distance(view, cfg)?;
    let mut sigma = start.closest.clone().expect("distance reports carry the minimiser");
    let mut best = trace_norm(&(&view.mat - &sigma));
    let mut best_sigma = sigma.clone();
    let step0 = 0.5 * best.max(1e-3) / (view.dim() as f64).sqrt();
    let mut best_at_half = best;
    for k in 1..=SUBGRADIENT_ITERS {
        let e = herm_eig_unchecked(&(&sigma - &view.mat));
        let g = e.map(|l| {
            if l > 0.0 {
                1.0
            } else if l < 0.0 {
                -1.0
            } else {
                0.0
            }
        });
        let eta = step0 / (k as f64).sqrt();
        let moved = &sigma - &g.scale(eta);
        let mut dy = Dykstra::new(view, moved);
        for _ in 0..INNER_SWEEPS {
            dy.sweep();
        }
        sigma = make_ppt(view, &dy.y);
        let v = trace_norm(&(&view.mat - &sigma));
        if v < best {
            best = v;
            best_sigma = sigma.clone();
        }
        if k == SUBGRADIENT_ITERS / 2 {
            best_at_half = best;
        }
    }
    let residual = best_at_half - best;
    Ok(OptimizerReport {
        value: best,
        iterations: SUBGRADIENT_ITERS,
        converged: residual <= SUBGRADIENT_TOL,
        residual,
        method: Method::Subgradient,
        closest: Some(best_sigma),
        basis: None,
    })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::qla::SystemShape;
    use crate::states::{max_entangled, random_mixed, random_separable, RandomSpec};

    fn cut01() -> Bipartition {
        Bipartition::new(&[0], &[1]).unwrap()
    }

    #[test]
    fn simplex_projection_examples() {
        assert_eq!(simplex_projection(&[0.2, 0.8]), vec![0.2, 0.8]);
        let p = simplex_projection(&[2.0, 0.0]);
        assert!((p[0] - 1.0).abs() < 1e-15 && p[1] == 0.0);
        let p = simplex_projection(&[0.5, 0.5, -0.5]);
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15 && p[2] == 0.0);
    }

    #[test]
    fn ppt_input_is_zero() {
        let a = SystemShape::new(&[2]).unwrap();
        let rho = random_separable(&a, &a, 3, RandomSpec::ginibre(4)).unwrap();
        for p in [1, 2] {
            assert_eq!(ep_distance(&rho, &cut01(), p, &OptimizerConfig::default()).unwrap().value, 0.0);
        }
        assert!(ep_distance(&rho, &cut01(), 3, &OptimizerConfig::default()).is_err());
    }

    #[test]
    fn bell_state_distance_is_stationary_and_restart_stable() {
        let phi = max_entangled(2).unwrap().density();
        let base = ep_distance(&phi, &cut01(), 2, &OptimizerConfig::default()).unwrap();
        for seed in 1..4 {
            let cfg = OptimizerConfig {
                seed,
                random_start: true,
                ..Default::default()
            };
            let view = BipartiteView::new(&phi, &cut01()).unwrap();
            let alt = hs_distance_barrier(&view, &cfg).unwrap();
            assert!((alt.value - base.value).abs() < 1e-6, "{} vs {}", alt.value, base.value);
        }
        // projection optimality: <ρ − σ*, τ − σ*> ≤ 0 for feasible τ
        let sigma = base.closest.unwrap();
        let a = SystemShape::new(&[2]).unwrap();
        for seed in 0..20 {
            let tau = random_separable(&a, &a, 2, RandomSpec::ginibre(seed)).unwrap();
            let ip = (phi.mat() - &sigma).inner(&(tau.mat() - &sigma)).re;
            assert!(ip <= 1e-7, "seed {seed}: {ip}");
        }
    }

    #[test]
    fn trace_distance_is_at_least_hs() {
        let s = SystemShape::new(&[2, 2]).unwrap();
        let rho = random_mixed(&s, RandomSpec::haar(5)).unwrap();
        let e2 = ep_distance(&rho, &cut01(), 2, &OptimizerConfig::default()).unwrap();
        let e1 = ep_distance(&rho, &cut01(), 1, &OptimizerConfig::default()).unwrap();
        assert!(e1.value + 1e-9 >= e2.value);
    }
}
