//! Measurement-based discord on a qubit subsystem.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};
use crate::optim::nelder_mead;
use crate::qla::{embed, herm_eigvals_unchecked, partial_trace, singular_values, spectrum_entropy, CMatrix};
use crate::states::DensityMatrix;

use super::{DiscordMeasure, Method, OptimizerConfig, OptimizerReport};

use std::f64::consts::PI;

/// Simplex refinement tolerance on the angles.
const ANGLE_TOL: f64 = 1e-8;
/// Number of best grid points refined by Nelder-Mead.
const REFINE_STARTS: usize = 3;

/// Qubit measurement basis `{|b0>, |b1>}` with
/// `|b0> = cos(θ/2)|0> + e^{iφ} sin(θ/2)|1>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementBloch {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementBloch {
    /// Wraps angles into `θ ∈ [0, π]`, `φ ∈ [0, 2π)`.
    pub fn new(theta: f64, phi: f64) -> Self {
        let mut t = theta.rem_euclid(2.0 * PI);
        let mut p = phi;
        if t > PI {
            t = 2.0 * PI - t;
            p += PI;
        }
        MeasurementBloch {
            theta: t,
            phi: p.rem_euclid(2.0 * PI),
        }
    }

    /// The computational basis.
    pub fn z() -> Self {
        MeasurementBloch { theta: 0.0, phi: 0.0 }
    }

    /// Basis vectors `|b0>, |b1>`.
    pub fn vectors(&self) -> [[Complex64; 2]; 2] {
        let (c, s) = ((self.theta / 2.0).cos(), (self.theta / 2.0).sin());
        let e = Complex64::from_polar(1.0, self.phi);
        [
            [Complex64::new(c, 0.0), e * s],
            [Complex64::new(s, 0.0), -e * c],
        ]
    }

    pub fn projectors(&self) -> [CMatrix; 2] {
        let [b0, b1] = self.vectors();
        [CMatrix::outer(&b0), CMatrix::outer(&b1)]
    }
}

fn check_qubit(rho: &DensityMatrix, measured: usize) -> Result<()> {
    rho.shape().check_indices(&[measured])?;
    let d = rho.shape().dim(measured);
    if d != 2 {
        return Err(Error::Unsupported(format!(
            "discord needs a qubit measured subsystem, got dimension {d}"
        )));
    }
    Ok(())
}

/// `Σ_k Π_k ρ Π_k` with the projectors acting on `measured`.
pub fn measured_state(
    rho: &DensityMatrix,
    measured: usize,
    basis: &MeasurementBloch,
) -> Result<DensityMatrix> {
    check_qubit(rho, measured)?;
    let mut out = CMatrix::zeros(rho.dim(), rho.dim());
    for p in basis.projectors() {
        let big = embed(&p, rho.shape(), measured)?;
        out += &(&(&big * rho.mat()) * &big);
    }
    Ok(DensityMatrix::new_unchecked(out, rho.shape().clone()))
}

/// Reduced state with the measured qubit first, split into 2x2 blocks.
struct Blocks {
    mat: CMatrix,
    rest: usize,
    entropy: f64,
}

impl Blocks {
    /// `(<b_i| ⊗ I) ρ (|b_j> ⊗ I)`.
    fn block(&self, bi: &[Complex64; 2], bj: &[Complex64; 2]) -> CMatrix {
        let r = self.rest;
        CMatrix::from_fn(r, r, |x, y| {
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..2 {
                for b in 0..2 {
                    acc += bi[a].conj() * self.mat.get(a * r + x, b * r + y) * bj[b];
                }
            }
            acc
        })
    }

    fn distance(&self, measure: DiscordMeasure, basis: &MeasurementBloch) -> f64 {
        let [b0, b1] = basis.vectors();
        match measure {
            DiscordMeasure::RelativeEntropy => {
                // S(ρ‖ρ') = S(ρ') − S(ρ) for a pinching
                let mut vals = herm_eigvals_unchecked(&self.block(&b0, &b0));
                vals.extend(herm_eigvals_unchecked(&self.block(&b1, &b1)));
                (spectrum_entropy(&vals) - self.entropy).max(0.0)
            }
            DiscordMeasure::Schatten2 => {
                std::f64::consts::SQRT_2 * self.block(&b0, &b1).frobenius()
            }
            DiscordMeasure::Schatten1 => 2.0 * singular_values(&self.block(&b0, &b1)).iter().sum::<f64>(),
        }
    }
}

/// `min` over qubit von Neumann measurements on `measured` of `D(ρ, ρ')`,
/// computed on the reduced state of `measured ∪ rest`.
pub fn discord(
    rho: &DensityMatrix,
    measured: usize,
    rest: &[usize],
    measure: DiscordMeasure,
    cfg: &OptimizerConfig,
) -> Result<OptimizerReport> {
    check_qubit(rho, measured)?;
    if rest.is_empty() {
        return contract("discord needs at least one unmeasured subsystem");
    }
    if cfg.grid_theta < 2 || cfg.grid_phi < 1 {
        return contract("discord grid needs at least 2 polar and 1 azimuthal points");
    }
    let keep: Vec<usize> = std::iter::once(measured).chain(rest.iter().copied()).collect();
    rho.shape().check_indices(&keep)?;
    let mat = partial_trace(rho.mat(), rho.shape(), &keep)?;
    let entropy = if measure == DiscordMeasure::RelativeEntropy {
        spectrum_entropy(&herm_eigvals_unchecked(&mat))
    } else {
        0.0
    };
    let blocks = Blocks {
        rest: mat.rows() / 2,
        mat,
        entropy,
    };
    let f = |x: &[f64]| blocks.distance(measure, &MeasurementBloch::new(x[0], x[1]));

    let (nt, np) = (cfg.grid_theta, cfg.grid_phi);
    let mut grid: Vec<(f64, f64, f64)> = Vec::with_capacity(nt * np);
    for i in 0..nt {
        let theta = PI * i as f64 / (nt - 1) as f64;
        for j in 0..np {
            let phi = 2.0 * PI * j as f64 / np as f64;
            grid.push((f(&[theta, phi]), theta, phi));
        }
    }
    grid.sort_by(|a, b| a.0.total_cmp(&b.0));
    let step = [PI / (nt - 1) as f64 / 2.0, PI / np as f64];

    let mut best = (grid[0].0, MeasurementBloch::new(grid[0].1, grid[0].2), 0.0, true);
    let mut iterations = grid.len();
    for &(_, theta, phi) in grid.iter().take(REFINE_STARTS) {
        let r = nelder_mead(f, &[theta, phi], &step, ANGLE_TOL, 0.0, cfg.max_iters);
        iterations += r.iterations;
        if r.value < best.0 {
            best = (r.value, MeasurementBloch::new(r.x[0], r.x[1]), r.diameter, r.converged);
        }
    }
    let (value, basis, residual, converged) = best;
    Ok(OptimizerReport {
        value,
        iterations,
        converged: converged && residual <= ANGLE_TOL,
        residual,
        method: Method::GridSimplex,
        closest: None,
        basis: Some(basis),
    })
}
