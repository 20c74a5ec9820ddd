use crate::error::{contract, Result};

use super::eig::{herm_eig, herm_eigvals, singular_values};
use super::matrix::CMatrix;

/// Eigenvalues in `[-CLIP_TOL, 0]` are treated as round-off and set to 0.
pub const CLIP_TOL: f64 = 1e-10;
/// Support threshold relative to the largest eigenvalue.
pub const SUPPORT_TOL: f64 = 1e-10;

/// Clips round-off negatives; errors on genuinely negative eigenvalues.
pub(crate) fn clip_psd(vals: &[f64]) -> Result<Vec<f64>> {
    vals.iter()
        .map(|&l| {
            if l < -CLIP_TOL {
                contract(format!("negative eigenvalue {l:.3e}"))
            } else {
                Ok(l.max(0.0))
            }
        })
        .collect()
}

/// `-x log2 x`, with `0 log 0 = 0`.
pub fn xlogx_neg(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> f64 {
    xlogx_neg(p) + xlogx_neg(1.0 - p)
}

/// Shannon entropy of a (possibly unnormalised) spectrum, in bits.
pub fn spectrum_entropy(vals: &[f64]) -> f64 {
    vals.iter().map(|&l| xlogx_neg(l.max(0.0))).sum()
}

/// Von Neumann entropy in bits of a PSD matrix.
pub fn von_neumann_entropy(m: &CMatrix) -> Result<f64> {
    let vals = clip_psd(&herm_eigvals(m)?)?;
    Ok(spectrum_entropy(&vals))
}

/// Schatten p-norm `(Σ s_i^p)^{1/p}`, `p >= 1`; `p = ∞` gives the spectral norm.
pub fn schatten_norm(m: &CMatrix, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return contract(format!("Schatten norm needs p >= 1, got {p}"));
    }
    let s: Vec<f64> = if m.is_square() && m.is_hermitian(1e-12) {
        herm_eigvals(m)?.iter().map(|l| l.abs()).collect()
    } else {
        singular_values(m)
    };
    Ok(p_norm(&s, p))
}

pub(crate) fn p_norm(s: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        return s.iter().fold(0.0, |a, &x| a.max(x));
    }
    if p == 1.0 {
        return s.iter().sum();
    }
    if p == 2.0 {
        return s.iter().map(|x| x * x).sum::<f64>().sqrt();
    }
    let scale = s.iter().fold(0.0, |a: f64, &x| a.max(x));
    if scale == 0.0 {
        return 0.0;
    }
    scale * s.iter().map(|x| (x / scale).powf(p)).sum::<f64>().powf(1.0 / p)
}

/// Base-2 matrix logarithm of a PSD matrix, taken on its support.
///
/// Zero eigenvalues (after clipping) map to 0.
pub fn matrix_log2(m: &CMatrix) -> Result<CMatrix> {
    let e = herm_eig(m)?;
    clip_psd(&e.eigenvalues)?;
    let cut = SUPPORT_TOL * e.max().max(0.0);
    Ok(e.map(|l| if l > cut && l > 0.0 { l.log2() } else { 0.0 }))
}

fn check_state(m: &CMatrix, name: &str) -> Result<()> {
    let tr = m.trace();
    if (tr.re - 1.0).abs() > 1e-8 || tr.im.abs() > 1e-8 {
        return contract(format!("{name} has trace {tr}, expected 1"));
    }
    Ok(())
}

/// Quantum relative entropy `S(ρ‖σ) = Tr ρ log ρ − Tr ρ log σ` in bits.
///
/// Returns `f64::INFINITY` when the support of ρ is not contained in the
/// support of σ.
pub fn rel_entropy(rho: &CMatrix, sigma: &CMatrix) -> Result<f64> {
    if rho.rows() != sigma.rows() || !rho.is_square() || !sigma.is_square() {
        return contract("relative entropy of matrices with different dimensions");
    }
    check_state(rho, "rho")?;
    check_state(sigma, "sigma")?;
    let er = herm_eig(rho)?;
    let es = herm_eig(sigma)?;
    let rvals = clip_psd(&er.eigenvalues)?;
    let svals = clip_psd(&es.eigenvalues)?;
    Ok(rel_entropy_from_eig(&rvals, &es, &svals, rho))
}

/// Shared tail of [`rel_entropy`] once both spectra are known.
pub(crate) fn rel_entropy_from_eig(
    rho_vals: &[f64],
    sigma_eig: &super::eig::HermEig,
    sigma_vals: &[f64],
    rho: &CMatrix,
) -> f64 {
    let neg_entropy: f64 = -spectrum_entropy(rho_vals);
    let cut = SUPPORT_TOL * sigma_vals.iter().fold(0.0f64, |a, &b| a.max(b));
    let v = &sigma_eig.eigenvectors;
    let n = rho.rows();
    let mut cross = 0.0;
    let mut leaked = 0.0;
    for (k, &l) in sigma_vals.iter().enumerate() {
        // <v_k| rho |v_k>
        let mut w = 0.0;
        for i in 0..n {
            let vi = v.0[(i, k)];
            for j in 0..n {
                w += (vi.conj() * rho.0[(i, j)] * v.0[(j, k)]).re;
            }
        }
        if l > cut && l > 0.0 {
            cross += w * l.log2();
        } else {
            leaked += w;
        }
    }
    if leaked > SUPPORT_TOL {
        return f64::INFINITY;
    }
    (neg_entropy - cross).max(0.0)
}
