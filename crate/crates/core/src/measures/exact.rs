//! Closed-form quantifiers.

use crate::error::{Error, Result};
use crate::qla::{
    binary_entropy, herm_eig_unchecked, herm_eigvals_unchecked, singular_values, spectrum_entropy,
    CMatrix,
};
use crate::states::{DensityMatrix, PureState};

use super::{BipartiteView, Bipartition};

/// Purity above which a state is treated as pure by the pure-state formulas.
const PURE_TOL: f64 = 1e-10;
/// Eigenvalues below this are dropped when factorising `ρ = W W†`.
const RANK_TOL: f64 = 1e-13;

/// `‖ρ^{T_Y}‖₁` across the cut.
pub fn trace_norm_pt(rho: &DensityMatrix, cut: &Bipartition) -> Result<f64> {
    let view = BipartiteView::new(rho, cut)?;
    let pt = view.gamma(&view.mat);
    Ok(herm_eigvals_unchecked(&pt).iter().map(|l| l.abs()).sum())
}

/// `‖ρ^{T_Y}‖₁ − 1`.
pub fn negativity(rho: &DensityMatrix, cut: &Bipartition) -> Result<f64> {
    Ok((trace_norm_pt(rho, cut)? - 1.0).max(0.0))
}

/// `log2 ‖ρ^{T_Y}‖₁`.
pub fn log_negativity(rho: &DensityMatrix, cut: &Bipartition) -> Result<f64> {
    Ok(negativity(rho, cut)?.ln_1p() / std::f64::consts::LN_2)
}

fn spin_flip() -> CMatrix {
    let y = CMatrix::pauli(2);
    y.kron_unchecked(&y)
}

/// Wootters concurrence of a two-qubit operator from a factorisation `ρ = W W†`.
fn wootters_from_factor(w: &CMatrix) -> f64 {
    let m = &(&w.transpose() * &spin_flip()) * w;
    let mut s = singular_values(&m);
    s.resize(4, 0.0);
    (s[0] - s[1] - s[2] - s[3]).max(0.0)
}

fn factor(m: &CMatrix) -> CMatrix {
    let e = herm_eig_unchecked(m);
    let keep: Vec<usize> = (0..e.eigenvalues.len())
        .filter(|&k| e.eigenvalues[k] > RANK_TOL)
        .collect();
    let n = m.rows();
    if keep.is_empty() {
        return CMatrix::zeros(n, 1);
    }
    CMatrix::from_fn(n, keep.len(), |i, j| {
        let k = keep[j];
        e.eigenvectors.get(i, k) * e.eigenvalues[k].sqrt()
    })
}

fn purity(m: &CMatrix) -> f64 {
    m.frobenius().powi(2)
}

/// Concurrence across the cut.
///
/// Two qubits use the Wootters formula; any pure bipartite state uses
/// `√(2(1 − Tr ρ_X²))`.
pub fn concurrence(rho: &DensityMatrix, cut: &Bipartition) -> Result<f64> {
    let view = BipartiteView::new(rho, cut)?;
    if view.dl == 2 && view.dr == 2 {
        return Ok(wootters_from_factor(&factor(&view.mat)));
    }
    if purity(&view.mat) >= 1.0 - PURE_TOL {
        let shape = view.shape();
        let red = crate::qla::partial_trace(&view.mat, &shape, &[0])?;
        return Ok((2.0 * (1.0 - purity(&red))).max(0.0).sqrt());
    }
    Err(Error::Unsupported(format!(
        "concurrence of a mixed {}x{} state",
        view.dl, view.dr
    )))
}

/// Concurrence of a pure state across `left | rest`.
pub fn concurrence_pure(psi: &PureState, left: &[usize]) -> Result<f64> {
    let red = psi.density().reduce(left)?;
    Ok((2.0 * (1.0 - red.purity())).max(0.0).sqrt())
}

/// `h₂((1 + √(1 − C²))/2)`.
pub fn eof_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    binary_entropy((1.0 + (1.0 - c * c).sqrt()) / 2.0)
}

/// Entropy of the reduced state on `left`.
pub fn entropy_of_entanglement(psi: &PureState, left: &[usize]) -> Result<f64> {
    Ok(spectrum_entropy(&psi.schmidt_spectrum(left)?))
}

/// Entanglement of formation across the cut: concurrence formula for two
/// qubits, entropy of reduction for pure states.
pub fn eof(rho: &DensityMatrix, cut: &Bipartition) -> Result<f64> {
    let view = BipartiteView::new(rho, cut)?;
    if view.dl == 2 && view.dr == 2 {
        return Ok(eof_from_concurrence(wootters_from_factor(&factor(
            &view.mat,
        ))));
    }
    if purity(&view.mat) >= 1.0 - PURE_TOL {
        let shape = view.shape();
        let red = crate::qla::partial_trace(&view.mat, &shape, &[0])?;
        let vals: Vec<f64> = herm_eigvals_unchecked(&red).iter().map(|l| l.max(0.0)).collect();
        return Ok(spectrum_entropy(&vals));
    }
    Err(Error::Unsupported(format!(
        "entanglement of formation of a mixed {}x{} state",
        view.dl, view.dr
    )))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::qla::SystemShape;
    use crate::states::{alpha_state, ef_squared_witness_state, max_entangled, random_mixed, RandomSpec};

    fn cut01() -> Bipartition {
        Bipartition::new(&[0], &[1]).unwrap()
    }

    /// Wootters via the Hermitian form `√ρ ρ̃ √ρ`, whose eigenvalues are the
    /// squared spin-flip values.
    fn wootters_oracle(rho: &CMatrix) -> f64 {
        let yy = spin_flip();
        let tilde = &(&yy * &rho.conj()) * &yy;
        let root = herm_eig_unchecked(rho).map(|l| l.max(0.0).sqrt());
        let h = &(&root * &tilde) * &root;
        let mut l: Vec<f64> = herm_eigvals_unchecked(&h).iter().map(|x| x.max(0.0).sqrt()).collect();
        l.sort_by(|a, b| b.total_cmp(a));
        (l[0] - l[1] - l[2] - l[3]).max(0.0)
    }

    #[test]
    fn bell_values() {
        let phi = max_entangled(2).unwrap().density();
        assert!((concurrence(&phi, &cut01()).unwrap() - 1.0).abs() < 1e-12);
        assert!((eof(&phi, &cut01()).unwrap() - 1.0).abs() < 1e-12);
        assert!((negativity(&phi, &cut01()).unwrap() - 1.0).abs() < 1e-12);
        assert!((log_negativity(&phi, &cut01()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_states_are_unentangled() {
        let s = SystemShape::new(&[2]).unwrap();
        let a = random_mixed(&s, RandomSpec::ginibre(1)).unwrap();
        let b = random_mixed(&s, RandomSpec::ginibre(2)).unwrap();
        let ab = a.tensor(&b).unwrap();
        assert!(concurrence(&ab, &cut01()).unwrap() < 1e-12);
        assert_eq!(negativity(&ab, &cut01()).unwrap(), 0.0);
        assert_eq!(log_negativity(&ab, &cut01()).unwrap(), 0.0);
    }

    #[test]
    fn alpha_family_concurrence() {
        for k in 0..=20 {
            let a = k as f64 / 20.0;
            let psi = alpha_state(a).unwrap();
            let want = 2.0 * (a * (1.0 - a)).sqrt();
            let rho = psi.density();
            assert!((concurrence(&rho, &cut01()).unwrap() - want).abs() < 1e-10);
            assert!((wootters_oracle(rho.mat()) - want).abs() < 1e-6);
            assert!((concurrence_pure(&psi, &[0]).unwrap() - want).abs() < 1e-12);
            let s = psi.schmidt_spectrum(&[0]).unwrap();
            assert!((2.0 * (s[0] * s[1]).sqrt() - want).abs() < 1e-10);
        }
    }

    #[test]
    fn wootters_matches_oracle_on_mixed_states() {
        let s = SystemShape::new(&[2, 2]).unwrap();
        for seed in 0..50 {
            let rho = random_mixed(&s, RandomSpec::ginibre(seed)).unwrap();
            let c = concurrence(&rho, &cut01()).unwrap();
            assert!((c - wootters_oracle(rho.mat())).abs() < 1e-9, "seed {seed}");
        }
    }

    #[test]
    fn eof_is_monotone_in_concurrence() {
        let mut prev = -1.0;
        for k in 0..=200 {
            let v = eof_from_concurrence(k as f64 / 200.0);
            assert!(v >= prev);
            prev = v;
        }
        assert_eq!(eof_from_concurrence(0.0), 0.0);
        assert!((eof_from_concurrence(1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn witness_state_formation_values() {
        let rho = ef_squared_witness_state().density();
        let a_bc = Bipartition::new(&[0], &[1, 2]).unwrap();
        let ac_b = Bipartition::new(&[0, 2], &[1]).unwrap();
        assert!((eof(&rho, &a_bc).unwrap() - 2.0).abs() < 1e-12);
        assert!((eof(&rho, &ac_b).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mixed_formation_beyond_qubits_is_unsupported() {
        let s = SystemShape::new(&[2, 3]).unwrap();
        let rho = random_mixed(&s, RandomSpec::ginibre(3)).unwrap();
        assert!(matches!(eof(&rho, &cut01()), Err(Error::Unsupported(_))));
    }

    #[test]
    fn log_negativity_is_additive() {
        let s = SystemShape::new(&[2, 2]).unwrap();
        for seed in 0..20 {
            let r = random_mixed(&s, RandomSpec::ginibre(2 * seed)).unwrap();
            let t = random_mixed(&s, RandomSpec::ginibre(2 * seed + 1)).unwrap();
            let joint = r.tensor(&t).unwrap();
            let cut = Bipartition::new(&[0, 2], &[1, 3]).unwrap();
            let sum = log_negativity(&r, &cut01()).unwrap() + log_negativity(&t, &cut01()).unwrap();
            assert!((log_negativity(&joint, &cut).unwrap() - sum).abs() < 1e-10);
            let n = negativity(&r, &cut01()).unwrap();
            assert!((log_negativity(&r, &cut01()).unwrap() - (n + 1.0).log2()).abs() < 1e-12);
        }
    }
}
