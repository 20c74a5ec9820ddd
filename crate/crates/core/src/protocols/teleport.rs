//! Teleportation through a noisy resource state.

use num_complex::Complex64;

use crate::error::{contract, Result};
use crate::qla::{embed, partial_trace, tensor, tensor_all, CMatrix, SystemShape};
use crate::states::{max_entangled, DensityMatrix};

/// The four Pauli matrices, the qubit correction set.
pub fn pauli_corrections() -> Vec<CMatrix> {
    (0..4).map(CMatrix::pauli).collect()
}

/// Teleports the `R` half of `rho^{AR}` through `resource^{R̃C}`.
///
/// `R` and `R̃` are measured jointly in the basis `(U_i ⊗ I)|φ⁺>`, and outcome
/// `i` is corrected by `U_i` on `C`. Returns the outcome-averaged state on
/// `(A, C)`. The corrections must make that basis orthonormal.
pub fn teleport_through(
    resource: &DensityMatrix,
    rho: &DensityMatrix,
    corrections: &[CMatrix],
) -> Result<DensityMatrix> {
    if resource.shape().len() != 2 || rho.shape().len() != 2 {
        return contract("teleportation needs a bipartite resource and a bipartite input");
    }
    let d = rho.shape().dim(1);
    let da = rho.shape().dim(0);
    if resource.shape().dims() != [d, d] {
        return contract(format!(
            "resource shape {:?} does not match a teleported system of dimension {d}",
            resource.shape().dims()
        ));
    }
    if corrections.len() != d * d || corrections.iter().any(|u| !u.is_square() || u.rows() != d) {
        return contract(format!("need {} corrections of dimension {d}", d * d));
    }
    let phi = max_entangled(d)?;
    let basis: Vec<Vec<Complex64>> = corrections
        .iter()
        .map(|u| tensor(u, &CMatrix::identity(d)).map(|big| big.apply(phi.vec())))
        .collect::<Result<_>>()?;
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let ip: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
            let want = if i == j { 1.0 } else { 0.0 };
            if (ip - want).norm() > 1e-10 {
                return contract("corrections do not give an orthonormal measurement basis");
            }
        }
    }

    // (A, R, R̃, C)
    let shape = SystemShape::new(&[da, d, d, d])?;
    let full = tensor(rho.mat(), resource.mat())?;
    let out_shape = SystemShape::new(&[da, d])?;
    let mut out = CMatrix::zeros(da * d, da * d);
    for (v, u) in basis.iter().zip(corrections) {
        let proj = tensor_all(&[CMatrix::identity(da), CMatrix::outer(v), CMatrix::identity(d)])?;
        let post = &(&proj * &full) * &proj;
        let ac = partial_trace(&post, &shape, &[0, 3])?;
        let fix = embed(u, &out_shape, 1)?;
        out += &(&(&fix * &ac) * &fix.adjoint());
    }
    Ok(DensityMatrix::new_unchecked(out, out_shape))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{apply_on, pauli_channel, random_pauli};
    use crate::states::{random_mixed, RandomSpec};

    #[test]
    fn noiseless_teleportation_is_identity() {
        let shape = SystemShape::new(&[2, 2]).unwrap();
        let rho = random_mixed(&shape, RandomSpec::ginibre(3)).unwrap();
        let phi = max_entangled(2).unwrap().density();
        let out = teleport_through(&phi, &rho, &pauli_corrections()).unwrap();
        assert!(out.trace_distance(&rho) <= 1e-12);
    }

    #[test]
    fn pauli_resource_simulates_the_channel() {
        let shape = SystemShape::new(&[2, 2]).unwrap();
        for seed in 0..10 {
            let rho = random_mixed(&shape, RandomSpec::ginibre(seed)).unwrap();
            let ch = pauli_channel(&random_pauli(RandomSpec::dirichlet(seed)).unwrap());
            let phi = max_entangled(2).unwrap().density();
            let resource = apply_on(&ch, &phi, 1).unwrap();
            let tau = teleport_through(&resource, &rho, &pauli_corrections()).unwrap();
            let want = apply_on(&ch, &rho, 1).unwrap();
            assert!(2.0 * tau.trace_distance(&want) <= 1e-10);
        }
    }

    #[test]
    fn bad_corrections_are_rejected() {
        let shape = SystemShape::new(&[2, 2]).unwrap();
        let rho = random_mixed(&shape, RandomSpec::ginibre(1)).unwrap();
        let phi = max_entangled(2).unwrap().density();
        let bad = vec![CMatrix::identity(2); 4];
        assert!(teleport_through(&phi, &rho, &bad).is_err());
    }
}
