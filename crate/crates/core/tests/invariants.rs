use entdist_core::channels::{apply_on, random_channel};
use entdist_core::measures::{
    concurrence, concurrence_pure, discord_of, entanglement, log_negativity, Bipartition, DiscordMeasure,
    EntanglementMeasure, OptimizerConfig,
};
use entdist_core::qla::{herm_eig, partial_trace, partial_transpose, rel_entropy, schatten_norm, CMatrix, SystemShape};
use entdist_core::states::{random_mixed, random_pure, random_unitary, RandomSpec};
use proptest::prelude::*;

fn shape_strategy() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(2usize..=3, 2..=3)
}

fn hermitian(d: usize, seed: u64) -> CMatrix {
    let u = random_unitary(d, RandomSpec::haar(seed));
    let diag: Vec<f64> = (0..d).map(|k| (k as f64 * 0.731 + seed as f64 * 0.17).sin()).collect();
    &(&u * &CMatrix::from_real_diag(&diag)) * &u.adjoint()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn partial_transpose_is_an_involution(dims in shape_strategy(), seed in any::<u64>(), k in 0usize..3) {
        let shape = SystemShape::new(&dims).unwrap();
        let rho = random_mixed(&shape, RandomSpec::ginibre(seed)).unwrap();
        let flip = [k % dims.len()];
        let once = partial_transpose(rho.mat(), &shape, &flip).unwrap();
        let twice = partial_transpose(&once, &shape, &flip).unwrap();
        prop_assert!((&twice - rho.mat()).max_abs() < 1e-14);
        prop_assert!((once.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn channels_and_partial_traces_preserve_trace(dims in shape_strategy(), seed in any::<u64>(), n in 1usize..4) {
        let shape = SystemShape::new(&dims).unwrap();
        let rho = random_mixed(&shape, RandomSpec::ginibre(seed)).unwrap();
        let last = dims.len() - 1;
        let ch = random_channel(dims[last], n, RandomSpec::ginibre(seed ^ 1)).unwrap();
        let out = apply_on(&ch, &rho, last).unwrap();
        prop_assert!((out.mat().trace().re - 1.0).abs() < 1e-12);
        prop_assert!(out.eigenvalues().iter().all(|&l| l > -1e-12));
        let red = partial_trace(rho.mat(), &shape, &[0]).unwrap();
        prop_assert!((red.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn schatten_norms_decrease_in_p(d in 2usize..6, seed in any::<u64>()) {
        let m = hermitian(d, seed);
        let ps = [1.0, 1.5, 2.0, 3.0, 8.0];
        let norms: Vec<f64> = ps.iter().map(|&p| schatten_norm(&m, p).unwrap()).collect();
        for w in norms.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12);
        }
        prop_assert!((norms[2] - m.frobenius()).abs() < 1e-12);
    }

    #[test]
    fn eigendecomposition_reconstructs(d in 1usize..8, seed in any::<u64>()) {
        let m = hermitian(d, seed);
        let e = herm_eig(&m).unwrap();
        prop_assert!((&e.reconstruct() - &m).max_abs() < 1e-12);
        prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn relative_entropy_obeys_pinsker(d in 2usize..5, seed in any::<u64>()) {
        let shape = SystemShape::new(&[d]).unwrap();
        let rho = random_mixed(&shape, RandomSpec::ginibre(seed)).unwrap();
        let sigma = random_mixed(&shape, RandomSpec::ginibre(seed.wrapping_add(1))).unwrap();
        let s = rel_entropy(rho.mat(), sigma.mat()).unwrap();
        let t = rho.trace_distance(&sigma);
        prop_assert!(s >= 0.0);
        // S(ρ‖σ) ≥ (2 / ln 2) T² in bits
        prop_assert!(s >= 2.0 / std::f64::consts::LN_2 * t * t - 1e-12);
        prop_assert!(rel_entropy(rho.mat(), rho.mat()).unwrap().abs() < 1e-9);
    }

    #[test]
    fn log_negativity_is_local_unitary_invariant(seed in any::<u64>()) {
        let shape = SystemShape::new(&[2, 3]).unwrap();
        let cut = Bipartition::new(&[0], &[1]).unwrap();
        let rho = random_mixed(&shape, RandomSpec::ginibre(seed)).unwrap();
        let u = entdist_core::qla::tensor(
            &random_unitary(2, RandomSpec::haar(seed ^ 7)),
            &random_unitary(3, RandomSpec::haar(seed ^ 9)),
        )
        .unwrap();
        let moved = rho.conjugate(&u).unwrap();
        let a = log_negativity(&rho, &cut).unwrap();
        let b = log_negativity(&moved, &cut).unwrap();
        prop_assert!((a - b).abs() < 1e-10);
    }
}

#[test]
fn concurrence_factorizes_through_qubit_channels() {
    let shape = SystemShape::new(&[2, 2]).unwrap();
    let cut = Bipartition::new(&[0], &[1]).unwrap();
    let bell = entdist_core::states::max_entangled(2).unwrap().density();
    for k in 0..100u64 {
        let ch = random_channel(2, 1 + (k as usize % 4), RandomSpec::ginibre(k)).unwrap();
        let psi = random_pure(&shape, RandomSpec::haar(k + 1000)).unwrap();
        let lhs = concurrence(&apply_on(&ch, &psi.density(), 1).unwrap(), &cut).unwrap();
        let c_bell = concurrence(&apply_on(&ch, &bell, 1).unwrap(), &cut).unwrap();
        let rhs = c_bell * concurrence_pure(&psi, &[0]).unwrap();
        assert!((lhs - rhs).abs() < 1e-8, "{k}: {lhs} vs {rhs}");
    }
}

#[test]
fn discord_bounds_distributed_entanglement_on_a_small_sweep() {
    let cfg = OptimizerConfig::default();
    let shape = SystemShape::new(&[2, 2, 2]).unwrap();
    let a_bc = Bipartition::new(&[0], &[1, 2]).unwrap();
    let ac_b = Bipartition::new(&[0, 2], &[1]).unwrap();
    for seed in 0..5 {
        let rho = random_mixed(&shape, RandomSpec::ginibre(seed)).unwrap();
        let gain = entanglement(EntanglementMeasure::RelativeEntropy, &rho, &a_bc, &cfg).unwrap().value
            - entanglement(EntanglementMeasure::RelativeEntropy, &rho, &ac_b, &cfg).unwrap().value;
        let d = discord_of(DiscordMeasure::RelativeEntropy, &rho, 2, &[0, 1], &cfg).unwrap().value;
        assert!(d >= gain - 1e-3, "{d} < {gain}");
    }
}
