//! CPTP maps in Kraus form and the channel families used in distribution scenarios.

use num_complex::Complex64;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};
use crate::qla::{embed, herm_eig_unchecked, tensor, CMatrix};
use crate::states::{ginibre_matrix, DensityMatrix, Ensemble, RandomSpec};

/// Completeness tolerance for `Σ K†K = I`.
pub const COMPLETENESS_TOL: f64 = 1e-10;

/// Channel on a `dim`-dimensional system, given by Kraus operators.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    kraus: Vec<CMatrix>,
    dim: usize,
}

impl KrausChannel {
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        let dim = match kraus.first() {
            Some(k) => k.rows(),
            None => return contract("channel needs at least one Kraus operator"),
        };
        if kraus.iter().any(|k| !k.is_square() || k.rows() != dim) {
            return Err(Error::Size("Kraus operators must share one square dimension".into()));
        }
        let mut sum = CMatrix::zeros(dim, dim);
        for k in &kraus {
            sum += &(&k.adjoint() * k);
        }
        let defect = (&sum - &CMatrix::identity(dim)).frobenius();
        if defect > COMPLETENESS_TOL {
            return contract(format!("Kraus set is not trace preserving (defect {defect:.3e})"));
        }
        Ok(KrausChannel { kraus, dim })
    }

    pub fn identity(dim: usize) -> Self {
        KrausChannel {
            kraus: vec![CMatrix::identity(dim)],
            dim,
        }
    }

    /// Single unitary conjugation.
    pub fn unitary(u: CMatrix) -> Result<Self> {
        KrausChannel::new(vec![u])
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `Σ K m K†` for an operator on the channel's own space.
    pub fn apply(&self, m: &CMatrix) -> Result<CMatrix> {
        if m.rows() != self.dim || !m.is_square() {
            return Err(Error::Size(format!(
                "{}x{} operator for a channel on dimension {}",
                m.rows(),
                m.cols(),
                self.dim
            )));
        }
        Ok(self.apply_unchecked(m))
    }

    fn apply_unchecked(&self, m: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(m.rows(), m.cols());
        for k in &self.kraus {
            out += &(&(k * m) * &k.adjoint());
        }
        out
    }

    /// Choi matrix `Σ_ij |i><j| ⊗ Λ(|i><j|)`.
    pub fn choi(&self) -> CMatrix {
        let d = self.dim;
        let mut out = CMatrix::zeros(d * d, d * d);
        for i in 0..d {
            for j in 0..d {
                let img = self.apply_unchecked(&CMatrix::unit(d, i, j));
                for r in 0..d {
                    for c in 0..d {
                        out.set(i * d + r, j * d + c, img.get(r, c));
                    }
                }
            }
        }
        out
    }

    /// `Λ ⊗ Λ'` on the product space.
    pub fn tensor(&self, other: &KrausChannel) -> Result<KrausChannel> {
        let mut kraus = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for a in &self.kraus {
            for b in &other.kraus {
                kraus.push(tensor(a, b)?);
            }
        }
        Ok(KrausChannel {
            kraus,
            dim: self.dim * other.dim,
        })
    }
}

/// Probabilities for `I, X, Y, Z`, in that order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PauliSpec {
    p: [f64; 4],
}

impl PauliSpec {
    pub fn new(p: [f64; 4]) -> Result<Self> {
        if p.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return contract(format!("Pauli probabilities must be non-negative, got {p:?}"));
        }
        let s: f64 = p.iter().sum();
        if (s - 1.0).abs() > 1e-12 {
            return contract(format!("Pauli probabilities sum to {s}"));
        }
        Ok(PauliSpec { p })
    }

    pub fn identity() -> Self {
        PauliSpec { p: [1.0, 0.0, 0.0, 0.0] }
    }

    pub fn probs(&self) -> [f64; 4] {
        self.p
    }
}

pub fn pauli_channel(spec: &PauliSpec) -> KrausChannel {
    let kraus = (0..4)
        .filter(|&i| spec.p[i] > 0.0)
        .map(|i| CMatrix::pauli(i).scale(spec.p[i].sqrt()))
        .collect();
    KrausChannel { kraus, dim: 2 }
}

/// Dephasing: `(1−p) ρ + p Z ρ Z`.
pub fn phase_damping(p: f64) -> Result<KrausChannel> {
    if !(0.0..=1.0).contains(&p) {
        return contract(format!("dephasing probability must lie in [0, 1], got {p}"));
    }
    Ok(pauli_channel(&PauliSpec::new([1.0 - p, 0.0, 0.0, p])?))
}

pub fn amplitude_damping(gamma: f64) -> Result<KrausChannel> {
    if !(0.0..=1.0).contains(&gamma) {
        return contract(format!("damping parameter must lie in [0, 1], got {gamma}"));
    }
    let k1 = CMatrix::from_real_diag(&[1.0, (1.0 - gamma).sqrt()]);
    let k2 = CMatrix::unit(2, 0, 1).scale(gamma.sqrt());
    Ok(KrausChannel {
        kraus: vec![k1, k2],
        dim: 2,
    })
}

/// `X^a Z^b` with `X|j> = |j+1>` and `Z|j> = ω^j |j>`.
pub fn weyl_unitary(d: usize, a: usize, b: usize) -> CMatrix {
    let w = 2.0 * std::f64::consts::PI / d as f64;
    CMatrix::from_fn(d, d, |r, c| {
        if r == (c + a) % d {
            Complex64::from_polar(1.0, w * ((b * c) % d) as f64)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// All `d²` Weyl unitaries, index `a·d + b`.
pub fn weyl_unitaries(d: usize) -> Vec<CMatrix> {
    (0..d * d).map(|k| weyl_unitary(d, k / d, k % d)).collect()
}

/// `Σ p_{a,b} U_{a,b} ρ U_{a,b}†`, probabilities indexed `a·d + b`.
pub fn weyl_channel(d: usize, probs: &[f64]) -> Result<KrausChannel> {
    if d < 2 {
        return contract(format!("Weyl channel needs d >= 2, got {d}"));
    }
    if probs.len() != d * d {
        return Err(Error::Size(format!("{} probabilities for d = {d}", probs.len())));
    }
    if probs.iter().any(|x| !x.is_finite() || *x < 0.0)
        || (probs.iter().sum::<f64>() - 1.0).abs() > 1e-12
    {
        return contract("Weyl probabilities must form a probability vector");
    }
    let kraus = weyl_unitaries(d)
        .into_iter()
        .zip(probs)
        .filter(|(_, &p)| p > 0.0)
        .map(|(u, &p)| u.scale(p.sqrt()))
        .collect();
    Ok(KrausChannel { kraus, dim: d })
}

/// Applies `channel` to subsystem `target` of `rho`.
pub fn apply_on(channel: &KrausChannel, rho: &DensityMatrix, target: usize) -> Result<DensityMatrix> {
    let shape = rho.shape();
    shape.check_indices(&[target])?;
    if shape.dim(target) != channel.dim {
        return contract(format!(
            "channel on dimension {} applied to subsystem of dimension {}",
            channel.dim,
            shape.dim(target)
        ));
    }
    let mut out = CMatrix::zeros(rho.dim(), rho.dim());
    for k in &channel.kraus {
        let big = embed(k, shape, target)?;
        out += &(&(&big * rho.mat()) * &big.adjoint());
    }
    Ok(DensityMatrix::new_unchecked(out, shape.clone()))
}

/// `a ∘ b`: `b` acts first.
pub fn compose(a: &KrausChannel, b: &KrausChannel) -> Result<KrausChannel> {
    if a.dim != b.dim {
        return contract(format!("cannot compose dimensions {} and {}", a.dim, b.dim));
    }
    let mut kraus = Vec::with_capacity(a.kraus.len() * b.kraus.len());
    for x in &a.kraus {
        for y in &b.kraus {
            kraus.push(x * y);
        }
    }
    Ok(KrausChannel { kraus, dim: a.dim })
}

/// Compares Choi matrices entrywise.
pub fn channels_equal(a: &KrausChannel, b: &KrausChannel, tol: f64) -> bool {
    a.dim == b.dim && (&a.choi() - &b.choi()).max_abs() <= tol
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MarkovKind {
    AmplitudeDamping,
    PhaseDamping,
}

/// Exponential-decay semigroup; two-time maps obey the composition law exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarkovFamily {
    pub kind: MarkovKind,
    pub rate: f64,
}

impl MarkovFamily {
    pub fn new(kind: MarkovKind, rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate.is_finite()) {
            return contract(format!("rate must be positive, got {rate}"));
        }
        Ok(MarkovFamily { kind, rate })
    }

    /// Channel for an elapsed time `dt ≥ 0`.
    pub fn elapsed(&self, dt: f64) -> Result<KrausChannel> {
        if !(dt >= 0.0) {
            return contract(format!("elapsed time must be non-negative, got {dt}"));
        }
        let decay = (-self.rate * dt).exp();
        match self.kind {
            MarkovKind::AmplitudeDamping => amplitude_damping(1.0 - decay),
            MarkovKind::PhaseDamping => phase_damping((1.0 - decay) / 2.0),
        }
    }
}

/// Channel from time `t1` to time `t2`.
pub fn markov_snapshot(fam: &MarkovFamily, t1: f64, t2: f64) -> Result<KrausChannel> {
    if !(t1 >= 0.0 && t2 >= t1) {
        return contract(format!("need t2 >= t1 >= 0, got t1 = {t1}, t2 = {t2}"));
    }
    fam.elapsed(t2 - t1)
}

/// Random Pauli probabilities, uniform on the simplex.
pub fn random_pauli(spec: RandomSpec) -> Result<PauliSpec> {
    if spec.ensemble != Ensemble::DirichletPauli {
        return contract(format!("random_pauli needs dirichlet-pauli, got {:?}", spec.ensemble));
    }
    let mut rng = spec.rng();
    let mut p = [0.0; 4];
    for x in p.iter_mut() {
        *x = Exp1.sample(&mut rng);
    }
    let s: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= s);
    // absorb rounding so the sum is exactly representable as 1 within 1e-12
    PauliSpec::new(p)
}

/// Random channel on dimension `dim` with `n_kraus` operators: blocks of a
/// Haar-like isometry `V = G (G†G)^{-1/2}`.
pub fn random_channel(dim: usize, n_kraus: usize, spec: RandomSpec) -> Result<KrausChannel> {
    if n_kraus == 0 || dim < 2 {
        return contract("random channel needs dim >= 2 and at least one Kraus operator");
    }
    let mut rng = spec.rng();
    let g = ginibre_matrix(dim * n_kraus, dim, &mut rng);
    let gram = &g.adjoint() * &g;
    let eig = herm_eig_unchecked(&gram);
    if eig.min() <= 0.0 {
        return contract("degenerate Ginibre draw");
    }
    let v = &g * &eig.map(|l| 1.0 / l.sqrt());
    let kraus = (0..n_kraus)
        .map(|k| CMatrix::from_fn(dim, dim, |r, c| v.get(k * dim + r, c)))
        .collect();
    KrausChannel::new(kraus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qla::SystemShape;
    use crate::states::{max_entangled, random_mixed};

    fn qubit(seed: u64) -> DensityMatrix {
        random_mixed(&SystemShape::new(&[2]).unwrap(), RandomSpec::ginibre(seed)).unwrap()
    }

    #[test]
    fn pauli_examples() {
        let id = pauli_channel(&PauliSpec::identity());
        assert!(channels_equal(&id, &KrausChannel::identity(2), 1e-15));
        let dep = pauli_channel(&PauliSpec::new([0.25; 4]).unwrap());
        let out = apply_on(&dep, &qubit(1), 0).unwrap();
        assert!((out.mat() - &CMatrix::identity(2).scale(0.5)).max_abs() < 1e-15);
        assert!(PauliSpec::new([0.5, 0.5, 0.1, -0.1]).is_err());
        assert!(PauliSpec::new([0.5, 0.6, 0.0, 0.0]).is_err());
    }

    #[test]
    fn amplitude_damping_examples() {
        assert!(channels_equal(&amplitude_damping(0.0).unwrap(), &KrausChannel::identity(2), 0.0));
        let full = amplitude_damping(1.0).unwrap();
        let out = apply_on(&full, &qubit(2), 0).unwrap();
        assert!((out.mat() - &CMatrix::unit(2, 0, 0)).max_abs() < 1e-15);
        let one = DensityMatrix::basis(SystemShape::new(&[2]).unwrap(), &[1]).unwrap();
        let half = apply_on(&amplitude_damping(0.5).unwrap(), &one, 0).unwrap();
        assert!((half.mat() - &CMatrix::from_real_diag(&[0.5, 0.5])).max_abs() < 1e-15);
        assert!(amplitude_damping(1.2).is_err());
    }

    #[test]
    fn amplitude_damping_on_bell_entrywise() {
        let g: f64 = 0.37;
        let phi = max_entangled(2).unwrap().density();
        let out = apply_on(&amplitude_damping(g).unwrap(), &phi, 1).unwrap();
        let s = (1.0 - g).sqrt() / 2.0;
        let mut want = CMatrix::from_real_diag(&[0.5, 0.0, g / 2.0, (1.0 - g) / 2.0]);
        want.set(0, 3, Complex64::new(s, 0.0));
        want.set(3, 0, Complex64::new(s, 0.0));
        assert!((out.mat() - &want).max_abs() < 1e-15);
    }

    #[test]
    fn weyl_basis_is_orthonormal() {
        for d in 2..=4 {
            let phi = max_entangled(d).unwrap();
            let vecs: Vec<Vec<Complex64>> = weyl_unitaries(d)
                .iter()
                .map(|u| {
                    let big = tensor(&CMatrix::identity(d), u).unwrap();
                    big.apply(phi.vec())
                })
                .collect();
            for (i, a) in vecs.iter().enumerate() {
                for (j, b) in vecs.iter().enumerate() {
                    let ip: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((ip - want).norm() < 1e-12, "d={d} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn weyl_d2_matches_pauli() {
        let probs = [0.4, 0.3, 0.2, 0.1];
        // (a,b): (0,0)=I, (0,1)=Z, (1,0)=X, (1,1)=XZ ∝ Y
        let w = weyl_channel(2, &probs).unwrap();
        let p = pauli_channel(&PauliSpec::new([0.4, 0.2, 0.1, 0.3]).unwrap());
        assert!(channels_equal(&w, &p, 1e-14));
    }

    #[test]
    fn uniform_weyl_depolarizes() {
        let d = 3;
        let w = weyl_channel(d, &[1.0 / 9.0; 9]).unwrap();
        let rho = random_mixed(&SystemShape::new(&[3]).unwrap(), RandomSpec::ginibre(4)).unwrap();
        let out = w.apply(rho.mat()).unwrap();
        assert!((&out - &CMatrix::identity(3).scale(1.0 / 3.0)).max_abs() < 1e-14);
    }

    #[test]
    fn composition_rules() {
        let (g1, g2) = (0.3, 0.45);
        let c = compose(&amplitude_damping(g2).unwrap(), &amplitude_damping(g1).unwrap()).unwrap();
        let want = amplitude_damping(1.0 - (1.0 - g1) * (1.0 - g2)).unwrap();
        assert!(channels_equal(&c, &want, 1e-14));
        let (p1, p2) = (0.1, 0.35);
        let c = compose(&phase_damping(p2).unwrap(), &phase_damping(p1).unwrap()).unwrap();
        let want = phase_damping(p1 + p2 - 2.0 * p1 * p2).unwrap();
        assert!(channels_equal(&c, &want, 1e-14));
        assert!(compose(&KrausChannel::identity(2), &KrausChannel::identity(3)).is_err());
    }

    #[test]
    fn markov_composition_law() {
        for kind in [MarkovKind::AmplitudeDamping, MarkovKind::PhaseDamping] {
            let fam = MarkovFamily::new(kind, 0.8).unwrap();
            let (t1, t, t2) = (0.2, 0.9, 1.7);
            let two = compose(
                &markov_snapshot(&fam, t, t2).unwrap(),
                &markov_snapshot(&fam, t1, t).unwrap(),
            )
            .unwrap();
            assert!(channels_equal(&two, &markov_snapshot(&fam, t1, t2).unwrap(), 1e-14));
            assert!(channels_equal(
                &markov_snapshot(&fam, 0.5, 0.5).unwrap(),
                &KrausChannel::identity(2),
                1e-15
            ));
            assert!(markov_snapshot(&fam, 1.0, 0.5).is_err());
        }
    }

    #[test]
    fn remixed_kraus_sets_are_equal() {
        let ch = amplitude_damping(0.4).unwrap();
        let (c, s) = (0.6_f64, 0.8_f64);
        let k = ch.kraus();
        let remixed = KrausChannel::new(vec![
            &k[0].scale(c) + &k[1].scale(s),
            &k[0].scale(-s) + &k[1].scale(c),
        ])
        .unwrap();
        assert!(channels_equal(&ch, &remixed, 1e-14));
        assert!(!channels_equal(
            &pauli_channel(&PauliSpec::identity()),
            &pauli_channel(&PauliSpec::new([0.0, 1.0, 0.0, 0.0]).unwrap()),
            1e-6
        ));
    }

    #[test]
    fn random_channel_is_complete() {
        for seed in 0..10 {
            let ch = random_channel(2, 3, RandomSpec::ginibre(seed)).unwrap();
            assert_eq!(ch.kraus().len(), 3);
        }
    }

    #[test]
    fn product_pauli_channel_is_complete() {
        let a = pauli_channel(&random_pauli(RandomSpec::dirichlet(1)).unwrap());
        let b = pauli_channel(&random_pauli(RandomSpec::dirichlet(2)).unwrap());
        let ab = a.tensor(&b).unwrap();
        assert_eq!(ab.dim(), 4);
        assert!(KrausChannel::new(ab.kraus().to_vec()).is_ok());
    }
}
