//! States used by the distribution scenarios and seeded random ensembles.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};
use crate::qla::{
    self, herm_eigvals, partial_trace, partial_transpose, permutation_map, permute_subsystems,
    CMatrix, SystemShape,
};

/// Hermiticity, positivity and trace tolerance for density matrices.
pub const STATE_TOL: f64 = 1e-10;

/// Hermitian, positive semidefinite, unit-trace matrix on a [`SystemShape`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: CMatrix,
    shape: SystemShape,
}

impl DensityMatrix {
    /// Validates every invariant.
    pub fn new(mat: CMatrix, shape: SystemShape) -> Result<Self> {
        if !mat.is_square() || mat.rows() != shape.total() {
            return Err(Error::Size(format!(
                "{}x{} matrix for shape {:?}",
                mat.rows(),
                mat.cols(),
                shape.dims()
            )));
        }
        if !mat.is_hermitian(STATE_TOL) {
            return contract("density matrix is not Hermitian");
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return contract(format!("density matrix has trace {tr}"));
        }
        let min = herm_eigvals(&mat)?[0];
        if min < -STATE_TOL {
            return contract(format!("density matrix has eigenvalue {min:.3e}"));
        }
        Ok(DensityMatrix {
            mat: mat.hermitian_part(),
            shape,
        })
    }

    /// Skips validation. For outputs of maps already known to be CPTP.
    pub(crate) fn new_unchecked(mat: CMatrix, shape: SystemShape) -> Self {
        debug_assert_eq!(mat.rows(), shape.total());
        DensityMatrix {
            mat: mat.hermitian_part(),
            shape,
        }
    }

    /// Maximally mixed state.
    pub fn maximally_mixed(shape: SystemShape) -> Self {
        let d = shape.total();
        DensityMatrix::new_unchecked(CMatrix::identity(d).scale(1.0 / d as f64), shape)
    }

    /// Computational basis state `|digits><digits|`.
    pub fn basis(shape: SystemShape, digits: &[usize]) -> Result<Self> {
        if digits.len() != shape.len() || digits.iter().zip(shape.dims()).any(|(&i, &d)| i >= d) {
            return Err(Error::Index(format!("basis digits {digits:?} for {:?}", shape.dims())));
        }
        let k = shape.flat(digits);
        Ok(DensityMatrix::new_unchecked(
            CMatrix::unit(shape.total(), k, k),
            shape,
        ))
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    pub fn shape(&self) -> &SystemShape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.shape.total()
    }

    pub fn into_mat(self) -> CMatrix {
        self.mat
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        qla::herm_eigvals_unchecked(&self.mat)
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.mat.frobenius().powi(2)
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> f64 {
        let vals: Vec<f64> = self.eigenvalues().iter().map(|l| l.max(0.0)).collect();
        qla::spectrum_entropy(&vals)
    }

    /// Reduced state on `keep` (in that order).
    pub fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let m = partial_trace(&self.mat, &self.shape, keep)?;
        let shape = self.shape.select(keep)?;
        Ok(DensityMatrix::new_unchecked(m, shape))
    }

    /// Partial transpose on `flip`; the result is generally not a state.
    pub fn partial_transpose(&self, flip: &[usize]) -> Result<CMatrix> {
        partial_transpose(&self.mat, &self.shape, flip)
    }

    /// Subsystem `order[k]` becomes subsystem `k`.
    pub fn permute(&self, order: &[usize]) -> Result<DensityMatrix> {
        let (m, s) = permute_subsystems(&self.mat, &self.shape, order)?;
        Ok(DensityMatrix::new_unchecked(m, s))
    }

    /// `self ⊗ other`, shapes concatenated.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let dims: Vec<usize> = self
            .shape
            .dims()
            .iter()
            .chain(other.shape.dims())
            .copied()
            .collect();
        let shape = SystemShape::new(&dims)?;
        let m = qla::tensor(&self.mat, &other.mat)?;
        Ok(DensityMatrix::new_unchecked(m, shape))
    }

    /// Convex combination `Σ w_k ρ_k`; shapes must agree.
    pub fn mixture(parts: &[(f64, DensityMatrix)]) -> Result<DensityMatrix> {
        let first = parts
            .first()
            .ok_or_else(|| Error::Contract("empty mixture".into()))?;
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if parts.iter().any(|(w, _)| *w < 0.0) || (total - 1.0).abs() > 1e-12 {
            return contract("mixture weights must form a probability vector");
        }
        let mut m = CMatrix::zeros(first.1.dim(), first.1.dim());
        for (w, rho) in parts {
            if rho.shape != first.1.shape {
                return Err(Error::Size("mixture of states with different shapes".into()));
            }
            m += &rho.mat.scale(*w);
        }
        Ok(DensityMatrix::new_unchecked(m, first.1.shape.clone()))
    }

    /// `(1/2)‖ρ − σ‖₁`.
    pub fn trace_distance(&self, other: &DensityMatrix) -> f64 {
        let d = &self.mat - &other.mat;
        0.5 * qla::herm_eigvals_unchecked(&d).iter().map(|l| l.abs()).sum::<f64>()
    }

    /// Applies `U ρ U†` with `U` acting on the whole space.
    pub fn conjugate(&self, u: &CMatrix) -> Result<DensityMatrix> {
        if u.rows() != self.dim() || !u.is_square() {
            return Err(Error::Size("unitary dimension mismatch".into()));
        }
        Ok(DensityMatrix::new_unchecked(
            &(u * &self.mat) * &u.adjoint(),
            self.shape.clone(),
        ))
    }
}

/// Unit vector on a [`SystemShape`].
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    vec: Vec<Complex64>,
    shape: SystemShape,
}

impl PureState {
    pub fn new(vec: Vec<Complex64>, shape: SystemShape) -> Result<Self> {
        if vec.len() != shape.total() {
            return Err(Error::Size(format!(
                "vector of length {} for shape {:?}",
                vec.len(),
                shape.dims()
            )));
        }
        let norm: f64 = vec.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return contract(format!("state vector has norm {norm}"));
        }
        Ok(PureState { vec, shape })
    }

    /// Rescales to unit norm first.
    pub fn normalized(mut vec: Vec<Complex64>, shape: SystemShape) -> Result<Self> {
        let norm: f64 = vec.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return contract("cannot normalise a zero or non-finite vector");
        }
        vec.iter_mut().for_each(|z| *z /= norm);
        PureState::new(vec, shape)
    }

    pub fn vec(&self) -> &[Complex64] {
        &self.vec
    }

    pub fn shape(&self) -> &SystemShape {
        &self.shape
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::new_unchecked(CMatrix::outer(&self.vec), self.shape.clone())
    }

    pub fn norm(&self) -> f64 {
        self.vec.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Applies `U` (acting on the whole space).
    pub fn apply(&self, u: &CMatrix) -> Result<PureState> {
        if u.rows() != self.vec.len() || !u.is_square() {
            return Err(Error::Size("operator dimension mismatch".into()));
        }
        Ok(PureState {
            vec: u.apply(&self.vec),
            shape: self.shape.clone(),
        })
    }

    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let dims: Vec<usize> = self
            .shape
            .dims()
            .iter()
            .chain(other.shape.dims())
            .copied()
            .collect();
        let shape = SystemShape::new(&dims)?;
        let vec = self
            .vec
            .iter()
            .flat_map(|a| other.vec.iter().map(move |b| a * b))
            .collect();
        Ok(PureState { vec, shape })
    }

    pub fn permute(&self, order: &[usize]) -> Result<PureState> {
        let map = permutation_map(&self.shape, order)?;
        let mut vec = vec![Complex64::new(0.0, 0.0); self.vec.len()];
        for (i, &j) in map.iter().enumerate() {
            vec[j] = self.vec[i];
        }
        Ok(PureState {
            vec,
            shape: self.shape.select(order)?,
        })
    }

    /// Squared Schmidt coefficients across `left | rest`, descending.
    pub fn schmidt_spectrum(&self, left: &[usize]) -> Result<Vec<f64>> {
        let r = self.density().reduce(left)?;
        let mut v: Vec<f64> = r.eigenvalues().iter().map(|l| l.max(0.0)).collect();
        v.sort_by(|a, b| b.total_cmp(a));
        Ok(v)
    }
}

/// Which random ensemble a [`RandomSpec`] draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ensemble {
    /// Normalised complex Gaussian vector.
    HaarPure,
    /// `G G† / Tr(G G†)` with `G` square complex Gaussian.
    GinibreMixed,
    /// Uniform (Dirichlet(1,1,1,1)) Pauli probability vector.
    DirichletPauli,
}

/// Seed plus ensemble. Same spec, same output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomSpec {
    pub seed: u64,
    pub ensemble: Ensemble,
}

const STREAM_STEP: u64 = 0x9E37_79B9_7F4A_7C15;

impl RandomSpec {
    pub fn haar(seed: u64) -> Self {
        RandomSpec {
            seed,
            ensemble: Ensemble::HaarPure,
        }
    }

    pub fn ginibre(seed: u64) -> Self {
        RandomSpec {
            seed,
            ensemble: Ensemble::GinibreMixed,
        }
    }

    pub fn dirichlet(seed: u64) -> Self {
        RandomSpec {
            seed,
            ensemble: Ensemble::DirichletPauli,
        }
    }

    /// Independent sub-stream `k`, same ensemble.
    pub fn stream(&self, k: u64) -> Self {
        RandomSpec {
            seed: splitmix(self.seed ^ k.wrapping_add(1).wrapping_mul(STREAM_STEP)),
            ensemble: self.ensemble,
        }
    }

    pub fn with_ensemble(&self, ensemble: Ensemble) -> Self {
        RandomSpec {
            seed: self.seed,
            ensemble,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(STREAM_STEP);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub(crate) fn gaussian_c(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// Square complex Gaussian matrix.
pub(crate) fn ginibre_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let mut m = CMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, gaussian_c(rng));
        }
    }
    m
}

/// `(1/√d) Σ_i |ii>` on shape `(d, d)`.
pub fn max_entangled(d: usize) -> Result<PureState> {
    if d < 2 {
        return contract(format!("maximally entangled state needs d >= 2, got {d}"));
    }
    let shape = SystemShape::new(&[d, d])?;
    let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    let mut vec = vec![Complex64::new(0.0, 0.0); d * d];
    for i in 0..d {
        vec[i * d + i] = amp;
    }
    PureState::new(vec, shape)
}

/// `√(1−α)|00> + √α|11>` on two qubits.
pub fn alpha_state(alpha: f64) -> Result<PureState> {
    if !(0.0..=1.0).contains(&alpha) {
        return contract(format!("alpha must lie in [0, 1], got {alpha}"));
    }
    let shape = SystemShape::new(&[2, 2])?;
    let z = Complex64::new(0.0, 0.0);
    let vec = vec![
        Complex64::new((1.0 - alpha).sqrt(), 0.0),
        z,
        z,
        Complex64::new(alpha.sqrt(), 0.0),
    ];
    PureState::normalized(vec, shape)
}

/// `(|000> + |101> + |210> + |311>)/2` on `(A, B, C) = (4, 2, 2)`.
pub fn ef_squared_witness_state() -> PureState {
    let shape = SystemShape::new(&[4, 2, 2]).expect("static shape");
    let mut vec = vec![Complex64::new(0.0, 0.0); 16];
    for digits in [[0, 0, 0], [1, 0, 1], [2, 1, 0], [3, 1, 1]] {
        vec[shape.flat(&digits)] = Complex64::new(0.5, 0.0);
    }
    PureState::new(vec, shape).expect("unit norm by construction")
}

/// Haar-random pure state. Requires the `HaarPure` ensemble.
pub fn random_pure(shape: &SystemShape, spec: RandomSpec) -> Result<PureState> {
    if spec.ensemble != Ensemble::HaarPure {
        return contract(format!("random_pure needs haar-pure, got {:?}", spec.ensemble));
    }
    let mut rng = spec.rng();
    let vec = (0..shape.total()).map(|_| gaussian_c(&mut rng)).collect();
    PureState::normalized(vec, shape.clone())
}

/// Random density matrix. `GinibreMixed` gives the Hilbert-Schmidt ensemble;
/// `HaarPure` gives a random pure state's projector.
pub fn random_mixed(shape: &SystemShape, spec: RandomSpec) -> Result<DensityMatrix> {
    match spec.ensemble {
        Ensemble::HaarPure => Ok(random_pure(shape, spec)?.density()),
        Ensemble::GinibreMixed => {
            let d = shape.total();
            let mut rng = spec.rng();
            let g = ginibre_matrix(d, d, &mut rng);
            let w = &g * &g.adjoint();
            let tr = w.trace().re;
            Ok(DensityMatrix::new_unchecked(w.scale(1.0 / tr), shape.clone()))
        }
        Ensemble::DirichletPauli => contract("dirichlet-pauli does not generate states"),
    }
}

/// Random Haar unitary of dimension `d` (QR of a Ginibre matrix with phase fix).
pub fn random_unitary(d: usize, spec: RandomSpec) -> CMatrix {
    let mut rng = spec.rng();
    let g = ginibre_matrix(d, d, &mut rng);
    let qr = g.0.qr();
    let q = qr.q();
    let r = qr.r();
    CMatrix::from_fn(d, d, |i, j| {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { Complex64::new(1.0, 0.0) };
        q[(i, j)] * phase
    })
}

/// Separable state `Σ_k p_k ρ_k^{X} ⊗ ρ_k^{Y}` with `terms` random product terms
/// drawn from `spec`'s ensemble for each factor.
pub fn random_separable(
    left: &SystemShape,
    right: &SystemShape,
    terms: usize,
    spec: RandomSpec,
) -> Result<DensityMatrix> {
    if terms == 0 {
        return contract("separable mixture needs at least one term");
    }
    let mut rng = spec.stream(0).rng();
    let mut weights: Vec<f64> = (0..terms)
        .map(|_| {
            let e: f64 = rand_distr::Exp1.sample(&mut rng);
            e
        })
        .collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    let mut parts = Vec::with_capacity(terms);
    for (k, &w) in weights.iter().enumerate() {
        let a = random_mixed(left, spec.stream(2 * k as u64 + 1))?;
        let b = random_mixed(right, spec.stream(2 * k as u64 + 2))?;
        parts.push((w, a.tensor(&b)?));
    }
    // normalise rounding in the weights
    let s: f64 = parts.iter().map(|(w, _)| w).sum();
    parts.iter_mut().for_each(|(w, _)| *w /= s);
    DensityMatrix::mixture(&parts)
}

/// Checks `ρ^{T_flip} ⪰ 0` up to `tol`.
pub fn is_ppt(rho: &DensityMatrix, flip: &[usize], tol: f64) -> Result<bool> {
    let pt = rho.partial_transpose(flip)?;
    Ok(qla::herm_eigvals_unchecked(&pt)[0] >= -tol)
}

/// Permutes the `(d, d)` state `ψ^{XY}` and a `ρ^Z` into a tripartite shape
/// `(A, B, C) = (X, Z, Y)`.
pub fn embed_ac_b(rho_ac: &DensityMatrix, rho_b: &DensityMatrix) -> Result<DensityMatrix> {
    if rho_ac.shape().len() != 2 || rho_b.shape().len() != 1 {
        return contract("embed_ac_b expects a bipartite AC state and a single-system B state");
    }
    rho_ac.tensor(rho_b)?.permute(&[0, 2, 1])
}
