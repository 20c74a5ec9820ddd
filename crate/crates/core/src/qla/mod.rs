//! Dense complex linear algebra and the multipartite index algebra.

mod eig;
mod entropy;
mod matrix;
mod shape;

pub use eig::{herm_eig, herm_eigvals, singular_values, HermEig, HERMITIAN_TOL};
pub(crate) use eig::{herm_eig_unchecked, herm_eigvals_unchecked};
pub use entropy::{
    binary_entropy, matrix_log2, rel_entropy, schatten_norm, spectrum_entropy,
    von_neumann_entropy, xlogx_neg, CLIP_TOL, SUPPORT_TOL,
};
pub use matrix::{tensor, tensor_all, CMatrix, MAX_DIM};
pub use shape::{embed, partial_trace, partial_transpose, permute_subsystems, SystemShape};
pub(crate) use shape::permutation_map;
