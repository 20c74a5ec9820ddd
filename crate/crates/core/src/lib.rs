//! Numerics for noisy entanglement distribution.
//!
//! The crate is organised bottom-up:
//!
//! - [`qla`]: dense complex linear algebra and the multipartite index algebra
//!   (tensor products, partial traces and transposes, Hermitian eigensolver,
//!   Schatten norms, relative entropy).
//! - [`states`]: density matrices, pure states and the concrete states used in
//!   the distribution scenarios, plus seeded random ensembles.
//! - [`channels`]: CPTP maps in Kraus form (Pauli, amplitude/phase damping,
//!   Weyl-covariant, Markovian families) and their composition.
//! - [`measures`]: entanglement and discord quantifiers, including the
//!   variational ones (relative entropy of entanglement and Schatten distances
//!   over the PPT set, measurement-based discord).
//! - [`protocols`]: distribution scenarios, teleportation simulation of
//!   covariant channels, optimal-input search and the inequality checkers.
//!
//! All logarithms are base 2. Subsystem ordering is row-major: the basis
//! vector `|i0 i1 ... >` has index `sum_k i_k * prod_{j>k} d_j`.

pub mod channels;
pub mod error;
pub mod measures;
pub mod optim;
pub mod protocols;
pub mod qla;
pub mod states;

pub use error::{Error, Result};
pub use num_complex::Complex64;
