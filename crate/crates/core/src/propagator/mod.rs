//! Time-slice propagation of small Hermitian Hamiltonians.

mod bessel;
mod evolve;
mod expm;
mod matrix;
mod spectrum;

pub use bessel::{bessel_j, bessel_j_sequence};
pub use evolve::{evolve, evolve_traced, StateTrace, TimeGrid};
pub use expm::{expm_chebyshev, expm_chebyshev_capped, expm_eig_oracle, DEFAULT_TERM_CAP};
pub use matrix::ComplexMatrix;
pub use spectrum::{hermitian_eigenvalues, hermitian_extremes};
