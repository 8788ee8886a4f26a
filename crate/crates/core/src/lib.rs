//! Exact spectra, eigenstate moments and densities of polynomial
//! Hamiltonians from the algebra of observables: moment recurrences,
//! positivity of moment matrices and generating-function recurrences, with a
//! truncated-basis numerical oracle for cross-checks.

pub mod error;
pub mod exact;

pub use error::{Error, Result};
pub mod weyl;
pub mod harmonic_moments;
pub mod moments;
pub mod positivity;
pub mod lmethod;
pub mod anharmonic;
pub mod hypervirial;
pub mod fermion;
pub mod oracle;
pub mod cli;
