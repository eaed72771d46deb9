//! Band operators built from symbolic potential sequences.
//!
//! The crate is organised bottom-up:
//!
//! * [`words`]: alphabets, finite words, subword search and factor complexity
//!   on finite windows of bi-infinite sequences.
//! * [`potentials`]: lazily evaluable generators (periodic, quasiperiodic,
//!   Sturmian, substitution, pseudo-ergodic, concatenations of allowed words).
//! * [`operators`]: the band operator `A = sum_j M_{b_j} S^j`, finite sections,
//!   shifts, adjoints and half-line compressions.
//! * [`spectra`]: localized lower norms, norm estimates, the spectral indicator
//!   `gamma(lambda) = min(nu(A - lambda), nu((A - lambda)^*))`, pseudospectrum
//!   grids, half-line eigenvalues and transfer-matrix growth.
//! * [`limits`]: finite-scale certificates for limit-operator relations,
//!   recurrence, linear repetitivity, pseudo-ergodicity and minimality.
//! * [`lang`]: the textual mini-language for potentials, operators and grids.

pub mod error;
pub mod lang;
pub mod limits;
pub mod operators;
pub mod potentials;
pub mod spectra;
pub mod words;

mod interval;
mod kernel;

pub use error::{Error, Result};
pub use interval::Interval;
pub use num_complex::Complex64;
