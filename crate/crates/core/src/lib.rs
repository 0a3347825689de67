//! Tsallis q-generalized quantum discord for two-qubit states.
//!
//! - [`linalg`]: small dense complex matrices, partial traces, Jacobi eigensolver.
//! - [`entropy`]: q-logarithm, Tsallis entropies, linear entropy, discord normalization.
//! - [`states`]: validated density matrices, parametric families, random states.
//! - [`discord`]: `I_q`, `J_q`, the measurement search for `C_q`, `ϑ_q`/`D_q`, closed forms.
//! - [`experiments`]: seeded Monte Carlo and sweep drivers producing [`experiments::CsvTable`]s.
//! - [`cli`]: the `qdiscord` command-line front end.

pub mod cli;
pub mod discord;
pub mod entropy;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod states;

pub use error::{Error, Result};
