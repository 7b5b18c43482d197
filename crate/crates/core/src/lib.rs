//! Persistent homology of Erdős–Rényi random clique complex filtrations.
//!
//! The pipeline for one sample is
//! [`EdgeFiltration::sample`] → [`FlagFiltration::build`] →
//! [`compute_persistence`] → statistics in [`stats`] and counts of
//! cross-polytope witness cycles in [`special`]. The [`experiment`] module
//! runs seeded, parallel sweeps of that pipeline and writes CSV/JSON.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiment;
pub mod field;
pub mod filtration;
pub mod flag;
pub mod persistence;
pub mod special;
pub mod stats;
pub mod util;

pub use error::{Error, Result};
pub use filtration::{EdgeFiltration, GraphSnapshot};
pub use flag::{adaptive_cap, simplex_value, FilteredSimplex, FlagFiltration, Simplex};
pub use persistence::{
    compute_persistence, naive_reduction_oracle, Death, PersistenceDiagram, PersistencePair,
};
