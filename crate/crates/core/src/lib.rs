//! Infeasibility diagnosis for pseudo-Boolean constraint models.
//!
//! The pipeline: a CDCL-style search ([`search::extract_conflict_set`])
//! propagates, analyzes conflicts over the implication graph, and
//! accumulates a compact conflict core naming the original constraints
//! involved. The core (or any infeasible constraint set) can then be
//! minimized to an Irreducible Infeasible Subset with QuickXplain, a
//! deletion filter, or the hybrid additive-deletion method
//! ([`minimize`]). A seeded workforce-scheduling generator and benchmark
//! runner ([`bench`]) exercise the whole stack and emit CSV reports.

pub mod bench;
pub mod dot;
pub mod engine;
mod error;
pub mod io;
pub mod minimize;
pub mod model;
pub mod search;
pub mod testutil;
pub mod trace;

pub use error::{GenError, MinimizeError, ModelError};
pub use model::{Lit, Model, NormConstraint, RawConstraint, Sense, Var};
pub use search::{extract_conflict_set, ConflictCore, RunStats, SearchOptions, SearchOutcome};
