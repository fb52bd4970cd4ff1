//! Computable topology over represented spaces, with every partial
//! computation made total by an explicit fuel budget.
//!
//! * [`kernel`]: names, transducers, dovetailing and a toy counter machine.
//! * [`spaces`]: opens, closeds, overts, separation witnesses and bases.
//! * [`ceers`]: c.e. equivalence relations and their quotient spaces.
//! * [`ideals`]: ideal spaces of c.e. transitive relations.
//! * [`counterexamples`]: the separating spaces and their adversaries.

pub mod ceers;
pub mod counterexamples;
pub mod error;
pub mod ideals;
pub mod kernel;
pub mod spaces;

pub use error::{Error, Result};
