//! Cut introduction for first-order sequent proofs.
//!
//! The pipeline reads the Herbrand instances of a cut-free proof of a Σ₁
//! end-sequent, compresses them with a totally rigid acyclic tree grammar,
//! solves for Π₁ cut formulas, minimizes them by resolution and rebuilds a
//! checked proof with cuts.

pub mod clause;
pub mod construct;
pub mod error;
pub mod families;
pub mod formula;
pub mod grammar;
pub mod herbrand;
pub mod improve;
pub mod interpolate;
pub mod parse;
pub mod pipeline;
pub mod proof;
pub mod sat;
pub mod term;

pub use error::{Error, Result};
pub use formula::{Atom, Formula, Quantifier};
pub use term::{Substitution, Term};
