//! Minimum-description-length grammar induction over semantic corpora, and
//! the analysis of induced grammars into compositional meaning functions.

pub mod builtin;
pub mod canon;
pub mod dl;
pub mod error;
pub mod generator;
pub mod grammar;
pub mod induction;
pub mod io;
pub mod semantics;
pub mod tuple;

pub use error::{Error, Result};
