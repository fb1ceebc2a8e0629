use thiserror::Error;

use crate::grammar::{Diagnostic, Sentence};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("invalid grammar: {}", format_diagnostics(.0))]
    Invalid(Vec<Diagnostic>),

    #[error("language exceeds enumeration limit of {limit} (reached {reached} sentences)")]
    LimitExceeded { limit: usize, reached: usize },

    #[error("grammar does not generate {} corpus sentence(s), first: {}", .0.len(), first_sentence(.0))]
    Coverage(Vec<Sentence>),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("operation rejected: {0}")]
    Rejected(String),

    #[error("unknown name: {0}")]
    UnknownName(String),
}

pub type Result<T> = std::result::Result<T, Error>;

fn format_diagnostics(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

fn first_sentence(missing: &[Sentence]) -> String {
    missing
        .first()
        .map(crate::grammar::sentence_to_string)
        .unwrap_or_default()
}
