//! CNF and PLF encodings of circuits, their text formats, and token counts.

mod cnf;
mod dimacs;
mod plf;
mod tokens;
mod tseytin;

use thiserror::Error;

use crate::circuit::{CircuitError, ValidationReport};

pub use cnf::{Clause, CnfFormula, Literal, Ports, VarMap};
pub use dimacs::{emit_dimacs, parse_dimacs};
pub use plf::{emit_plf, emit_plf_entries, parse_entry, parse_plf, PlfDocument, PlfEntry, PlfError, PlfExpr};
pub use tokens::{count_tokens, tokenize, TokenCount, TOKENIZER_ID};
pub use tseytin::{gate_expr, gate_shape, gate_template, plf_encode, plf_to_cnf, template_size, tseytin_encode};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EncodeError {
    #[error("invalid circuit: {0}")]
    InvalidCircuit(ValidationReport),
    #[error(transparent)]
    Circuit(CircuitError),
    #[error("invalid clause: {0}")]
    InvalidClause(String),
    #[error("invalid formula: {0}")]
    InvalidFormula(String),
    #[error("malformed PLF entry {entry}: {reason}")]
    MalformedPlf { entry: usize, reason: String },
    #[error("DIMACS line {line}: {message}")]
    Dimacs { line: usize, message: String },
}

impl From<CircuitError> for EncodeError {
    fn from(e: CircuitError) -> Self {
        match e {
            CircuitError::Invalid(r) => EncodeError::InvalidCircuit(r),
            other => EncodeError::Circuit(other),
        }
    }
}
