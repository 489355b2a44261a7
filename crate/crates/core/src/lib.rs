//! Deterministic core of a CNF-guided Verilog synthesis flow.
//!
//! Gate-level netlists ([`circuit`]) are encoded as Tseytin CNF or as
//! per-gate propositional formulas ([`encode`]), checked for equivalence
//! with a miter and a small DPLL solver ([`equiv`], [`sat`]), rebuilt into
//! structural Verilog ([`synth`]), and used to generate prompt/completion
//! corpora ([`corpus`]) and grade text-generation backends ([`llm`],
//! [`eval`]).

pub mod circuit;
pub mod corpus;
pub mod encode;
pub mod equiv;
pub mod eval;
pub mod llm;
pub mod par;
pub mod sat;
pub mod synth;

pub use circuit::{Assignment, Circuit, Gate, GateType};
pub use encode::{CnfFormula, PlfDocument};
