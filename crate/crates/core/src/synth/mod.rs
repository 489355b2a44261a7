//! Deterministic reconstruction of netlists from PLF documents and Tseytin
//! CNF, and emission of structural Verilog from the result.

mod extract;
mod stitch;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{emit_verilog, is_valid_net_name, Circuit, CircuitError, Gate};
use crate::encode::{gate_shape, CnfFormula, EncodeError, PlfDocument};

pub use extract::{extract_circuit_from_cnf, extract_gates, GatePattern};
pub use stitch::{stitch_top, Connection, Endpoint, StitchRecipe};

/// Port names and module name for a reconstructed circuit. Encodings alone
/// do not say which defined nets are outputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IoHints {
    #[serde(rename = "module")]
    pub module_name: String,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
}

impl IoHints {
    pub fn new(module_name: impl Into<String>, inputs: Vec<String>, outputs: Vec<String>) -> Self {
        IoHints {
            module_name: module_name.into(),
            inputs,
            outputs,
        }
    }

    /// The ports of an existing circuit.
    pub fn of(c: &Circuit) -> Self {
        IoHints::new(c.name.clone(), c.primary_inputs.clone(), c.primary_outputs.clone())
    }

    pub fn from_json(text: &str) -> Result<Self, SynthError> {
        let h: IoHints = serde_json::from_str(text).map_err(|e| SynthError::InvalidHints(e.to_string()))?;
        h.check()?;
        Ok(h)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain struct serializes")
    }

    pub fn check(&self) -> Result<(), SynthError> {
        if self.inputs.is_empty() || self.outputs.is_empty() {
            return Err(SynthError::InvalidHints("inputs and outputs must be nonempty".into()));
        }
        let mut seen = HashSet::new();
        for n in std::iter::once(&self.module_name)
            .chain(&self.inputs)
            .chain(&self.outputs)
        {
            if !is_valid_net_name(n) {
                return Err(SynthError::InvalidHints(format!("invalid name {n:?}")));
            }
        }
        for n in self.inputs.iter().chain(&self.outputs) {
            if !seen.insert(n) {
                return Err(SynthError::InvalidHints(format!("{n} listed twice")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SynthError {
    #[error("entry {entry} ({output}): unrecognized shape: {reason}")]
    UnrecognizedShape {
        entry: usize,
        output: String,
        reason: String,
    },
    #[error("undriven net: {0}")]
    UndrivenNet(String),
    #[error("output {0} is never defined")]
    OutputMissing(String),
    #[error("{0} clauses match no gate pattern")]
    ResidualClauses(usize),
    #[error("variable {var} ({net}) has several consistent gate decompositions")]
    AmbiguousPattern { var: u32, net: String },
    #[error("port {0} has no variable in the formula")]
    MissingPort(String),
    #[error("invalid io hints: {0}")]
    InvalidHints(String),
    #[error("part {part}: input {net} is not connected")]
    DanglingInput { part: String, net: String },
    #[error("port collision: {0}")]
    PortCollision(String),
    #[error("unknown endpoint: {0}")]
    UnknownEndpoint(String),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
}

/// One gate per entry. Right-hand sides must be one of the eight gate
/// shapes once double negations are removed.
pub fn plf_to_circuit(doc: &PlfDocument, hints: &IoHints) -> Result<Circuit, SynthError> {
    hints.check()?;
    let defined: HashSet<&str> = doc.entries.iter().map(|e| e.output.as_str()).collect();
    let inputs: HashSet<&str> = hints.inputs.iter().map(String::as_str).collect();
    let mut gates = Vec::with_capacity(doc.entries.len());
    for (i, e) in doc.entries.iter().enumerate() {
        let rhs = e.rhs.strip_double_negation();
        let (kind, operands) = gate_shape(&rhs).ok_or_else(|| SynthError::UnrecognizedShape {
            entry: i,
            output: e.output.clone(),
            reason: format!("`{rhs}` is not a basic gate"),
        })?;
        if let Some(free) = operands
            .iter()
            .find(|a| !inputs.contains(a.as_str()) && !defined.contains(a.as_str()))
        {
            return Err(SynthError::UndrivenNet(free.clone()));
        }
        gates.push(Gate::new(kind, operands, e.output.clone()));
    }
    if let Some(missing) = hints.outputs.iter().find(|o| !defined.contains(o.as_str())) {
        return Err(SynthError::OutputMissing(missing.clone()));
    }
    Ok(Circuit::try_new(
        hints.module_name.clone(),
        hints.inputs.clone(),
        hints.outputs.clone(),
        gates,
    )?)
}

#[derive(Debug, Clone, Copy)]
pub enum SynthSource<'a> {
    Plf(&'a PlfDocument),
    Cnf(&'a CnfFormula),
}

pub fn synthesize_circuit(source: SynthSource<'_>, hints: &IoHints) -> Result<Circuit, SynthError> {
    match source {
        SynthSource::Plf(p) => plf_to_circuit(p, hints),
        SynthSource::Cnf(f) => extract_circuit_from_cnf(f, hints),
    }
}

pub fn synthesize_verilog(source: SynthSource<'_>, hints: &IoHints) -> Result<String, SynthError> {
    let c = synthesize_circuit(source, hints)?;
    Ok(emit_verilog(&c)?)
}
