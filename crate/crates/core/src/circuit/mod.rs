//! Combinational gate-level netlists over the eight basic gates.
//!
//! A [`Circuit`] is a plain value: constructing one never fails, and
//! [`Circuit::validate`] reports every broken netlist rule as data. Parsers
//! and encoders only accept circuits that validate.

mod bench;
mod sim;
mod verilog;

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bench::{emit_bench, parse_bench};
pub use sim::Evaluator;
pub use verilog::{emit_verilog, parse_structural_verilog};

/// Net name → value. Used both for simulation stimuli and results.
pub type Assignment = BTreeMap<String, bool>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GateType {
    And,
    Nand,
    Or,
    Nor,
    Xor,
    Xnor,
    Not,
    Buf,
}

impl GateType {
    pub const ALL: [GateType; 8] = [
        GateType::And,
        GateType::Nand,
        GateType::Or,
        GateType::Nor,
        GateType::Buf,
        GateType::Not,
        GateType::Xor,
        GateType::Xnor,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateType::Not | GateType::Buf => 1,
            _ => 2,
        }
    }

    /// Evaluates the gate on `inputs`, which must have exactly `arity()` entries.
    pub fn eval(self, inputs: &[bool]) -> bool {
        match (self, inputs) {
            (GateType::Not, [a]) => !a,
            (GateType::Buf, [a]) => *a,
            (GateType::And, [a, b]) => a & b,
            (GateType::Nand, [a, b]) => !(a & b),
            (GateType::Or, [a, b]) => a | b,
            (GateType::Nor, [a, b]) => !(a | b),
            (GateType::Xor, [a, b]) => a ^ b,
            (GateType::Xnor, [a, b]) => !(a ^ b),
            _ => panic!("{self} expects {} inputs, got {}", self.arity(), inputs.len()),
        }
    }

    /// Bit-parallel evaluation; `b` is ignored for unary gates.
    pub fn eval_word(self, a: u64, b: u64) -> u64 {
        match self {
            GateType::Not => !a,
            GateType::Buf => a,
            GateType::And => a & b,
            GateType::Nand => !(a & b),
            GateType::Or => a | b,
            GateType::Nor => !(a | b),
            GateType::Xor => a ^ b,
            GateType::Xnor => !(a ^ b),
        }
    }

    /// Keyword used in `.bench` files. Buffers are written `BUFF`.
    pub fn bench_keyword(self) -> &'static str {
        match self {
            GateType::Buf => "BUFF",
            other => other.name(),
        }
    }

    pub fn from_bench_keyword(word: &str) -> Option<Self> {
        match word.to_ascii_uppercase().as_str() {
            "BUFF" | "BUF" => Some(GateType::Buf),
            "AND" => Some(GateType::And),
            "NAND" => Some(GateType::Nand),
            "OR" => Some(GateType::Or),
            "NOR" => Some(GateType::Nor),
            "XOR" => Some(GateType::Xor),
            "XNOR" => Some(GateType::Xnor),
            "NOT" => Some(GateType::Not),
            _ => None,
        }
    }

    pub fn verilog_primitive(self) -> &'static str {
        match self {
            GateType::And => "and",
            GateType::Nand => "nand",
            GateType::Or => "or",
            GateType::Nor => "nor",
            GateType::Xor => "xor",
            GateType::Xnor => "xnor",
            GateType::Not => "not",
            GateType::Buf => "buf",
        }
    }

    pub fn from_verilog_primitive(word: &str) -> Option<Self> {
        GateType::ALL.into_iter().find(|g| g.verilog_primitive() == word)
    }

    pub fn name(self) -> &'static str {
        match self {
            GateType::And => "AND",
            GateType::Nand => "NAND",
            GateType::Or => "OR",
            GateType::Nor => "NOR",
            GateType::Xor => "XOR",
            GateType::Xnor => "XNOR",
            GateType::Not => "NOT",
            GateType::Buf => "BUF",
        }
    }
}

impl fmt::Display for GateType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateType,
    pub inputs: Vec<String>,
    pub output: String,
}

impl Gate {
    pub fn new<S: Into<String>>(kind: GateType, inputs: Vec<S>, output: impl Into<String>) -> Self {
        Gate {
            kind,
            inputs: inputs.into_iter().map(Into::into).collect(),
            output: output.into(),
        }
    }

    /// Inputs in a canonical order. Every two-input gate in the basis is
    /// commutative, so this is the identity key of the gate's function.
    fn sorted_inputs(&self) -> Vec<&str> {
        let mut v: Vec<&str> = self.inputs.iter().map(String::as_str).collect();
        v.sort_unstable();
        v
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}({})", self.output, self.kind, self.inputs.join(", "))
    }
}

/// A named combinational netlist.
///
/// Equality is netlist equality: gate order and the operand order of the
/// (commutative) two-input gates do not matter, port order does.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Circuit {
    pub name: String,
    pub primary_inputs: Vec<String>,
    pub primary_outputs: Vec<String>,
    pub gates: Vec<Gate>,
}

impl PartialEq for Circuit {
    fn eq(&self, other: &Self) -> bool {
        if self.name != other.name
            || self.primary_inputs != other.primary_inputs
            || self.primary_outputs != other.primary_outputs
            || self.gates.len() != other.gates.len()
        {
            return false;
        }
        fn key(c: &Circuit) -> Vec<(&str, GateType, Vec<&str>)> {
            let mut gates: Vec<(&str, GateType, Vec<&str>)> = c
                .gates
                .iter()
                .map(|g| (g.output.as_str(), g.kind, g.sorted_inputs()))
                .collect();
            gates.sort();
            gates
        }
        key(self) == key(other)
    }
}

impl Eq for Circuit {}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    InvalidName(String),
    ArityMismatch { gate: String, kind: GateType, found: usize },
    EmptyOutputName,
    SelfLoop(String),
    RepeatedGateInput(String),
    MultipleDrivers(String),
    UndrivenNet { net: String, reader: String },
    UndrivenOutput(String),
    DuplicatePort(String),
    OutputIsInput(String),
    CombinationalCycle(Vec<String>),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::InvalidName(n) => write!(f, "invalid net name: {n:?}"),
            Violation::ArityMismatch { gate, kind, found } => write!(
                f,
                "arity mismatch: {gate} is {kind} with {found} inputs (expected {})",
                kind.arity()
            ),
            Violation::EmptyOutputName => write!(f, "gate with empty output name"),
            Violation::SelfLoop(n) => write!(f, "gate output feeds itself: {n}"),
            Violation::RepeatedGateInput(n) => write!(f, "repeated gate input: {n}"),
            Violation::MultipleDrivers(n) => write!(f, "multiple drivers: {n}"),
            Violation::UndrivenNet { net, reader } => write!(f, "undriven net: {net} (read by {reader})"),
            Violation::UndrivenOutput(n) => write!(f, "undriven primary output: {n}"),
            Violation::DuplicatePort(n) => write!(f, "duplicate port: {n}"),
            Violation::OutputIsInput(n) => write!(f, "primary output is a primary input: {n}"),
            Violation::CombinationalCycle(nets) => {
                write!(f, "combinational cycle through {}", nets.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        let lines: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        f.write_str(&lines.join("; "))
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CircuitError {
    #[error("invalid circuit: {0}")]
    Invalid(ValidationReport),
    #[error("combinational cycle through {}", .0.join(","))]
    CyclicCircuit(Vec<String>),
    #[error("missing input: {0}")]
    MissingInput(String),
    #[error("unknown input: {0}")]
    UnknownInput(String),
    #[error("line {line}: {message}")]
    ParseError { line: usize, message: String },
    #[error("unknown gate: {0}")]
    UnknownGate(String),
    #[error("unsupported construct: {0}")]
    UnsupportedConstruct(String),
}

pub fn is_valid_net_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Circuit {
    pub fn new<S: Into<String>>(
        name: impl Into<String>,
        primary_inputs: Vec<S>,
        primary_outputs: Vec<S>,
        gates: Vec<Gate>,
    ) -> Self {
        Circuit {
            name: name.into(),
            primary_inputs: primary_inputs.into_iter().map(Into::into).collect(),
            primary_outputs: primary_outputs.into_iter().map(Into::into).collect(),
            gates,
        }
    }

    /// Builds a circuit and rejects it unless every netlist rule holds.
    pub fn try_new<S: Into<String>>(
        name: impl Into<String>,
        primary_inputs: Vec<S>,
        primary_outputs: Vec<S>,
        gates: Vec<Gate>,
    ) -> Result<Self, CircuitError> {
        let c = Circuit::new(name, primary_inputs, primary_outputs, gates);
        c.ensure_valid()?;
        Ok(c)
    }

    pub fn ensure_valid(&self) -> Result<(), CircuitError> {
        let report = self.validate();
        if report.is_ok() {
            Ok(())
        } else {
            Err(CircuitError::Invalid(report))
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut v = Vec::new();
        if !is_valid_net_name(&self.name) {
            v.push(Violation::InvalidName(self.name.clone()));
        }

        let mut drivers: HashMap<&str, usize> = HashMap::new();
        let mut seen_ports: HashSet<&str> = HashSet::new();
        for pi in &self.primary_inputs {
            if !is_valid_net_name(pi) {
                v.push(Violation::InvalidName(pi.clone()));
            }
            if !seen_ports.insert(pi) {
                v.push(Violation::DuplicatePort(pi.clone()));
            }
            *drivers.entry(pi).or_default() += 1;
        }
        let inputs: HashSet<&str> = self.primary_inputs.iter().map(String::as_str).collect();
        for po in &self.primary_outputs {
            if !is_valid_net_name(po) {
                v.push(Violation::InvalidName(po.clone()));
            }
            if !seen_ports.insert(po) {
                if inputs.contains(po.as_str()) {
                    v.push(Violation::OutputIsInput(po.clone()));
                } else {
                    v.push(Violation::DuplicatePort(po.clone()));
                }
            }
        }

        for g in &self.gates {
            if g.output.is_empty() {
                v.push(Violation::EmptyOutputName);
            } else if !is_valid_net_name(&g.output) {
                v.push(Violation::InvalidName(g.output.clone()));
            }
            if g.inputs.len() != g.kind.arity() {
                v.push(Violation::ArityMismatch {
                    gate: g.output.clone(),
                    kind: g.kind,
                    found: g.inputs.len(),
                });
            }
            for i in &g.inputs {
                if !is_valid_net_name(i) {
                    v.push(Violation::InvalidName(i.clone()));
                }
            }
            if g.inputs.contains(&g.output) {
                v.push(Violation::SelfLoop(g.output.clone()));
            }
            if g.inputs.len() == 2 && g.inputs[0] == g.inputs[1] {
                v.push(Violation::RepeatedGateInput(g.output.clone()));
            }
            *drivers.entry(&g.output).or_default() += 1;
        }

        let mut multi: Vec<&str> = drivers.iter().filter(|(_, &n)| n > 1).map(|(k, _)| *k).collect();
        multi.sort_unstable();
        v.extend(multi.into_iter().map(|n| Violation::MultipleDrivers(n.to_string())));

        for g in &self.gates {
            for i in &g.inputs {
                if !drivers.contains_key(i.as_str()) {
                    v.push(Violation::UndrivenNet {
                        net: i.clone(),
                        reader: g.output.clone(),
                    });
                }
            }
        }
        for po in &self.primary_outputs {
            if !drivers.contains_key(po.as_str()) {
                v.push(Violation::UndrivenOutput(po.clone()));
            }
        }

        for cycle in self.cycles() {
            v.push(Violation::CombinationalCycle(cycle));
        }
        ValidationReport { violations: v }
    }

    /// Net groups that lie on combinational cycles (one sorted group per
    /// connected knot); empty for acyclic netlists.
    fn cycles(&self) -> Vec<Vec<String>> {
        let (order, _) = self.kahn();
        if order.len() == self.gates.len() {
            return Vec::new();
        }
        let placed: HashSet<usize> = order.into_iter().collect();
        let mut remaining: Vec<usize> = (0..self.gates.len()).filter(|i| !placed.contains(i)).collect();

        // Strip gates whose output nobody in the remaining set reads; what is
        // left is cycles plus paths between them.
        loop {
            let read: HashSet<&str> = remaining
                .iter()
                .flat_map(|&i| self.gates[i].inputs.iter().map(String::as_str))
                .collect();
            let before = remaining.len();
            remaining.retain(|&i| read.contains(self.gates[i].output.as_str()));
            if remaining.len() == before {
                break;
            }
        }

        // Group by connectivity (union-find over shared nets).
        let mut parent: Vec<usize> = (0..remaining.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        let pos: HashMap<&str, usize> = remaining
            .iter()
            .enumerate()
            .map(|(k, &i)| (self.gates[i].output.as_str(), k))
            .collect();
        for (k, &i) in remaining.iter().enumerate() {
            for inp in &self.gates[i].inputs {
                if let Some(&j) = pos.get(inp.as_str()) {
                    let (a, b) = (find(&mut parent, k), find(&mut parent, j));
                    parent[a] = b;
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for (k, &i) in remaining.iter().enumerate() {
            let root = find(&mut parent, k);
            groups.entry(root).or_default().push(self.gates[i].output.clone());
        }
        let mut out: Vec<Vec<String>> = groups
            .into_values()
            .map(|mut g| {
                g.sort();
                g.dedup();
                g
            })
            .collect();
        out.sort();
        out
    }

    /// Kahn's algorithm with the smallest ready output name picked first.
    /// Returns the placed gate indices and whether all gates were placed.
    fn kahn(&self) -> (Vec<usize>, bool) {
        let mut driver: HashMap<&str, usize> = HashMap::new();
        for (i, g) in self.gates.iter().enumerate() {
            driver.entry(g.output.as_str()).or_insert(i);
        }
        let mut pending = vec![0usize; self.gates.len()];
        let mut readers: Vec<Vec<usize>> = vec![Vec::new(); self.gates.len()];
        for (i, g) in self.gates.iter().enumerate() {
            for inp in &g.inputs {
                if let Some(&d) = driver.get(inp.as_str()) {
                    pending[i] += 1;
                    readers[d].push(i);
                }
            }
        }
        let mut ready: BinaryHeap<Reverse<(&str, usize)>> = pending
            .iter()
            .enumerate()
            .filter(|(_, &n)| n == 0)
            .map(|(i, _)| Reverse((self.gates[i].output.as_str(), i)))
            .collect();
        let mut order = Vec::with_capacity(self.gates.len());
        while let Some(Reverse((_, i))) = ready.pop() {
            order.push(i);
            for &r in &readers[i] {
                pending[r] -= 1;
                if pending[r] == 0 {
                    ready.push(Reverse((self.gates[r].output.as_str(), r)));
                }
            }
        }
        let complete = order.len() == self.gates.len();
        (order, complete)
    }

    /// Gate indices in dependency order, ties broken by ascending output name.
    pub fn topo_indices(&self) -> Result<Vec<usize>, CircuitError> {
        let (order, complete) = self.kahn();
        if complete {
            Ok(order)
        } else {
            let nets = self.cycles().into_iter().flatten().collect();
            Err(CircuitError::CyclicCircuit(nets))
        }
    }

    pub fn topo_order(&self) -> Result<Vec<&Gate>, CircuitError> {
        Ok(self.topo_indices()?.into_iter().map(|i| &self.gates[i]).collect())
    }

    /// Gate outputs that are not primary outputs, in topological order.
    pub fn internal_nets(&self) -> Result<Vec<&str>, CircuitError> {
        let outs: HashSet<&str> = self.primary_outputs.iter().map(String::as_str).collect();
        Ok(self
            .topo_order()?
            .into_iter()
            .map(|g| g.output.as_str())
            .filter(|n| !outs.contains(n))
            .collect())
    }

    /// Evaluates the circuit on a full primary-input assignment.
    pub fn simulate(&self, inputs: &Assignment) -> Result<Assignment, CircuitError> {
        for name in inputs.keys() {
            if !self.primary_inputs.contains(name) {
                return Err(CircuitError::UnknownInput(name.clone()));
            }
        }
        let mut values: HashMap<&str, bool> = HashMap::with_capacity(self.gates.len() + inputs.len());
        for pi in &self.primary_inputs {
            let v = inputs.get(pi).ok_or_else(|| CircuitError::MissingInput(pi.clone()))?;
            values.insert(pi, *v);
        }
        let mut operands = Vec::with_capacity(2);
        for g in self.topo_order()? {
            operands.clear();
            for i in &g.inputs {
                match values.get(i.as_str()) {
                    Some(&b) => operands.push(b),
                    None => return Err(CircuitError::Invalid(self.validate())),
                }
            }
            values.insert(&g.output, g.kind.eval(&operands));
        }
        self.primary_outputs
            .iter()
            .map(|po| {
                values
                    .get(po.as_str())
                    .map(|&b| (po.clone(), b))
                    .ok_or_else(|| CircuitError::Invalid(self.validate()))
            })
            .collect()
    }

    /// Convenience: simulate with inputs given as bits of `pattern`
    /// (bit i drives `primary_inputs[i]`).
    pub fn simulate_pattern(&self, pattern: u64) -> Result<Assignment, CircuitError> {
        let inputs = self
            .primary_inputs
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), (pattern >> i) & 1 == 1))
            .collect();
        self.simulate(&inputs)
    }

    pub fn gate_counts(&self) -> BTreeMap<GateType, usize> {
        let mut m = BTreeMap::new();
        for g in &self.gates {
            *m.entry(g.kind).or_default() += 1;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn and_circuit() -> Circuit {
        Circuit::new(
            "c",
            vec!["a", "b"],
            vec!["y"],
            vec![Gate::new(GateType::And, vec!["a", "b"], "y")],
        )
    }

    #[test]
    fn single_and_is_valid() {
        assert!(and_circuit().validate().is_ok());
    }

    #[test]
    fn double_driver_reported() {
        let c = Circuit::new(
            "c",
            vec!["a", "b"],
            vec!["y"],
            vec![
                Gate::new(GateType::And, vec!["a", "b"], "y"),
                Gate::new(GateType::Or, vec!["a", "b"], "y"),
            ],
        );
        let report = c.validate();
        assert!(report.violations.iter().any(|v| v.to_string() == "multiple drivers: y"));
    }

    #[test]
    fn two_cycle_reported() {
        let c = Circuit::new(
            "c",
            Vec::<String>::new(),
            vec!["y".to_string()],
            vec![
                Gate::new(GateType::Not, vec!["z"], "y"),
                Gate::new(GateType::Not, vec!["y"], "z"),
            ],
        );
        let report = c.validate();
        assert!(
            report
                .violations
                .iter()
                .any(|v| v.to_string() == "combinational cycle through y,z"),
            "{report}"
        );
        assert!(matches!(c.topo_order(), Err(CircuitError::CyclicCircuit(_))));
    }

    #[test]
    fn other_violations() {
        let c = Circuit::new(
            "c",
            vec!["a", "a"],
            vec!["q", "a"],
            vec![
                Gate::new(GateType::And, vec!["a"], "x"),
                Gate::new(GateType::Xor, vec!["a", "a"], "w"),
                Gate::new(GateType::Not, vec!["k"], "9bad"),
            ],
        );
        let text = c.validate().to_string();
        for needle in [
            "duplicate port: a",
            "arity mismatch: x",
            "repeated gate input: w",
            "undriven net: k",
            "invalid net name: \"9bad\"",
            "undriven primary output: q",
            "primary output is a primary input: a",
        ] {
            assert!(text.contains(needle), "missing {needle:?} in {text}");
        }
    }

    #[test]
    fn topo_chain_and_tie_break() {
        let chain = Circuit::new(
            "c",
            vec!["a"],
            vec!["z"],
            vec![
                Gate::new(GateType::Not, vec!["y"], "z"),
                Gate::new(GateType::Not, vec!["a"], "y"),
            ],
        );
        let outs: Vec<&str> = chain.topo_order().unwrap().iter().map(|g| g.output.as_str()).collect();
        assert_eq!(outs, ["y", "z"]);

        let indep = Circuit::new(
            "c",
            vec!["a", "b"],
            vec!["p", "q"],
            vec![
                Gate::new(GateType::And, vec!["a", "b"], "p"),
                Gate::new(GateType::Or, vec!["a", "b"], "q"),
            ],
        );
        let outs: Vec<&str> = indep.topo_order().unwrap().iter().map(|g| g.output.as_str()).collect();
        assert_eq!(outs, ["p", "q"]);
        let swapped = Circuit::new(
            "c",
            vec!["a", "b"],
            vec!["q", "p"],
            vec![
                Gate::new(GateType::And, vec!["a", "b"], "q"),
                Gate::new(GateType::Or, vec!["a", "b"], "p"),
            ],
        );
        let outs: Vec<&str> = swapped
            .topo_order()
            .unwrap()
            .iter()
            .map(|g| g.output.as_str())
            .collect();
        assert_eq!(outs, ["p", "q"]);
    }

    #[test]
    fn simulate_basics() {
        let c = and_circuit();
        let out = c
            .simulate(&[("a".to_string(), true), ("b".to_string(), false)].into())
            .unwrap();
        assert_eq!(out, [("y".to_string(), false)].into());
        assert_eq!(
            c.simulate(&[("a".to_string(), true)].into()),
            Err(CircuitError::MissingInput("b".into()))
        );
    }

    #[test]
    fn full_adder_all_ones() {
        let fa = Circuit::try_new(
            "fa",
            vec!["a", "b", "cin"],
            vec!["sum", "cout"],
            vec![
                Gate::new(GateType::Xor, vec!["a", "b"], "p"),
                Gate::new(GateType::Xor, vec!["p", "cin"], "sum"),
                Gate::new(GateType::And, vec!["a", "b"], "g"),
                Gate::new(GateType::And, vec!["p", "cin"], "t"),
                Gate::new(GateType::Or, vec!["g", "t"], "cout"),
            ],
        )
        .unwrap();
        let out = fa.simulate_pattern(0b111).unwrap();
        assert!(out["sum"]);
        assert!(out["cout"]);

        let order = fa.topo_order().unwrap();
        let mut seen: HashSet<&str> = fa.primary_inputs.iter().map(String::as_str).collect();
        for g in order {
            assert!(g.inputs.iter().all(|i| seen.contains(i.as_str())));
            seen.insert(&g.output);
        }
    }

    #[test]
    fn equality_ignores_gate_and_operand_order() {
        let a = and_circuit();
        let mut b = and_circuit();
        b.gates[0].inputs.reverse();
        assert_eq!(a, b);
        b.gates[0].kind = GateType::Or;
        assert_ne!(a, b);
    }
}
