//! Combinational equivalence: miter construction plus SAT, and structural
//! comparison of CNF encodings up to clause order and auxiliary renaming.

mod cnf_match;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{Assignment, Circuit, CircuitError, Gate, GateType};
use crate::encode::{tseytin_encode, Clause, EncodeError, Literal};
use crate::sat::{SatError, SatResult, Solver, SolverConfig, SolverStats};

pub use cnf_match::{
    check_cnf_equivalence, check_cnf_equivalence_with, CnfMatchReport, Diagnostic, DiagnosticKind, MatchVerdict,
    SEARCH_BUDGET,
};

pub const MITER_OUT: &str = "miter_out";

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PortDiff {
    pub missing_inputs: Vec<String>,
    pub extra_inputs: Vec<String>,
    pub missing_outputs: Vec<String>,
    pub extra_outputs: Vec<String>,
}

impl PortDiff {
    fn between(c1: &Circuit, c2: &Circuit) -> Self {
        let diff = |a: &[String], b: &[String]| -> Vec<String> {
            let b: HashSet<&String> = b.iter().collect();
            a.iter().filter(|n| !b.contains(n)).cloned().collect()
        };
        PortDiff {
            missing_inputs: diff(&c1.primary_inputs, &c2.primary_inputs),
            extra_inputs: diff(&c2.primary_inputs, &c1.primary_inputs),
            missing_outputs: diff(&c1.primary_outputs, &c2.primary_outputs),
            extra_outputs: diff(&c2.primary_outputs, &c1.primary_outputs),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.missing_inputs.is_empty()
            && self.extra_inputs.is_empty()
            && self.missing_outputs.is_empty()
            && self.extra_outputs.is_empty()
    }
}

impl fmt::Display for PortDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (label, v) in [
            ("missing inputs", &self.missing_inputs),
            ("extra inputs", &self.extra_inputs),
            ("missing outputs", &self.missing_outputs),
            ("extra outputs", &self.extra_outputs),
        ] {
            if !v.is_empty() {
                parts.push(format!("{label}: {}", v.join(", ")));
            }
        }
        f.write_str(&parts.join("; "))
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EquivError {
    #[error("interface mismatch: {0}")]
    InterfaceMismatch(PortDiff),
    #[error("net name {0} is reserved for the miter output")]
    ReservedName(String),
    #[error("not comparable: {0}")]
    NotComparable(String),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Sat(#[from] SatError),
    #[error("solver model does not distinguish the circuits")]
    SpuriousCounterexample,
}

/// The composed miter and the nets that make it up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MiterRecipe {
    pub miter: Circuit,
    pub inputs: Vec<String>,
    /// One XOR net per output pair, in `c1` output order.
    pub xor_nets: Vec<String>,
    pub out_net: String,
}

/// A prefix no primary input starts with, so renamed nets cannot collide.
fn fresh_prefix(inputs: &[String]) -> String {
    let mut p = String::from("m");
    while inputs.iter().any(|i| i.starts_with(&p)) {
        p.push('_');
    }
    p
}

pub fn build_miter(c1: &Circuit, c2: &Circuit) -> Result<MiterRecipe, EquivError> {
    c1.ensure_valid()?;
    c2.ensure_valid()?;
    let diff = PortDiff::between(c1, c2);
    if !diff.is_empty() {
        return Err(EquivError::InterfaceMismatch(diff));
    }
    if c1.primary_inputs.iter().any(|i| i == MITER_OUT) {
        return Err(EquivError::ReservedName(MITER_OUT.into()));
    }
    let p = fresh_prefix(&c1.primary_inputs);
    let inputs: HashSet<&str> = c1.primary_inputs.iter().map(String::as_str).collect();
    let mut gates = Vec::with_capacity(c1.gates.len() + c2.gates.len() + 2 * c1.primary_outputs.len());
    for (side, c) in [(1, c1), (2, c2)] {
        let net = |n: &String| {
            if inputs.contains(n.as_str()) {
                n.clone()
            } else {
                format!("{p}{side}_{n}")
            }
        };
        gates.extend(
            c.gates
                .iter()
                .map(|g| Gate::new(g.kind, g.inputs.iter().map(net).collect(), net(&g.output))),
        );
    }

    let k = c1.primary_outputs.len();
    let xor_nets: Vec<String> = (0..k)
        .map(|i| {
            if k == 1 {
                MITER_OUT.to_string()
            } else {
                format!("{p}x{i}")
            }
        })
        .collect();
    for (o, x) in c1.primary_outputs.iter().zip(&xor_nets) {
        gates.push(Gate::new(
            GateType::Xor,
            vec![format!("{p}1_{o}"), format!("{p}2_{o}")],
            x.clone(),
        ));
    }
    let mut level = xor_nets.clone();
    let mut fresh = 0;
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        let last_level = level.len() == 2;
        for pair in level.chunks(2) {
            match pair {
                [a, b] => {
                    let out = if last_level {
                        MITER_OUT.to_string()
                    } else {
                        fresh += 1;
                        format!("{p}o{fresh}")
                    };
                    gates.push(Gate::new(GateType::Or, vec![a.clone(), b.clone()], out.clone()));
                    next.push(out);
                }
                [a] => next.push(a.clone()),
                _ => unreachable!(),
            }
        }
        level = next;
    }

    let miter = Circuit::try_new(
        format!("miter_{}_{}", c1.name, c2.name),
        c1.primary_inputs.clone(),
        vec![MITER_OUT.to_string()],
        gates,
    )?;
    Ok(MiterRecipe {
        miter,
        inputs: c1.primary_inputs.clone(),
        xor_nets,
        out_net: MITER_OUT.to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub inputs: Assignment,
    pub outputs1: Assignment,
    pub outputs2: Assignment,
}

impl Counterexample {
    /// Output names whose values differ.
    pub fn differing_outputs(&self) -> Vec<&str> {
        self.outputs1
            .iter()
            .filter(|(k, v)| self.outputs2.get(*k) != Some(v))
            .map(|(k, _)| k.as_str())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum EquivVerdict {
    Equivalent,
    NotEquivalent(Counterexample),
}

impl EquivVerdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, EquivVerdict::Equivalent)
    }
}

pub fn check_circuit_equivalence(c1: &Circuit, c2: &Circuit) -> Result<EquivVerdict, EquivError> {
    check_circuit_equivalence_with(c1, c2, &SolverConfig::default()).map(|(v, _)| v)
}

pub fn check_circuit_equivalence_with(
    c1: &Circuit,
    c2: &Circuit,
    config: &SolverConfig,
) -> Result<(EquivVerdict, SolverStats), EquivError> {
    let recipe = build_miter(c1, c2)?;
    let mut f = tseytin_encode(&recipe.miter)?;
    let out = f.var_map.var(MITER_OUT).expect("miter output is encoded");
    f.push_clause(Clause::new(vec![Literal::pos(out)])?)?;
    let (result, stats) = Solver::new(*config).solve(&f)?;
    let SatResult::Sat(model) = result else {
        return Ok((EquivVerdict::Equivalent, stats));
    };
    let inputs: Assignment = recipe
        .inputs
        .iter()
        .map(|n| (n.clone(), model[f.var_map.var(n).expect("input is encoded") as usize]))
        .collect();
    let outputs1 = c1.simulate(&inputs)?;
    let outputs2 = c2.simulate(&inputs)?;
    if outputs1 == outputs2 {
        return Err(EquivError::SpuriousCounterexample);
    }
    Ok((
        EquivVerdict::NotEquivalent(Counterexample {
            inputs,
            outputs1,
            outputs2,
        }),
        stats,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Evaluator;

    fn two_input(kind: GateType) -> Circuit {
        Circuit::try_new(
            "g",
            vec!["a", "b"],
            vec!["y"],
            vec![Gate::new(kind, vec!["a", "b"], "y")],
        )
        .unwrap()
    }

    #[test]
    fn self_miter_shape() {
        let c = two_input(GateType::And);
        let r = build_miter(&c, &c).unwrap();
        let counts = r.miter.gate_counts();
        assert_eq!(counts.get(&GateType::And), Some(&2));
        assert_eq!(counts.get(&GateType::Xor), Some(&1));
        assert_eq!(counts.get(&GateType::Or), None);
        assert_eq!(r.miter.primary_outputs, [MITER_OUT]);
        for p in 0..4 {
            assert!(!r.miter.simulate_pattern(p).unwrap()[MITER_OUT]);
        }
    }

    #[test]
    fn and_or_miter_fires() {
        let r = build_miter(&two_input(GateType::And), &two_input(GateType::Or)).unwrap();
        assert!(r.miter.simulate_pattern(0b01).unwrap()[MITER_OUT]);
        let v = check_circuit_equivalence(&two_input(GateType::And), &two_input(GateType::Or)).unwrap();
        let EquivVerdict::NotEquivalent(cx) = v else {
            panic!("expected a counterexample")
        };
        assert_ne!(cx.inputs["a"], cx.inputs["b"]);
        assert_eq!(cx.differing_outputs(), ["y"]);
    }

    #[test]
    fn reflexive() {
        for k in GateType::ALL.into_iter().filter(|k| k.arity() == 2) {
            assert!(check_circuit_equivalence(&two_input(k), &two_input(k))
                .unwrap()
                .is_equivalent());
        }
    }

    #[test]
    fn or_tree_is_balanced() {
        let outs: Vec<String> = (0..5).map(|i| format!("y{i}")).collect();
        let gates: Vec<Gate> = outs
            .iter()
            .map(|o| Gate::new(GateType::And, vec!["a", "b"], o.clone()))
            .collect();
        let c = Circuit::try_new("w", vec!["a".into(), "b".into()], outs, gates).unwrap();
        let r = build_miter(&c, &c).unwrap();
        assert_eq!(r.miter.gates.len(), 5 + 5 + 5 + 4);
        assert_eq!(r.xor_nets.len(), 5);
        let e = Evaluator::new(&r.miter).unwrap();
        assert_eq!(e.eval_block(0)[0] & 0xf, 0);
    }

    #[test]
    fn interface_mismatch_lists_ports() {
        let a = two_input(GateType::And);
        let b = Circuit::try_new(
            "g",
            vec!["a", "c"],
            vec!["y"],
            vec![Gate::new(GateType::And, vec!["a", "c"], "y")],
        )
        .unwrap();
        let Err(EquivError::InterfaceMismatch(d)) = build_miter(&a, &b) else {
            panic!()
        };
        assert_eq!(d.missing_inputs, ["b"]);
        assert_eq!(d.extra_inputs, ["c"]);
    }

    #[test]
    fn renaming_avoids_input_prefixes() {
        let c = Circuit::try_new(
            "g",
            vec!["m1_t", "b"],
            vec!["y"],
            vec![
                Gate::new(GateType::Not, vec!["m1_t"], "t"),
                Gate::new(GateType::And, vec!["t", "b"], "y"),
            ],
        )
        .unwrap();
        assert!(check_circuit_equivalence(&c, &c).unwrap().is_equivalent());
    }
}
