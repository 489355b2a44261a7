//! Circuit → CNF (Tseytin), circuit → PLF, and PLF → CNF.

use std::collections::{BTreeSet, HashSet};

use crate::circuit::{Circuit, GateType};

use super::cnf::{Clause, CnfFormula, Literal, Ports, VarMap};
use super::plf::{PlfDocument, PlfEntry, PlfError, PlfExpr};
use super::EncodeError;

/// Clause template of one gate with output `y`, in the fixed order used by
/// every encoder. `inputs` must hold `kind.arity()` literals over distinct
/// variables, all different from `y`.
pub fn gate_template(kind: GateType, inputs: &[Literal], y: Literal) -> Vec<Vec<Literal>> {
    match (kind, inputs) {
        (GateType::And, &[a, b]) => vec![vec![!a, !b, y], vec![a, !y], vec![b, !y]],
        (GateType::Nand, &[a, b]) => vec![vec![!a, !b, !y], vec![a, y], vec![b, y]],
        (GateType::Or, &[a, b]) => vec![vec![a, b, !y], vec![!a, y], vec![!b, y]],
        (GateType::Nor, &[a, b]) => vec![vec![a, b, y], vec![!a, !y], vec![!b, !y]],
        (GateType::Xor, &[a, b]) => vec![vec![!a, !b, !y], vec![a, b, !y], vec![a, !b, y], vec![!a, b, y]],
        (GateType::Xnor, &[a, b]) => vec![vec![!a, !b, y], vec![a, b, y], vec![a, !b, !y], vec![!a, b, !y]],
        (GateType::Buf, &[a]) => vec![vec![a, !y], vec![!a, y]],
        (GateType::Not, &[a]) => vec![vec![a, y], vec![!a, !y]],
        _ => panic!("{kind} template needs {} inputs, got {}", kind.arity(), inputs.len()),
    }
}

/// Number of Tseytin clauses for one gate.
pub fn template_size(kind: GateType) -> usize {
    match kind {
        GateType::Xor | GateType::Xnor => 4,
        GateType::Not | GateType::Buf => 2,
        _ => 3,
    }
}

fn template_clauses(kind: GateType, inputs: &[Literal], y: Literal) -> Result<Vec<Clause>, EncodeError> {
    gate_template(kind, inputs, y).into_iter().map(Clause::new).collect()
}

/// PLF right-hand side for a gate over the given operand names.
pub fn gate_expr(kind: GateType, inputs: &[&str]) -> PlfExpr {
    let atom = |i: usize| PlfExpr::atom(inputs[i]);
    match kind {
        GateType::Buf => atom(0),
        GateType::Not => PlfExpr::not(atom(0)),
        GateType::And => PlfExpr::and(atom(0), atom(1)),
        GateType::Nand => PlfExpr::not(PlfExpr::and(atom(0), atom(1))),
        GateType::Or => PlfExpr::or(atom(0), atom(1)),
        GateType::Nor => PlfExpr::not(PlfExpr::or(atom(0), atom(1))),
        GateType::Xor => PlfExpr::not(PlfExpr::iff(atom(0), atom(1))),
        GateType::Xnor => PlfExpr::iff(atom(0), atom(1)),
    }
}

/// Recognises the eight gate shapes (exact match, no normalisation).
/// Binary shapes require two distinct atoms.
pub fn gate_shape(expr: &PlfExpr) -> Option<(GateType, Vec<String>)> {
    fn pair(a: &PlfExpr, b: &PlfExpr) -> Option<Vec<String>> {
        match (a, b) {
            (PlfExpr::Atom(x), PlfExpr::Atom(y)) if x != y => Some(vec![x.clone(), y.clone()]),
            _ => None,
        }
    }
    match expr {
        PlfExpr::Atom(a) => Some((GateType::Buf, vec![a.clone()])),
        PlfExpr::Not(inner) => match inner.as_ref() {
            PlfExpr::Atom(a) => Some((GateType::Not, vec![a.clone()])),
            PlfExpr::And(a, b) => pair(a, b).map(|v| (GateType::Nand, v)),
            PlfExpr::Or(a, b) => pair(a, b).map(|v| (GateType::Nor, v)),
            PlfExpr::Iff(a, b) => pair(a, b).map(|v| (GateType::Xor, v)),
            _ => None,
        },
        PlfExpr::And(a, b) => pair(a, b).map(|v| (GateType::And, v)),
        PlfExpr::Or(a, b) => pair(a, b).map(|v| (GateType::Or, v)),
        PlfExpr::Iff(a, b) => pair(a, b).map(|v| (GateType::Xnor, v)),
        PlfExpr::Implies(..) => None,
    }
}

/// Tseytin CNF of a valid circuit. Variables: primary inputs in declared
/// order, then one per gate output in topological order.
pub fn tseytin_encode(c: &Circuit) -> Result<CnfFormula, EncodeError> {
    c.ensure_valid()?;
    let order = c.topo_order()?;
    let mut vars = VarMap::new();
    for pi in &c.primary_inputs {
        vars.push(pi.as_str())?;
    }
    for g in &order {
        vars.push(g.output.as_str())?;
    }
    let mut clauses = Vec::with_capacity(order.iter().map(|g| template_size(g.kind)).sum());
    for g in &order {
        let y = Literal::pos(vars.var(&g.output).expect("numbered above"));
        let inputs: Vec<Literal> = g
            .inputs
            .iter()
            .map(|i| Literal::pos(vars.var(i).expect("valid circuit")))
            .collect();
        clauses.extend(template_clauses(g.kind, &inputs, y)?);
    }
    CnfFormula::new(
        clauses,
        vars,
        Ports {
            inputs: c.primary_inputs.clone(),
            outputs: c.primary_outputs.clone(),
        },
    )
}

/// One `output <-> expr` entry per gate, in topological order.
pub fn plf_encode(c: &Circuit) -> Result<PlfDocument, EncodeError> {
    c.ensure_valid()?;
    let entries = c
        .topo_order()?
        .into_iter()
        .map(|g| {
            let ins: Vec<&str> = g.inputs.iter().map(String::as_str).collect();
            PlfEntry::new(g.output.clone(), gate_expr(g.kind, &ins))
        })
        .collect();
    Ok(PlfDocument::new(
        entries,
        c.primary_inputs.clone(),
        c.primary_outputs.clone(),
    ))
}

struct TseytinBuilder {
    vars: VarMap,
    clauses: Vec<Clause>,
    taken: HashSet<String>,
    next_aux: usize,
}

impl TseytinBuilder {
    fn var_of(&self, name: &str) -> Literal {
        Literal::pos(self.vars.var(name).expect("all atoms numbered before encoding"))
    }

    fn fresh(&mut self) -> Result<Literal, EncodeError> {
        loop {
            let name = format!("_t{}", self.next_aux);
            self.next_aux += 1;
            if self.taken.insert(name.clone()) {
                return Ok(Literal::pos(self.vars.push(name)?));
            }
        }
    }

    /// Adds a clause after dropping repeated literals; tautologies vanish.
    fn add(&mut self, lits: Vec<Literal>) -> Result<(), EncodeError> {
        let mut set = BTreeSet::new();
        let mut kept = Vec::with_capacity(lits.len());
        for l in lits {
            if set.contains(&!l) {
                return Ok(());
            }
            if set.insert(l) {
                kept.push(l);
            }
        }
        self.clauses.push(Clause::new(kept)?);
        Ok(())
    }

    fn literal(&mut self, e: &PlfExpr) -> Result<Literal, EncodeError> {
        match e {
            PlfExpr::Atom(n) => Ok(self.var_of(n)),
            PlfExpr::Not(inner) => Ok(!self.literal(inner)?),
            _ => {
                let t = self.fresh()?;
                self.define(t, e)?;
                Ok(t)
            }
        }
    }

    /// Clauses for `t <-> e`.
    fn define(&mut self, t: Literal, e: &PlfExpr) -> Result<(), EncodeError> {
        match e {
            PlfExpr::Atom(n) => {
                let a = self.var_of(n);
                self.add(vec![!t, a])?;
                self.add(vec![t, !a])
            }
            PlfExpr::Not(inner) => self.define(!t, inner),
            PlfExpr::And(a, b) => {
                let (a, b) = (self.literal(a)?, self.literal(b)?);
                self.add(vec![!a, !b, t])?;
                self.add(vec![a, !t])?;
                self.add(vec![b, !t])
            }
            PlfExpr::Or(a, b) => {
                let (a, b) = (self.literal(a)?, self.literal(b)?);
                self.add(vec![a, b, !t])?;
                self.add(vec![!a, t])?;
                self.add(vec![!b, t])
            }
            PlfExpr::Implies(a, b) => {
                let (a, b) = (!self.literal(a)?, self.literal(b)?);
                self.add(vec![a, b, !t])?;
                self.add(vec![!a, t])?;
                self.add(vec![!b, t])
            }
            PlfExpr::Iff(a, b) => {
                let (a, b) = (self.literal(a)?, self.literal(b)?);
                self.add(vec![!a, !b, t])?;
                self.add(vec![a, b, t])?;
                self.add(vec![a, !b, !t])?;
                self.add(vec![!a, b, !t])
            }
        }
    }
}

/// Equisatisfiable CNF of a PLF document.
///
/// Gate-shaped entries (after removing double negations) emit exactly the
/// gate's Tseytin template, so `plf_to_cnf(plf_encode(c)) == tseytin_encode(c)`.
/// Other entries are encoded with one auxiliary `_t<k>` variable per nested
/// binary operator, numbered after every net of the document.
pub fn plf_to_cnf(doc: &PlfDocument) -> Result<CnfFormula, EncodeError> {
    doc.check().map_err(|e| match e {
        PlfError::Malformed { entry, reason } => EncodeError::MalformedPlf { entry, reason },
        PlfError::Parse { line, message } => EncodeError::MalformedPlf {
            entry: line,
            reason: message,
        },
    })?;

    let defined: HashSet<&str> = doc.entries.iter().map(|e| e.output.as_str()).collect();
    let mut vars = VarMap::new();
    let mut taken: HashSet<String> = HashSet::new();
    for i in &doc.inputs {
        if taken.insert(i.clone()) {
            vars.push(i.as_str())?;
        }
    }
    // Free atoms behave as inputs and are numbered with them.
    for e in &doc.entries {
        for a in e.rhs.atoms() {
            if !defined.contains(a) && taken.insert(a.to_string()) {
                vars.push(a)?;
            }
        }
    }
    for e in &doc.entries {
        if taken.insert(e.output.clone()) {
            vars.push(e.output.as_str())?;
        }
    }
    for o in &doc.outputs {
        if !taken.contains(o) {
            return Err(EncodeError::MalformedPlf {
                entry: doc.entries.len(),
                reason: format!("declared output {o} is never defined"),
            });
        }
    }

    let mut b = TseytinBuilder {
        vars,
        clauses: Vec::new(),
        taken,
        next_aux: 0,
    };
    for e in &doc.entries {
        let y = b.var_of(&e.output);
        let rhs = e.rhs.strip_double_negation();
        match gate_shape(&rhs) {
            Some((kind, ins)) if !ins.contains(&e.output) => {
                let lits: Vec<Literal> = ins.iter().map(|n| b.var_of(n)).collect();
                b.clauses.extend(template_clauses(kind, &lits, y)?);
            }
            _ => b.define(y, &rhs)?,
        }
    }
    CnfFormula::new(
        b.clauses,
        b.vars,
        Ports {
            inputs: doc.inputs.clone(),
            outputs: doc.outputs.clone(),
        },
    )
}
