use std::collections::{BTreeSet, HashMap, HashSet};

use crate::circuit::{Circuit, Gate, GateType};
use crate::encode::{gate_template, Clause, CnfFormula, Literal};

use super::{IoHints, SynthError};

/// A gate recovered from the clauses that define variable `output`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GatePattern {
    pub kind: GateType,
    pub inputs: Vec<u32>,
    pub output: u32,
    pub clauses: Vec<usize>,
}

impl GatePattern {
    /// Clause-shape signature of a gate template: per clause, its size, whether
    /// the output literal is positive, and how many input literals are negated.
    pub fn signature(kind: GateType) -> Vec<(usize, bool, usize)> {
        let ins: Vec<Literal> = (1..=kind.arity() as u32).map(Literal::pos).collect();
        let y = Literal::pos(kind.arity() as u32 + 1);
        let mut sig: Vec<_> = gate_template(kind, &ins, y)
            .iter()
            .map(|c| {
                let out_pos = c.contains(&y);
                let neg_in = c.iter().filter(|l| l.var != y.var && l.negated).count();
                (c.len(), out_pos, neg_in)
            })
            .collect();
        sig.sort_unstable();
        sig
    }
}

const BY_SIZE: [GateType; 8] = [
    GateType::Xor,
    GateType::Xnor,
    GateType::And,
    GateType::Nand,
    GateType::Or,
    GateType::Nor,
    GateType::Buf,
    GateType::Not,
];

fn canonical(lits: Vec<Literal>) -> Vec<Literal> {
    let mut l = lits;
    l.sort_unstable();
    l
}

/// Peels gate templates off `f`, starting from the variables in `driven`.
/// Returns the gates in the order they were recovered, which is a valid
/// topological order.
pub fn extract_gates(f: &CnfFormula, driven: &[u32]) -> Result<Vec<GatePattern>, SynthError> {
    let clauses: Vec<Vec<Literal>> = f
        .clauses
        .iter()
        .map(|c| Clause::canonical(c).literals().to_vec())
        .collect();
    let mut by_var: HashMap<u32, Vec<usize>> = HashMap::new();
    for (i, c) in clauses.iter().enumerate() {
        for l in c {
            by_var.entry(l.var).or_default().push(i);
        }
    }
    let mut used = vec![false; clauses.len()];
    let mut driven: HashSet<u32> = driven.iter().copied().collect();
    let mut open: BTreeSet<u32> = by_var.keys().copied().filter(|v| !driven.contains(v)).collect();
    let mut gates = Vec::new();

    loop {
        let mut progress = false;
        let mut ambiguous = None;
        for y in open.clone() {
            let mut found = candidates(y, &clauses, &by_var[&y], &used, &driven);
            let Some(best) = found.iter().map(|g| g.clauses.len()).max() else {
                continue;
            };
            found.retain(|g| g.clauses.len() == best);
            if found.len() > 1 {
                ambiguous.get_or_insert(y);
                continue;
            }
            let g = found.pop().expect("one candidate");
            for &i in &g.clauses {
                used[i] = true;
            }
            driven.insert(y);
            open.remove(&y);
            gates.push(g);
            progress = true;
        }
        if !progress {
            let residual = used.iter().filter(|u| !**u).count();
            if residual == 0 {
                return Ok(gates);
            }
            return Err(match ambiguous {
                Some(var) => SynthError::AmbiguousPattern {
                    var,
                    net: f.var_map.name(var).unwrap_or_default().to_string(),
                },
                None => SynthError::ResidualClauses(residual),
            });
        }
    }
}

fn candidates(
    y: u32,
    clauses: &[Vec<Literal>],
    around: &[usize],
    used: &[bool],
    driven: &HashSet<u32>,
) -> Vec<GatePattern> {
    let live: Vec<usize> = around.iter().copied().filter(|&i| !used[i]).collect();
    let mut operand_sets: BTreeSet<Vec<u32>> = BTreeSet::new();
    for &i in &live {
        let others: Vec<u32> = clauses[i].iter().map(|l| l.var).filter(|&v| v != y).collect();
        if (1..=2).contains(&others.len()) && others.iter().all(|v| driven.contains(v)) {
            operand_sets.insert(others);
        }
    }
    let mut out = Vec::new();
    for ops in operand_sets {
        let lits: Vec<Literal> = ops.iter().map(|&v| Literal::pos(v)).collect();
        for kind in BY_SIZE.into_iter().filter(|k| k.arity() == ops.len()) {
            let mut taken: Vec<usize> = Vec::new();
            let all = gate_template(kind, &lits, Literal::pos(y)).into_iter().all(|t| {
                let t = canonical(t);
                match live.iter().find(|&&i| !taken.contains(&i) && clauses[i] == t) {
                    Some(&i) => {
                        taken.push(i);
                        true
                    }
                    None => false,
                }
            });
            if all {
                out.push(GatePattern {
                    kind,
                    inputs: ops.clone(),
                    output: y,
                    clauses: taken,
                });
            }
        }
    }
    out
}

/// Rebuilds a netlist from a Tseytin encoding. Gate inputs are listed in
/// ascending variable order.
pub fn extract_circuit_from_cnf(f: &CnfFormula, hints: &IoHints) -> Result<Circuit, SynthError> {
    hints.check()?;
    let var = |n: &String| f.var_map.var(n).ok_or_else(|| SynthError::MissingPort(n.clone()));
    let inputs = hints.inputs.iter().map(var).collect::<Result<Vec<_>, _>>()?;
    let outputs = hints.outputs.iter().map(var).collect::<Result<Vec<_>, _>>()?;
    let found = extract_gates(f, &inputs)?;
    let defined: HashSet<u32> = found.iter().map(|g| g.output).collect();
    if let Some(k) = outputs.iter().position(|o| !defined.contains(o)) {
        return Err(SynthError::OutputMissing(hints.outputs[k].clone()));
    }
    let name = |v: u32| f.var_map.name(v).expect("clause variable is mapped").to_string();
    let gates = found
        .iter()
        .map(|g| Gate::new(g.kind, g.inputs.iter().map(|&v| name(v)).collect(), name(g.output)))
        .collect();
    Ok(Circuit::try_new(
        hints.module_name.clone(),
        hints.inputs.clone(),
        hints.outputs.clone(),
        gates,
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encode::{parse_dimacs, tseytin_encode};

    fn half_adder() -> Circuit {
        Circuit::try_new(
            "ha",
            vec!["a", "b"],
            vec!["s", "c"],
            vec![
                Gate::new(GateType::Xor, vec!["a", "b"], "s"),
                Gate::new(GateType::And, vec!["a", "b"], "c"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn signatures_are_distinct() {
        let sigs: HashSet<_> = GateType::ALL.iter().map(|&k| GatePattern::signature(k)).collect();
        assert_eq!(sigs.len(), 8);
    }

    #[test]
    fn recovers_each_gate_kind() {
        for kind in GateType::ALL {
            let ins: Vec<&str> = ["a", "b"][..kind.arity()].to_vec();
            let c = Circuit::try_new("g", ins.clone(), vec!["y"], vec![Gate::new(kind, ins, "y")]).unwrap();
            let f = tseytin_encode(&c).unwrap();
            assert_eq!(extract_circuit_from_cnf(&f, &IoHints::of(&c)).unwrap(), c, "{kind}");
        }
    }

    #[test]
    fn round_trip_half_adder() {
        let c = half_adder();
        let f = tseytin_encode(&c).unwrap();
        assert_eq!(extract_circuit_from_cnf(&f, &IoHints::of(&c)).unwrap(), c);
    }

    #[test]
    fn unit_clause_is_residual() {
        let text = "c varmap 1 A\nc varmap 2 B\nc varmap 3 X\np cnf 3 5\n\
                    -1 -2 -3 0\n1 2 -3 0\n1 -2 3 0\n-1 2 3 0\n3 0\n";
        let f = parse_dimacs(text).unwrap();
        let h = IoHints::new("x", vec!["A".into(), "B".into()], vec!["X".into()]);
        assert_eq!(extract_circuit_from_cnf(&f, &h), Err(SynthError::ResidualClauses(1)));
    }

    #[test]
    fn missing_port() {
        let c = half_adder();
        let f = tseytin_encode(&c).unwrap();
        let h = IoHints::new("ha", vec!["a".into(), "q".into()], vec!["s".into()]);
        assert_eq!(
            extract_circuit_from_cnf(&f, &h),
            Err(SynthError::MissingPort("q".into()))
        );
    }

    #[test]
    fn duplicated_definition_is_ambiguous() {
        // y is both AND(a,b) and OR(a,b): two full groups compete.
        let text = "c varmap 1 a\nc varmap 2 b\nc varmap 3 y\np cnf 3 6\n\
                    1 -3 0\n2 -3 0\n-1 -2 3 0\n-1 3 0\n-2 3 0\n1 2 -3 0\n";
        let f = parse_dimacs(text).unwrap();
        let h = IoHints::new("m", vec!["a".into(), "b".into()], vec!["y".into()]);
        assert!(matches!(
            extract_circuit_from_cnf(&f, &h),
            Err(SynthError::AmbiguousPattern { var: 3, .. })
        ));
    }
}
