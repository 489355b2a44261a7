//! DIMACS CNF with net-name comments.
//!
//! ```text
//! c varmap 1 a
//! c varmap 2 y
//! c inputs a
//! c outputs y
//! p cnf 2 2
//! 1 2 0
//! -1 -2 0
//! ```
//!
//! Every clause sits on its own line and ends with `0`. Variables without a
//! `varmap` comment are named `v<index>`.

use std::collections::BTreeMap;
use std::fmt::Write;

use super::cnf::{Clause, CnfFormula, Literal, Ports, VarMap};
use super::EncodeError;

pub fn emit_dimacs(f: &CnfFormula) -> String {
    let mut out = String::new();
    for (v, name) in f.var_map.iter() {
        let _ = writeln!(out, "c varmap {v} {name}");
    }
    if !f.ports.inputs.is_empty() {
        let _ = writeln!(out, "c inputs {}", f.ports.inputs.join(" "));
    }
    if !f.ports.outputs.is_empty() {
        let _ = writeln!(out, "c outputs {}", f.ports.outputs.join(" "));
    }
    let _ = writeln!(out, "p cnf {} {}", f.num_vars, f.clauses.len());
    out.push_str(&f.clause_text());
    out
}

fn err(line: usize, message: impl Into<String>) -> EncodeError {
    EncodeError::Dimacs {
        line,
        message: message.into(),
    }
}

pub fn parse_dimacs(text: &str) -> Result<CnfFormula, EncodeError> {
    let mut header: Option<(u32, usize)> = None;
    let mut names: BTreeMap<u32, String> = BTreeMap::new();
    let mut ports = Ports::default();
    let mut clauses = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed == "%" {
            break;
        }
        let mut words = trimmed.split_whitespace();
        let first = words.next().unwrap_or_default();
        if first == "c" {
            match words.next() {
                Some("varmap") => {
                    let (Some(v), Some(name), None) = (words.next(), words.next(), words.next()) else {
                        return Err(err(line, "expected `c varmap <index> <net>`"));
                    };
                    let v: u32 = v.parse().map_err(|_| err(line, format!("bad variable index {v:?}")))?;
                    if v == 0 || names.insert(v, name.to_string()).is_some() {
                        return Err(err(line, format!("variable {v} mapped twice or zero")));
                    }
                }
                Some("inputs") => ports.inputs.extend(words.map(String::from)),
                Some("outputs") => ports.outputs.extend(words.map(String::from)),
                _ => {}
            }
            continue;
        }
        if first == "p" {
            if header.is_some() {
                return Err(err(line, "duplicate problem line"));
            }
            let (Some("cnf"), Some(nv), Some(nc), None) = (words.next(), words.next(), words.next(), words.next())
            else {
                return Err(err(line, "expected `p cnf <vars> <clauses>`"));
            };
            let nv = nv.parse().map_err(|_| err(line, "bad variable count"))?;
            let nc = nc.parse().map_err(|_| err(line, "bad clause count"))?;
            header = Some((nv, nc));
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(err(line, "clause before the problem line"));
        };
        let nums = trimmed
            .split_whitespace()
            .map(|w| w.parse::<i64>().map_err(|_| err(line, format!("bad literal {w:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        match nums.split_last() {
            Some((0, body)) if !body.is_empty() => {
                let mut lits = Vec::with_capacity(body.len());
                for &n in body {
                    let l = Literal::from_dimacs(n).ok_or_else(|| err(line, "0 inside a clause"))?;
                    if l.var > num_vars {
                        return Err(err(line, format!("variable {} exceeds declared {num_vars}", l.var)));
                    }
                    lits.push(l);
                }
                clauses.push(Clause::new(lits).map_err(|e| err(line, e.to_string()))?);
            }
            Some((0, _)) => return Err(err(line, "empty clause")),
            _ => return Err(err(line, "clause not terminated by 0")),
        }
    }

    let Some((num_vars, num_clauses)) = header else {
        return Err(err(text.lines().count().max(1), "missing problem line"));
    };
    if clauses.len() != num_clauses {
        return Err(err(
            text.lines().count().max(1),
            format!("header declares {num_clauses} clauses, found {}", clauses.len()),
        ));
    }
    if let Some((&v, _)) = names.iter().next_back().filter(|(&v, _)| v > num_vars) {
        return Err(err(1, format!("varmap names variable {v} beyond {num_vars}")));
    }
    let var_map = VarMap::from_names(
        (1..=num_vars)
            .map(|v| names.remove(&v).unwrap_or_else(|| format!("v{v}")))
            .collect(),
    )?;
    CnfFormula::new(clauses, var_map, ports)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_clause_formula() {
        let vm = VarMap::from_names(vec!["a".into(), "b".into()]).unwrap();
        let f = CnfFormula::new(
            vec![Clause::new(vec![Literal::pos(1), Literal::neg(2)]).unwrap()],
            vm,
            Ports::default(),
        )
        .unwrap();
        let text = emit_dimacs(&f);
        assert!(text.ends_with("p cnf 2 1\n1 -2 0\n"), "{text}");
        assert!(text.starts_with("c varmap 1 a\nc varmap 2 b\n"));
        assert_eq!(parse_dimacs(&text).unwrap(), f);
    }

    #[test]
    fn missing_terminator() {
        let e = parse_dimacs("p cnf 2 1\n1 -2\n").unwrap_err();
        assert!(matches!(e, EncodeError::Dimacs { line: 2, .. }), "{e}");
    }

    #[test]
    fn other_errors() {
        assert!(parse_dimacs("1 2 0\n").is_err());
        assert!(parse_dimacs("p cnf 2 2\n1 2 0\n").is_err());
        assert!(parse_dimacs("p cnf 1 1\n1 2 0\n").is_err());
        assert!(parse_dimacs("p cnf 2 1\n1 0 2 0\n").is_err());
        assert!(parse_dimacs("p cnf 2 1\n1 -1 0\n").is_err());
    }

    #[test]
    fn unnamed_variables_get_default_names() {
        let f = parse_dimacs("c plain file\np cnf 3 1\n1 -3 0\n").unwrap();
        assert_eq!(f.var_map.name(3), Some("v3"));
        assert!(f.ports.is_empty());
    }
}
