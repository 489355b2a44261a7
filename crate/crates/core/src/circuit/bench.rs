//! ISCAS-style `.bench` netlists.
//!
//! ```text
//! # circuit full_adder
//! INPUT(a)
//! OUTPUT(y)
//! y = AND(a, b)
//! ```
//!
//! The `# circuit <name>` header comment carries the module name so that
//! emission and parsing round-trip; files without it parse as `top`.

use std::fmt::Write;

use super::{is_valid_net_name, Circuit, CircuitError, Gate, GateType};

const NAME_DIRECTIVE: &str = "circuit";
const DEFAULT_NAME: &str = "top";

pub fn emit_bench(c: &Circuit) -> Result<String, CircuitError> {
    c.ensure_valid()?;
    let mut out = String::new();
    let _ = writeln!(out, "# {NAME_DIRECTIVE} {}", c.name);
    for pi in &c.primary_inputs {
        let _ = writeln!(out, "INPUT({pi})");
    }
    for po in &c.primary_outputs {
        let _ = writeln!(out, "OUTPUT({po})");
    }
    for g in c.topo_order()? {
        let _ = writeln!(
            out,
            "{} = {}({})",
            g.output,
            g.kind.bench_keyword(),
            g.inputs.join(", ")
        );
    }
    Ok(out)
}

fn parse_err(line: usize, message: impl Into<String>) -> CircuitError {
    CircuitError::ParseError {
        line,
        message: message.into(),
    }
}

fn net(line: usize, s: &str) -> Result<String, CircuitError> {
    if is_valid_net_name(s) {
        Ok(s.to_string())
    } else {
        Err(parse_err(line, format!("invalid net name {s:?}")))
    }
}

/// Splits `KW(args)` into the keyword and the raw argument text.
fn call(line: usize, s: &str) -> Result<(&str, &str), CircuitError> {
    let open = s.find('(').ok_or_else(|| parse_err(line, "expected '('"))?;
    let inner = s[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| parse_err(line, "expected ')' at end of line"))?;
    Ok((&s[..open], inner))
}

pub fn parse_bench(text: &str) -> Result<Circuit, CircuitError> {
    let mut name = DEFAULT_NAME.to_string();
    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    let mut gates = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let (body, comment) = match raw.find('#') {
            Some(p) => (&raw[..p], Some(&raw[p + 1..])),
            None => (raw, None),
        };
        if let Some(comment) = comment {
            let mut words = comment.split_whitespace();
            if words.next() == Some(NAME_DIRECTIVE) {
                if let (Some(n), None) = (words.next(), words.next()) {
                    name = n.to_string();
                }
            }
        }
        let compact: String = body.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            continue;
        }

        if let Some((lhs, rhs)) = compact.split_once('=') {
            let output = net(lineno, lhs)?;
            let (kw, args) = call(lineno, rhs)?;
            let kind = GateType::from_bench_keyword(kw).ok_or_else(|| CircuitError::UnknownGate(kw.to_string()))?;
            let operands = if args.is_empty() {
                Vec::new()
            } else {
                args.split(',').map(|a| net(lineno, a)).collect::<Result<Vec<_>, _>>()?
            };
            if operands.len() != kind.arity() {
                return Err(parse_err(
                    lineno,
                    format!("{kind} takes {} inputs, got {}", kind.arity(), operands.len()),
                ));
            }
            gates.push(Gate::new(kind, operands, output));
        } else {
            let (kw, arg) = call(lineno, &compact)?;
            match kw.to_ascii_uppercase().as_str() {
                "INPUT" => inputs.push(net(lineno, arg)?),
                "OUTPUT" => outputs.push(net(lineno, arg)?),
                _ => return Err(parse_err(lineno, format!("unexpected statement {kw:?}"))),
            }
        }
    }

    let c = Circuit::new(name, inputs, outputs, gates);
    c.ensure_valid()?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_parse() {
        let c = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = AND(a, b)\n").unwrap();
        assert_eq!(c.primary_inputs, ["a", "b"]);
        assert_eq!(c.primary_outputs, ["y"]);
        assert_eq!(c.gates, [Gate::new(GateType::And, vec!["a", "b"], "y")]);
        assert_eq!(c.name, "top");
    }

    #[test]
    fn unknown_gate() {
        let err = parse_bench("INPUT(a)\nINPUT(b)\nINPUT(c)\nOUTPUT(y)\ny = MAJ(a,b,c)\n").unwrap_err();
        assert_eq!(err, CircuitError::UnknownGate("MAJ".into()));
    }

    #[test]
    fn whitespace_comments_and_aliases() {
        let text = "# circuit buf_demo\n  INPUT ( a )  # the input\nOUTPUT(y)\nOUTPUT(z)\ny=BUF(a)\n z = not ( y )\n";
        let c = parse_bench(text).unwrap();
        assert_eq!(c.name, "buf_demo");
        assert_eq!(c.gates[0].kind, GateType::Buf);
        assert_eq!(c.gates[1].kind, GateType::Not);
        let emitted = emit_bench(&c).unwrap();
        assert_eq!(
            emitted,
            "# circuit buf_demo\nINPUT(a)\nOUTPUT(y)\nOUTPUT(z)\ny = BUFF(a)\nz = NOT(y)\n"
        );
        assert_eq!(parse_bench(&emitted).unwrap(), c);
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(
            parse_bench("INPUT(a\n"),
            Err(CircuitError::ParseError { line: 1, .. })
        ));
        assert!(matches!(
            parse_bench("INPUT(a)\nOUTPUT(y)\ny = AND(a)\n"),
            Err(CircuitError::ParseError { line: 3, .. })
        ));
        assert!(matches!(
            parse_bench("INPUT(a)\nOUTPUT(y)\ny = NOT(q)\n"),
            Err(CircuitError::Invalid(_))
        ));
    }
}
