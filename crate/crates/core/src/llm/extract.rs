use serde::{Deserialize, Serialize};

use crate::encode::{parse_dimacs, parse_entry, parse_plf, CnfFormula, PlfDocument, PlfError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
pub enum ExtractError {
    #[error("no formula found in completion")]
    NoFormulaFound,
    #[error("line {line}: {message}")]
    PartialParse { line: usize, message: String },
}

fn is_fence(line: &str) -> bool {
    line.trim_start().starts_with("```")
}

fn is_directive(line: &str) -> bool {
    let t = line.trim_start();
    t.starts_with("# inputs:") || t.starts_with("# outputs:")
}

fn is_entry(line: &str) -> bool {
    let body = line.split('#').next().unwrap_or("");
    !body.trim().is_empty() && parse_entry(body).is_ok()
}

/// Finds the longest contiguous run of PLF entry lines (port directives and
/// blank lines may appear inside a run) and parses it. Fences and prose
/// around the run are dropped.
pub fn extract_plf(raw: &str) -> Result<PlfDocument, ExtractError> {
    let lines: Vec<&str> = raw.lines().collect();
    // (first line, one past last line, entry count)
    let mut best: Option<(usize, usize, usize)> = None;
    let mut i = 0;
    while i < lines.len() {
        if !is_entry(lines[i]) && !is_directive(lines[i]) {
            i += 1;
            continue;
        }
        let start = i;
        let mut end = i;
        let mut entries = 0;
        while i < lines.len() && !is_fence(lines[i]) {
            let l = lines[i];
            if is_entry(l) {
                entries += 1;
                end = i + 1;
            } else if is_directive(l) {
                end = i + 1;
            } else if !l.trim().is_empty() {
                break;
            }
            i += 1;
        }
        if entries > 0 && best.is_none_or(|(_, _, n)| entries > n) {
            best = Some((start, end, entries));
        }
        i = i.max(start + 1);
    }

    let Some((start, end, _)) = best else {
        return Err(match lines.iter().position(|l| l.contains("<->")) {
            Some(k) => partial(k + 1, lines[k]),
            None => ExtractError::NoFormulaFound,
        });
    };
    // A formula-looking line right after the run means the run was cut short.
    if let Some(&next) = lines.get(end) {
        if next.contains("<->") && !is_fence(next) {
            return Err(partial(end + 1, next));
        }
    }
    let block = lines[start..end].join("\n");
    parse_plf(&block).map_err(|e| match e {
        PlfError::Parse { line, message } => ExtractError::PartialParse {
            line: start + line,
            message,
        },
        PlfError::Malformed { entry, reason } => {
            let line = (start..end)
                .filter(|&k| is_entry(lines[k]))
                .nth(entry)
                .map_or(start + 1, |k| k + 1);
            ExtractError::PartialParse { line, message: reason }
        }
    })
}

fn partial(line: usize, text: &str) -> ExtractError {
    let body = text.split('#').next().unwrap_or("");
    ExtractError::PartialParse {
        line,
        message: parse_entry(body)
            .err()
            .unwrap_or_else(|| "entry outside the formula block".into()),
    }
}

/// Extracts a DIMACS formula: the first `p cnf` header, the comment lines
/// directly above it and the clause lines below it.
pub fn extract_dimacs(raw: &str) -> Result<CnfFormula, ExtractError> {
    let lines: Vec<&str> = raw.lines().collect();
    let Some(header) = lines.iter().position(|l| l.trim_start().starts_with("p cnf")) else {
        return Err(ExtractError::NoFormulaFound);
    };
    // Comment directives directly above the header belong to the formula.
    let mut start = header;
    while start > 0 && lines[start - 1].trim_start().starts_with("c ") {
        start -= 1;
    }
    let clause_line = |l: &str| {
        let t = l.trim_start();
        t.is_empty() || t.starts_with(|c: char| c.is_ascii_digit() || c == '-') || t.starts_with("c ")
    };
    let end = lines[header + 1..]
        .iter()
        .position(|l| !clause_line(l))
        .map_or(lines.len(), |k| header + 1 + k);
    parse_dimacs(&lines[start..end].join("\n")).map_err(|e| ExtractError::PartialParse {
        line: header + 1,
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encode::{emit_plf, plf_encode};

    #[test]
    fn prose_is_stripped() {
        let doc = extract_plf("Sure! Here is the CNF:\nX <-> ~(A <-> B)\n").unwrap();
        assert_eq!(doc.entries.len(), 1);
        assert_eq!(doc.entries[0].to_string(), "X <-> ~(A <-> B)");
    }

    #[test]
    fn boolean_expression_is_not_a_formula() {
        assert_eq!(extract_plf("X = A XOR B"), Err(ExtractError::NoFormulaFound));
        assert_eq!(extract_plf(""), Err(ExtractError::NoFormulaFound));
    }

    #[test]
    fn golden_text_is_identity() {
        let c = crate::Circuit::try_new(
            "h",
            vec!["a", "b"],
            vec!["s", "c"],
            vec![
                crate::Gate::new(crate::GateType::Xor, vec!["a", "b"], "s"),
                crate::Gate::new(crate::GateType::And, vec!["a", "b"], "c"),
            ],
        )
        .unwrap();
        let doc = plf_encode(&c).unwrap();
        let text = emit_plf(&doc);
        assert_eq!(extract_plf(&text).unwrap(), parse_plf(&text).unwrap());
        assert_eq!(extract_plf(&text).unwrap(), doc);
    }

    #[test]
    fn fenced_block_with_trailing_prose() {
        let raw = "Here you go.\n```\n# inputs: a b\n# outputs: y\ny <-> a & b\n```\nThis works because AND.\n";
        let doc = extract_plf(raw).unwrap();
        assert_eq!(doc.inputs, ["a", "b"]);
        assert_eq!(doc.outputs, ["y"]);
        assert_eq!(doc.entries.len(), 1);
    }

    #[test]
    fn longest_block_wins() {
        let raw = "Example: q <-> a\nq <-> a\n\nAnswer:\nx <-> a & b\ny <-> ~x\nz <-> x | y\n";
        let doc = extract_plf(raw).unwrap();
        assert_eq!(doc.entries.len(), 3);
    }

    #[test]
    fn truncated_line_is_reported() {
        let raw = "x <-> a & b\ny <-> ~(x &\n";
        assert!(matches!(
            extract_plf(raw),
            Err(ExtractError::PartialParse { line: 2, .. })
        ));
        let raw = "The answer is s <-> a XOR b";
        assert!(matches!(
            extract_plf(raw),
            Err(ExtractError::PartialParse { line: 1, .. })
        ));
        let raw = "x <-> a\nx <-> b\n";
        assert!(matches!(
            extract_plf(raw),
            Err(ExtractError::PartialParse { line: 2, .. })
        ));
    }

    #[test]
    fn dimacs_in_fence() {
        let raw = "Result:\n```\nc varmap 1 a\nc varmap 2 y\np cnf 2 2\n-1 2 0\n1 -2 0\n```\nDone.\n";
        let f = extract_dimacs(raw).unwrap();
        assert_eq!(f.clauses.len(), 2);
        assert_eq!(extract_dimacs("no formula"), Err(ExtractError::NoFormulaFound));
    }
}
