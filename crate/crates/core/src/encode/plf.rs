//! Propositional-logic formula documents: one `net <-> expr` line per gate.
//!
//! Grammar (ASCII operators, `#` comments):
//!
//! ```text
//! entry := IDENT "<->" expr
//! expr  := iff
//! iff   := imp ("<->" imp)*      left-assoc
//! imp   := or ("->" or)*         left-assoc
//! or    := and ("|" and)*
//! and   := unary ("&" unary)*
//! unary := "~" unary | IDENT | "(" expr ")"
//! ```
//!
//! Two comment directives, `# inputs: a b` and `# outputs: y`, carry the
//! declared ports so documents survive a text round trip.

use std::fmt::{self, Write};

use serde::{Deserialize, Serialize};

use crate::circuit::is_valid_net_name;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PlfExpr {
    Atom(String),
    Not(Box<PlfExpr>),
    And(Box<PlfExpr>, Box<PlfExpr>),
    Or(Box<PlfExpr>, Box<PlfExpr>),
    Implies(Box<PlfExpr>, Box<PlfExpr>),
    Iff(Box<PlfExpr>, Box<PlfExpr>),
}

impl PlfExpr {
    pub fn atom(name: impl Into<String>) -> Self {
        PlfExpr::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: PlfExpr) -> Self {
        PlfExpr::Not(Box::new(e))
    }

    pub fn and(a: PlfExpr, b: PlfExpr) -> Self {
        PlfExpr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: PlfExpr, b: PlfExpr) -> Self {
        PlfExpr::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: PlfExpr, b: PlfExpr) -> Self {
        PlfExpr::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: PlfExpr, b: PlfExpr) -> Self {
        PlfExpr::Iff(Box::new(a), Box::new(b))
    }

    pub fn eval(&self, value: &dyn Fn(&str) -> bool) -> bool {
        match self {
            PlfExpr::Atom(n) => value(n),
            PlfExpr::Not(e) => !e.eval(value),
            PlfExpr::And(a, b) => a.eval(value) && b.eval(value),
            PlfExpr::Or(a, b) => a.eval(value) || b.eval(value),
            PlfExpr::Implies(a, b) => !a.eval(value) || b.eval(value),
            PlfExpr::Iff(a, b) => a.eval(value) == b.eval(value),
        }
    }

    /// Atom names in left-to-right order of first occurrence.
    pub fn atoms(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            PlfExpr::Atom(n) => {
                if !out.contains(&n.as_str()) {
                    out.push(n);
                }
            }
            PlfExpr::Not(e) => e.collect_atoms(out),
            PlfExpr::And(a, b) | PlfExpr::Or(a, b) | PlfExpr::Implies(a, b) | PlfExpr::Iff(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Removes every `~~e` pair.
    pub fn strip_double_negation(&self) -> PlfExpr {
        match self {
            PlfExpr::Not(inner) => match inner.as_ref() {
                PlfExpr::Not(e) => e.strip_double_negation(),
                other => PlfExpr::not(other.strip_double_negation()),
            },
            PlfExpr::Atom(_) => self.clone(),
            PlfExpr::And(a, b) => PlfExpr::and(a.strip_double_negation(), b.strip_double_negation()),
            PlfExpr::Or(a, b) => PlfExpr::or(a.strip_double_negation(), b.strip_double_negation()),
            PlfExpr::Implies(a, b) => PlfExpr::implies(a.strip_double_negation(), b.strip_double_negation()),
            PlfExpr::Iff(a, b) => PlfExpr::iff(a.strip_double_negation(), b.strip_double_negation()),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            PlfExpr::Iff(..) => 1,
            PlfExpr::Implies(..) => 2,
            PlfExpr::Or(..) => 3,
            PlfExpr::And(..) => 4,
            PlfExpr::Not(_) | PlfExpr::Atom(_) => 5,
        }
    }

    fn write_operand(&self, out: &mut String, wrap: bool) {
        if wrap {
            out.push('(');
            self.write_to(out);
            out.push(')');
        } else {
            self.write_to(out);
        }
    }

    fn write_to(&self, out: &mut String) {
        let (a, b, op) = match self {
            PlfExpr::Atom(n) => {
                out.push_str(n);
                return;
            }
            PlfExpr::Not(e) => {
                out.push('~');
                e.write_operand(out, e.precedence() < 5);
                return;
            }
            PlfExpr::And(a, b) => (a, b, " & "),
            PlfExpr::Or(a, b) => (a, b, " | "),
            PlfExpr::Implies(a, b) => (a, b, " -> "),
            PlfExpr::Iff(a, b) => (a, b, " <-> "),
        };
        let p = self.precedence();
        a.write_operand(out, a.precedence() < p);
        out.push_str(op);
        b.write_operand(out, b.precedence() <= p);
    }
}

impl fmt::Display for PlfExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write_to(&mut s);
        f.write_str(&s)
    }
}

/// `output <-> rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlfEntry {
    pub output: String,
    pub rhs: PlfExpr,
}

impl PlfEntry {
    pub fn new(output: impl Into<String>, rhs: PlfExpr) -> Self {
        PlfEntry {
            output: output.into(),
            rhs,
        }
    }

    /// The entry as a single formula rooted at IFF.
    pub fn as_formula(&self) -> PlfExpr {
        PlfExpr::iff(PlfExpr::atom(&self.output), self.rhs.clone())
    }
}

impl fmt::Display for PlfEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        s.push_str(&self.output);
        s.push_str(" <-> ");
        // A bare iff on the right still parses (the entry arrow binds
        // first) but reads ambiguously, so it is parenthesised.
        self.rhs.write_operand(&mut s, matches!(self.rhs, PlfExpr::Iff(..)));
        f.write_str(&s)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlfDocument {
    pub entries: Vec<PlfEntry>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
}

impl PlfDocument {
    pub fn new(entries: Vec<PlfEntry>, inputs: Vec<String>, outputs: Vec<String>) -> Self {
        PlfDocument {
            entries,
            inputs,
            outputs,
        }
    }

    /// Checks the document-level rules: valid names, one definition per
    /// net, no definition of a declared input.
    pub fn check(&self) -> Result<(), PlfError> {
        let mut defined = std::collections::HashSet::new();
        for (i, e) in self.entries.iter().enumerate() {
            if !is_valid_net_name(&e.output) {
                return Err(PlfError::Malformed {
                    entry: i,
                    reason: format!("invalid net name {:?}", e.output),
                });
            }
            if let Some(bad) = e.rhs.atoms().into_iter().find(|a| !is_valid_net_name(a)) {
                return Err(PlfError::Malformed {
                    entry: i,
                    reason: format!("invalid atom {bad:?}"),
                });
            }
            if !defined.insert(e.output.as_str()) {
                return Err(PlfError::Malformed {
                    entry: i,
                    reason: format!("net {} defined twice", e.output),
                });
            }
            if self.inputs.contains(&e.output) {
                return Err(PlfError::Malformed {
                    entry: i,
                    reason: format!("declared input {} is redefined", e.output),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlfError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("entry {entry}: {reason}")]
    Malformed { entry: usize, reason: String },
}

const INPUTS_DIRECTIVE: &str = "inputs:";
const OUTPUTS_DIRECTIVE: &str = "outputs:";

pub fn emit_plf(doc: &PlfDocument) -> String {
    let mut out = String::new();
    if !doc.inputs.is_empty() {
        let _ = writeln!(out, "# {INPUTS_DIRECTIVE} {}", doc.inputs.join(" "));
    }
    if !doc.outputs.is_empty() {
        let _ = writeln!(out, "# {OUTPUTS_DIRECTIVE} {}", doc.outputs.join(" "));
    }
    for e in &doc.entries {
        let _ = writeln!(out, "{e}");
    }
    out
}

/// Entry lines only, without the port directives.
pub fn emit_plf_entries(doc: &PlfDocument) -> String {
    let mut out = String::new();
    for e in &doc.entries {
        let _ = writeln!(out, "{e}");
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Iff,
    Implies,
    Or,
    And,
    Not,
    LParen,
    RParen,
}

fn lex_line(line: &str) -> Result<Vec<Tok>, String> {
    let chars: Vec<char> = line.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                toks.push(Tok::Iff);
                i += 3;
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                toks.push(Tok::Implies);
                i += 2;
            }
            '|' => {
                toks.push(Tok::Or);
                i += 1;
            }
            '&' => {
                toks.push(Tok::And);
                i += 1;
            }
            '~' => {
                toks.push(Tok::Not);
                i += 1;
            }
            '(' => {
                toks.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                toks.push(Tok::RParen);
                i += 1;
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                toks.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            '<' => return Err("unknown operator starting with '<'".into()),
            other => return Err(format!("unexpected character {other:?}")),
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn binary(
        &mut self,
        op: Tok,
        next: fn(&mut Parser) -> Result<PlfExpr, String>,
        build: fn(PlfExpr, PlfExpr) -> PlfExpr,
    ) -> Result<PlfExpr, String> {
        let mut lhs = next(self)?;
        while self.eat(&op) {
            let rhs = next(self)?;
            lhs = build(lhs, rhs);
        }
        Ok(lhs)
    }

    fn expr(&mut self) -> Result<PlfExpr, String> {
        self.binary(Tok::Iff, Parser::imp, PlfExpr::iff)
    }

    fn imp(&mut self) -> Result<PlfExpr, String> {
        self.binary(Tok::Implies, Parser::or, PlfExpr::implies)
    }

    fn or(&mut self) -> Result<PlfExpr, String> {
        self.binary(Tok::Or, Parser::and, PlfExpr::or)
    }

    fn and(&mut self) -> Result<PlfExpr, String> {
        self.binary(Tok::And, Parser::unary, PlfExpr::and)
    }

    fn unary(&mut self) -> Result<PlfExpr, String> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(PlfExpr::not(self.unary()?))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if !is_valid_net_name(&name) {
                    return Err(format!("invalid net name {name:?}"));
                }
                Ok(PlfExpr::Atom(name))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(&Tok::RParen) {
                    return Err("expected ')'".into());
                }
                Ok(e)
            }
            Some(t) => Err(format!("unexpected {t:?}")),
            None => Err("unexpected end of line".into()),
        }
    }
}

/// Parses one `IDENT <-> expr` line (no comment, no surrounding text).
pub fn parse_entry(line: &str) -> Result<PlfEntry, String> {
    let toks = lex_line(line)?;
    let mut p = Parser { toks, pos: 0 };
    let output = match p.toks.first() {
        Some(Tok::Ident(n)) if is_valid_net_name(n) => n.clone(),
        _ => return Err("entry must start with a net name".into()),
    };
    p.pos = 1;
    if !p.eat(&Tok::Iff) {
        return Err("expected '<->' after the output net".into());
    }
    let rhs = p.expr()?;
    if let Some(t) = p.peek() {
        return Err(format!("trailing {t:?}"));
    }
    Ok(PlfEntry::new(output, rhs))
}

pub fn parse_plf(text: &str) -> Result<PlfDocument, PlfError> {
    let mut doc = PlfDocument::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let (body, comment) = match raw.find('#') {
            Some(p) => (&raw[..p], Some(raw[p + 1..].trim())),
            None => (raw, None),
        };
        if let Some(c) = comment {
            if let Some(rest) = c.strip_prefix(INPUTS_DIRECTIVE) {
                doc.inputs.extend(rest.split_whitespace().map(String::from));
            } else if let Some(rest) = c.strip_prefix(OUTPUTS_DIRECTIVE) {
                doc.outputs.extend(rest.split_whitespace().map(String::from));
            }
        }
        if body.trim().is_empty() {
            continue;
        }
        let entry = parse_entry(body).map_err(|message| PlfError::Parse { line, message })?;
        doc.entries.push(entry);
    }
    doc.check()?;
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xor_entry() -> PlfEntry {
        PlfEntry::new("X", PlfExpr::not(PlfExpr::iff(PlfExpr::atom("A"), PlfExpr::atom("B"))))
    }

    #[test]
    fn xor_line() {
        let doc = parse_plf("X <-> ~(A <-> B)").unwrap();
        assert_eq!(doc.entries, [xor_entry()]);
        assert_eq!(xor_entry().to_string(), "X <-> ~(A <-> B)");
    }

    #[test]
    fn unknown_operator() {
        assert!(matches!(parse_plf("X <- A"), Err(PlfError::Parse { line: 1, .. })));
        assert!(matches!(parse_plf("X = A ^ B"), Err(PlfError::Parse { .. })));
    }

    #[test]
    fn precedence_and_associativity() {
        let e = parse_entry("Y <-> a | b & ~c -> d <-> e").unwrap().rhs;
        let expected = PlfExpr::iff(
            PlfExpr::implies(
                PlfExpr::or(
                    PlfExpr::atom("a"),
                    PlfExpr::and(PlfExpr::atom("b"), PlfExpr::not(PlfExpr::atom("c"))),
                ),
                PlfExpr::atom("d"),
            ),
            PlfExpr::atom("e"),
        );
        assert_eq!(e, expected);
        let chain = parse_entry("Y <-> a -> b -> c").unwrap().rhs;
        assert_eq!(
            chain,
            PlfExpr::implies(
                PlfExpr::implies(PlfExpr::atom("a"), PlfExpr::atom("b")),
                PlfExpr::atom("c")
            )
        );
        // Right-nested operands need parentheses to survive printing.
        let right = PlfExpr::implies(
            PlfExpr::atom("a"),
            PlfExpr::implies(PlfExpr::atom("b"), PlfExpr::atom("c")),
        );
        let printed = PlfEntry::new("Y", right.clone()).to_string();
        assert_eq!(printed, "Y <-> a -> (b -> c)");
        assert_eq!(parse_entry(&printed).unwrap().rhs, right);
    }

    #[test]
    fn directives_round_trip() {
        let doc = PlfDocument::new(
            vec![
                xor_entry(),
                PlfEntry::new("Y", PlfExpr::iff(PlfExpr::atom("A"), PlfExpr::atom("X"))),
            ],
            vec!["A".into(), "B".into()],
            vec!["Y".into()],
        );
        let text = emit_plf(&doc);
        assert_eq!(text, "# inputs: A B\n# outputs: Y\nX <-> ~(A <-> B)\nY <-> (A <-> X)\n");
        assert_eq!(parse_plf(&text).unwrap(), doc);
    }

    #[test]
    fn double_definition_rejected() {
        assert!(matches!(
            parse_plf("Y <-> a\nY <-> b\n"),
            Err(PlfError::Malformed { entry: 1, .. })
        ));
    }

    #[test]
    fn double_negation_stripping() {
        let e = parse_entry("Y <-> ~~~(a & ~~b)").unwrap().rhs.strip_double_negation();
        assert_eq!(e, PlfExpr::not(PlfExpr::and(PlfExpr::atom("a"), PlfExpr::atom("b"))));
    }
}
