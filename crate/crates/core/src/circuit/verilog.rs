//! Structural Verilog: one module of gate-primitive instances.
//!
//! Emission layout (fixed, byte-exact):
//!
//! ```text
//! module c(a, b, y);
//!   input a, b;
//!   output y;
//!   wire n0;
//!   and g0(y, a, b);
//! endmodule
//! ```

use std::collections::HashSet;
use std::fmt::Write;

use super::{is_valid_net_name, Circuit, CircuitError, Gate, GateType};

pub fn emit_verilog(c: &Circuit) -> Result<String, CircuitError> {
    c.ensure_valid()?;
    let order = c.topo_order()?;
    let mut out = String::new();
    let ports: Vec<&str> = c
        .primary_inputs
        .iter()
        .chain(&c.primary_outputs)
        .map(String::as_str)
        .collect();
    let _ = writeln!(out, "module {}({});", c.name, ports.join(", "));
    if !c.primary_inputs.is_empty() {
        let _ = writeln!(out, "  input {};", c.primary_inputs.join(", "));
    }
    if !c.primary_outputs.is_empty() {
        let _ = writeln!(out, "  output {};", c.primary_outputs.join(", "));
    }
    let internal = c.internal_nets()?;
    if !internal.is_empty() {
        let _ = writeln!(out, "  wire {};", internal.join(", "));
    }
    for (i, g) in order.iter().enumerate() {
        let _ = writeln!(
            out,
            "  {} g{i}({}, {});",
            g.kind.verilog_primitive(),
            g.output,
            g.inputs.join(", ")
        );
    }
    out.push_str("endmodule\n");
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Sym(char),
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

const BEHAVIORAL: &[&str] = &[
    "always",
    "assign",
    "initial",
    "reg",
    "function",
    "task",
    "generate",
    "begin",
    "case",
    "if",
    "integer",
    "parameter",
    "localparam",
    "posedge",
    "negedge",
];

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, CircuitError> {
    let mut toks = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut line = 1;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            line += 1;
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
        } else if c == '/' && chars.get(i + 1) == Some(&'*') {
            let start = line;
            i += 2;
            loop {
                match chars.get(i) {
                    None => {
                        return Err(CircuitError::ParseError {
                            line: start,
                            message: "unterminated block comment".into(),
                        })
                    }
                    Some('*') if chars.get(i + 1) == Some(&'/') => {
                        i += 2;
                        break;
                    }
                    Some('\n') => line += 1,
                    _ => {}
                }
                i += 1;
            }
        } else if c.is_ascii_alphanumeric() || c == '_' || c == '$' || c == '\\' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '$') {
                i += 1;
            }
            if i == start {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), line));
        } else {
            toks.push((Tok::Sym(c), line));
            i += 1;
        }
    }
    Ok(toks)
}

impl Lexer {
    fn line(&self) -> usize {
        self.toks.get(self.pos).or_else(|| self.toks.last()).map_or(1, |t| t.1)
    }

    fn err(&self, message: impl Into<String>) -> CircuitError {
        CircuitError::ParseError {
            line: self.line(),
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.0.clone());
        self.pos += 1;
        t
    }

    fn expect_sym(&mut self, c: char) -> Result<(), CircuitError> {
        match self.next() {
            Some(Tok::Sym(s)) if s == c => Ok(()),
            Some(other) => {
                self.pos -= 1;
                Err(self.err(format!("expected '{c}', found {other:?}")))
            }
            None => Err(self.err(format!("expected '{c}', found end of input"))),
        }
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String, CircuitError> {
        match self.next() {
            Some(Tok::Ident(s)) => Ok(s),
            Some(Tok::Sym('[')) => Err(CircuitError::UnsupportedConstruct("bus declaration".into())),
            Some(other) => {
                self.pos -= 1;
                Err(self.err(format!("expected identifier, found {other:?}")))
            }
            None => Err(self.err("expected identifier, found end of input")),
        }
    }

    fn net(&mut self) -> Result<String, CircuitError> {
        let n = self.ident()?;
        if is_valid_net_name(&n) {
            Ok(n)
        } else {
            self.pos -= 1;
            Err(self.err(format!("invalid net name {n:?}")))
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Dir {
    Input,
    Output,
    Wire,
}

pub fn parse_structural_verilog(text: &str) -> Result<Circuit, CircuitError> {
    let mut lx = Lexer {
        toks: lex(text)?,
        pos: 0,
    };
    match lx.next() {
        Some(Tok::Ident(k)) if k == "module" => {}
        Some(Tok::Ident(k)) if BEHAVIORAL.contains(&k.as_str()) => {
            return Err(CircuitError::UnsupportedConstruct(format!("`{k}` outside a module")))
        }
        _ => {
            lx.pos = lx.pos.saturating_sub(1);
            return Err(lx.err("expected `module`"));
        }
    }
    let name = lx.net()?;
    let mut ports = Vec::new();
    let mut inputs = Vec::new();
    let mut outputs = Vec::new();

    if lx.eat_sym('(') {
        let mut dir: Option<Dir> = None;
        if !lx.eat_sym(')') {
            loop {
                let mut word = lx.ident()?;
                match word.as_str() {
                    "input" | "output" => {
                        dir = Some(if word == "input" { Dir::Input } else { Dir::Output });
                        word = lx.ident()?;
                        if word == "wire" {
                            word = lx.ident()?;
                        }
                    }
                    "reg" => return Err(CircuitError::UnsupportedConstruct("reg port".into())),
                    _ => {}
                }
                if !is_valid_net_name(&word) {
                    return Err(lx.err(format!("invalid port name {word:?}")));
                }
                match dir {
                    Some(Dir::Input) => inputs.push(word.clone()),
                    Some(Dir::Output) => outputs.push(word.clone()),
                    _ => {}
                }
                ports.push(word);
                if lx.eat_sym(')') {
                    break;
                }
                lx.expect_sym(',')?;
            }
        }
    }
    lx.expect_sym(';')?;

    let mut gates = Vec::new();
    loop {
        let word = match lx.next() {
            Some(Tok::Ident(w)) => w,
            Some(Tok::Sym(c)) => {
                lx.pos -= 1;
                return Err(lx.err(format!("unexpected '{c}'")));
            }
            None => return Err(lx.err("missing `endmodule`")),
        };
        match word.as_str() {
            "endmodule" => break,
            "input" | "output" | "wire" => {
                let dir = match word.as_str() {
                    "input" => Dir::Input,
                    "output" => Dir::Output,
                    _ => Dir::Wire,
                };
                if dir != Dir::Wire && lx.peek() == Some(&Tok::Ident("wire".into())) {
                    lx.pos += 1;
                }
                loop {
                    let n = lx.net()?;
                    match dir {
                        Dir::Input => inputs.push(n),
                        Dir::Output => outputs.push(n),
                        Dir::Wire => {}
                    }
                    if lx.eat_sym(';') {
                        break;
                    }
                    lx.expect_sym(',')?;
                }
            }
            w if BEHAVIORAL.contains(&w) => {
                return Err(CircuitError::UnsupportedConstruct(format!("behavioral `{w}`")));
            }
            w => {
                let kind = GateType::from_verilog_primitive(w)
                    .ok_or_else(|| CircuitError::UnsupportedConstruct(format!("instance of `{w}`")))?;
                if let Some(Tok::Ident(_)) = lx.peek() {
                    lx.pos += 1;
                }
                lx.expect_sym('(')?;
                let mut terms = vec![lx.net()?];
                while lx.eat_sym(',') {
                    terms.push(lx.net()?);
                }
                lx.expect_sym(')')?;
                lx.expect_sym(';')?;
                let output = terms.remove(0);
                if terms.len() != kind.arity() {
                    lx.pos -= 1;
                    return Err(lx.err(format!(
                        "{} takes {} inputs, got {}",
                        kind.verilog_primitive(),
                        kind.arity(),
                        terms.len()
                    )));
                }
                gates.push(Gate::new(kind, terms, output));
            }
        }
    }
    if lx.peek().is_some() {
        return Err(CircuitError::UnsupportedConstruct("multiple modules".into()));
    }

    let declared: HashSet<&str> = inputs.iter().chain(&outputs).map(String::as_str).collect();
    for p in &ports {
        if !declared.contains(p.as_str()) {
            return Err(CircuitError::ParseError {
                line: 1,
                message: format!("port {p} has no direction"),
            });
        }
    }
    let listed: HashSet<&str> = ports.iter().map(String::as_str).collect();
    if let Some(p) = declared.iter().find(|p| !listed.contains(*p)) {
        return Err(CircuitError::ParseError {
            line: 1,
            message: format!("{p} declared but missing from the port list"),
        });
    }

    let c = Circuit::new(name, inputs, outputs, gates);
    c.ensure_valid()?;
    Ok(c)
}
