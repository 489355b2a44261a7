use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::circuit::{is_valid_net_name, Circuit, Gate, GateType};

use super::SynthError;

/// A top-level port or a port of a named part.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Endpoint {
    Top(String),
    Part { part: String, port: String },
}

impl Endpoint {
    pub fn top(name: impl Into<String>) -> Self {
        Endpoint::Top(name.into())
    }

    pub fn part(part: impl Into<String>, port: impl Into<String>) -> Self {
        Endpoint::Part {
            part: part.into(),
            port: port.into(),
        }
    }

    /// `part.port` or a bare top-level name.
    pub fn parse(s: &str) -> Self {
        match s.split_once('.') {
            Some((p, q)) => Endpoint::part(p, q),
            None => Endpoint::top(s),
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Top(n) => f.write_str(n),
            Endpoint::Part { part, port } => write!(f, "{part}.{port}"),
        }
    }
}

/// A wire from a driver (top input or part output) to a sink (part input or
/// top output).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Connection {
    pub from: Endpoint,
    pub to: Endpoint,
}

impl Connection {
    pub fn new(from: Endpoint, to: Endpoint) -> Self {
        Connection { from, to }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StitchRecipe {
    pub name: String,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub connections: Vec<Connection>,
}

impl StitchRecipe {
    pub fn new(name: impl Into<String>, inputs: Vec<String>, outputs: Vec<String>) -> Self {
        StitchRecipe {
            name: name.into(),
            inputs,
            outputs,
            connections: Vec::new(),
        }
    }

    /// Adds a connection given as `part.port` / bare-name strings.
    pub fn wire(&mut self, from: &str, to: &str) -> &mut Self {
        self.connections
            .push(Connection::new(Endpoint::parse(from), Endpoint::parse(to)));
        self
    }
}

/// Flattens `parts` into one circuit. Part nets become `<part>_<net>`; a top
/// output takes over the name of the part output driving it, or gets a
/// buffer when that is not possible.
pub fn stitch_top(parts: &[(String, Circuit)], recipe: &StitchRecipe) -> Result<Circuit, SynthError> {
    let by_name: BTreeMap<&str, &Circuit> = parts.iter().map(|(n, c)| (n.as_str(), c)).collect();
    if by_name.len() != parts.len() {
        let dup = parts
            .iter()
            .map(|p| &p.0)
            .find(|n| parts.iter().filter(|q| &q.0 == *n).count() > 1);
        return Err(SynthError::PortCollision(dup.cloned().unwrap_or_default()));
    }
    let top_in: HashSet<&str> = recipe.inputs.iter().map(String::as_str).collect();
    let top_out: HashSet<&str> = recipe.outputs.iter().map(String::as_str).collect();
    for n in recipe.inputs.iter().chain(&recipe.outputs) {
        if !is_valid_net_name(n) {
            return Err(SynthError::InvalidHints(format!("invalid top port {n:?}")));
        }
    }
    if top_in.len() + top_out.len() != recipe.inputs.len() + recipe.outputs.len()
        || top_in.iter().any(|n| top_out.contains(n))
    {
        return Err(SynthError::PortCollision("top-level port listed twice".into()));
    }

    let driver_net = |e: &Endpoint| -> Result<String, SynthError> {
        match e {
            Endpoint::Top(n) if top_in.contains(n.as_str()) => Ok(n.clone()),
            Endpoint::Part { part, port }
                if by_name
                    .get(part.as_str())
                    .is_some_and(|c| c.primary_outputs.contains(port)) =>
            {
                Ok(format!("{part}_{port}"))
            }
            _ => Err(SynthError::UnknownEndpoint(format!("{e} is not a driver"))),
        }
    };

    let mut sink_driver: HashMap<&Endpoint, String> = HashMap::new();
    for conn in &recipe.connections {
        let sink_ok = match &conn.to {
            Endpoint::Top(n) => top_out.contains(n.as_str()),
            Endpoint::Part { part, port } => by_name
                .get(part.as_str())
                .is_some_and(|c| c.primary_inputs.contains(port)),
        };
        if !sink_ok {
            return Err(SynthError::UnknownEndpoint(format!("{} is not a sink", conn.to)));
        }
        if sink_driver.insert(&conn.to, driver_net(&conn.from)?).is_some() {
            return Err(SynthError::PortCollision(format!("{} driven twice", conn.to)));
        }
    }

    // Part-output nets that directly become top outputs.
    let mut rename: HashMap<String, String> = HashMap::new();
    let mut buffers = Vec::new();
    for o in &recipe.outputs {
        let Some(src) = sink_driver.get(&Endpoint::top(o.as_str())) else {
            return Err(SynthError::OutputMissing(o.clone()));
        };
        if top_in.contains(src.as_str()) || rename.contains_key(src) {
            buffers.push((src.clone(), o.clone()));
        } else {
            rename.insert(src.clone(), o.clone());
        }
    }
    let resolve = |n: String| rename.get(&n).cloned().unwrap_or(n);

    let mut gates = Vec::new();
    let mut produced: HashSet<String> = HashSet::new();
    for (pname, c) in parts {
        let mut local: HashMap<&str, String> = HashMap::new();
        for i in &c.primary_inputs {
            let Some(src) = sink_driver.get(&Endpoint::part(pname.as_str(), i.as_str())) else {
                return Err(SynthError::DanglingInput {
                    part: pname.clone(),
                    net: i.clone(),
                });
            };
            local.insert(i, resolve(src.clone()));
        }
        let net = |n: &str| -> String { local.get(n).cloned().unwrap_or_else(|| resolve(format!("{pname}_{n}"))) };
        for g in &c.gates {
            let out = net(&g.output);
            if top_in.contains(out.as_str()) || !produced.insert(out.clone()) {
                return Err(SynthError::PortCollision(out));
            }
            gates.push(Gate::new(g.kind, g.inputs.iter().map(|i| net(i)).collect(), out));
        }
    }
    for (src, o) in buffers {
        let src = resolve(src);
        if !produced.insert(o.clone()) {
            return Err(SynthError::PortCollision(o));
        }
        gates.push(Gate::new(GateType::Buf, vec![src], o));
    }
    for o in &recipe.outputs {
        if !produced.contains(o) {
            return Err(SynthError::PortCollision(o.clone()));
        }
    }
    Ok(Circuit::try_new(
        recipe.name.clone(),
        recipe.inputs.clone(),
        recipe.outputs.clone(),
        gates,
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn and2() -> Circuit {
        Circuit::try_new(
            "and2",
            vec!["a", "b"],
            vec!["y"],
            vec![Gate::new(GateType::And, vec!["a", "b"], "y")],
        )
        .unwrap()
    }

    fn not1() -> Circuit {
        Circuit::try_new(
            "inv",
            vec!["a"],
            vec!["y"],
            vec![Gate::new(GateType::Not, vec!["a"], "y")],
        )
        .unwrap()
    }

    #[test]
    fn identity_stitch() {
        let mut r = StitchRecipe::new("top", vec!["a".into(), "b".into()], vec!["y".into()]);
        r.wire("a", "u.a").wire("b", "u.b").wire("u.y", "y");
        let c = stitch_top(&[("u".into(), and2())], &r).unwrap();
        assert_eq!(c.gates, [Gate::new(GateType::And, vec!["a", "b"], "y")]);
    }

    #[test]
    fn chain_and_fanout() {
        let mut r = StitchRecipe::new("top", vec!["a".into(), "b".into()], vec!["y".into(), "z".into()]);
        r.wire("a", "g.a")
            .wire("b", "g.b")
            .wire("g.y", "n.a")
            .wire("n.y", "y")
            .wire("n.y", "z");
        let c = stitch_top(&[("g".into(), and2()), ("n".into(), not1())], &r).unwrap();
        assert_eq!(
            c.gates,
            [
                Gate::new(GateType::And, vec!["a", "b"], "g_y"),
                Gate::new(GateType::Not, vec!["g_y"], "y"),
                Gate::new(GateType::Buf, vec!["y"], "z"),
            ]
        );
    }

    #[test]
    fn dangling_and_unknown() {
        let mut r = StitchRecipe::new("top", vec!["a".into()], vec!["y".into()]);
        r.wire("a", "u.a").wire("u.y", "y");
        assert_eq!(
            stitch_top(&[("u".into(), and2())], &r),
            Err(SynthError::DanglingInput {
                part: "u".into(),
                net: "b".into()
            })
        );
        r.wire("a", "u.q");
        assert!(matches!(
            stitch_top(&[("u".into(), and2())], &r),
            Err(SynthError::UnknownEndpoint(_))
        ));
    }

    #[test]
    fn double_driver_collides() {
        let mut r = StitchRecipe::new("top", vec!["a".into(), "b".into()], vec!["y".into()]);
        r.wire("a", "u.a").wire("b", "u.a").wire("b", "u.b").wire("u.y", "y");
        assert!(matches!(
            stitch_top(&[("u".into(), and2())], &r),
            Err(SynthError::PortCollision(_))
        ));
    }
}
