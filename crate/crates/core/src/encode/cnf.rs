use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::EncodeError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub var: u32,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: u32) -> Self {
        debug_assert!(var >= 1);
        Literal { var, negated: false }
    }

    pub fn neg(var: u32) -> Self {
        debug_assert!(var >= 1);
        Literal { var, negated: true }
    }

    pub fn from_dimacs(v: i64) -> Option<Self> {
        if v == 0 || v.unsigned_abs() > u32::MAX as u64 {
            return None;
        }
        Some(Literal {
            var: v.unsigned_abs() as u32,
            negated: v < 0,
        })
    }

    pub fn to_dimacs(self) -> i64 {
        if self.negated {
            -(self.var as i64)
        } else {
            self.var as i64
        }
    }

    /// Truth value under a model indexed by variable (index 0 unused).
    pub fn eval(self, model: &[bool]) -> bool {
        model[self.var as usize] != self.negated
    }
}

impl std::ops::Not for Literal {
    type Output = Literal;

    fn not(self) -> Literal {
        Literal {
            var: self.var,
            negated: !self.negated,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A nonempty disjunction with no repeated and no complementary literals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Clause(Vec<Literal>);

impl Clause {
    pub fn new(lits: Vec<Literal>) -> Result<Self, EncodeError> {
        if lits.is_empty() {
            return Err(EncodeError::InvalidClause("empty clause".into()));
        }
        let mut seen = BTreeSet::new();
        for l in &lits {
            if l.var == 0 {
                return Err(EncodeError::InvalidClause("variable 0".into()));
            }
            if seen.contains(&!*l) {
                return Err(EncodeError::InvalidClause(format!("tautology on variable {}", l.var)));
            }
            if !seen.insert(*l) {
                return Err(EncodeError::InvalidClause(format!("duplicate literal {l}")));
            }
        }
        Ok(Clause(lits))
    }

    pub fn literals(&self) -> &[Literal] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Literals sorted by (var, polarity).
    pub fn canonical(&self) -> Clause {
        let mut v = self.0.clone();
        v.sort_unstable();
        Clause(v)
    }

    pub fn contains_var(&self, var: u32) -> bool {
        self.0.iter().any(|l| l.var == var)
    }

    pub fn is_satisfied(&self, model: &[bool]) -> bool {
        self.0.iter().any(|l| l.eval(model))
    }

    /// Applies a variable renaming; vars absent from `map` are kept.
    pub fn renamed(&self, map: &HashMap<u32, u32>) -> Clause {
        Clause(
            self.0
                .iter()
                .map(|l| Literal {
                    var: *map.get(&l.var).unwrap_or(&l.var),
                    negated: l.negated,
                })
                .collect(),
        )
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{l} ")?;
        }
        f.write_str("0")
    }
}

/// Variable index ↔ net name bijection over `1..=len`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct VarMap {
    names: Vec<String>,
    index: HashMap<String, u32>,
}

impl TryFrom<Vec<String>> for VarMap {
    type Error = EncodeError;

    fn try_from(names: Vec<String>) -> Result<Self, EncodeError> {
        VarMap::from_names(names)
    }
}

impl From<VarMap> for Vec<String> {
    fn from(m: VarMap) -> Self {
        m.names
    }
}

impl VarMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_names(names: Vec<String>) -> Result<Self, EncodeError> {
        let mut m = VarMap::new();
        for n in names {
            m.push(n)?;
        }
        Ok(m)
    }

    /// Appends a name as the next variable.
    pub fn push(&mut self, name: impl Into<String>) -> Result<u32, EncodeError> {
        let name = name.into();
        if self.index.contains_key(&name) {
            return Err(EncodeError::InvalidFormula(format!("net {name} mapped twice")));
        }
        let var = self.names.len() as u32 + 1;
        self.index.insert(name.clone(), var);
        self.names.push(name);
        Ok(var)
    }

    pub fn var(&self, name: &str) -> Option<u32> {
        self.index.get(name).copied()
    }

    pub fn name(&self, var: u32) -> Option<&str> {
        if var == 0 {
            return None;
        }
        self.names.get(var as usize - 1).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &str)> {
        self.names.iter().enumerate().map(|(i, n)| (i as u32 + 1, n.as_str()))
    }
}

/// Which named variables are the circuit's primary inputs and outputs.
/// Empty when unknown (e.g. a bare DIMACS file).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ports {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
}

impl Ports {
    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty() && self.outputs.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.inputs.iter().chain(&self.outputs).map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnfFormula {
    pub clauses: Vec<Clause>,
    pub num_vars: u32,
    pub var_map: VarMap,
    pub ports: Ports,
}

impl CnfFormula {
    pub fn new(clauses: Vec<Clause>, var_map: VarMap, ports: Ports) -> Result<Self, EncodeError> {
        let f = CnfFormula {
            num_vars: var_map.len() as u32,
            clauses,
            var_map,
            ports,
        };
        f.check()?;
        Ok(f)
    }

    fn check(&self) -> Result<(), EncodeError> {
        if self.var_map.len() as u32 != self.num_vars {
            return Err(EncodeError::InvalidFormula(format!(
                "var map covers {} variables, formula declares {}",
                self.var_map.len(),
                self.num_vars
            )));
        }
        for c in &self.clauses {
            if let Some(l) = c.literals().iter().find(|l| l.var > self.num_vars) {
                return Err(EncodeError::InvalidFormula(format!(
                    "literal {l} exceeds {} variables",
                    self.num_vars
                )));
            }
        }
        for p in self.ports.names() {
            if self.var_map.var(p).is_none() {
                return Err(EncodeError::InvalidFormula(format!("port {p} has no variable")));
            }
        }
        Ok(())
    }

    /// Clauses with sorted literals, sorted as a list.
    pub fn canonical_clauses(&self) -> Vec<Clause> {
        let mut v: Vec<Clause> = self.clauses.iter().map(Clause::canonical).collect();
        v.sort_unstable();
        v
    }

    pub fn is_satisfied_by(&self, model: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.is_satisfied(model))
    }

    /// Adds a clause. Used for miter constraints and tests.
    pub fn push_clause(&mut self, clause: Clause) -> Result<(), EncodeError> {
        if let Some(l) = clause.literals().iter().find(|l| l.var > self.num_vars) {
            return Err(EncodeError::InvalidFormula(format!("literal {l} out of range")));
        }
        self.clauses.push(clause);
        Ok(())
    }

    /// Clause lines only, DIMACS style (`1 -2 0`), one per line.
    pub fn clause_text(&self) -> String {
        let mut s = String::new();
        for c in &self.clauses {
            s.push_str(&c.to_string());
            s.push('\n');
        }
        s
    }
}
