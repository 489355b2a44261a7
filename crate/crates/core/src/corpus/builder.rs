use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, CircuitError, Gate, GateType};

use super::Basis;

/// Netlist builder with structural hashing. Logical operators are lowered
/// to the chosen gate basis; `NOT(NOT x)` folds to `x`. The seed only
/// decides operand order, which circuit equality ignores.
pub(crate) struct Builder {
    basis: Basis,
    gates: Vec<Gate>,
    memo: HashMap<(GateType, Vec<String>), String>,
    inverse: HashMap<String, String>,
    next: usize,
    rng: ChaCha8Rng,
}

impl Builder {
    pub fn new(basis: Basis, seed: u64) -> Self {
        Builder {
            basis,
            gates: Vec::new(),
            memo: HashMap::new(),
            inverse: HashMap::new(),
            next: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn gate(&mut self, kind: GateType, mut ins: Vec<String>) -> String {
        debug_assert!(kind.arity() == 1 || ins[0] != ins[1], "{kind} on a repeated net");
        let mut key = ins.clone();
        key.sort();
        if let Some(n) = self.memo.get(&(kind, key.clone())) {
            return n.clone();
        }
        if ins.len() == 2 && self.rng.random_bool(0.5) {
            ins.swap(0, 1);
        }
        let out = format!("n{}", self.next);
        self.next += 1;
        if kind == GateType::Not {
            self.inverse.insert(out.clone(), ins[0].clone());
        }
        self.memo.insert((kind, key), out.clone());
        self.gates.push(Gate::new(kind, ins, out.clone()));
        out
    }

    pub fn not(&mut self, a: &str) -> String {
        if let Some(x) = self.inverse.get(a) {
            return x.clone();
        }
        self.gate(GateType::Not, vec![a.to_string()])
    }

    fn prim(&mut self, kind: GateType, a: &str, b: &str) -> String {
        self.gate(kind, vec![a.to_string(), b.to_string()])
    }

    pub fn and(&mut self, a: &str, b: &str) -> String {
        match self.basis {
            Basis::Full | Basis::AndOrNot => self.prim(GateType::And, a, b),
            Basis::NandNot => {
                let t = self.prim(GateType::Nand, a, b);
                self.not(&t)
            }
            Basis::NorNot => {
                let (na, nb) = (self.not(a), self.not(b));
                self.prim(GateType::Nor, &na, &nb)
            }
        }
    }

    pub fn or(&mut self, a: &str, b: &str) -> String {
        match self.basis {
            Basis::Full | Basis::AndOrNot => self.prim(GateType::Or, a, b),
            Basis::NandNot => {
                let (na, nb) = (self.not(a), self.not(b));
                self.prim(GateType::Nand, &na, &nb)
            }
            Basis::NorNot => {
                let t = self.prim(GateType::Nor, a, b);
                self.not(&t)
            }
        }
    }

    pub fn xor(&mut self, a: &str, b: &str) -> String {
        match self.basis {
            Basis::Full => self.prim(GateType::Xor, a, b),
            Basis::NandNot => {
                let t = self.prim(GateType::Nand, a, b);
                let u = self.prim(GateType::Nand, a, &t);
                let v = self.prim(GateType::Nand, b, &t);
                self.prim(GateType::Nand, &u, &v)
            }
            Basis::NorNot => {
                let x = self.xnor(a, b);
                self.not(&x)
            }
            Basis::AndOrNot => {
                let (na, nb) = (self.not(a), self.not(b));
                let u = self.and(a, &nb);
                let v = self.and(&na, b);
                self.or(&u, &v)
            }
        }
    }

    pub fn xnor(&mut self, a: &str, b: &str) -> String {
        match self.basis {
            Basis::Full => self.prim(GateType::Xnor, a, b),
            Basis::NorNot => {
                let t = self.prim(GateType::Nor, a, b);
                let u = self.prim(GateType::Nor, a, &t);
                let v = self.prim(GateType::Nor, b, &t);
                self.prim(GateType::Nor, &u, &v)
            }
            Basis::NandNot => {
                let x = self.xor(a, b);
                self.not(&x)
            }
            Basis::AndOrNot => {
                let (na, nb) = (self.not(a), self.not(b));
                let u = self.and(a, b);
                let v = self.and(&na, &nb);
                self.or(&u, &v)
            }
        }
    }

    /// Balanced reduction; `items` must be nonempty.
    pub fn tree(&mut self, items: &[String], op: fn(&mut Self, &str, &str) -> String) -> String {
        match items {
            [] => panic!("empty reduction"),
            [x] => x.clone(),
            _ => {
                let (l, r) = items.split_at(items.len().div_ceil(2));
                let l = self.tree(l, op);
                let r = self.tree(r, op);
                op(self, &l, &r)
            }
        }
    }

    /// Left-to-right chain reduction; `items` must be nonempty.
    pub fn chain(&mut self, items: &[String], op: fn(&mut Self, &str, &str) -> String) -> String {
        let mut acc = items[0].clone();
        for x in &items[1..] {
            acc = op(self, &acc, x);
        }
        acc
    }

    /// Names each output's driving net after its port. Shared or
    /// pass-through drivers get a double-inverter buffer.
    pub fn finish(
        mut self,
        name: &str,
        inputs: Vec<String>,
        outputs: Vec<(String, String)>,
    ) -> Result<Circuit, CircuitError> {
        let pis: HashSet<&String> = inputs.iter().collect();
        let mut rename: HashMap<String, String> = HashMap::new();
        let mut buffers = Vec::new();
        for (port, net) in &outputs {
            if pis.contains(net) || rename.contains_key(net) {
                buffers.push((net.clone(), port.clone()));
            } else {
                rename.insert(net.clone(), port.clone());
            }
        }
        let map = |n: &String| rename.get(n).cloned().unwrap_or_else(|| n.clone());
        let mut gates: Vec<Gate> = self
            .gates
            .iter()
            .map(|g| Gate::new(g.kind, g.inputs.iter().map(map).collect(), map(&g.output)))
            .collect();
        for (net, port) in buffers {
            let mid = format!("n{}", self.next);
            self.next += 1;
            gates.push(Gate::new(GateType::Not, vec![map(&net)], mid.clone()));
            gates.push(Gate::new(GateType::Not, vec![mid], port));
        }
        Circuit::try_new(name, inputs, outputs.into_iter().map(|(p, _)| p).collect(), gates)
    }
}
