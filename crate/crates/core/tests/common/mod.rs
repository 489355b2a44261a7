//! Oracles and helpers shared by the integration test targets.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use veritas_core::encode::{Clause, CnfFormula, Literal, Ports, VarMap};
use veritas_core::GateType;

/// Reference gate semantics, written out independently of the library.
pub fn truth(kind: GateType, v: &[bool]) -> bool {
    match kind {
        GateType::And => v[0] && v[1],
        GateType::Nand => !(v[0] && v[1]),
        GateType::Or => v[0] || v[1],
        GateType::Nor => !(v[0] || v[1]),
        GateType::Xor => v[0] != v[1],
        GateType::Xnor => v[0] == v[1],
        GateType::Not => !v[0],
        GateType::Buf => v[0],
    }
}

/// Shuffles clause order and literal order and renumbers every variable.
/// Port names survive; auxiliary variables are renamed `aux_N`.
pub fn scramble(f: &CnfFormula, seed: u64) -> CnfFormula {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vars: Vec<u32> = (1..=f.num_vars).collect();
    vars.shuffle(&mut rng);
    let perm: HashMap<u32, u32> = (1..=f.num_vars).zip(vars).collect();
    let mut names = vec![String::new(); f.num_vars as usize];
    for (v, name) in f.var_map.iter() {
        let port = f.ports.names().any(|p| p == name);
        names[perm[&v] as usize - 1] = if port {
            name.to_string()
        } else {
            format!("aux_{}", perm[&v])
        };
    }
    let mut clauses: Vec<Clause> = f
        .clauses
        .iter()
        .map(|c| {
            let mut lits: Vec<Literal> = c
                .literals()
                .iter()
                .map(|l| {
                    let v = perm[&l.var];
                    if l.negated {
                        Literal::neg(v)
                    } else {
                        Literal::pos(v)
                    }
                })
                .collect();
            lits.shuffle(&mut rng);
            Clause::new(lits).unwrap()
        })
        .collect();
    clauses.shuffle(&mut rng);
    let ports = Ports {
        inputs: f.ports.inputs.clone(),
        outputs: f.ports.outputs.clone(),
    };
    CnfFormula::new(clauses, VarMap::from_names(names).unwrap(), ports).unwrap()
}

pub fn clause_multiset(clauses: impl Iterator<Item = Clause>) -> BTreeMap<Clause, usize> {
    let mut m = BTreeMap::new();
    for c in clauses {
        *m.entry(c.canonical()).or_insert(0) += 1;
    }
    m
}

/// A witness is valid when it is a bijection that sends every port to the
/// same-named golden port and maps the candidate clause multiset exactly
/// onto the golden one.
pub fn witness_is_valid(candidate: &CnfFormula, golden: &CnfFormula, witness: &BTreeMap<u32, u32>) -> bool {
    let w: HashMap<u32, u32> = witness.iter().map(|(a, b)| (*a, *b)).collect();
    let mut targets: Vec<u32> = w.values().copied().collect();
    targets.sort_unstable();
    targets.dedup();
    if targets.len() != w.len() {
        return false;
    }
    let ports_fixed = candidate.ports.names().all(|p| {
        let c = candidate.var_map.var(p);
        let g = golden.var_map.var(p);
        c.is_some() && g.is_some() && w.get(&c.unwrap()) == g.as_ref()
    });
    let covers = candidate
        .clauses
        .iter()
        .flat_map(|c| c.literals())
        .all(|l| w.contains_key(&l.var));
    ports_fixed
        && covers
        && clause_multiset(candidate.clauses.iter().map(|c| c.renamed(&w)))
            == clause_multiset(golden.clauses.iter().cloned())
}
