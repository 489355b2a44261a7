use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::circuit::GateType;
use crate::encode::{CnfFormula, Literal};
use crate::synth::{extract_gates, GatePattern};

use super::EquivError;

/// Maximum number of variable assignments tried by the fallback search.
pub const SEARCH_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatchVerdict {
    Match,
    Mismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiagnosticKind {
    ClauseCountDiff,
    GateLogicDiff,
    UnmatchedAux,
    IoSignatureDiff,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub detail: String,
}

impl Diagnostic {
    fn new(kind: DiagnosticKind, detail: impl Into<String>) -> Self {
        Diagnostic {
            kind,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnfMatchReport {
    pub verdict: MatchVerdict,
    pub diagnostics: Vec<Diagnostic>,
    /// Candidate variable to golden variable, ports included.
    pub witness_renaming: Option<BTreeMap<u32, u32>>,
}

impl CnfMatchReport {
    pub fn is_match(&self) -> bool {
        self.verdict == MatchVerdict::Match
    }

    fn mismatch(diagnostics: Vec<Diagnostic>) -> Self {
        CnfMatchReport {
            verdict: MatchVerdict::Mismatch,
            diagnostics,
            witness_renaming: None,
        }
    }
}

type Lits = Vec<Literal>;

fn canonical(f: &CnfFormula) -> Vec<Lits> {
    f.canonical_clauses()
        .into_iter()
        .map(|c| c.literals().to_vec())
        .collect()
}

fn rename(c: &[Literal], map: &BTreeMap<u32, u32>) -> Option<Lits> {
    let mut out = c
        .iter()
        .map(|l| {
            map.get(&l.var).map(|&var| Literal {
                var,
                negated: l.negated,
            })
        })
        .collect::<Option<Lits>>()?;
    out.sort_unstable();
    Some(out)
}

/// True when `map` sends the candidate clause multiset onto the golden one.
pub(crate) fn verify_renaming(cand: &[Lits], gold: &[Lits], map: &BTreeMap<u32, u32>) -> bool {
    let Some(mut renamed) = cand.iter().map(|c| rename(c, map)).collect::<Option<Vec<_>>>() else {
        return false;
    };
    renamed.sort_unstable();
    renamed == gold
}

struct Anchors {
    inputs: Vec<String>,
    outputs: Vec<String>,
    /// Candidate var to golden var.
    map: BTreeMap<u32, u32>,
}

fn anchors(cand: &CnfFormula, gold: &CnfFormula) -> Result<Anchors, EquivError> {
    let ports = if gold.ports.is_empty() {
        &cand.ports
    } else {
        &gold.ports
    };
    if ports.is_empty() {
        return Err(EquivError::NotComparable("neither formula names its ports".into()));
    }
    if !cand.ports.is_empty() {
        let set = |v: &[String]| v.iter().cloned().collect::<HashSet<_>>();
        if set(&cand.ports.inputs) != set(&ports.inputs) || set(&cand.ports.outputs) != set(&ports.outputs) {
            return Err(EquivError::NotComparable(
                "candidate and golden declare different ports".into(),
            ));
        }
    }
    let mut map = BTreeMap::new();
    for name in ports.names() {
        let (Some(c), Some(g)) = (cand.var_map.var(name), gold.var_map.var(name)) else {
            return Err(EquivError::NotComparable(format!(
                "port {name} is not named in both formulas"
            )));
        };
        map.insert(c, g);
    }
    Ok(Anchors {
        inputs: ports.inputs.clone(),
        outputs: ports.outputs.clone(),
        map,
    })
}

pub fn check_cnf_equivalence(candidate: &CnfFormula, golden: &CnfFormula) -> Result<CnfMatchReport, EquivError> {
    check_cnf_equivalence_with(candidate, golden, SEARCH_BUDGET)
}

/// Structural comparison. Gate extraction is tried first on both sides; if
/// either fails, a colour-refinement guided bijection search over auxiliary
/// variables takes over, bounded by `budget` extensions.
pub fn check_cnf_equivalence_with(
    candidate: &CnfFormula,
    golden: &CnfFormula,
    budget: u64,
) -> Result<CnfMatchReport, EquivError> {
    let anchors = anchors(candidate, golden)?;
    let cand = canonical(candidate);
    let gold = canonical(golden);
    let mut diagnostics = Vec::new();
    if cand.len() != gold.len() {
        diagnostics.push(Diagnostic::new(
            DiagnosticKind::ClauseCountDiff,
            format!("expected {}, got {}", gold.len(), cand.len()),
        ));
    }

    let vars = |f: &CnfFormula| -> Vec<u32> {
        anchors
            .inputs
            .iter()
            .map(|n| f.var_map.var(n).expect("anchor checked"))
            .collect()
    };
    if let (Ok(gc), Ok(gg)) = (
        extract_gates(candidate, &vars(candidate)),
        extract_gates(golden, &vars(golden)),
    ) {
        let s = Structural::new(candidate, golden, &anchors, &gc, &gg);
        if s.same_shape() {
            let map = s.renaming();
            if verify_renaming(&cand, &gold, &map) {
                return Ok(CnfMatchReport {
                    verdict: MatchVerdict::Match,
                    diagnostics: Vec::new(),
                    witness_renaming: Some(map),
                });
            }
        } else {
            diagnostics.extend(s.differences());
            if diagnostics.is_empty() {
                diagnostics.push(Diagnostic::new(DiagnosticKind::UnmatchedAux, "gate structures differ"));
            }
            return Ok(CnfMatchReport::mismatch(diagnostics));
        }
    }

    if cand.len() != gold.len() {
        return Ok(CnfMatchReport::mismatch(diagnostics));
    }
    let outcome = search(&cand, &gold, candidate, golden, &anchors.map, budget);
    Ok(match outcome {
        Ok(map) => {
            debug_assert!(verify_renaming(&cand, &gold, &map));
            CnfMatchReport {
                verdict: MatchVerdict::Match,
                diagnostics: Vec::new(),
                witness_renaming: Some(map),
            }
        }
        Err(d) => {
            diagnostics.push(d);
            CnfMatchReport::mismatch(diagnostics)
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Key {
    Input(String),
    Gate(GateType, Vec<u32>, Option<String>),
}

/// Bottom-up structural signatures of two extracted netlists, interned in a
/// shared table so equal ids mean isomorphic fan-in cones.
struct Structural<'a> {
    cand: &'a CnfFormula,
    gold: &'a CnfFormula,
    anchors: &'a Anchors,
    keys: Vec<Key>,
    cand_gates: Vec<(&'a GatePattern, u32)>,
    gold_gates: Vec<(&'a GatePattern, u32)>,
    cand_sig: HashMap<u32, u32>,
    gold_sig: HashMap<u32, u32>,
}

impl<'a> Structural<'a> {
    fn new(
        cand: &'a CnfFormula,
        gold: &'a CnfFormula,
        anchors: &'a Anchors,
        gc: &'a [GatePattern],
        gg: &'a [GatePattern],
    ) -> Self {
        let mut table: HashMap<Key, u32> = HashMap::new();
        let mut keys = Vec::new();
        let mut intern = |k: Key| -> u32 {
            *table.entry(k.clone()).or_insert_with(|| {
                keys.push(k);
                keys.len() as u32 - 1
            })
        };
        let mut side = |f: &CnfFormula, gates: &'a [GatePattern]| {
            let mut sig = HashMap::new();
            for n in &anchors.inputs {
                sig.insert(f.var_map.var(n).expect("anchor"), intern(Key::Input(n.clone())));
            }
            let mut out = Vec::with_capacity(gates.len());
            for g in gates {
                let mut kids: Vec<u32> = g.inputs.iter().map(|v| sig[v]).collect();
                kids.sort_unstable();
                let name = f
                    .var_map
                    .name(g.output)
                    .filter(|n| anchors.outputs.iter().any(|o| o == n));
                let id = intern(Key::Gate(g.kind, kids, name.map(String::from)));
                sig.insert(g.output, id);
                out.push((g, id));
            }
            (out, sig)
        };
        let (cand_gates, cand_sig) = side(cand, gc);
        let (gold_gates, gold_sig) = side(gold, gg);
        Structural {
            cand,
            gold,
            anchors,
            keys,
            cand_gates,
            gold_gates,
            cand_sig,
            gold_sig,
        }
    }

    fn histogram(gates: &[(&GatePattern, u32)]) -> BTreeMap<u32, usize> {
        let mut h = BTreeMap::new();
        for (_, id) in gates {
            *h.entry(*id).or_default() += 1;
        }
        h
    }

    fn same_shape(&self) -> bool {
        Self::histogram(&self.cand_gates) == Self::histogram(&self.gold_gates)
    }

    fn renaming(&self) -> BTreeMap<u32, u32> {
        let mut map = self.anchors.map.clone();
        let mut pool: HashMap<u32, VecDeque<u32>> = HashMap::new();
        for (g, id) in &self.cand_gates {
            pool.entry(*id).or_default().push_back(g.output);
        }
        for (g, id) in &self.gold_gates {
            if let Some(c) = pool.get_mut(id).and_then(VecDeque::pop_front) {
                map.insert(c, g.output);
            }
        }
        map
    }

    fn describe(&self, f: &CnfFormula, g: &GatePattern) -> String {
        let args: Vec<&str> = g.inputs.iter().map(|&v| f.var_map.name(v).unwrap_or("?")).collect();
        format!("{}({})", g.kind.name().to_uppercase(), args.join(", "))
    }

    fn kids(&self, id: u32) -> &[u32] {
        match &self.keys[id as usize] {
            Key::Gate(_, k, _) => k,
            Key::Input(_) => &[],
        }
    }

    /// Gates on the lowest layer where the two netlists diverge.
    fn differences(&self) -> Vec<Diagnostic> {
        let hc = Self::histogram(&self.cand_gates);
        let hg = Self::histogram(&self.gold_gates);
        let surplus = |a: &BTreeMap<u32, usize>, b: &BTreeMap<u32, usize>, id: u32| {
            a.get(&id).copied().unwrap_or(0) > b.get(&id).copied().unwrap_or(0)
        };
        let cand_ids: HashSet<u32> = self.cand_sig.values().copied().collect();
        let gold_ids: HashSet<u32> = self.gold_sig.values().copied().collect();
        let mut out = Vec::new();
        let mut explained: HashSet<u32> = HashSet::new();

        for (g, id) in &self.gold_gates {
            if !surplus(&hg, &hc, *id) || !self.kids(*id).iter().all(|k| cand_ids.contains(k)) {
                continue;
            }
            let net = self.gold.var_map.name(g.output).unwrap_or("?");
            let rival = self.cand_gates.iter().find(|(c, cid)| {
                !explained.contains(&c.output) && surplus(&hc, &hg, *cid) && self.kids(*cid) == self.kids(*id)
            });
            let detail = match rival {
                Some((c, _)) => {
                    explained.insert(c.output);
                    format!(
                        "net {net}: golden {}, candidate {}",
                        self.describe(self.gold, g),
                        self.describe(self.cand, c)
                    )
                }
                None => format!("net {net}: golden {} has no counterpart", self.describe(self.gold, g)),
            };
            out.push(Diagnostic::new(DiagnosticKind::GateLogicDiff, detail));
        }
        for (c, id) in &self.cand_gates {
            if explained.contains(&c.output)
                || !surplus(&hc, &hg, *id)
                || !self.kids(*id).iter().all(|k| gold_ids.contains(k))
            {
                continue;
            }
            let net = self.cand.var_map.name(c.output).unwrap_or("?");
            out.push(Diagnostic::new(
                DiagnosticKind::GateLogicDiff,
                format!(
                    "candidate net {net}: {} has no golden counterpart",
                    self.describe(self.cand, c)
                ),
            ));
        }
        for o in &self.anchors.outputs {
            let defined = |f: &CnfFormula, gates: &[(&GatePattern, u32)]| {
                let v = f.var_map.var(o);
                gates.iter().any(|(g, _)| Some(g.output) == v)
            };
            if defined(self.gold, &self.gold_gates) != defined(self.cand, &self.cand_gates) {
                out.push(Diagnostic::new(
                    DiagnosticKind::IoSignatureDiff,
                    format!("output {o} is defined on only one side"),
                ));
            }
        }
        out
    }
}

fn clause_vars(clauses: &[Lits]) -> Vec<u32> {
    let mut v: Vec<u32> = clauses.iter().flatten().map(|l| l.var).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Per variable: (polarity, sorted other literals with their colours) for each occurrence.
type Profile = Vec<(bool, Vec<(bool, u32)>)>;

/// Iterated colour refinement over both formulas with a shared palette.
fn refine(
    cand: &[Lits],
    gold: &[Lits],
    anchors: &BTreeMap<u32, u32>,
    gold_anchor: &HashSet<u32>,
) -> [HashMap<u32, u32>; 2] {
    let mut colours: [HashMap<u32, u32>; 2] = [HashMap::new(), HashMap::new()];
    // Anchors share a colour with their partner; all auxiliaries start equal.
    for (k, (&c, &g)) in anchors.iter().enumerate() {
        colours[0].insert(c, k as u32 + 1);
        colours[1].insert(g, k as u32 + 1);
    }
    for (side, clauses) in [cand, gold].into_iter().enumerate() {
        for v in clause_vars(clauses) {
            let anchored = if side == 0 {
                anchors.contains_key(&v)
            } else {
                gold_anchor.contains(&v)
            };
            if !anchored {
                colours[side].insert(v, 0);
            }
        }
    }
    let distinct = |c: &[HashMap<u32, u32>; 2]| c.iter().flat_map(|m| m.values()).collect::<HashSet<_>>().len();
    let mut classes = distinct(&colours);
    loop {
        let mut palette: HashMap<(u32, Profile), u32> = HashMap::new();
        let mut next: [HashMap<u32, u32>; 2] = [HashMap::new(), HashMap::new()];
        for (side, clauses) in [cand, gold].into_iter().enumerate() {
            let mut profile: HashMap<u32, Profile> = HashMap::new();
            for c in clauses {
                for l in c {
                    let mut rest: Vec<(bool, u32)> = c
                        .iter()
                        .filter(|m| m.var != l.var)
                        .map(|m| (m.negated, colours[side][&m.var]))
                        .collect();
                    rest.sort_unstable();
                    profile.entry(l.var).or_default().push((l.negated, rest));
                }
            }
            let mut vars: Vec<u32> = colours[side].keys().copied().collect();
            vars.sort_unstable();
            for v in vars {
                let mut p = profile.remove(&v).unwrap_or_default();
                p.sort_unstable();
                let n = palette.len() as u32;
                let id = *palette.entry((colours[side][&v], p)).or_insert(n);
                next[side].insert(v, id);
            }
        }
        let now = distinct(&next);
        colours = next;
        if now <= classes {
            return colours;
        }
        classes = now;
    }
}

struct Search<'a> {
    order: Vec<u32>,
    candidates: Vec<Vec<u32>>,
    /// Clauses to check once `order[k]` is assigned.
    due: Vec<Vec<usize>>,
    cand: &'a [Lits],
    remaining: HashMap<Lits, usize>,
    map: BTreeMap<u32, u32>,
    used: HashSet<u32>,
    steps: u64,
    budget: u64,
}

impl Search<'_> {
    fn extend(&mut self, k: usize) -> Result<bool, ()> {
        if k == self.order.len() {
            return Ok(true);
        }
        let v = self.order[k];
        for i in 0..self.candidates[k].len() {
            let g = self.candidates[k][i];
            if self.used.contains(&g) {
                continue;
            }
            self.steps += 1;
            if self.steps > self.budget {
                return Err(());
            }
            self.map.insert(v, g);
            self.used.insert(g);
            let mut taken = Vec::new();
            let mut ok = true;
            for &ci in &self.due[k] {
                let r = rename(&self.cand[ci], &self.map).expect("all variables of a due clause are mapped");
                match self.remaining.get_mut(&r) {
                    Some(n) if *n > 0 => {
                        *n -= 1;
                        taken.push(r);
                    }
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok && self.extend(k + 1)? {
                return Ok(true);
            }
            for r in taken {
                *self.remaining.get_mut(&r).expect("taken clause exists") += 1;
            }
            self.used.remove(&g);
            self.map.remove(&v);
        }
        Ok(false)
    }
}

fn search(
    cand: &[Lits],
    gold: &[Lits],
    candidate: &CnfFormula,
    golden: &CnfFormula,
    anchors: &BTreeMap<u32, u32>,
    budget: u64,
) -> Result<BTreeMap<u32, u32>, Diagnostic> {
    let aux = |diag: String| Diagnostic::new(DiagnosticKind::UnmatchedAux, diag);
    let gold_anchor: HashSet<u32> = anchors.values().copied().collect();
    let aux_c: Vec<u32> = clause_vars(cand)
        .into_iter()
        .filter(|v| !anchors.contains_key(v))
        .collect();
    let aux_g: Vec<u32> = clause_vars(gold)
        .into_iter()
        .filter(|v| !gold_anchor.contains(v))
        .collect();
    if aux_c.len() != aux_g.len() {
        return Err(aux(format!(
            "candidate has {} auxiliary variables, golden has {}",
            aux_c.len(),
            aux_g.len()
        )));
    }

    let mut remaining: HashMap<Lits, usize> = HashMap::new();
    for c in gold {
        *remaining.entry(c.clone()).or_default() += 1;
    }
    let map = anchors.clone();
    let mut pending: Vec<usize> = Vec::new();
    for (i, c) in cand.iter().enumerate() {
        if c.iter().all(|l| anchors.contains_key(&l.var)) {
            let r = rename(c, &map).expect("anchored clause");
            match remaining.get_mut(&r) {
                Some(n) if *n > 0 => *n -= 1,
                _ => {
                    let text: Vec<String> = c
                        .iter()
                        .map(|l| {
                            format!(
                                "{}{}",
                                if l.negated { "~" } else { "" },
                                candidate.var_map.name(l.var).unwrap_or("?")
                            )
                        })
                        .collect();
                    return Err(Diagnostic::new(
                        DiagnosticKind::IoSignatureDiff,
                        format!("port-only clause ({}) has no golden counterpart", text.join(" | ")),
                    ));
                }
            }
        } else {
            pending.push(i);
        }
    }

    let [cc, gc] = refine(cand, gold, anchors, &gold_anchor);
    let mut by_colour: HashMap<u32, Vec<u32>> = HashMap::new();
    for &g in &aux_g {
        by_colour.entry(gc[&g]).or_default().push(g);
    }
    let mut hist_c: HashMap<u32, usize> = HashMap::new();
    for &v in &aux_c {
        *hist_c.entry(cc[&v]).or_default() += 1;
    }
    let orphans: Vec<&str> = aux_g
        .iter()
        .filter(|g| hist_c.get(&gc[g]).copied().unwrap_or(0) != by_colour[&gc[g]].len())
        .map(|&g| golden.var_map.name(g).unwrap_or("?"))
        .collect();
    if !orphans.is_empty() {
        let shown: Vec<&str> = orphans.iter().take(8).copied().collect();
        return Err(aux(format!(
            "no candidate variable plays the role of golden {}{}",
            shown.join(", "),
            if orphans.len() > shown.len() { ", ..." } else { "" }
        )));
    }

    // Smallest colour classes first, then variables sharing clauses with
    // those already placed.
    let mut clauses_of: HashMap<u32, Vec<usize>> = HashMap::new();
    for &i in &pending {
        for l in &cand[i] {
            clauses_of.entry(l.var).or_default().push(i);
        }
    }
    let mut order: Vec<u32> = Vec::with_capacity(aux_c.len());
    let mut placed: HashSet<u32> = anchors.keys().copied().collect();
    let mut left: Vec<u32> = aux_c.clone();
    while !left.is_empty() {
        let score = |v: u32| {
            let class = by_colour[&cc[&v]].len();
            let touching = clauses_of
                .get(&v)
                .map(|cs| {
                    cs.iter()
                        .filter(|&&i| cand[i].iter().any(|l| l.var != v && placed.contains(&l.var)))
                        .count()
                })
                .unwrap_or(0);
            (class, std::cmp::Reverse(touching), v)
        };
        let best = (0..left.len()).min_by_key(|&i| score(left[i])).expect("nonempty");
        let v = left.swap_remove(best);
        placed.insert(v);
        order.push(v);
    }
    let pos: HashMap<u32, usize> = order.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let mut due = vec![Vec::new(); order.len()];
    for &i in &pending {
        let last = cand[i]
            .iter()
            .filter_map(|l| pos.get(&l.var))
            .max()
            .expect("clause has an auxiliary");
        due[*last].push(i);
    }
    let candidates = order.iter().map(|v| by_colour[&cc[v]].clone()).collect();

    let mut s = Search {
        order,
        candidates,
        due,
        cand,
        remaining,
        map,
        used: HashSet::new(),
        steps: 0,
        budget,
    };
    match s.extend(0) {
        Ok(true) => Ok(s.map),
        Ok(false) => Err(aux(
            "no renaming of auxiliary variables maps the candidate onto the golden clauses".into(),
        )),
        Err(()) => Err(aux(format!(
            "bijection search exhausted its budget of {budget} extensions"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Circuit, Gate};
    use crate::encode::{parse_dimacs, tseytin_encode, Clause, VarMap};

    fn full_adder() -> Circuit {
        Circuit::try_new(
            "fa",
            vec!["a", "b", "cin"],
            vec!["s", "cout"],
            vec![
                Gate::new(GateType::Xor, vec!["a", "b"], "t"),
                Gate::new(GateType::Xor, vec!["t", "cin"], "s"),
                Gate::new(GateType::And, vec!["a", "b"], "u"),
                Gate::new(GateType::And, vec!["t", "cin"], "w"),
                Gate::new(GateType::Or, vec!["u", "w"], "cout"),
            ],
        )
        .unwrap()
    }

    /// Renumbers variables with `perm[old - 1] = new`, keeping names attached.
    fn permuted(f: &CnfFormula, perm: &[u32]) -> CnfFormula {
        let mut names = vec![String::new(); perm.len()];
        for (old, &new) in perm.iter().enumerate() {
            names[new as usize - 1] = f.var_map.name(old as u32 + 1).unwrap().to_string();
        }
        let map: HashMap<u32, u32> = perm.iter().enumerate().map(|(o, &n)| (o as u32 + 1, n)).collect();
        let clauses = f.clauses.iter().rev().map(|c| c.renamed(&map)).collect();
        CnfFormula::new(clauses, VarMap::from_names(names).unwrap(), f.ports.clone()).unwrap()
    }

    #[test]
    fn self_match_is_identity() {
        let f = tseytin_encode(&full_adder()).unwrap();
        let r = check_cnf_equivalence(&f, &f).unwrap();
        assert!(r.is_match());
        let w = r.witness_renaming.unwrap();
        assert!(w.iter().all(|(a, b)| a == b));
        assert_eq!(w.len() as u32, f.num_vars);
    }

    #[test]
    fn renumbered_auxiliaries_match_with_the_permutation() {
        let f = tseytin_encode(&full_adder()).unwrap();
        // Ports a b cin s cout are 1 2 3 5 8; auxiliaries t u w are 4 6 7.
        let perm = [1, 2, 3, 7, 5, 4, 6, 8];
        let g = permuted(&f, &perm);
        let r = check_cnf_equivalence(&g, &f).unwrap();
        assert!(r.is_match(), "{r:?}");
        let w = r.witness_renaming.unwrap();
        for (old, &new) in perm.iter().enumerate() {
            assert_eq!(w[&new], old as u32 + 1);
        }
    }

    #[test]
    fn mutated_gate_is_named() {
        let c = full_adder();
        let mut m = c.clone();
        m.gates[1].kind = GateType::Xnor;
        let r = check_cnf_equivalence(&tseytin_encode(&m).unwrap(), &tseytin_encode(&c).unwrap()).unwrap();
        assert_eq!(r.verdict, MatchVerdict::Mismatch);
        assert_eq!(r.diagnostics[0].kind, DiagnosticKind::GateLogicDiff);
        assert!(r.diagnostics[0].detail.starts_with("net s:"), "{:?}", r.diagnostics);
    }

    #[test]
    fn deleted_clause_counts() {
        let f = tseytin_encode(&full_adder()).unwrap();
        let mut g = f.clone();
        g.clauses.remove(3);
        let r = check_cnf_equivalence(&g, &f).unwrap();
        assert_eq!(r.verdict, MatchVerdict::Mismatch);
        assert_eq!(r.diagnostics[0].kind, DiagnosticKind::ClauseCountDiff);
        assert_eq!(
            r.diagnostics[0].detail,
            format!("expected {}, got {}", f.clauses.len(), f.clauses.len() - 1)
        );
    }

    #[test]
    fn search_handles_non_gate_clauses() {
        // y <-> (a & b) with an extra clause tying the auxiliary t to y.
        let g = "c varmap 1 a\nc varmap 2 b\nc varmap 3 t\nc varmap 4 y\nc inputs a b\nc outputs y\n\
                 p cnf 4 4\n1 -3 0\n2 -3 0\n-1 -2 3 0\n-3 4 0\n";
        let c = "c varmap 1 a\nc varmap 2 b\nc varmap 3 y\nc varmap 4 q\nc inputs a b\nc outputs y\n\
                 p cnf 4 4\n-4 3 0\n2 -4 0\n-2 -1 4 0\n1 -4 0\n";
        let (g, c) = (parse_dimacs(g).unwrap(), parse_dimacs(c).unwrap());
        let r = check_cnf_equivalence(&c, &g).unwrap();
        assert!(r.is_match(), "{r:?}");
        assert_eq!(r.witness_renaming.unwrap()[&4], 3);
        let mut bad = c.clone();
        bad.clauses[0] = Clause::new(vec![Literal::neg(4), Literal::neg(3)]).unwrap();
        let r = check_cnf_equivalence(&bad, &g).unwrap();
        assert_eq!(r.diagnostics[0].kind, DiagnosticKind::UnmatchedAux);
    }

    #[test]
    fn port_disagreement_is_not_comparable() {
        let f = tseytin_encode(&full_adder()).unwrap();
        let mut g = f.clone();
        g.ports.outputs.pop();
        assert!(matches!(
            check_cnf_equivalence(&g, &f),
            Err(EquivError::NotComparable(_))
        ));
        let mut bare = f.clone();
        bare.ports = Default::default();
        assert!(check_cnf_equivalence(&bare, &f).unwrap().is_match());
        assert!(matches!(
            check_cnf_equivalence(&bare, &bare),
            Err(EquivError::NotComparable(_))
        ));
    }
}
