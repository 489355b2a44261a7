//! A compact deterministic DPLL solver.
//!
//! Unit propagation uses two watched literals per clause; search branches on
//! the lowest-indexed unassigned variable, false first, and backtracks
//! chronologically. Models are checked against every clause before they are
//! returned.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::encode::CnfFormula;

pub const DEFAULT_CONFLICT_BUDGET: u64 = 10_000_000;
pub const BRUTE_FORCE_MAX_VARS: u32 = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatResult {
    /// `model[v]` is the value of variable `v`; index 0 is unused.
    Sat(Vec<bool>),
    Unsat,
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat(_))
    }

    pub fn model(&self) -> Option<&[bool]> {
        match self {
            SatResult::Sat(m) => Some(m),
            SatResult::Unsat => None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverStats {
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SatError {
    #[error("conflict budget exhausted after {0} conflicts")]
    ResourceLimit(u64),
    #[error("formula has {0} variables; brute force is limited to {BRUTE_FORCE_MAX_VARS}")]
    TooLarge(u32),
    #[error("internal error: model fails clause {0}")]
    UnsoundModel(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    pub conflict_budget: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            conflict_budget: DEFAULT_CONFLICT_BUDGET,
        }
    }
}

/// Literal code: `var << 1 | negated`.
type Code = u32;

const UNASSIGNED: u8 = 2;

struct Level {
    trail_start: usize,
    decision: Code,
    flipped: bool,
}

struct Search {
    clauses: Vec<Vec<Code>>,
    watches: Vec<Vec<usize>>,
    value: Vec<u8>,
    trail: Vec<Code>,
    levels: Vec<Level>,
    head: usize,
    next_var_hint: u32,
    num_vars: u32,
    stats: SolverStats,
}

impl Search {
    fn lit_value(&self, code: Code) -> u8 {
        let v = self.value[(code >> 1) as usize];
        if v == UNASSIGNED {
            v
        } else {
            v ^ (code & 1) as u8
        }
    }

    fn assign(&mut self, code: Code) {
        self.value[(code >> 1) as usize] = 1 ^ (code & 1) as u8;
        self.trail.push(code);
    }

    /// Returns true on conflict.
    fn propagate(&mut self) -> bool {
        while self.head < self.trail.len() {
            let falsified = self.trail[self.head] ^ 1;
            self.head += 1;
            let mut list = std::mem::take(&mut self.watches[falsified as usize]);
            let mut i = 0;
            let mut conflict = false;
            while i < list.len() {
                let ci = list[i];
                if self.clauses[ci][0] == falsified {
                    self.clauses[ci].swap(0, 1);
                }
                let first = self.clauses[ci][0];
                if self.lit_value(first) == 1 {
                    i += 1;
                    continue;
                }
                let replacement = (2..self.clauses[ci].len()).find(|&k| self.lit_value(self.clauses[ci][k]) != 0);
                if let Some(k) = replacement {
                    self.clauses[ci].swap(1, k);
                    let w = self.clauses[ci][1];
                    self.watches[w as usize].push(ci);
                    list.swap_remove(i);
                    continue;
                }
                if self.lit_value(first) == 0 {
                    conflict = true;
                    break;
                }
                self.stats.propagations += 1;
                self.assign(first);
                i += 1;
            }
            self.watches[falsified as usize] = list;
            if conflict {
                return true;
            }
        }
        false
    }

    fn undo_to(&mut self, trail_len: usize) {
        for &code in &self.trail[trail_len..] {
            let var = code >> 1;
            self.value[var as usize] = UNASSIGNED;
            self.next_var_hint = self.next_var_hint.min(var);
        }
        self.trail.truncate(trail_len);
        self.head = trail_len;
    }

    fn pick_branch_var(&mut self) -> Option<u32> {
        while self.next_var_hint <= self.num_vars {
            if self.value[self.next_var_hint as usize] == UNASSIGNED {
                return Some(self.next_var_hint);
            }
            self.next_var_hint += 1;
        }
        None
    }

    fn open_level(&mut self, decision: Code, flipped: bool) {
        self.levels.push(Level {
            trail_start: self.trail.len(),
            decision,
            flipped,
        });
        self.assign(decision);
    }

    fn run(&mut self, budget: u64) -> Result<bool, SatError> {
        loop {
            if self.propagate() {
                self.stats.conflicts += 1;
                if self.stats.conflicts > budget {
                    return Err(SatError::ResourceLimit(budget));
                }
                loop {
                    let Some(level) = self.levels.pop() else {
                        return Ok(false);
                    };
                    self.undo_to(level.trail_start);
                    if !level.flipped {
                        self.open_level(level.decision ^ 1, true);
                        break;
                    }
                }
            } else {
                let Some(var) = self.pick_branch_var() else {
                    return Ok(true);
                };
                self.stats.decisions += 1;
                self.open_level(var << 1 | 1, false);
            }
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Solver {
    config: SolverConfig,
}

impl Solver {
    pub fn new(config: SolverConfig) -> Self {
        Solver { config }
    }

    pub fn solve(&self, f: &CnfFormula) -> Result<(SatResult, SolverStats), SatError> {
        let n = f.num_vars;
        let mut s = Search {
            clauses: Vec::with_capacity(f.clauses.len()),
            watches: vec![Vec::new(); 2 * (n as usize + 1)],
            value: vec![UNASSIGNED; n as usize + 1],
            trail: Vec::with_capacity(n as usize),
            levels: Vec::new(),
            head: 0,
            next_var_hint: 1,
            num_vars: n,
            stats: SolverStats::default(),
        };
        let mut units = Vec::new();
        for c in &f.clauses {
            let codes: Vec<Code> = c.literals().iter().map(|l| l.var << 1 | l.negated as u32).collect();
            if codes.len() == 1 {
                units.push(codes[0]);
                continue;
            }
            let ci = s.clauses.len();
            s.watches[codes[0] as usize].push(ci);
            s.watches[codes[1] as usize].push(ci);
            s.clauses.push(codes);
        }
        for u in units {
            match s.lit_value(u) {
                0 => return Ok((SatResult::Unsat, s.stats)),
                1 => {}
                _ => s.assign(u),
            }
        }

        if !s.run(self.config.conflict_budget)? {
            return Ok((SatResult::Unsat, s.stats));
        }
        let model: Vec<bool> = s.value.iter().map(|&v| v == 1).collect();
        if let Some(bad) = f.clauses.iter().position(|c| !c.is_satisfied(&model)) {
            return Err(SatError::UnsoundModel(bad));
        }
        Ok((SatResult::Sat(model), s.stats))
    }
}

/// Solves with the default configuration.
pub fn solve(f: &CnfFormula) -> Result<(SatResult, SolverStats), SatError> {
    Solver::default().solve(f)
}

/// Exhaustive enumeration, 64 assignments per step. Returns the model with
/// the smallest binary value (variable 1 as the least significant bit).
pub fn brute_force_solve(f: &CnfFormula) -> Result<SatResult, SatError> {
    let n = f.num_vars;
    if n > BRUTE_FORCE_MAX_VARS {
        return Err(SatError::TooLarge(n));
    }
    const LANE: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    let low = n.min(6);
    let valid_mask: u64 = if n >= 6 { !0 } else { (1u64 << (1u64 << n)) - 1 };
    let blocks: u64 = 1u64 << (n - low);
    let mut words = vec![0u64; n as usize + 1];
    for v in 1..=low {
        words[v as usize] = LANE[v as usize - 1];
    }
    for block in 0..blocks {
        for v in (low + 1)..=n {
            words[v as usize] = if (block >> (v - low - 1)) & 1 == 1 { !0 } else { 0 };
        }
        let mut sat = valid_mask;
        for c in &f.clauses {
            let w = c.literals().iter().fold(0u64, |acc, l| {
                acc | if l.negated {
                    !words[l.var as usize]
                } else {
                    words[l.var as usize]
                }
            });
            sat &= w;
            if sat == 0 {
                break;
            }
        }
        if sat != 0 {
            let lane = sat.trailing_zeros() as u64;
            let index = block << low | lane;
            let model = (0..=n).map(|v| v > 0 && (index >> (v - 1)) & 1 == 1).collect();
            return Ok(SatResult::Sat(model));
        }
    }
    Ok(SatResult::Unsat)
}
