use std::collections::HashMap;

use super::{Circuit, CircuitError, GateType};

/// A circuit compiled to index form for bit-parallel simulation: every
/// call evaluates 64 input patterns at once.
#[derive(Debug, Clone)]
pub struct Evaluator {
    num_inputs: usize,
    num_nets: usize,
    ops: Vec<(GateType, u32, u32, u32)>,
    outputs: Vec<u32>,
}

impl Evaluator {
    pub fn new(c: &Circuit) -> Result<Self, CircuitError> {
        c.ensure_valid()?;
        let mut ids: HashMap<&str, u32> = HashMap::new();
        for (i, pi) in c.primary_inputs.iter().enumerate() {
            ids.insert(pi, i as u32);
        }
        let mut ops = Vec::with_capacity(c.gates.len());
        for g in c.topo_order()? {
            let out = ids.len() as u32;
            let a = ids[g.inputs[0].as_str()];
            let b = g.inputs.get(1).map_or(a, |n| ids[n.as_str()]);
            ops.push((g.kind, a, b, out));
            ids.insert(&g.output, out);
        }
        let outputs = c.primary_outputs.iter().map(|o| ids[o.as_str()]).collect();
        Ok(Evaluator {
            num_inputs: c.primary_inputs.len(),
            num_nets: ids.len(),
            ops,
            outputs,
        })
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    pub fn num_outputs(&self) -> usize {
        self.outputs.len()
    }

    /// One word per primary input in, one word per primary output out.
    pub fn eval_words(&self, inputs: &[u64]) -> Vec<u64> {
        assert_eq!(inputs.len(), self.num_inputs, "input word count");
        let mut nets = vec![0u64; self.num_nets];
        nets[..self.num_inputs].copy_from_slice(inputs);
        for &(kind, a, b, out) in &self.ops {
            nets[out as usize] = kind.eval_word(nets[a as usize], nets[b as usize]);
        }
        self.outputs.iter().map(|&o| nets[o as usize]).collect()
    }

    /// Evaluates the 64 consecutive patterns `base..base+64`, where bit i of a
    /// pattern drives input i. Returns the output words.
    pub fn eval_block(&self, base: u64) -> Vec<u64> {
        let words: Vec<u64> = (0..self.num_inputs)
            .map(|i| {
                let mut w = 0u64;
                for j in 0..64u64 {
                    w |= ((base.wrapping_add(j) >> i) & 1) << j;
                }
                w
            })
            .collect();
        self.eval_words(&words)
    }

    /// Output bits for a single pattern, packed with bit j = output j.
    /// Only meaningful for circuits with at most 64 outputs.
    pub fn eval_pattern(&self, pattern: u64) -> u64 {
        let words: Vec<u64> = (0..self.num_inputs)
            .map(|i| if (pattern >> i) & 1 == 1 { !0 } else { 0 })
            .collect();
        self.eval_words(&words)
            .iter()
            .enumerate()
            .fold(0u64, |acc, (j, w)| acc | ((w & 1) << j))
    }

    /// Searches every input pattern for one whose packed output differs from
    /// `oracle`. Intended for circuits with few inputs (the search is 2^n).
    pub fn find_exhaustive_mismatch<F>(&self, oracle: F) -> Option<u64>
    where
        F: Fn(u64) -> u64 + Sync,
    {
        assert!(
            self.num_inputs <= 40,
            "exhaustive search over {} inputs",
            self.num_inputs
        );
        assert!(self.outputs.len() <= 64, "packed outputs limited to 64");
        let total: u64 = 1u64 << self.num_inputs;
        let blocks: Vec<u64> = (0..total.div_ceil(64)).collect();
        let check = |&block: &u64| -> Option<u64> {
            let base = block * 64;
            let outs = self.eval_block(base);
            (0..64u64)
                .take_while(|j| base + j < total)
                .find(|&j| {
                    let got = outs
                        .iter()
                        .enumerate()
                        .fold(0u64, |acc, (k, w)| acc | (((w >> j) & 1) << k));
                    got != oracle(base + j)
                })
                .map(|j| base + j)
        };
        crate::par::find_map_first(&blocks, check)
    }
}
