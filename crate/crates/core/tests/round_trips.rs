mod common;

use std::collections::{HashMap, HashSet};

use common::{scramble, truth, witness_is_valid};
use proptest::prelude::*;
use veritas_core::circuit::{emit_bench, emit_verilog, parse_bench, parse_structural_verilog};
use veritas_core::encode::{emit_dimacs, emit_plf, parse_dimacs, parse_plf, plf_encode, tseytin_encode};
use veritas_core::equiv::{check_circuit_equivalence, check_cnf_equivalence, MatchVerdict};
use veritas_core::synth::{extract_circuit_from_cnf, plf_to_circuit, IoHints};
use veritas_core::{Circuit, Gate, GateType};

/// Output values for input pattern `p` (bit i drives input i), found by
/// relaxation so gate order does not matter.
fn reference_eval(c: &Circuit, p: u64) -> Vec<bool> {
    let mut val: HashMap<&str, bool> = c
        .primary_inputs
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), p >> i & 1 == 1))
        .collect();
    while val.len() < c.primary_inputs.len() + c.gates.len() {
        for g in &c.gates {
            if val.contains_key(g.output.as_str()) {
                continue;
            }
            let ins: Option<Vec<bool>> = g.inputs.iter().map(|i| val.get(i.as_str()).copied()).collect();
            if let Some(ins) = ins {
                val.insert(&g.output, truth(g.kind, &ins));
            }
        }
    }
    c.primary_outputs.iter().map(|o| val[o.as_str()]).collect()
}

fn same_function(a: &Circuit, b: &Circuit) -> bool {
    assert_eq!(a.primary_inputs, b.primary_inputs);
    (0..1u64 << a.primary_inputs.len()).all(|p| reference_eval(a, p) == reference_eval(b, p))
}

/// Random DAG: every gate reads distinct earlier nets; gates nobody reads
/// become outputs.
fn arb_circuit() -> impl Strategy<Value = Circuit> {
    (
        2usize..=5,
        prop::collection::vec((0usize..8, any::<u32>(), any::<u32>()), 1..14),
    )
        .prop_map(|(ni, specs)| {
            let inputs: Vec<String> = (0..ni).map(|i| format!("x{i}")).collect();
            let mut nets = inputs.clone();
            let mut gates = Vec::new();
            for (i, (k, a, b)) in specs.into_iter().enumerate() {
                let kind = GateType::ALL[k];
                let a = a as usize % nets.len();
                let mut ins = vec![nets[a].clone()];
                if kind.arity() == 2 {
                    let b = (a + 1 + b as usize % (nets.len() - 1)) % nets.len();
                    ins.push(nets[b].clone());
                }
                let out = format!("g{i}");
                gates.push(Gate::new(kind, ins, out.clone()));
                nets.push(out);
            }
            let read: HashSet<&String> = gates.iter().flat_map(|g| g.inputs.iter()).collect();
            let outputs: Vec<String> = gates
                .iter()
                .map(|g| g.output.clone())
                .filter(|o| !read.contains(o))
                .collect();
            Circuit::try_new("rand", inputs, outputs, gates).expect("generated circuit is valid")
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn text_formats_round_trip(c in arb_circuit()) {
        let bench = emit_bench(&c).unwrap();
        let back = parse_bench(&bench).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(emit_bench(&back).unwrap(), bench);

        let v = emit_verilog(&c).unwrap();
        let back = parse_structural_verilog(&v).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(emit_verilog(&back).unwrap(), v);

        let f = tseytin_encode(&c).unwrap();
        let d = emit_dimacs(&f);
        prop_assert_eq!(&parse_dimacs(&d).unwrap(), &f);
        prop_assert_eq!(emit_dimacs(&parse_dimacs(&d).unwrap()), d);

        let doc = plf_encode(&c).unwrap();
        let t = emit_plf(&doc);
        prop_assert_eq!(&parse_plf(&t).unwrap(), &doc);
        prop_assert_eq!(emit_plf(&parse_plf(&t).unwrap()), t);
    }

    #[test]
    fn tseytin_template_matches_truth_tables(c in arb_circuit()) {
        let f = tseytin_encode(&c).unwrap();
        let var = |n: &str| f.var_map.var(n).unwrap() as usize;
        for p in 0..1u64 << c.primary_inputs.len() {
            // The full simulated assignment satisfies the formula...
            let mut model = vec![false; f.num_vars as usize + 1];
            let mut val: HashMap<String, bool> =
                c.primary_inputs.iter().enumerate().map(|(i, n)| (n.clone(), p >> i & 1 == 1)).collect();
            while val.len() < c.primary_inputs.len() + c.gates.len() {
                for g in &c.gates {
                    if let Some(ins) = g.inputs.iter().map(|i| val.get(i).copied()).collect::<Option<Vec<_>>>() {
                        val.insert(g.output.clone(), truth(g.kind, &ins));
                    }
                }
            }
            for (n, b) in &val {
                model[var(n)] = *b;
            }
            prop_assert!(f.clauses.iter().all(|cl| cl.literals().iter().any(|l| l.eval(&model))));
            // ...and flipping any single gate output falsifies it.
            for g in &c.gates {
                let mut m = model.clone();
                m[var(&g.output)] = !m[var(&g.output)];
                prop_assert!(!f.clauses.iter().all(|cl| cl.literals().iter().any(|l| l.eval(&m))));
            }
        }
    }

    #[test]
    fn extraction_inverts_tseytin(c in arb_circuit()) {
        let f = tseytin_encode(&c).unwrap();
        let back = extract_circuit_from_cnf(&f, &IoHints::of(&c)).unwrap();
        prop_assert!(same_function(&c, &back));
    }

    #[test]
    fn plf_synthesis_inverts_plf_encode(c in arb_circuit()) {
        let doc = plf_encode(&c).unwrap();
        let back = plf_to_circuit(&doc, &IoHints::of(&c)).unwrap();
        prop_assert!(same_function(&c, &back));
        prop_assert!(check_circuit_equivalence(&c, &back).unwrap().is_equivalent());
    }

    #[test]
    fn cnf_checker_ignores_order_and_aux_names(c in arb_circuit(), seed in any::<u64>()) {
        let golden = tseytin_encode(&c).unwrap();
        let candidate = scramble(&golden, seed);
        let report = check_cnf_equivalence(&candidate, &golden).unwrap();
        prop_assert_eq!(report.verdict, MatchVerdict::Match);
        prop_assert!(witness_is_valid(&candidate, &golden, &report.witness_renaming.unwrap()));
    }

    #[test]
    fn miter_agrees_with_exhaustive_simulation(c in arb_circuit(), pick in any::<prop::sample::Index>(), k in 0usize..8) {
        let mut d = c.clone();
        let i = pick.index(d.gates.len());
        let old = d.gates[i].kind;
        let others: Vec<GateType> = GateType::ALL.into_iter().filter(|t| t.arity() == old.arity() && *t != old).collect();
        let kind = others[k % others.len()];
        d.gates[i].kind = kind;
        let equivalent = same_function(&c, &d);
        prop_assert_eq!(check_circuit_equivalence(&c, &d).unwrap().is_equivalent(), equivalent);
    }
}
