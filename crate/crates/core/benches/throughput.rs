use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use veritas_core::circuit::Evaluator;
use veritas_core::corpus::{build_corpus, generate_design, grid, DesignSpec, EncodingKind, Family, SplitConfig};
use veritas_core::encode::plf_encode;
use veritas_core::equiv::check_circuit_equivalence;
use veritas_core::par::{self, Execution};
use veritas_core::synth::plf_to_circuit;
use veritas_core::Circuit;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

/// Adders, subtractors and decoders of every width: enough work to show the
/// fan-out without the minutes-long 16:1 mux miters.
fn specs() -> Vec<DesignSpec> {
    grid(&[Family::Adder, Family::Subtractor, Family::Decoder], 7).unwrap()
}

fn corpus_build(c: &mut Criterion) {
    let specs = specs();
    let mut g = c.benchmark_group("corpus_build");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| build_corpus(&specs, &EncodingKind::ALL, &SplitConfig::default(), exec).unwrap())
        });
    }
    g.finish();
}

fn batch_cec(c: &mut Criterion) {
    let pairs: Vec<(Circuit, Circuit)> = specs()
        .iter()
        .map(|s| {
            let golden = generate_design(s).unwrap();
            let rebuilt = plf_to_circuit(&plf_encode(&golden).unwrap(), &s.io_hints()).unwrap();
            (golden, rebuilt)
        })
        .collect();
    let mut g = c.benchmark_group("batch_cec");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                let verdicts = par::map(exec, &pairs, |(x, y)| {
                    check_circuit_equivalence(x, y).unwrap().is_equivalent()
                });
                assert!(verdicts.into_iter().all(|v| v));
            })
        });
    }
    g.finish();
}

fn exhaustive_simulation(c: &mut Criterion) {
    let evaluators: Vec<Evaluator> = specs()
        .iter()
        .map(|s| Evaluator::new(&generate_design(s).unwrap()).unwrap())
        .collect();
    let mut g = c.benchmark_group("exhaustive_simulation");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                par::map(exec, &evaluators, |e| {
                    let patterns = 1u64 << e.num_inputs();
                    (0..patterns.div_ceil(64))
                        .map(|blk| e.eval_block(blk * 64).iter().fold(0u64, |a, w| a ^ w))
                        .fold(0, |a, w| a ^ w)
                })
            })
        });
    }
    g.finish();
}

criterion_group!(benches, corpus_build, batch_cec, exhaustive_simulation);
criterion_main!(benches);
