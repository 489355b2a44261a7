use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use veritas_core::circuit::{emit_bench, emit_verilog, parse_bench, parse_structural_verilog};
use veritas_core::corpus::{
    generate_corpus, grid, manifest_path, parse_records, write_atomic, EncodingKind, Family, SplitConfig,
};
use veritas_core::encode::{emit_dimacs, emit_plf, parse_dimacs, parse_plf, plf_encode, tseytin_encode};
use veritas_core::equiv::{check_circuit_equivalence, check_cnf_equivalence, EquivError, EquivVerdict, MatchVerdict};
use veritas_core::eval::{
    grade_all, match_completions, parse_completions, run_eval, token_report, token_table_text, CompletionRecord,
    EvalRunReport, Grade,
};
use veritas_core::llm::{Client, EndpointConfig, GenerationParams};
use veritas_core::par::Execution;
use veritas_core::sat::{solve, SatResult};
use veritas_core::synth::{synthesize_circuit, IoHints, SynthSource};
use veritas_core::{Assignment, Circuit};

#[derive(Parser)]
#[command(
    name = "veritas",
    version,
    about = "Gate-level encodings, equivalence checking and LLM evaluation for combinational circuits"
)]
struct Cli {
    /// Seed for corpus generation, splits and token reports.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    JsonLines,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a circuit (.bench or structural Verilog) as PLF or Tseytin CNF.
    Encode(EncodeArgs),
    /// Rebuild Verilog from a PLF or DIMACS encoding.
    Synth(SynthArgs),
    /// Structural CNF comparison; exits 0 Match, 1 Mismatch, 2 not comparable.
    Check(CheckArgs),
    /// Miter-based equivalence check of two circuits.
    Cec(CecArgs),
    /// Solve a DIMACS formula.
    Sat(SatArgs),
    /// Generate a verified prompt/completion corpus.
    Corpus(CorpusArgs),
    /// Query an endpoint for every prompt of a record file.
    Infer(InferArgs),
    /// Grade completions and report pass@k.
    Eval(EvalArgs),
    /// PLF vs Tseytin token counts over a design grid.
    Tokens(TokensArgs),
    /// Evaluate a circuit on input values.
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EncodeTarget {
    Plf,
    Tseytin,
}

#[derive(Args)]
struct EncodeArgs {
    circuit: PathBuf,
    #[arg(long, value_enum, default_value_t = EncodeTarget::Plf)]
    to: EncodeTarget,
    /// Output file; stdout when absent.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, conflicts_with = "cnf", required_unless_present = "cnf")]
    plf: Option<PathBuf>,
    #[arg(long)]
    cnf: Option<PathBuf>,
    /// JSON port hints: {"module": .., "inputs": [..], "outputs": [..]}. Defaults to the ports declared in the encoding.
    #[arg(long)]
    io: Option<PathBuf>,
    #[arg(short, long)]
    out: PathBuf,
    #[arg(long)]
    emit_bench: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    golden: PathBuf,
    #[arg(long)]
    candidate: PathBuf,
}

#[derive(Args)]
struct CecArgs {
    a: PathBuf,
    b: PathBuf,
}

#[derive(Args)]
struct SatArgs {
    cnf: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EncodingChoice {
    Plf,
    Tseytin,
    Both,
}

#[derive(Args)]
struct CorpusArgs {
    /// Design grid; only `default` is defined.
    #[arg(long, default_value = "default")]
    grid: String,
    #[arg(long)]
    out: PathBuf,
    /// Comma-separated families (adder, subtractor, mux, decoder, alu).
    #[arg(long, value_delimiter = ',')]
    families: Option<Vec<String>>,
    #[arg(long, value_enum, default_value_t = EncodingChoice::Both)]
    encodings: EncodingChoice,
    #[arg(long, default_value = "0.8,0.1,0.1")]
    split: String,
}

#[derive(Args)]
struct InferArgs {
    /// Corpus-format records whose prompts are sent.
    #[arg(long)]
    prompts: PathBuf,
    /// Endpoint configuration (TOML).
    #[arg(long)]
    endpoint: PathBuf,
    /// Generation parameters, e.g. `t=0.0,top_p=1.0,max_tokens=1200`.
    #[arg(long)]
    params: Option<String>,
    #[arg(long)]
    out: PathBuf,
    /// Request transcript; defaults to `<out>.transcript.jsonl`.
    #[arg(long)]
    transcript: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    prompts: PathBuf,
    #[arg(long, conflicts_with = "completions", required_unless_present = "completions")]
    endpoint: Option<PathBuf>,
    /// Completions written by `infer`.
    #[arg(long)]
    completions: Option<PathBuf>,
    #[arg(long)]
    params: Option<String>,
    #[arg(long, value_delimiter = ',', default_value = "1,5,10")]
    k: Vec<u64>,
    /// Report path stem; `<stem>.txt` and `<stem>.json` are written.
    #[arg(long, default_value = "eval-report")]
    report: PathBuf,
}

#[derive(Args)]
struct TokensArgs {
    #[arg(long, value_delimiter = ',')]
    families: Option<Vec<String>>,
}

#[derive(Args)]
struct SimulateArgs {
    circuit: PathBuf,
    /// Input values as `name=0|1` pairs, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["pattern", "all"])]
    set: Vec<String>,
    /// Input pattern as an integer; bit i drives the i-th declared input.
    #[arg(long)]
    pattern: Option<u64>,
    /// Print the full truth table.
    #[arg(long)]
    all: bool,
}

struct Out {
    format: Format,
}

impl Out {
    fn emit(&self, text: impl AsRef<str>, value: Value) {
        match self.format {
            Format::Text => {
                let t = text.as_ref();
                print!("{t}");
                if !t.is_empty() && !t.ends_with('\n') {
                    println!();
                }
            }
            Format::JsonLines => println!("{value}"),
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let out = Out { format: cli.format };
    let result = match cli.command {
        Command::Encode(a) => encode(a, &out),
        Command::Synth(a) => synth(a, &out),
        Command::Check(a) => check(a, &out),
        Command::Cec(a) => cec(a, &out),
        Command::Sat(a) => sat(a, &out),
        Command::Corpus(a) => corpus(a, cli.seed, &out),
        Command::Infer(a) => infer(a, &out),
        Command::Eval(a) => eval(a, &out),
        Command::Tokens(a) => tokens(a, cli.seed, &out),
        Command::Simulate(a) => simulate(a, &out),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    write_atomic(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn load_circuit(path: &Path) -> Result<Circuit> {
    let text = read(path)?;
    let bench = match path.extension().and_then(|e| e.to_str()) {
        Some("bench") => true,
        Some("v" | "sv") => false,
        _ => !text.contains("module"),
    };
    let c = if bench {
        parse_bench(&text)
    } else {
        parse_structural_verilog(&text)
    };
    c.with_context(|| format!("parsing {}", path.display()))
}

fn parse_families(names: &Option<Vec<String>>) -> Result<Vec<Family>> {
    match names {
        None => Ok(vec![Family::Adder, Family::Subtractor, Family::Mux, Family::Decoder]),
        Some(v) => v
            .iter()
            .map(|s| s.trim().parse::<Family>().map_err(|e| anyhow!(e)))
            .collect(),
    }
}

fn encode(a: EncodeArgs, out: &Out) -> Result<u8> {
    let c = load_circuit(&a.circuit)?;
    let text = match a.to {
        EncodeTarget::Plf => emit_plf(&plf_encode(&c)?),
        EncodeTarget::Tseytin => emit_dimacs(&tseytin_encode(&c)?),
    };
    let encoding = match a.to {
        EncodeTarget::Plf => "plf",
        EncodeTarget::Tseytin => "tseytin",
    };
    match &a.out {
        Some(p) => {
            write(p, &text)?;
            out.emit(
                format!("wrote {encoding} encoding of {} to {}", c.name, p.display()),
                json!({"module": c.name, "encoding": encoding, "out": p}),
            );
        }
        None => out.emit(&text, json!({"module": c.name, "encoding": encoding, "text": text})),
    }
    Ok(0)
}

fn synth(a: SynthArgs, out: &Out) -> Result<u8> {
    let (source_path, plf, cnf) = match (&a.plf, &a.cnf) {
        (Some(p), _) => (
            p,
            Some(parse_plf(&read(p)?).with_context(|| format!("parsing {}", p.display()))?),
            None,
        ),
        (None, Some(p)) => (
            p,
            None,
            Some(parse_dimacs(&read(p)?).with_context(|| format!("parsing {}", p.display()))?),
        ),
        (None, None) => bail!("one of --plf or --cnf is required"),
    };
    let hints = match &a.io {
        Some(p) => IoHints::from_json(&read(p)?).with_context(|| format!("reading hints {}", p.display()))?,
        None => {
            let (inputs, outputs) = match (&plf, &cnf) {
                (Some(d), _) => (d.inputs.clone(), d.outputs.clone()),
                (_, Some(f)) => (f.ports.inputs.clone(), f.ports.outputs.clone()),
                _ => unreachable!(),
            };
            let name = source_path
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("top")
                .replace(['-', '.'], "_");
            let h = IoHints::new(name, inputs, outputs);
            h.check().context("the encoding declares no usable ports; pass --io")?;
            h
        }
    };
    let source = match (&plf, &cnf) {
        (Some(d), _) => SynthSource::Plf(d),
        (_, Some(f)) => SynthSource::Cnf(f),
        _ => unreachable!(),
    };
    let c = synthesize_circuit(source, &hints)?;
    write(&a.out, &emit_verilog(&c)?)?;
    if let Some(b) = &a.emit_bench {
        write(b, &emit_bench(&c)?)?;
    }
    out.emit(
        format!(
            "wrote module {} ({} gates) to {}",
            c.name,
            c.gates.len(),
            a.out.display()
        ),
        json!({"module": c.name, "gates": c.gates.len(), "out": a.out, "bench": a.emit_bench}),
    );
    Ok(0)
}

fn check(a: CheckArgs, out: &Out) -> Result<u8> {
    let golden = parse_dimacs(&read(&a.golden)?).with_context(|| format!("parsing {}", a.golden.display()))?;
    let candidate = parse_dimacs(&read(&a.candidate)?).with_context(|| format!("parsing {}", a.candidate.display()))?;
    match check_cnf_equivalence(&candidate, &golden) {
        Ok(report) => {
            let mut text = format!("{:?}\n", report.verdict);
            for d in &report.diagnostics {
                let _ = writeln!(text, "  {:?}: {}", d.kind, d.detail);
            }
            out.emit(text, serde_json::to_value(&report)?);
            Ok(if report.verdict == MatchVerdict::Match { 0 } else { 1 })
        }
        Err(e @ (EquivError::NotComparable(_) | EquivError::InterfaceMismatch(_))) => {
            out.emit(
                format!("NotComparable\n  {e}"),
                json!({"verdict": "NotComparable", "detail": e.to_string()}),
            );
            Ok(2)
        }
        Err(e) => Err(e.into()),
    }
}

fn bits(a: &Assignment) -> String {
    a.iter()
        .map(|(k, v)| format!("{k}={}", *v as u8))
        .collect::<Vec<_>>()
        .join(" ")
}

fn cec(a: CecArgs, out: &Out) -> Result<u8> {
    let c1 = load_circuit(&a.a)?;
    let c2 = load_circuit(&a.b)?;
    match check_circuit_equivalence(&c1, &c2)? {
        EquivVerdict::Equivalent => {
            out.emit("Equivalent", json!({"verdict": "Equivalent"}));
            Ok(0)
        }
        EquivVerdict::NotEquivalent(cx) => {
            let text = format!(
                "NotEquivalent\n  inputs: {}\n  differing outputs: {}\n",
                bits(&cx.inputs),
                cx.differing_outputs().join(", ")
            );
            out.emit(text, json!({"verdict": "NotEquivalent", "counterexample": cx}));
            Ok(1)
        }
    }
}

fn sat(a: SatArgs, out: &Out) -> Result<u8> {
    let f = parse_dimacs(&read(&a.cnf)?).with_context(|| format!("parsing {}", a.cnf.display()))?;
    let (result, stats) = solve(&f)?;
    match result {
        SatResult::Sat(model) => {
            let lits: Vec<i64> = (1..=f.num_vars)
                .map(|v| if model[v as usize] { v as i64 } else { -(v as i64) })
                .collect();
            let text = format!(
                "s SATISFIABLE\nv {} 0\n",
                lits.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
            );
            out.emit(text, json!({"verdict": "SAT", "model": lits, "stats": stats}));
        }
        SatResult::Unsat => out.emit("s UNSATISFIABLE", json!({"verdict": "UNSAT", "stats": stats})),
    }
    Ok(0)
}

fn corpus(a: CorpusArgs, seed: u64, out: &Out) -> Result<u8> {
    if a.grid != "default" {
        bail!("unknown grid {:?}; only `default` is defined", a.grid);
    }
    let families = parse_families(&a.families)?;
    let encodings: Vec<EncodingKind> = match a.encodings {
        EncodingChoice::Plf => vec![EncodingKind::Plf],
        EncodingChoice::Tseytin => vec![EncodingKind::Tseytin],
        EncodingChoice::Both => EncodingKind::ALL.to_vec(),
    };
    let split = SplitConfig::parse(&a.split, seed)?;
    let specs = grid(&families, seed)?;
    let manifest = generate_corpus(&specs, &encodings, &split, &a.out, Execution::available())?;
    let splits: Vec<String> = manifest.splits.iter().map(|(k, v)| format!("{k}={v}")).collect();
    out.emit(
        format!(
            "wrote {} records for {} designs to {} ({}); manifest {}",
            manifest.records,
            manifest.designs,
            a.out.display(),
            splits.join(" "),
            manifest_path(&a.out).display()
        ),
        serde_json::to_value(&manifest)?,
    );
    Ok(0)
}

/// Params precedence: command line, then endpoint config, then defaults.
fn resolve_params(cli: &Option<String>, cfg: &EndpointConfig) -> Result<GenerationParams> {
    Ok(match cli {
        Some(s) => GenerationParams::parse(s)?,
        None => cfg.params.unwrap_or_default(),
    })
}

fn infer(a: InferArgs, out: &Out) -> Result<u8> {
    let records = parse_records(&read(&a.prompts)?)?;
    let cfg = EndpointConfig::load(&a.endpoint)?;
    let params = resolve_params(&a.params, &cfg)?;
    let client = Client::from_config(&cfg)?;
    let prompts: Vec<String> = records.iter().map(|r| r.prompt.clone()).collect();
    let results = client.generate_all(&prompts, &params);
    let mut lines = String::new();
    for (r, res) in records.iter().zip(&results) {
        lines.push_str(&serde_json::to_string(&CompletionRecord::new(&r.id, res))?);
        lines.push('\n');
    }
    write(&a.out, &lines)?;
    let transcript = a.transcript.clone().unwrap_or_else(|| {
        let mut s = a.out.clone().into_os_string();
        s.push(".transcript.jsonl");
        PathBuf::from(s)
    });
    write(&transcript, &client.transcript_jsonl())?;
    let failed = results.iter().filter(|r| r.is_err()).count();
    out.emit(
        format!(
            "{} completions, {failed} backend errors; wrote {} and {}",
            results.len(),
            a.out.display(),
            transcript.display()
        ),
        json!({"completions": results.len(), "errors": failed, "out": a.out, "transcript": transcript}),
    );
    Ok(if failed > 0 { 2 } else { 0 })
}

fn eval(a: EvalArgs, out: &Out) -> Result<u8> {
    let records = parse_records(&read(&a.prompts)?)?;
    let exec = Execution::available();
    let report: EvalRunReport = match (&a.endpoint, &a.completions) {
        (Some(p), _) => {
            let cfg = EndpointConfig::load(p)?;
            let params = resolve_params(&a.params, &cfg)?;
            run_eval(&records, &Client::from_config(&cfg)?, &params, &a.k, exec)
        }
        (None, Some(p)) => {
            let completions = parse_completions(&read(p)?)?;
            grade_all(&records, &match_completions(&records, &completions)?, &a.k, exec)
        }
        (None, None) => bail!("one of --endpoint or --completions is required"),
    };
    let mut stem = a.report.clone().into_os_string();
    stem.push(".txt");
    let txt = PathBuf::from(&stem);
    let json_path = txt.with_extension("json");
    write(&txt, &report.to_text())?;
    write(&json_path, &(report.to_json() + "\n"))?;
    match out.format {
        Format::Text => out.emit(report.to_text(), Value::Null),
        Format::JsonLines => {
            for g in &report.grades {
                println!("{}", serde_json::to_string(g)?);
            }
            let summary = json!({
                "overall": report.overall,
                "families": report.families,
                "grade_counts": report.grade_counts.iter().map(|(g, n)| (g.name(), *n)).collect::<std::collections::BTreeMap<_, _>>(),
                "pass_at_k": report.pass_at_k,
                "tokens": report.tokens,
            });
            println!("{summary}");
        }
    }
    if report.grade_counts.contains_key(&Grade::InfraError) {
        log::warn!(
            "{} prompts hit infrastructure errors",
            report.grade_counts[&Grade::InfraError]
        );
    }
    Ok(if report.overall.c == report.overall.n { 0 } else { 1 })
}

fn tokens(a: TokensArgs, seed: u64, out: &Out) -> Result<u8> {
    let specs = grid(&parse_families(&a.families)?, seed)?;
    let rows = token_report(&specs, Execution::available())?;
    match out.format {
        Format::Text => out.emit(token_table_text(&rows), Value::Null),
        Format::JsonLines => {
            for r in &rows {
                println!("{}", serde_json::to_string(r)?);
            }
        }
    }
    Ok(0)
}

fn parse_bit(s: &str) -> Result<bool> {
    match s {
        "0" | "false" => Ok(false),
        "1" | "true" => Ok(true),
        _ => bail!("expected 0 or 1, got {s:?}"),
    }
}

fn simulate(a: SimulateArgs, out: &Out) -> Result<u8> {
    let c = load_circuit(&a.circuit)?;
    let mut patterns: Vec<Assignment> = Vec::new();
    if a.all {
        let n = c.primary_inputs.len();
        if n > 20 {
            bail!("{n} inputs is too many for a full truth table");
        }
        for p in 0..1u64 << n {
            patterns.push(
                c.primary_inputs
                    .iter()
                    .enumerate()
                    .map(|(i, name)| (name.clone(), p >> i & 1 == 1))
                    .collect(),
            );
        }
    } else if let Some(p) = a.pattern {
        patterns.push(
            c.primary_inputs
                .iter()
                .enumerate()
                .map(|(i, name)| (name.clone(), p >> i & 1 == 1))
                .collect(),
        );
    } else {
        let mut inputs = Assignment::new();
        for pair in a.set.iter().filter(|s| !s.trim().is_empty()) {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| anyhow!("expected name=value, got {pair:?}"))?;
            inputs.insert(k.trim().to_string(), parse_bit(v.trim())?);
        }
        patterns.push(inputs);
    }
    for inputs in patterns {
        let outputs = c.simulate(&inputs)?;
        let ordered = |names: &[String], vals: &Assignment| -> String {
            names
                .iter()
                .map(|n| format!("{n}={}", vals[n] as u8))
                .collect::<Vec<_>>()
                .join(" ")
        };
        out.emit(
            format!(
                "{} -> {}",
                ordered(&c.primary_inputs, &inputs),
                ordered(&c.primary_outputs, &outputs)
            ),
            json!({"inputs": inputs, "outputs": outputs}),
        );
    }
    Ok(0)
}
