use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const FULL_ADDER: &str = "\
INPUT(a)
INPUT(b)
INPUT(cin)
OUTPUT(s)
OUTPUT(cout)
t = XOR(a, b)
s = XOR(t, cin)
g = AND(a, b)
p = AND(t, cin)
cout = OR(g, p)
";

fn veritas(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_veritas"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn setup() -> (TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().to_path_buf();
    fs::write(p.join("fa.bench"), FULL_ADDER).unwrap();
    (dir, p)
}

#[test]
fn encode_synth_cec_round_trip() {
    let (_t, d) = setup();
    let o = veritas(&d, &["encode", "fa.bench", "--to", "plf", "-o", "fa.plf"]);
    assert_eq!(code(&o), 0, "{o:?}");
    assert!(fs::read_to_string(d.join("fa.plf")).unwrap().contains("<->"));

    fs::write(
        d.join("io.json"),
        r#"{"module": "fa", "inputs": ["a", "b", "cin"], "outputs": ["s", "cout"]}"#,
    )
    .unwrap();
    let o = veritas(
        &d,
        &[
            "synth",
            "--plf",
            "fa.plf",
            "--io",
            "io.json",
            "-o",
            "fa.v",
            "--emit-bench",
            "fa2.bench",
        ],
    );
    assert_eq!(code(&o), 0, "{o:?}");
    assert!(fs::read_to_string(d.join("fa.v")).unwrap().starts_with("module fa"));
    assert!(d.join("fa2.bench").exists());

    let o = veritas(&d, &["cec", "fa.bench", "fa.v"]);
    assert_eq!((code(&o), stdout(&o).trim()), (0, "Equivalent"));
    let o = veritas(&d, &["cec", "fa2.bench", "fa.v"]);
    assert_eq!(code(&o), 0);

    fs::write(d.join("bad.bench"), FULL_ADDER.replace("cout = OR", "cout = AND")).unwrap();
    let o = veritas(&d, &["--format", "json-lines", "cec", "fa.bench", "bad.bench"]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["verdict"], "NotEquivalent");
    assert!(v["counterexample"]["inputs"]["a"].is_boolean());
}

#[test]
fn synth_from_cnf_uses_declared_ports() {
    let (_t, d) = setup();
    assert_eq!(
        code(&veritas(&d, &["encode", "fa.bench", "--to", "tseytin", "-o", "fa.cnf"])),
        0
    );
    let o = veritas(&d, &["synth", "--cnf", "fa.cnf", "-o", "fa.v"]);
    assert_eq!(code(&o), 0, "{o:?}");
    assert_eq!(code(&veritas(&d, &["cec", "fa.bench", "fa.v"])), 0);
}

#[test]
fn check_exit_codes() {
    let (_t, d) = setup();
    fs::write(d.join("bad.bench"), FULL_ADDER.replace("s = XOR", "s = XNOR")).unwrap();
    fs::write(d.join("other.bench"), FULL_ADDER.replace("cin", "c_in")).unwrap();
    for (src, out) in [
        ("fa.bench", "g.cnf"),
        ("fa.bench", "c.cnf"),
        ("bad.bench", "bad.cnf"),
        ("other.bench", "other.cnf"),
    ] {
        assert_eq!(code(&veritas(&d, &["encode", src, "--to", "tseytin", "-o", out])), 0);
    }
    let o = veritas(&d, &["check", "--golden", "g.cnf", "--candidate", "c.cnf"]);
    assert_eq!((code(&o), stdout(&o).trim()), (0, "Match"));
    let o = veritas(&d, &["check", "--golden", "g.cnf", "--candidate", "bad.cnf"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("GateLogicDiff"), "{}", stdout(&o));
    let o = veritas(
        &d,
        &[
            "--format",
            "json-lines",
            "check",
            "--golden",
            "g.cnf",
            "--candidate",
            "other.cnf",
        ],
    );
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("NotComparable"));
    assert_eq!(
        code(&veritas(
            &d,
            &["check", "--golden", "g.cnf", "--candidate", "missing.cnf"]
        )),
        2
    );
}

#[test]
fn sat_prints_verdict_and_model() {
    let (_t, d) = setup();
    fs::write(d.join("sat.cnf"), "p cnf 2 2\n1 2 0\n-1 0\n").unwrap();
    fs::write(d.join("unsat.cnf"), "p cnf 1 2\n1 0\n-1 0\n").unwrap();
    let o = veritas(&d, &["sat", "sat.cnf"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "s SATISFIABLE\nv -1 2 0\n");
    let o = veritas(&d, &["--format", "json-lines", "sat", "unsat.cnf"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["verdict"], "UNSAT");
}

#[test]
fn simulate_modes() {
    let (_t, d) = setup();
    let o = veritas(&d, &["simulate", "fa.bench", "--set", "a=1,b=1,cin=0"]);
    assert_eq!(stdout(&o).trim(), "a=1 b=1 cin=0 -> s=0 cout=1");
    let o = veritas(&d, &["simulate", "fa.bench", "--all"]);
    let table = stdout(&o);
    let rows: Vec<&str> = table.lines().collect();
    assert_eq!(rows.len(), 8);
    for (p, row) in rows.iter().enumerate() {
        let ones = (p as u32).count_ones();
        assert!(
            row.ends_with(&format!("s={} cout={}", ones % 2, (ones >= 2) as u8)),
            "{row}"
        );
    }
    let o = veritas(
        &d,
        &["--format", "json-lines", "simulate", "fa.bench", "--pattern", "7"],
    );
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["outputs"]["cout"], true);
    assert_eq!(code(&veritas(&d, &["simulate", "fa.bench", "--set", "a=1"])), 2);
}

fn small_corpus(d: &Path) {
    let o = veritas(
        d,
        &[
            "--seed",
            "3",
            "corpus",
            "--out",
            "c.jsonl",
            "--families",
            "adder,decoder",
            "--encodings",
            "plf",
        ],
    );
    assert_eq!(code(&o), 0, "{o:?}");
}

#[test]
fn corpus_then_mock_eval() {
    let (_t, d) = setup();
    small_corpus(&d);
    let records = fs::read_to_string(d.join("c.jsonl")).unwrap();
    let n = records.lines().count();
    assert!(n > 10);
    assert!(d.join("c.jsonl.manifest.json").exists());

    fs::write(d.join("mock.toml"), "kind = \"mock\"\nmock_file = \"c.jsonl\"\n").unwrap();
    let o = veritas(
        &d,
        &[
            "eval",
            "--prompts",
            "c.jsonl",
            "--endpoint",
            "mock.toml",
            "--report",
            "r",
        ],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.join("r.json")).unwrap()).unwrap();
    assert_eq!(report["overall"]["c"], n);
    assert_eq!(report["pass_at_k"][0]["value"], 1.0);
    assert!(fs::read_to_string(d.join("r.txt")).unwrap().contains("pass@"));
}

#[test]
fn infer_then_grade_completions() {
    let (_t, d) = setup();
    small_corpus(&d);
    let first: serde_json::Value =
        serde_json::from_str(fs::read_to_string(d.join("c.jsonl")).unwrap().lines().next().unwrap()).unwrap();
    // Only the first prompt is answered; the rest are mock misses.
    let mock = serde_json::json!({"prompt": first["prompt"], "completion": first["completion"]});
    fs::write(d.join("one.jsonl"), format!("{mock}\n")).unwrap();
    fs::write(d.join("mock.toml"), "kind = \"mock\"\nmock_file = \"one.jsonl\"\n").unwrap();
    let o = veritas(
        &d,
        &[
            "infer",
            "--prompts",
            "c.jsonl",
            "--endpoint",
            "mock.toml",
            "--out",
            "out.jsonl",
        ],
    );
    assert_eq!(code(&o), 2, "backend misses are infrastructure errors");
    assert!(d.join("out.jsonl.transcript.jsonl").exists());

    let o = veritas(
        &d,
        &[
            "--format",
            "json-lines",
            "eval",
            "--prompts",
            "c.jsonl",
            "--completions",
            "out.jsonl",
            "--k",
            "1",
            "--report",
            "r",
        ],
    );
    assert_eq!(code(&o), 1);
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let summary = lines.last().unwrap();
    assert_eq!(summary["overall"]["c"], 1);
    assert_eq!(lines[0]["grade"], "correct");
    assert_eq!(lines[1]["grade"], "infra_error");
}

#[test]
fn token_value_stays_out_of_outputs() {
    let (_t, d) = setup();
    small_corpus(&d);
    let secret = "sk-cli-secret-4f1d9a7e2b";
    fs::write(
        d.join("http.toml"),
        "base_url = \"http://127.0.0.1:9/v1\"\nmodel = \"m\"\ntoken_env = \"VERITAS_CLI_TEST_TOKEN\"\nbackoff_ms = 1\nmax_retries = 0\n",
    )
    .unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_veritas"))
        .current_dir(&d)
        .env("VERITAS_CLI_TEST_TOKEN", secret)
        .env("RUST_LOG", "trace")
        .args([
            "infer",
            "--prompts",
            "c.jsonl",
            "--endpoint",
            "http.toml",
            "--out",
            "out.jsonl",
        ])
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    for text in [
        stdout(&o),
        String::from_utf8_lossy(&o.stderr).into_owned(),
        fs::read_to_string(d.join("out.jsonl")).unwrap(),
        fs::read_to_string(d.join("out.jsonl.transcript.jsonl")).unwrap(),
    ] {
        assert!(!text.contains(secret));
    }
    assert!(String::from_utf8_lossy(&o.stderr).contains("request to http"));
}

#[test]
fn usage_errors_exit_two() {
    let (_t, d) = setup();
    assert_eq!(code(&veritas(&d, &["encode", "nope.bench"])), 2);
    assert_eq!(code(&veritas(&d, &["--format", "yaml", "tokens"])), 2);
    assert_eq!(
        code(&veritas(&d, &["corpus", "--out", "x.jsonl", "--families", "gizmo"])),
        2
    );
    assert_eq!(
        code(&veritas(&d, &["corpus", "--out", "x.jsonl", "--split", "0.5,0.1"])),
        2
    );
    assert!(!d.join("x.jsonl").exists());
    assert_eq!(code(&veritas(&d, &["eval", "--prompts", "x.jsonl"])), 2);
}

#[test]
fn tokens_table() {
    let (_t, d) = setup();
    let o = veritas(&d, &["tokens", "--families", "adder"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.starts_with("design"));
    assert!(out.contains("adder_5bit-full-ripple-s7"));
    let o = veritas(&d, &["--format", "json-lines", "tokens", "--families", "decoder"]);
    for line in stdout(&o).lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["tokens_plf"].as_u64() < v["tokens_tseytin"].as_u64());
    }
}
