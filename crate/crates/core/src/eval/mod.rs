//! pass@k arithmetic, end-to-end grading of generated encodings against
//! golden designs, and token-economy tables.

mod tokens;

use std::collections::BTreeMap;
use std::fmt::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{generate_design, golden_encodings, parse_records, CorpusError, EncodingKind, PromptRecord};
use crate::encode::{count_tokens, plf_to_cnf, TOKENIZER_ID};
use crate::equiv::{check_circuit_equivalence, check_cnf_equivalence, EquivError, MatchVerdict};
use crate::llm::{extract_dimacs, extract_plf, Client, GenerationParams, LlmError};
use crate::par::{self, Execution};
use crate::synth::{synthesize_circuit, SynthSource};

pub use tokens::{token_report, token_table_text, TokenRow};

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("invalid pass@k query: {0}")]
    InvalidQuery(String),
    #[error("malformed completion on line {line}: {message}")]
    BadCompletion { line: usize, message: String },
    #[error("no completion for prompt {0}")]
    MissingCompletion(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Llm(#[from] LlmError),
    #[error(transparent)]
    Encode(#[from] crate::encode::EncodeError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PassAtKQuery {
    pub n: u64,
    pub c: u64,
    pub k: u64,
}

impl PassAtKQuery {
    pub fn new(n: u64, c: u64, k: u64) -> Result<Self, EvalError> {
        let q = PassAtKQuery { n, c, k };
        q.check()?;
        Ok(q)
    }

    pub fn check(&self) -> Result<(), EvalError> {
        if self.c > self.n || self.k == 0 || self.k > self.n {
            return Err(EvalError::InvalidQuery(format!(
                "need 0 <= c <= n and 1 <= k <= n, got n={} c={} k={}",
                self.n, self.c, self.k
            )));
        }
        Ok(())
    }
}

/// Probability that at least one of `k` samples drawn without replacement
/// from `n` attempts, `c` of them correct, is correct.
pub fn pass_at_k(q: PassAtKQuery) -> Result<f64, EvalError> {
    q.check()?;
    let PassAtKQuery { n, c, k } = q;
    if k > n - c {
        return Ok(1.0);
    }
    let miss: f64 = (0..k).map(|i| (n - c - i) as f64 / (n - i) as f64).product();
    Ok(1.0 - miss)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Grade {
    Correct,
    WrongEncoding,
    ExtractionFailed,
    InfraError,
}

impl Grade {
    pub fn name(self) -> &'static str {
        match self {
            Grade::Correct => "correct",
            Grade::WrongEncoding => "wrong_encoding",
            Grade::ExtractionFailed => "extraction_failed",
            Grade::InfraError => "infra_error",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Structural {
    Match,
    Mismatch,
    NotComparable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PromptGrade {
    pub id: String,
    pub family: String,
    pub encoding: EncodingKind,
    pub grade: Grade,
    pub structural: Option<Structural>,
    pub detail: Option<String>,
    pub completion_tokens: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub c: u64,
    pub n: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PassAtK {
    pub k: u64,
    /// `None` when `k` exceeds the sample count.
    pub value: Option<f64>,
}

fn pass_table(t: Tally, ks: &[u64]) -> Vec<PassAtK> {
    ks.iter()
        .map(|&k| PassAtK {
            k,
            value: PassAtKQuery::new(t.n, t.c, k).and_then(pass_at_k).ok(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TokenStats {
    pub tokenizer: String,
    pub completion_tokens: usize,
    pub mean_completion_tokens: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRunReport {
    pub grades: Vec<PromptGrade>,
    pub overall: Tally,
    pub families: BTreeMap<String, Tally>,
    pub grade_counts: BTreeMap<Grade, u64>,
    pub pass_at_k: Vec<PassAtK>,
    pub family_pass_at_k: BTreeMap<String, Vec<PassAtK>>,
    pub tokens: TokenStats,
}

impl EvalRunReport {
    pub fn from_grades(grades: Vec<PromptGrade>, ks: &[u64]) -> Self {
        let mut overall = Tally::default();
        let mut families: BTreeMap<String, Tally> = BTreeMap::new();
        let mut grade_counts = BTreeMap::new();
        for g in &grades {
            let correct = (g.grade == Grade::Correct) as u64;
            overall.n += 1;
            overall.c += correct;
            let t = families.entry(g.family.clone()).or_default();
            t.n += 1;
            t.c += correct;
            *grade_counts.entry(g.grade).or_insert(0) += 1;
        }
        let total: usize = grades.iter().map(|g| g.completion_tokens).sum();
        EvalRunReport {
            pass_at_k: pass_table(overall, ks),
            family_pass_at_k: families.iter().map(|(f, &t)| (f.clone(), pass_table(t, ks))).collect(),
            overall,
            families,
            grade_counts,
            tokens: TokenStats {
                tokenizer: TOKENIZER_ID.into(),
                completion_tokens: total,
                mean_completion_tokens: if grades.is_empty() {
                    0.0
                } else {
                    total as f64 / grades.len() as f64
                },
            },
            grades,
        }
    }

    pub fn pass_at(&self, k: u64) -> Option<f64> {
        self.pass_at_k.iter().find(|p| p.k == k).and_then(|p| p.value)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let w = self.grades.iter().map(|g| g.id.len()).max().unwrap_or(2).max(2);
        let _ = writeln!(s, "{:<w$}  {:<8}  {:<17}  structural", "id", "encoding", "grade");
        for g in &self.grades {
            let st = match g.structural {
                Some(Structural::Match) => "match",
                Some(Structural::Mismatch) => "mismatch",
                Some(Structural::NotComparable) => "not_comparable",
                None => "-",
            };
            let _ = writeln!(
                s,
                "{:<w$}  {:<8}  {:<17}  {st}",
                g.id,
                g.encoding.name(),
                g.grade.name()
            );
        }
        let _ = writeln!(s);
        let _ = writeln!(s, "{:<12}  {:>5}  {:>5}", "family", "c", "n");
        for (f, t) in &self.families {
            let _ = writeln!(s, "{f:<12}  {:>5}  {:>5}", t.c, t.n);
        }
        let _ = writeln!(s, "{:<12}  {:>5}  {:>5}", "overall", self.overall.c, self.overall.n);
        let _ = writeln!(s);
        for p in &self.pass_at_k {
            match p.value {
                Some(v) => {
                    let _ = writeln!(s, "pass@{} = {v:.4}", p.k);
                }
                None => {
                    let _ = writeln!(s, "pass@{} = n/a (n = {})", p.k, self.overall.n);
                }
            }
        }
        let counts: Vec<String> = self
            .grade_counts
            .iter()
            .map(|(g, n)| format!("{}={n}", g.name()))
            .collect();
        let _ = writeln!(s, "grades: {}", counts.join(" "));
        let _ = writeln!(
            s,
            "completion tokens ({}): {} total, {:.1} mean",
            self.tokens.tokenizer, self.tokens.completion_tokens, self.tokens.mean_completion_tokens
        );
        s
    }
}

fn graded(r: &PromptRecord, grade: Grade, detail: Option<String>, tokens: usize) -> PromptGrade {
    PromptGrade {
        id: r.id.clone(),
        family: r.family.name().into(),
        encoding: r.encoding,
        grade,
        structural: None,
        detail,
        completion_tokens: tokens,
    }
}

/// Grades one completion against the record's golden design: Correct iff
/// the rebuilt circuit is functionally equivalent. The structural CNF
/// comparison is recorded alongside.
pub fn grade_completion(r: &PromptRecord, completion: &Result<String, LlmError>) -> PromptGrade {
    let text = match completion {
        Ok(t) => t,
        Err(e) => return graded(r, Grade::InfraError, Some(e.to_string()), 0),
    };
    let tokens = count_tokens(text).count;
    let spec = r.spec();
    let (golden, golden_cnf) = match generate_design(&spec).and_then(|c| Ok((c, golden_encodings(&spec)?.1))) {
        Ok(g) => g,
        Err(e) => return graded(r, Grade::InfraError, Some(format!("golden design: {e}")), tokens),
    };
    let hints = spec.io_hints();
    let extracted = match r.encoding {
        EncodingKind::Plf => extract_plf(text).map(|doc| {
            let cnf = plf_to_cnf(&doc).ok();
            (synthesize_circuit(SynthSource::Plf(&doc), &hints), cnf)
        }),
        EncodingKind::Tseytin => {
            extract_dimacs(text).map(|f| (synthesize_circuit(SynthSource::Cnf(&f), &hints), Some(f)))
        }
    };
    let (circuit, cnf) = match extracted {
        Ok(x) => x,
        Err(e) => return graded(r, Grade::ExtractionFailed, Some(e.to_string()), tokens),
    };
    let structural = cnf.map(|f| match check_cnf_equivalence(&f, &golden_cnf) {
        Ok(rep) if rep.verdict == MatchVerdict::Match => Structural::Match,
        Ok(_) => Structural::Mismatch,
        Err(_) => Structural::NotComparable,
    });
    let (grade, detail) = match circuit {
        Err(e) => (Grade::WrongEncoding, Some(format!("synthesis: {e}"))),
        Ok(c) => match check_circuit_equivalence(&golden, &c) {
            Ok(v) if v.is_equivalent() => (Grade::Correct, None),
            Ok(_) => (Grade::WrongEncoding, Some("not equivalent to the golden design".into())),
            Err(e @ EquivError::Sat(_)) => (Grade::InfraError, Some(e.to_string())),
            Err(e) => (Grade::WrongEncoding, Some(e.to_string())),
        },
    };
    PromptGrade {
        structural,
        ..graded(r, grade, detail, tokens)
    }
}

/// Grades precomputed completions, one per record, in record order.
pub fn grade_all(
    records: &[PromptRecord],
    completions: &[Result<String, LlmError>],
    ks: &[u64],
    exec: Execution,
) -> EvalRunReport {
    assert_eq!(records.len(), completions.len(), "one completion per record");
    let pairs: Vec<(&PromptRecord, &Result<String, LlmError>)> = records.iter().zip(completions).collect();
    let grades = par::map(exec, &pairs, |(r, c)| grade_completion(r, c));
    EvalRunReport::from_grades(grades, ks)
}

/// Generates a completion for every record through `client`, then grades.
pub fn run_eval(
    records: &[PromptRecord],
    client: &Client,
    params: &GenerationParams,
    ks: &[u64],
    exec: Execution,
) -> EvalRunReport {
    let prompts: Vec<String> = records.iter().map(|r| r.prompt.clone()).collect();
    let completions = client.generate_all(&prompts, params);
    grade_all(records, &completions, ks, exec)
}

/// [`run_eval`] over a prompts file in corpus record format.
pub fn run_eval_file(
    prompts: &Path,
    client: &Client,
    params: &GenerationParams,
    ks: &[u64],
    exec: Execution,
) -> Result<EvalRunReport, EvalError> {
    let records = parse_records(&std::fs::read_to_string(prompts)?)?;
    Ok(run_eval(&records, client, params, ks, exec))
}

/// One line of an inference output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletionRecord {
    pub id: String,
    pub completion: Option<String>,
    pub error: Option<LlmError>,
}

impl CompletionRecord {
    pub fn new(id: impl Into<String>, result: &Result<String, LlmError>) -> Self {
        let (completion, error) = match result {
            Ok(t) => (Some(t.clone()), None),
            Err(e) => (None, Some(e.clone())),
        };
        CompletionRecord {
            id: id.into(),
            completion,
            error,
        }
    }

    pub fn result(&self) -> Result<String, LlmError> {
        match (&self.completion, &self.error) {
            (Some(t), _) => Ok(t.clone()),
            (None, Some(e)) => Err(e.clone()),
            (None, None) => Err(LlmError::NoCompletion),
        }
    }
}

pub fn parse_completions(text: &str) -> Result<Vec<CompletionRecord>, EvalError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| EvalError::BadCompletion {
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

/// Pairs completions with records by id, in record order.
pub fn match_completions(
    records: &[PromptRecord],
    completions: &[CompletionRecord],
) -> Result<Vec<Result<String, LlmError>>, EvalError> {
    let by_id: BTreeMap<&str, &CompletionRecord> = completions.iter().map(|c| (c.id.as_str(), c)).collect();
    records
        .iter()
        .map(|r| {
            by_id
                .get(r.id.as_str())
                .map(|c| c.result())
                .ok_or_else(|| EvalError::MissingCompletion(r.id.clone()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64, c: u64, k: u64) -> f64 {
        pass_at_k(PassAtKQuery { n, c, k }).unwrap()
    }

    #[test]
    fn boundary_identities() {
        for n in 1..=20 {
            for k in 1..=n {
                assert_eq!(p(n, n, k), 1.0);
                assert_eq!(p(n, 0, k), 0.0);
            }
        }
    }

    #[test]
    fn invalid_queries() {
        for (n, c, k) in [(5, 6, 1), (5, 2, 0), (5, 2, 6), (0, 0, 1)] {
            assert!(matches!(PassAtKQuery::new(n, c, k), Err(EvalError::InvalidQuery(_))));
            assert!(pass_at_k(PassAtKQuery { n, c, k }).is_err());
        }
    }

    #[test]
    fn pass_at_one_is_fraction_correct() {
        assert!((p(20, 3, 1) - 0.15).abs() < 1e-12);
        assert!((p(20, 6, 1) - 0.30).abs() < 1e-12);
        assert_eq!(p(20, 17, 4), 1.0);
    }

    #[test]
    fn report_tallies() {
        let g = |id: &str, family: &str, grade| PromptGrade {
            id: id.into(),
            family: family.into(),
            encoding: EncodingKind::Plf,
            grade,
            structural: None,
            detail: None,
            completion_tokens: 10,
        };
        let rep = EvalRunReport::from_grades(
            vec![
                g("a", "adder", Grade::Correct),
                g("b", "adder", Grade::InfraError),
                g("c", "mux", Grade::Correct),
            ],
            &[1, 5],
        );
        assert_eq!(rep.overall, Tally { c: 2, n: 3 });
        assert_eq!(rep.families["adder"], Tally { c: 1, n: 2 });
        assert_eq!(rep.pass_at(5), None);
        assert!((rep.pass_at(1).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!(rep.to_text().contains("pass@5 = n/a"));
        let back: EvalRunReport = serde_json::from_str(&rep.to_json()).unwrap();
        assert_eq!(back, rep);
    }
}
