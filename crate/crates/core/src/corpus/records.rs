use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::encode::{emit_dimacs, emit_plf, parse_dimacs, parse_plf};
use crate::equiv::check_circuit_equivalence;
use crate::par::{self, Execution};
use crate::synth::{synthesize_circuit, SynthSource};

use super::{generate_design, golden_encodings, render_prompt, CorpusError, DesignSpec, Family, VariantConstraint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EncodingKind {
    Plf,
    Tseytin,
}

impl EncodingKind {
    pub const ALL: [EncodingKind; 2] = [EncodingKind::Plf, EncodingKind::Tseytin];

    pub fn name(self) -> &'static str {
        match self {
            EncodingKind::Plf => "plf",
            EncodingKind::Tseytin => "tseytin",
        }
    }

    fn instruction(self) -> &'static str {
        match self {
            EncodingKind::Plf => "Answer with the PLF encoding: one `net <-> expression` line per gate.",
            EncodingKind::Tseytin => "Answer with the Tseytin CNF encoding in DIMACS form.",
        }
    }
}

impl fmt::Display for EncodingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EncodingKind {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, CorpusError> {
        EncodingKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| CorpusError::InvalidSpec(format!("unknown encoding {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Validation,
    Test,
}

impl Split {
    pub fn name(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Validation => "validation",
            Split::Test => "test",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitConfig {
    pub train: f64,
    pub validation: f64,
    pub test: f64,
    pub seed: u64,
}

impl Default for SplitConfig {
    fn default() -> Self {
        SplitConfig {
            train: 0.8,
            validation: 0.1,
            test: 0.1,
            seed: 0,
        }
    }
}

impl SplitConfig {
    pub fn new(train: f64, validation: f64, test: f64, seed: u64) -> Result<Self, CorpusError> {
        let s = SplitConfig {
            train,
            validation,
            test,
            seed,
        };
        s.check()?;
        Ok(s)
    }

    /// Parses `train,validation,test`.
    pub fn parse(text: &str, seed: u64) -> Result<Self, CorpusError> {
        let parts = text
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CorpusError::InvalidSplit(e.to_string()))?;
        let [a, b, c] = parts[..] else {
            return Err(CorpusError::InvalidSplit(format!(
                "expected three fractions, got {text:?}"
            )));
        };
        SplitConfig::new(a, b, c, seed)
    }

    pub fn check(&self) -> Result<(), CorpusError> {
        let f = [self.train, self.validation, self.test];
        if f.iter().any(|x| !x.is_finite() || *x <= 0.0) || ((f.iter().sum::<f64>()) - 1.0).abs() > 1e-9 {
            return Err(CorpusError::InvalidSplit(format!(
                "fractions {f:?} must be positive and sum to 1"
            )));
        }
        Ok(())
    }

    /// Sizes per split: validation and test are floored, train takes the rest.
    pub fn sizes(&self, n: usize) -> (usize, usize, usize) {
        let v = (n as f64 * self.validation + 1e-9).floor() as usize;
        let t = (n as f64 * self.test + 1e-9).floor() as usize;
        (n - v - t, v, t)
    }

    /// Deterministic assignment by seeded hash order of the ids.
    pub fn assign(&self, ids: &[String]) -> Vec<Split> {
        let (_, v, t) = self.sizes(ids.len());
        let key = |id: &String| {
            let mut h = DefaultHasher::new();
            (self.seed, id).hash(&mut h);
            h.finish()
        };
        let mut order: Vec<usize> = (0..ids.len()).collect();
        order.sort_by(|&a, &b| key(&ids[a]).cmp(&key(&ids[b])).then_with(|| ids[a].cmp(&ids[b])));
        let mut out = vec![Split::Train; ids.len()];
        for (rank, &i) in order.iter().enumerate() {
            out[i] = if rank < t {
                Split::Test
            } else if rank < t + v {
                Split::Validation
            } else {
                Split::Train
            };
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptRecord {
    pub id: String,
    pub prompt: String,
    pub completion: String,
    pub encoding: EncodingKind,
    pub family: Family,
    pub width: u32,
    pub variant: VariantConstraint,
    pub seed: u64,
    pub split: Split,
}

impl PromptRecord {
    pub fn spec(&self) -> DesignSpec {
        DesignSpec::new(self.family, self.width, self.variant, self.seed)
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

/// The request text for one encoding of a design.
pub fn prompt_for(spec: &DesignSpec, kind: EncodingKind) -> String {
    format!("{}{}\n", render_prompt(spec), kind.instruction())
}

fn record(spec: &DesignSpec, kind: EncodingKind) -> Result<PromptRecord, CorpusError> {
    let (plf, cnf) = golden_encodings(spec)?;
    let completion = match kind {
        EncodingKind::Plf => emit_plf(&plf),
        EncodingKind::Tseytin => emit_dimacs(&cnf),
    };
    Ok(PromptRecord {
        id: format!("{}-{}", spec.id(), kind),
        prompt: prompt_for(spec, kind),
        completion,
        encoding: kind,
        family: spec.family,
        width: spec.width,
        variant: spec.variant,
        seed: spec.seed,
        split: Split::Train,
    })
}

/// Re-parses and re-synthesizes a completion and proves it equivalent to
/// the record's design.
pub fn verify_record(r: &PromptRecord) -> Result<(), CorpusError> {
    let spec = r.spec();
    let golden = generate_design(&spec)?;
    let hints = spec.io_hints();
    let rebuilt = match r.encoding {
        EncodingKind::Plf => {
            let doc = parse_plf(&r.completion).map_err(|_| CorpusError::VerificationFailed(r.id.clone()))?;
            synthesize_circuit(SynthSource::Plf(&doc), &hints)
        }
        EncodingKind::Tseytin => {
            let f = parse_dimacs(&r.completion).map_err(|_| CorpusError::VerificationFailed(r.id.clone()))?;
            synthesize_circuit(SynthSource::Cnf(&f), &hints)
        }
    }
    .map_err(|_| CorpusError::VerificationFailed(r.id.clone()))?;
    if !check_circuit_equivalence(&golden, &rebuilt)?.is_equivalent() {
        return Err(CorpusError::VerificationFailed(r.id.clone()));
    }
    Ok(())
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub records: usize,
    pub designs: usize,
    pub splits: BTreeMap<String, usize>,
    pub families: BTreeMap<String, usize>,
    pub encodings: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub records: Vec<PromptRecord>,
    pub manifest: Manifest,
}

impl Corpus {
    pub fn to_jsonl(&self) -> String {
        let mut s = String::new();
        for r in &self.records {
            s.push_str(&r.to_json_line());
            s.push('\n');
        }
        s
    }
}

/// Builds and verifies one record per (spec, encoding), in spec order.
pub fn build_corpus(
    specs: &[DesignSpec],
    encodings: &[EncodingKind],
    split: &SplitConfig,
    exec: Execution,
) -> Result<Corpus, CorpusError> {
    if specs.is_empty() || encodings.is_empty() {
        return Err(CorpusError::InvalidSpec("no designs or encodings requested".into()));
    }
    split.check()?;
    let per_spec = par::map(exec, specs, |spec| {
        encodings
            .iter()
            .map(|&k| {
                let r = record(spec, k)?;
                verify_record(&r)?;
                Ok(r)
            })
            .collect::<Result<Vec<_>, CorpusError>>()
    });
    let mut records = Vec::with_capacity(specs.len() * encodings.len());
    for r in per_spec {
        records.extend(r?);
    }
    let ids: Vec<String> = records.iter().map(|r| r.id.clone()).collect();
    for (r, s) in records.iter_mut().zip(split.assign(&ids)) {
        r.split = s;
    }

    let mut manifest = Manifest {
        records: records.len(),
        designs: specs.len(),
        ..Manifest::default()
    };
    for s in ["train", "validation", "test"] {
        manifest.splits.insert(s.into(), 0);
    }
    for r in &records {
        *manifest.splits.entry(r.split.name().into()).or_default() += 1;
        *manifest.families.entry(r.family.name().into()).or_default() += 1;
        *manifest.encodings.entry(r.encoding.name().into()).or_default() += 1;
    }
    Ok(Corpus { records, manifest })
}

/// Writes through a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    result
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

/// Builds the corpus and writes `out` plus `<out>.manifest.json`. Nothing is
/// written unless every record verifies.
pub fn generate_corpus(
    specs: &[DesignSpec],
    encodings: &[EncodingKind],
    split: &SplitConfig,
    out: &Path,
    exec: Execution,
) -> Result<Manifest, CorpusError> {
    let corpus = build_corpus(specs, encodings, split, exec)?;
    write_atomic(out, &corpus.to_jsonl())?;
    let manifest = serde_json::to_string_pretty(&corpus.manifest).expect("manifest serializes");
    write_atomic(&manifest_path(out), &(manifest + "\n"))?;
    log::info!("wrote {} records to {}", corpus.records.len(), out.display());
    Ok(corpus.manifest)
}

pub fn parse_records(text: &str) -> Result<Vec<PromptRecord>, CorpusError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| CorpusError::BadRecord {
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}
