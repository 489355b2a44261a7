//! Design families, gate-level variants, golden encodings and
//! prompt/completion corpora.

mod builder;
mod families;
mod records;

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, GateType};
use crate::encode::{plf_encode, tseytin_encode, CnfFormula, EncodeError, PlfDocument};
use crate::equiv::EquivError;
use crate::synth::{IoHints, SynthError};

pub use families::{alu_recipe, generate_design};
pub use records::{
    build_corpus, generate_corpus, manifest_path, parse_records, prompt_for, verify_record, write_atomic, Corpus,
    EncodingKind, Manifest, PromptRecord, Split, SplitConfig,
};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("invalid design spec: {0}")]
    InvalidSpec(String),
    #[error("basis {0} cannot express {1}")]
    InfeasibleConstraint(Basis, Family),
    #[error("record {0} failed re-verification")]
    VerificationFailed(String),
    #[error("invalid split: {0}")]
    InvalidSplit(String),
    #[error("malformed record on line {line}: {message}")]
    BadRecord { line: usize, message: String },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error(transparent)]
    Equiv(#[from] EquivError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Adder,
    Subtractor,
    Mux,
    Decoder,
    Alu,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Adder,
        Family::Subtractor,
        Family::Mux,
        Family::Decoder,
        Family::Alu,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Adder => "adder",
            Family::Subtractor => "subtractor",
            Family::Mux => "mux",
            Family::Decoder => "decoder",
            Family::Alu => "alu",
        }
    }

    /// Widths accepted by [`DesignSpec::check`].
    pub fn widths(self) -> Vec<u32> {
        match self {
            Family::Mux => vec![2, 4, 8, 16],
            _ => (2..=6).collect(),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, CorpusError> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| CorpusError::InvalidSpec(format!("unknown family {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Basis {
    Full,
    NandNot,
    NorNot,
    AndOrNot,
}

impl Basis {
    pub const ALL: [Basis; 4] = [Basis::Full, Basis::NandNot, Basis::NorNot, Basis::AndOrNot];

    pub fn tag(self) -> &'static str {
        match self {
            Basis::Full => "full",
            Basis::NandNot => "nand",
            Basis::NorNot => "nor",
            Basis::AndOrNot => "aon",
        }
    }

    pub fn gates(self) -> &'static [GateType] {
        match self {
            Basis::Full => &GateType::ALL,
            Basis::NandNot => &[GateType::Nand, GateType::Not],
            Basis::NorNot => &[GateType::Nor, GateType::Not],
            Basis::AndOrNot => &[GateType::And, GateType::Or, GateType::Not],
        }
    }

    pub fn allows(self, kind: GateType) -> bool {
        self.gates().contains(&kind)
    }

    fn describe(self) -> &'static str {
        match self {
            Basis::Full => "any of the eight basic gates",
            Basis::NandNot => "NAND and NOT gates only",
            Basis::NorNot => "NOR and NOT gates only",
            Basis::AndOrNot => "AND, OR and NOT gates only",
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Style {
    Ripple,
    Tree,
}

impl Style {
    pub const ALL: [Style; 2] = [Style::Ripple, Style::Tree];

    pub fn tag(self) -> &'static str {
        match self {
            Style::Ripple => "ripple",
            Style::Tree => "tree",
        }
    }
}

/// Gate basis plus structural style, written `basis-style` (e.g. `nand-tree`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct VariantConstraint {
    pub basis: Basis,
    pub style: Style,
}

impl VariantConstraint {
    pub const fn new(basis: Basis, style: Style) -> Self {
        VariantConstraint { basis, style }
    }

    pub fn all() -> impl Iterator<Item = VariantConstraint> {
        Basis::ALL
            .into_iter()
            .flat_map(|b| Style::ALL.into_iter().map(move |s| VariantConstraint::new(b, s)))
    }
}

impl Default for VariantConstraint {
    fn default() -> Self {
        VariantConstraint::new(Basis::Full, Style::Ripple)
    }
}

impl fmt::Display for VariantConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.basis.tag(), self.style.tag())
    }
}

impl FromStr for VariantConstraint {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, CorpusError> {
        VariantConstraint::all()
            .find(|v| v.to_string() == s)
            .ok_or_else(|| CorpusError::InvalidSpec(format!("unknown variant {s:?}")))
    }
}

impl From<VariantConstraint> for String {
    fn from(v: VariantConstraint) -> String {
        v.to_string()
    }
}

impl TryFrom<String> for VariantConstraint {
    type Error = CorpusError;

    fn try_from(s: String) -> Result<Self, CorpusError> {
        s.parse()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DesignSpec {
    pub family: Family,
    /// Bit width for adders, subtractors and ALUs; data inputs for muxes;
    /// select bits for decoders.
    pub width: u32,
    pub variant: VariantConstraint,
    pub seed: u64,
}

impl DesignSpec {
    pub fn new(family: Family, width: u32, variant: VariantConstraint, seed: u64) -> Self {
        DesignSpec {
            family,
            width,
            variant,
            seed,
        }
    }

    pub fn check(&self) -> Result<(), CorpusError> {
        if !self.family.widths().contains(&self.width) {
            return Err(CorpusError::InvalidSpec(format!(
                "{} width {} outside {:?}",
                self.family,
                self.width,
                self.family.widths()
            )));
        }
        Ok(())
    }

    pub fn module_name(&self) -> String {
        families::module_name(self.family, self.width)
    }

    /// Primary inputs and outputs, most significant bit first.
    pub fn ports(&self) -> (Vec<String>, Vec<String>) {
        families::ports(self.family, self.width)
    }

    pub fn io_hints(&self) -> IoHints {
        let (i, o) = self.ports();
        IoHints::new(self.module_name(), i, o)
    }

    /// `<module>-<variant>-s<seed>`.
    pub fn id(&self) -> String {
        format!("{}-{}-s{}", self.module_name(), self.variant, self.seed)
    }

    fn build_seed(&self) -> u64 {
        let mut h = DefaultHasher::new();
        (self.family, self.width, self.variant, self.seed).hash(&mut h);
        h.finish()
    }
}

pub fn golden_encodings(spec: &DesignSpec) -> Result<(PlfDocument, CnfFormula), CorpusError> {
    let c = generate_design(spec)?;
    Ok((plf_encode(&c)?, tseytin_encode(&c)?))
}

/// The family grid of the default corpus: adders and subtractors of 2..6
/// bits, 2:1..16:1 muxes and 2x4..6x64 decoders, each in every variant
/// that yields a distinct netlist.
pub fn default_grid(seed: u64) -> Result<Vec<DesignSpec>, CorpusError> {
    grid(&[Family::Adder, Family::Subtractor, Family::Mux, Family::Decoder], seed)
}

pub fn grid(families: &[Family], seed: u64) -> Result<Vec<DesignSpec>, CorpusError> {
    let mut specs = Vec::new();
    for &family in families {
        for width in family.widths() {
            let mut seen: Vec<Circuit> = Vec::new();
            for variant in VariantConstraint::all() {
                let spec = DesignSpec::new(family, width, variant, seed);
                let c = generate_design(&spec)?;
                if !seen.contains(&c) {
                    seen.push(c);
                    specs.push(spec);
                }
            }
        }
    }
    Ok(specs)
}

fn ordinal_port(base: &str, i: u32, dir: &str) -> String {
    format!("    {} : bit {i} of {dir} {base}\n", families::bit(base, i))
}

/// Natural-language design request listing every port.
pub fn render_prompt(spec: &DesignSpec) -> String {
    let n = spec.width;
    let name = spec.module_name();
    let mut s = String::new();
    let (headline, detail) = match spec.family {
        Family::Adder => (
            format!("Design a {n}-bit adder that produces the sum and carry-out of two {n}-bit numbers."),
            format!("Combinational adder over {n}-bit inputs a and b with no carry-in; sum is {n} bits wide and cout is the carry-out."),
        ),
        Family::Subtractor => (
            format!("Design a {n}-bit subtractor that produces the difference and borrow of two {n}-bit numbers."),
            format!("Combinational subtractor computing a - b over {n}-bit inputs; diff is {n} bits wide and borrow is set when a < b."),
        ),
        Family::Mux => (
            format!("Design a {n}x1 multiplexer that forwards one of {n} data inputs to the output."),
            format!("y equals d_i_ where i is the unsigned value of the {}-bit select input sel.", n.trailing_zeros()),
        ),
        Family::Decoder => (
            format!("Design a {n}x{} decoder that raises exactly one of {} outputs.", 1u32 << n, 1u32 << n),
            format!("out_i_ is 1 exactly when the {n}-bit select input sel equals i."),
        ),
        Family::Alu => (
            format!("Design a {n}-bit ALU that adds, subtracts, ANDs or ORs two {n}-bit inputs."),
            "(s_m, s_0) = (0,0) selects a + b, (0,1) selects a - b, (1,0) selects a & b and (1,1) selects a | b; carries and borrows are discarded.".to_string(),
        ),
    };
    s.push_str(&headline);
    s.push_str("\nModule name:\n    ");
    s.push_str(&name);
    s.push_str("\nInput ports:\n");
    let (inputs, outputs) = spec.ports();
    for p in &inputs {
        s.push_str(&describe_port(p, "input"));
    }
    s.push_str("Output ports:\n");
    for p in &outputs {
        s.push_str(&describe_port(p, "output"));
    }
    s.push_str("Implementation:\n");
    s.push_str(&detail);
    s.push_str(&format!(
        "\nConstraints: use {} with a {} structure.\n",
        spec.variant.basis.describe(),
        spec.variant.style.tag()
    ));
    s
}

fn describe_port(p: &str, dir: &str) -> String {
    if let Some((base, idx)) = p.strip_suffix('_').and_then(|q| q.rsplit_once('_')) {
        if let Ok(i) = idx.parse::<u32>() {
            return ordinal_port(base, i, dir);
        }
    }
    let what = match p {
        "cout" => "carry-out bit",
        "borrow" => "borrow bit",
        "y" => "selected data bit",
        "s_0" => "operation select, low bit",
        "s_m" => "operation select, mode bit",
        _ => "single bit",
    };
    format!("    {p} : {what}\n")
}
