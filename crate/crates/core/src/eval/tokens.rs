use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::corpus::{generate_design, DesignSpec};
use crate::encode::{count_tokens, emit_plf_entries, plf_encode, tseytin_encode};
use crate::par::{self, Execution};

use super::EvalError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TokenRow {
    pub design: String,
    pub tokens_plf: usize,
    pub tokens_tseytin: usize,
    /// `tokens_tseytin / tokens_plf`.
    pub ratio: f64,
}

/// Token counts of the PLF entry text and the Tseytin clause text per
/// design. Port directives are left out so both sides count formula text only.
pub fn token_report(specs: &[DesignSpec], exec: Execution) -> Result<Vec<TokenRow>, EvalError> {
    par::map(exec, specs, |spec| {
        let c = generate_design(spec)?;
        let plf = count_tokens(&emit_plf_entries(&plf_encode(&c)?)).count;
        let tseytin = count_tokens(&tseytin_encode(&c)?.clause_text()).count;
        Ok(TokenRow {
            design: spec.id(),
            tokens_plf: plf,
            tokens_tseytin: tseytin,
            ratio: tseytin as f64 / plf as f64,
        })
    })
    .into_iter()
    .collect()
}

pub fn token_table_text(rows: &[TokenRow]) -> String {
    let w = rows.iter().map(|r| r.design.len()).max().unwrap_or(6).max(6);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<w$}  {:>10}  {:>14}  {:>6}",
        "design", "tokens_plf", "tokens_tseytin", "ratio"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{:<w$}  {:>10}  {:>14}  {:>6.2}",
            r.design, r.tokens_plf, r.tokens_tseytin, r.ratio
        );
    }
    s
}
