//! Lexical token accounting for encoding texts (tokenizer `lex-v1`).
//!
//! A token is a maximal run of `[A-Za-z0-9_]`, the operators `<->` and `->`,
//! a signed integer such as `-12`, or any other single non-space character.

use serde::{Deserialize, Serialize};

pub const TOKENIZER_ID: &str = "lex-v1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenCount {
    pub count: usize,
    pub tokenizer_id: String,
}

pub fn count_tokens(text: &str) -> TokenCount {
    TokenCount {
        count: tokenize(text).len(),
        tokenizer_id: TOKENIZER_ID.to_string(),
    }
}

pub fn tokenize(text: &str) -> Vec<&str> {
    let word = |c: char| c.is_ascii_alphanumeric() || c == '_';
    let bytes: Vec<(usize, char)> = text.char_indices().collect();
    let end_of = |k: usize| bytes.get(k).map_or(text.len(), |&(p, _)| p);
    let mut out = Vec::new();
    let mut k = 0;
    while k < bytes.len() {
        let (start, c) = bytes[k];
        let next = bytes.get(k + 1).map(|&(_, c)| c);
        let len = if c.is_whitespace() {
            k += 1;
            continue;
        } else if word(c) {
            bytes[k..].iter().take_while(|&&(_, c)| word(c)).count()
        } else if c == '<' && next == Some('-') && bytes.get(k + 2).map(|p| p.1) == Some('>') {
            3
        } else if c == '-' && next == Some('>') {
            2
        } else if c == '-' && next.is_some_and(|d| d.is_ascii_digit()) {
            1 + bytes[k + 1..].iter().take_while(|&&(_, c)| c.is_ascii_digit()).count()
        } else {
            1
        };
        out.push(&text[start..end_of(k + len)]);
        k += len;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xor_entry_tokens() {
        assert_eq!(
            tokenize("X <-> ~(A <-> B)"),
            ["X", "<->", "~", "(", "A", "<->", "B", ")"]
        );
        assert_eq!(count_tokens("X <-> ~(A <-> B)").count, 8);
    }

    #[test]
    fn empty_and_numeric() {
        assert_eq!(count_tokens("").count, 0);
        assert_eq!(tokenize("-1 2 -30 0\n"), ["-1", "2", "-30", "0"]);
        assert_eq!(tokenize("a->b|c&d"), ["a", "->", "b", "|", "c", "&", "d"]);
        assert_eq!(tokenize("a ∧ b"), ["a", "∧", "b"]);
        assert_eq!(count_tokens("x").tokenizer_id, "lex-v1");
    }
}
