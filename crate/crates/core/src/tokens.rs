//! Tokenization and the token sequence type.
//!
//! A sentence is a list of word tokens; punctuation marks are tokens of their
//! own. The start and end markers are reserved symbols that never occur as
//! corpus words (the tokenizer splits `<` and `>` away from letters, so
//! neither marker can be produced from text).

use crate::error::{Error, Result};
use std::fmt;

pub const START_MARKER: &str = "<s>";
pub const END_MARKER: &str = "</s>";

/// Punctuation marks that always form standalone tokens (the SYM set).
pub const SYM_CHARS: [char; 6] = ['.', ',', '!', '?', ';', ':'];

pub fn is_sym_token(tok: &str) -> bool {
    !tok.is_empty() && tok.chars().all(|c| c.is_ascii_punctuation())
}

/// Whitespace splitting plus separation of SYM punctuation into own tokens.
/// Internal apostrophes and hyphens stay attached ("mid-1890", "don't").
pub fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for piece in text.split_whitespace() {
        let mut cur = String::new();
        for ch in piece.chars() {
            if SYM_CHARS.contains(&ch) || ch == '<' || ch == '>' || ch == '"' {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
                out.push(ch.to_string());
            } else {
                cur.push(ch);
            }
        }
        if !cur.is_empty() {
            out.push(cur);
        }
    }
    out
}

/// A tokenized sentence of n >= 1 real words. Start/end markers are implicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenSeq {
    tokens: Vec<String>,
}

impl TokenSeq {
    pub fn new(tokens: Vec<String>) -> Result<Self> {
        if tokens.is_empty() {
            return Err(Error::Config("a sentence needs at least one token".into()));
        }
        if tokens.iter().any(|t| t == START_MARKER || t == END_MARKER) {
            return Err(Error::Config("reserved marker used as a word".into()));
        }
        Ok(TokenSeq { tokens })
    }

    pub fn parse(text: &str) -> Result<Self> {
        TokenSeq::new(tokenize(text))
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    /// Word at 1-based position i; position 0 is the implicit start marker.
    pub fn word(&self, i: usize) -> &str {
        &self.tokens[i - 1]
    }

    /// Ordered subsequence selected by ascending 1-based indices.
    pub fn subsequence(&self, selected: &[usize]) -> Result<TokenSeq> {
        TokenSeq::new(selected.iter().map(|&i| self.tokens[i - 1].clone()).collect())
    }
}

impl fmt::Display for TokenSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tokens.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_punctuation() {
        assert_eq!(
            tokenize("councils some control over the future growth of second homes."),
            vec![
                "councils", "some", "control", "over", "the", "future", "growth", "of",
                "second", "homes", "."
            ]
        );
        assert_eq!(tokenize("Wait, really?!"), vec!["Wait", ",", "really", "?", "!"]);
    }

    #[test]
    fn keeps_internal_marks() {
        assert_eq!(tokenize("mid-1890 don't"), vec!["mid-1890", "don't"]);
    }

    #[test]
    fn markers_cannot_be_produced() {
        assert!(!tokenize("<s> </s>").iter().any(|t| t == START_MARKER || t == END_MARKER));
        assert!(TokenSeq::new(vec![START_MARKER.to_string()]).is_err());
    }

    #[test]
    fn rejects_empty() {
        assert!(TokenSeq::parse("   ").is_err());
    }

    #[test]
    fn subsequence_keeps_order() {
        let s = TokenSeq::parse("a b c d").unwrap();
        assert_eq!(s.subsequence(&[2, 4]).unwrap().to_string(), "b d");
    }
}
