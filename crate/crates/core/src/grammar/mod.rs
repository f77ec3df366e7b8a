//! The controlled English fragment: tokens, lexicon, parse trees, and their
//! denotations as effectful computations.

mod denote;
mod lexicon;
mod parser;
mod tokenize;

use thiserror::Error;

pub use denote::{denote, denote_discourse, denote_nbar, denote_noun, denote_np, denote_vp, GenQuant, Property};
pub use lexicon::{Category, Determiner, LexEntry, Lexicon, LexiconError, Symbol};
pub use parser::{parse, parse_sentence, Leaf, Nbar, Np, Parse, Sentence, Vp};
pub use tokenize::{tokenize, Token};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("invalid character {ch:?} at offset {offset}")]
    InvalidCharacter { ch: char, offset: usize },
    #[error("unknown word `{word}` at token {index}")]
    UnknownWord { word: String, index: usize },
    #[error("parse error at token {index}{}", found.as_ref().map(|w| format!(" (`{w}`)")).unwrap_or_else(|| " (end of input)".into()))]
    ParseError { index: usize, found: Option<String> },
}

/// Tokenizes and parses a discourse.
pub fn parse_discourse(s: &str, lexicon: &Lexicon) -> Result<Parse, GrammarError> {
    parse(&tokenize(s)?, lexicon)
}
