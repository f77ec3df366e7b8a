//! All-parses recursive descent over the fragment grammar:
//!
//! ```text
//! D    -> S (. S)*
//! S    -> NP VP
//! NP   -> Det Nbar | PN | Pro | Poss Nrel
//! Nbar -> N | N Rel VP
//! VP   -> Vi | Vt NP | Neg VP
//! ```
//!
//! Alternatives come out in production order, so the first complete parse
//! is the one with the leftmost-first derivation.

use std::cell::Cell;
use std::fmt;
use std::sync::Arc;

use super::lexicon::{Category, LexEntry, Lexicon};
use super::tokenize::Token;
use super::GrammarError;

pub type Leaf = Arc<LexEntry>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub subject: Np,
    pub predicate: Vp,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Np {
    Det { det: Leaf, nbar: Nbar },
    Name(Leaf),
    Pronoun(Leaf),
    Possessive { poss: Leaf, noun: Leaf },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Nbar {
    Noun(Leaf),
    Relative { noun: Leaf, rel: Leaf, vp: Box<Vp> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Vp {
    Intransitive(Leaf),
    Transitive { verb: Leaf, object: Box<Np> },
    Negated { neg: Leaf, vp: Box<Vp> },
}

impl Nbar {
    pub fn noun(&self) -> &Leaf {
        match self {
            Nbar::Noun(n) | Nbar::Relative { noun: n, .. } => n,
        }
    }
}

impl Sentence {
    pub fn words(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.subject.push_words(&mut out);
        self.predicate.push_words(&mut out);
        out
    }
}

impl Np {
    pub fn words(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.push_words(&mut out);
        out
    }

    fn push_words<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Np::Det { det, nbar } => {
                out.push(&det.word);
                nbar.push_words(out);
            }
            Np::Name(w) | Np::Pronoun(w) => out.push(&w.word),
            Np::Possessive { poss, noun } => {
                out.push(&poss.word);
                out.push(&noun.word);
            }
        }
    }
}

impl Nbar {
    pub fn words(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.push_words(&mut out);
        out
    }

    fn push_words<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Nbar::Noun(n) => out.push(&n.word),
            Nbar::Relative { noun, rel, vp } => {
                out.push(&noun.word);
                out.push(&rel.word);
                vp.push_words(out);
            }
        }
    }
}

impl Vp {
    fn push_words<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Vp::Intransitive(v) => out.push(&v.word),
            Vp::Transitive { verb, object } => {
                out.push(&verb.word);
                object.push_words(out);
            }
            Vp::Negated { neg, vp } => {
                out.push(&neg.word);
                vp.push_words(out);
            }
        }
    }
}

fn leaf(f: &mut fmt::Formatter<'_>, l: &LexEntry) -> fmt::Result {
    write!(f, "{} {}", l.category, l.word)
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S({}, {})", self.subject, self.predicate)
    }
}

impl Np {
    /// Object position shows a one-word NP as its bare leaf.
    fn fmt_object(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Np::Name(l) | Np::Pronoun(l) => leaf(f, l),
            np => fmt::Display::fmt(np, f),
        }
    }
}

impl fmt::Display for Np {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("NP(")?;
        match self {
            Np::Det { det, nbar } => {
                leaf(f, det)?;
                write!(f, ", {nbar}")?;
            }
            Np::Name(l) | Np::Pronoun(l) => leaf(f, l)?,
            Np::Possessive { poss, noun } => {
                leaf(f, poss)?;
                f.write_str(", ")?;
                leaf(f, noun)?;
            }
        }
        f.write_str(")")
    }
}

impl fmt::Display for Nbar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nbar::Noun(n) => leaf(f, n),
            Nbar::Relative { noun, rel, vp } => {
                f.write_str("Nbar(")?;
                leaf(f, noun)?;
                f.write_str(", ")?;
                leaf(f, rel)?;
                write!(f, ", {vp})")
            }
        }
    }
}

impl fmt::Display for Vp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("VP(")?;
        match self {
            Vp::Intransitive(v) => leaf(f, v)?,
            Vp::Transitive { verb, object } => {
                leaf(f, verb)?;
                f.write_str(", ")?;
                object.fmt_object(f)?;
            }
            Vp::Negated { neg, vp } => {
                leaf(f, neg)?;
                write!(f, ", {vp}")?;
            }
        }
        f.write_str(")")
    }
}

struct SentenceParser<'a> {
    words: &'a [Leaf],
    furthest: Cell<usize>,
}

impl SentenceParser<'_> {
    fn at(&self, i: usize, cat: Category) -> Option<&Leaf> {
        match self.words.get(i) {
            Some(w) if w.category == cat => Some(w),
            _ => {
                self.furthest.set(self.furthest.get().max(i));
                None
            }
        }
    }

    fn sentence(&self) -> Vec<(Sentence, usize)> {
        let mut out = Vec::new();
        for (subject, i) in self.np(0) {
            for (predicate, j) in self.vp(i) {
                out.push((Sentence { subject: subject.clone(), predicate }, j));
            }
        }
        out
    }

    fn np(&self, i: usize) -> Vec<(Np, usize)> {
        let mut out = Vec::new();
        if let Some(det) = self.at(i, Category::Det) {
            for (nbar, j) in self.nbar(i + 1) {
                out.push((Np::Det { det: det.clone(), nbar }, j));
            }
        }
        if let Some(pn) = self.at(i, Category::PN) {
            out.push((Np::Name(pn.clone()), i + 1));
        }
        if let Some(pro) = self.at(i, Category::Pro) {
            out.push((Np::Pronoun(pro.clone()), i + 1));
        }
        if let Some(poss) = self.at(i, Category::Poss) {
            if let Some(noun) = self.at(i + 1, Category::Nrel) {
                out.push((Np::Possessive { poss: poss.clone(), noun: noun.clone() }, i + 2));
            }
        }
        out
    }

    fn nbar(&self, i: usize) -> Vec<(Nbar, usize)> {
        let mut out = Vec::new();
        if let Some(noun) = self.at(i, Category::N) {
            out.push((Nbar::Noun(noun.clone()), i + 1));
            if let Some(rel) = self.at(i + 1, Category::Rel) {
                for (vp, j) in self.vp(i + 2) {
                    out.push((Nbar::Relative { noun: noun.clone(), rel: rel.clone(), vp: Box::new(vp) }, j));
                }
            }
        }
        out
    }

    fn vp(&self, i: usize) -> Vec<(Vp, usize)> {
        let mut out = Vec::new();
        if let Some(v) = self.at(i, Category::Vi) {
            out.push((Vp::Intransitive(v.clone()), i + 1));
        }
        if let Some(v) = self.at(i, Category::Vt) {
            for (object, j) in self.np(i + 1) {
                out.push((Vp::Transitive { verb: v.clone(), object: Box::new(object) }, j));
            }
        }
        if let Some(neg) = self.at(i, Category::Neg) {
            for (vp, j) in self.vp(i + 1) {
                out.push((Vp::Negated { neg: neg.clone(), vp: Box::new(vp) }, j));
            }
        }
        out
    }
}

/// Parses one sentence worth of lexical entries. Returns the first parse
/// and the number of complete parses, or the index of the offending word
/// (`words.len()` when the sentence ends too early).
pub fn parse_sentence(words: &[Leaf]) -> Result<(Sentence, usize), usize> {
    let parser = SentenceParser { words, furthest: Cell::new(0) };
    let mut complete = Vec::new();
    let mut reached = 0;
    for (tree, end) in parser.sentence() {
        reached = reached.max(end);
        if end == words.len() {
            complete.push(tree);
        }
    }
    let count = complete.len();
    match complete.into_iter().next() {
        Some(tree) => Ok((tree, count)),
        None => Err(parser.furthest.get().max(reached)),
    }
}

/// Sentences of a discourse and how many parses each one had.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parse {
    pub sentences: Vec<Sentence>,
    pub alternatives: Vec<usize>,
}

/// Parses a token stream: sentences separated (and optionally terminated)
/// by `.`.
pub fn parse(tokens: &[Token], lexicon: &Lexicon) -> Result<Parse, GrammarError> {
    let mut words = Vec::with_capacity(tokens.len());
    for (index, tok) in tokens.iter().enumerate() {
        if tok.is_separator() {
            continue;
        }
        match lexicon.get(&tok.text) {
            Some(entry) => words.push((index, entry.clone())),
            None => return Err(GrammarError::UnknownWord { word: tok.text.clone(), index }),
        }
    }

    let mut parse = Parse { sentences: Vec::new(), alternatives: Vec::new() };
    let mut start = 0;
    while start < tokens.len() {
        let end = tokens[start..].iter().position(Token::is_separator).map_or(tokens.len(), |p| start + p);
        if end == start {
            return Err(GrammarError::ParseError { index: start, found: Some(".".into()) });
        }
        let leaves: Vec<Leaf> =
            words.iter().filter(|(i, _)| (start..end).contains(i)).map(|(_, e)| e.clone()).collect();
        match parse_sentence(&leaves) {
            Ok((tree, count)) => {
                parse.sentences.push(tree);
                parse.alternatives.push(count);
            }
            Err(local) => {
                let index = start + local;
                let found = tokens.get(index).map(|t| t.text.clone());
                return Err(GrammarError::ParseError { index, found });
            }
        }
        start = end + 1;
    }
    Ok(parse)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::tokenize;

    fn lexicon() -> Lexicon {
        Lexicon::load(
            "man\tN\tman\tgender=m\nfarmer\tN\tfarmer\tgender=m\ndonkey\tN\tdonkey\tgender=n\n\
             owns\tVt\towns\t-\nbeats\tVt\tbeats\t-\nwalks\tVi\twalks\t-\njohn\tPN\tjohn\tgender=m\n\
             wife\tNrel\twife\tgender=f\n",
        )
        .unwrap()
    }

    fn parse_str(s: &str) -> Result<Parse, GrammarError> {
        parse(&tokenize(s).unwrap(), &lexicon())
    }

    #[test]
    fn donkey_sentence_tree() {
        let p = parse_str("every farmer who owns a donkey beats it").unwrap();
        assert_eq!(p.alternatives, [1]);
        assert_eq!(
            p.sentences[0].to_string(),
            "S(NP(Det every, Nbar(N farmer, Rel who, VP(Vt owns, NP(Det a, N donkey)))), VP(Vt beats, Pro it))"
        );
    }

    #[test]
    fn name_and_intransitive() {
        let p = parse_str("john walks").unwrap();
        assert_eq!(p.sentences[0].to_string(), "S(NP(PN john), VP(Vi walks))");
    }

    #[test]
    fn bad_word_order() {
        assert_eq!(parse_str("man a walks"), Err(GrammarError::ParseError { index: 0, found: Some("man".into()) }));
    }

    #[test]
    fn trailing_material() {
        assert_eq!(
            parse_str("a man walks john"),
            Err(GrammarError::ParseError { index: 3, found: Some("john".into()) })
        );
        assert_eq!(parse_str("a man"), Err(GrammarError::ParseError { index: 2, found: None }));
        assert_eq!(
            parse_str("a man . john walks ."),
            Err(GrammarError::ParseError { index: 2, found: Some(".".into()) })
        );
    }

    #[test]
    fn unknown_word() {
        assert_eq!(parse_str("a cat walks"), Err(GrammarError::UnknownWord { word: "cat".into(), index: 1 }));
    }

    #[test]
    fn discourse_segments() {
        let p = parse_str("a man walks . he walks .").unwrap();
        assert_eq!(p.sentences.len(), 2);
        assert!(parse_str("").unwrap().sentences.is_empty());
        assert!(matches!(parse_str(". a man walks"), Err(GrammarError::ParseError { index: 0, .. })));
        assert!(matches!(parse_str("a man walks . . john walks"), Err(GrammarError::ParseError { index: 4, .. })));
    }

    #[test]
    fn possessive_and_negation() {
        let p = parse_str("john doesnt beat his wife").unwrap_err();
        assert!(matches!(p, GrammarError::UnknownWord { .. }));
        let p = parse_str("john doesnt doesnt owns his wife").unwrap();
        assert_eq!(
            p.sentences[0].to_string(),
            "S(NP(PN john), VP(Neg doesnt, VP(Neg doesnt, VP(Vt owns, NP(Poss his, Nrel wife)))))"
        );
    }

    #[test]
    fn words_round_trip() {
        let p = parse_str("every farmer who owns a donkey beats it").unwrap();
        assert_eq!(p.sentences[0].words().join(" "), "every farmer who owns a donkey beats it");
    }
}
