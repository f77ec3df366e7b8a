use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::effects::{FeatureError, FeatureSet};
use crate::logic::{is_identifier, is_variable_name, KEYWORDS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    PN,
    N,
    Nrel,
    Vi,
    Vt,
    Det,
    Pro,
    Poss,
    Rel,
    Neg,
}

impl Category {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "PN" => Category::PN,
            "N" => Category::N,
            "Nrel" => Category::Nrel,
            "Vi" => Category::Vi,
            "Vt" => Category::Vt,
            "Det" => Category::Det,
            "Pro" => Category::Pro,
            "Poss" => Category::Poss,
            "Rel" => Category::Rel,
            "Neg" => Category::Neg,
            _ => return None,
        })
    }

    /// Arity of the predicate a content word of this category names.
    pub fn arity(self) -> Option<usize> {
        match self {
            Category::N | Category::Vi => Some(1),
            Category::Nrel | Category::Vt => Some(2),
            _ => None,
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Determiner {
    Indef,
    Univ,
    Def,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Symbol {
    Predicate(String),
    Constant(String),
    Determiner(Determiner),
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LexEntry {
    pub word: String,
    pub category: Category,
    pub symbol: Symbol,
    pub features: FeatureSet,
}

impl LexEntry {
    /// Predicate or constant name; empty for function words.
    pub fn name(&self) -> &str {
        match &self.symbol {
            Symbol::Predicate(s) | Symbol::Constant(s) => s,
            _ => "",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexiconError {
    #[error("line {line}: expected `word<TAB>category<TAB>symbol<TAB>features`")]
    Malformed { line: usize },
    #[error("line {line}: unknown category {category}")]
    UnknownCategory { line: usize, category: String },
    #[error("line {line}: {source}")]
    Features { line: usize, source: FeatureError },
    #[error("line {line}: bad symbol `{symbol}` for category {category}")]
    BadSymbol { line: usize, symbol: String, category: Category },
    #[error("line {line}: `{word}` is already a {existing}, cannot also be a {category}")]
    DuplicateWord { line: usize, word: String, existing: Category, category: Category },
    #[error("line {line}: predicate {symbol} used with arities {first} and {second}")]
    ArityConflict { line: usize, symbol: String, first: usize, second: usize },
    #[error("line {line}: bad word `{word}`")]
    BadWord { line: usize, word: String },
}

/// Word to entry mapping; always contains the function words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    entries: BTreeMap<String, Arc<LexEntry>>,
}

const CORE: &str = "\
a\tDet\tindef\t-
every\tDet\tuniv\t-
the\tDet\tdef\t-
who\tRel\t-\t-
doesnt\tNeg\t-\t-
he\tPro\t-\tgender=m
she\tPro\t-\tgender=f
it\tPro\t-\tgender=n
his\tPoss\t-\tgender=m
her\tPoss\t-\tgender=f
";

impl Default for Lexicon {
    fn default() -> Self {
        Self::core()
    }
}

impl Lexicon {
    /// Just the built-in function words.
    pub fn core() -> Self {
        let mut lex = Lexicon { entries: BTreeMap::new() };
        lex.merge(CORE).expect("core lexicon is well-formed");
        lex
    }

    /// Loads a lexicon file over the core lexicon.
    pub fn load(s: &str) -> Result<Self, LexiconError> {
        let mut lex = Self::core();
        lex.merge(s)?;
        Ok(lex)
    }

    pub fn get(&self, word: &str) -> Option<&Arc<LexEntry>> {
        self.entries.get(word)
    }

    pub fn entries(&self) -> impl Iterator<Item = &Arc<LexEntry>> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn merge(&mut self, s: &str) -> Result<(), LexiconError> {
        for (idx, raw) in s.lines().enumerate() {
            let line = idx + 1;
            let text = raw.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = text.split_whitespace().collect();
            let [word, category, symbol, features] = fields[..] else {
                return Err(LexiconError::Malformed { line });
            };
            let entry = parse_entry(line, word, category, symbol, features)?;
            self.check_arity(line, &entry)?;
            if let Some(existing) = self.entries.get(word) {
                if existing.category != entry.category {
                    return Err(LexiconError::DuplicateWord {
                        line,
                        word: word.to_string(),
                        existing: existing.category,
                        category: entry.category,
                    });
                }
            }
            self.entries.insert(word.to_string(), Arc::new(entry));
        }
        Ok(())
    }

    fn check_arity(&self, line: usize, entry: &LexEntry) -> Result<(), LexiconError> {
        let Some(arity) = entry.category.arity() else { return Ok(()) };
        for other in self.entries.values() {
            if other.word == entry.word {
                continue;
            }
            if let (Some(n), true) = (other.category.arity(), other.name() == entry.name()) {
                if n != arity {
                    return Err(LexiconError::ArityConflict {
                        line,
                        symbol: entry.name().to_string(),
                        first: n,
                        second: arity,
                    });
                }
            }
        }
        Ok(())
    }
}

fn parse_entry(line: usize, word: &str, category: &str, symbol: &str, features: &str) -> Result<LexEntry, LexiconError> {
    if !word.chars().all(|c| c.is_alphabetic()) || word.to_lowercase() != word {
        return Err(LexiconError::BadWord { line, word: word.to_string() });
    }
    let category = Category::parse(category).ok_or_else(|| LexiconError::UnknownCategory {
        line,
        category: category.to_string(),
    })?;
    let features = FeatureSet::parse(features).map_err(|source| LexiconError::Features { line, source })?;
    let bad = || LexiconError::BadSymbol { line, symbol: symbol.to_string(), category };
    let name_ok = is_identifier(symbol) && !KEYWORDS.contains(&symbol);
    let symbol = match category {
        Category::PN if name_ok && !is_variable_name(symbol) => Symbol::Constant(symbol.to_string()),
        Category::N | Category::Nrel | Category::Vi | Category::Vt if name_ok => Symbol::Predicate(symbol.to_string()),
        Category::Det => Symbol::Determiner(match symbol {
            "indef" => Determiner::Indef,
            "univ" => Determiner::Univ,
            "def" => Determiner::Def,
            _ => return Err(bad()),
        }),
        Category::Pro | Category::Poss | Category::Rel | Category::Neg if symbol == "-" => Symbol::None,
        _ => return Err(bad()),
    };
    if matches!(category, Category::Pro | Category::Poss) && features.get("gender").is_none() {
        return Err(LexiconError::Features {
            line,
            source: FeatureError::Malformed(format!("{word} needs a gender")),
        });
    }
    Ok(LexEntry { word: word.to_string(), category, symbol, features })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noun_entry() {
        let lex = Lexicon::load("man\tN\tman\tgender=m").unwrap();
        let e = lex.get("man").unwrap();
        assert_eq!(e.category, Category::N);
        assert_eq!(e.symbol, Symbol::Predicate("man".into()));
        assert_eq!(e.category.arity(), Some(1));
        assert_eq!(e.features, FeatureSet::gender("m"));
    }

    #[test]
    fn relational_noun() {
        let lex = Lexicon::load("wife\tNrel\twife\tgender=f").unwrap();
        let e = lex.get("wife").unwrap();
        assert_eq!(e.category, Category::Nrel);
        assert_eq!(e.category.arity(), Some(2));
    }

    #[test]
    fn unknown_category() {
        assert_eq!(
            Lexicon::load("man\tXX\tman\t-"),
            Err(LexiconError::UnknownCategory { line: 1, category: "XX".into() })
        );
    }

    #[test]
    fn core_words_present() {
        let lex = Lexicon::core();
        for w in ["a", "every", "the", "who", "doesnt", "he", "she", "it", "his", "her"] {
            assert!(lex.get(w).is_some(), "{w}");
        }
        assert_eq!(lex.get("every").unwrap().symbol, Symbol::Determiner(Determiner::Univ));
    }

    #[test]
    fn duplicate_word_with_other_category() {
        let err = Lexicon::load("walks\tVi\twalk\t-\nwalks\tN\twalk\t-").unwrap_err();
        assert!(matches!(err, LexiconError::DuplicateWord { line: 2, .. }));
        assert!(matches!(Lexicon::load("her\tPro\t-\tgender=f"), Err(LexiconError::DuplicateWord { .. })));
        // same category: later entry wins
        let lex = Lexicon::load("walks\tVi\twalk\t-\nwalks\tVi\tstroll\t-").unwrap();
        assert_eq!(lex.get("walks").unwrap().name(), "stroll");
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(Lexicon::load("man\tN\tman"), Err(LexiconError::Malformed { line: 1 })));
        assert!(matches!(Lexicon::load("man\tN\tman\tgender"), Err(LexiconError::Features { .. })));
        assert!(matches!(Lexicon::load("man\tN\tman\tcase=nom"), Err(LexiconError::Features { .. })));
        assert!(matches!(Lexicon::load("x\tPN\tx\t-"), Err(LexiconError::BadSymbol { .. })));
        assert!(matches!(Lexicon::load("some\tDet\tmost\t-"), Err(LexiconError::BadSymbol { .. })));
        assert!(matches!(Lexicon::load("Man\tN\tman\t-"), Err(LexiconError::BadWord { .. })));
        assert!(matches!(Lexicon::load("him\tPro\t-\t-"), Err(LexiconError::Features { .. })));
    }

    #[test]
    fn arity_conflicts() {
        let err = Lexicon::load("owner\tN\towns\t-\nowns\tVt\towns\t-").unwrap_err();
        assert!(matches!(err, LexiconError::ArityConflict { line: 2, .. }));
    }

    #[test]
    fn comments_skipped() {
        let lex = Lexicon::load("# nouns\n\nman\tN\tman\tgender=m\n").unwrap();
        assert_eq!(lex.len(), Lexicon::core().len() + 1);
    }
}
