use super::GrammarError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    /// Byte offset in the input.
    pub offset: usize,
}

impl Token {
    pub fn is_separator(&self) -> bool {
        self.text == "."
    }
}

/// Splits `s` into lowercased words and `.` separators.
pub fn tokenize(s: &str) -> Result<Vec<Token>, GrammarError> {
    let mut out = Vec::new();
    let mut word: Option<(usize, String)> = None;
    for (offset, ch) in s.char_indices() {
        if ch.is_alphabetic() {
            word.get_or_insert_with(|| (offset, String::new())).1.extend(ch.to_lowercase());
            continue;
        }
        if let Some((start, text)) = word.take() {
            out.push(Token { text, offset: start });
        }
        match ch {
            '.' => out.push(Token { text: ".".into(), offset }),
            c if c.is_whitespace() => {}
            c => return Err(GrammarError::InvalidCharacter { ch: c, offset }),
        }
    }
    if let Some((start, text)) = word {
        out.push(Token { text, offset: start });
    }
    Ok(out)
}
