use thiserror::Error;

use super::{is_identifier, is_variable_name, Formula, Term, KEYWORDS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {offset}: {message}")]
pub struct SyntaxError {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    And,
    Or,
    Arrow,
    Tilde,
    End,
}

fn lex(s: &str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'.' => Tok::Dot,
            b'&' => Tok::And,
            b'|' => Tok::Or,
            b'~' => Tok::Tilde,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                Tok::Ident(s[start..=i].to_string())
            }
            _ => {
                let ch = s[start..].chars().next().unwrap_or('?');
                return Err(SyntaxError { offset: start, message: format!("unexpected character '{ch}'") });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, s.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    bound: Vec<String>,
}

/// Parses the concrete formula syntax.
///
/// Precedence from tightest: `~`, `&`, `|`, `->`. `&` and `|` associate to
/// the left, `->` to the right. Quantifier bodies extend maximally right.
pub fn parse_formula(s: &str) -> Result<Formula, SyntaxError> {
    let mut p = Parser { toks: lex(s)?, pos: 0, bound: Vec::new() };
    let f = p.implication()?;
    match p.peek() {
        Tok::End => Ok(f),
        Tok::RParen => Err(p.error("unmatched ')'")),
        _ => Err(p.error("unexpected token after formula")),
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: &str) -> SyntaxError {
        SyntaxError { offset: self.offset(), message: message.to_string() }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), SyntaxError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&format!("expected {what}")))
        }
    }

    fn implication(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                let open = self.offset();
                self.bump();
                let f = self.implication()?;
                if *self.peek() == Tok::RParen {
                    self.bump();
                    Ok(f)
                } else if *self.peek() == Tok::End {
                    Err(SyntaxError { offset: open, message: "unclosed '('".to_string() })
                } else {
                    Err(self.error("expected ')'"))
                }
            }
            Tok::Ident(name) if name == "exists" || name == "forall" => {
                self.bump();
                let var = match self.bump() {
                    Tok::Ident(v) if !KEYWORDS.contains(&v.as_str()) => v,
                    _ => {
                        self.pos -= 1;
                        return Err(self.error("expected a variable after quantifier"));
                    }
                };
                self.expect(Tok::Dot, "'.' after quantified variable")?;
                self.bound.push(var.clone());
                let body = self.implication();
                self.bound.pop();
                let body = body?;
                Ok(if name == "exists" { Formula::exists(var, body) } else { Formula::forall(var, body) })
            }
            Tok::Ident(name) if name == "true" => {
                self.bump();
                Ok(Formula::Truth)
            }
            Tok::Ident(name) if name == "false" => {
                self.bump();
                Ok(Formula::Falsity)
            }
            Tok::Ident(name) => {
                self.bump();
                self.atom(name)
            }
            Tok::End => Err(self.error("unexpected end of input")),
            _ => Err(self.error("expected a formula")),
        }
    }

    fn atom(&mut self, name: String) -> Result<Formula, SyntaxError> {
        debug_assert!(is_identifier(&name));
        if *self.peek() != Tok::LParen {
            return Err(self.error("expected '(' after predicate name"));
        }
        let open = self.offset();
        self.bump();
        let mut args = Vec::new();
        if *self.peek() == Tok::RParen {
            self.bump();
            return Ok(Formula::Pred(name, args));
        }
        loop {
            match self.bump() {
                Tok::Ident(arg) if !KEYWORDS.contains(&arg.as_str()) => args.push(self.term(arg)),
                Tok::End => {
                    return Err(SyntaxError { offset: open, message: "unclosed '('".to_string() });
                }
                _ => {
                    self.pos -= 1;
                    return Err(self.error("expected a term"));
                }
            }
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RParen => {
                    self.bump();
                    return Ok(Formula::Pred(name, args));
                }
                Tok::End => {
                    return Err(SyntaxError { offset: open, message: "unclosed '('".to_string() });
                }
                _ => return Err(self.error("expected ',' or ')'")),
            }
        }
    }

    fn term(&self, name: String) -> Term {
        if self.bound.contains(&name) || is_variable_name(&name) {
            Term::Var(name)
        } else {
            Term::Const(name)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::alpha_eq;

    #[test]
    fn parses_universal_implication() {
        let f = parse_formula("forall x. (farmer(x) -> beats(x,x))").unwrap();
        let x = Term::var("x");
        let expected = Formula::forall(
            "x",
            Formula::implies(
                Formula::pred("farmer", vec![x.clone()]),
                Formula::pred("beats", vec![x.clone(), x]),
            ),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn unclosed_paren_reports_its_offset() {
        let err = parse_formula("exists x. man(x").unwrap_err();
        assert_eq!(err.offset, 13);
    }

    #[test]
    fn precedence() {
        let f = parse_formula("~p(a) & q(a) | r(a) -> s(a) -> t(a)").unwrap();
        let g = parse_formula("((((~p(a)) & q(a)) | r(a)) -> (s(a) -> t(a)))").unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn quantifier_extends_right() {
        let f = parse_formula("exists x. p(x) & q(x)").unwrap();
        let g = parse_formula("exists x. (p(x) & q(x))").unwrap();
        assert!(alpha_eq(&f, &g));
    }

    #[test]
    fn terms_by_convention() {
        let f = parse_formula("owns(y, john)").unwrap();
        assert_eq!(f, Formula::pred("owns", vec![Term::var("y"), Term::constant("john")]));
        let f = parse_formula("exists man. p(man)").unwrap();
        assert_eq!(f, Formula::exists("man", Formula::pred("p", vec![Term::var("man")])));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_formula("p(a) q(a)").is_err());
        assert!(parse_formula("p(a))").is_err());
        assert!(parse_formula("exists . p(a)").is_err());
        assert_eq!(parse_formula("p(a) $ q").unwrap_err().offset, 5);
        assert!(parse_formula("").is_err());
    }
}
