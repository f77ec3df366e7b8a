use thiserror::Error;

use super::{Model, ModelError};
use crate::logic::is_identifier;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelFileError {
    #[error("line {line}: {source}")]
    Model { line: usize, source: ModelError },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `domain:` line")]
    MissingDomain,
}

/// Reads the line-based model format:
///
/// ```text
/// # comment
/// domain: a b
/// man: a
/// owns: a,b b,b
/// walks: -
/// likes/2: -
/// ```
pub fn parse_model(s: &str) -> Result<Model, ModelFileError> {
    let mut model: Option<Model> = None;
    for (idx, raw) in s.lines().enumerate() {
        let line = idx + 1;
        let text = raw.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let (head, rest) = text
            .split_once(':')
            .ok_or_else(|| ModelFileError::Syntax { line, message: "expected `name: ...`".into() })?;
        let head = head.trim();
        let items: Vec<&str> = rest.split_whitespace().collect();

        let Some(m) = model.as_mut() else {
            if head != "domain" {
                return Err(ModelFileError::MissingDomain);
            }
            if let Some(bad) = items.iter().find(|e| !is_identifier(e)) {
                return Err(ModelFileError::Syntax { line, message: format!("bad entity name `{bad}`") });
            }
            model = Some(Model::new(items).map_err(|source| ModelFileError::Model { line, source })?);
            continue;
        };

        if head == "domain" {
            return Err(ModelFileError::Syntax { line, message: "domain declared twice".into() });
        }
        let (name, arity) = match head.split_once('/') {
            Some((n, a)) => {
                let arity = a
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| ModelFileError::Syntax { line, message: format!("bad arity `{a}`") })?;
                (n.trim(), Some(arity))
            }
            None => (head, None),
        };
        if !is_identifier(name) {
            return Err(ModelFileError::Syntax { line, message: format!("bad predicate name `{name}`") });
        }
        let tuples: Vec<Vec<String>> = match items.as_slice() {
            ["-"] => Vec::new(),
            [] => {
                return Err(ModelFileError::Syntax { line, message: "no tuples; write `-` for an empty extension".into() })
            }
            _ => items.iter().map(|t| t.split(',').map(str::to_string).collect()).collect(),
        };
        m.declare(name, arity, tuples).map_err(|source| ModelFileError::Model { line, source })?;
    }
    model.ok_or(ModelFileError::MissingDomain)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_basic_model() {
        let m = parse_model("domain: a b\nman: a\nowns: a,b").unwrap();
        assert_eq!(m.domain(), ["a", "b"]);
        let man = m.extension("man").unwrap();
        assert_eq!(man.arity, Some(1));
        assert!(man.tuples.contains(&vec!["a".to_string()]));
        let owns = m.extension("owns").unwrap();
        assert_eq!(owns.arity, Some(2));
        assert_eq!(owns.tuples.len(), 1);
        assert!(owns.tuples.contains(&vec!["a".to_string(), "b".to_string()]));
    }

    #[test]
    fn empty_domain_rejected() {
        assert!(matches!(
            parse_model("domain:"),
            Err(ModelFileError::Model { source: ModelError::EmptyDomain, .. })
        ));
    }

    #[test]
    fn entity_outside_domain_rejected() {
        assert!(matches!(
            parse_model("domain: a\nman: b"),
            Err(ModelFileError::Model { source: ModelError::EntityNotInDomain(e), .. }) if e == "b"
        ));
    }

    #[test]
    fn duplicate_and_arity_errors() {
        assert!(matches!(
            parse_model("domain: a\nman: a\nman: -"),
            Err(ModelFileError::Model { source: ModelError::DuplicatePredicate(_), line: 3 })
        ));
        assert!(matches!(
            parse_model("domain: a\nowns: a,a a"),
            Err(ModelFileError::Model { source: ModelError::ArityMismatch { .. }, .. })
        ));
    }

    #[test]
    fn comments_and_empty_extensions() {
        let m = parse_model("# a model\n\ndomain: a\n# walks is empty\nwalks: -\nlikes/2: -\n").unwrap();
        assert_eq!(m.extension("walks").unwrap().arity, None);
        assert_eq!(m.extension("likes").unwrap().arity, Some(2));
    }

    #[test]
    fn domain_must_come_first() {
        assert_eq!(parse_model("man: a\ndomain: a"), Err(ModelFileError::MissingDomain));
        assert_eq!(parse_model("# nothing"), Err(ModelFileError::MissingDomain));
    }

    #[test]
    fn display_round_trips() {
        let m = parse_model("domain: a b\nman: a\nowns: a,b b,a\nwalks: -\n").unwrap();
        assert_eq!(parse_model(&m.to_string()).unwrap(), m);
    }
}
