//! Finite first-order models and Tarskian evaluation.
//!
//! A [`Model`] gives every predicate a set of tuples over a nonempty domain.
//! Constants denote the domain entity of the same name unless the model pins
//! them elsewhere with [`Model::pin_constant`].

mod enumerate;
mod file;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::logic::{Formula, Term};

pub use enumerate::{equivalent_up_to, Equivalence, EquivalenceError, ModelSpace, Signature};
pub use file::{parse_model, ModelFileError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("empty domain")]
    EmptyDomain,
    #[error("entity {0} is not in the domain")]
    EntityNotInDomain(String),
    #[error("predicate {name} has arity {expected}, got a tuple of length {found}")]
    ArityMismatch { name: String, expected: usize, found: usize },
    #[error("predicate {0} declared twice")]
    DuplicatePredicate(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("unknown predicate {0}")]
    UnknownPredicate(String),
    #[error("predicate {name} has arity {expected} in the model but is used with {found} arguments")]
    ArityMismatch { name: String, expected: usize, found: usize },
    #[error("constant {0} denotes nothing in the model")]
    UnknownConstant(String),
}

/// A predicate's extension. `arity` is `None` only for an empty extension
/// declared without tuples, which is false at every arity.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Extension {
    pub arity: Option<usize>,
    pub tuples: BTreeSet<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    domain: Vec<String>,
    interp: BTreeMap<String, Extension>,
    constants: BTreeMap<String, String>,
}

pub type Assignment = BTreeMap<String, String>;

impl Model {
    pub fn new<I, S>(domain: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut seen = BTreeSet::new();
        let domain: Vec<String> = domain.into_iter().map(Into::into).filter(|e| seen.insert(e.clone())).collect();
        if domain.is_empty() {
            return Err(ModelError::EmptyDomain);
        }
        Ok(Model { domain, interp: BTreeMap::new(), constants: BTreeMap::new() })
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn contains(&self, entity: &str) -> bool {
        self.domain.iter().any(|e| e == entity)
    }

    pub fn extension(&self, name: &str) -> Option<&Extension> {
        self.interp.get(name)
    }

    pub fn predicates(&self) -> impl Iterator<Item = (&String, &Extension)> {
        self.interp.iter()
    }

    /// Declares a predicate with the given tuples. All tuples must share one
    /// length; an empty tuple list with `arity = None` declares an empty
    /// extension of unspecified arity.
    pub fn declare<I>(&mut self, name: &str, arity: Option<usize>, tuples: I) -> Result<(), ModelError>
    where
        I: IntoIterator<Item = Vec<String>>,
    {
        if self.interp.contains_key(name) {
            return Err(ModelError::DuplicatePredicate(name.to_string()));
        }
        let mut ext = Extension { arity, tuples: BTreeSet::new() };
        for tuple in tuples {
            let expected = *ext.arity.get_or_insert(tuple.len());
            if tuple.len() != expected {
                return Err(ModelError::ArityMismatch { name: name.to_string(), expected, found: tuple.len() });
            }
            if let Some(bad) = tuple.iter().find(|e| !self.contains(e)) {
                return Err(ModelError::EntityNotInDomain(bad.clone()));
            }
            ext.tuples.insert(tuple);
        }
        self.interp.insert(name.to_string(), ext);
        Ok(())
    }

    /// Makes constant `name` denote `entity`.
    pub fn pin_constant(&mut self, name: &str, entity: &str) -> Result<(), ModelError> {
        if !self.contains(entity) {
            return Err(ModelError::EntityNotInDomain(entity.to_string()));
        }
        self.constants.insert(name.to_string(), entity.to_string());
        Ok(())
    }

    /// Entity a constant denotes: its pinned entity, else the entity of the
    /// same name.
    pub fn constant(&self, name: &str) -> Option<&str> {
        match self.constants.get(name) {
            Some(e) => Some(e),
            None if self.contains(name) => self.domain.iter().find(|e| *e == name).map(String::as_str),
            None => None,
        }
    }

    fn denote<'a>(&'a self, t: &'a Term, g: &'a Assignment) -> Result<&'a str, EvalError> {
        match t {
            Term::Var(v) => g.get(v).map(String::as_str).ok_or_else(|| EvalError::UnboundVariable(v.clone())),
            Term::Const(c) => self.constant(c).ok_or_else(|| EvalError::UnknownConstant(c.clone())),
        }
    }

    fn holds(&self, name: &str, args: &[Term], g: &Assignment) -> Result<bool, EvalError> {
        let ext = self.interp.get(name).ok_or_else(|| EvalError::UnknownPredicate(name.to_string()))?;
        if let Some(arity) = ext.arity {
            if arity != args.len() {
                return Err(EvalError::ArityMismatch { name: name.to_string(), expected: arity, found: args.len() });
            }
        }
        let tuple = args.iter().map(|t| self.denote(t, g).map(str::to_string)).collect::<Result<Vec<_>, _>>()?;
        Ok(ext.tuples.contains(&tuple))
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "domain: {}", self.domain.join(" "))?;
        for (name, ext) in &self.interp {
            if ext.tuples.is_empty() {
                match ext.arity {
                    Some(n) => writeln!(f, "{name}/{n}: -")?,
                    None => writeln!(f, "{name}: -")?,
                }
            } else {
                let tuples: Vec<String> = ext.tuples.iter().map(|t| t.join(",")).collect();
                writeln!(f, "{name}: {}", tuples.join(" "))?;
            }
        }
        for (c, e) in &self.constants {
            writeln!(f, "# {c} = {e}")?;
        }
        Ok(())
    }
}

/// Truth of `f` in `m` under assignment `g`.
pub fn eval(m: &Model, g: &Assignment, f: &Formula) -> Result<bool, EvalError> {
    let mut g = g.clone();
    eval_in(m, &mut g, f)
}

fn eval_in(m: &Model, g: &mut Assignment, f: &Formula) -> Result<bool, EvalError> {
    Ok(match f {
        Formula::Pred(name, args) => m.holds(name, args, g)?,
        Formula::And(a, b) => eval_in(m, g, a)? & eval_in(m, g, b)?,
        Formula::Or(a, b) => eval_in(m, g, a)? | eval_in(m, g, b)?,
        Formula::Implies(a, b) => !eval_in(m, g, a)? | eval_in(m, g, b)?,
        Formula::Not(a) => !eval_in(m, g, a)?,
        Formula::Exists(v, body) => quantify(m, g, v, body, true)?,
        Formula::Forall(v, body) => quantify(m, g, v, body, false)?,
        Formula::Truth => true,
        Formula::Falsity => false,
    })
}

// Both connective operands are evaluated so that errors surface regardless
// of short-circuiting.
fn quantify(m: &Model, g: &mut Assignment, v: &str, body: &Formula, existential: bool) -> Result<bool, EvalError> {
    let saved = g.get(v).cloned();
    let mut result = !existential;
    for e in &m.domain {
        g.insert(v.to_string(), e.clone());
        let value = eval_in(m, g, body)?;
        if existential {
            result |= value;
        } else {
            result &= value;
        }
    }
    match saved {
        Some(prev) => g.insert(v.to_string(), prev),
        None => g.remove(v),
    };
    Ok(result)
}
