//! First-order logical forms: the values that sentence denotations compute.
//!
//! Terms are either variables or constants. In the concrete syntax the two
//! are told apart by convention: an identifier bound by an enclosing
//! quantifier is a variable, and so is any identifier of the shape
//! `[u-z][0-9]*` (`x`, `y2`, `x13`). Everything else is a constant.

mod parse;
mod pretty;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use parse::{parse_formula, SyntaxError};
pub use pretty::pretty;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::Const(name.into())
    }

    pub fn name(&self) -> &str {
        match self {
            Term::Var(n) | Term::Const(n) => n,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Pred(String, Vec<Term>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
    Truth,
    Falsity,
}

impl Formula {
    pub fn pred(name: impl Into<String>, args: Vec<Term>) -> Self {
        Formula::Pred(name.into(), args)
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Self {
        Formula::Not(Box::new(a))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(v: impl Into<String>, body: Formula) -> Self {
        Formula::Exists(v.into(), Box::new(body))
    }

    pub fn forall(v: impl Into<String>, body: Formula) -> Self {
        Formula::Forall(v.into(), Box::new(body))
    }

    /// Right-nested conjunction of `parts`; `Truth` when empty.
    pub fn conjoin<I>(parts: I) -> Self
    where
        I: IntoIterator<Item = Formula>,
        I::IntoIter: DoubleEndedIterator,
    {
        let mut iter = parts.into_iter().rev();
        match iter.next() {
            None => Formula::Truth,
            Some(last) => iter.fold(last, |acc, f| Formula::and(f, acc)),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        free_vars(self)
    }

    /// Every variable name occurring in the formula, bound or free.
    pub fn all_var_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        collect_names(self, &mut out);
        out
    }

    /// Constants occurring anywhere in the formula.
    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_preds(&mut |_, args| {
            for t in args {
                if let Term::Const(c) = t {
                    out.insert(c.clone());
                }
            }
        });
        out
    }

    /// Predicate names with the arities at which they occur.
    pub fn predicates(&self) -> BTreeSet<(String, usize)> {
        let mut out = BTreeSet::new();
        self.visit_preds(&mut |name, args| {
            out.insert((name.to_string(), args.len()));
        });
        out
    }

    /// Checks that every predicate is used at a single arity.
    pub fn arity_conflict(&self) -> Option<(String, usize, usize)> {
        let mut seen: BTreeMap<String, usize> = BTreeMap::new();
        let mut conflict = None;
        self.visit_preds(&mut |name, args| {
            if conflict.is_some() {
                return;
            }
            match seen.get(name) {
                Some(&n) if n != args.len() => {
                    conflict = Some((name.to_string(), n, args.len()));
                }
                Some(_) => {}
                None => {
                    seen.insert(name.to_string(), args.len());
                }
            }
        });
        conflict
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    fn visit_preds(&self, visit: &mut impl FnMut(&str, &[Term])) {
        match self {
            Formula::Pred(name, args) => visit(name, args),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.visit_preds(visit);
                b.visit_preds(visit);
            }
            Formula::Not(a) | Formula::Exists(_, a) | Formula::Forall(_, a) => a.visit_preds(visit),
            Formula::Truth | Formula::Falsity => {}
        }
    }

    /// Drops `Truth` conjuncts and right-associates conjunction chains.
    pub fn simplify(&self) -> Formula {
        match self {
            Formula::And(..) => {
                let mut parts = Vec::new();
                flatten_and(self, &mut parts);
                Formula::conjoin(parts)
            }
            Formula::Or(a, b) => Formula::or(a.simplify(), b.simplify()),
            Formula::Implies(a, b) => Formula::implies(a.simplify(), b.simplify()),
            Formula::Not(a) => Formula::not(a.simplify()),
            Formula::Exists(v, a) => Formula::exists(v.clone(), a.simplify()),
            Formula::Forall(v, a) => Formula::forall(v.clone(), a.simplify()),
            other => other.clone(),
        }
    }
}

fn flatten_and(f: &Formula, out: &mut Vec<Formula>) {
    match f {
        Formula::And(a, b) => {
            flatten_and(a, out);
            flatten_and(b, out);
        }
        Formula::Truth => {}
        other => out.push(other.simplify()),
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty(self))
    }
}

/// True for identifiers that the concrete syntax reads as variables when free.
pub fn is_variable_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some('u'..='z') => chars.all(|c| c.is_ascii_digit()),
        _ => false,
    }
}

/// Nonempty ASCII identifier: a letter or `_`, then letters, digits or `_`.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {
            chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        }
        _ => false,
    }
}

pub(crate) const KEYWORDS: [&str; 4] = ["exists", "forall", "true", "false"];

pub fn free_vars(f: &Formula) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    let mut bound = Vec::new();
    collect_free(f, &mut bound, &mut out);
    out
}

fn collect_free(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match f {
        Formula::Pred(_, args) => {
            for t in args {
                if let Term::Var(v) = t {
                    if !bound.contains(v) {
                        out.insert(v.clone());
                    }
                }
            }
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect_free(a, bound, out);
            collect_free(b, bound, out);
        }
        Formula::Not(a) => collect_free(a, bound, out),
        Formula::Exists(v, a) | Formula::Forall(v, a) => {
            bound.push(v.clone());
            collect_free(a, bound, out);
            bound.pop();
        }
        Formula::Truth | Formula::Falsity => {}
    }
}

fn collect_names(f: &Formula, out: &mut BTreeSet<String>) {
    match f {
        Formula::Pred(_, args) => {
            out.extend(args.iter().filter(|t| t.is_var()).map(|t| t.name().to_string()));
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect_names(a, out);
            collect_names(b, out);
        }
        Formula::Not(a) => collect_names(a, out),
        Formula::Exists(v, a) | Formula::Forall(v, a) => {
            out.insert(v.clone());
            collect_names(a, out);
        }
        Formula::Truth | Formula::Falsity => {}
    }
}

/// Capture-avoiding substitution of `t` for the free occurrences of `v`.
///
/// A binder that would capture a variable of `t` is renamed to the first
/// `x<n>` (n ≥ 1) that occurs nowhere in the formula, in `t`, or as `v`.
pub fn substitute(f: &Formula, v: &str, t: &Term) -> Formula {
    match f {
        Formula::Pred(name, args) => Formula::Pred(
            name.clone(),
            args.iter()
                .map(|a| match a {
                    Term::Var(x) if x == v => t.clone(),
                    other => other.clone(),
                })
                .collect(),
        ),
        Formula::And(a, b) => Formula::and(substitute(a, v, t), substitute(b, v, t)),
        Formula::Or(a, b) => Formula::or(substitute(a, v, t), substitute(b, v, t)),
        Formula::Implies(a, b) => Formula::implies(substitute(a, v, t), substitute(b, v, t)),
        Formula::Not(a) => Formula::not(substitute(a, v, t)),
        Formula::Exists(x, body) => {
            let (x, body) = substitute_under_binder(x, body, v, t);
            Formula::Exists(x, Box::new(body))
        }
        Formula::Forall(x, body) => {
            let (x, body) = substitute_under_binder(x, body, v, t);
            Formula::Forall(x, Box::new(body))
        }
        Formula::Truth | Formula::Falsity => f.clone(),
    }
}

fn substitute_under_binder(x: &str, body: &Formula, v: &str, t: &Term) -> (String, Formula) {
    if x == v || !free_vars(body).contains(v) {
        return (x.to_string(), body.clone());
    }
    match t {
        Term::Var(tv) if tv == x => {
            let mut taken = body.all_var_names();
            taken.insert(tv.clone());
            taken.insert(v.to_string());
            let fresh = fresh_name(&taken);
            let renamed = substitute(body, x, &Term::Var(fresh.clone()));
            (fresh, substitute(&renamed, v, t))
        }
        _ => (x.to_string(), substitute(body, v, t)),
    }
}

fn fresh_name(taken: &BTreeSet<String>) -> String {
    (1..)
        .map(|n| format!("x{n}"))
        .find(|candidate| !taken.contains(candidate))
        .expect("unbounded supply of names")
}

/// Equality up to consistent renaming of bound variables.
pub fn alpha_eq(f: &Formula, g: &Formula) -> bool {
    let mut left = Vec::new();
    let mut right = Vec::new();
    alpha_eq_in(f, g, &mut left, &mut right)
}

fn alpha_eq_in(f: &Formula, g: &Formula, left: &mut Vec<String>, right: &mut Vec<String>) -> bool {
    match (f, g) {
        (Formula::Pred(p, xs), Formula::Pred(q, ys)) => {
            p == q
                && xs.len() == ys.len()
                && xs.iter().zip(ys).all(|(a, b)| term_alpha_eq(a, b, left, right))
        }
        (Formula::And(a, b), Formula::And(c, d))
        | (Formula::Or(a, b), Formula::Or(c, d))
        | (Formula::Implies(a, b), Formula::Implies(c, d)) => {
            alpha_eq_in(a, c, left, right) && alpha_eq_in(b, d, left, right)
        }
        (Formula::Not(a), Formula::Not(b)) => alpha_eq_in(a, b, left, right),
        (Formula::Exists(x, a), Formula::Exists(y, b))
        | (Formula::Forall(x, a), Formula::Forall(y, b)) => {
            left.push(x.clone());
            right.push(y.clone());
            let eq = alpha_eq_in(a, b, left, right);
            left.pop();
            right.pop();
            eq
        }
        (Formula::Truth, Formula::Truth) | (Formula::Falsity, Formula::Falsity) => true,
        _ => false,
    }
}

fn term_alpha_eq(a: &Term, b: &Term, left: &[String], right: &[String]) -> bool {
    match (a, b) {
        (Term::Const(x), Term::Const(y)) => x == y,
        (Term::Var(x), Term::Var(y)) => {
            let dx = left.iter().rposition(|v| v == x);
            let dy = right.iter().rposition(|v| v == y);
            match (dx, dy) {
                (Some(i), Some(j)) => i == j,
                (None, None) => x == y,
                _ => false,
            }
        }
        _ => false,
    }
}
