//! Presuppositions handled like exceptions.
//!
//! A definite raises a [`Presupposition`]; the discourse handler first tries
//! to bind it to an accessible referent and otherwise accommodates it at a
//! scope chosen by the [`Policy`]. Accommodation never lifts a descriptor
//! past the binder of one of its variables (see [`trap_scope`]).

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::dynamics::{Context, DiscourseError, FrameKind, Reading, ScopeFrame};
use crate::effects::{FeatureSet, Resolution};
use crate::logic::{pretty, Formula, Term};

/// An argument position in a descriptor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Slot {
    Hole,
    Term(Term),
}

/// A predicate applied to slots, exactly one of which is the hole.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Slot>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Slot>) -> Self {
        Atom { predicate: predicate.into(), args }
    }

    fn holes(&self) -> usize {
        self.args.iter().filter(|s| matches!(s, Slot::Hole)).count()
    }

    pub fn instantiate(&self, t: &Term) -> Formula {
        let args = self
            .args
            .iter()
            .map(|s| match s {
                Slot::Hole => t.clone(),
                Slot::Term(u) => u.clone(),
            })
            .collect();
        Formula::Pred(self.predicate.clone(), args)
    }

    /// Whether `condition` is this atom with `t` in the hole.
    pub fn matches(&self, condition: &Formula, t: &Term) -> bool {
        match condition {
            Formula::Pred(name, args) => {
                *name == self.predicate
                    && args.len() == self.args.len()
                    && args.iter().zip(&self.args).all(|(a, s)| match s {
                        Slot::Hole => a == t,
                        Slot::Term(u) => a == u,
                    })
            }
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("descriptor {0} must contain exactly one hole")]
pub struct HoleError(String);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presupposition {
    pub head: Atom,
    /// Restrictions contributed by a relative clause, sharing the hole.
    pub extras: Vec<Atom>,
    pub features: FeatureSet,
    /// Surface text of the triggering phrase.
    pub source: String,
}

impl Presupposition {
    pub fn new(head: Atom, extras: Vec<Atom>, features: FeatureSet, source: impl Into<String>) -> Result<Self, HoleError> {
        for atom in std::iter::once(&head).chain(&extras) {
            if atom.holes() != 1 {
                return Err(HoleError(pretty(&atom.instantiate(&Term::var("_")))));
            }
        }
        Ok(Presupposition { head, extras, features, source: source.into() })
    }

    /// The descriptor's conjuncts with `t` in the hole.
    pub fn conditions(&self, t: &Term) -> Vec<Formula> {
        std::iter::once(&self.head).chain(&self.extras).map(|a| a.instantiate(t)).collect()
    }

    pub fn instantiate(&self, t: &Term) -> Formula {
        Formula::conjoin(self.conditions(t))
    }

    /// Descriptor with the hole shown as `_`.
    pub fn pattern(&self) -> String {
        pretty(&self.instantiate(&Term::var("_")))
    }

    /// Variables in non-hole slots.
    pub fn free_vars(&self) -> BTreeSet<String> {
        std::iter::once(&self.head)
            .chain(&self.extras)
            .flat_map(|a| &a.args)
            .filter_map(|s| match s {
                Slot::Term(Term::Var(v)) => Some(v.clone()),
                _ => None,
            })
            .collect()
    }
}

impl fmt::Display for Presupposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\" requires {}", self.source, self.pattern())
    }
}

/// Where unbound presuppositions may be accommodated.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Accommodation {
    /// Only at the top level; a descriptor mentioning a quantified
    /// variable cannot be accommodated and fails.
    Global,
    /// At the outermost scope that still binds every descriptor variable.
    #[default]
    Trapped,
    /// Never; unbound presuppositions fail.
    Off,
}

impl std::str::FromStr for Accommodation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "global" => Ok(Accommodation::Global),
            "trapped" => Ok(Accommodation::Trapped),
            "off" => Ok(Accommodation::Off),
            other => Err(format!("unknown accommodation policy `{other}`")),
        }
    }
}

impl fmt::Display for Accommodation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Accommodation::Global => "global",
            Accommodation::Trapped => "trapped",
            Accommodation::Off => "off",
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Policy {
    pub accommodation: Accommodation,
    pub reading: Reading,
}

impl Policy {
    pub fn new(accommodation: Accommodation) -> Self {
        Policy { accommodation, ..Policy::default() }
    }
}

/// Binds `p` to an accessible referent, or accommodates it per `policy`.
pub fn resolve_presupposition(ctx: &mut Context, p: &Presupposition, policy: &Policy) -> Result<Resolution, DiscourseError> {
    if let Some(t) = find_binder(ctx, p) {
        return Ok(Resolution::Bound(t));
    }
    let failure = || DiscourseError::PresuppositionFailure { phrase: p.source.clone(), descriptor: p.pattern() };
    let frame = trap_scope(&p.free_vars(), &ctx.scope_stack);
    match policy.accommodation {
        Accommodation::Off => Err(failure()),
        Accommodation::Global if frame != 0 => Err(failure()),
        Accommodation::Global | Accommodation::Trapped => Ok(Resolution::Accommodated(accommodate(ctx, frame, p))),
    }
}

fn find_binder(ctx: &Context, p: &Presupposition) -> Option<Term> {
    ctx.accessible()
        .rev()
        .find(|r| r.features.compatible(&p.features) && r.conditions.iter().any(|c| p.head.matches(c, &r.term)))
        .map(|r| r.term.clone())
}

/// Index of the outermost frame at which every variable in `free` is still
/// bound: the deepest frame binding (as a universal binder) or introducing
/// one of them. Top (0) when `free` is empty.
pub fn trap_scope(free: &BTreeSet<String>, stack: &[ScopeFrame]) -> usize {
    free.iter()
        .filter_map(|v| {
            stack.iter().rposition(|frame| {
                matches!(&frame.kind, FrameKind::Universal(Term::Var(b)) if b == v)
                    || frame.introduced_here.iter().any(|x| x == v)
            })
        })
        .max()
        .unwrap_or(0)
}

/// Mints a referent for `p` at `frame` and records its descriptor there.
pub fn accommodate(ctx: &mut Context, frame: usize, p: &Presupposition) -> Term {
    let x = ctx.fresh_var();
    let conditions = p.conditions(&x);
    ctx.record_accommodation(frame, x.clone(), p.features.clone(), conditions);
    x
}
