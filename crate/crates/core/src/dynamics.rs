//! The discourse handler: effect clauses that read and write a discourse
//! context.
//!
//! Running a sentence's computation turns it into a function from an input
//! context to a formula and an output context. Indefinites write referents,
//! pronouns read them, and quantifier and negation scopes decide which
//! referents stay visible afterwards.

use std::fmt;

use thiserror::Error;

use crate::effects::{
    handle, run, Computation, EffectKind, Failure, FeatureSet, Handler, Hint, Quantification, Resolution, Trace,
    UnhandledEffect,
};
use crate::logic::{pretty, Formula, Term};
use crate::presup::{resolve_presupposition, Policy, Presupposition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiscourseError {
    #[error("unresolved anaphora: no accessible referent matches {constraints}")]
    UnresolvedAnaphora { constraints: FeatureSet },
    #[error("presupposition failure: \"{phrase}\" requires {descriptor}")]
    PresuppositionFailure { phrase: String, descriptor: String },
    #[error(transparent)]
    Unhandled(#[from] UnhandledEffect),
}

/// How indefinites in a universal's restrictor scope.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Reading {
    /// Restrictor referents stay visible in the nucleus and are universally
    /// closed over the whole implication.
    #[default]
    Strong,
    /// Restrictor referents are closed existentially inside the restrictor.
    Weak,
}

/// Antecedent choice among matching accessible referents.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Strategy {
    #[default]
    Recency,
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "recency" => Ok(Strategy::Recency),
            other => Err(format!("unknown strategy `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Referent {
    pub term: Term,
    pub features: FeatureSet,
    /// Global introduction order.
    pub position: usize,
    pub scope_level: usize,
    /// 1-based index of the sentence that introduced it.
    pub sentence: usize,
    /// Atomic conditions known about the referent (its noun, accommodated
    /// descriptors), used to bind definites.
    pub conditions: Vec<Formula>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FrameKind {
    Top,
    Universal(Term),
    Negation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScopeFrame {
    pub kind: FrameKind,
    pub introduced_here: Vec<String>,
    in_restrictor: bool,
}

impl ScopeFrame {
    pub fn new(kind: FrameKind) -> Self {
        let in_restrictor = matches!(kind, FrameKind::Universal(_));
        ScopeFrame { kind, introduced_here: Vec::new(), in_restrictor }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Accommodated {
    pub condition: Formula,
    pub level: usize,
    in_restrictor: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Context {
    pub referents: Vec<Referent>,
    pub scope_stack: Vec<ScopeFrame>,
    /// Index of the next variable to mint.
    pub fresh_counter: usize,
    pub accommodated: Vec<Accommodated>,
    /// Sentence number stamped on new referents.
    pub sentence: usize,
    next_position: usize,
}

impl Default for Context {
    fn default() -> Self {
        Self::new()
    }
}

impl Context {
    pub fn new() -> Self {
        Context {
            referents: Vec::new(),
            scope_stack: vec![ScopeFrame::new(FrameKind::Top)],
            fresh_counter: 1,
            accommodated: Vec::new(),
            sentence: 1,
            next_position: 0,
        }
    }

    pub fn depth(&self) -> usize {
        self.scope_stack.len() - 1
    }

    pub fn fresh_var(&mut self) -> Term {
        let t = Term::var(format!("x{}", self.fresh_counter));
        self.fresh_counter += 1;
        t
    }

    /// Referents on the current scope path, oldest first.
    pub fn accessible(&self) -> impl DoubleEndedIterator<Item = &Referent> {
        let depth = self.depth();
        self.referents.iter().filter(move |r| r.scope_level <= depth)
    }

    pub fn add_referent(&mut self, term: Term, features: FeatureSet, level: usize, conditions: Vec<Formula>) {
        self.referents.push(Referent {
            term,
            features,
            position: self.next_position,
            scope_level: level,
            sentence: self.sentence,
            conditions,
        });
        self.next_position += 1;
    }

    fn introduce_var(&mut self, level: usize, features: FeatureSet, conditions: impl FnOnce(&Term) -> Vec<Formula>) -> Term {
        let x = self.fresh_var();
        let conditions = conditions(&x);
        self.scope_stack[level].introduced_here.push(x.name().to_string());
        self.add_referent(x.clone(), features, level, conditions);
        x
    }

    pub(crate) fn record_accommodation(&mut self, level: usize, x: Term, features: FeatureSet, conditions: Vec<Formula>) {
        let in_restrictor = self.scope_stack[level].in_restrictor;
        for condition in &conditions {
            self.accommodated.push(Accommodated { condition: condition.clone(), level, in_restrictor });
        }
        self.scope_stack[level].introduced_here.push(x.name().to_string());
        self.add_referent(x, features, level, conditions);
    }

    fn push_frame(&mut self, kind: FrameKind) -> usize {
        self.scope_stack.push(ScopeFrame::new(kind));
        self.depth()
    }

    /// Pops the innermost frame, forgetting its referents, and returns it
    /// with the conditions accommodated there.
    fn pop_frame(&mut self) -> (ScopeFrame, Vec<Accommodated>) {
        let level = self.depth();
        let frame = self.scope_stack.pop().expect("never pops Top");
        self.referents.retain(|r| r.scope_level < level);
        let (here, rest): (Vec<_>, Vec<_>) = self.accommodated.drain(..).partition(|a| a.level == level);
        self.accommodated = rest;
        (frame, here)
    }

    /// Variables introduced at top level, in order.
    pub fn top_vars(&self) -> &[String] {
        &self.scope_stack[0].introduced_here
    }

    pub fn top_conditions(&self) -> impl Iterator<Item = &Formula> {
        self.accommodated.iter().filter(|a| a.level == 0).map(|a| &a.condition)
    }
}

/// One referent per line, then accommodated conditions.
impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.referents {
            let level = if r.scope_level == 0 { "top".to_string() } else { r.scope_level.to_string() };
            writeln!(f, "{} {} introduced-in:S{} level:{level}", r.term, r.features.plain(), r.sentence)?;
        }
        for a in &self.accommodated {
            writeln!(f, "{}", pretty(&a.condition))?;
        }
        Ok(())
    }
}

/// Most suitable accessible referent satisfying `constraints`.
pub fn select_antecedent(ctx: &Context, constraints: &FeatureSet, strategy: Strategy) -> Result<Term, DiscourseError> {
    match strategy {
        Strategy::Recency => ctx
            .accessible()
            .filter(|r| r.features.satisfies(constraints))
            .max_by_key(|r| r.position)
            .map(|r| r.term.clone())
            .ok_or_else(|| DiscourseError::UnresolvedAnaphora { constraints: constraints.clone() }),
    }
}

/// `exists v1. exists v2. ... f`, the first variable outermost.
pub fn existential_closure(f: Formula, vars: &[String]) -> Formula {
    vars.iter().rev().fold(f, |body, v| Formula::exists(v.clone(), body))
}

fn universal_closure(f: Formula, vars: &[String]) -> Formula {
    vars.iter().rev().fold(f, |body, v| Formula::forall(v.clone(), body))
}

/// The composite handler: anaphora and scope clauses over a [`Context`],
/// with presupposition clauses that consult the same context.
#[derive(Debug, Clone)]
pub struct DiscourseHandler {
    pub ctx: Context,
    pub policy: Policy,
    pub strategy: Strategy,
}

impl Handler for DiscourseHandler {
    type Error = DiscourseError;

    fn introduce(&mut self, features: &FeatureSet, hint: &Hint) -> Result<Term, DiscourseError> {
        match hint {
            Hint::Name(name) => {
                let c = Term::constant(name.clone());
                if !self.ctx.referents.iter().any(|r| r.term == c) {
                    self.ctx.add_referent(c.clone(), features.clone(), 0, Vec::new());
                }
                Ok(c)
            }
            Hint::Noun(noun) => {
                let level = self.ctx.depth();
                Ok(self.ctx.introduce_var(level, features.clone(), |x| vec![Formula::pred(noun.clone(), vec![x.clone()])]))
            }
        }
    }

    fn select(&mut self, constraints: &FeatureSet) -> Result<Term, DiscourseError> {
        select_antecedent(&self.ctx, constraints, self.strategy)
    }

    fn presuppose(&mut self, p: &Presupposition) -> Result<Resolution, DiscourseError> {
        resolve_presupposition(&mut self.ctx, p, &self.policy)
    }

    fn quantify(&mut self, scope: Quantification, trace: &mut Trace) -> Result<(Term, Formula), DiscourseError> {
        let binder = self.ctx.fresh_var();
        let level = self.ctx.push_frame(FrameKind::Universal(binder.clone()));
        let restrictor_condition = Formula::pred(scope.hint.clone(), vec![binder.clone()]);
        self.ctx.add_referent(binder.clone(), scope.features.clone(), level, vec![restrictor_condition]);

        let restrictor = run(self, (scope.restrictor)(binder.clone()), trace)?;
        let restrictor = match self.policy.reading {
            Reading::Strong => restrictor,
            Reading::Weak => self.close_restrictor_weakly(level, restrictor),
        };
        let frame = &mut self.ctx.scope_stack[level];
        frame.in_restrictor = false;
        let split = frame.introduced_here.len();

        let nucleus = run(self, (scope.nucleus)(binder.clone()), trace)?;
        let (frame, accommodated) = self.ctx.pop_frame();
        let (restrictor_acc, nucleus_acc): (Vec<_>, Vec<_>) = accommodated.into_iter().partition(|a| a.in_restrictor);

        let restrictor = Formula::conjoin(restrictor_acc.into_iter().map(|a| a.condition).chain([restrictor]));
        let nucleus = Formula::conjoin(nucleus_acc.into_iter().map(|a| a.condition).chain([nucleus]));
        let nucleus = existential_closure(nucleus, &frame.introduced_here[split..]);
        let body = universal_closure(Formula::implies(restrictor, nucleus), &frame.introduced_here[..split]);
        Ok((binder.clone(), Formula::forall(binder.name().to_string(), body)))
    }

    fn barrier(&mut self, body: Computation<Formula>, trace: &mut Trace) -> Result<Formula, DiscourseError> {
        self.ctx.push_frame(FrameKind::Negation);
        let body = run(self, body, trace)?;
        let (frame, accommodated) = self.ctx.pop_frame();
        let body = Formula::conjoin(accommodated.into_iter().map(|a| a.condition).chain([body]));
        Ok(Formula::not(existential_closure(body, &frame.introduced_here)))
    }
}

impl DiscourseHandler {
    pub fn new(ctx: Context, policy: Policy, strategy: Strategy) -> Self {
        DiscourseHandler { ctx, policy, strategy }
    }

    fn close_restrictor_weakly(&mut self, level: usize, restrictor: Formula) -> Formula {
        let locals = std::mem::take(&mut self.ctx.scope_stack[level].introduced_here);
        let (acc, rest): (Vec<_>, Vec<_>) = self.ctx.accommodated.drain(..).partition(|a| a.level == level);
        self.ctx.accommodated = rest;
        self.ctx.referents.retain(|r| !(r.term.is_var() && locals.iter().any(|v| v == r.term.name())));
        let body = Formula::conjoin(acc.into_iter().map(|a| a.condition).chain([restrictor]));
        existential_closure(body, &locals)
    }
}

/// Handles `c` against `ctx` without closing the result: top-level
/// referents stay free so that later sentences can pick them up.
pub fn run_open(
    c: Computation<Formula>,
    ctx: Context,
    policy: Policy,
    strategy: Strategy,
) -> Result<(Formula, Context, Trace), Failure<DiscourseError>> {
    debug_assert_eq!(ctx.depth(), 0, "discourse runs start at top level");
    let (phi, handler, trace) = handle(DiscourseHandler::new(ctx, policy, strategy), c)?;
    Ok((phi, handler.ctx, trace))
}

/// Existentially closes an open discourse formula over the context's
/// top-level referents, with top-level accommodated conditions first.
pub fn close_discourse(body: Formula, ctx: &Context) -> Formula {
    let conditions: Vec<Formula> = ctx.top_conditions().cloned().collect();
    existential_closure(Formula::conjoin(conditions.into_iter().chain([body])), ctx.top_vars()).simplify()
}

/// Runs a discourse computation to a closed formula and the updated context.
pub fn run_discourse(
    c: Computation<Formula>,
    ctx: Context,
    policy: Policy,
    strategy: Strategy,
) -> Result<(Formula, Context, Trace), Failure<DiscourseError>> {
    let (phi, ctx, trace) = run_open(c, ctx, policy, strategy)?;
    Ok((close_discourse(phi, &ctx), ctx, trace))
}

/// Number of presuppositions in `trace` that were accommodated.
pub fn accommodations(trace: &Trace) -> usize {
    trace
        .records()
        .iter()
        .filter(|r| r.kind == EffectKind::Presuppose && r.payload.as_deref().is_some_and(|p| p.starts_with("accommodated")))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effects::pure;

    fn referent(ctx: &mut Context, name: &str, gender: &str) {
        ctx.add_referent(Term::var(name), FeatureSet::gender(gender), 0, vec![]);
    }

    #[test]
    fn select_by_features() {
        let mut ctx = Context::new();
        referent(&mut ctx, "x1", "m");
        referent(&mut ctx, "x2", "n");
        assert_eq!(select_antecedent(&ctx, &FeatureSet::gender("n"), Strategy::Recency), Ok(Term::var("x2")));
    }

    #[test]
    fn select_most_recent() {
        let mut ctx = Context::new();
        referent(&mut ctx, "x1", "m");
        referent(&mut ctx, "x2", "m");
        assert_eq!(select_antecedent(&ctx, &FeatureSet::gender("m"), Strategy::Recency), Ok(Term::var("x2")));
    }

    #[test]
    fn select_fails_without_match() {
        let mut ctx = Context::new();
        referent(&mut ctx, "x1", "f");
        assert!(matches!(
            select_antecedent(&ctx, &FeatureSet::gender("m"), Strategy::Recency),
            Err(DiscourseError::UnresolvedAnaphora { .. })
        ));
    }

    #[test]
    fn closure_examples() {
        let x1 = Term::var("x1");
        let body = Formula::and(Formula::pred("man", vec![x1.clone()]), Formula::pred("walks", vec![x1]));
        assert_eq!(existential_closure(body.clone(), &["x1".to_string()]), Formula::exists("x1", body.clone()));
        assert_eq!(existential_closure(body.clone(), &[]), body);
        let bald = Formula::pred("bald", vec![Term::constant("john")]);
        assert_eq!(existential_closure(bald.clone(), &[]), bald);
        let two = existential_closure(Formula::Truth, &["x1".to_string(), "x2".to_string()]);
        assert_eq!(two, Formula::exists("x1", Formula::exists("x2", Formula::Truth)));
    }

    #[test]
    fn empty_discourse() {
        let (phi, ctx, trace) = run_discourse(pure(Formula::Truth), Context::new(), Policy::default(), Strategy::Recency).unwrap();
        assert_eq!(phi, Formula::Truth);
        assert_eq!(ctx, Context::new());
        assert!(trace.is_empty());
    }

    #[test]
    fn introduce_registers_a_top_referent() {
        let c = Computation::introduce(FeatureSet::gender("m"), Hint::Noun("man".into()), |t| {
            pure(Formula::pred("man", vec![t]))
        });
        let (phi, ctx, trace) = run_open(c, Context::new(), Policy::default(), Strategy::Recency).unwrap();
        assert_eq!(phi, Formula::pred("man", vec![Term::var("x1")]));
        assert_eq!(ctx.referents.len(), 1);
        assert_eq!(ctx.referents[0].term, Term::var("x1"));
        assert_eq!(ctx.referents[0].features, FeatureSet::gender("m"));
        assert_eq!(trace.lines(), ["introduce {gender=m} -> x1"]);
        assert_eq!(ctx.fresh_counter, 2);
    }

    #[test]
    fn names_are_introduced_once() {
        let john = || Hint::Name("john".into());
        let c = Computation::introduce(FeatureSet::gender("m"), john(), move |a| {
            Computation::introduce(FeatureSet::gender("m"), john(), move |b| pure(Formula::pred("sees", vec![a, b])))
        });
        let (_, ctx, _) = run_open(c, Context::new(), Policy::default(), Strategy::Recency).unwrap();
        assert_eq!(ctx.referents.len(), 1);
        assert!(ctx.top_vars().is_empty());
    }

    #[test]
    fn barrier_hides_its_referents() {
        let body = Computation::introduce(FeatureSet::gender("n"), Hint::Noun("donkey".into()), |t| {
            pure(Formula::pred("donkey", vec![t]))
        });
        let c = Computation::barrier(body, |phi| {
            Computation::select(FeatureSet::gender("n"), move |t| pure(Formula::and(phi, Formula::pred("brays", vec![t]))))
        });
        let err = run_discourse(c, Context::new(), Policy::default(), Strategy::Recency).unwrap_err();
        assert!(matches!(err.error, DiscourseError::UnresolvedAnaphora { .. }));
        assert_eq!(err.trace.lines()[..2], ["barrier -> ~exists x1. donkey(x1)", "introduce {gender=n} -> x1"]);
    }

    #[test]
    fn context_rendering() {
        let mut ctx = Context::new();
        referent(&mut ctx, "x1", "m");
        ctx.sentence = 2;
        ctx.add_referent(Term::constant("john"), FeatureSet::new(), 0, vec![]);
        assert_eq!(ctx.to_string(), "x1 gender=m introduced-in:S1 level:top\njohn - introduced-in:S2 level:top\n");
    }
}
