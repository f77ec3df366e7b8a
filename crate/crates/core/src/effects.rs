//! Effectful computations as operation trees.
//!
//! A [`Computation`] is either a finished value or an effect request paired
//! with the continuation that consumes the request's answer. Handlers give
//! the requests their meaning; [`run`] walks a tree, asks the handler for
//! each answer, and records every handled request in a [`Trace`].

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::logic::{pretty, Formula, Term};
use crate::presup::Presupposition;

/// Feature constraints and annotations, e.g. `gender=m`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeatureSet(BTreeMap<String, String>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FeatureError {
    #[error("unknown feature `{0}`")]
    UnknownFeature(String),
    #[error("bad value `{value}` for feature `{name}`")]
    BadValue { name: String, value: String },
    #[error("malformed feature `{0}`")]
    Malformed(String),
}

const GENDERS: [&str; 3] = ["m", "f", "n"];

impl FeatureSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn gender(g: &str) -> Self {
        let mut fs = Self::new();
        fs.0.insert("gender".to_string(), g.to_string());
        fs
    }

    /// Parses `name=value,name=value` or `-` for the empty set.
    pub fn parse(s: &str) -> Result<Self, FeatureError> {
        let s = s.trim();
        let mut fs = Self::new();
        if s == "-" || s.is_empty() {
            return Ok(fs);
        }
        for item in s.split(',') {
            let (name, value) = item.split_once('=').ok_or_else(|| FeatureError::Malformed(item.to_string()))?;
            let (name, value) = (name.trim(), value.trim());
            match name {
                "gender" if GENDERS.contains(&value) => {}
                "gender" => return Err(FeatureError::BadValue { name: name.into(), value: value.into() }),
                _ => return Err(FeatureError::UnknownFeature(name.to_string())),
            }
            fs.0.insert(name.to_string(), value.to_string());
        }
        Ok(fs)
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.0.get(name).map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Every constraint is present in `self` with the same value.
    pub fn satisfies(&self, constraints: &FeatureSet) -> bool {
        constraints.0.iter().all(|(k, v)| self.0.get(k) == Some(v))
    }

    /// No feature is given conflicting values by the two sets.
    pub fn compatible(&self, other: &FeatureSet) -> bool {
        self.0.iter().all(|(k, v)| other.0.get(k).is_none_or(|w| w == v))
    }

    /// `gender=m` style, `-` when empty.
    pub fn plain(&self) -> String {
        if self.0.is_empty() {
            return "-".to_string();
        }
        self.0.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for FeatureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{{{}}}", inner.join(","))
    }
}

/// What an introduced referent is: an indefinite's noun, or a proper name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Hint {
    Noun(String),
    Name(String),
}

/// How a presupposition was discharged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Resolution {
    Bound(Term),
    Accommodated(Term),
}

impl Resolution {
    pub fn term(&self) -> &Term {
        match self {
            Resolution::Bound(t) | Resolution::Accommodated(t) => t,
        }
    }

    pub fn into_term(self) -> Term {
        match self {
            Resolution::Bound(t) | Resolution::Accommodated(t) => t,
        }
    }
}

impl fmt::Display for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Resolution::Bound(t) => write!(f, "bound {t}"),
            Resolution::Accommodated(t) => write!(f, "accommodated {t}"),
        }
    }
}

pub type Cont<T, A> = Box<dyn FnOnce(T) -> Computation<A>>;

/// A scope-taking request: the handler picks a binder, then runs the
/// restrictor and nucleus bodies with it.
pub struct Quantification {
    pub features: FeatureSet,
    pub hint: String,
    pub restrictor: Cont<Term, Formula>,
    pub nucleus: Cont<Term, Formula>,
}

pub enum Effect<A> {
    Introduce { features: FeatureSet, hint: Hint, k: Cont<Term, A> },
    Select { constraints: FeatureSet, k: Cont<Term, A> },
    Presuppose { presupposition: Presupposition, k: Cont<Term, A> },
    Quantify { scope: Quantification, k: Cont<Formula, A> },
    Barrier { body: Box<Computation<Formula>>, k: Cont<Formula, A> },
}

impl<A> Effect<A> {
    pub fn kind(&self) -> EffectKind {
        match self {
            Effect::Introduce { .. } => EffectKind::Introduce,
            Effect::Select { .. } => EffectKind::Select,
            Effect::Presuppose { .. } => EffectKind::Presuppose,
            Effect::Quantify { .. } => EffectKind::Quantify,
            Effect::Barrier { .. } => EffectKind::Barrier,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EffectKind {
    Introduce,
    Select,
    Presuppose,
    Quantify,
    Barrier,
}

impl fmt::Display for EffectKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EffectKind::Introduce => "introduce",
            EffectKind::Select => "select",
            EffectKind::Presuppose => "presuppose",
            EffectKind::Quantify => "quantify",
            EffectKind::Barrier => "barrier",
        })
    }
}

pub enum Computation<A> {
    Pure(A),
    Perform(Effect<A>),
}

pub fn pure<A>(a: A) -> Computation<A> {
    Computation::Pure(a)
}

pub fn bind<A: 'static, B: 'static>(
    c: Computation<A>,
    f: impl FnOnce(A) -> Computation<B> + 'static,
) -> Computation<B> {
    c.bind(f)
}

impl<A: 'static> Computation<A> {
    /// Grafts `f` onto the leaf of the tree, keeping the effect spine in order.
    pub fn bind<B: 'static>(self, f: impl FnOnce(A) -> Computation<B> + 'static) -> Computation<B> {
        match self {
            Computation::Pure(a) => f(a),
            Computation::Perform(effect) => Computation::Perform(match effect {
                Effect::Introduce { features, hint, k } => {
                    Effect::Introduce { features, hint, k: Box::new(move |t| k(t).bind(f)) }
                }
                Effect::Select { constraints, k } => Effect::Select { constraints, k: Box::new(move |t| k(t).bind(f)) },
                Effect::Presuppose { presupposition, k } => {
                    Effect::Presuppose { presupposition, k: Box::new(move |t| k(t).bind(f)) }
                }
                Effect::Quantify { scope, k } => Effect::Quantify { scope, k: Box::new(move |phi| k(phi).bind(f)) },
                Effect::Barrier { body, k } => Effect::Barrier { body, k: Box::new(move |phi| k(phi).bind(f)) },
            }),
        }
    }

    pub fn map<B: 'static>(self, f: impl FnOnce(A) -> B + 'static) -> Computation<B> {
        self.bind(move |a| Computation::Pure(f(a)))
    }

    pub fn introduce(features: FeatureSet, hint: Hint, k: impl FnOnce(Term) -> Computation<A> + 'static) -> Self {
        Computation::Perform(Effect::Introduce { features, hint, k: Box::new(k) })
    }

    pub fn select(constraints: FeatureSet, k: impl FnOnce(Term) -> Computation<A> + 'static) -> Self {
        Computation::Perform(Effect::Select { constraints, k: Box::new(k) })
    }

    pub fn presuppose(presupposition: Presupposition, k: impl FnOnce(Term) -> Computation<A> + 'static) -> Self {
        Computation::Perform(Effect::Presuppose { presupposition, k: Box::new(k) })
    }

    pub fn quantify(scope: Quantification, k: impl FnOnce(Formula) -> Computation<A> + 'static) -> Self {
        Computation::Perform(Effect::Quantify { scope, k: Box::new(k) })
    }

    pub fn barrier(body: Computation<Formula>, k: impl FnOnce(Formula) -> Computation<A> + 'static) -> Self {
        Computation::Perform(Effect::Barrier { body: Box::new(body), k: Box::new(k) })
    }

    pub fn is_pure(&self) -> bool {
        matches!(self, Computation::Pure(_))
    }
}

impl<A: fmt::Debug> fmt::Debug for Computation<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Computation::Pure(a) => f.debug_tuple("Pure").field(a).finish(),
            Computation::Perform(e) => write!(f, "Perform({}, ..)", e.kind()),
        }
    }
}

/// One handled request.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub kind: EffectKind,
    pub args: String,
    /// `None` when the clause failed.
    pub payload: Option<String>,
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if !self.args.is_empty() {
            write!(f, " {}", self.args)?;
        }
        match &self.payload {
            Some(p) => write!(f, " -> {p}"),
            None => write!(f, " -> failed"),
        }
    }
}

/// Handled requests in the order they were performed (preorder for nested
/// quantifier and barrier bodies).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace(Vec<Record>);

impl Trace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn records(&self) -> &[Record] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self, kind: EffectKind) -> usize {
        self.0.iter().filter(|r| r.kind == kind).count()
    }

    pub fn extend(&mut self, other: Trace) {
        self.0.extend(other.0);
    }

    pub fn lines(&self) -> Vec<String> {
        self.0.iter().map(ToString::to_string).collect()
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.0 {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("unhandled effect: {0}")]
pub struct UnhandledEffect(pub EffectKind);

/// A set of effect clauses. Clauses left at their defaults report
/// [`UnhandledEffect`].
///
/// `quantify` and `barrier` receive their bodies unevaluated and are
/// expected to run them with [`run`] against the same handler and trace.
pub trait Handler {
    type Error: From<UnhandledEffect>;

    fn introduce(&mut self, _features: &FeatureSet, _hint: &Hint) -> Result<Term, Self::Error> {
        Err(UnhandledEffect(EffectKind::Introduce).into())
    }

    fn select(&mut self, _constraints: &FeatureSet) -> Result<Term, Self::Error> {
        Err(UnhandledEffect(EffectKind::Select).into())
    }

    fn presuppose(&mut self, _p: &Presupposition) -> Result<Resolution, Self::Error> {
        Err(UnhandledEffect(EffectKind::Presuppose).into())
    }

    /// Returns the binder chosen and the resulting formula.
    fn quantify(&mut self, _scope: Quantification, _trace: &mut Trace) -> Result<(Term, Formula), Self::Error> {
        Err(UnhandledEffect(EffectKind::Quantify).into())
    }

    fn barrier(&mut self, _body: Computation<Formula>, _trace: &mut Trace) -> Result<Formula, Self::Error> {
        Err(UnhandledEffect(EffectKind::Barrier).into())
    }
}

/// Runs `c` to a value, appending one record per handled request.
pub fn run<H, A>(h: &mut H, mut c: Computation<A>, trace: &mut Trace) -> Result<A, H::Error>
where
    H: Handler + ?Sized,
{
    loop {
        let effect = match c {
            Computation::Pure(a) => return Ok(a),
            Computation::Perform(effect) => effect,
        };
        let slot = trace.0.len();
        let args = match &effect {
            Effect::Introduce { features, .. } => features.to_string(),
            Effect::Select { constraints, .. } => constraints.to_string(),
            Effect::Presuppose { presupposition, .. } => presupposition.pattern(),
            Effect::Quantify { .. } | Effect::Barrier { .. } => String::new(),
        };
        trace.0.push(Record { kind: effect.kind(), args, payload: None });

        c = match effect {
            Effect::Introduce { features, hint, k } => {
                let t = h.introduce(&features, &hint)?;
                trace.0[slot].payload = Some(t.to_string());
                k(t)
            }
            Effect::Select { constraints, k } => {
                let t = h.select(&constraints)?;
                trace.0[slot].payload = Some(t.to_string());
                k(t)
            }
            Effect::Presuppose { presupposition, k } => {
                let r = h.presuppose(&presupposition)?;
                trace.0[slot].payload = Some(r.to_string());
                k(r.into_term())
            }
            Effect::Quantify { scope, k } => {
                let (binder, phi) = h.quantify(scope, trace)?;
                trace.0[slot].args = binder.to_string();
                trace.0[slot].payload = Some(pretty(&phi));
                k(phi)
            }
            Effect::Barrier { body, k } => {
                let phi = h.barrier(*body, trace)?;
                trace.0[slot].payload = Some(pretty(&phi));
                k(phi)
            }
        };
    }
}

/// A clause error together with everything traced up to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure<E> {
    pub error: E,
    pub trace: Trace,
}

impl<E: fmt::Display> fmt::Display for Failure<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.error.fmt(f)
    }
}

impl<E: std::error::Error> std::error::Error for Failure<E> {}

/// Runs `c` under `h`, returning the value, the final handler state, and
/// the trace.
pub fn handle<H: Handler, A>(mut h: H, c: Computation<A>) -> Result<(A, H, Trace), Failure<H::Error>> {
    let mut trace = Trace::new();
    match run(&mut h, c, &mut trace) {
        Ok(a) => Ok((a, h, trace)),
        Err(error) => Err(Failure { error, trace }),
    }
}

/// Deterministic handler that answers every request from a counter.
///
/// Introduced terms are `p<n>`, selected `s<n>`, presupposed `q<n>`
/// (reported as accommodated), binders `b<n>`. Quantification yields
/// `forall b. (restrictor -> nucleus)` and a barrier negates its body.
/// Individual clauses can be switched off to exercise coverage errors.
#[derive(Debug, Clone, Default)]
pub struct ProbeHandler {
    counter: usize,
    disabled: Vec<EffectKind>,
}

impl ProbeHandler {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn without(mut self, kind: EffectKind) -> Self {
        self.disabled.push(kind);
        self
    }

    /// Requests answered so far.
    pub fn answered(&self) -> usize {
        self.counter
    }

    fn next(&mut self, kind: EffectKind, prefix: &str) -> Result<Term, UnhandledEffect> {
        if self.disabled.contains(&kind) {
            return Err(UnhandledEffect(kind));
        }
        self.counter += 1;
        Ok(Term::var(format!("{prefix}{}", self.counter)))
    }
}

impl Handler for ProbeHandler {
    type Error = UnhandledEffect;

    fn introduce(&mut self, _features: &FeatureSet, _hint: &Hint) -> Result<Term, Self::Error> {
        self.next(EffectKind::Introduce, "p")
    }

    fn select(&mut self, _constraints: &FeatureSet) -> Result<Term, Self::Error> {
        self.next(EffectKind::Select, "s")
    }

    fn presuppose(&mut self, _p: &Presupposition) -> Result<Resolution, Self::Error> {
        self.next(EffectKind::Presuppose, "q").map(Resolution::Accommodated)
    }

    fn quantify(&mut self, scope: Quantification, trace: &mut Trace) -> Result<(Term, Formula), Self::Error> {
        let binder = self.next(EffectKind::Quantify, "b")?;
        let restrictor = run(self, (scope.restrictor)(binder.clone()), trace)?;
        let nucleus = run(self, (scope.nucleus)(binder.clone()), trace)?;
        let name = binder.name().to_string();
        Ok((binder, Formula::forall(name, Formula::implies(restrictor, nucleus))))
    }

    fn barrier(&mut self, body: Computation<Formula>, trace: &mut Trace) -> Result<Formula, Self::Error> {
        if self.disabled.contains(&EffectKind::Barrier) {
            return Err(UnhandledEffect(EffectKind::Barrier));
        }
        self.counter += 1;
        Ok(Formula::not(run(self, body, trace)?))
    }
}
