//! Brute-force equivalence checking over every model up to a domain size.
//!
//! Domain entities are labelled `e1..en`. Models of one size are visited in
//! a fixed counting order: the first signature predicate is the most
//! significant digit group, and within a predicate the extension is read as
//! a binary number whose bit `i` is the `i`-th tuple in lexicographic order.
//! Interpretations of constants occurring in the formulas vary fastest.
//! The first disagreeing model in this order is reported.

use thiserror::Error;

use super::Model;
use crate::logic::{Formula, Term};

/// Predicate names with their arities.
pub type Signature = Vec<(String, usize)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent,
    Countermodel(Model),
}

impl Equivalence {
    pub fn holds(&self) -> bool {
        matches!(self, Equivalence::Equivalent)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivalenceError {
    #[error("formula has free variables: {0}")]
    NotClosed(String),
    #[error("predicate {name}/{arity} is not in the signature")]
    OutsideSignature { name: String, arity: usize },
    #[error("maximum domain size must be at least 1")]
    ZeroSize,
}

/// Every model over `signature` with exactly `size` entities, plus every
/// interpretation of `constants`.
#[derive(Debug, Clone)]
pub struct ModelSpace {
    signature: Signature,
    size: usize,
    constants: Vec<String>,
}

impl ModelSpace {
    pub fn new(signature: Signature, size: usize, constants: Vec<String>) -> Self {
        ModelSpace { signature, size, constants }
    }

    /// Number of models: the product of `2^(size^arity)` over predicates,
    /// times `size` per constant. `None` on overflow.
    pub fn count(&self) -> Option<u128> {
        let mut total: u128 = 1;
        for (_, arity) in &self.signature {
            let bits = u32::try_from(self.size.checked_pow(*arity as u32)?).ok()?;
            total = total.checked_mul(2u128.checked_pow(bits)?)?;
        }
        for _ in &self.constants {
            total = total.checked_mul(self.size as u128)?;
        }
        Some(total)
    }

    pub fn iter(&self) -> impl Iterator<Item = Model> + '_ {
        let mut counter = Odometer::new(&self.signature, self.size, self.constants.len());
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let model = counter.to_model(&self.signature, &self.constants);
            done = !counter.advance();
            Some(model)
        })
    }
}

fn entity(i: usize) -> String {
    format!("e{}", i + 1)
}

struct Odometer {
    size: usize,
    // offsets[p] is where predicate p's bits start in `bits`
    offsets: Vec<usize>,
    bits: Vec<bool>,
    consts: Vec<usize>,
}

impl Odometer {
    fn new(signature: &Signature, size: usize, n_consts: usize) -> Self {
        let mut offsets = Vec::with_capacity(signature.len());
        let mut total = 0;
        for (_, arity) in signature {
            offsets.push(total);
            total += size.pow(*arity as u32);
        }
        Odometer { size, offsets, bits: vec![false; total], consts: vec![0; n_consts] }
    }

    /// Steps to the next model; false once every model has been visited.
    fn advance(&mut self) -> bool {
        for c in self.consts.iter_mut().rev() {
            *c += 1;
            if *c < self.size {
                return true;
            }
            *c = 0;
        }
        for p in (0..self.offsets.len()).rev() {
            let end = self.offsets.get(p + 1).copied().unwrap_or(self.bits.len());
            for bit in &mut self.bits[self.offsets[p]..end] {
                if *bit {
                    *bit = false;
                } else {
                    *bit = true;
                    return true;
                }
            }
        }
        false
    }

    fn holds(&self, pred: usize, args: &[usize]) -> bool {
        let index = args.iter().fold(0, |acc, &a| acc * self.size + a);
        self.bits[self.offsets[pred] + index]
    }

    fn to_model(&self, signature: &Signature, constants: &[String]) -> Model {
        let mut model = Model::new((0..self.size).map(entity)).expect("size is at least 1");
        for (p, (name, arity)) in signature.iter().enumerate() {
            let tuples: Vec<Vec<String>> = (0..self.size.pow(*arity as u32))
                .filter(|&i| self.bits[self.offsets[p] + i])
                .map(|i| tuple_of(i, *arity, self.size).into_iter().map(entity).collect())
                .collect();
            model.declare(name, Some(*arity), tuples).expect("signature names are distinct");
        }
        for (name, &value) in constants.iter().zip(&self.consts) {
            model.pin_constant(name, &entity(value)).expect("entity in range");
        }
        model
    }
}

fn tuple_of(mut index: usize, arity: usize, size: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = index % size;
        index /= size;
    }
    out
}

enum Arg {
    Slot(usize),
    Const(usize),
}

enum Compiled {
    Pred(usize, Vec<Arg>),
    And(Box<Compiled>, Box<Compiled>),
    Or(Box<Compiled>, Box<Compiled>),
    Implies(Box<Compiled>, Box<Compiled>),
    Not(Box<Compiled>),
    Exists(usize, Box<Compiled>),
    Forall(usize, Box<Compiled>),
    Const(bool),
}

struct Compiler<'a> {
    signature: &'a Signature,
    constants: &'a [String],
    scope: Vec<String>,
    depth: usize,
}

impl Compiler<'_> {
    fn compile(&mut self, f: &Formula) -> Result<Compiled, EquivalenceError> {
        Ok(match f {
            Formula::Pred(name, args) => {
                let pred = self
                    .signature
                    .iter()
                    .position(|(n, a)| n == name && *a == args.len())
                    .ok_or_else(|| EquivalenceError::OutsideSignature { name: name.clone(), arity: args.len() })?;
                let args = args
                    .iter()
                    .map(|t| match t {
                        Term::Var(v) => self
                            .scope
                            .iter()
                            .rposition(|s| s == v)
                            .map(Arg::Slot)
                            .ok_or_else(|| EquivalenceError::NotClosed(v.clone())),
                        Term::Const(c) => Ok(Arg::Const(
                            self.constants.iter().position(|k| k == c).expect("constants collected up front"),
                        )),
                    })
                    .collect::<Result<_, _>>()?;
                Compiled::Pred(pred, args)
            }
            Formula::And(a, b) => Compiled::And(Box::new(self.compile(a)?), Box::new(self.compile(b)?)),
            Formula::Or(a, b) => Compiled::Or(Box::new(self.compile(a)?), Box::new(self.compile(b)?)),
            Formula::Implies(a, b) => Compiled::Implies(Box::new(self.compile(a)?), Box::new(self.compile(b)?)),
            Formula::Not(a) => Compiled::Not(Box::new(self.compile(a)?)),
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                let slot = self.scope.len();
                self.scope.push(v.clone());
                self.depth = self.depth.max(self.scope.len());
                let body = self.compile(body);
                self.scope.pop();
                let body = Box::new(body?);
                if matches!(f, Formula::Exists(..)) {
                    Compiled::Exists(slot, body)
                } else {
                    Compiled::Forall(slot, body)
                }
            }
            Formula::Truth => Compiled::Const(true),
            Formula::Falsity => Compiled::Const(false),
        })
    }
}

fn eval_compiled(c: &Compiled, m: &Odometer, env: &mut [usize], scratch: &mut Vec<usize>) -> bool {
    match c {
        Compiled::Pred(p, args) => {
            let mark = scratch.len();
            scratch.extend(args.iter().map(|a| match a {
                Arg::Slot(s) => env[*s],
                Arg::Const(k) => m.consts[*k],
            }));
            let value = m.holds(*p, &scratch[mark..]);
            scratch.truncate(mark);
            value
        }
        Compiled::And(a, b) => eval_compiled(a, m, env, scratch) && eval_compiled(b, m, env, scratch),
        Compiled::Or(a, b) => eval_compiled(a, m, env, scratch) || eval_compiled(b, m, env, scratch),
        Compiled::Implies(a, b) => !eval_compiled(a, m, env, scratch) || eval_compiled(b, m, env, scratch),
        Compiled::Not(a) => !eval_compiled(a, m, env, scratch),
        Compiled::Exists(slot, body) => (0..m.size).any(|e| {
            env[*slot] = e;
            eval_compiled(body, m, env, scratch)
        }),
        Compiled::Forall(slot, body) => (0..m.size).all(|e| {
            env[*slot] = e;
            eval_compiled(body, m, env, scratch)
        }),
        Compiled::Const(b) => *b,
    }
}

/// Decides whether two closed formulas agree on every model over
/// `signature` with at most `max_size` entities.
pub fn equivalent_up_to(
    f: &Formula,
    g: &Formula,
    signature: &Signature,
    max_size: usize,
) -> Result<Equivalence, EquivalenceError> {
    if max_size == 0 {
        return Err(EquivalenceError::ZeroSize);
    }
    let mut constants: Vec<String> = f.constants().union(&g.constants()).cloned().collect();
    constants.sort();

    let compile = |formula: &Formula| {
        let mut compiler = Compiler { signature, constants: &constants, scope: Vec::new(), depth: 0 };
        let compiled = compiler.compile(formula)?;
        Ok::<_, EquivalenceError>((compiled, compiler.depth))
    };
    let (cf, df) = compile(f)?;
    let (cg, dg) = compile(g)?;
    let mut env = vec![0; df.max(dg)];
    let mut scratch = Vec::new();

    for size in 1..=max_size {
        let mut odometer = Odometer::new(signature, size, constants.len());
        loop {
            let a = eval_compiled(&cf, &odometer, &mut env, &mut scratch);
            let b = eval_compiled(&cg, &odometer, &mut env, &mut scratch);
            if a != b {
                return Ok(Equivalence::Countermodel(odometer.to_model(signature, &constants)));
            }
            if !odometer.advance() {
                break;
            }
        }
    }
    Ok(Equivalence::Equivalent)
}
