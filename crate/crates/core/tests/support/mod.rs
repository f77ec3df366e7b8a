#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::rc::Rc;
use std::sync::Arc;

use prag::dynamics::{run_discourse, Context, DiscourseError, Strategy};
use prag::effects::{handle, pure, Computation, FeatureSet, Hint, ProbeHandler, Quantification, Trace};
use prag::grammar::{denote, parse_sentence, Leaf, Lexicon};
use prag::logic::{parse_formula, Formula, Term};
use prag::models::{equivalent_up_to, Equivalence, Signature};
use prag::presup::{Accommodation, Atom, Policy, Presupposition, Slot};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(rel)
}

pub fn read(rel: &str) -> String {
    std::fs::read_to_string(data(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

pub fn fragment() -> Lexicon {
    Lexicon::load(&read("fragment.lex")).expect("fragment lexicon loads")
}

pub fn sig(preds: &[(&str, usize)]) -> Signature {
    preds.iter().map(|(p, n)| (p.to_string(), *n)).collect()
}

/// Checks `phi` against a hand-written target on every model up to `size`.
pub fn equivalent(phi: &Formula, target: &str, preds: &[(&str, usize)], size: usize) -> Result<(), String> {
    let target = parse_formula(target).map_err(|e| e.to_string())?;
    match equivalent_up_to(phi, &target, &sig(preds), size).map_err(|e| e.to_string())? {
        Equivalence::Equivalent => Ok(()),
        Equivalence::Countermodel(m) => Err(format!("countermodel:\n{m}")),
    }
}

// ---------------------------------------------------------------------------
// Random computation trees for the monad laws

/// Blueprint of a computation tree. Computations are consumed when run, so
/// each law side rebuilds its trees from the same blueprint.
#[derive(Debug, Clone)]
pub enum Shape {
    Pure(u8),
    Introduce(u8, Rc<Shape>),
    Select(u8, Rc<Shape>),
    Presuppose(Rc<Shape>),
    Quantify { restrictor: Rc<Shape>, nucleus: Rc<Shape>, k: Rc<Shape> },
    Barrier(Rc<Shape>, Rc<Shape>),
}

const GENDERS: [&str; 3] = ["m", "f", "n"];

pub fn random_shape(rng: &mut ChaCha8Rng, depth: usize) -> Shape {
    let leaf = depth == 0 || rng.gen_ratio(1, 4);
    if leaf {
        return Shape::Pure(rng.gen_range(0..4));
    }
    let sub = |rng: &mut ChaCha8Rng| Rc::new(random_shape(rng, depth - 1));
    match rng.gen_range(0..5) {
        0 => Shape::Introduce(rng.gen_range(0..3), sub(rng)),
        1 => Shape::Select(rng.gen_range(0..3), sub(rng)),
        2 => Shape::Presuppose(sub(rng)),
        3 => Shape::Quantify { restrictor: sub(rng), nucleus: sub(rng), k: sub(rng) },
        _ => Shape::Barrier(sub(rng), sub(rng)),
    }
}

fn leaf_formula(n: u8, env: &[Term]) -> Formula {
    match env.last() {
        None => Formula::pred(format!("p{n}"), vec![]),
        Some(t) => Formula::pred(format!("p{n}"), vec![t.clone()]),
    }
}

/// Builds the tree; `env` holds the terms received so far.
pub fn build(shape: &Shape, env: Vec<Term>) -> Computation<Formula> {
    let with = move |t: Term, env: &Vec<Term>| {
        let mut env = env.clone();
        env.push(t);
        env
    };
    match shape {
        Shape::Pure(n) => pure(leaf_formula(*n, &env)),
        Shape::Introduce(g, k) => {
            let k = k.clone();
            Computation::introduce(FeatureSet::gender(GENDERS[*g as usize]), Hint::Noun("thing".into()), move |t| {
                build(&k, with(t, &env))
            })
        }
        Shape::Select(g, k) => {
            let k = k.clone();
            Computation::select(FeatureSet::gender(GENDERS[*g as usize]), move |t| build(&k, with(t, &env)))
        }
        Shape::Presuppose(k) => {
            let k = k.clone();
            let p = Presupposition::new(Atom::new("thing", vec![Slot::Hole]), vec![], FeatureSet::new(), "the thing")
                .unwrap();
            Computation::presuppose(p, move |t| build(&k, with(t, &env)))
        }
        Shape::Quantify { restrictor, nucleus, k } => {
            let (r, n, k) = (restrictor.clone(), nucleus.clone(), k.clone());
            let (er, en) = (env.clone(), env.clone());
            let scope = Quantification {
                features: FeatureSet::gender("m"),
                hint: "thing".into(),
                restrictor: Box::new(move |t| build(&r, with(t, &er))),
                nucleus: Box::new(move |t| build(&n, with(t, &en))),
            };
            Computation::quantify(scope, move |phi| build(&k, env).map(move |rest| Formula::and(phi, rest)))
        }
        Shape::Barrier(body, k) => {
            let (body, k) = (body.clone(), k.clone());
            let inner = build(&body, env.clone());
            Computation::barrier(inner, move |phi| build(&k, env).map(move |rest| Formula::and(phi, rest)))
        }
    }
}

/// A Kleisli arrow from a blueprint: runs the tree and conjoins its result
/// onto the argument.
pub fn arrow(shape: &Shape) -> impl FnOnce(Formula) -> Computation<Formula> + 'static {
    let shape = shape.clone();
    move |a: Formula| build(&shape, vec![]).map(move |b| Formula::or(a, b))
}

pub fn observe(c: Computation<Formula>) -> (Formula, Trace) {
    let (v, _, t) = handle(ProbeHandler::new(), c).expect("probe handles every effect");
    (v, t)
}

/// Left identity, right identity and associativity on `cases` random trees.
/// Returns the number of trees checked.
pub fn check_monad_laws(cases: usize, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..cases {
        let m = random_shape(&mut rng, 4);
        let f = random_shape(&mut rng, 3);
        let g = random_shape(&mut rng, 3);
        let a = Formula::pred("a", vec![]);

        let left = observe(pure(a.clone()).bind(arrow(&f)));
        let right = observe(arrow(&f)(a));
        if left != right {
            return Err(format!("left identity fails on case {case}: {f:?}"));
        }

        let left = observe(build(&m, vec![]).bind(pure));
        let right = observe(build(&m, vec![]));
        if left != right {
            return Err(format!("right identity fails on case {case}: {m:?}"));
        }

        let left = observe(build(&m, vec![]).bind(arrow(&f)).bind(arrow(&g)));
        let g2 = g.clone();
        let right = observe(build(&m, vec![]).bind(move |x| arrow(&f)(x).bind(arrow(&g2))));
        if left != right {
            return Err(format!("associativity fails on case {case}: {m:?}"));
        }
    }
    Ok(cases)
}

// ---------------------------------------------------------------------------
// Exhaustive sweep of the small test lexicon

pub const SWEEP_WORDS: [&str; 12] =
    ["a", "every", "the", "he", "who", "doesnt", "his", "man", "wife", "john", "owns", "walks"];

pub fn sweep_entries() -> Vec<Leaf> {
    let lex = Lexicon::load(&read("sweep.lex")).expect("sweep lexicon loads");
    SWEEP_WORDS.iter().map(|w| Arc::clone(lex.get(w).expect("word in sweep lexicon"))).collect()
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub sequences: u64,
    pub grammatical: u64,
    pub runs: u64,
    pub outcomes: BTreeMap<&'static str, u64>,
    pub violations: Vec<String>,
}

impl SweepReport {
    fn merge(mut self, other: SweepReport) -> SweepReport {
        self.sequences += other.sequences;
        self.grammatical += other.grammatical;
        self.runs += other.runs;
        for (k, v) in other.outcomes {
            *self.outcomes.entry(k).or_default() += v;
        }
        self.violations.extend(other.violations);
        self
    }
}

const POLICIES: [Accommodation; 3] = [Accommodation::Global, Accommodation::Trapped, Accommodation::Off];

fn check_sequence(words: &[Leaf], report: &mut SweepReport) {
    report.sequences += 1;
    let Ok((tree, _)) = parse_sentence(words) else {
        *report.outcomes.entry("parse error").or_default() += 1;
        return;
    };
    report.grammatical += 1;
    for accommodation in POLICIES {
        report.runs += 1;
        let outcome = match run_discourse(denote(&tree), Context::new(), Policy::new(accommodation), Strategy::Recency) {
            Ok((phi, ctx, _)) => {
                if !phi.is_closed() || ctx.depth() != 0 {
                    report.violations.push(format!("{tree} under {accommodation}: open result {phi}"));
                }
                "ok"
            }
            Err(f) => match f.error {
                DiscourseError::UnresolvedAnaphora { .. } => "unresolved anaphora",
                DiscourseError::PresuppositionFailure { .. } => "presupposition failure",
                DiscourseError::Unhandled(e) => {
                    report.violations.push(format!("{tree} under {accommodation}: {e}"));
                    "unhandled effect"
                }
            },
        };
        *report.outcomes.entry(outcome).or_default() += 1;
    }
}

/// Every word sequence of length 1..=`max_len` that starts with `prefix`.
fn sweep_prefix(entries: &[Leaf], prefix: &[usize], max_len: usize) -> SweepReport {
    let mut report = SweepReport::default();
    let mut buf: Vec<Leaf> = prefix.iter().map(|&i| entries[i].clone()).collect();
    let mut digits: Vec<usize> = prefix.to_vec();
    if buf.len() <= max_len && !buf.is_empty() {
        check_sequence(&buf, &mut report);
    }
    // depth-first over extensions of the prefix
    let base = prefix.len();
    loop {
        if digits.len() < max_len {
            digits.push(0);
            buf.push(entries[0].clone());
        } else {
            loop {
                if digits.len() == base {
                    return report;
                }
                let last = digits.len() - 1;
                digits[last] += 1;
                if digits[last] < entries.len() {
                    buf[last] = entries[digits[last]].clone();
                    break;
                }
                digits.pop();
                buf.pop();
            }
        }
        check_sequence(&buf, &mut report);
    }
}

/// Runs every sentence of up to `max_len` words over the sweep lexicon.
pub fn sweep(max_len: usize) -> SweepReport {
    use rayon::prelude::*;
    let entries = sweep_entries();
    let n = entries.len();
    let mut report = SweepReport::default();
    for i in 0..n {
        report = report.merge(sweep_prefix(&entries, &[i], 1));
    }
    if max_len < 2 {
        return report;
    }
    let prefixes: Vec<[usize; 2]> = (0..n).flat_map(|i| (0..n).map(move |j| [i, j])).collect();
    prefixes
        .par_iter()
        .map(|p| sweep_prefix(&entries, p, max_len))
        .reduce(SweepReport::default, SweepReport::merge)
        .merge(report)
}

/// 12 + 12^2 + ... + 12^max_len.
pub fn expected_sequences(max_len: usize) -> u64 {
    (1..=max_len as u32).map(|k| 12u64.pow(k)).sum()
}
