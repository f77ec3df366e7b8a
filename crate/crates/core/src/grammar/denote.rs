//! Compositional mapping from parse trees to effectful computations.
//!
//! Nouns and verb phrases denote properties (terms to computations), noun
//! phrases denote generalized quantifiers (properties to computations), and
//! a sentence applies its subject to its predicate.

use crate::effects::{pure, Computation, Hint, Quantification};
use crate::logic::{Formula, Term};
use crate::presup::{Atom, Presupposition, Slot};

use super::lexicon::{Determiner, LexEntry, Symbol};
use super::parser::{Leaf, Nbar, Np, Sentence, Vp};

pub type Property = Box<dyn FnOnce(Term) -> Computation<Formula>>;
pub type GenQuant = Box<dyn FnOnce(Property) -> Computation<Formula>>;

fn atom(entry: &LexEntry, args: Vec<Term>) -> Formula {
    Formula::pred(entry.name(), args)
}

fn conj(a: Computation<Formula>, b: impl FnOnce() -> Computation<Formula> + 'static) -> Computation<Formula> {
    a.bind(move |r| b().map(move |n| Formula::and(r, n)))
}

pub fn denote(s: &Sentence) -> Computation<Formula> {
    denote_np(&s.subject)(denote_vp(&s.predicate))
}

/// Left fold over the sentences, conjoining each result onto the previous.
pub fn denote_discourse(sentences: &[Sentence]) -> Computation<Formula> {
    sentences.iter().fold(pure(Formula::Truth), |acc, s| {
        let s = s.clone();
        acc.bind(move |p| denote(&s).map(move |q| Formula::and(p, q)))
    })
}

pub fn denote_noun(n: &Leaf) -> Property {
    let n = n.clone();
    Box::new(move |t| pure(atom(&n, vec![t])))
}

pub fn denote_nbar(nbar: &Nbar) -> Property {
    match nbar {
        Nbar::Noun(n) => denote_noun(n),
        Nbar::Relative { noun, vp, .. } => {
            let noun = denote_noun(noun);
            let vp = (**vp).clone();
            Box::new(move |t| {
                let u = t.clone();
                conj(noun(t), move || denote_vp(&vp)(u))
            })
        }
    }
}

pub fn denote_vp(vp: &Vp) -> Property {
    match vp {
        Vp::Intransitive(v) => denote_noun(v),
        Vp::Transitive { verb, object } => {
            let verb = verb.clone();
            let object = (**object).clone();
            Box::new(move |s| denote_np(&object)(Box::new(move |o| pure(atom(&verb, vec![s, o])))))
        }
        Vp::Negated { vp, .. } => {
            let vp = (**vp).clone();
            Box::new(move |t| Computation::barrier(denote_vp(&vp)(t), pure))
        }
    }
}

pub fn denote_np(np: &Np) -> GenQuant {
    match np {
        Np::Det { det, nbar } => match det.symbol {
            Symbol::Determiner(Determiner::Indef) => {
                let nbar = nbar.clone();
                Box::new(move |k| {
                    let noun = nbar.noun().clone();
                    Computation::introduce(noun.features.clone(), Hint::Noun(noun.name().to_string()), move |t| {
                        let u = t.clone();
                        conj(denote_nbar(&nbar)(t), move || k(u))
                    })
                })
            }
            Symbol::Determiner(Determiner::Univ) => {
                let nbar = nbar.clone();
                Box::new(move |k| {
                    let noun = nbar.noun();
                    let scope = Quantification {
                        features: noun.features.clone(),
                        hint: noun.name().to_string(),
                        restrictor: denote_nbar(&nbar),
                        nucleus: k,
                    };
                    Computation::quantify(scope, pure)
                })
            }
            Symbol::Determiner(Determiner::Def) => match referential(np) {
                Some(term) => Box::new(move |k| term.bind(k)),
                None => definite_with_assertion(det, nbar),
            },
            _ => unreachable!("Det entries carry a determiner kind"),
        },
        _ => {
            let term = referential(np).expect("names, pronouns and possessives are referential");
            Box::new(move |k| term.bind(k))
        }
    }
}

fn source(det: &Leaf, words: Vec<&str>) -> String {
    std::iter::once(det.word.as_str()).chain(words).collect::<Vec<_>>().join(" ")
}

fn hole_atom(entry: &LexEntry, rest: Option<Term>) -> Atom {
    let mut args = vec![Slot::Hole];
    args.extend(rest.map(Slot::Term));
    Atom::new(entry.name(), args)
}

/// The term an NP refers to, for NPs that pick out one individual without
/// taking scope: names, pronouns, possessives, and definites whose
/// descriptor can be stated as atoms about the hole.
fn referential(np: &Np) -> Option<Computation<Term>> {
    match np {
        Np::Name(n) => {
            let features = n.features.clone();
            Some(Computation::introduce(features, Hint::Name(n.name().to_string()), pure))
        }
        Np::Pronoun(p) => Some(Computation::select(p.features.clone(), pure)),
        Np::Possessive { poss, noun } => {
            let noun = noun.clone();
            let src = format!("{} {}", poss.word, noun.word);
            Some(Computation::select(poss.features.clone(), move |owner| {
                let head = hole_atom(&noun, Some(owner));
                let p = Presupposition::new(head, vec![], noun.features.clone(), src).expect("one hole");
                Computation::presuppose(p, pure)
            }))
        }
        Np::Det { det, .. } if det.symbol != Symbol::Determiner(Determiner::Def) => None,
        Np::Det { det, nbar } => {
            let det = det.clone();
            let src = source(&det, nbar.words());
            let noun = nbar.noun().clone();
            let make = move |extras: Vec<Atom>| {
                let p = Presupposition::new(hole_atom(&noun, None), extras, noun.features.clone(), src)
                    .expect("one hole per atom");
                Computation::presuppose(p, pure)
            };
            match nbar {
                Nbar::Noun(_) => Some(make(vec![])),
                Nbar::Relative { vp, .. } => match &**vp {
                    Vp::Intransitive(v) => Some(make(vec![hole_atom(v, None)])),
                    Vp::Transitive { verb, object } => {
                        let verb = verb.clone();
                        let object = referential(object)?;
                        Some(object.bind(move |o| make(vec![hole_atom(&verb, Some(o))])))
                    }
                    Vp::Negated { .. } => None,
                },
            }
        }
    }
}

/// A definite whose relative clause cannot be folded into the descriptor
/// (it contains a quantifier or a negation): the head noun is presupposed
/// and the relative clause is asserted about the resulting term.
fn definite_with_assertion(det: &Leaf, nbar: &Nbar) -> GenQuant {
    let noun = nbar.noun().clone();
    let src = source(det, nbar.words());
    let Nbar::Relative { vp, .. } = nbar else { unreachable!("plain nouns are referential") };
    let vp = (**vp).clone();
    Box::new(move |k| {
        let p = Presupposition::new(hole_atom(&noun, None), vec![], noun.features.clone(), src).expect("one hole");
        Computation::presuppose(p, move |t| {
            let u = t.clone();
            conj(denote_vp(&vp)(t), move || k(u))
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effects::{handle, ProbeHandler};
    use crate::grammar::{parse, tokenize, Lexicon};
    use crate::logic::pretty;

    fn lexicon() -> Lexicon {
        Lexicon::load(
            "man\tN\tman\tgender=m\nfarmer\tN\tfarmer\tgender=m\ndonkey\tN\tdonkey\tgender=n\n\
             owns\tVt\towns\t-\nbeats\tVt\tbeats\t-\nwalks\tVi\twalks\t-\njohn\tPN\tjohn\tgender=m\n\
             wife\tNrel\twife\tgender=f\nkof\tN\tkof\tgender=m\nisbald\tVi\tbald\t-\n",
        )
        .unwrap()
    }

    fn probe(s: &str) -> (String, Vec<String>) {
        let p = parse(&tokenize(s).unwrap(), &lexicon()).unwrap();
        let (phi, _, trace) = handle(ProbeHandler::new(), denote_discourse(&p.sentences)).unwrap();
        (pretty(&phi.simplify()), trace.lines())
    }

    #[test]
    fn noun_on_a_constant() {
        let lex = lexicon();
        let c = denote_noun(lex.get("man").unwrap())(Term::constant("a"));
        assert!(matches!(c, Computation::Pure(ref f) if *f == Formula::pred("man", vec![Term::constant("a")])));
    }

    #[test]
    fn indefinite_subject() {
        let (phi, trace) = probe("a man walks");
        assert_eq!(phi, "(man(p1) & walks(p1))");
        assert_eq!(trace, ["introduce {gender=m} -> p1"]);
    }

    #[test]
    fn universal_takes_scope_over_its_nucleus() {
        let (phi, trace) = probe("every farmer who owns a donkey beats it");
        assert_eq!(phi, "forall b1. ((farmer(b1) & (donkey(p2) & owns(b1,p2))) -> beats(b1,s3))");
        assert_eq!(trace.len(), 3);
    }

    #[test]
    fn definite_descriptor_folds_relative_clause() {
        let (_, trace) = probe("the man who owns john walks");
        assert_eq!(trace, ["introduce {gender=m} -> p1", "presuppose (man(_) & owns(_,p1)) -> accommodated q2"]);
        let (_, trace) = probe("the man who walks walks");
        assert_eq!(trace, ["presuppose (man(_) & walks(_)) -> accommodated q1"]);
    }

    #[test]
    fn definite_with_quantified_relative_clause_asserts_it() {
        let (phi, trace) = probe("the man who owns a donkey walks");
        assert_eq!(trace, ["presuppose man(_) -> accommodated q1", "introduce {gender=n} -> p2"]);
        assert_eq!(phi, "(donkey(p2) & (owns(q1,p2) & walks(q1)))");
    }

    #[test]
    fn possessive_selects_then_presupposes() {
        let (phi, trace) = probe("john owns his wife");
        assert_eq!(
            trace,
            ["introduce {gender=m} -> p1", "select {gender=m} -> s2", "presuppose wife(_,s2) -> accommodated q3"]
        );
        assert_eq!(phi, "owns(p1,q3)");
    }

    #[test]
    fn negation_is_a_barrier() {
        let (phi, trace) = probe("john doesnt walks");
        assert_eq!(phi, "~walks(p1)");
        assert_eq!(trace[1], "barrier -> ~walks(p1)");
    }

    #[test]
    fn discourse_effects_in_sentence_order() {
        let (phi, trace) = probe("a man walks . he walks");
        assert_eq!(trace, ["introduce {gender=m} -> p1", "select {gender=m} -> s2"]);
        assert_eq!(phi, "(man(p1) & (walks(p1) & walks(s2)))");
        let (phi, trace) = probe("");
        assert_eq!((phi.as_str(), trace.len()), ("true", 0));
    }

    #[test]
    fn presupposition_source_text() {
        let lex = lexicon();
        let p = parse(&tokenize("the kof isbald").unwrap(), &lex).unwrap();
        let c = denote(&p.sentences[0]);
        let Computation::Perform(crate::effects::Effect::Presuppose { presupposition, .. }) = c else {
            panic!("expected a presupposition")
        };
        assert_eq!(presupposition.to_string(), "\"the kof\" requires kof(_)");
    }
}
