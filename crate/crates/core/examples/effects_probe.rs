//! Building an effect tree by hand and running it under two handlers: the
//! probe handler, which answers every request from a counter, and the
//! discourse handler, which answers from a context.
//!
//! cargo run --example effects_probe

use prag::dynamics::{run_discourse, Context, Strategy};
use prag::effects::{handle, pure, Computation, EffectKind, FeatureSet, Hint, ProbeHandler};
use prag::logic::{pretty, Formula};
use prag::presup::Policy;

fn sentence() -> Computation<Formula> {
    // "a donkey brays . it sleeps ."
    Computation::introduce(FeatureSet::gender("n"), Hint::Noun("donkey".into()), |d| {
        let brays = Formula::and(Formula::pred("donkey", vec![d.clone()]), Formula::pred("brays", vec![d]));
        Computation::select(FeatureSet::gender("n"), move |it| {
            pure(Formula::and(brays, Formula::pred("sleeps", vec![it])))
        })
    })
}

fn main() {
    let (phi, _, trace) = handle(ProbeHandler::new(), sentence()).unwrap();
    println!("probe:     {}\n{trace}", pretty(&phi));

    let (phi, ctx, trace) = run_discourse(sentence(), Context::new(), Policy::default(), Strategy::Recency).unwrap();
    println!("discourse: {}\n{trace}{ctx}", pretty(&phi));

    let err = handle(ProbeHandler::new().without(EffectKind::Select), sentence()).unwrap_err();
    println!("without a select clause: {}", err.error);
}
