//! Definite descriptions and possessives: binding, accommodation, failure,
//! and accommodation trapped under a quantifier.
//!
//! cargo run --example presupposition

use prag::cli::run_text;
use prag::dynamics::Strategy;
use prag::grammar::Lexicon;
use prag::presup::{Accommodation, Policy};

fn main() {
    let lexicon = Lexicon::load(include_str!("../data/fragment.lex")).expect("lexicon");
    let cases = [
        "a man owns a donkey . the donkey brays .",
        "the kof isbald .",
        "john loves his wife .",
        "every man loves his wife .",
    ];
    for text in cases {
        for policy in [Accommodation::Global, Accommodation::Trapped, Accommodation::Off] {
            let out = run_text(lexicon.clone(), text, Policy::new(policy), Strategy::Recency, false);
            let first = if out.code == 0 { out.stdout.lines().next() } else { out.stderr.lines().next() };
            println!("{text:<42} {policy:<8} exit {} {}", out.code, first.unwrap_or_default());
        }
    }
}
