//! A scripted REPL session: context grows sentence by sentence, errors
//! leave it untouched, and commands inspect or reset it.
//!
//! cargo run --example repl_session

use prag::cli::{repl_step, SessionState};
use prag::dynamics::Strategy;
use prag::grammar::Lexicon;
use prag::presup::Policy;

fn main() {
    let lexicon = Lexicon::load(include_str!("../data/fragment.lex")).expect("lexicon");
    let mut state = SessionState::new(lexicon, Policy::default(), Strategy::Recency, false);
    let script = [
        "a man walks .",
        "he whistles .",
        ":context",
        "she walks .",
        ":trace on",
        "he loves a woman .",
        ":context",
        ":reset",
        "he whistles .",
    ];
    for line in script {
        let (next, out) = repl_step(state, line);
        state = next;
        print!("> {line}\n{out}");
    }
}
