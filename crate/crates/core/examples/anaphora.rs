//! Cross-sentential anaphora, donkey sentences and accessibility.
//!
//! cargo run --example anaphora

use prag::cli::run_text;
use prag::dynamics::{Reading, Strategy};
use prag::grammar::Lexicon;
use prag::presup::Policy;

fn main() {
    let lexicon = Lexicon::load(include_str!("../data/fragment.lex")).expect("lexicon");
    let discourses = [
        "a man walks . he whistles .",
        "every farmer who owns a donkey beats it .",
        "every farmer owns a donkey . it brays .",
        "a man doesnt walk . he whistles .",
        "john doesnt own a donkey . it brays .",
    ];
    for text in discourses {
        let out = run_text(lexicon.clone(), text, Policy::default(), Strategy::Recency, true);
        println!("> {text}\n{}{}", out.stdout, out.stderr);
    }

    let weak = Policy { reading: Reading::Weak, ..Policy::default() };
    let out = run_text(lexicon, "every farmer who owns a donkey walks .", weak, Strategy::Recency, false);
    println!("> weak reading\n{}", out.stdout);
}
