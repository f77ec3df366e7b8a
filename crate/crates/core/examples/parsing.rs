//! Tokenizing and parsing sentences of the fragment, and the effect trace
//! each denotation produces.
//!
//! cargo run --example parsing

use prag::effects::{handle, ProbeHandler};
use prag::grammar::{denote, parse_discourse, Lexicon};

const LEXICON: &str = "\
farmer\tN\tfarmer\tgender=m
man\tN\tman\tgender=m
donkey\tN\tdonkey\tgender=n
owns\tVt\towns\t-
beats\tVt\tbeats\t-
beat\tVt\tbeats\t-
john\tPN\tjohn\tgender=m
walks\tVi\twalks\t-
";

fn main() {
    let lexicon = Lexicon::load(LEXICON).expect("lexicon");
    for text in ["every farmer who owns a donkey beats it", "john walks", "john doesnt beat it", "man a walks"] {
        match parse_discourse(text, &lexicon) {
            Ok(parse) => {
                for tree in &parse.sentences {
                    println!("{tree}");
                    let (_, _, trace) = handle(ProbeHandler::new(), denote(tree)).unwrap();
                    for line in trace.lines() {
                        println!("    {line}");
                    }
                }
            }
            Err(e) => println!("{text:?}: {e}"),
        }
    }
}
