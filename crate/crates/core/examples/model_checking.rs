//! Evaluating formulas in a finite model and deciding equivalence by
//! enumerating every small model.
//!
//! cargo run --example model_checking

use prag::logic::parse_formula;
use prag::models::{equivalent_up_to, eval, parse_model, Assignment, Equivalence};

fn main() {
    let model = parse_model("domain: a b\nman: a\nwalks: a b\nowns: a,b\n").expect("model file");
    for text in ["exists x. (man(x) & walks(x))", "forall x. (walks(x) -> man(x))", "owns(a,b)"] {
        let f = parse_formula(text).unwrap();
        println!("{text:<35} {}", eval(&model, &Assignment::new(), &f).unwrap());
    }

    let sig = vec![("man".to_string(), 1), ("walks".to_string(), 1)];
    let f = parse_formula("exists x. (man(x) & walks(x))").unwrap();
    let g = parse_formula("(exists x. man(x)) & (exists x. walks(x))").unwrap();
    match equivalent_up_to(&f, &g, &sig, 3).unwrap() {
        Equivalence::Equivalent => println!("equivalent on all models up to size 3"),
        Equivalence::Countermodel(m) => println!("first countermodel:\n{m}"),
    }
    let g = parse_formula("exists y. (walks(y) & man(y))").unwrap();
    println!("after reordering: equivalent = {}", equivalent_up_to(&f, &g, &sig, 3).unwrap().holds());
}
