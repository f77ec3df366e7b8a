//! Parsing, printing, substitution and alpha-equivalence of formulas.
//!
//! cargo run --example formulas

use prag::logic::{alpha_eq, parse_formula, pretty, substitute, Term};

fn main() {
    let f = parse_formula("exists x. (man(x) & walks(x))").expect("well-formed");
    println!("parsed:      {}", pretty(&f));
    println!("free vars:   {:?}", f.free_vars());

    let g = parse_formula("exists y. (man(y) & walks(y))").unwrap();
    println!("alpha-equal to {}: {}", pretty(&g), alpha_eq(&f, &g));

    // substituting x for y under a binder on x renames the binder
    let h = parse_formula("exists x. owns(x,y)").unwrap();
    println!("{} [y := x] = {}", pretty(&h), pretty(&substitute(&h, "y", &Term::var("x"))));

    match parse_formula("exists x. man(x") {
        Ok(_) => unreachable!(),
        Err(e) => println!("error: {e}"),
    }
}
