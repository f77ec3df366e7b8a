//! Compositional semantics for a controlled English fragment, with
//! discourse anaphora, presupposition and scope expressed as algebraic
//! effects.
//!
//! A sentence is parsed ([`grammar`]), mapped to a tree of effect requests
//! ([`effects`]), and handled against a discourse context ([`dynamics`],
//! [`presup`]) to yield a first-order formula ([`logic`]) that can be checked
//! against finite models ([`models`]).

pub mod cli;
pub mod dynamics;
pub mod effects;
pub mod grammar;
pub mod logic;
pub mod models;
pub mod presup;

pub use dynamics::{close_discourse, run_discourse, run_open, Context, DiscourseError, Reading, Strategy};
pub use effects::{handle, pure, Computation, Handler, Trace};
pub use grammar::{denote, denote_discourse, parse_discourse, Lexicon};
pub use logic::{parse_formula, pretty, Formula, Term};
pub use models::{equivalent_up_to, eval, parse_model, Model};
pub use presup::{Accommodation, Policy};
