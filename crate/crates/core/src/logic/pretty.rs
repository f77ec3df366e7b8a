use super::{Formula, Term};

/// Renders a formula in the concrete syntax read by [`super::parse_formula`].
///
/// Binary connectives are always parenthesized. A quantifier (or a negated
/// quantifier) on the left of a connective is wrapped as well, since
/// quantifier bodies extend as far right as possible.
pub fn pretty(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, &mut out);
    out
}

fn write_formula(f: &Formula, out: &mut String) {
    match f {
        Formula::Pred(name, args) => {
            out.push_str(name);
            out.push('(');
            for (i, t) in args.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_term(t, out);
            }
            out.push(')');
        }
        Formula::And(a, b) => write_binary(a, "&", b, out),
        Formula::Or(a, b) => write_binary(a, "|", b, out),
        Formula::Implies(a, b) => write_binary(a, "->", b, out),
        Formula::Not(a) => {
            out.push('~');
            write_formula(a, out);
        }
        Formula::Exists(v, body) => write_quantifier("exists", v, body, out),
        Formula::Forall(v, body) => write_quantifier("forall", v, body, out),
        Formula::Truth => out.push_str("true"),
        Formula::Falsity => out.push_str("false"),
    }
}

fn write_term(t: &Term, out: &mut String) {
    out.push_str(t.name());
}

fn write_binary(a: &Formula, op: &str, b: &Formula, out: &mut String) {
    out.push('(');
    if ends_open(a) {
        out.push('(');
        write_formula(a, out);
        out.push(')');
    } else {
        write_formula(a, out);
    }
    out.push(' ');
    out.push_str(op);
    out.push(' ');
    write_formula(b, out);
    out.push(')');
}

fn write_quantifier(kw: &str, v: &str, body: &Formula, out: &mut String) {
    out.push_str(kw);
    out.push(' ');
    out.push_str(v);
    out.push_str(". ");
    write_formula(body, out);
}

fn ends_open(f: &Formula) -> bool {
    match f {
        Formula::Exists(..) | Formula::Forall(..) => true,
        Formula::Not(a) => ends_open(a),
        _ => false,
    }
}
