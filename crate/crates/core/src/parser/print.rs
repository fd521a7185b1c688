//! Canonical pretty-printer.
//!
//! Output re-parses to an alpha-equivalent formula and is a fixed point of
//! parse-then-print. Parentheses are minimal for the precedence order
//! `~  /\  \/  ->  <->` with quantifier-like prefixes weakest; a
//! quantifier in tail position of its enclosing chain prints bare.

use super::classify_for_print;
use crate::syntax::{Formula, Term};

pub fn pretty_print(f: &Formula) -> String {
    let mut out = String::new();
    print_formula(f, 1, true, &mut out);
    out
}

pub fn term_to_string(t: &Term) -> String {
    let mut out = String::new();
    print_term(t, &mut out);
    out
}

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Iff(_, _) => 1,
        Formula::Implies(_, _) => 2,
        Formula::Or(_, _) => 3,
        Formula::And(_, _) => 4,
        Formula::Not(_) => 5,
        Formula::Eq(_, _) | Formula::Mem(_, _) | Formula::Surj(_, _, _) | Formula::Maps(_, _, _) => {
            6
        }
        _ => 0, // quantifier-like
    }
}

fn print_formula(f: &Formula, min_prec: u8, tail: bool, out: &mut String) {
    let p = prec(f);
    let quantifier_like = p == 0;
    let need_parens = if quantifier_like { !tail } else { p < min_prec };
    if need_parens {
        out.push('(');
    }
    let inner_tail = if need_parens { true } else { tail };
    match f {
        Formula::Eq(a, b) => {
            print_term(a, out);
            out.push_str(" = ");
            print_term(b, out);
        }
        Formula::Mem(a, b) => {
            print_term(a, out);
            out.push_str(" in ");
            print_term(b, out);
        }
        Formula::Surj(a, b, c) => {
            print_term(a, out);
            out.push_str(" : ");
            print_term(b, out);
            out.push_str(" ->> ");
            print_term(c, out);
        }
        Formula::Maps(a, b, c) => {
            print_term(a, out);
            out.push_str(" : ");
            print_term(b, out);
            out.push_str(" |-> ");
            print_term(c, out);
        }
        Formula::Not(g) => {
            out.push('~');
            print_formula(g, 5, inner_tail, out);
        }
        Formula::And(a, b) => {
            print_formula(a, 5, false, out);
            out.push_str(" /\\ ");
            print_formula(b, 4, inner_tail, out);
        }
        Formula::Or(a, b) => {
            print_formula(a, 4, false, out);
            out.push_str(" \\/ ");
            print_formula(b, 3, inner_tail, out);
        }
        Formula::Implies(a, b) => {
            print_formula(a, 3, false, out);
            out.push_str(" -> ");
            print_formula(b, 2, inner_tail, out);
        }
        Formula::Iff(a, b) => {
            print_formula(a, 2, false, out);
            out.push_str(" <-> ");
            print_formula(b, 1, inner_tail, out);
        }
        Formula::ForallSet(n, g) | Formula::ExistsSet(n, g) => {
            out.push_str(if matches!(f, Formula::ForallSet(_, _)) { "all " } else { "ex " });
            out.push_str(n);
            if classify_for_print(n) != "set" {
                out.push_str(":set");
            }
            out.push_str(" . ");
            print_formula(g, 0, true, out);
        }
        Formula::ForallThing(n, g) | Formula::ExistsThing(n, g) => {
            out.push_str(if matches!(f, Formula::ForallThing(_, _)) { "all " } else { "ex " });
            out.push_str(n);
            if classify_for_print(n) != "thing" {
                out.push_str(":thing");
            }
            out.push_str(" . ");
            print_formula(g, 0, true, out);
        }
        Formula::ForallFun { graph, domain, body } | Formula::ExistsFun { graph, domain, body } => {
            out.push_str(if matches!(f, Formula::ForallFun { .. }) { "all " } else { "ex " });
            out.push_str(graph);
            out.push_str("_{");
            print_domain(domain, out);
            out.push_str("} . ");
            print_formula(body, 0, true, out);
        }
        Formula::MultiForallUr { family, index, index_set, body } => {
            out.push_str("all-ur ");
            out.push_str(family);
            out.push_str("_{");
            out.push_str(index);
            out.push_str("} in ");
            print_term(index_set, out);
            out.push_str(" . ");
            print_formula(body, 0, true, out);
        }
        Formula::ConjOp { index, index_set, body } => {
            out.push_str("bigwedge_{");
            out.push_str(index);
            out.push_str(" in ");
            print_term(index_set, out);
            out.push_str("} ");
            print_formula(body, 0, true, out);
        }
    }
    if need_parens {
        out.push(')');
    }
}

/// Composite subscripts print the singleton of a thing variable bare.
fn print_domain(d: &Term, out: &mut String) {
    match d {
        Term::Successor(inner) => match inner.as_ref() {
            Term::ThingVar(n) | Term::ThingConst(n) => out.push_str(n),
            _ => print_term(d, out),
        },
        _ => print_term(d, out),
    }
}

fn print_term(t: &Term, out: &mut String) {
    match t {
        Term::EmptySet => out.push('0'),
        Term::Omega => out.push('w'),
        Term::InactiveFn => out.push_str("id0"),
        Term::EmptyMatrix => out.push_str("[0 0]"),
        Term::SetVar(n) | Term::ThingVar(n) | Term::GraphVar(n) | Term::SetConst(n)
        | Term::ThingConst(n) => out.push_str(n),
        Term::FunComposite { graph, domain } => {
            print_term(graph, out);
            out.push_str("_{");
            print_domain(domain, out);
            out.push('}');
        }
        Term::Successor(a) => {
            out.push_str("succ(");
            print_term(a, out);
            out.push(')');
        }
        Term::Pair(a, b) => {
            out.push('(');
            print_term(a, out);
            out.push_str(", ");
            print_term(b, out);
            out.push(')');
        }
        Term::ImageApp { fun, arg } => {
            print_term(fun, out);
            out.push('(');
            print_term(arg, out);
            out.push(')');
        }
        Term::SetLiteral(ts) => {
            out.push('{');
            for (i, x) in ts.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                print_term(x, out);
            }
            out.push('}');
        }
        Term::Matrix { rows, cols, entries } => {
            out.push('[');
            for r in 0..*rows {
                if r > 0 {
                    out.push_str("; ");
                }
                for c in 0..*cols {
                    if c > 0 {
                        out.push(' ');
                    }
                    print_term(&entries[r * cols + c], out);
                }
            }
            out.push(']');
        }
        Term::Exponent { base, exp } => {
            print_term(base, out);
            out.push('^');
            print_term(exp, out);
        }
    }
}
