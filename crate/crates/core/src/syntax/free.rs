//! Free-variable analysis.
//!
//! Binding rules: set/thing quantifiers bind by name, a function quantifier
//! binds the composite identified by (graph name, domain term), the multiple
//! quantifier binds its whole family by name plus its index variable, and
//! the conjunctive operator binds only its index variable. Binder domains
//! and index sets live in the enclosing scope.

use super::{Formula, Name, Sort, Term};
use std::collections::BTreeSet;

pub type FreeVar = (Name, Sort);

#[derive(Clone, Debug)]
enum Binding {
    Set(Name),
    Thing(Name),
    Fun(Name, Term),
    Family(Name),
}

pub fn free_variables(f: &Formula) -> BTreeSet<FreeVar> {
    let mut out = BTreeSet::new();
    let mut env = Vec::new();
    walk_formula(f, &mut env, &mut out);
    out
}

fn bound_set(env: &[Binding], n: &str) -> bool {
    env.iter().rev().any(|b| matches!(b, Binding::Set(m) if m == n))
}

fn bound_thing(env: &[Binding], n: &str) -> bool {
    env.iter().rev().any(|b| matches!(b, Binding::Thing(m) if m == n))
}

/// Innermost binding of a composite occurrence: a family binder captures any
/// domain, a function binder only its own domain term.
fn bound_fun(env: &[Binding], name: &str, domain: &Term) -> bool {
    for b in env.iter().rev() {
        match b {
            Binding::Family(m) if m == name => return true,
            Binding::Fun(m, d) if m == name && d == domain => return true,
            _ => {}
        }
    }
    false
}

fn walk_formula(f: &Formula, env: &mut Vec<Binding>, out: &mut BTreeSet<FreeVar>) {
    match f {
        Formula::Eq(a, b) | Formula::Mem(a, b) => {
            walk_term(a, env, out);
            walk_term(b, env, out);
        }
        Formula::Surj(a, b, c) | Formula::Maps(a, b, c) => {
            walk_term(a, env, out);
            walk_term(b, env, out);
            walk_term(c, env, out);
        }
        Formula::Not(g) => walk_formula(g, env, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            walk_formula(a, env, out);
            walk_formula(b, env, out);
        }
        Formula::ForallSet(n, g) | Formula::ExistsSet(n, g) => {
            env.push(Binding::Set(n.clone()));
            walk_formula(g, env, out);
            env.pop();
        }
        Formula::ForallThing(n, g) | Formula::ExistsThing(n, g) => {
            env.push(Binding::Thing(n.clone()));
            walk_formula(g, env, out);
            env.pop();
        }
        Formula::ForallFun { graph, domain, body } | Formula::ExistsFun { graph, domain, body } => {
            walk_term(domain, env, out);
            env.push(Binding::Fun(graph.clone(), domain.clone()));
            walk_formula(body, env, out);
            env.pop();
        }
        Formula::MultiForallUr { family, index, index_set, body } => {
            walk_term(index_set, env, out);
            env.push(Binding::Family(family.clone()));
            env.push(Binding::Thing(index.clone()));
            walk_formula(body, env, out);
            env.pop();
            env.pop();
        }
        Formula::ConjOp { index, index_set, body } => {
            walk_term(index_set, env, out);
            env.push(Binding::Thing(index.clone()));
            walk_formula(body, env, out);
            env.pop();
        }
    }
}

fn walk_term(t: &Term, env: &mut Vec<Binding>, out: &mut BTreeSet<FreeVar>) {
    match t {
        Term::SetVar(n) => {
            if !bound_set(env, n) {
                out.insert((n.clone(), Sort::Set));
            }
        }
        Term::ThingVar(n) => {
            if !bound_thing(env, n) {
                out.insert((n.clone(), Sort::Thing));
            }
        }
        Term::GraphVar(n) => {
            // A bare graph name outside a composite: report as graph-sorted.
            out.insert((n.clone(), Sort::Graph));
        }
        Term::FunComposite { graph, domain } => {
            if let Term::GraphVar(name) = graph.as_ref() {
                if !bound_fun(env, name, domain) {
                    out.insert((name.clone(), Sort::Function(domain.clone())));
                }
            } else {
                walk_term(graph, env, out);
            }
            walk_term(domain, env, out);
        }
        _ => {
            for c in t.children() {
                walk_term(c, env, out);
            }
        }
    }
}
