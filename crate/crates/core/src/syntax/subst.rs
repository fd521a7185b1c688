//! Capture-avoiding substitution.
//!
//! Substituting a set variable rewrites function-composite domains as well,
//! so `f_X` becomes `f_T` under `X := T`. Binders whose bound name would
//! capture a free variable of the replacement are renamed first.

use super::free::free_variables;
use super::{Formula, Name, Sort, Term};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SubstError {
    #[error("sort mismatch: cannot substitute {var} (sort {var_sort:?}) by a term of sort {term_sort:?}")]
    SortMismatch { var: Name, var_sort: Sort, term_sort: Sort },
    #[error("substitution target must be a set or thing variable")]
    NotAVariable,
}

/// Substitute the simple variable `var` (a `SetVar` or `ThingVar`) by
/// `replacement` throughout `f`, avoiding capture.
pub fn substitute(f: &Formula, var: &Term, replacement: &Term) -> Result<Formula, SubstError> {
    let (name, is_set) = match var {
        Term::SetVar(n) => (n.clone(), true),
        Term::ThingVar(n) => (n.clone(), false),
        _ => return Err(SubstError::NotAVariable),
    };
    let var_sort = if is_set { Sort::Set } else { Sort::Thing };
    if !replacement.sort().fits(&var_sort) {
        return Err(SubstError::SortMismatch {
            var: name,
            var_sort,
            term_sort: replacement.sort(),
        });
    }
    let mut used = used_names(f);
    for (n, _) in free_variables_of_term(replacement) {
        used.insert(n);
    }
    Ok(subst_formula(f, &Target::Simple { name, is_set }, replacement, &mut used))
}

/// Substitute the function composite `(graph, domain)` by the function term
/// `replacement` (another composite or the inactive-function constant).
pub fn substitute_fun(
    f: &Formula,
    graph: &str,
    domain: &Term,
    replacement: &Term,
) -> Formula {
    let mut used = used_names(f);
    for (n, _) in free_variables_of_term(replacement) {
        used.insert(n);
    }
    subst_formula(
        f,
        &Target::Fun { name: graph.to_string(), domain: domain.clone() },
        replacement,
        &mut used,
    )
}

/// Rewrite every composite of the family `family` so that its graph slot
/// becomes the constant `to_const`; used when instantiating a multiple
/// quantifier with a constant family.
pub fn substitute_fun_family(f: &Formula, family: &str, to_const: &str) -> Formula {
    let mut used = used_names(f);
    used.insert(to_const.to_string());
    subst_formula(
        f,
        &Target::Family { name: family.to_string() },
        &Term::SetConst(to_const.to_string()),
        &mut used,
    )
}

enum Target {
    Simple { name: Name, is_set: bool },
    Fun { name: Name, domain: Term },
    Family { name: Name },
}

fn free_variables_of_term(t: &Term) -> BTreeSet<(Name, Sort)> {
    // Wrap the term in a dummy atom and reuse the formula analysis.
    let f = Formula::Eq(t.clone(), Term::EmptySet);
    free_variables(&f)
}

fn used_names(f: &Formula) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    fn term_names(t: &Term, out: &mut BTreeSet<Name>) {
        match t {
            Term::SetVar(n)
            | Term::ThingVar(n)
            | Term::GraphVar(n)
            | Term::SetConst(n)
            | Term::ThingConst(n) => {
                out.insert(n.clone());
            }
            _ => {}
        }
        for c in t.children() {
            term_names(c, out);
        }
    }
    fn walk(f: &Formula, out: &mut BTreeSet<Name>) {
        for t in f.terms() {
            term_names(t, out);
        }
        match f {
            Formula::ForallSet(n, _)
            | Formula::ExistsSet(n, _)
            | Formula::ForallThing(n, _)
            | Formula::ExistsThing(n, _) => {
                out.insert(n.clone());
            }
            Formula::ForallFun { graph, .. } | Formula::ExistsFun { graph, .. } => {
                out.insert(graph.clone());
            }
            Formula::MultiForallUr { family, index, .. } => {
                out.insert(family.clone());
                out.insert(index.clone());
            }
            Formula::ConjOp { index, .. } => {
                out.insert(index.clone());
            }
            _ => {}
        }
        for g in f.subformulas() {
            walk(g, out);
        }
    }
    walk(f, &mut out);
    out
}

fn fresh_name(base: &str, used: &mut BTreeSet<Name>) -> Name {
    for i in 1.. {
        let cand = format!("{base}{i}");
        if !used.contains(&cand) {
            used.insert(cand.clone());
            return cand;
        }
    }
    unreachable!()
}

/// Does the replacement term contain a free occurrence that the given
/// binder name would capture?
fn would_capture(replacement: &Term, name: &str, set_ns: bool, thing_ns: bool, fun_ns: bool) -> bool {
    free_variables_of_term(replacement).iter().any(|(n, s)| {
        n == name
            && match s {
                Sort::Set | Sort::Graph => set_ns,
                Sort::Thing => thing_ns,
                Sort::Function(_) => fun_ns,
                Sort::Matrix(_, _) => false,
            }
    })
}

fn subst_formula(
    f: &Formula,
    target: &Target,
    replacement: &Term,
    used: &mut BTreeSet<Name>,
) -> Formula {
    let st = |t: &Term, used: &mut BTreeSet<Name>| subst_term(t, target, replacement, used);
    match f {
        Formula::Eq(a, b) => Formula::Eq(st(a, used), st(b, used)),
        Formula::Mem(a, b) => Formula::Mem(st(a, used), st(b, used)),
        Formula::Surj(a, b, c) => Formula::Surj(st(a, used), st(b, used), st(c, used)),
        Formula::Maps(a, b, c) => Formula::Maps(st(a, used), st(b, used), st(c, used)),
        Formula::Not(g) => Formula::not(subst_formula(g, target, replacement, used)),
        Formula::And(a, b) => Formula::and(
            subst_formula(a, target, replacement, used),
            subst_formula(b, target, replacement, used),
        ),
        Formula::Or(a, b) => Formula::or(
            subst_formula(a, target, replacement, used),
            subst_formula(b, target, replacement, used),
        ),
        Formula::Implies(a, b) => Formula::implies(
            subst_formula(a, target, replacement, used),
            subst_formula(b, target, replacement, used),
        ),
        Formula::Iff(a, b) => Formula::iff(
            subst_formula(a, target, replacement, used),
            subst_formula(b, target, replacement, used),
        ),
        Formula::ForallSet(n, g) | Formula::ExistsSet(n, g) => {
            let forall = matches!(f, Formula::ForallSet(_, _));
            let (n2, g2) = subst_under_simple_binder(n, g, true, target, replacement, used);
            if forall {
                Formula::ForallSet(n2, Box::new(g2))
            } else {
                Formula::ExistsSet(n2, Box::new(g2))
            }
        }
        Formula::ForallThing(n, g) | Formula::ExistsThing(n, g) => {
            let forall = matches!(f, Formula::ForallThing(_, _));
            let (n2, g2) = subst_under_simple_binder(n, g, false, target, replacement, used);
            if forall {
                Formula::ForallThing(n2, Box::new(g2))
            } else {
                Formula::ExistsThing(n2, Box::new(g2))
            }
        }
        Formula::ForallFun { graph, domain, body } | Formula::ExistsFun { graph, domain, body } => {
            let forall = matches!(f, Formula::ForallFun { .. });
            let domain2 = st(domain, used);
            // Shadowing: a fun binder shadows a fun target with the same
            // identity. The binder's identity after substitution is
            // (graph, domain2).
            let shadowed = matches!(
                target,
                Target::Fun { name, domain: d } if name == graph && *d == domain2
            ) || matches!(target, Target::Family { name } if name == graph);
            let (graph2, body2) = if shadowed {
                (graph.clone(), (**body).clone())
            } else if would_capture(replacement, graph, false, false, true) {
                let g2 = fresh_name(graph, used);
                let renamed = subst_formula(
                    body,
                    &Target::Fun { name: graph.clone(), domain: (*domain).clone() },
                    &Term::composite(Term::GraphVar(g2.clone()), (*domain).clone()),
                    used,
                );
                (g2, subst_formula(&renamed, target, replacement, used))
            } else {
                (graph.clone(), subst_formula(body, target, replacement, used))
            };
            if forall {
                Formula::ForallFun { graph: graph2, domain: domain2, body: Box::new(body2) }
            } else {
                Formula::ExistsFun { graph: graph2, domain: domain2, body: Box::new(body2) }
            }
        }
        Formula::MultiForallUr { family, index, index_set, body } => {
            let index_set2 = st(index_set, used);
            let family_shadow = matches!(target, Target::Family { name } if name == family)
                || matches!(target, Target::Fun { name, .. } if name == family);
            let index_shadow =
                matches!(target, Target::Simple { name, is_set: false } if name == index);
            if family_shadow || index_shadow {
                return Formula::MultiForallUr {
                    family: family.clone(),
                    index: index.clone(),
                    index_set: index_set2,
                    body: body.clone(),
                };
            }
            let (family2, body_a) = if would_capture(replacement, family, false, false, true) {
                let f2 = fresh_name(family, used);
                (f2.clone(), rename_family(body, family, &f2))
            } else {
                (family.clone(), (**body).clone())
            };
            let (index2, body_b) = if would_capture(replacement, index, false, true, false) {
                let i2 = fresh_name(index, used);
                let renamed = subst_formula(
                    &body_a,
                    &Target::Simple { name: index.clone(), is_set: false },
                    &Term::ThingVar(i2.clone()),
                    used,
                );
                (i2, renamed)
            } else {
                (index.clone(), body_a)
            };
            Formula::MultiForallUr {
                family: family2,
                index: index2,
                index_set: index_set2,
                body: Box::new(subst_formula(&body_b, target, replacement, used)),
            }
        }
        Formula::ConjOp { index, index_set, body } => {
            let index_set2 = st(index_set, used);
            let index_shadow =
                matches!(target, Target::Simple { name, is_set: false } if name == index);
            if index_shadow {
                return Formula::ConjOp {
                    index: index.clone(),
                    index_set: index_set2,
                    body: body.clone(),
                };
            }
            let (index2, body2) = if would_capture(replacement, index, false, true, false) {
                let i2 = fresh_name(index, used);
                let renamed = subst_formula(
                    body,
                    &Target::Simple { name: index.clone(), is_set: false },
                    &Term::ThingVar(i2.clone()),
                    used,
                );
                (i2, renamed)
            } else {
                (index.clone(), (**body).clone())
            };
            Formula::ConjOp {
                index: index2,
                index_set: index_set2,
                body: Box::new(subst_formula(&body2, target, replacement, used)),
            }
        }
    }
}

fn subst_under_simple_binder(
    n: &str,
    body: &Formula,
    set_ns: bool,
    target: &Target,
    replacement: &Term,
    used: &mut BTreeSet<Name>,
) -> (Name, Formula) {
    let shadowed = matches!(target, Target::Simple { name, is_set } if name == n && *is_set == set_ns);
    if shadowed {
        return (n.to_string(), body.clone());
    }
    if would_capture(replacement, n, set_ns, !set_ns, false) {
        let n2 = fresh_name(n, used);
        let bound = if set_ns { Term::SetVar(n.to_string()) } else { Term::ThingVar(n.to_string()) };
        let fresh = if set_ns { Term::SetVar(n2.clone()) } else { Term::ThingVar(n2.clone()) };
        let renamed = subst_formula(
            body,
            &Target::Simple { name: n.to_string(), is_set: set_ns },
            &fresh,
            used,
        );
        let _ = bound;
        (n2, subst_formula(&renamed, target, replacement, used))
    } else {
        (n.to_string(), subst_formula(body, target, replacement, used))
    }
}

fn rename_family(f: &Formula, from: &str, to: &str) -> Formula {
    fn term(t: &Term, from: &str, to: &str) -> Term {
        match t {
            Term::FunComposite { graph, domain } => {
                let g = match graph.as_ref() {
                    Term::GraphVar(n) if n == from => Term::GraphVar(to.to_string()),
                    other => term(other, from, to),
                };
                Term::composite(g, term(domain, from, to))
            }
            Term::Successor(a) => Term::succ(term(a, from, to)),
            Term::Pair(a, b) => Term::pair(term(a, from, to), term(b, from, to)),
            Term::ImageApp { fun, arg } => Term::image(term(fun, from, to), term(arg, from, to)),
            Term::SetLiteral(ts) => Term::SetLiteral(ts.iter().map(|t| term(t, from, to)).collect()),
            Term::Matrix { rows, cols, entries } => Term::Matrix {
                rows: *rows,
                cols: *cols,
                entries: entries.iter().map(|t| term(t, from, to)).collect(),
            },
            Term::Exponent { base, exp } => Term::exponent(term(base, from, to), term(exp, from, to)),
            other => other.clone(),
        }
    }
    fn walk(f: &Formula, from: &str, to: &str) -> Formula {
        match f {
            Formula::Eq(a, b) => Formula::Eq(term(a, from, to), term(b, from, to)),
            Formula::Mem(a, b) => Formula::Mem(term(a, from, to), term(b, from, to)),
            Formula::Surj(a, b, c) => {
                Formula::Surj(term(a, from, to), term(b, from, to), term(c, from, to))
            }
            Formula::Maps(a, b, c) => {
                Formula::Maps(term(a, from, to), term(b, from, to), term(c, from, to))
            }
            Formula::Not(g) => Formula::not(walk(g, from, to)),
            Formula::And(a, b) => Formula::and(walk(a, from, to), walk(b, from, to)),
            Formula::Or(a, b) => Formula::or(walk(a, from, to), walk(b, from, to)),
            Formula::Implies(a, b) => Formula::implies(walk(a, from, to), walk(b, from, to)),
            Formula::Iff(a, b) => Formula::iff(walk(a, from, to), walk(b, from, to)),
            Formula::ForallSet(n, g) => Formula::ForallSet(n.clone(), Box::new(walk(g, from, to))),
            Formula::ExistsSet(n, g) => Formula::ExistsSet(n.clone(), Box::new(walk(g, from, to))),
            Formula::ForallThing(n, g) => {
                Formula::ForallThing(n.clone(), Box::new(walk(g, from, to)))
            }
            Formula::ExistsThing(n, g) => {
                Formula::ExistsThing(n.clone(), Box::new(walk(g, from, to)))
            }
            Formula::ForallFun { graph, domain, body } => {
                if graph == from {
                    // Shadowed by an inner homonymous binder; leave intact.
                    Formula::ForallFun {
                        graph: graph.clone(),
                        domain: term(domain, from, to),
                        body: body.clone(),
                    }
                } else {
                    Formula::ForallFun {
                        graph: graph.clone(),
                        domain: term(domain, from, to),
                        body: Box::new(walk(body, from, to)),
                    }
                }
            }
            Formula::ExistsFun { graph, domain, body } => {
                if graph == from {
                    Formula::ExistsFun {
                        graph: graph.clone(),
                        domain: term(domain, from, to),
                        body: body.clone(),
                    }
                } else {
                    Formula::ExistsFun {
                        graph: graph.clone(),
                        domain: term(domain, from, to),
                        body: Box::new(walk(body, from, to)),
                    }
                }
            }
            Formula::MultiForallUr { family, index, index_set, body } => {
                let body2 = if family == from { body.clone() } else { Box::new(walk(body, from, to)) };
                Formula::MultiForallUr {
                    family: family.clone(),
                    index: index.clone(),
                    index_set: term(index_set, from, to),
                    body: body2,
                }
            }
            Formula::ConjOp { index, index_set, body } => Formula::ConjOp {
                index: index.clone(),
                index_set: term(index_set, from, to),
                body: Box::new(walk(body, from, to)),
            },
        }
    }
    walk(f, from, to)
}

#[allow(clippy::only_used_in_recursion)]
fn subst_term(t: &Term, target: &Target, replacement: &Term, used: &mut BTreeSet<Name>) -> Term {
    match (t, target) {
        (Term::SetVar(n), Target::Simple { name, is_set: true }) if n == name => replacement.clone(),
        (Term::ThingVar(n), Target::Simple { name, is_set: false }) if n == name => {
            replacement.clone()
        }
        (Term::FunComposite { graph, domain }, _) => {
            let domain2 = subst_term(domain, target, replacement, used);
            match (graph.as_ref(), target) {
                (Term::GraphVar(n), Target::Fun { name, domain: d }) if n == name && domain.as_ref() == d => {
                    replacement.clone()
                }
                (Term::GraphVar(n), Target::Family { name }) if n == name => {
                    Term::composite(replacement.clone(), domain2)
                }
                _ => Term::composite(subst_term(graph, target, replacement, used), domain2),
            }
        }
        _ => {
            let rebuild = |ts: Vec<Term>| ts;
            match t {
                Term::Successor(a) => Term::succ(subst_term(a, target, replacement, used)),
                Term::Pair(a, b) => Term::pair(
                    subst_term(a, target, replacement, used),
                    subst_term(b, target, replacement, used),
                ),
                Term::ImageApp { fun, arg } => Term::image(
                    subst_term(fun, target, replacement, used),
                    subst_term(arg, target, replacement, used),
                ),
                Term::SetLiteral(ts) => Term::SetLiteral(rebuild(
                    ts.iter().map(|x| subst_term(x, target, replacement, used)).collect(),
                )),
                Term::Matrix { rows, cols, entries } => Term::Matrix {
                    rows: *rows,
                    cols: *cols,
                    entries: entries
                        .iter()
                        .map(|x| subst_term(x, target, replacement, used))
                        .collect(),
                },
                Term::Exponent { base, exp } => Term::exponent(
                    subst_term(base, target, replacement, used),
                    subst_term(exp, target, replacement, used),
                ),
                other => other.clone(),
            }
        }
    }
}
