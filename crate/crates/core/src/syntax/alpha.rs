//! Alpha-equivalence via canonical renaming of bound variables.
//!
//! Bound names are rewritten to `%0`, `%1`, ... in traversal order. The `%`
//! prefix cannot appear in parsed names, so canonical forms never collide
//! with free variables. Two formulas are alpha-equivalent iff their
//! canonical forms are structurally equal.

use super::{Formula, Name, Term};

/// One canonical-renaming scope entry.
#[derive(Clone, Debug)]
enum Entry {
    Set(Name, Name),
    Thing(Name, Name),
    /// (name, canonical domain) -> canonical name
    Fun(Name, Term, Name),
    Family(Name, Name),
}

#[derive(Default)]
struct Renamer {
    scope: Vec<Entry>,
    next: usize,
}

impl Renamer {
    fn fresh(&mut self) -> Name {
        let n = format!("%{}", self.next);
        self.next += 1;
        n
    }

    fn lookup_set(&self, n: &str) -> Option<Name> {
        self.scope.iter().rev().find_map(|e| match e {
            Entry::Set(from, to) if from == n => Some(to.clone()),
            _ => None,
        })
    }

    fn lookup_thing(&self, n: &str) -> Option<Name> {
        self.scope.iter().rev().find_map(|e| match e {
            Entry::Thing(from, to) if from == n => Some(to.clone()),
            _ => None,
        })
    }

    /// Innermost match: family binders capture any domain, function binders
    /// only their own canonical domain.
    fn lookup_fun(&self, n: &str, canon_domain: &Term) -> Option<Name> {
        self.scope.iter().rev().find_map(|e| match e {
            Entry::Family(from, to) if from == n => Some(to.clone()),
            Entry::Fun(from, d, to) if from == n && d == canon_domain => Some(to.clone()),
            _ => None,
        })
    }
}

/// Canonical alpha-normal form: bound names renamed in traversal order.
pub fn canonicalize(f: &Formula) -> Formula {
    let mut r = Renamer::default();
    canon_formula(f, &mut r)
}

/// True iff the two formulas are identical up to renaming of bound variables.
pub fn alpha_equivalent(a: &Formula, b: &Formula) -> bool {
    canonicalize(a) == canonicalize(b)
}

fn canon_formula(f: &Formula, r: &mut Renamer) -> Formula {
    match f {
        Formula::Eq(a, b) => Formula::Eq(canon_term(a, r), canon_term(b, r)),
        Formula::Mem(a, b) => Formula::Mem(canon_term(a, r), canon_term(b, r)),
        Formula::Surj(a, b, c) => {
            Formula::Surj(canon_term(a, r), canon_term(b, r), canon_term(c, r))
        }
        Formula::Maps(a, b, c) => {
            Formula::Maps(canon_term(a, r), canon_term(b, r), canon_term(c, r))
        }
        Formula::Not(g) => Formula::not(canon_formula(g, r)),
        Formula::And(a, b) => Formula::and(canon_formula(a, r), canon_formula(b, r)),
        Formula::Or(a, b) => Formula::or(canon_formula(a, r), canon_formula(b, r)),
        Formula::Implies(a, b) => Formula::implies(canon_formula(a, r), canon_formula(b, r)),
        Formula::Iff(a, b) => Formula::iff(canon_formula(a, r), canon_formula(b, r)),
        Formula::ForallSet(n, g) | Formula::ExistsSet(n, g) => {
            let c = r.fresh();
            r.scope.push(Entry::Set(n.clone(), c.clone()));
            let g2 = canon_formula(g, r);
            r.scope.pop();
            if matches!(f, Formula::ForallSet(_, _)) {
                Formula::ForallSet(c, Box::new(g2))
            } else {
                Formula::ExistsSet(c, Box::new(g2))
            }
        }
        Formula::ForallThing(n, g) | Formula::ExistsThing(n, g) => {
            let c = r.fresh();
            r.scope.push(Entry::Thing(n.clone(), c.clone()));
            let g2 = canon_formula(g, r);
            r.scope.pop();
            if matches!(f, Formula::ForallThing(_, _)) {
                Formula::ForallThing(c, Box::new(g2))
            } else {
                Formula::ExistsThing(c, Box::new(g2))
            }
        }
        Formula::ForallFun { graph, domain, body } | Formula::ExistsFun { graph, domain, body } => {
            let domain_c = canon_term(domain, r);
            let c = r.fresh();
            r.scope.push(Entry::Fun(graph.clone(), domain_c.clone(), c.clone()));
            let body2 = canon_formula(body, r);
            r.scope.pop();
            if matches!(f, Formula::ForallFun { .. }) {
                Formula::ForallFun { graph: c, domain: domain_c, body: Box::new(body2) }
            } else {
                Formula::ExistsFun { graph: c, domain: domain_c, body: Box::new(body2) }
            }
        }
        Formula::MultiForallUr { family, index, index_set, body } => {
            let index_set_c = canon_term(index_set, r);
            let cf = r.fresh();
            let ci = r.fresh();
            r.scope.push(Entry::Family(family.clone(), cf.clone()));
            r.scope.push(Entry::Thing(index.clone(), ci.clone()));
            let body2 = canon_formula(body, r);
            r.scope.pop();
            r.scope.pop();
            Formula::MultiForallUr {
                family: cf,
                index: ci,
                index_set: index_set_c,
                body: Box::new(body2),
            }
        }
        Formula::ConjOp { index, index_set, body } => {
            let index_set_c = canon_term(index_set, r);
            let ci = r.fresh();
            r.scope.push(Entry::Thing(index.clone(), ci.clone()));
            let body2 = canon_formula(body, r);
            r.scope.pop();
            Formula::ConjOp { index: ci, index_set: index_set_c, body: Box::new(body2) }
        }
    }
}

fn canon_term(t: &Term, r: &mut Renamer) -> Term {
    match t {
        Term::SetVar(n) => Term::SetVar(r.lookup_set(n).unwrap_or_else(|| n.clone())),
        Term::ThingVar(n) => Term::ThingVar(r.lookup_thing(n).unwrap_or_else(|| n.clone())),
        Term::FunComposite { graph, domain } => {
            let domain_c = canon_term(domain, r);
            let graph_c = match graph.as_ref() {
                Term::GraphVar(n) => {
                    Term::GraphVar(r.lookup_fun(n, &domain_c).unwrap_or_else(|| n.clone()))
                }
                other => canon_term(other, r),
            };
            Term::composite(graph_c, domain_c)
        }
        Term::Successor(a) => Term::succ(canon_term(a, r)),
        Term::Pair(a, b) => Term::pair(canon_term(a, r), canon_term(b, r)),
        Term::ImageApp { fun, arg } => Term::image(canon_term(fun, r), canon_term(arg, r)),
        Term::SetLiteral(ts) => Term::SetLiteral(ts.iter().map(|x| canon_term(x, r)).collect()),
        Term::Matrix { rows, cols, entries } => Term::Matrix {
            rows: *rows,
            cols: *cols,
            entries: entries.iter().map(|x| canon_term(x, r)).collect(),
        },
        Term::Exponent { base, exp } => Term::exponent(canon_term(base, r), canon_term(exp, r)),
        other => other.clone(),
    }
}
