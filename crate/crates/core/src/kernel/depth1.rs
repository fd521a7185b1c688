//! Bounded one-step closure: everything derivable from a premise set by a
//! single application of the selected rules.
//!
//! Instantiating rules draw terms from the supplied finite pool, and the
//! conjunction- and disjunction-introduction rules are restricted to
//! atomic operands; without these bounds a single step would be infinite
//! or would overwhelm any saturation cap. TAUT is a checking rule, not a
//! generating one, and contributes nothing here.

use super::RuleId;
use crate::syntax::{
    canonicalize, enumerable_elements, free_variables, substitute, substitute_fun_family,
    Formula, Name, Sort, Term,
};
use std::collections::{BTreeMap, BTreeSet};

/// All formulas obtainable from the premises by exactly one application of
/// one of the rules. Output is deduplicated up to alpha-equivalence and
/// sorted canonically; premises themselves are not included.
pub fn derivable_depth1(premises: &[Formula], rules: &[RuleId], pool: &[Term]) -> Vec<Formula> {
    let mut out: BTreeMap<Formula, Formula> = BTreeMap::new();
    let mut add = |f: Formula| {
        let key = canonicalize(&f);
        out.entry(key).or_insert(f);
    };
    let premise_keys: BTreeSet<Formula> = premises.iter().map(canonicalize).collect();

    for rule in rules {
        match rule {
            RuleId::Mp => {
                for imp in premises {
                    if let Formula::Implies(p, q) = imp {
                        let pk = canonicalize(p);
                        if premise_keys.contains(&pk) {
                            add((**q).clone());
                        }
                    }
                }
            }
            RuleId::AndI => {
                for a in premises.iter().filter(|f| atomic_like(f)) {
                    for b in premises.iter().filter(|f| atomic_like(f)) {
                        add(Formula::and(a.clone(), b.clone()));
                    }
                }
            }
            RuleId::AndE => {
                for f in premises {
                    if let Formula::And(a, b) = f {
                        add((**a).clone());
                        add((**b).clone());
                    }
                }
            }
            RuleId::OrI => {
                for a in premises {
                    for b in premises.iter().filter(|f| atomic_like(f)) {
                        add(Formula::or(a.clone(), b.clone()));
                        add(Formula::or(b.clone(), a.clone()));
                    }
                }
            }
            RuleId::NotE => {
                for f in premises {
                    if let Formula::Not(inner) = f {
                        if let Formula::Not(core) = inner.as_ref() {
                            add((**core).clone());
                        }
                    }
                }
            }
            RuleId::Taut => {}
            RuleId::UnivI | RuleId::I5NsQuantI => {
                let want_ns = matches!(rule, RuleId::I5NsQuantI);
                for f in premises {
                    if f.has_nonstandard() != want_ns {
                        continue;
                    }
                    for (name, sort) in free_variables(f) {
                        match sort {
                            Sort::Set => add(Formula::ForallSet(name, Box::new(f.clone()))),
                            Sort::Thing => add(Formula::ForallThing(name, Box::new(f.clone()))),
                            _ => {}
                        }
                    }
                    // Existential introduction over pool terms.
                    for t in pool {
                        for g in abstract_over(f, t) {
                            if g.has_nonstandard() == want_ns || want_ns {
                                add(g);
                            }
                        }
                    }
                }
            }
            RuleId::UnivE | RuleId::I6NsQuantE => {
                let want_ns = matches!(rule, RuleId::I6NsQuantE);
                for f in premises {
                    if f.has_nonstandard() != want_ns {
                        continue;
                    }
                    match f {
                        Formula::ForallSet(x, body) => {
                            for t in pool.iter().filter(|t| t.sort().fits(&Sort::Set)) {
                                if let Ok(inst) = substitute(body, &Term::SetVar(x.clone()), t) {
                                    add(inst);
                                }
                            }
                        }
                        Formula::ForallThing(x, body) => {
                            for t in pool.iter().filter(|t| t.sort().fits(&Sort::Thing)) {
                                if let Ok(inst) = substitute(body, &Term::ThingVar(x.clone()), t) {
                                    add(inst);
                                }
                            }
                        }
                        Formula::ForallFun { graph, domain, body } => {
                            for t in pool {
                                let ok = match t {
                                    Term::FunComposite { domain: d, .. } => d.as_ref() == domain,
                                    Term::InactiveFn => *domain == Term::EmptySet,
                                    _ => false,
                                };
                                if ok {
                                    add(crate::syntax::substitute_fun(body, graph, domain, t));
                                }
                            }
                        }
                        _ => {}
                    }
                }
            }
            RuleId::ExistI => {
                for f in premises {
                    if f.has_nonstandard() {
                        continue;
                    }
                    for t in pool {
                        for g in abstract_over(f, t) {
                            add(g);
                        }
                    }
                }
            }
            RuleId::RuleC => {
                let mut used: BTreeSet<Name> = BTreeSet::new();
                for f in premises {
                    for n in f.constant_names() {
                        used.insert(n);
                    }
                }
                let mut counter = 0usize;
                let mut fresh = || loop {
                    counter += 1;
                    let cand = format!("chat{counter}");
                    if !used.contains(&cand) {
                        return cand;
                    }
                };
                for f in premises {
                    if f.has_nonstandard() {
                        continue;
                    }
                    match f {
                        Formula::ExistsSet(x, body) => {
                            let k = fresh();
                            if let Ok(inst) =
                                substitute(body, &Term::SetVar(x.clone()), &Term::SetConst(k))
                            {
                                add(inst);
                            }
                        }
                        Formula::ExistsThing(x, body) => {
                            let k = fresh();
                            if let Ok(inst) =
                                substitute(body, &Term::ThingVar(x.clone()), &Term::ThingConst(k))
                            {
                                add(inst);
                            }
                        }
                        Formula::ExistsFun { graph, domain, body } => {
                            let k = fresh();
                            add(crate::syntax::substitute_fun(
                                body,
                                graph,
                                domain,
                                &Term::fun_const(&k, domain.clone()),
                            ));
                        }
                        _ => {}
                    }
                }
            }
            RuleId::I1ConjI => {
                for conj in family_introductions(premises) {
                    add(conj);
                }
            }
            RuleId::I2ConjE => {
                for f in premises {
                    if let Formula::ConjOp { index, index_set, body } = f {
                        let var = Term::ThingVar(index.clone());
                        let mut elems = enumerable_elements(index_set).unwrap_or_default();
                        for t in pool {
                            let mem = Formula::Mem(t.clone(), index_set.clone());
                            let mk = canonicalize(&mem);
                            if premise_keys.contains(&mk) {
                                elems.push(t.clone());
                            }
                        }
                        for e in elems {
                            if let Ok(inst) = substitute(body, &var, &e) {
                                add(inst);
                            }
                        }
                    }
                }
            }
            RuleId::I3MultiI => {
                for f in premises {
                    let fams: Vec<Name> = free_variables(f)
                        .into_iter()
                        .filter(|(_, s)| matches!(s, Sort::Function(_)))
                        .map(|(n, _)| n)
                        .collect();
                    for fam in fams {
                        for s in pool.iter().filter(|t| t.sort() == Sort::Set) {
                            add(Formula::MultiForallUr {
                                family: fam.clone(),
                                index: "xi".to_string(),
                                index_set: s.clone(),
                                body: Box::new(f.clone()),
                            });
                        }
                    }
                }
            }
            RuleId::I4MultiE => {
                for f in premises {
                    if let Formula::MultiForallUr { family, index_set, body, .. } = f {
                        if enumerable_elements(index_set).is_some() {
                            add(substitute_fun_family(body, family, "chat0"));
                        }
                    }
                }
            }
        }
    }
    out.into_values().collect()
}

fn atomic_like(f: &Formula) -> bool {
    match f {
        Formula::Eq(_, _) | Formula::Mem(_, _) | Formula::Surj(_, _, _) | Formula::Maps(_, _, _) => {
            true
        }
        Formula::Not(inner) => matches!(
            inner.as_ref(),
            Formula::Eq(_, _) | Formula::Mem(_, _) | Formula::Surj(_, _, _) | Formula::Maps(_, _, _)
        ),
        _ => false,
    }
}

/// Existential abstractions of a formula over a term: replace every
/// occurrence of `t` by a fresh variable and bind it.
fn abstract_over(f: &Formula, t: &Term) -> Vec<Formula> {
    if !contains_term(f, t) {
        return vec![];
    }
    let mut out = Vec::new();
    let used: BTreeSet<Name> = free_variables(f).into_iter().map(|(n, _)| n).collect();
    if t.sort().fits(&Sort::Set) {
        let v = fresh_name("Z", &used);
        let g = replace_term(f, t, &Term::SetVar(v.clone()));
        out.push(Formula::ExistsSet(v, Box::new(g)));
    }
    let v = fresh_name("zeta", &used);
    let g = replace_term(f, t, &Term::ThingVar(v.clone()));
    out.push(Formula::ExistsThing(v, Box::new(g)));
    out
}

fn fresh_name(base: &str, used: &BTreeSet<Name>) -> Name {
    if !used.contains(base) {
        return base.to_string();
    }
    for i in 1.. {
        let cand = format!("{base}{i}");
        if !used.contains(&cand) {
            return cand;
        }
    }
    unreachable!()
}

fn contains_term(f: &Formula, t: &Term) -> bool {
    fn term_has(hay: &Term, t: &Term) -> bool {
        hay == t || hay.children().iter().any(|c| term_has(c, t))
    }
    f.terms().iter().any(|x| term_has(x, t)) || f.subformulas().iter().any(|g| contains_term(g, t))
}

/// Replace every occurrence of a closed term; binders cannot capture it.
fn replace_term(f: &Formula, from: &Term, to: &Term) -> Formula {
    fn term(x: &Term, from: &Term, to: &Term) -> Term {
        if x == from {
            return to.clone();
        }
        match x {
            Term::FunComposite { graph, domain } => {
                Term::composite(term(graph, from, to), term(domain, from, to))
            }
            Term::Successor(a) => Term::succ(term(a, from, to)),
            Term::Pair(a, b) => Term::pair(term(a, from, to), term(b, from, to)),
            Term::ImageApp { fun, arg } => Term::image(term(fun, from, to), term(arg, from, to)),
            Term::SetLiteral(ts) => {
                Term::SetLiteral(ts.iter().map(|e| term(e, from, to)).collect())
            }
            Term::Matrix { rows, cols, entries } => Term::Matrix {
                rows: *rows,
                cols: *cols,
                entries: entries.iter().map(|e| term(e, from, to)).collect(),
            },
            Term::Exponent { base, exp } => {
                Term::exponent(term(base, from, to), term(exp, from, to))
            }
            other => other.clone(),
        }
    }
    fn walk(f: &Formula, from: &Term, to: &Term) -> Formula {
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
            Formula::ForallFun { graph, domain, body } => Formula::ForallFun {
                graph: graph.clone(),
                domain: term(domain, from, to),
                body: Box::new(walk(body, from, to)),
            },
            Formula::ExistsFun { graph, domain, body } => Formula::ExistsFun {
                graph: graph.clone(),
                domain: term(domain, from, to),
                body: Box::new(walk(body, from, to)),
            },
            Formula::MultiForallUr { family, index, index_set, body } => Formula::MultiForallUr {
                family: family.clone(),
                index: index.clone(),
                index_set: term(index_set, from, to),
                body: Box::new(walk(body, from, to)),
            },
            Formula::ConjOp { index, index_set, body } => Formula::ConjOp {
                index: index.clone(),
                index_set: term(index_set, from, to),
                body: Box::new(walk(body, from, to)),
            },
        }
    }
    walk(f, from, to)
}

/// Conjunctive-operator introductions: for every set literal occurring in
/// the premises, try to read the mapping atoms as a complete family over
/// that literal. The body template comes from anti-unifying two member
/// atoms (or, for singleton literals, from abstracting the element).
fn family_introductions(premises: &[Formula]) -> Vec<Formula> {
    let mut literals: Vec<Term> = Vec::new();
    for f in premises {
        collect_literals(f, &mut literals);
    }
    literals.sort();
    literals.dedup();
    let atoms: Vec<&Formula> =
        premises.iter().filter(|f| matches!(f, Formula::Maps(_, _, _))).collect();
    let atom_keys: BTreeSet<Formula> = atoms.iter().map(|f| canonicalize(f)).collect();
    let index = "xi".to_string();
    let var = Term::ThingVar(index.clone());
    let mut out = Vec::new();
    let consider = |template: Formula, lit: &Term, elems: &[Term], out: &mut Vec<Formula>| {
        let complete = elems.iter().all(|e| {
            substitute(&template, &var, e)
                .map(|inst| atom_keys.contains(&canonicalize(&inst)))
                .unwrap_or(false)
        });
        if complete {
            out.push(Formula::ConjOp {
                index: index.clone(),
                index_set: lit.clone(),
                body: Box::new(template),
            });
        }
    };
    for lit in &literals {
        let elems = match enumerable_elements(lit) {
            Some(e) if !e.is_empty() && e.iter().all(|t| t.is_closed()) => e,
            _ => continue,
        };
        if let [single] = elems.as_slice() {
            for atom in &atoms {
                if contains_term(atom, single) {
                    let template = replace_term(atom, single, &var);
                    consider(template, lit, &elems, &mut out);
                }
            }
            continue;
        }
        let (e1, e2) = (&elems[0], &elems[1]);
        for a in &atoms {
            for b in &atoms {
                if let Some(template) = anti_unify(a, b, e1, e2, &var) {
                    // A template without the index variable cannot match one
                    // distinct premise per element.
                    if contains_term(&template, &var) {
                        consider(template, lit, &elems, &mut out);
                    }
                }
            }
        }
    }
    out
}

/// Most specific template `p` with `p[xi:=e1] = a` and `p[xi:=e2] = b`.
fn anti_unify(a: &Formula, b: &Formula, e1: &Term, e2: &Term, var: &Term) -> Option<Formula> {
    match (a, b) {
        (Formula::Maps(x1, y1, z1), Formula::Maps(x2, y2, z2)) => Some(Formula::Maps(
            anti_unify_term(x1, x2, e1, e2, var)?,
            anti_unify_term(y1, y2, e1, e2, var)?,
            anti_unify_term(z1, z2, e1, e2, var)?,
        )),
        _ => None,
    }
}

fn anti_unify_term(a: &Term, b: &Term, e1: &Term, e2: &Term, var: &Term) -> Option<Term> {
    if a == b {
        return Some(a.clone());
    }
    if a == e1 && b == e2 {
        return Some(var.clone());
    }
    if std::mem::discriminant(a) != std::mem::discriminant(b) {
        return None;
    }
    let (ca, cb) = (a.children(), b.children());
    if ca.len() != cb.len() || ca.is_empty() {
        return None;
    }
    let kids: Option<Vec<Term>> = ca
        .iter()
        .zip(&cb)
        .map(|(x, y)| anti_unify_term(x, y, e1, e2, var))
        .collect();
    let mut kids = kids?;
    Some(match a {
        Term::FunComposite { .. } => {
            let g = kids.remove(0);
            Term::composite(g, kids.remove(0))
        }
        Term::Successor(_) => Term::succ(kids.remove(0)),
        Term::Pair(_, _) => {
            let x = kids.remove(0);
            Term::pair(x, kids.remove(0))
        }
        Term::ImageApp { .. } => {
            let f = kids.remove(0);
            Term::image(f, kids.remove(0))
        }
        Term::SetLiteral(_) => Term::SetLiteral(kids),
        Term::Matrix { rows, cols, .. } => Term::Matrix { rows: *rows, cols: *cols, entries: kids },
        Term::Exponent { .. } => {
            let base = kids.remove(0);
            Term::exponent(base, kids.remove(0))
        }
        _ => return None,
    })
}

fn collect_literals(f: &Formula, out: &mut Vec<Term>) {
    fn term(t: &Term, out: &mut Vec<Term>) {
        if matches!(t, Term::SetLiteral(_)) {
            out.push(t.clone());
        }
        for c in t.children() {
            term(c, out);
        }
    }
    for t in f.terms() {
        term(t, out);
    }
    for g in f.subformulas() {
        collect_literals(g, out);
    }
}
