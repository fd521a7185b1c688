//! Interpretation of the standard set/function fragment inside the
//! extended 1x2 set-matrix language.
//!
//! The map is syntax-directed and total on its domain: constants go to
//! their matrix-side counterparts (the inactive function becomes the empty
//! matrix), set and thing variables are kept, a function composite `f_X`
//! becomes the matrix `[f X]`, atoms and connectives are compositional,
//! and a function quantifier becomes a set quantifier over the graph
//! guarded by the existence of the corresponding matrix:
//! `all f_{X} . P` turns into `all f . (ex gamma . gamma = [f X]) -> P'`;
//! the existential case uses a conjunction instead of the implication.

use crate::syntax::{free_variables, well_formed, Formula, LanguageId, Name, Sort, Term};
use std::collections::BTreeSet;
use thiserror::Error;

/// One translated formula with a per-node audit trail.
#[derive(Clone, Debug)]
pub struct TranslationTrace {
    pub input: Formula,
    pub output: Formula,
    /// One entry per input node (terms and formulas), in path order.
    pub clause_log: Vec<ClauseUse>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseUse {
    /// Node path: child indices, terms first, then subformulas.
    pub path: Vec<usize>,
    pub clause: &'static str,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TranslateError {
    #[error("input contains a nonstandard construct at {0:?}")]
    Nonstandard(Vec<usize>),
    #[error("input is not in the standard set/function language: {0}")]
    NotSetFun(String),
    #[error(
        "function composite has domain variable `{var}` that is neither bound by an enclosing \
         quantifier nor a constant (at {path:?})"
    )]
    UnboundDomain { path: Vec<usize>, var: Name },
    #[error("matrix-language output failed the language check: {0}")]
    OutputIllFormed(String),
}

struct Tx {
    log: Vec<ClauseUse>,
    /// Set/thing variable names bound by enclosing quantifiers.
    bound: Vec<Name>,
    /// Composite name -> chosen graph variable, innermost last.
    composites: Vec<(Name, Name)>,
    /// Set/thing variable names occurring anywhere in the input.
    var_names: BTreeSet<Name>,
    /// Names already taken for generated variables.
    used: BTreeSet<Name>,
}

impl Tx {
    fn record(&mut self, path: &[usize], clause: &'static str) {
        self.log.push(ClauseUse { path: path.to_vec(), clause });
    }

    fn fresh(&mut self, base: &str) -> Name {
        if !self.used.contains(base) {
            self.used.insert(base.to_string());
            return base.to_string();
        }
        for i in 1.. {
            let cand = format!("{base}{i}");
            if !self.used.contains(&cand) {
                self.used.insert(cand.clone());
                return cand;
            }
        }
        unreachable!()
    }

    /// Graph variable for a composite name: reuse the name when safe,
    /// rename on collision with any set/thing variable in scope.
    fn graph_name(&mut self, composite: &str) -> Name {
        let collides = self.var_names.contains(composite)
            || self.bound.iter().any(|b| b == composite)
            || self.composites.iter().any(|(_, g)| g == composite);
        if collides {
            self.fresh(composite)
        } else {
            self.used.insert(composite.to_string());
            composite.to_string()
        }
    }

    fn composite_target(&self, name: &str) -> Option<Name> {
        self.composites.iter().rev().find(|(c, _)| c == name).map(|(_, g)| g.clone())
    }
}

/// Translate a standard set/function formula into the extended matrix
/// language, with a clause log covering every input node exactly once.
pub fn translate(input: &Formula) -> Result<TranslationTrace, TranslateError> {
    let wf = well_formed(input, LanguageId::LtStandard);
    if let Some(d) = wf.first() {
        if d.message.contains("conjunctive operator") || d.message.contains("multiple quantifier")
        {
            return Err(TranslateError::Nonstandard(d.path.clone()));
        }
        return Err(TranslateError::NotSetFun(d.to_string()));
    }
    let (var_names, all) = name_inventory(input);
    let mut tx = Tx {
        log: Vec::new(),
        bound: Vec::new(),
        composites: Vec::new(),
        var_names,
        used: all,
    };
    let mut path = Vec::new();
    let output = tx_formula(input, &mut tx, &mut path)?;
    let diags = well_formed(&output, LanguageId::Lsmt1x2Plus4);
    if !diags.is_empty() {
        return Err(TranslateError::OutputIllFormed(diags[0].to_string()));
    }
    Ok(TranslationTrace { input: input.clone(), output, clause_log: tx.log })
}

/// Translate a list of named formulas, as used for whole catalogs.
pub fn translate_theory(
    items: &[(String, Formula)],
) -> Result<Vec<(String, TranslationTrace)>, TranslateError> {
    items.iter().map(|(n, f)| translate(f).map(|t| (n.clone(), t))).collect()
}

/// (set/thing variable names, all names) of the input.
fn name_inventory(f: &Formula) -> (BTreeSet<Name>, BTreeSet<Name>) {
    let mut vars = BTreeSet::new();
    let mut all = BTreeSet::new();
    fn term(t: &Term, vars: &mut BTreeSet<Name>, all: &mut BTreeSet<Name>) {
        match t {
            Term::SetVar(n) | Term::ThingVar(n) => {
                vars.insert(n.clone());
                all.insert(n.clone());
            }
            Term::GraphVar(n) | Term::SetConst(n) | Term::ThingConst(n) => {
                all.insert(n.clone());
            }
            _ => {}
        }
        for c in t.children() {
            term(c, vars, all);
        }
    }
    fn walk(f: &Formula, vars: &mut BTreeSet<Name>, all: &mut BTreeSet<Name>) {
        for t in f.terms() {
            term(t, vars, all);
        }
        match f {
            Formula::ForallSet(n, _)
            | Formula::ExistsSet(n, _)
            | Formula::ForallThing(n, _)
            | Formula::ExistsThing(n, _) => {
                vars.insert(n.clone());
                all.insert(n.clone());
            }
            Formula::ForallFun { graph, .. } | Formula::ExistsFun { graph, .. } => {
                all.insert(graph.clone());
            }
            _ => {}
        }
        for g in f.subformulas() {
            walk(g, vars, all);
        }
    }
    walk(f, &mut vars, &mut all);
    (vars, all)
}

fn tx_formula(f: &Formula, tx: &mut Tx, path: &mut Vec<usize>) -> Result<Formula, TranslateError> {
    match f {
        Formula::Eq(a, b) => {
            tx.record(path, "atom-eq");
            let a2 = tx_term_child(a, tx, path, 0)?;
            let b2 = tx_term_child(b, tx, path, 1)?;
            Ok(Formula::Eq(a2, b2))
        }
        Formula::Mem(a, b) => {
            tx.record(path, "atom-mem");
            let a2 = tx_term_child(a, tx, path, 0)?;
            let b2 = tx_term_child(b, tx, path, 1)?;
            Ok(Formula::Mem(a2, b2))
        }
        Formula::Surj(a, b, c) => {
            tx.record(path, "atom-surj");
            let a2 = tx_term_child(a, tx, path, 0)?;
            let b2 = tx_term_child(b, tx, path, 1)?;
            let c2 = tx_term_child(c, tx, path, 2)?;
            Ok(Formula::Surj(a2, b2, c2))
        }
        Formula::Maps(a, b, c) => {
            tx.record(path, "atom-maps");
            let a2 = tx_term_child(a, tx, path, 0)?;
            let b2 = tx_term_child(b, tx, path, 1)?;
            let c2 = tx_term_child(c, tx, path, 2)?;
            Ok(Formula::Maps(a2, b2, c2))
        }
        Formula::Not(g) => {
            tx.record(path, "connective");
            path.push(0);
            let g2 = tx_formula(g, tx, path)?;
            path.pop();
            Ok(Formula::not(g2))
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            tx.record(path, "connective");
            path.push(0);
            let a2 = tx_formula(a, tx, path)?;
            path.pop();
            path.push(1);
            let b2 = tx_formula(b, tx, path)?;
            path.pop();
            Ok(match f {
                Formula::And(_, _) => Formula::and(a2, b2),
                Formula::Or(_, _) => Formula::or(a2, b2),
                Formula::Implies(_, _) => Formula::implies(a2, b2),
                _ => Formula::iff(a2, b2),
            })
        }
        Formula::ForallSet(n, g) | Formula::ExistsSet(n, g) => {
            tx.record(path, "set-quantifier");
            tx.bound.push(n.clone());
            path.push(0);
            let g2 = tx_formula(g, tx, path)?;
            path.pop();
            tx.bound.pop();
            Ok(if matches!(f, Formula::ForallSet(_, _)) {
                Formula::ForallSet(n.clone(), Box::new(g2))
            } else {
                Formula::ExistsSet(n.clone(), Box::new(g2))
            })
        }
        Formula::ForallThing(n, g) | Formula::ExistsThing(n, g) => {
            tx.record(path, "thing-quantifier");
            tx.bound.push(n.clone());
            path.push(0);
            let g2 = tx_formula(g, tx, path)?;
            path.pop();
            tx.bound.pop();
            Ok(if matches!(f, Formula::ForallThing(_, _)) {
                Formula::ForallThing(n.clone(), Box::new(g2))
            } else {
                Formula::ExistsThing(n.clone(), Box::new(g2))
            })
        }
        Formula::ForallFun { graph, domain, body } | Formula::ExistsFun { graph, domain, body } => {
            let forall = matches!(f, Formula::ForallFun { .. });
            tx.record(path, if forall { "fun-quantifier-all" } else { "fun-quantifier-ex" });
            check_domain(domain, tx, path, 0)?;
            // Domain lives in the enclosing scope.
            let domain2 = tx_term_child(domain, tx, path, 0)?;
            let gname = tx.graph_name(graph);
            let guard_name = tx.fresh("gamma");
            let guard = Formula::exists_thing(
                &guard_name,
                Formula::Eq(
                    Term::ThingVar(guard_name.clone()),
                    Term::matrix_1x2(Term::SetVar(gname.clone()), domain2),
                ),
            );
            tx.bound.push(gname.clone());
            tx.composites.push((graph.clone(), gname.clone()));
            path.push(1);
            let body2 = tx_formula(body, tx, path)?;
            path.pop();
            tx.composites.pop();
            tx.bound.pop();
            Ok(if forall {
                Formula::ForallSet(gname, Box::new(Formula::implies(guard, body2)))
            } else {
                Formula::ExistsSet(gname, Box::new(Formula::and(guard, body2)))
            })
        }
        Formula::MultiForallUr { .. } | Formula::ConjOp { .. } => {
            Err(TranslateError::Nonstandard(path.clone()))
        }
    }
}

/// A composite's domain must be made of bound variables and constants.
fn check_domain(
    domain: &Term,
    tx: &Tx,
    path: &[usize],
    child: usize,
) -> Result<(), TranslateError> {
    let probe = Formula::Eq(domain.clone(), Term::EmptySet);
    for (n, s) in free_variables(&probe) {
        if matches!(s, Sort::Graph | Sort::Function(_)) {
            continue;
        }
        if !tx.bound.contains(&n) {
            let mut p = path.to_vec();
            p.push(child);
            return Err(TranslateError::UnboundDomain { path: p, var: n });
        }
    }
    Ok(())
}

fn tx_term_child(
    t: &Term,
    tx: &mut Tx,
    path: &[usize],
    child: usize,
) -> Result<Term, TranslateError> {
    let mut p = path.to_vec();
    p.push(child);
    tx_term(t, tx, &mut p)
}

fn tx_term(t: &Term, tx: &mut Tx, path: &mut Vec<usize>) -> Result<Term, TranslateError> {
    let clause = match t {
        Term::EmptySet => "const-empty",
        Term::Omega => "const-ordinals",
        Term::InactiveFn => "const-inactive",
        Term::SetVar(_) | Term::SetConst(_) => "var-set",
        Term::ThingVar(_) | Term::ThingConst(_) => "var-thing",
        Term::FunComposite { .. } => "composite-to-matrix",
        Term::GraphVar(_) => "graph-slot",
        Term::Successor(_) => "term-successor",
        Term::Pair(_, _) => "term-pair",
        Term::ImageApp { .. } => "term-image",
        Term::SetLiteral(_) => "term-literal",
        Term::Exponent { .. } => "term-exponent",
        Term::EmptyMatrix | Term::Matrix { .. } => {
            return Err(TranslateError::NotSetFun("matrix term in input".into()))
        }
    };
    tx.record(path, clause);
    match t {
        Term::FunComposite { graph, domain } => {
            check_domain(domain, tx, path, 1)?;
            path.push(0);
            tx.record(path, "graph-slot");
            path.pop();
            path.push(1);
            let d2 = tx_term(domain, tx, path)?;
            path.pop();
            let g = match graph.as_ref() {
                Term::GraphVar(n) => match tx.composite_target(n) {
                    Some(target) => Term::SetVar(target),
                    None => Term::SetVar(n.clone()),
                },
                Term::SetConst(n) => Term::SetConst(n.clone()),
                _ => return Err(TranslateError::NotSetFun("malformed composite".into())),
            };
            Ok(Term::matrix_1x2(g, d2))
        }
        Term::InactiveFn => Ok(Term::EmptyMatrix),
        _ => {
            let mut out_children = Vec::new();
            for (i, c) in t.children().iter().enumerate() {
                path.push(i);
                out_children.push(tx_term(c, tx, path)?);
                path.pop();
            }
            Ok(rebuild(t, out_children))
        }
    }
}

fn rebuild(t: &Term, mut children: Vec<Term>) -> Term {
    match t {
        Term::Successor(_) => Term::succ(children.remove(0)),
        Term::Pair(_, _) => {
            let a = children.remove(0);
            Term::pair(a, children.remove(0))
        }
        Term::ImageApp { .. } => {
            let f = children.remove(0);
            Term::image(f, children.remove(0))
        }
        Term::SetLiteral(_) => Term::SetLiteral(children),
        Term::Exponent { .. } => {
            let b = children.remove(0);
            Term::exponent(b, children.remove(0))
        }
        other => other.clone(),
    }
}
