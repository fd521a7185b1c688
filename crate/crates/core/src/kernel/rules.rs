//! Verification of individual proof steps.

use super::taut;
use super::{Ctx, Justification, LogicAxiom, RuleId, SchemaArg, Step};
use crate::syntax::{
    alpha_equivalent, enumerable_elements, free_variables, substitute, substitute_fun,
    substitute_fun_family, Formula, Name, Sort, Term,
};
use crate::theories::{
    instantiate_smt_schema, replacement_in, separation_in, TheoryId,
};
use std::collections::BTreeSet;

pub(crate) fn verify(ctx: &Ctx, step: &Step) -> Result<(), String> {
    let is_rule_c =
        matches!(&step.justification, Justification::Rule { rule: RuleId::RuleC, .. });
    if !step.fresh_constants.is_empty() && !is_rule_c {
        return Err("fresh constants may only be introduced by RULE-C".into());
    }
    match &step.justification {
        Justification::Axiom { theory, name } => {
            if let Some(q) = theory {
                if !subsumed(*q, ctx.theory.id) {
                    return Err(format!(
                        "axiom qualifier {} is not available under {}",
                        q.as_str(),
                        ctx.theory.id.as_str()
                    ));
                }
            }
            let axiom = ctx
                .theory
                .lookup_axiom(name)
                .ok_or_else(|| format!("unknown axiom {}.{}", ctx.theory.id.as_str(), name))?;
            if alpha_equivalent(&step.formula, axiom) {
                Ok(())
            } else {
                Err(format!("formula does not match axiom {name}"))
            }
        }
        Justification::Schema { name, args } => check_schema(ctx, step, name, args),
        Justification::Logic(ax) => check_logic(*ax, &step.formula),
        Justification::Assume => Ok(()),
        Justification::Rule { premises, rule } => check_rule(ctx, step, *rule, premises),
    }
}

/// A theory may cite axioms of the theories it extends.
fn subsumed(cited: TheoryId, ambient: TheoryId) -> bool {
    cited == ambient
        || matches!((cited, ambient), (TheoryId::TInf0, TheoryId::T))
        || matches!((cited, ambient), (TheoryId::Smt1x2, TheoryId::Smt1x2Plus4))
}

fn check_schema(ctx: &Ctx, step: &Step, name: &str, args: &[SchemaArg]) -> Result<(), String> {
    if !ctx.theory.has_schema(name) {
        return Err(format!(
            "schema `{name}` is not available in {}",
            ctx.theory.id.as_str()
        ));
    }
    let matrix_side = ctx.theory.language.is_matrix();
    let instance = match name {
        "separation" => match args {
            [SchemaArg::Formula(phi)] => {
                separation_in(phi, matrix_side).map_err(|e| e.to_string())?
            }
            _ => return Err("separation takes one formula argument".into()),
        },
        "replacement" => match args {
            [SchemaArg::Formula(psi)] => {
                replacement_in(psi, matrix_side).map_err(|e| e.to_string())?
            }
            _ => return Err("replacement takes one formula argument".into()),
        },
        other => match args {
            [SchemaArg::Dim(m), SchemaArg::Dim(n)] => {
                instantiate_smt_schema(other, *m, *n).map_err(|e| e.to_string())?
            }
            _ => return Err(format!("{other} takes two dimension arguments")),
        },
    };
    if alpha_equivalent(&step.formula, &instance) {
        Ok(())
    } else {
        Err(format!("formula is not the `{name}` instance for the given arguments"))
    }
}

// ---- logical axiom schemata ----

fn check_logic(ax: LogicAxiom, f: &Formula) -> Result<(), String> {
    match ax {
        LogicAxiom::Refl => match f {
            Formula::Eq(a, b) if a == b => Ok(()),
            _ => Err("refl expects `t = t`".into()),
        },
        LogicAxiom::MemLit => match f {
            Formula::Mem(t, Term::SetLiteral(ts)) if ts.contains(t) => Ok(()),
            _ => Err("mem-lit expects `t in {..., t, ...}`".into()),
        },
        LogicAxiom::LitChar => {
            if let Formula::ForallThing(v, body) = f {
                if let Formula::Iff(lhs, _) = body.as_ref() {
                    if let Formula::Mem(vt, lit @ Term::SetLiteral(ts)) = lhs.as_ref() {
                        if *vt == Term::ThingVar(v.clone()) && !ts.is_empty() {
                            let disj: Vec<Formula> = ts
                                .iter()
                                .map(|t| Formula::Eq(Term::ThingVar(v.clone()), t.clone()))
                                .collect();
                            let expected = Formula::ForallThing(
                                v.clone(),
                                Box::new(Formula::iff(
                                    Formula::Mem(Term::ThingVar(v.clone()), lit.clone()),
                                    or_all(disj),
                                )),
                            );
                            if alpha_equivalent(f, &expected) {
                                return Ok(());
                            }
                        }
                    }
                }
            }
            Err("lit-char expects `all v . (v in {t1,...,tn} <-> v = t1 \\/ ... \\/ v = tn)`"
                .into())
        }
        LogicAxiom::Inst => match f {
            Formula::Implies(lhs, rhs) => {
                if univ_instance(lhs, rhs).is_some() {
                    Ok(())
                } else {
                    Err("inst expects `(all x . P) -> P[x:=t]`".into())
                }
            }
            _ => Err("inst expects an implication".into()),
        },
        LogicAxiom::EInst => match f {
            Formula::Implies(lhs, rhs) => {
                if exist_instance(rhs, lhs).is_some() {
                    Ok(())
                } else {
                    Err("einst expects `P[x:=t] -> ex x . P`".into())
                }
            }
            _ => Err("einst expects an implication".into()),
        },
        LogicAxiom::EElim => check_eelim(f),
        LogicAxiom::Subst => check_subst(f),
    }
}

fn or_all(mut fs: Vec<Formula>) -> Formula {
    let last = fs.pop().expect("non-empty");
    fs.into_iter().rev().fold(last, |acc, f| Formula::or(f, acc))
}

/// `(all x . (P -> Q)) -> ((ex x . P) -> Q)` with x not free in Q.
fn check_eelim(f: &Formula) -> Result<(), String> {
    let err: Result<(), String> =
        Err("eelim expects `(all x . (P -> Q)) -> ((ex x . P) -> Q)` with x not free in Q".into());
    let Formula::Implies(lhs, rhs) = f else { return err };
    let (expected_rhs, x_name, x_is_fun, q) = match lhs.as_ref() {
        Formula::ForallSet(x, body) => match body.as_ref() {
            Formula::Implies(p, q) => (
                Formula::implies(
                    Formula::ExistsSet(x.clone(), Box::new((**p).clone())),
                    (**q).clone(),
                ),
                x.clone(),
                false,
                (**q).clone(),
            ),
            _ => return err,
        },
        Formula::ForallThing(x, body) => match body.as_ref() {
            Formula::Implies(p, q) => (
                Formula::implies(
                    Formula::ExistsThing(x.clone(), Box::new((**p).clone())),
                    (**q).clone(),
                ),
                x.clone(),
                false,
                (**q).clone(),
            ),
            _ => return err,
        },
        Formula::ForallFun { graph, domain, body } => match body.as_ref() {
            Formula::Implies(p, q) => (
                Formula::implies(
                    Formula::ExistsFun {
                        graph: graph.clone(),
                        domain: domain.clone(),
                        body: Box::new((**p).clone()),
                    },
                    (**q).clone(),
                ),
                graph.clone(),
                true,
                (**q).clone(),
            ),
            _ => return err,
        },
        _ => return err,
    };
    let escapes = free_variables(&q).iter().any(|(n, s)| {
        *n == x_name
            && if x_is_fun { matches!(s, Sort::Function(_)) } else { !matches!(s, Sort::Function(_)) }
    });
    if escapes {
        return Err("eelim side condition violated: the bound variable is free in Q".into());
    }
    if alpha_equivalent(rhs, &expected_rhs) {
        Ok(())
    } else {
        err
    }
}

/// `t1 = t2 -> (P1 <-> P2)` where P2 is P1 with some occurrences of t1
/// replaced by t2, none of them under a binder capturing variables of
/// either term.
fn check_subst(f: &Formula) -> Result<(), String> {
    let err: Result<(), String> = Err("subst expects `t1 = t2 -> (P <-> P')`".into());
    let Formula::Implies(eq, iff) = f else { return err };
    let Formula::Eq(t1, t2) = eq.as_ref() else { return err };
    let Formula::Iff(a, b) = iff.as_ref() else { return err };
    let mut locked_names: BTreeSet<Name> = BTreeSet::new();
    for t in [t1, t2] {
        let probe = Formula::Eq((*t).clone(), Term::EmptySet);
        for (n, _) in free_variables(&probe) {
            locked_names.insert(n);
        }
    }
    if leibniz_ok(a, b, t1, t2, &locked_names, false) {
        Ok(())
    } else {
        Err("subst: right side is not the left with occurrences rewritten".into())
    }
}

fn binder_names(f: &Formula) -> Vec<Name> {
    match f {
        Formula::ForallSet(n, _)
        | Formula::ExistsSet(n, _)
        | Formula::ForallThing(n, _)
        | Formula::ExistsThing(n, _) => vec![n.clone()],
        Formula::ForallFun { graph, .. } | Formula::ExistsFun { graph, .. } => vec![graph.clone()],
        Formula::MultiForallUr { family, index, .. } => vec![family.clone(), index.clone()],
        Formula::ConjOp { index, .. } => vec![index.clone()],
        _ => vec![],
    }
}

fn leibniz_ok(
    a: &Formula,
    b: &Formula,
    t1: &Term,
    t2: &Term,
    locked_names: &BTreeSet<Name>,
    locked: bool,
) -> bool {
    if std::mem::discriminant(a) != std::mem::discriminant(b) {
        return false;
    }
    if binder_names(a) != binder_names(b) {
        return false;
    }
    let locked = locked || binder_names(a).iter().any(|n| locked_names.contains(n));
    let (ta, tb) = (a.terms(), b.terms());
    if ta.len() != tb.len() {
        return false;
    }
    for (x, y) in ta.iter().zip(&tb) {
        if !leibniz_term_ok(x, y, t1, t2, locked) {
            return false;
        }
    }
    let (fa, fb) = (a.subformulas(), b.subformulas());
    if fa.len() != fb.len() {
        return false;
    }
    fa.iter().zip(&fb).all(|(x, y)| leibniz_ok(x, y, t1, t2, locked_names, locked))
}

fn leibniz_term_ok(a: &Term, b: &Term, t1: &Term, t2: &Term, locked: bool) -> bool {
    if a == b {
        return true;
    }
    if !locked && a == t1 && b == t2 {
        return true;
    }
    if std::mem::discriminant(a) != std::mem::discriminant(b) {
        return false;
    }
    let (ca, cb) = (a.children(), b.children());
    if ca.len() != cb.len() || ca.is_empty() {
        return false;
    }
    // Composite graph names and matrix dimensions must agree exactly.
    match (a, b) {
        (Term::Matrix { rows: r1, cols: c1, .. }, Term::Matrix { rows: r2, cols: c2, .. })
            if (r1, c1) != (r2, c2) =>
        {
            return false;
        }
        _ => {}
    }
    ca.iter().zip(&cb).all(|(x, y)| leibniz_term_ok(x, y, t1, t2, locked))
}

// ---- instance matching ----

/// Candidate-collecting parallel walk: where `pat` has the hole variable,
/// record the corresponding subterm of `tgt`.
fn collect_simple(var: &Term, pat: &Formula, tgt: &Formula, out: &mut Vec<Term>) {
    let (name, is_set) = match var {
        Term::SetVar(n) => (n.as_str(), true),
        Term::ThingVar(n) => (n.as_str(), false),
        _ => return,
    };
    let shadowed = match pat {
        Formula::ForallSet(n, _) | Formula::ExistsSet(n, _) => is_set && n == name,
        Formula::ForallThing(n, _) | Formula::ExistsThing(n, _) => !is_set && n == name,
        Formula::MultiForallUr { index, .. } | Formula::ConjOp { index, .. } => {
            !is_set && index == name
        }
        _ => false,
    };
    if std::mem::discriminant(pat) == std::mem::discriminant(tgt) {
        for (x, y) in pat.terms().iter().zip(tgt.terms()) {
            collect_simple_term(var, x, y, out);
        }
        if !shadowed {
            for (x, y) in pat.subformulas().iter().zip(tgt.subformulas()) {
                collect_simple(var, x, y, out);
            }
        }
    }
}

fn collect_simple_term(var: &Term, pat: &Term, tgt: &Term, out: &mut Vec<Term>) {
    if pat == var {
        out.push(tgt.clone());
        return;
    }
    if std::mem::discriminant(pat) == std::mem::discriminant(tgt) {
        for (x, y) in pat.children().iter().zip(tgt.children()) {
            collect_simple_term(var, x, y, out);
        }
    }
}

fn collect_fun(graph: &str, domain: &Term, pat: &Formula, tgt: &Formula, out: &mut Vec<Term>) {
    let shadowed = match pat {
        Formula::ForallFun { graph: g, domain: d, .. }
        | Formula::ExistsFun { graph: g, domain: d, .. } => g == graph && d == domain,
        Formula::MultiForallUr { family, .. } => family == graph,
        _ => false,
    };
    if std::mem::discriminant(pat) == std::mem::discriminant(tgt) {
        for (x, y) in pat.terms().iter().zip(tgt.terms()) {
            collect_fun_term(graph, domain, x, y, out);
        }
        if !shadowed {
            for (x, y) in pat.subformulas().iter().zip(tgt.subformulas()) {
                collect_fun(graph, domain, x, y, out);
            }
        }
    }
}

fn collect_fun_term(graph: &str, domain: &Term, pat: &Term, tgt: &Term, out: &mut Vec<Term>) {
    if let Term::FunComposite { graph: g, domain: d } = pat {
        if matches!(g.as_ref(), Term::GraphVar(n) if n == graph) && d.as_ref() == domain {
            out.push(tgt.clone());
            return;
        }
    }
    if std::mem::discriminant(pat) == std::mem::discriminant(tgt) {
        for (x, y) in pat.children().iter().zip(tgt.children()) {
            collect_fun_term(graph, domain, x, y, out);
        }
    }
}

/// If `target` is an instance of the universal `forall`, return the witness.
pub(crate) fn univ_instance(forall: &Formula, target: &Formula) -> Option<Term> {
    match forall {
        Formula::ForallSet(x, body) => simple_instance(&Term::SetVar(x.clone()), body, target),
        Formula::ForallThing(x, body) => simple_instance(&Term::ThingVar(x.clone()), body, target),
        Formula::ForallFun { graph, domain, body } => fun_instance(graph, domain, body, target),
        _ => None,
    }
}

/// If `source` is an instance of the existential `exists`, return the witness.
pub(crate) fn exist_instance(exists: &Formula, source: &Formula) -> Option<Term> {
    match exists {
        Formula::ExistsSet(x, body) => simple_instance(&Term::SetVar(x.clone()), body, source),
        Formula::ExistsThing(x, body) => simple_instance(&Term::ThingVar(x.clone()), body, source),
        Formula::ExistsFun { graph, domain, body } => fun_instance(graph, domain, body, source),
        _ => None,
    }
}

fn simple_instance(var: &Term, body: &Formula, target: &Formula) -> Option<Term> {
    let mut cands = Vec::new();
    collect_simple(var, body, target, &mut cands);
    cands.dedup();
    for t in cands {
        if let Ok(inst) = substitute(body, var, &t) {
            if alpha_equivalent(&inst, target) {
                return Some(t);
            }
        }
    }
    // Vacuous instantiation: the variable does not occur.
    if alpha_equivalent(body, target) {
        return Some(match var {
            Term::SetVar(_) => Term::EmptySet,
            _ => Term::EmptySet,
        });
    }
    None
}

fn fun_instance(graph: &str, domain: &Term, body: &Formula, target: &Formula) -> Option<Term> {
    let mut cands = Vec::new();
    collect_fun(graph, domain, body, target, &mut cands);
    cands.dedup();
    for t in cands {
        let ok_shape = match &t {
            Term::FunComposite { domain: d, .. } => d.as_ref() == domain,
            Term::InactiveFn => *domain == Term::EmptySet,
            _ => false,
        };
        if !ok_shape {
            continue;
        }
        let inst = substitute_fun(body, graph, domain, &t);
        if alpha_equivalent(&inst, target) {
            return Some(t);
        }
    }
    if alpha_equivalent(body, target) {
        return Some(Term::fun_var(graph, domain.clone()));
    }
    None
}

// ---- rule checking ----

fn check_rule(ctx: &Ctx, step: &Step, rule: RuleId, premises: &[usize]) -> Result<(), String> {
    let ps: Vec<&Formula> =
        premises.iter().map(|i| ctx.premise(*i)).collect::<Result<_, _>>()?;
    let c = &step.formula;
    match rule {
        RuleId::Mp => {
            let [a, b] = two(&ps, "MP")?;
            for (imp, ant) in [(a, b), (b, a)] {
                if let Formula::Implies(p, q) = imp {
                    if alpha_equivalent(p, ant) && alpha_equivalent(q, c) {
                        return Ok(());
                    }
                }
            }
            Err("MP: premises are not `P` and `P -> C`".into())
        }
        RuleId::AndI => {
            let [a, b] = two(&ps, "AND-I")?;
            if let Formula::And(x, y) = c {
                if alpha_equivalent(x, a) && alpha_equivalent(y, b) {
                    return Ok(());
                }
            }
            Err("AND-I: conclusion is not the conjunction of the premises in order".into())
        }
        RuleId::AndE => {
            let [a] = one(&ps, "AND-E")?;
            if let Formula::And(x, y) = a {
                if alpha_equivalent(x, c) || alpha_equivalent(y, c) {
                    return Ok(());
                }
            }
            Err("AND-E: conclusion is not a conjunct of the premise".into())
        }
        RuleId::OrI => {
            let [a] = one(&ps, "OR-I")?;
            if let Formula::Or(x, y) = c {
                if alpha_equivalent(x, a) || alpha_equivalent(y, a) {
                    return Ok(());
                }
            }
            Err("OR-I: conclusion is not a disjunction containing the premise".into())
        }
        RuleId::NotE => {
            let [a] = one(&ps, "NOT-E")?;
            if let Formula::Not(inner) = a {
                if let Formula::Not(core) = inner.as_ref() {
                    if alpha_equivalent(core, c) {
                        return Ok(());
                    }
                }
            }
            Err("NOT-E: premise is not the double negation of the conclusion".into())
        }
        RuleId::Taut => taut::entails(&ps, c),
        RuleId::UnivI => {
            let [p] = one(&ps, "UNIV-I")?;
            require_standard(p, c, "UNIV-I", "I5-NS-QUANT-I")?;
            check_gen(ctx, p, c)
        }
        RuleId::UnivE => {
            let [p] = one(&ps, "UNIV-E")?;
            require_standard(p, c, "UNIV-E", "I6-NS-QUANT-E")?;
            match univ_instance(p, c) {
                Some(_) => Ok(()),
                None => Err("UNIV-E: conclusion is not an instance of the premise".into()),
            }
        }
        RuleId::ExistI => {
            let [p] = one(&ps, "EXIST-I")?;
            require_standard(p, c, "EXIST-I", "I5-NS-QUANT-I")?;
            match exist_instance(c, p) {
                Some(_) => Ok(()),
                None => {
                    Err("EXIST-I: premise is not an instance of the conclusion's body".into())
                }
            }
        }
        RuleId::RuleC => {
            let [p] = one(&ps, "RULE-C")?;
            require_standard(p, c, "RULE-C", "RULE-C")?;
            let [k] = step.fresh_constants.as_slice() else {
                return Err("RULE-C introduces exactly one fresh constant".into());
            };
            if ctx.used_constants.contains(k) {
                return Err(format!("RULE-C constant `{k}` is not fresh"));
            }
            let witnessed = match p {
                Formula::ExistsSet(x, body) => {
                    substitute(body, &Term::SetVar(x.clone()), &Term::SetConst(k.clone()))
                        .map_err(|e| e.to_string())?
                }
                Formula::ExistsThing(x, body) => {
                    substitute(body, &Term::ThingVar(x.clone()), &Term::ThingConst(k.clone()))
                        .map_err(|e| e.to_string())?
                }
                Formula::ExistsFun { graph, domain, body } => substitute_fun(
                    body,
                    graph,
                    domain,
                    &Term::fun_const(k, domain.clone()),
                ),
                _ => return Err("RULE-C premise must be existential".into()),
            };
            if alpha_equivalent(&witnessed, c) {
                Ok(())
            } else {
                Err("RULE-C: conclusion is not the premise body at the fresh constant".into())
            }
        }
        RuleId::I1ConjI => check_i1(ctx, &ps, c),
        RuleId::I2ConjE => check_i2(&ps, c),
        RuleId::I3MultiI => {
            let [p] = one(&ps, "I3-MULTI-I")?;
            let Formula::MultiForallUr { family, index, index_set, body } = c else {
                return Err("I3-MULTI-I: conclusion must be a multiple quantifier".into());
            };
            if free_variables(body)
                .iter()
                .any(|(n, s)| n == index && !matches!(s, Sort::Function(_)))
            {
                return Err("I3-MULTI-I: index variable occurs free in the body".into());
            }
            gen_guard(ctx, family, GenKind::Fun, p)?;
            let rebuilt = Formula::MultiForallUr {
                family: family.clone(),
                index: index.clone(),
                index_set: index_set.clone(),
                body: Box::new(p.clone()),
            };
            if alpha_equivalent(c, &rebuilt) {
                Ok(())
            } else {
                Err("I3-MULTI-I: conclusion body does not match the premise".into())
            }
        }
        RuleId::I4MultiE => {
            let [p] = one(&ps, "I4-MULTI-E")?;
            let Formula::MultiForallUr { family, index_set, body, .. } = p else {
                return Err("I4-MULTI-E: premise must be a multiple quantifier".into());
            };
            if enumerable_elements(index_set).is_none() {
                return Err(
                    "I4-MULTI-E: only explicitly enumerated index sets are supported".into()
                );
            }
            let mut cands = constant_graph_names(c);
            cands.sort();
            cands.dedup();
            for k in cands {
                let inst = substitute_fun_family(body, family, &k);
                if alpha_equivalent(&inst, c) {
                    return Ok(());
                }
            }
            Err("I4-MULTI-E: conclusion is not the premise body at a constant family".into())
        }
        RuleId::I5NsQuantI => {
            let [p] = one(&ps, "I5-NS-QUANT-I")?;
            if !p.has_nonstandard() && !c.has_nonstandard() {
                return Err("I5-NS-QUANT-I applies to nonstandard formulas; use the standard rule"
                    .into());
            }
            match c {
                Formula::ForallSet(_, _) | Formula::ForallThing(_, _) | Formula::ForallFun { .. } => {
                    check_gen(ctx, p, c)
                }
                Formula::ExistsSet(_, _)
                | Formula::ExistsThing(_, _)
                | Formula::ExistsFun { .. } => match exist_instance(c, p) {
                    Some(_) => Ok(()),
                    None => Err(
                        "I5-NS-QUANT-I: premise is not an instance of the conclusion's body"
                            .into(),
                    ),
                },
                _ => Err("I5-NS-QUANT-I: conclusion must be quantified".into()),
            }
        }
        RuleId::I6NsQuantE => {
            let [p] = one(&ps, "I6-NS-QUANT-E")?;
            if !p.has_nonstandard() && !c.has_nonstandard() {
                return Err("I6-NS-QUANT-E applies to nonstandard formulas; use the standard rule"
                    .into());
            }
            match univ_instance(p, c) {
                Some(_) => Ok(()),
                None => Err("I6-NS-QUANT-E: conclusion is not an instance of the premise".into()),
            }
        }
    }
}

fn one<'a>(ps: &[&'a Formula], rule: &str) -> Result<[&'a Formula; 1], String> {
    match ps {
        [a] => Ok([a]),
        _ => Err(format!("{rule} takes exactly one premise, got {}", ps.len())),
    }
}

fn two<'a>(ps: &[&'a Formula], rule: &str) -> Result<[&'a Formula; 2], String> {
    match ps {
        [a, b] => Ok([a, b]),
        _ => Err(format!("{rule} takes exactly two premises, got {}", ps.len())),
    }
}

fn require_standard(p: &Formula, c: &Formula, rule: &str, alt: &str) -> Result<(), String> {
    if p.has_nonstandard() || c.has_nonstandard() {
        Err(format!("{rule} only handles standard formulas; use {alt}"))
    } else {
        Ok(())
    }
}

enum GenKind {
    Set,
    Thing,
    Fun,
}

/// Eigenvariable conditions for generalization: the variable must not be
/// free in any assumption, and the premise must not mention a Rule-C
/// constant whose witnessing existential had the variable free.
fn gen_guard(ctx: &Ctx, name: &str, kind: GenKind, premise: &Formula) -> Result<(), String> {
    let kind_matches = |s: &Sort| match kind {
        GenKind::Set => matches!(s, Sort::Set | Sort::Graph),
        GenKind::Thing => matches!(s, Sort::Thing),
        GenKind::Fun => matches!(s, Sort::Function(_)),
    };
    for a in &ctx.assumed {
        if free_variables(a).iter().any(|(n, s)| n == name && kind_matches(s)) {
            return Err(format!(
                "cannot generalize over `{name}`: it is free in an assumption"
            ));
        }
    }
    let mentioned = premise.constant_names();
    for (konst, vars) in &ctx.taints {
        if vars.contains(name) && mentioned.contains(konst) {
            return Err(format!(
                "cannot generalize over `{name}`: the premise mentions Rule-C constant `{konst}` \
                 whose witnessing existential had `{name}` free"
            ));
        }
    }
    Ok(())
}

/// Generalization: the conclusion is `all v . P` for the premise P, where
/// v may be any variable of the right kind.
fn check_gen(ctx: &Ctx, p: &Formula, c: &Formula) -> Result<(), String> {
    let free_of_p = free_variables(p);
    match c {
        Formula::ForallSet(n, _) => {
            let mut cands = vec![n.clone()];
            cands.extend(free_of_p.iter().filter(|(_, s)| *s == Sort::Set).map(|(n, _)| n.clone()));
            for v in cands {
                let built = Formula::ForallSet(v.clone(), Box::new(p.clone()));
                if alpha_equivalent(c, &built) {
                    return gen_guard(ctx, &v, GenKind::Set, p);
                }
            }
        }
        Formula::ForallThing(n, _) => {
            let mut cands = vec![n.clone()];
            cands
                .extend(free_of_p.iter().filter(|(_, s)| *s == Sort::Thing).map(|(n, _)| n.clone()));
            for v in cands {
                let built = Formula::ForallThing(v.clone(), Box::new(p.clone()));
                if alpha_equivalent(c, &built) {
                    return gen_guard(ctx, &v, GenKind::Thing, p);
                }
            }
        }
        Formula::ForallFun { graph, domain, .. } => {
            let mut cands = vec![graph.clone()];
            cands.extend(
                free_of_p
                    .iter()
                    .filter(|(_, s)| matches!(s, Sort::Function(_)))
                    .map(|(n, _)| n.clone()),
            );
            for v in cands {
                let built = Formula::ForallFun {
                    graph: v.clone(),
                    domain: domain.clone(),
                    body: Box::new(p.clone()),
                };
                if alpha_equivalent(c, &built) {
                    return gen_guard(ctx, &v, GenKind::Fun, p);
                }
            }
        }
        _ => return Err("generalization: conclusion must be universally quantified".into()),
    }
    Err("generalization: conclusion is not `all v . P` for the premise P".into())
}

/// Elements of the family index set: either directly enumerable or
/// certified by a cited premise `S = {…}`. Returns the elements and the
/// index of the certifying premise, if one was used.
fn family_elements(
    index_set: &Term,
    ps: &[&Formula],
) -> Result<(Vec<Term>, Option<usize>), String> {
    if let Some(elems) = enumerable_elements(index_set) {
        return Ok((elems, None));
    }
    for (i, p) in ps.iter().enumerate() {
        if let Formula::Eq(lhs, rhs) = p {
            if lhs == index_set {
                if let Some(elems) = enumerable_elements(rhs) {
                    return Ok((elems, Some(i)));
                }
            }
        }
    }
    Err("index set is neither an explicit enumeration nor certified equal to one".into())
}

/// Introduction of the conjunctive operator: the cited premises are exactly
/// the mapping atoms of the body template at every element of the
/// explicitly enumerated index set.
fn check_i1(_ctx: &Ctx, ps: &[&Formula], c: &Formula) -> Result<(), String> {
    let Formula::ConjOp { index, index_set, body } = c else {
        return Err("I1-CONJ-I: conclusion must be a conjunctive-operator formula".into());
    };
    if !matches!(body.as_ref(), Formula::Maps(_, _, _)) {
        return Err("I1-CONJ-I: the operator body must be a mapping atom".into());
    }
    let (elems, cert) = family_elements(index_set, ps)?;
    if elems.is_empty() {
        return Err("I1-CONJ-I: index set must be non-empty".into());
    }
    if !elems.iter().all(|e| e.is_closed()) {
        return Err("I1-CONJ-I: index elements must be closed terms".into());
    }
    let var = Term::ThingVar(index.clone());
    let mut used = vec![false; ps.len()];
    if let Some(ci) = cert {
        used[ci] = true;
    }
    for e in &elems {
        let inst = substitute(body, &var, e).map_err(|e| e.to_string())?;
        let found = ps.iter().enumerate().find(|(i, p)| !used[*i] && alpha_equivalent(p, &inst));
        match found {
            Some((i, _)) => used[i] = true,
            None => {
                return Err(format!(
                    "I1-CONJ-I: incomplete family, no premise for element `{}`",
                    crate::parser::print::term_to_string(e)
                ))
            }
        }
    }
    if let Some(i) = used.iter().position(|u| !u) {
        return Err(format!("I1-CONJ-I: premise {} is not part of the family", i + 1));
    }
    Ok(())
}

/// Elimination of the conjunctive operator at a certified element.
fn check_i2(ps: &[&Formula], c: &Formula) -> Result<(), String> {
    let conj = ps
        .iter()
        .find(|p| matches!(p, Formula::ConjOp { .. }))
        .ok_or("I2-CONJ-E: needs a conjunctive-operator premise")?;
    let Formula::ConjOp { index, index_set, body } = conj else { unreachable!() };
    let var = Term::ThingVar(index.clone());
    let mut cands = Vec::new();
    collect_simple(&var, body, c, &mut cands);
    cands.dedup();
    for t in cands {
        if !t.is_closed() {
            continue;
        }
        let inst = match substitute(body, &var, &t) {
            Ok(f) => f,
            Err(_) => continue,
        };
        if !alpha_equivalent(&inst, c) {
            continue;
        }
        // Membership certification.
        if let Some(elems) = enumerable_elements(index_set) {
            if elems.contains(&t) {
                return Ok(());
            }
        }
        let mem = Formula::Mem(t.clone(), index_set.clone());
        if ps.iter().any(|p| alpha_equivalent(p, &mem)) {
            return Ok(());
        }
        for p in ps {
            if let Formula::Eq(lhs, rhs) = p {
                if lhs == index_set {
                    if let Some(elems) = enumerable_elements(rhs) {
                        if elems.contains(&t) {
                            return Ok(());
                        }
                    }
                }
            }
        }
        return Err(format!(
            "I2-CONJ-E: element `{}` has no membership certificate",
            crate::parser::print::term_to_string(&t)
        ));
    }
    Err("I2-CONJ-E: conclusion is not a body instance of the operator premise".into())
}

fn constant_graph_names(f: &Formula) -> Vec<Name> {
    fn term(t: &Term, out: &mut Vec<Name>) {
        if let Term::FunComposite { graph, .. } = t {
            if let Term::SetConst(n) = graph.as_ref() {
                out.push(n.clone());
            }
        }
        for c in t.children() {
            term(c, out);
        }
    }
    fn walk(f: &Formula, out: &mut Vec<Name>) {
        for t in f.terms() {
            term(t, out);
        }
        for g in f.subformulas() {
            walk(g, out);
        }
    }
    let mut out = Vec::new();
    walk(f, &mut out);
    out
}
