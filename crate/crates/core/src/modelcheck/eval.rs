//! Tarskian evaluation with rank-stratified quantifier ranges.
//!
//! Universal quantifiers in positive position range over the interior
//! carrier. Every other quantifier occurrence (existentials, and
//! universals under an odd number of negations) ranges over the full
//! carrier. Thing-sorted interior ranges contain sets only, since pure
//! set carriers cannot represent sets with function members. Undenoting
//! terms make their atoms false.

use super::{FiniteStructure, FunObj, HfSet, Valuation, Value, VarKey};
use crate::syntax::{enumerable_elements, Formula, Term};
use std::sync::Arc;
use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("free variable `{0}` has no value in the valuation")]
    UnboundVariable(String),
    #[error("index set of a family construct denotes a function object")]
    IndexSetIsFunction,
    #[error("bare graph name `{0}` outside a composite")]
    BareGraphName(String),
}

/// Evaluate a formula in a structure under a valuation covering its free
/// variables.
pub fn eval(f: &Formula, s: &FiniteStructure, v: &Valuation) -> Result<bool, EvalError> {
    eval_pol(f, s, v, true)
}

fn eval_pol(f: &Formula, s: &FiniteStructure, v: &Valuation, pol: bool) -> Result<bool, EvalError> {
    match f {
        Formula::Eq(a, b) => {
            // Matrix terms compare entrywise: matrix equality is
            // definitionally the equality of the entries, whether or not
            // they form a decodable graph-domain object.
            if let (Some(ea), Some(eb)) = (matrix_entries(a), matrix_entries(b)) {
                if ea.len() != eb.len() {
                    return Ok(false);
                }
                for (x, y) in ea.iter().zip(&eb) {
                    match (term(x, s, v)?, term(y, s, v)?) {
                        (Some(vx), Some(vy)) if vx == vy => {}
                        _ => return Ok(false),
                    }
                }
                return Ok(true);
            }
            Ok(match (term(a, s, v)?, term(b, s, v)?) {
                (Some(x), Some(y)) => x == y,
                _ => false,
            })
        }
        Formula::Mem(a, b) => Ok(match (term(a, s, v)?, term(b, s, v)?) {
            (Some(Value::Set(x)), Some(Value::Set(y))) => y.contains(&x),
            _ => false,
        }),
        Formula::Surj(a, b, c) => Ok(match (term(a, s, v)?, term(b, s, v)?, term(c, s, v)?) {
            (Some(Value::Fun(f)), Some(Value::Set(dom)), Some(Value::Set(img))) => {
                f.domain == dom && f.image() == img
            }
            _ => false,
        }),
        Formula::Maps(a, b, c) => Ok(match (term(a, s, v)?, term(b, s, v)?, term(c, s, v)?) {
            (Some(Value::Fun(f)), Some(Value::Set(x)), Some(Value::Set(y))) => {
                f.map.get(&x) == Some(&y)
            }
            _ => false,
        }),
        Formula::Not(g) => Ok(!eval_pol(g, s, v, !pol)?),
        Formula::And(a, b) => Ok(eval_pol(a, s, v, pol)? && eval_pol(b, s, v, pol)?),
        Formula::Or(a, b) => Ok(eval_pol(a, s, v, pol)? || eval_pol(b, s, v, pol)?),
        Formula::Implies(a, b) => Ok(!eval_pol(a, s, v, !pol)? || eval_pol(b, s, v, pol)?),
        Formula::Iff(a, b) => {
            let fwd = !eval_pol(a, s, v, !pol)? || eval_pol(b, s, v, pol)?;
            let bwd = !eval_pol(b, s, v, !pol)? || eval_pol(a, s, v, pol)?;
            Ok(fwd && bwd)
        }
        Formula::ForallSet(n, g) => {
            for x in set_range(s, pol) {
                let mut v2 = v.clone();
                v2.bind_set(n, x.clone());
                if !eval_pol(g, s, &v2, pol)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::ExistsSet(n, g) => {
            for x in set_range(s, false) {
                let mut v2 = v.clone();
                v2.bind_set(n, x.clone());
                if eval_pol(g, s, &v2, pol)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::ForallThing(n, g) => {
            for x in thing_range(s, pol) {
                let mut v2 = v.clone();
                v2.bind_thing(n, x);
                if !eval_pol(g, s, &v2, pol)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::ExistsThing(n, g) => {
            for x in thing_range(s, false) {
                let mut v2 = v.clone();
                v2.bind_thing(n, x);
                if eval_pol(g, s, &v2, pol)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::ForallFun { graph, domain, body } => {
            let Some(Value::Set(dom)) = term(domain, s, v)? else {
                // No representable domain: nothing to range over.
                return Ok(true);
            };
            for f in s.functions_on(&dom) {
                let mut v2 = v.clone();
                v2.bind_fun(graph, dom.clone(), f.clone());
                if !eval_pol(body, s, &v2, pol)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::ExistsFun { graph, domain, body } => {
            let Some(Value::Set(dom)) = term(domain, s, v)? else {
                return Ok(false);
            };
            for f in s.functions_on(&dom) {
                let mut v2 = v.clone();
                v2.bind_fun(graph, dom.clone(), f.clone());
                if eval_pol(body, s, &v2, pol)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::MultiForallUr { family, index, index_set, body } => {
            let members = index_members(index_set, s, v)?;
            let Some(members) = members else {
                // Undenoting index set: no representable family to range over.
                return Ok(true);
            };
            // One ur-function per member; the family quantifier ranges over
            // every complete assignment within the carrier.
            let slots: Vec<(HfSet, Vec<Arc<FunObj>>)> = members
                .iter()
                .filter_map(|m| m.as_set().cloned())
                .map(|m| {
                    let urs = s.ur_functions_on(&m);
                    (m, urs)
                })
                .collect();
            if members.iter().any(|m| m.as_set().is_none()) {
                // A function-valued member has no singleton in the carrier,
                // so no complete family exists.
                return Ok(true);
            }
            if slots.iter().any(|(_, urs)| urs.is_empty()) {
                return Ok(true);
            }
            let mut counters = vec![0usize; slots.len()];
            loop {
                let mut v2 = v.clone();
                for ((m, urs), &i) in slots.iter().zip(&counters) {
                    v2.bind_fun(family, HfSet::singleton(m.clone()), urs[i].clone());
                }
                // The index variable itself is only meaningful inside the
                // body's own binders; leave it unbound.
                let _ = index;
                if !eval_pol(body, s, &v2, pol)? {
                    return Ok(false);
                }
                let mut pos = 0;
                loop {
                    if pos == slots.len() {
                        break;
                    }
                    counters[pos] += 1;
                    if counters[pos] < slots[pos].1.len() {
                        break;
                    }
                    counters[pos] = 0;
                    pos += 1;
                }
                if pos == slots.len() {
                    break;
                }
            }
            Ok(true)
        }
        Formula::ConjOp { index, index_set, body } => {
            let members = index_members(index_set, s, v)?;
            let Some(members) = members else {
                return Ok(false);
            };
            for m in members {
                let mut v2 = v.clone();
                v2.bind_thing(index, m);
                if !eval_pol(body, s, &v2, pol)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Entry list of a syntactic 1x2 matrix term.
fn matrix_entries(t: &Term) -> Option<Vec<Term>> {
    match t {
        Term::EmptyMatrix => Some(vec![Term::EmptySet, Term::EmptySet]),
        Term::Matrix { rows: 1, cols: 2, entries } => Some(entries.clone()),
        _ => None,
    }
}

fn set_range(s: &FiniteStructure, universal: bool) -> &[HfSet] {
    if universal {
        s.interior_sets()
    } else {
        &s.sets
    }
}

fn thing_range(s: &FiniteStructure, universal: bool) -> Vec<Value> {
    if universal {
        s.interior_sets().iter().cloned().map(Value::Set).collect()
    } else {
        let mut out: Vec<Value> = s.sets.iter().cloned().map(Value::Set).collect();
        out.extend(s.functions.iter().cloned().map(Value::Fun));
        out
    }
}

/// Members of a family index term: a set literal contributes the values of
/// its entries, anything else the members of its denotation. `None` means
/// the index has no denotation.
fn index_members(
    t: &Term,
    s: &FiniteStructure,
    v: &Valuation,
) -> Result<Option<Vec<Value>>, EvalError> {
    if let Some(entries) = enumerable_elements(t) {
        let mut out = Vec::new();
        for e in &entries {
            match term(e, s, v)? {
                Some(val) => {
                    if !out.contains(&val) {
                        out.push(val);
                    }
                }
                None => return Ok(None),
            }
        }
        return Ok(Some(out));
    }
    match term(t, s, v)? {
        Some(Value::Set(set)) => {
            Ok(Some(set.children().iter().cloned().map(Value::Set).collect()))
        }
        Some(Value::Fun(_)) => Err(EvalError::IndexSetIsFunction),
        None => Ok(None),
    }
}

/// Term denotation; `None` when undefined.
#[allow(clippy::only_used_in_recursion)]
pub fn term(t: &Term, s: &FiniteStructure, v: &Valuation) -> Result<Option<Value>, EvalError> {
    Ok(match t {
        Term::EmptySet => Some(Value::Set(HfSet::empty())),
        Term::Omega => None,
        Term::InactiveFn | Term::EmptyMatrix => Some(Value::Fun(Arc::new(FunObj::inactive()))),
        Term::SetVar(n) => match v.get(&VarKey::Set(n.clone())) {
            Some(val) => Some(val.clone()),
            None => return Err(EvalError::UnboundVariable(n.clone())),
        },
        Term::ThingVar(n) => match v.get(&VarKey::Thing(n.clone())) {
            Some(val) => Some(val.clone()),
            None => return Err(EvalError::UnboundVariable(n.clone())),
        },
        Term::SetConst(n) | Term::ThingConst(n) => v.get(&VarKey::Const(n.clone())).cloned(),
        Term::GraphVar(n) => return Err(EvalError::BareGraphName(n.clone())),
        Term::FunComposite { graph, domain } => {
            let Some(Value::Set(dom)) = term(domain, s, v)? else { return Ok(None) };
            match graph.as_ref() {
                Term::GraphVar(n) => match v.get(&VarKey::Fun(n.clone(), dom.clone())) {
                    Some(val) => Some(val.clone()),
                    None => return Err(EvalError::UnboundVariable(n.clone())),
                },
                Term::SetConst(n) => v.get(&VarKey::Fun(n.clone(), dom)).cloned(),
                _ => None,
            }
        }
        Term::Successor(a) => match term(a, s, v)? {
            Some(Value::Set(x)) => Some(Value::Set(HfSet::singleton(x))),
            _ => None,
        },
        Term::Pair(a, b) => match (term(a, s, v)?, term(b, s, v)?) {
            (Some(Value::Set(x)), Some(Value::Set(y))) => Some(Value::Set(HfSet::pair(&x, &y))),
            _ => None,
        },
        Term::ImageApp { fun, arg } => match (term(fun, s, v)?, term(arg, s, v)?) {
            (Some(Value::Fun(f)), Some(Value::Set(x))) => {
                f.map.get(&x).cloned().map(Value::Set)
            }
            _ => None,
        },
        Term::SetLiteral(ts) => {
            let mut members = Vec::with_capacity(ts.len());
            for x in ts {
                match term(x, s, v)? {
                    Some(Value::Set(m)) => members.push(m),
                    _ => return Ok(None),
                }
            }
            Some(Value::Set(HfSet::from_children(members)))
        }
        Term::Matrix { rows, cols, entries } => {
            if (*rows, *cols) != (1, 2) {
                return Ok(None);
            }
            match (term(&entries[0], s, v)?, term(&entries[1], s, v)?) {
                (Some(Value::Set(g)), Some(Value::Set(x))) => {
                    FunObj::decode(&g, &x).map(|f| Value::Fun(Arc::new(f)))
                }
                _ => None,
            }
        }
        Term::Exponent { base, exp } => {
            match (term(base, s, v)?, term(exp, s, v)?) {
                (Some(Value::Set(y)), Some(Value::Set(x))) => exponent_set(&y, &x),
                _ => None,
            }
        }
    })
}

/// The set of graph encodings of all total functions from `x` into `y`.
fn exponent_set(y: &HfSet, x: &HfSet) -> Option<Value> {
    let xk = x.len() as u32;
    let yn = y.len();
    if yn.checked_pow(xk).is_none_or(|n| n > 1 << 16) && xk > 0 {
        return None;
    }
    let members: Vec<&HfSet> = x.children().iter().collect();
    let values: Vec<&HfSet> = y.children().iter().collect();
    let mut graphs = Vec::new();
    if members.is_empty() {
        graphs.push(HfSet::empty());
    } else if values.is_empty() {
        // No functions from a non-empty set into the empty set.
    } else {
        let mut counters = vec![0usize; members.len()];
        loop {
            let graph = HfSet::from_children(
                members
                    .iter()
                    .zip(&counters)
                    .map(|(m, &i)| HfSet::pair(m, values[i]))
                    .collect(),
            );
            graphs.push(graph);
            let mut pos = 0;
            loop {
                if pos == members.len() {
                    break;
                }
                counters[pos] += 1;
                if counters[pos] < values.len() {
                    break;
                }
                counters[pos] = 0;
                pos += 1;
            }
            if pos == members.len() {
                break;
            }
        }
    }
    Some(Value::Set(HfSet::from_children(graphs)))
}
