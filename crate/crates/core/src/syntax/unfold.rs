//! Unfolding of the nonstandard constructs over explicit finite index sets.
//!
//! A conjunctive operator over `{t1, ..., tn}` unfolds to the n-fold
//! conjunction of its body instances; a multiple quantifier unfolds to a
//! block of function quantifiers, one per element, each over the singleton
//! of that element.

use super::subst::substitute;
use super::{enumerable_elements, Formula, Term};
use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum UnfoldError {
    #[error("index set is not an explicit finite enumeration: {0:?}")]
    NotEnumerable(Term),
    #[error("cannot unfold over an empty index set")]
    EmptyIndex,
    #[error("the index variable of a multiple quantifier may not occur free in its body")]
    IndexEscapes,
    #[error("substitution failed during unfolding: {0}")]
    Subst(String),
}

/// Unfold one conjunctive-operator node over an explicit index set.
pub fn unfold_conj(index: &str, index_set: &Term, body: &Formula) -> Result<Formula, UnfoldError> {
    let elements = enumerable_elements(index_set)
        .ok_or_else(|| UnfoldError::NotEnumerable(index_set.clone()))?;
    if elements.is_empty() {
        return Err(UnfoldError::EmptyIndex);
    }
    let var = Term::ThingVar(index.to_string());
    let mut conjuncts = Vec::with_capacity(elements.len());
    for e in &elements {
        let inst =
            substitute(body, &var, e).map_err(|e| UnfoldError::Subst(e.to_string()))?;
        conjuncts.push(inst);
    }
    Ok(Formula::and_all(conjuncts))
}

/// Unfold one multiple-quantifier node over an explicit index set into a
/// block of function quantifiers over element singletons.
pub fn unfold_multi(
    family: &str,
    index: &str,
    index_set: &Term,
    body: &Formula,
) -> Result<Formula, UnfoldError> {
    let elements = enumerable_elements(index_set)
        .ok_or_else(|| UnfoldError::NotEnumerable(index_set.clone()))?;
    if elements.is_empty() {
        return Err(UnfoldError::EmptyIndex);
    }
    let fv = super::free_variables(body);
    if fv.iter().any(|(n, s)| n == index && *s == super::Sort::Thing) {
        return Err(UnfoldError::IndexEscapes);
    }
    let mut out = body.clone();
    for e in elements.into_iter().rev() {
        out = Formula::forall_fun(family, Term::succ(e), out);
    }
    Ok(out)
}

/// Recursively unfold every nonstandard node whose index set is an explicit
/// enumeration. Errors if any nonstandard node has a non-enumerable index.
pub fn unfold_nonstandard(f: &Formula) -> Result<Formula, UnfoldError> {
    match f {
        Formula::ConjOp { index, index_set, body } => {
            let body = unfold_nonstandard(body)?;
            unfold_conj(index, index_set, &body)
        }
        Formula::MultiForallUr { family, index, index_set, body } => {
            let body = unfold_nonstandard(body)?;
            unfold_multi(family, index, index_set, &body)
        }
        Formula::Not(g) => Ok(Formula::not(unfold_nonstandard(g)?)),
        Formula::And(a, b) => Ok(Formula::and(unfold_nonstandard(a)?, unfold_nonstandard(b)?)),
        Formula::Or(a, b) => Ok(Formula::or(unfold_nonstandard(a)?, unfold_nonstandard(b)?)),
        Formula::Implies(a, b) => {
            Ok(Formula::implies(unfold_nonstandard(a)?, unfold_nonstandard(b)?))
        }
        Formula::Iff(a, b) => Ok(Formula::iff(unfold_nonstandard(a)?, unfold_nonstandard(b)?)),
        Formula::ForallSet(n, g) => {
            Ok(Formula::ForallSet(n.clone(), Box::new(unfold_nonstandard(g)?)))
        }
        Formula::ExistsSet(n, g) => {
            Ok(Formula::ExistsSet(n.clone(), Box::new(unfold_nonstandard(g)?)))
        }
        Formula::ForallThing(n, g) => {
            Ok(Formula::ForallThing(n.clone(), Box::new(unfold_nonstandard(g)?)))
        }
        Formula::ExistsThing(n, g) => {
            Ok(Formula::ExistsThing(n.clone(), Box::new(unfold_nonstandard(g)?)))
        }
        Formula::ForallFun { graph, domain, body } => Ok(Formula::ForallFun {
            graph: graph.clone(),
            domain: domain.clone(),
            body: Box::new(unfold_nonstandard(body)?),
        }),
        Formula::ExistsFun { graph, domain, body } => Ok(Formula::ExistsFun {
            graph: graph.clone(),
            domain: domain.clone(),
            body: Box::new(unfold_nonstandard(body)?),
        }),
        atom => Ok(atom.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{alpha_equivalent, Formula as F, Term as T};

    #[test]
    fn conj_unfolds_to_conjunction() {
        let lit = T::SetLiteral(vec![T::thing_var("a"), T::thing_var("b")]);
        let body = F::Maps(T::fun_var("F", lit.clone()), T::thing_var("xi"), T::EmptySet);
        let out = unfold_conj("xi", &lit, &body).unwrap();
        let expect = F::and(
            F::Maps(T::fun_var("F", lit.clone()), T::thing_var("a"), T::EmptySet),
            F::Maps(T::fun_var("F", lit.clone()), T::thing_var("b"), T::EmptySet),
        );
        assert!(alpha_equivalent(&out, &expect));
    }

    #[test]
    fn singleton_unfold_drops_the_conjunction() {
        let lit = T::succ(T::thing_var("a"));
        let body = F::Maps(T::fun_var("F", lit.clone()), T::thing_var("xi"), T::EmptySet);
        let out = unfold_conj("xi", &lit, &body).unwrap();
        assert!(matches!(out, F::Maps(_, _, _)));
    }

    #[test]
    fn empty_index_is_an_error() {
        let body = F::Eq(T::thing_var("xi"), T::thing_var("xi"));
        assert_eq!(unfold_conj("xi", &T::EmptySet, &body), Err(UnfoldError::EmptyIndex));
    }

    #[test]
    fn variable_index_is_not_enumerable() {
        let body = F::Eq(T::thing_var("xi"), T::thing_var("xi"));
        assert!(matches!(
            unfold_conj("xi", &T::set_var("X"), &body),
            Err(UnfoldError::NotEnumerable(_))
        ));
    }

    #[test]
    fn multi_unfolds_to_quantifier_block() {
        let lit = T::SetLiteral(vec![T::thing_var("a"), T::thing_var("b")]);
        let body = F::Eq(T::EmptySet, T::EmptySet);
        let out = unfold_multi("f", "xi", &lit, &body).unwrap();
        match out {
            F::ForallFun { domain, body, .. } => {
                assert_eq!(domain, T::succ(T::thing_var("a")));
                assert!(matches!(*body, F::ForallFun { .. }));
            }
            _ => panic!("expected a quantifier block"),
        }
    }
}
