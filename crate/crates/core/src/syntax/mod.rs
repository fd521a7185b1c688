//! Multi-sorted abstract syntax shared by the set/function language, its
//! standard fragment, and the three set-matrix languages.
//!
//! Naming conventions follow the concrete syntax: Roman names are set
//! variables, spelled-out Greek names are thing variables, `name_{domain}`
//! composites are function variables, and a `hat` suffix marks a constant.

mod alpha;
mod free;
mod subst;
mod unfold;
mod wf;

pub use alpha::{alpha_equivalent, canonicalize};
pub use free::{free_variables, FreeVar};
pub use subst::{
    substitute, substitute_fun, substitute_fun_family, SubstError,
};
pub use unfold::{unfold_conj, unfold_multi, unfold_nonstandard, UnfoldError};
pub use wf::{well_formed, WfDiagnostic};

pub type Name = String;

/// Which of the five object languages a formula is judged against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LanguageId {
    /// Full set/function language: composites, image application, the
    /// multiple quantifier and the conjunctive operator.
    Lt,
    /// Standard fragment: no multiple quantifier, no conjunctive operator.
    LtStandard,
    /// Set-matrix language with matrices of every dimension.
    Lsmt,
    /// Set-matrix language restricted to 1x2 matrices.
    Lsmt1x2,
    /// 1x2 restriction extended with arrow relations and the constants
    /// for the ordinal set and the empty matrix.
    Lsmt1x2Plus4,
}

impl LanguageId {
    pub fn as_str(self) -> &'static str {
        match self {
            LanguageId::Lt => "LT",
            LanguageId::LtStandard => "LT-standard",
            LanguageId::Lsmt => "LSMT",
            LanguageId::Lsmt1x2 => "LSMT-1x2",
            LanguageId::Lsmt1x2Plus4 => "LSMT-1x2-plus4",
        }
    }

    pub fn parse(s: &str) -> Option<LanguageId> {
        match s {
            "LT" => Some(LanguageId::Lt),
            "LT-standard" => Some(LanguageId::LtStandard),
            "LSMT" => Some(LanguageId::Lsmt),
            "LSMT-1x2" => Some(LanguageId::Lsmt1x2),
            "LSMT-1x2-plus4" => Some(LanguageId::Lsmt1x2Plus4),
            _ => None,
        }
    }

    /// True if the language belongs to the set/function family.
    pub fn is_setfun(self) -> bool {
        matches!(self, LanguageId::Lt | LanguageId::LtStandard)
    }

    /// True if the language belongs to the set-matrix family.
    pub fn is_matrix(self) -> bool {
        !self.is_setfun()
    }
}

/// Terms of all five languages.
///
/// `FunComposite { graph, domain }` is the subscripted function variable
/// `f_X`; its graph slot is a `GraphVar` for variables and a `SetConst`
/// for constants introduced during proofs. `Successor(t)` denotes the
/// singleton `{t}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    /// The empty set, printed `0`.
    EmptySet,
    /// The set of all finite ordinals, printed `w`.
    Omega,
    /// The inactive function, printed `id0`.
    InactiveFn,
    /// The empty 1x2 matrix constant, printed `[0 0]`.
    EmptyMatrix,
    SetVar(Name),
    ThingVar(Name),
    /// Graph-name slot of a variable function composite.
    GraphVar(Name),
    SetConst(Name),
    ThingConst(Name),
    /// Function composite `graph_{domain}`.
    FunComposite { graph: Box<Term>, domain: Box<Term> },
    /// Singleton former `succ(t)`.
    Successor(Box<Term>),
    /// Ordered pair `(a, b)`.
    Pair(Box<Term>, Box<Term>),
    /// Image of `arg` under the function term `fun`, printed `f_{d}(a)`.
    ImageApp { fun: Box<Term>, arg: Box<Term> },
    /// Explicit finite set `{t1, ..., tn}`.
    SetLiteral(Vec<Term>),
    /// Set matrix with `rows * cols` entries in row-major order.
    Matrix { rows: usize, cols: usize, entries: Vec<Term> },
    /// Exponent `base^exp`: the set of graphs of functions from `exp` to `base`.
    Exponent { base: Box<Term>, exp: Box<Term> },
}

impl Term {
    pub fn set_var(n: &str) -> Term {
        Term::SetVar(n.to_string())
    }

    pub fn thing_var(n: &str) -> Term {
        Term::ThingVar(n.to_string())
    }

    pub fn set_const(n: &str) -> Term {
        Term::SetConst(n.to_string())
    }

    pub fn composite(graph: Term, domain: Term) -> Term {
        Term::FunComposite { graph: Box::new(graph), domain: Box::new(domain) }
    }

    /// Variable composite `name_{domain}`.
    pub fn fun_var(name: &str, domain: Term) -> Term {
        Term::composite(Term::GraphVar(name.to_string()), domain)
    }

    /// Constant composite `name_{domain}` with a constant graph slot.
    pub fn fun_const(name: &str, domain: Term) -> Term {
        Term::composite(Term::SetConst(name.to_string()), domain)
    }

    pub fn succ(t: Term) -> Term {
        Term::Successor(Box::new(t))
    }

    pub fn pair(a: Term, b: Term) -> Term {
        Term::Pair(Box::new(a), Box::new(b))
    }

    pub fn image(fun: Term, arg: Term) -> Term {
        Term::ImageApp { fun: Box::new(fun), arg: Box::new(arg) }
    }

    pub fn matrix_1x2(a: Term, b: Term) -> Term {
        if a == Term::EmptySet && b == Term::EmptySet {
            // Canonical form of the empty-matrix constant.
            Term::EmptyMatrix
        } else {
            Term::Matrix { rows: 1, cols: 2, entries: vec![a, b] }
        }
    }

    pub fn exponent(base: Term, exp: Term) -> Term {
        Term::Exponent { base: Box::new(base), exp: Box::new(exp) }
    }

    /// Syntax-directed sort of a term, if it has one.
    pub fn sort(&self) -> Sort {
        match self {
            Term::EmptySet
            | Term::Omega
            | Term::SetVar(_)
            | Term::SetConst(_)
            | Term::SetLiteral(_)
            | Term::Successor(_)
            | Term::Pair(_, _)
            | Term::Exponent { .. } => Sort::Set,
            Term::ThingVar(_) | Term::ThingConst(_) | Term::ImageApp { .. } => Sort::Thing,
            Term::InactiveFn => Sort::Function(Box::new(Term::EmptySet)),
            Term::FunComposite { domain, .. } => Sort::Function(domain.clone()),
            Term::GraphVar(_) => Sort::Graph,
            Term::EmptyMatrix => Sort::Matrix(1, 2),
            Term::Matrix { rows, cols, .. } => Sort::Matrix(*rows, *cols),
        }
    }

    /// Children in a fixed order, used for node paths and traversals.
    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::EmptySet
            | Term::Omega
            | Term::InactiveFn
            | Term::EmptyMatrix
            | Term::SetVar(_)
            | Term::ThingVar(_)
            | Term::GraphVar(_)
            | Term::SetConst(_)
            | Term::ThingConst(_) => vec![],
            Term::FunComposite { graph, domain } => vec![graph, domain],
            Term::Successor(t) => vec![t],
            Term::Pair(a, b) => vec![a, b],
            Term::ImageApp { fun, arg } => vec![fun, arg],
            Term::SetLiteral(ts) => ts.iter().collect(),
            Term::Matrix { entries, .. } => entries.iter().collect(),
            Term::Exponent { base, exp } => vec![base, exp],
        }
    }

    /// True if no variables occur (constants and composites of constants allowed).
    pub fn is_closed(&self) -> bool {
        match self {
            Term::SetVar(_) | Term::ThingVar(_) | Term::GraphVar(_) => false,
            _ => self.children().iter().all(|c| c.is_closed()),
        }
    }

    /// All constant names occurring in the term.
    pub fn constant_names(&self, out: &mut std::collections::BTreeSet<Name>) {
        match self {
            Term::SetConst(n) | Term::ThingConst(n) => {
                out.insert(n.clone());
            }
            _ => {}
        }
        for c in self.children() {
            c.constant_names(out);
        }
    }
}

/// Sorts carried by variables and assigned to terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Set,
    Thing,
    /// Functions on the given domain term.
    Function(Box<Term>),
    Graph,
    Matrix(usize, usize),
}

impl Sort {
    /// True if a term of sort `self` may instantiate a variable of sort `var`.
    /// Thing variables range over everything; set variables only over sets.
    pub fn fits(&self, var: &Sort) -> bool {
        match (var, self) {
            (Sort::Thing, _) => true,
            (Sort::Set, Sort::Set) | (Sort::Set, Sort::Graph) => true,
            (Sort::Graph, Sort::Set) | (Sort::Graph, Sort::Graph) => true,
            (Sort::Function(_), Sort::Function(_)) => true,
            (Sort::Matrix(m, n), Sort::Matrix(m2, n2)) => m == m2 && n == n2,
            _ => false,
        }
    }
}

/// Formulas of all five languages.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Eq(Term, Term),
    Mem(Term, Term),
    /// `t1 : t2 ->> t3`, surjection of `t1` from `t2` onto `t3`.
    Surj(Term, Term, Term),
    /// `t1 : t2 |-> t3`, `t1` maps `t2` to `t3`.
    Maps(Term, Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    ForallSet(Name, Box<Formula>),
    ExistsSet(Name, Box<Formula>),
    ForallThing(Name, Box<Formula>),
    ExistsThing(Name, Box<Formula>),
    /// `all graph_{domain} . body`: quantifies the composite (graph, domain).
    ForallFun { graph: Name, domain: Term, body: Box<Formula> },
    ExistsFun { graph: Name, domain: Term, body: Box<Formula> },
    /// Multiple quantifier over a family of ur-functions indexed in
    /// `index_set`: binds the family name and the index variable.
    MultiForallUr { family: Name, index: Name, index_set: Term, body: Box<Formula> },
    /// Conjunctive operator over `index_set`: binds the index variable.
    ConjOp { index: Name, index_set: Term, body: Box<Formula> },
}

#[allow(clippy::should_implement_trait)]
impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall_set(n: &str, f: Formula) -> Formula {
        Formula::ForallSet(n.to_string(), Box::new(f))
    }

    pub fn exists_set(n: &str, f: Formula) -> Formula {
        Formula::ExistsSet(n.to_string(), Box::new(f))
    }

    pub fn forall_thing(n: &str, f: Formula) -> Formula {
        Formula::ForallThing(n.to_string(), Box::new(f))
    }

    pub fn exists_thing(n: &str, f: Formula) -> Formula {
        Formula::ExistsThing(n.to_string(), Box::new(f))
    }

    pub fn forall_fun(graph: &str, domain: Term, body: Formula) -> Formula {
        Formula::ForallFun { graph: graph.to_string(), domain, body: Box::new(body) }
    }

    pub fn exists_fun(graph: &str, domain: Term, body: Formula) -> Formula {
        Formula::ExistsFun { graph: graph.to_string(), domain, body: Box::new(body) }
    }

    pub fn conj_op(index: &str, index_set: Term, body: Formula) -> Formula {
        Formula::ConjOp { index: index.to_string(), index_set, body: Box::new(body) }
    }

    pub fn multi_forall_ur(family: &str, index: &str, index_set: Term, body: Formula) -> Formula {
        Formula::MultiForallUr {
            family: family.to_string(),
            index: index.to_string(),
            index_set,
            body: Box::new(body),
        }
    }

    /// Right-nested conjunction of one or more formulas.
    pub fn and_all(mut fs: Vec<Formula>) -> Formula {
        let last = fs.pop().expect("and_all on empty list");
        fs.into_iter().rev().fold(last, |acc, f| Formula::and(f, acc))
    }

    /// Direct subterms of this node (atoms and binder domains / index sets).
    pub fn terms(&self) -> Vec<&Term> {
        match self {
            Formula::Eq(a, b) | Formula::Mem(a, b) => vec![a, b],
            Formula::Surj(a, b, c) | Formula::Maps(a, b, c) => vec![a, b, c],
            Formula::ForallFun { domain, .. } | Formula::ExistsFun { domain, .. } => vec![domain],
            Formula::MultiForallUr { index_set, .. } | Formula::ConjOp { index_set, .. } => {
                vec![index_set]
            }
            _ => vec![],
        }
    }

    /// Direct subformulas of this node.
    pub fn subformulas(&self) -> Vec<&Formula> {
        match self {
            Formula::Not(f) => vec![f],
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => vec![a, b],
            Formula::ForallSet(_, f)
            | Formula::ExistsSet(_, f)
            | Formula::ForallThing(_, f)
            | Formula::ExistsThing(_, f) => vec![f],
            Formula::ForallFun { body, .. }
            | Formula::ExistsFun { body, .. }
            | Formula::MultiForallUr { body, .. }
            | Formula::ConjOp { body, .. } => vec![body],
            _ => vec![],
        }
    }

    /// True if the formula contains a conjunctive operator or multiple quantifier.
    pub fn has_nonstandard(&self) -> bool {
        match self {
            Formula::ConjOp { .. } | Formula::MultiForallUr { .. } => true,
            _ => self.subformulas().iter().any(|f| f.has_nonstandard()),
        }
    }

    /// Number of AST nodes (formula nodes plus term nodes), used by
    /// translation audits.
    pub fn node_count(&self) -> usize {
        fn term_nodes(t: &Term) -> usize {
            1 + t.children().iter().map(|c| term_nodes(c)).sum::<usize>()
        }
        1 + self.terms().iter().map(|t| term_nodes(t)).sum::<usize>()
            + self.subformulas().iter().map(|f| f.node_count()).sum::<usize>()
    }

    /// All constant names occurring in the formula.
    pub fn constant_names(&self) -> std::collections::BTreeSet<Name> {
        let mut out = std::collections::BTreeSet::new();
        fn walk(f: &Formula, out: &mut std::collections::BTreeSet<Name>) {
            for t in f.terms() {
                t.constant_names(out);
            }
            for g in f.subformulas() {
                walk(g, out);
            }
        }
        walk(self, &mut out);
        out
    }

    /// True if the formula has no free variables of any namespace.
    pub fn is_closed(&self) -> bool {
        free_variables(self).is_empty()
    }
}

/// Elements of an explicitly enumerable index term: a set literal lists its
/// entries, a singleton former lists its argument.
pub fn enumerable_elements(t: &Term) -> Option<Vec<Term>> {
    match t {
        Term::SetLiteral(ts) => Some(ts.clone()),
        Term::Successor(t) => Some(vec![(**t).clone()]),
        Term::EmptySet => Some(vec![]),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorts_are_syntax_directed() {
        assert_eq!(Term::set_var("X").sort(), Sort::Set);
        assert_eq!(Term::thing_var("alpha").sort(), Sort::Thing);
        assert_eq!(Term::succ(Term::EmptySet).sort(), Sort::Set);
        assert_eq!(
            Term::fun_var("f", Term::set_var("X")).sort(),
            Sort::Function(Box::new(Term::set_var("X")))
        );
        assert_eq!(Term::matrix_1x2(Term::EmptySet, Term::EmptySet).sort(), Sort::Matrix(1, 2));
    }

    #[test]
    fn and_all_nests_right() {
        let a = Formula::Eq(Term::EmptySet, Term::EmptySet);
        let f = Formula::and_all(vec![a.clone(), a.clone(), a.clone()]);
        match f {
            Formula::And(_, rest) => assert!(matches!(*rest, Formula::And(_, _))),
            _ => panic!("expected nested conjunction"),
        }
    }

    #[test]
    fn enumerable_index_terms() {
        let lit = Term::SetLiteral(vec![Term::EmptySet, Term::succ(Term::EmptySet)]);
        assert_eq!(enumerable_elements(&lit).unwrap().len(), 2);
        assert_eq!(enumerable_elements(&Term::succ(Term::EmptySet)).unwrap().len(), 1);
        assert!(enumerable_elements(&Term::set_var("X")).is_none());
    }
}
