//! Well-formedness of formulas relative to a language.

use super::{Formula, LanguageId, Sort, Term};

/// One well-formedness violation: a node path (child indices, terms first)
/// and a message naming the offending construct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WfDiagnostic {
    pub path: Vec<usize>,
    pub message: String,
}

impl std::fmt::Display for WfDiagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let path: Vec<String> = self.path.iter().map(|i| i.to_string()).collect();
        write!(f, "at {}: {}", path.join("."), self.message)
    }
}

/// Check a formula against a language. Empty result means well-formed.
pub fn well_formed(f: &Formula, lang: LanguageId) -> Vec<WfDiagnostic> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    check_formula(f, lang, &mut path, &mut out);
    out
}

fn diag(out: &mut Vec<WfDiagnostic>, path: &[usize], msg: impl Into<String>) {
    out.push(WfDiagnostic { path: path.to_vec(), message: msg.into() });
}

fn check_formula(f: &Formula, lang: LanguageId, path: &mut Vec<usize>, out: &mut Vec<WfDiagnostic>) {
    match f {
        Formula::Surj(_, _, _) | Formula::Maps(_, _, _) => {
            if matches!(lang, LanguageId::Lsmt | LanguageId::Lsmt1x2) {
                diag(out, path, format!("arrow relations are not in {}", lang.as_str()));
            }
        }
        Formula::ConjOp { .. } => {
            if lang != LanguageId::Lt {
                diag(out, path, format!("conjunctive operator is not in {}", lang.as_str()));
            }
        }
        Formula::MultiForallUr { .. } => {
            if lang != LanguageId::Lt {
                diag(out, path, format!("multiple quantifier is not in {}", lang.as_str()));
            }
        }
        Formula::ForallFun { domain, .. } | Formula::ExistsFun { domain, .. } => {
            if lang.is_matrix() {
                diag(out, path, format!("function quantifier is not in {}", lang.as_str()));
            }
            if domain.sort() != Sort::Set {
                diag(out, path, "function quantifier domain must be set-sorted");
            }
        }
        _ => {}
    }
    if let Formula::ConjOp { index_set, .. } | Formula::MultiForallUr { index_set, .. } = f {
        if index_set.sort() != Sort::Set {
            diag(out, path, "index set must be set-sorted");
        }
    }
    let mut idx = 0;
    for t in f.terms() {
        path.push(idx);
        check_term(t, lang, false, path, out);
        path.pop();
        idx += 1;
    }
    for g in f.subformulas() {
        path.push(idx);
        check_formula(g, lang, path, out);
        path.pop();
        idx += 1;
    }
}

fn check_term(
    t: &Term,
    lang: LanguageId,
    in_graph_slot: bool,
    path: &mut Vec<usize>,
    out: &mut Vec<WfDiagnostic>,
) {
    match t {
        Term::Omega => {
            if matches!(lang, LanguageId::Lsmt | LanguageId::Lsmt1x2) {
                diag(out, path, format!("the ordinal-set constant is not in {}", lang.as_str()));
            }
        }
        Term::InactiveFn => {
            if lang.is_matrix() {
                diag(out, path, format!("the inactive function is not in {}", lang.as_str()));
            }
        }
        Term::EmptyMatrix => {
            if lang.is_setfun() {
                diag(out, path, format!("matrix terms are not in {}", lang.as_str()));
            }
        }
        Term::GraphVar(_) => {
            if !in_graph_slot {
                diag(out, path, "graph name outside a function composite");
            }
        }
        Term::FunComposite { graph, domain } => {
            if lang.is_matrix() {
                diag(out, path, format!("function composites are not in {}", lang.as_str()));
            }
            match graph.as_ref() {
                Term::GraphVar(_) | Term::SetConst(_) => {}
                _ => diag(out, path, "composite graph slot must be a graph name or set constant"),
            }
            if domain.sort() != Sort::Set {
                diag(out, path, "composite domain must be set-sorted");
            }
        }
        Term::ImageApp { fun, .. } => {
            if lang.is_matrix() {
                diag(out, path, format!("image application is not in {}", lang.as_str()));
            }
            if !matches!(fun.sort(), Sort::Function(_)) {
                diag(out, path, "image application requires a function term");
            }
        }
        Term::Matrix { rows, cols, entries } => {
            if lang.is_setfun() {
                diag(out, path, format!("matrix terms are not in {}", lang.as_str()));
            }
            if *rows == 0 || *cols == 0 {
                diag(out, path, "matrix dimensions must be at least 1x1");
            }
            if entries.len() != rows * cols {
                diag(
                    out,
                    path,
                    format!("matrix has {} entries, expected {}", entries.len(), rows * cols),
                );
            }
            if matches!(lang, LanguageId::Lsmt1x2 | LanguageId::Lsmt1x2Plus4)
                && (*rows, *cols) != (1, 2)
            {
                diag(out, path, format!("{}x{} matrix outside the 1x2 restriction", rows, cols));
            }
            for e in entries {
                if matches!(e.sort(), Sort::Function(_) | Sort::Graph) {
                    diag(out, path, "matrix entries must be set- or thing-sorted");
                }
            }
        }
        Term::Exponent { base, exp } => {
            for side in [base, exp] {
                if !matches!(side.sort(), Sort::Set) {
                    diag(out, path, "exponent arguments must be set-sorted");
                }
            }
        }
        Term::Successor(a) => {
            if matches!(a.sort(), Sort::Graph) {
                diag(out, path, "singleton argument must be a thing or set");
            }
        }
        Term::Pair(a, b) => {
            for side in [a, b] {
                if matches!(side.sort(), Sort::Graph) {
                    diag(out, path, "pair components must be things or sets");
                }
            }
        }
        _ => {}
    }
    for (i, c) in t.children().iter().enumerate() {
        let slot = matches!(t, Term::FunComposite { .. }) && i == 0;
        path.push(i);
        check_term(c, lang, slot, path, out);
        path.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Formula as F;
    use crate::syntax::Term as T;

    fn sum_f_shape() -> F {
        // all X . (~(X = 0) -> all-ur f_{xi} in X . ex F_{X} . ex Y .
        //   (F_{X} : X ->> Y /\ bigwedge_{xi in X} F_{X} : xi |-> f_{xi}(xi)))
        let conj = F::conj_op(
            "xi",
            T::set_var("X"),
            F::Maps(
                T::fun_var("F", T::set_var("X")),
                T::thing_var("xi"),
                T::image(T::fun_var("f", T::succ(T::thing_var("xi"))), T::thing_var("xi")),
            ),
        );
        let body = F::exists_fun(
            "F",
            T::set_var("X"),
            F::exists_set(
                "Y",
                F::and(
                    F::Surj(T::fun_var("F", T::set_var("X")), T::set_var("X"), T::set_var("Y")),
                    conj,
                ),
            ),
        );
        F::forall_set(
            "X",
            F::implies(
                F::not(F::Eq(T::set_var("X"), T::EmptySet)),
                F::multi_forall_ur("f", "xi", T::set_var("X"), body),
            ),
        )
    }

    #[test]
    fn sum_f_is_well_formed_in_lt() {
        assert!(well_formed(&sum_f_shape(), LanguageId::Lt).is_empty());
    }

    #[test]
    fn sum_f_is_rejected_in_the_standard_fragment() {
        let diags = well_formed(&sum_f_shape(), LanguageId::LtStandard);
        assert!(!diags.is_empty());
        assert!(diags.iter().any(|d| d.message.contains("multiple quantifier")
            || d.message.contains("conjunctive operator")));
    }

    #[test]
    fn large_matrix_rejected_in_1x2_restriction() {
        let m = T::Matrix {
            rows: 2,
            cols: 2,
            entries: vec![T::EmptySet, T::EmptySet, T::EmptySet, T::EmptySet],
        };
        let f = F::Eq(m.clone(), m);
        assert!(well_formed(&f, LanguageId::Lsmt).is_empty());
        let diags = well_formed(&f, LanguageId::Lsmt1x2);
        assert!(diags.iter().any(|d| d.message.contains("1x2")));
    }

    #[test]
    fn monotone_across_languages() {
        let m = F::Eq(T::matrix_1x2(T::set_var("f"), T::set_var("X")), T::thing_var("alpha"));
        assert!(well_formed(&m, LanguageId::Lsmt1x2).is_empty());
        assert!(well_formed(&m, LanguageId::Lsmt).is_empty());
        let g = F::forall_fun(
            "f",
            T::set_var("X"),
            F::Mem(T::thing_var("alpha"), T::fun_var("f", T::set_var("X"))),
        );
        assert!(well_formed(&g, LanguageId::LtStandard).is_empty());
        assert!(well_formed(&g, LanguageId::Lt).is_empty());
    }

    #[test]
    fn arrow_relations_need_the_extended_matrix_language() {
        let f = F::Surj(T::thing_var("alpha"), T::thing_var("beta"), T::thing_var("gamma"));
        assert!(!well_formed(&f, LanguageId::Lsmt1x2).is_empty());
        assert!(well_formed(&f, LanguageId::Lsmt1x2Plus4).is_empty());
        assert!(well_formed(&f, LanguageId::Lt).is_empty());
    }
}
