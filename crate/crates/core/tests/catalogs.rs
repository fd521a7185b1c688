//! Catalog integrity: every theory file loads, parses, and satisfies the
//! documented counting and membership facts.

use setfun::syntax::{alpha_equivalent, well_formed, Formula, LanguageId, Term};
use setfun::theories::{
    axioms_of, gamma_axioms, instantiate_replacement, instantiate_separation,
    instantiate_smt_schema, standard_closed_axioms, sum_f_forms_agree, sum_f_instance, theory,
    SchemaError, TheoryId,
};

#[test]
fn axiom_counts() {
    assert_eq!(axioms_of(TheoryId::T).len(), 20);
    assert_eq!(axioms_of(TheoryId::TInf0).len(), 19);
    assert_eq!(axioms_of(TheoryId::T).len(), axioms_of(TheoryId::TInf0).len() + 1);
    assert_eq!(standard_closed_axioms().len(), 18);
    assert_eq!(axioms_of(TheoryId::Smt).len(), 7);
    assert_eq!(axioms_of(TheoryId::Smt1x2).len(), 10);
    assert_eq!(axioms_of(TheoryId::Smt1x2Plus4).len(), 14);
}

#[test]
fn sum_f_membership() {
    let t = theory(TheoryId::T);
    assert!(t.lookup_axiom("SUM-F").is_some());
    let frag = theory(TheoryId::TInf0);
    assert!(frag.lookup_axiom("SUM-F").is_none());
    assert!(frag.lookup_axiom("REV-GRAPH").is_some());
    // The extension keeps the defining axiom for the ordinal-set constant.
    assert!(theory(TheoryId::Smt1x2Plus4).lookup_axiom("OMEGA-DEF").is_some());
}

#[test]
fn every_axiom_is_closed_and_well_formed() {
    for id in TheoryId::all() {
        let th = theory(id);
        for (axiom_id, f) in &th.axioms {
            assert!(
                well_formed(f, th.language).is_empty(),
                "{axiom_id} fails the {} check",
                th.language.as_str()
            );
            assert!(f.is_closed(), "{axiom_id} has free variables");
        }
    }
}

#[test]
fn restricted_catalog_drops_the_removed_schemata() {
    let th = theory(TheoryId::Smt1x2);
    for gone in ["set-matrix", "reduction", "omission", "set-of-set-matrices"] {
        assert!(!th.has_schema(gone), "{gone} should be gone from SMT-1x2");
        assert!(th.lookup_axiom("REDUCTION").is_none());
    }
    assert!(th.lookup_axiom("MATRIX-1x2").is_some());
    assert!(theory(TheoryId::Smt).has_schema("set-of-set-matrices"));
}

#[test]
fn separation_instances() {
    let hole_ne = Formula::not(Formula::Eq(Term::thing_var("alpha"), Term::thing_var("alpha")));
    let inst = instantiate_separation(&hole_ne).unwrap();
    assert!(inst.is_closed());
    assert!(well_formed(&inst, LanguageId::LtStandard).is_empty());

    // A hole formula with an extra free variable is rejected.
    let bad = Formula::Mem(Term::thing_var("alpha"), Term::set_var("Y"));
    assert!(matches!(
        instantiate_separation(&bad),
        Err(SchemaError::UnexpectedFreeVariable { .. })
    ));
}

#[test]
fn replacement_instances() {
    let identity = Formula::Eq(Term::thing_var("beta"), Term::thing_var("alpha"));
    let inst = instantiate_replacement(&identity).unwrap();
    assert!(inst.is_closed());
    assert!(well_formed(&inst, LanguageId::LtStandard).is_empty());

    // Three distinct free variables: one hole too many.
    let three = Formula::and(
        Formula::Eq(Term::thing_var("beta"), Term::thing_var("alpha")),
        Formula::Eq(Term::thing_var("gamma"), Term::thing_var("gamma")),
    );
    assert!(matches!(
        instantiate_replacement(&three),
        Err(SchemaError::UnexpectedFreeVariable { .. })
    ));
}

#[test]
fn matrix_schema_dimensions() {
    let inst = instantiate_smt_schema("set-matrix", 1, 2).unwrap();
    assert!(inst.is_closed());
    assert!(well_formed(&inst, LanguageId::Lsmt).is_empty());
    // Shape: two universal thing quantifiers, then the existence of the matrix.
    let printed = setfun::parser::pretty_print(&inst);
    assert_eq!(printed, "all alpha11 . all alpha12 . ex beta . beta = [alpha11 alpha12]");

    assert!(matches!(
        instantiate_smt_schema("epsilon", 1, 1),
        Err(SchemaError::Dimension(_))
    ));
    assert!(matches!(
        instantiate_smt_schema("division", 1, 1),
        Err(SchemaError::Dimension(_))
    ));
    assert!(instantiate_smt_schema("omission", 1, 2).is_ok());
    assert!(instantiate_smt_schema("matrix-ext", 2, 2).is_ok());
    assert!(instantiate_smt_schema("set-of-set-matrices", 1, 2).is_ok());
    assert!(matches!(instantiate_smt_schema("nonsense", 1, 2), Err(SchemaError::UnknownSchema(_))));
}

#[test]
fn gamma_generator() {
    let only_fixed = gamma_axioms(&[], &[]).unwrap();
    assert_eq!(only_fixed.len(), 1);
    assert!(alpha_equivalent(
        &only_fixed[0],
        theory(TheoryId::TInf0).lookup_axiom("REV-GRAPH").unwrap()
    ));

    let hole_ne = Formula::not(Formula::Eq(Term::thing_var("alpha"), Term::thing_var("alpha")));
    let two = gamma_axioms(&[hole_ne], &[]).unwrap();
    assert_eq!(two.len(), 2);
    for f in &two {
        assert!(well_formed(f, LanguageId::LtStandard).is_empty());
    }
}

#[test]
fn sum_f_instances_fold_and_unfold() {
    for n in 1..=4 {
        let elements: Vec<Term> =
            ["alpha", "beta", "gamma", "delta"][..n].iter().map(|s| Term::thing_var(s)).collect();
        let inst = sum_f_instance(&elements).unwrap();
        assert!(sum_f_forms_agree(&inst), "size {n} forms disagree");
        assert!(well_formed(&inst.folded, LanguageId::Lt).is_empty());
        assert!(well_formed(&inst.standard, LanguageId::Lt).is_empty());
        // The folded form is rejected by the standard fragment.
        assert!(!well_formed(&inst.folded, LanguageId::LtStandard).is_empty());
    }
    // Duplicates are rejected.
    let dup = [Term::thing_var("alpha"), Term::thing_var("alpha")];
    assert!(matches!(sum_f_instance(&dup), Err(SchemaError::DuplicateElement)));
    assert!(matches!(sum_f_instance(&[]), Err(SchemaError::EmptyElements)));
}

#[test]
fn folded_sum_f_matches_the_catalog_axiom() {
    // The catalog's nonstandard axiom restricted to a literal should have
    // the same shape as the generated instance's folded form.
    let t = theory(TheoryId::T);
    let sum_f = t.lookup_axiom("SUM-F").unwrap();
    assert!(sum_f.has_nonstandard());
    let fv = setfun::syntax::free_variables(sum_f);
    assert!(fv.is_empty());
}
