//! Negative kernel tests: derivations that would be unsound must be
//! rejected with a diagnostic naming the violated side condition.

use setfun::kernel::{check_step, Justification, LogicAxiom, RuleId, Step};
use setfun::parser::parse_formula_raw;
use setfun::syntax::Formula;
use setfun::theories::TheoryId;

fn f(text: &str) -> Formula {
    parse_formula_raw(text).unwrap_or_else(|e| panic!("`{text}`: {e}")).formula
}

fn step(index: usize, formula: Formula, justification: Justification) -> Step {
    Step { index, formula, justification, fresh_constants: vec![] }
}

fn logic(formula: &str, ax: LogicAxiom) -> Result<(), String> {
    check_step(&[], &step(1, f(formula), Justification::Logic(ax)), TheoryId::TInf0)
}

fn rule(ctx: &[&str], conclusion: &str, rule: RuleId) -> Result<(), String> {
    let context: Vec<Step> = ctx
        .iter()
        .enumerate()
        .map(|(i, text)| {
            step(i + 1, f(text), Justification::Rule { premises: vec![], rule: RuleId::Taut })
        })
        .collect();
    let premises = (1..=ctx.len()).collect();
    let s = step(ctx.len() + 1, f(conclusion), Justification::Rule { premises, rule });
    check_step(&context, &s, TheoryId::TInf0)
}

#[test]
fn leibniz_rewriting_never_crosses_a_capturing_binder() {
    // The free x of the equation is not the bound x of the quantifier.
    let bad = "x = 0 -> ((all x . x in W) <-> all x . 0 in W)";
    assert!(logic(bad, LogicAxiom::Subst).is_err());
    // Without the capture the rewrite is fine.
    let good = "x = 0 -> ((all y . x in y) <-> all y . 0 in y)";
    assert!(logic(good, LogicAxiom::Subst).is_ok());
    // The direction is fixed: rewriting right-to-left is not this axiom.
    let reversed = "x = 0 -> ((all y . 0 in y) <-> all y . x in y)";
    assert!(logic(reversed, LogicAxiom::Subst).is_err());
}

#[test]
fn instantiation_respects_sorts() {
    // A set quantifier cannot be instantiated by a thing variable.
    assert!(rule(&["all X . X = X"], "alpha = alpha", RuleId::UnivE).is_err());
    assert!(rule(&["all X . X = X"], "Y = Y", RuleId::UnivE).is_ok());
    // Thing quantifiers accept set terms.
    assert!(rule(&["all alpha . alpha = alpha"], "{0} = {0}", RuleId::UnivE).is_ok());
}

#[test]
fn instantiation_axiom_is_capture_avoiding() {
    // (all x . ex y . ~(x = y)) -> (ex y . ~(y = y)) must not check: the
    // witness y would be captured.
    let bad = "(all x . ex y . ~(x = y)) -> ex y . ~(y = y)";
    assert!(logic(bad, LogicAxiom::Inst).is_err());
    let good = "(all x . ex y . ~(x = y)) -> ex y . ~(z = y)";
    assert!(logic(good, LogicAxiom::Inst).is_ok());
}

#[test]
fn existential_elimination_guards_its_eigenvariable() {
    let bad = "(all x . (x in W -> x = 0)) -> ((ex x . x in W) -> x = 0)";
    let err = logic(bad, LogicAxiom::EElim).unwrap_err();
    assert!(err.contains("side condition"), "{err}");
    let good = "(all x . (x in W -> 0 in W)) -> ((ex x . x in W) -> 0 in W)";
    assert!(logic(good, LogicAxiom::EElim).is_ok());
}

#[test]
fn literal_axioms_check_membership_syntactically() {
    assert!(logic("0 in {0, succ(0)}", LogicAxiom::MemLit).is_ok());
    assert!(logic("succ(succ(0)) in {0, succ(0)}", LogicAxiom::MemLit).is_err());
    assert!(logic(
        "all alpha . (alpha in {0} <-> alpha = 0)",
        LogicAxiom::LitChar
    )
    .is_ok());
    assert!(logic(
        "all alpha . (alpha in {0} <-> alpha = succ(0))",
        LogicAxiom::LitChar
    )
    .is_err());
}

#[test]
fn conj_introduction_rejects_extra_premises() {
    let err = rule(
        &[
            "Fhat_{{0, succ(0)}} : 0 |-> 0",
            "Fhat_{{0, succ(0)}} : succ(0) |-> 0",
            "0 = 0",
        ],
        "bigwedge_{xi in {0, succ(0)}} Fhat_{{0, succ(0)}} : xi |-> 0",
        RuleId::I1ConjI,
    )
    .unwrap_err();
    assert!(err.contains("not part of the family"), "{err}");
}

#[test]
fn conj_introduction_needs_closed_elements() {
    let err = rule(
        &["Fhat_{{alpha}} : alpha |-> 0"],
        "bigwedge_{xi in {alpha}} Fhat_{{alpha}} : xi |-> 0",
        RuleId::I1ConjI,
    )
    .unwrap_err();
    assert!(err.contains("closed"), "{err}");
}

#[test]
fn conj_introduction_body_must_be_a_mapping_atom() {
    let err = rule(
        &["0 in {0}"],
        "bigwedge_{xi in {0}} xi in {0}",
        RuleId::I1ConjI,
    )
    .unwrap_err();
    assert!(err.contains("mapping atom"), "{err}");
}

#[test]
fn taut_does_not_prove_quantifier_facts() {
    // Propositionally, a universal and its instance are unrelated atoms.
    assert!(rule(&["all X . X = X"], "0 = 0", RuleId::Taut).is_err());
    assert!(rule(&["0 = 0"], "0 = 0 \\/ w = w", RuleId::Taut).is_ok());
}

#[test]
fn double_negation_needs_the_exact_shape() {
    assert!(rule(&["~~(0 = 0)"], "0 = 0", RuleId::NotE).is_ok());
    assert!(rule(&["~(0 = 0)"], "0 = 0", RuleId::NotE).is_err());
}

#[test]
fn premise_citations_must_resolve_and_precede() {
    // Citing a later step.
    let s1 = step(
        1,
        f("0 = 0"),
        Justification::Rule { premises: vec![2], rule: RuleId::AndE },
    );
    let err = check_step(&[], &s1, TheoryId::TInf0).unwrap_err();
    assert!(err.contains("does not exist"), "{err}");
}

#[test]
fn fresh_constants_belong_to_rule_c_alone() {
    let s = Step {
        index: 1,
        formula: f("0 = 0"),
        justification: Justification::Logic(LogicAxiom::Refl),
        fresh_constants: vec!["Khat".to_string()],
    };
    let err = check_step(&[], &s, TheoryId::TInf0).unwrap_err();
    assert!(err.contains("RULE-C"), "{err}");
}

#[test]
fn axiom_citations_must_match_the_catalog_formula() {
    let s = step(
        1,
        f("all X . X = X"),
        Justification::Axiom { theory: None, name: "EXT".into() },
    );
    let err = check_step(&[], &s, TheoryId::TInf0).unwrap_err();
    assert!(err.contains("does not match"), "{err}");
    // Matrix-theory axioms are not available under the set/function theories.
    let s = step(
        1,
        f("all x . all y . (x = y <-> all alpha . (alpha in x <-> alpha in y))"),
        Justification::Axiom { theory: Some(TheoryId::Smt), name: "GEN-EXT".into() },
    );
    let err = check_step(&[], &s, TheoryId::TInf0).unwrap_err();
    assert!(err.contains("not available"), "{err}");
}

#[test]
fn schema_availability_is_per_theory() {
    let inst = setfun::theories::instantiate_smt_schema("set-matrix", 1, 2).unwrap();
    let s = step(
        1,
        inst,
        Justification::Schema {
            name: "set-matrix".into(),
            args: vec![
                setfun::kernel::SchemaArg::Dim(1),
                setfun::kernel::SchemaArg::Dim(2),
            ],
        },
    );
    // Fine under the full matrix theory, not under the 1x2 restriction.
    assert!(check_step(&[], &s, TheoryId::Smt).is_ok());
    let err = check_step(&[], &s, TheoryId::Smt1x2).unwrap_err();
    assert!(err.contains("not available"), "{err}");
}
