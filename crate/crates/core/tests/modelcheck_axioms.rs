//! Exhaustive finite-model checks of the catalogs.

use setfun::modelcheck::{
    brute_force_sum_f, check_axioms, enumerate_universe, eval, AxiomOutcome, HfSet, Valuation,
    Value,
};
use setfun::parser::parse_formula;
use setfun::syntax::LanguageId;
use setfun::theories::{theory, TheoryId};

#[test]
fn base_theory_holds_at_every_rank_except_the_infinite_axiom() {
    for rank in 1..=3 {
        let s = enumerate_universe(rank).unwrap();
        let report = check_axioms(TheoryId::T, &s, &["INF"], &[]).unwrap();
        assert!(
            report.accepted,
            "rank {rank} unexpected failures: {:?}\n{}",
            report.failures(),
            report.render()
        );
        let inf = report.rows.iter().find(|r| r.id == "INF").unwrap();
        assert_eq!(inf.outcome, AxiomOutcome::ExpectedFail, "rank {rank}");
        let sum_f = report.rows.iter().find(|r| r.id == "SUM-F").unwrap();
        assert_eq!(sum_f.outcome, AxiomOutcome::Pass, "rank {rank}");
    }
}

#[test]
fn omitting_the_expectation_turns_it_into_a_failure() {
    let s = enumerate_universe(2).unwrap();
    let report = check_axioms(TheoryId::T, &s, &[], &[]).unwrap();
    assert!(!report.accepted);
    assert_eq!(report.failures(), vec!["INF"]);
}

#[test]
fn extensionality_and_simple_atoms() {
    for rank in 1..=3 {
        let s = enumerate_universe(rank).unwrap();
        let ext = theory(TheoryId::T).lookup_axiom("EXT").unwrap();
        assert!(eval(ext, &s, &Valuation::new()).unwrap(), "rank {rank}");
    }
    let s = enumerate_universe(2).unwrap();
    let f = parse_formula("0 in {0}", LanguageId::Lt).unwrap().formula;
    assert!(eval(&f, &s, &Valuation::new()).unwrap());
    let g = parse_formula("0 in 0", LanguageId::Lt).unwrap().formula;
    assert!(!eval(&g, &s, &Valuation::new()).unwrap());
}

#[test]
fn infinity_axiom_fails_in_every_finite_structure() {
    for rank in 1..=3 {
        let s = enumerate_universe(rank).unwrap();
        let inf = theory(TheoryId::T).lookup_axiom("INF").unwrap();
        assert!(!eval(inf, &s, &Valuation::new()).unwrap(), "rank {rank}");
    }
}

#[test]
fn sum_function_brute_force_is_exhaustive() {
    let s = enumerate_universe(3).unwrap();
    let mut admissible = 0;
    for x in &s.sets {
        if x.is_empty() {
            continue;
        }
        admissible += 1;
        assert!(
            brute_force_sum_f(&s, x).unwrap(),
            "sum-function fails at {x:?} in the rank-3 structure"
        );
    }
    assert_eq!(admissible, 15);

    // The singleton of the empty set: the merged function is the
    // ur-function itself.
    let single = HfSet::singleton(HfSet::empty());
    assert!(brute_force_sum_f(&s, &single).unwrap());

    // The empty set violates the precondition.
    assert!(brute_force_sum_f(&s, &HfSet::empty()).is_err());
}

#[test]
fn matrix_extension_holds_in_the_shared_carrier() {
    // All closed axioms of the extended matrix theory hold except the
    // infinite-set demands, whose closure no finite universe satisfies.
    for rank in 1..=3 {
        let s = enumerate_universe(rank).unwrap();
        let report =
            check_axioms(TheoryId::Smt1x2Plus4, &s, &["GEN-INF"], &[]).unwrap();
        assert!(
            report.accepted,
            "rank {rank} unexpected failures: {:?}\n{}",
            report.failures(),
            report.render()
        );
    }
}

#[test]
fn carrier_disjointness_and_pair_injectivity() {
    for rank in 1..=3 {
        let s = enumerate_universe(rank).unwrap();
        // No function object equals a set object.
        for f in &s.functions {
            for x in &s.sets {
                assert_ne!(Value::Fun(f.clone()), Value::Set(x.clone()));
            }
        }
        // The pair encoding is injective over the whole set carrier.
        let mut seen = std::collections::BTreeMap::new();
        for a in &s.sets {
            for b in &s.sets {
                let enc = HfSet::pair(a, b);
                if let Some(prev) = seen.insert(enc, (a.clone(), b.clone())) {
                    panic!("pair collision: {prev:?} vs ({a:?}, {b:?})");
                }
            }
        }
    }
}

#[test]
fn surjection_image_coherence() {
    // If a function surjects its domain onto a set, that set is exactly
    // the image of the domain under the map.
    let s = enumerate_universe(2).unwrap();
    for f in &s.functions {
        for y in &s.sets {
            let mut v = Valuation::new();
            v.bind_set("X", f.domain.clone());
            v.bind_set("Y", y.clone());
            v.bind_fun("g", f.domain.clone(), f.clone());
            let atom = parse_formula("g_{X} : X ->> Y", LanguageId::Lt).unwrap().formula;
            let holds = eval(&atom, &s, &v).unwrap();
            assert_eq!(holds, f.image() == *y);
        }
    }
}
