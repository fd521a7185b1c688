//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its elapsed time. Run with `cargo test --test acceptance`.

use std::time::Instant;

use setfun::kernel::{check_proof, Justification, RuleId};
use setfun::modelcheck::{
    brute_force_sum_f, check_axioms, enumerate_universe, eval, AxiomOutcome, Valuation,
};
use setfun::parser::{parse_formula, parse_formula_file, parse_proof_script, pretty_print};
use setfun::saturate::{find_contradiction, saturate, Stage};
use setfun::syntax::{
    alpha_equivalent, canonicalize, unfold_nonstandard, well_formed, Formula, LanguageId, Term,
};
use setfun::theories::{
    gamma_axioms, standard_closed_axioms, sum_f_instance, theory, TheoryId,
};
use setfun::translator::translate;

const EQ42_SCRIPT: &str = include_str!("../../../fixtures/eq42-derivation.prf");
const PROP6_SCRIPT: &str = include_str!("../../../fixtures/prop6-derivation.prf");
const GAMMA30: &str = include_str!("../../../fixtures/gamma30.fml");
const EQ42: &str = include_str!("../../../fixtures/eq42.fml");
const CORPUS: &str = include_str!("../../../fixtures/corpus.fml");

fn done(criterion: &str, start: Instant) {
    println!("criterion {criterion}: PASS ({} ms)", start.elapsed().as_millis());
}

/// Criterion 1: the shipped matrix-side derivation is accepted, has at
/// least five justified steps, and checks in under a second.
#[test]
fn criterion_1_matrix_side_proof_replay() {
    let start = Instant::now();
    let script = parse_proof_script(EQ42_SCRIPT).expect("script parses");
    assert!(script.steps.len() >= 5);
    let verdict = check_proof(&script);
    assert!(verdict.accepted, "{}", verdict.report());
    assert!(start.elapsed().as_secs() < 1, "took {:?}", start.elapsed());
    done("1 (proof replay, matrix side)", start);
}

/// Criterion 2: the positive core derivation is accepted; removing the
/// conjunctive-operator introduction makes checking fail at the first
/// line whose formula carries the operator. Under a second.
#[test]
fn criterion_2_positive_core_proof_replay() {
    let start = Instant::now();
    let script = parse_proof_script(PROP6_SCRIPT).expect("script parses");
    assert!(script.steps.len() >= 8);
    let verdict = check_proof(&script);
    assert!(verdict.accepted, "{}", verdict.report());

    let mut damaged = script.clone();
    damaged.steps.retain(|s| {
        !matches!(&s.justification, Justification::Rule { rule: RuleId::I1ConjI, .. })
    });
    let verdict = check_proof(&damaged);
    assert!(!verdict.accepted);
    let (idx, _) = verdict.first_failure().expect("a failing step");
    let failing = damaged.steps.iter().find(|s| s.index == idx).unwrap();
    assert!(
        failing.formula.has_nonstandard(),
        "rejection should land on the conjunctive-operator line, got step {idx}"
    );
    assert!(start.elapsed().as_secs() < 1, "took {:?}", start.elapsed());
    done("2 (proof replay, positive core)", start);
}

/// Criterion 3: the sum-function principle brute-forced over every
/// admissible non-empty carrier set of the rank-3 structure, exhaustively
/// over families. Under a minute.
#[test]
fn criterion_3_sum_function_brute_force() {
    let start = Instant::now();
    let s = enumerate_universe(3).unwrap();
    let mut checked = 0;
    for x in &s.sets {
        if x.is_empty() {
            continue;
        }
        assert!(brute_force_sum_f(&s, x).unwrap(), "fails at {x:?}");
        checked += 1;
    }
    assert_eq!(checked, 15);
    assert!(start.elapsed().as_secs() < 60, "took {:?}", start.elapsed());
    done("3 (sum-function brute force)", start);
}

/// Criterion 4: every axiom of the base theory holds in the rank 1..=3
/// structures except the infinite-set axiom, which is expected to fail;
/// no unexpected failures. Under two minutes.
#[test]
fn criterion_4_axiom_model_check() {
    let start = Instant::now();
    for rank in 1..=3 {
        let s = enumerate_universe(rank).unwrap();
        let report = check_axioms(TheoryId::T, &s, &["INF"], &[]).unwrap();
        assert!(
            report.accepted,
            "rank {rank}: unexpected failures {:?}\n{}",
            report.failures(),
            report.render()
        );
        let inf = report.rows.iter().find(|r| r.id == "INF").unwrap();
        assert_eq!(inf.outcome, AxiomOutcome::ExpectedFail);
        assert_eq!(
            report.rows.iter().filter(|r| r.outcome == AxiomOutcome::ExpectedFail).count(),
            1,
            "only the infinite-set axiom may fail"
        );
    }
    assert!(start.elapsed().as_secs() < 120, "took {:?}", start.elapsed());
    done("4 (axiom model check)", start);
}

/// Criterion 5: the translation golden test. The parsed reverse-graph
/// axiom translates to the parsed matrix form up to alpha-equivalence;
/// all eighteen closed standard axioms translate into the extended matrix
/// language; the clause log covers every input node exactly once.
#[test]
fn criterion_5_translation_golden() {
    let start = Instant::now();
    let input = parse_formula_file(GAMMA30, LanguageId::LtStandard).unwrap().remove(0).2;
    let expected = parse_formula_file(EQ42, LanguageId::Lsmt1x2Plus4).unwrap().remove(0).2;
    let trace = translate(&input).unwrap();
    assert!(
        alpha_equivalent(&trace.output, &expected),
        "got {}",
        pretty_print(&trace.output)
    );
    let axioms = standard_closed_axioms();
    assert_eq!(axioms.len(), 18);
    for (id, axiom) in &axioms {
        let trace = translate(axiom).unwrap_or_else(|e| panic!("{id}: {e}"));
        assert!(
            well_formed(&trace.output, LanguageId::Lsmt1x2Plus4).is_empty(),
            "{id} output ill-formed"
        );
        assert_eq!(trace.clause_log.len(), trace.input.node_count(), "{id} clause log size");
        let mut paths: Vec<_> = trace.clause_log.iter().map(|c| &c.path).collect();
        paths.sort();
        paths.dedup();
        assert_eq!(paths.len(), trace.clause_log.len(), "{id} duplicate clause-log path");
    }
    done("5 (translation golden)", start);
}

/// Criterion 6: for explicit element lists of sizes 1 to 4, the folded
/// sum-function form unfolds to an alpha-equivalent standard form, and
/// both evaluate identically under every valuation in the rank-2
/// structure.
#[test]
fn criterion_6_folded_and_standard_forms_agree() {
    let start = Instant::now();
    let s = enumerate_universe(2).unwrap();
    let mut things: Vec<setfun::modelcheck::Value> =
        s.sets.iter().cloned().map(setfun::modelcheck::Value::Set).collect();
    things.extend(s.functions.iter().cloned().map(setfun::modelcheck::Value::Fun));
    let names = ["alpha", "beta", "gamma", "delta"];
    for n in 1..=4 {
        let elements: Vec<Term> = names[..n].iter().map(|s| Term::thing_var(s)).collect();
        let inst = sum_f_instance(&elements).unwrap();
        let unfolded = unfold_nonstandard(&inst.folded).unwrap();
        assert!(alpha_equivalent(&unfolded, &inst.standard), "size {n} unfold mismatch");
        // Exhaustive valuation agreement.
        let mut counters = vec![0usize; n];
        loop {
            let mut v = Valuation::new();
            for (name, &i) in names[..n].iter().zip(&counters) {
                v.bind_thing(name, things[i].clone());
            }
            let a = eval(&inst.folded, &s, &v).unwrap();
            let b = eval(&inst.standard, &s, &v).unwrap();
            assert_eq!(a, b, "size {n}, valuation {counters:?}");
            let mut pos = 0;
            loop {
                if pos == n {
                    break;
                }
                counters[pos] += 1;
                if counters[pos] < things.len() {
                    break;
                }
                counters[pos] = 0;
                pos += 1;
            }
            if pos == n {
                break;
            }
        }
    }
    done("6 (folded/standard equivalence)", start);
}

/// Criterion 7: saturation of the eighteen closed standard axioms plus
/// three schema-collection instances, full rule set, depth 2, pool of
/// five ground terms: no contradiction, elimination after introduction
/// adds no mapping atom, no truncation at the 50,000 cap. Under five
/// minutes.
#[test]
fn criterion_7_saturation_consistency() {
    let start = Instant::now();
    let mut seed: Vec<Formula> =
        standard_closed_axioms().into_iter().map(|(_, f)| f).collect();
    assert_eq!(seed.len(), 18);
    let hole_ne =
        Formula::not(Formula::Eq(Term::thing_var("alpha"), Term::thing_var("alpha")));
    let identity = Formula::Eq(Term::thing_var("beta"), Term::thing_var("alpha"));
    let gamma = gamma_axioms(&[hole_ne], &[identity]).unwrap();
    assert_eq!(gamma.len(), 3);
    seed.extend(gamma);

    let pool = vec![
        Term::EmptySet,
        Term::succ(Term::EmptySet),
        Term::succ(Term::succ(Term::EmptySet)),
        Term::SetLiteral(vec![Term::EmptySet]),
        Term::SetLiteral(vec![Term::EmptySet, Term::succ(Term::EmptySet)]),
    ];
    assert!(pool.iter().all(|t| t.is_closed()));

    let full = saturate(&seed, &RuleId::all(), &pool, 2, 50_000, Stage::Omega).unwrap();
    assert!(!full.truncated, "cap was hit: {:?}", full.per_depth_counts);
    assert!(find_contradiction(&full).is_none(), "contradiction found");

    // Elimination after introduction adds no mapping atom: the mapping
    // atoms of the elimination stage are exactly those of the plain
    // standard stage.
    let sigma = saturate(&seed, &Stage::Sigma.rules(), &pool, 2, 50_000, Stage::Sigma).unwrap();
    let upsilon =
        saturate(&seed, &Stage::Upsilon.rules(), &pool, 2, 50_000, Stage::Upsilon).unwrap();
    let phi = saturate(&seed, &Stage::Phi.rules(), &pool, 2, 50_000, Stage::Phi).unwrap();
    for st in [&sigma, &upsilon, &phi] {
        assert!(!st.truncated);
        assert!(find_contradiction(st).is_none());
    }
    let sigma_atoms: Vec<Formula> =
        sigma.mapping_atoms().into_iter().map(canonicalize).collect();
    let mut new_atoms = 0;
    for atom in phi.mapping_atoms() {
        if !sigma_atoms.contains(&canonicalize(atom)) {
            new_atoms += 1;
        }
    }
    assert_eq!(new_atoms, 0, "elimination after introduction created mapping atoms");
    assert!(start.elapsed().as_secs() < 300, "took {:?}", start.elapsed());
    done("7 (saturation consistency)", start);
}

/// Criterion 8: the full fixture corpus (every catalog axiom plus the
/// bundled extras, at least forty formulas over every construct) satisfies
/// print-then-parse identity up to alpha and byte-level idempotence of the
/// printer on its own output.
#[test]
fn criterion_8_parser_round_trip() {
    let start = Instant::now();
    let mut corpus: Vec<(String, LanguageId, Formula)> = Vec::new();
    for id in TheoryId::all() {
        let th = theory(id);
        for (axiom_id, f) in &th.axioms {
            corpus.push((axiom_id.to_string(), th.language, f.clone()));
        }
    }
    corpus.push((
        "REV-GRAPH".into(),
        LanguageId::LtStandard,
        theory(TheoryId::TInf0).lookup_axiom("REV-GRAPH").unwrap().clone(),
    ));
    for (line, lang, f) in parse_formula_file(CORPUS, LanguageId::Lt).unwrap() {
        corpus.push((format!("corpus line {line}"), lang, f));
    }
    assert!(corpus.len() >= 40, "corpus has only {} formulas", corpus.len());
    for (name, lang, f) in &corpus {
        let printed = pretty_print(f);
        let reparsed = parse_formula(&printed, *lang)
            .unwrap_or_else(|e| panic!("{name}: `{printed}`: {e}"));
        assert!(alpha_equivalent(&reparsed.formula, f), "{name} round trip");
        assert_eq!(pretty_print(&reparsed.formula), printed, "{name} idempotence");
    }
    done("8 (parser round trip)", start);
}

/// Criterion 9: in every generated structure no function object equals a
/// set object, and the pair encoding is injective, exhaustively at ranks
/// 1 to 3.
#[test]
fn criterion_9_carriers_and_pairs() {
    let start = Instant::now();
    use setfun::modelcheck::{HfSet, Value};
    for rank in 1..=3 {
        let s = enumerate_universe(rank).unwrap();
        for f in &s.functions {
            for x in &s.sets {
                assert_ne!(Value::Fun(f.clone()), Value::Set(x.clone()));
            }
        }
        let mut seen = std::collections::BTreeMap::new();
        for a in &s.sets {
            for b in &s.sets {
                let enc = HfSet::pair(a, b);
                if let Some((pa, pb)) = seen.insert(enc, (a.clone(), b.clone())) {
                    assert!(
                        &pa == a && &pb == b,
                        "pair collision at rank {rank}: ({pa:?}, {pb:?}) vs ({a:?}, {b:?})"
                    );
                }
            }
        }
    }
    done("9 (carrier disjointness, pair injectivity)", start);
}
