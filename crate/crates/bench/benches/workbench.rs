//! Benchmarks for the hot paths: parsing and printing, proof checking of
//! the bundled derivations, universe enumeration with axiom evaluation,
//! and one-step saturation closure.

use criterion::{criterion_group, criterion_main, Criterion};
use setfun::kernel::{check_proof, derivable_depth1, RuleId};
use setfun::modelcheck::{check_axioms, enumerate_universe};
use setfun::parser::{parse_formula, parse_proof_script, pretty_print};
use setfun::syntax::{Formula, LanguageId, Term};
use setfun::theories::{axioms_of, standard_closed_axioms, TheoryId};

const PROP6: &str = include_str!("../../../fixtures/prop6-derivation.prf");
const EQ42: &str = include_str!("../../../fixtures/eq42-derivation.prf");

fn parse_print(c: &mut Criterion) {
    let texts: Vec<(String, LanguageId)> = TheoryId::all()
        .into_iter()
        .flat_map(|id| {
            let lang = setfun::theories::theory(id).language;
            axioms_of(id).iter().map(move |(_, f)| (pretty_print(f), lang))
        })
        .collect();
    c.bench_function("parse_catalogs", |b| {
        b.iter(|| {
            for (text, lang) in &texts {
                std::hint::black_box(parse_formula(text, *lang).unwrap());
            }
        })
    });
    let formulas: Vec<Formula> =
        axioms_of(TheoryId::T).iter().map(|(_, f)| f.clone()).collect();
    c.bench_function("pretty_print_catalog", |b| {
        b.iter(|| {
            for f in &formulas {
                std::hint::black_box(pretty_print(f));
            }
        })
    });
}

fn proof_checking(c: &mut Criterion) {
    let eq42 = parse_proof_script(EQ42).unwrap();
    let prop6 = parse_proof_script(PROP6).unwrap();
    c.bench_function("check_matrix_side_derivation", |b| {
        b.iter(|| std::hint::black_box(check_proof(&eq42).accepted))
    });
    c.bench_function("check_positive_core_derivation", |b| {
        b.iter(|| std::hint::black_box(check_proof(&prop6).accepted))
    });
}

fn model_checking(c: &mut Criterion) {
    c.bench_function("enumerate_rank_3", |b| {
        b.iter(|| std::hint::black_box(enumerate_universe(3).unwrap().functions.len()))
    });
    let s = enumerate_universe(2).unwrap();
    c.bench_function("check_axioms_rank_2", |b| {
        b.iter(|| {
            std::hint::black_box(
                check_axioms(TheoryId::T, &s, &["INF"], &[]).unwrap().accepted,
            )
        })
    });
}

fn saturation(c: &mut Criterion) {
    let seed: Vec<Formula> = standard_closed_axioms().into_iter().map(|(_, f)| f).collect();
    let pool = vec![Term::EmptySet, Term::succ(Term::EmptySet)];
    c.bench_function("depth1_standard_rules", |b| {
        b.iter(|| std::hint::black_box(derivable_depth1(&seed, &RuleId::standard(), &pool).len()))
    });
}

criterion_group!(benches, parse_print, proof_checking, model_checking, saturation);
criterion_main!(benches);
