//! Axiom catalogs and schema instantiators.
//!
//! Catalogs are parsed from the plain-text theory files under `data/` at
//! first use; axiom ids are stable public API. The schema collection used
//! by the infinite-axiom variant of the base theory (separation and
//! replacement instances plus the fixed reverse-graph axiom) is exposed as
//! a generator, never a materialized list.

use crate::parser::{parse_formula, pretty_print};
use crate::syntax::{
    alpha_equivalent, free_variables, substitute, well_formed, Formula, LanguageId, Name, Sort,
    Term,
};
use std::collections::BTreeSet;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoryId {
    /// The finite nonclassical theory of sets and functions.
    T,
    /// Its standard fragment with the schema collection, no sum-function
    /// axiom and no nonstandard rules.
    TInf0,
    /// Full set matrix theory.
    Smt,
    /// Set matrix theory restricted to 1x2 matrices.
    Smt1x2,
    /// The 1x2 restriction extended with the four defining axioms.
    Smt1x2Plus4,
}

impl TheoryId {
    pub fn as_str(self) -> &'static str {
        match self {
            TheoryId::T => "T",
            TheoryId::TInf0 => "T-inf-0",
            TheoryId::Smt => "SMT",
            TheoryId::Smt1x2 => "SMT-1x2",
            TheoryId::Smt1x2Plus4 => "SMT-1x2-plus4",
        }
    }

    pub fn parse(s: &str) -> Option<TheoryId> {
        match s {
            "T" => Some(TheoryId::T),
            "T-inf-0" => Some(TheoryId::TInf0),
            "SMT" => Some(TheoryId::Smt),
            "SMT-1x2" => Some(TheoryId::Smt1x2),
            "SMT-1x2-plus4" => Some(TheoryId::Smt1x2Plus4),
            _ => None,
        }
    }

    /// Language its axioms are stated in.
    pub fn axiom_language(self) -> LanguageId {
        match self {
            TheoryId::T => LanguageId::Lt,
            TheoryId::TInf0 => LanguageId::LtStandard,
            TheoryId::Smt => LanguageId::Lsmt,
            TheoryId::Smt1x2 => LanguageId::Lsmt1x2,
            TheoryId::Smt1x2Plus4 => LanguageId::Lsmt1x2Plus4,
        }
    }

    /// Language proof-script formulas may use. Derivations over the
    /// set/function theories may build nonstandard formulas even when the
    /// axioms themselves are standard.
    pub fn script_language(self) -> LanguageId {
        match self {
            TheoryId::T | TheoryId::TInf0 => LanguageId::Lt,
            other => other.axiom_language(),
        }
    }

    pub fn all() -> [TheoryId; 5] {
        [TheoryId::T, TheoryId::TInf0, TheoryId::Smt, TheoryId::Smt1x2, TheoryId::Smt1x2Plus4]
    }
}

/// Stable key of a catalog axiom.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AxiomId {
    pub theory: TheoryId,
    pub name: String,
}

impl std::fmt::Display for AxiomId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}.{}", self.theory.as_str(), self.name)
    }
}

/// A loaded catalog: closed axioms plus the names of available schemata.
#[derive(Clone, Debug)]
pub struct Theory {
    pub id: TheoryId,
    pub language: LanguageId,
    pub axioms: Vec<(AxiomId, Formula)>,
    pub schemata: Vec<&'static str>,
}

impl Theory {
    /// Resolve an axiom name. For the set/function theories this also
    /// resolves the fixed reverse-graph member of the schema collection,
    /// which is a theorem of the base theory and an axiom of the fragment.
    pub fn lookup_axiom(&self, name: &str) -> Option<&Formula> {
        if matches!(self.id, TheoryId::T | TheoryId::TInf0) && name == "REV-GRAPH" {
            return Some(rev_graph_axiom());
        }
        self.axioms.iter().find(|(id, _)| id.name == name).map(|(_, f)| f)
    }

    pub fn has_schema(&self, name: &str) -> bool {
        self.schemata.contains(&name)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SchemaError {
    #[error("unknown theory `{0}`")]
    UnknownTheory(String),
    #[error("unknown schema `{0}`")]
    UnknownSchema(String),
    #[error("hole formula may only use the hole variable(s) {expected}; found free `{found}`")]
    UnexpectedFreeVariable { expected: &'static str, found: String },
    #[error("hole variable `{0}` must be thing-sorted")]
    HoleSort(String),
    #[error("dimension precondition violated: {0}")]
    Dimension(String),
    #[error("matrix dimensions are limited to 9x9, got {0}x{1}")]
    DimensionTooLarge(usize, usize),
    #[error("elements must be pairwise distinct")]
    DuplicateElement,
    #[error("element list must be non-empty")]
    EmptyElements,
    #[error("elements must be set- or thing-sorted")]
    ElementSort,
    #[error("generated instance is not well-formed: {0}")]
    IllFormed(String),
    #[error("substitution failed: {0}")]
    Subst(String),
}

/// The complete closed-axiom list of a theory.
pub fn axioms_of(t: TheoryId) -> &'static [(AxiomId, Formula)] {
    &theory(t).axioms
}

/// Look up the loaded catalog for a theory.
pub fn theory(t: TheoryId) -> &'static Theory {
    match t {
        TheoryId::T => catalog_t(),
        TheoryId::TInf0 => catalog_t_inf_0(),
        TheoryId::Smt => catalog_smt(),
        TheoryId::Smt1x2 => catalog_smt_1x2(),
        TheoryId::Smt1x2Plus4 => catalog_smt_1x2_plus4(),
    }
}

/// The closed standard axioms of the base theory: the set-theoretic and
/// function-theoretic axioms without the successor definition and without
/// the sum-function axiom. There are eighteen.
pub fn standard_closed_axioms() -> Vec<(AxiomId, Formula)> {
    axioms_of(TheoryId::T)
        .iter()
        .filter(|(id, _)| id.name != "SUCC-DEF" && id.name != "SUM-F")
        .cloned()
        .collect()
}

fn load_catalog(id: TheoryId, text: &str, language: LanguageId) -> Vec<(AxiomId, Formula)> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (name, formula_text) = trimmed
            .split_once(':')
            .unwrap_or_else(|| panic!("{}: line {} has no axiom name", id.as_str(), lineno + 1));
        let parsed = parse_formula(formula_text.trim(), language).unwrap_or_else(|e| {
            panic!("{} axiom {} does not parse: {e}", id.as_str(), name.trim())
        });
        let name = name.trim().to_string();
        assert!(
            out.iter().all(|(existing, _): &(AxiomId, _)| existing.name != name),
            "{}: duplicate axiom name {name}",
            id.as_str()
        );
        out.push((AxiomId { theory: id, name }, parsed.formula));
    }
    out
}

macro_rules! catalog {
    ($fn_name:ident, $id:expr, $file:expr, $lang:expr, $schemata:expr) => {
        fn $fn_name() -> &'static Theory {
            static CELL: OnceLock<Theory> = OnceLock::new();
            CELL.get_or_init(|| Theory {
                id: $id,
                language: $lang,
                axioms: load_catalog($id, include_str!($file), $lang),
                schemata: $schemata,
            })
        }
    };
}

catalog!(catalog_t, TheoryId::T, "data/t.thy", LanguageId::Lt, vec!["separation", "replacement"]);
catalog!(
    catalog_smt,
    TheoryId::Smt,
    "data/smt.thy",
    LanguageId::Lsmt,
    vec![
        "separation",
        "replacement",
        "set-matrix",
        "omission",
        "division",
        "epsilon",
        "matrix-ext",
        "set-of-set-matrices",
    ]
);

fn catalog_t_inf_0() -> &'static Theory {
    static CELL: OnceLock<Theory> = OnceLock::new();
    CELL.get_or_init(|| {
        let axioms = catalog_t()
            .axioms
            .iter()
            .filter(|(id, _)| id.name != "SUM-F")
            .map(|(id, f)| {
                (AxiomId { theory: TheoryId::TInf0, name: id.name.clone() }, f.clone())
            })
            .collect::<Vec<_>>();
        for (id, f) in &axioms {
            let diags = well_formed(f, LanguageId::LtStandard);
            assert!(diags.is_empty(), "{} is not standard: {:?}", id.name, diags);
        }
        Theory {
            id: TheoryId::TInf0,
            language: LanguageId::LtStandard,
            axioms,
            schemata: vec!["separation", "replacement"],
        }
    })
}

fn catalog_smt_1x2() -> &'static Theory {
    static CELL: OnceLock<Theory> = OnceLock::new();
    CELL.get_or_init(|| Theory {
        id: TheoryId::Smt1x2,
        language: LanguageId::Lsmt1x2,
        axioms: load_catalog(TheoryId::Smt1x2, include_str!("data/smt-1x2.thy"), LanguageId::Lsmt1x2),
        schemata: vec!["separation", "replacement"],
    })
}

fn catalog_smt_1x2_plus4() -> &'static Theory {
    static CELL: OnceLock<Theory> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut axioms: Vec<(AxiomId, Formula)> = catalog_smt_1x2()
            .axioms
            .iter()
            .map(|(id, f)| {
                (AxiomId { theory: TheoryId::Smt1x2Plus4, name: id.name.clone() }, f.clone())
            })
            .collect();
        axioms.extend(load_catalog(
            TheoryId::Smt1x2Plus4,
            include_str!("data/smt-1x2-plus4.thy"),
            LanguageId::Lsmt1x2Plus4,
        ));
        Theory {
            id: TheoryId::Smt1x2Plus4,
            language: LanguageId::Lsmt1x2Plus4,
            axioms,
            schemata: vec!["separation", "replacement"],
        }
    })
}

fn rev_graph_axiom() -> &'static Formula {
    static CELL: OnceLock<Formula> = OnceLock::new();
    CELL.get_or_init(|| {
        let loaded = load_catalog(TheoryId::TInf0, include_str!("data/gamma.thy"), LanguageId::LtStandard);
        loaded.into_iter().next().expect("gamma catalog is non-empty").1
    })
}

// ---- schema instantiators ----

/// Check that the free variables of a hole formula are within the allowed
/// hole names (all thing-sorted).
fn check_holes(phi: &Formula, holes: &[&str], expected: &'static str) -> Result<(), SchemaError> {
    for (name, sort) in free_variables(phi) {
        if holes.contains(&name.as_str()) {
            if sort != Sort::Thing {
                return Err(SchemaError::HoleSort(name));
            }
        } else {
            return Err(SchemaError::UnexpectedFreeVariable { expected, found: name });
        }
    }
    Ok(())
}

fn wf_guard(f: Formula, lang: LanguageId) -> Result<Formula, SchemaError> {
    let diags = well_formed(&f, lang);
    if diags.is_empty() {
        Ok(f)
    } else {
        Err(SchemaError::IllFormed(format!(
            "{}: {}",
            pretty_print(&f),
            diags.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; ")
        )))
    }
}

/// Variable naming flavor: uppercase set variables on the set/function
/// side, lowercase on the matrix side.
fn sep_names(matrix_side: bool) -> (&'static str, &'static str) {
    if matrix_side {
        ("x", "y")
    } else {
        ("X", "Y")
    }
}

/// Separation instance for a hole formula over `alpha`:
/// every set has the subset of its members satisfying the hole.
pub fn instantiate_separation(phi: &Formula) -> Result<Formula, SchemaError> {
    separation_in(phi, false)
}

pub fn separation_in(phi: &Formula, matrix_side: bool) -> Result<Formula, SchemaError> {
    check_holes(phi, &["alpha"], "alpha")?;
    let (x, y) = sep_names(matrix_side);
    let alpha = Term::thing_var("alpha");
    let body = Formula::iff(
        Formula::Mem(alpha.clone(), Term::set_var(y)),
        Formula::and(Formula::Mem(alpha, Term::set_var(x)), phi.clone()),
    );
    let inst = Formula::forall_set(
        x,
        Formula::exists_set(y, Formula::forall_thing("alpha", body)),
    );
    let lang = if matrix_side { LanguageId::Lsmt } else { LanguageId::LtStandard };
    wf_guard(inst, lang)
}

/// Replacement instance for a hole formula over `alpha`, `beta`: a
/// functional relation on a set yields the set of its images.
pub fn instantiate_replacement(psi: &Formula) -> Result<Formula, SchemaError> {
    replacement_in(psi, false)
}

pub fn replacement_in(psi: &Formula, matrix_side: bool) -> Result<Formula, SchemaError> {
    check_holes(psi, &["alpha", "beta"], "alpha, beta")?;
    let (x, z) = if matrix_side { ("x", "y") } else { ("X", "Z") };
    let alpha = Term::thing_var("alpha");
    let beta = Term::thing_var("beta");
    // ex! beta . psi  ==>  ex beta . (psi /\ all beta1 . (psi[beta:=beta1] -> beta1 = beta))
    let psi_b1 = substitute(psi, &beta, &Term::thing_var("beta1"))
        .map_err(|e| SchemaError::Subst(e.to_string()))?;
    let unique = Formula::exists_thing(
        "beta",
        Formula::and(
            psi.clone(),
            Formula::forall_thing(
                "beta1",
                Formula::implies(psi_b1, Formula::Eq(Term::thing_var("beta1"), beta.clone())),
            ),
        ),
    );
    let antecedent = Formula::forall_thing(
        "alpha",
        Formula::implies(Formula::Mem(alpha.clone(), Term::set_var(x)), unique),
    );
    // psi(xi, gamma)
    let psi_xi = substitute(psi, &alpha, &Term::thing_var("xi"))
        .map_err(|e| SchemaError::Subst(e.to_string()))?;
    let psi_xi_gamma = substitute(&psi_xi, &beta, &Term::thing_var("gamma"))
        .map_err(|e| SchemaError::Subst(e.to_string()))?;
    let collected = Formula::exists_set(
        z,
        Formula::forall_thing(
            "gamma",
            Formula::iff(
                Formula::Mem(Term::thing_var("gamma"), Term::set_var(z)),
                Formula::exists_thing(
                    "xi",
                    Formula::and(Formula::Mem(Term::thing_var("xi"), Term::set_var(x)), psi_xi_gamma),
                ),
            ),
        ),
    );
    let inst = Formula::forall_set(x, Formula::implies(antecedent, collected));
    let lang = if matrix_side { LanguageId::Lsmt } else { LanguageId::LtStandard };
    wf_guard(inst, lang)
}

/// Names of the dimension-parameterized matrix schemata.
pub const SMT_SCHEMATA: &[&str] =
    &["set-matrix", "omission", "division", "epsilon", "matrix-ext", "set-of-set-matrices"];

/// Instantiate one of the matrix schemata at the given dimensions.
pub fn instantiate_smt_schema(name: &str, m: usize, n: usize) -> Result<Formula, SchemaError> {
    if m < 1 || n < 1 {
        return Err(SchemaError::Dimension(format!("need m, n >= 1, got {m}x{n}")));
    }
    if m > 9 || n > 9 {
        return Err(SchemaError::DimensionTooLarge(m, n));
    }
    let needs_two = matches!(name, "division" | "epsilon");
    if needs_two && m * n < 2 {
        return Err(SchemaError::Dimension(format!("{name} requires m*n >= 2, got {m}x{n}")));
    }
    let entries = |prefix: &str| -> Vec<Name> {
        let mut v = Vec::new();
        for r in 1..=m {
            for c in 1..=n {
                v.push(format!("{prefix}{r}{c}"));
            }
        }
        v
    };
    let matrix = |names: &[Name]| Term::Matrix {
        rows: m,
        cols: n,
        entries: names.iter().map(|s| Term::ThingVar(s.clone())).collect(),
    };
    let forall_all = |names: &[Name], body: Formula| {
        names.iter().rev().fold(body, |acc, n| Formula::forall_thing(n, acc))
    };
    let inst = match name {
        "set-matrix" => {
            let names = entries("alpha");
            let body = Formula::exists_thing(
                "beta",
                Formula::Eq(Term::thing_var("beta"), matrix(&names)),
            );
            forall_all(&names, body)
        }
        "omission" => {
            let names = entries("alpha");
            let inner = matrix(&names);
            let wrapped = Term::Matrix { rows: 1, cols: 1, entries: vec![inner.clone()] };
            forall_all(&names, Formula::Eq(wrapped, inner))
        }
        "division" => {
            let names = entries("alpha");
            let body = Formula::not(Formula::Eq(Term::set_var("x"), matrix(&names)));
            Formula::forall_set("x", forall_all(&names, body))
        }
        "epsilon" => {
            let names = entries("alpha");
            let body = Formula::forall_thing(
                "beta",
                Formula::not(Formula::Mem(Term::thing_var("beta"), matrix(&names))),
            );
            forall_all(&names, body)
        }
        "matrix-ext" => {
            let a = entries("alpha");
            let b = entries("beta");
            let eqs: Vec<Formula> = a
                .iter()
                .zip(&b)
                .map(|(x, y)| Formula::Eq(Term::ThingVar(x.clone()), Term::ThingVar(y.clone())))
                .collect();
            let body =
                Formula::iff(Formula::Eq(matrix(&a), matrix(&b)), Formula::and_all(eqs));
            forall_all(&a, forall_all(&b, body))
        }
        "set-of-set-matrices" => {
            let b = entries("beta");
            let mut conj = vec![Formula::Eq(Term::thing_var("alpha"), matrix(&b))];
            conj.extend(
                b.iter()
                    .map(|n| Formula::Mem(Term::ThingVar(n.clone()), Term::set_var("x"))),
            );
            let exists_all = b
                .iter()
                .rev()
                .fold(Formula::and_all(conj), |acc, n| Formula::exists_thing(n, acc));
            Formula::forall_set(
                "x",
                Formula::exists_set(
                    "y",
                    Formula::forall_thing(
                        "alpha",
                        Formula::iff(
                            Formula::Mem(Term::thing_var("alpha"), Term::set_var("y")),
                            exists_all,
                        ),
                    ),
                ),
            )
        }
        other => return Err(SchemaError::UnknownSchema(other.to_string())),
    };
    wf_guard(inst, LanguageId::Lsmt)
}

/// The requested separation/replacement instances plus the fixed
/// reverse-graph axiom.
pub fn gamma_axioms(seps: &[Formula], reps: &[Formula]) -> Result<Vec<Formula>, SchemaError> {
    let mut out = Vec::new();
    for phi in seps {
        out.push(instantiate_separation(phi)?);
    }
    for psi in reps {
        out.push(instantiate_replacement(psi)?);
    }
    out.push(rev_graph_axiom().clone());
    Ok(out)
}

/// Both renderings of a sum-function instance over an explicit element
/// list: the unfolded standard-quantifier form and the folded form using
/// the multiple quantifier and conjunctive operator.
#[derive(Clone, Debug)]
pub struct SumFInstance {
    pub standard: Formula,
    pub folded: Formula,
}

pub fn sum_f_instance(elements: &[Term]) -> Result<SumFInstance, SchemaError> {
    if elements.is_empty() {
        return Err(SchemaError::EmptyElements);
    }
    let distinct: BTreeSet<&Term> = elements.iter().collect();
    if distinct.len() != elements.len() {
        return Err(SchemaError::DuplicateElement);
    }
    for e in elements {
        if matches!(e.sort(), Sort::Graph | Sort::Function(_)) {
            return Err(SchemaError::ElementSort);
        }
    }
    let mut used = BTreeSet::new();
    for e in elements {
        let probe = Formula::Eq(e.clone(), Term::EmptySet);
        for (n, _) in free_variables(&probe) {
            used.insert(n);
        }
    }
    let pick = |base: &str, used: &BTreeSet<Name>| -> Name {
        if !used.contains(base) {
            return base.to_string();
        }
        for i in 1.. {
            let cand = format!("{base}{i}");
            if !used.contains(&cand) {
                return cand;
            }
        }
        unreachable!()
    };
    let family = pick("f", &used);
    let fun = pick("F", &used);
    let yset = pick("Y", &used);
    let index = pick("xi", &used);

    let index_set = Term::SetLiteral(elements.to_vec());
    let fun_term = Term::fun_var(&fun, index_set.clone());
    let surj = Formula::Surj(fun_term.clone(), index_set.clone(), Term::SetVar(yset.clone()));

    let atom = |e: &Term| {
        Formula::Maps(
            fun_term.clone(),
            e.clone(),
            Term::image(Term::fun_var(&family, Term::succ(e.clone())), e.clone()),
        )
    };

    // Folded: all-ur family over the literal, conjunctive operator inside.
    let conj_body = Formula::Maps(
        fun_term.clone(),
        Term::ThingVar(index.clone()),
        Term::image(
            Term::fun_var(&family, Term::succ(Term::ThingVar(index.clone()))),
            Term::ThingVar(index.clone()),
        ),
    );
    let folded_core = Formula::ExistsFun {
        graph: fun.clone(),
        domain: index_set.clone(),
        body: Box::new(Formula::ExistsSet(
            yset.clone(),
            Box::new(Formula::and(
                surj.clone(),
                Formula::ConjOp {
                    index: index.clone(),
                    index_set: index_set.clone(),
                    body: Box::new(conj_body),
                },
            )),
        )),
    };
    let folded = Formula::MultiForallUr {
        family: family.clone(),
        index,
        index_set: index_set.clone(),
        body: Box::new(folded_core),
    };

    // Standard: one function quantifier per element, conjunction of atoms.
    let mut conjuncts = vec![surj];
    conjuncts.extend(elements.iter().map(atom));
    let mut standard = Formula::ExistsFun {
        graph: fun,
        domain: index_set,
        body: Box::new(Formula::ExistsSet(yset, Box::new(Formula::and_all(conjuncts)))),
    };
    for e in elements.iter().rev() {
        standard = Formula::forall_fun(&family, Term::succ(e.clone()), standard);
    }
    Ok(SumFInstance { standard, folded })
}

/// Alpha-check helper used by tests and the replay scenarios: the folded
/// form unfolds to the standard form.
pub fn sum_f_forms_agree(inst: &SumFInstance) -> bool {
    match crate::syntax::unfold_nonstandard(&inst.folded) {
        Ok(unfolded) => alpha_equivalent(&unfolded, &inst.standard),
        Err(_) => false,
    }
}
