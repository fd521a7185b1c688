//! Proof checker: Hilbert-style first-order inference with equality,
//! extended by the nonstandard rules for the conjunctive operator and the
//! multiple quantifier.
//!
//! Scripts are linear: each step carries a formula and a justification.
//! Justifications are catalog axioms, schema instances, logical axioms
//! (`logic ...`), explicit assumptions, or rule applications citing earlier
//! steps. The checker verifies, never searches.

mod depth1;
mod rules;
mod taut;

pub use depth1::derivable_depth1;

use crate::syntax::{alpha_equivalent, well_formed, Formula, Name};
use crate::theories::{theory, Theory, TheoryId};
use std::collections::{BTreeMap, BTreeSet};

/// Inference rules accepted in `from ... by <rule>` justifications.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    Mp,
    AndI,
    AndE,
    OrI,
    NotE,
    UnivI,
    UnivE,
    ExistI,
    RuleC,
    I1ConjI,
    I2ConjE,
    I3MultiI,
    I4MultiE,
    I5NsQuantI,
    I6NsQuantE,
    Taut,
}

impl RuleId {
    pub fn as_str(self) -> &'static str {
        match self {
            RuleId::Mp => "MP",
            RuleId::AndI => "AND-I",
            RuleId::AndE => "AND-E",
            RuleId::OrI => "OR-I",
            RuleId::NotE => "NOT-E",
            RuleId::UnivI => "UNIV-I",
            RuleId::UnivE => "UNIV-E",
            RuleId::ExistI => "EXIST-I",
            RuleId::RuleC => "RULE-C",
            RuleId::I1ConjI => "I1-CONJ-I",
            RuleId::I2ConjE => "I2-CONJ-E",
            RuleId::I3MultiI => "I3-MULTI-I",
            RuleId::I4MultiE => "I4-MULTI-E",
            RuleId::I5NsQuantI => "I5-NS-QUANT-I",
            RuleId::I6NsQuantE => "I6-NS-QUANT-E",
            RuleId::Taut => "TAUT",
        }
    }

    pub fn parse(s: &str) -> Option<RuleId> {
        Some(match s {
            "MP" => RuleId::Mp,
            "AND-I" => RuleId::AndI,
            "AND-E" => RuleId::AndE,
            "OR-I" => RuleId::OrI,
            "NOT-E" => RuleId::NotE,
            "UNIV-I" => RuleId::UnivI,
            "UNIV-E" => RuleId::UnivE,
            "EXIST-I" => RuleId::ExistI,
            "RULE-C" => RuleId::RuleC,
            "I1-CONJ-I" => RuleId::I1ConjI,
            "I2-CONJ-E" => RuleId::I2ConjE,
            "I3-MULTI-I" => RuleId::I3MultiI,
            "I4-MULTI-E" => RuleId::I4MultiE,
            "I5-NS-QUANT-I" => RuleId::I5NsQuantI,
            "I6-NS-QUANT-E" => RuleId::I6NsQuantE,
            "TAUT" => RuleId::Taut,
            _ => return None,
        })
    }

    pub fn all() -> Vec<RuleId> {
        vec![
            RuleId::Mp,
            RuleId::AndI,
            RuleId::AndE,
            RuleId::OrI,
            RuleId::NotE,
            RuleId::UnivI,
            RuleId::UnivE,
            RuleId::ExistI,
            RuleId::RuleC,
            RuleId::I1ConjI,
            RuleId::I2ConjE,
            RuleId::I3MultiI,
            RuleId::I4MultiE,
            RuleId::I5NsQuantI,
            RuleId::I6NsQuantE,
            RuleId::Taut,
        ]
    }

    /// The classical first-order rules, without the nonstandard extensions.
    pub fn standard() -> Vec<RuleId> {
        vec![
            RuleId::Mp,
            RuleId::AndI,
            RuleId::AndE,
            RuleId::OrI,
            RuleId::NotE,
            RuleId::UnivI,
            RuleId::UnivE,
            RuleId::ExistI,
            RuleId::RuleC,
            RuleId::Taut,
        ]
    }
}

/// Logical axiom schemata of first-order logic with equality, plus the
/// definitional axioms for explicit set literals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogicAxiom {
    /// `t = t`
    Refl,
    /// `t1 = t2 -> (P[v:=t1] <-> P[v:=t2])`
    Subst,
    /// `(all x . P) -> P[x:=t]`
    Inst,
    /// `P[x:=t] -> ex x . P`
    EInst,
    /// `(all x . (P -> Q)) -> ((ex x . P) -> Q)`, x not free in Q
    EElim,
    /// `t in {..., t, ...}`
    MemLit,
    /// `all v . (v in {t1,...,tn} <-> v = t1 \/ ... \/ v = tn)`
    LitChar,
}

impl LogicAxiom {
    pub fn as_str(self) -> &'static str {
        match self {
            LogicAxiom::Refl => "refl",
            LogicAxiom::Subst => "subst",
            LogicAxiom::Inst => "inst",
            LogicAxiom::EInst => "einst",
            LogicAxiom::EElim => "eelim",
            LogicAxiom::MemLit => "mem-lit",
            LogicAxiom::LitChar => "lit-char",
        }
    }

    pub fn parse(s: &str) -> Option<LogicAxiom> {
        Some(match s {
            "refl" => LogicAxiom::Refl,
            "subst" => LogicAxiom::Subst,
            "inst" => LogicAxiom::Inst,
            "einst" => LogicAxiom::EInst,
            "eelim" => LogicAxiom::EElim,
            "mem-lit" => LogicAxiom::MemLit,
            "lit-char" => LogicAxiom::LitChar,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SchemaArg {
    Formula(Formula),
    Dim(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    Axiom { theory: Option<TheoryId>, name: String },
    Schema { name: String, args: Vec<SchemaArg> },
    Logic(LogicAxiom),
    Assume,
    Rule { premises: Vec<usize>, rule: RuleId },
}

#[derive(Clone, Debug)]
pub struct Step {
    pub index: usize,
    pub formula: Formula,
    pub justification: Justification,
    /// Fresh constants introduced by this step (RULE-C only).
    pub fresh_constants: Vec<Name>,
}

#[derive(Clone, Debug)]
pub struct ProofScript {
    pub theory: TheoryId,
    pub goal: Formula,
    pub steps: Vec<Step>,
}

/// Per-step outcome plus the overall verdict.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub accepted: bool,
    pub per_step: Vec<(usize, Result<(), String>)>,
}

impl Verdict {
    /// Plain-text report: one line per step.
    pub fn report(&self) -> String {
        let mut out = String::new();
        for (idx, res) in &self.per_step {
            match res {
                Ok(()) => out.push_str(&format!("{idx} OK\n")),
                Err(d) => out.push_str(&format!("{idx} FAIL {d}\n")),
            }
        }
        out.push_str(if self.accepted { "ACCEPTED\n" } else { "REJECTED\n" });
        out
    }

    pub fn first_failure(&self) -> Option<(usize, &str)> {
        self.per_step.iter().find_map(|(i, r)| r.as_ref().err().map(|d| (*i, d.as_str())))
    }
}

/// Checking context carried across steps.
pub(crate) struct Ctx<'a> {
    pub theory: &'static Theory,
    pub formulas: BTreeMap<usize, &'a Formula>,
    pub accepted: BTreeSet<usize>,
    pub assumed: Vec<&'a Formula>,
    /// Rule-C constant -> variables free in the existential it witnessed.
    pub taints: BTreeMap<Name, BTreeSet<Name>>,
    /// Every constant name occurring in any earlier step formula.
    pub used_constants: BTreeSet<Name>,
}

impl<'a> Ctx<'a> {
    fn new(theory: &'static Theory) -> Ctx<'a> {
        Ctx {
            theory,
            formulas: BTreeMap::new(),
            accepted: BTreeSet::new(),
            assumed: Vec::new(),
            taints: BTreeMap::new(),
            used_constants: BTreeSet::new(),
        }
    }

    pub fn premise(&self, idx: usize) -> Result<&'a Formula, String> {
        match self.formulas.get(&idx) {
            Some(f) if self.accepted.contains(&idx) => Ok(f),
            Some(_) => Err(format!("premise {idx} was rejected")),
            None => Err(format!("premise {idx} does not exist before this step")),
        }
    }
}

/// Check a single step against prior accepted steps.
pub fn check_step(context: &[Step], step: &Step, theory_id: TheoryId) -> Result<(), String> {
    let th = theory(theory_id);
    let mut ctx = Ctx::new(th);
    for s in context {
        if s.index >= step.index {
            continue;
        }
        ingest(&mut ctx, s, true);
    }
    rules::verify(&ctx, step)
}

fn ingest<'a>(ctx: &mut Ctx<'a>, step: &'a Step, ok: bool) {
    ctx.formulas.insert(step.index, &step.formula);
    if ok {
        ctx.accepted.insert(step.index);
    }
    if matches!(step.justification, Justification::Assume) {
        ctx.assumed.push(&step.formula);
    }
    if let Justification::Rule { rule: RuleId::RuleC, premises } = &step.justification {
        let tainted: BTreeSet<Name> = premises
            .iter()
            .filter_map(|i| ctx.formulas.get(i))
            .flat_map(|f| crate::syntax::free_variables(f).into_iter().map(|(n, _)| n))
            .collect();
        for k in &step.fresh_constants {
            ctx.taints.insert(k.clone(), tainted.clone());
        }
    }
    for name in step.formula.constant_names() {
        ctx.used_constants.insert(name);
    }
}

/// Check a whole script. The verdict lists one entry per step; the last
/// step must match the goal up to alpha-equivalence.
pub fn check_proof(script: &ProofScript) -> Verdict {
    let th = theory(script.theory);
    let lang = script.theory.script_language();
    if script.steps.is_empty() {
        return Verdict { accepted: false, per_step: vec![(0, Err("empty script".to_string()))] };
    }
    let last_index = script.steps.last().unwrap().index;
    let mut ctx = Ctx::new(th);
    let mut per_step = Vec::with_capacity(script.steps.len());
    for step in &script.steps {
        let diags = well_formed(&step.formula, lang);
        let mut res = if diags.is_empty() {
            rules::verify(&ctx, step)
        } else {
            Err(format!("formula is not well-formed in {}: {}", lang.as_str(), diags[0]))
        };
        if res.is_ok()
            && step.index == last_index
            && !alpha_equivalent(&step.formula, &script.goal)
        {
            res = Err("final formula does not match the script goal".to_string());
        }
        ingest(&mut ctx, step, res.is_ok());
        per_step.push((step.index, res));
    }
    let accepted = per_step.iter().all(|(_, r)| r.is_ok());
    Verdict { accepted, per_step }
}
