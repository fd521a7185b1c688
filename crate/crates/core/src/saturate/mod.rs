//! Bounded staged closure under selected inference rules, with
//! contradiction detection.
//!
//! The stages mirror the layered consistency argument: a standard-rules
//! closure, then the same plus conjunctive-operator introduction, then
//! plus elimination. Depth and formula count are capped; hitting the cap
//! is reported as truncation, never as success.

use crate::kernel::{derivable_depth1, RuleId};
use crate::syntax::{alpha_equivalent, canonicalize, Formula, Term};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Sigma,
    Upsilon,
    Phi,
    Omega,
}

impl Stage {
    /// Rule set of each stage: standard rules, then conjunctive-operator
    /// introduction, then elimination, then every nonstandard rule.
    pub fn rules(self) -> Vec<RuleId> {
        let mut rules = RuleId::standard();
        match self {
            Stage::Sigma => {}
            Stage::Upsilon => rules.push(RuleId::I1ConjI),
            Stage::Phi => {
                rules.push(RuleId::I1ConjI);
                rules.push(RuleId::I2ConjE);
            }
            Stage::Omega => rules = RuleId::all(),
        }
        rules
    }
}

pub const DEFAULT_CAP: usize = 50_000;
pub const MAX_DEPTH: usize = 4;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SaturateError {
    #[error("depth {0} exceeds the supported bound {MAX_DEPTH}")]
    DepthBound(usize),
}

#[derive(Clone, Debug)]
enum Provenance {
    Seed,
    Derived { premises: Vec<Formula> },
}

/// A staged closure snapshot: formulas deduplicated up to
/// alpha-equivalence, with enough provenance to replay any member.
#[derive(Clone, Debug)]
pub struct SaturationState {
    pub stage: Stage,
    pub depth: usize,
    pub formulas: Vec<Formula>,
    pub term_pool: Vec<Term>,
    pub rule_set: Vec<RuleId>,
    pub truncated: bool,
    /// Total formula count after each completed depth level.
    pub per_depth_counts: Vec<usize>,
    provenance: BTreeMap<Formula, (Formula, Provenance)>,
}

impl SaturationState {
    pub fn contains(&self, f: &Formula) -> bool {
        self.provenance.contains_key(&canonicalize(f))
    }

    /// Formulas of the state that are mapping atoms.
    pub fn mapping_atoms(&self) -> Vec<&Formula> {
        self.formulas.iter().filter(|f| matches!(f, Formula::Maps(_, _, _))).collect()
    }
}

/// Close a seed under at most `max_depth` rounds of one-step derivation.
pub fn saturate(
    seed: &[Formula],
    rules: &[RuleId],
    term_pool: &[Term],
    max_depth: usize,
    cap: usize,
    stage: Stage,
) -> Result<SaturationState, SaturateError> {
    if max_depth > MAX_DEPTH {
        return Err(SaturateError::DepthBound(max_depth));
    }
    let mut provenance: BTreeMap<Formula, (Formula, Provenance)> = BTreeMap::new();
    for f in seed {
        provenance.entry(canonicalize(f)).or_insert_with(|| (f.clone(), Provenance::Seed));
    }
    let mut truncated = false;
    let mut per_depth_counts = vec![provenance.len()];
    let mut depth_done = 0;
    for _ in 0..max_depth {
        let current: Vec<Formula> = provenance.values().map(|(f, _)| f.clone()).collect();
        let derived = derivable_depth1(&current, rules, term_pool);
        let mut added = 0usize;
        for f in derived {
            if provenance.len() >= cap {
                truncated = true;
                break;
            }
            let key = canonicalize(&f);
            if let std::collections::btree_map::Entry::Vacant(e) = provenance.entry(key) {
                let premises = current
                    .iter()
                    .filter(|p| formula_mentions(&f, p))
                    .take(4)
                    .cloned()
                    .collect();
                e.insert((f, Provenance::Derived { premises }));
                added += 1;
            }
        }
        depth_done += 1;
        per_depth_counts.push(provenance.len());
        if truncated || added == 0 {
            break;
        }
    }
    Ok(SaturationState {
        stage,
        depth: depth_done,
        formulas: provenance.values().map(|(f, _)| f.clone()).collect(),
        term_pool: term_pool.to_vec(),
        rule_set: rules.to_vec(),
        truncated,
        per_depth_counts,
        provenance,
    })
}

/// Heuristic premise attribution for provenance chains: a premise is
/// plausible if it shares an atom with the derived formula.
fn formula_mentions(derived: &Formula, premise: &Formula) -> bool {
    fn atoms(f: &Formula, out: &mut Vec<Formula>) {
        match f {
            Formula::Eq(_, _) | Formula::Mem(_, _) | Formula::Surj(_, _, _)
            | Formula::Maps(_, _, _) => out.push(canonicalize(f)),
            _ => {
                for g in f.subformulas() {
                    atoms(g, out);
                }
            }
        }
    }
    let mut a = Vec::new();
    let mut b = Vec::new();
    atoms(derived, &mut a);
    atoms(premise, &mut b);
    a.iter().any(|x| b.contains(x)) || alpha_equivalent(derived, premise)
}

/// A formula and its negation both present in a state, with provenance
/// chains for each side.
#[derive(Clone, Debug)]
pub struct ContradictionWitness {
    pub phi: Formula,
    pub negation: Formula,
    pub phi_chain: Vec<ChainLine>,
    pub negation_chain: Vec<ChainLine>,
}

#[derive(Clone, Debug)]
pub struct ChainLine {
    pub formula: Formula,
    pub from_seed: bool,
}

impl ContradictionWitness {
    /// Render both chains in the proof-script line format.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut idx = 0usize;
        for (title, chain) in
            [("# chain for the formula", &self.phi_chain), ("# chain for its negation", &self.negation_chain)]
        {
            out.push_str(title);
            out.push('\n');
            for line in chain {
                idx += 1;
                let just = if line.from_seed { "assume" } else { "from earlier by closure" };
                out.push_str(&format!(
                    "{idx}. {} ; {just}\n",
                    crate::parser::pretty_print(&line.formula)
                ));
            }
        }
        out
    }
}

/// Strip double negations for contradiction matching.
fn nn(f: &Formula) -> Formula {
    match f {
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Not(core) => nn(core),
            _ => f.clone(),
        },
        _ => f.clone(),
    }
}

/// Find a formula whose negation is also in the state, modulo alpha and
/// double-negation normalization.
pub fn find_contradiction(state: &SaturationState) -> Option<ContradictionWitness> {
    let normalized: BTreeMap<Formula, &Formula> = state
        .provenance
        .values()
        .map(|(f, _)| (canonicalize(&nn(f)), f))
        .collect();
    for f in normalized.values() {
        let neg_key = canonicalize(&nn(&Formula::not((*f).clone())));
        if let Some(neg) = normalized.get(&neg_key) {
            return Some(ContradictionWitness {
                phi: (*f).clone(),
                negation: (*neg).clone(),
                phi_chain: chain_for(state, f),
                negation_chain: chain_for(state, neg),
            });
        }
    }
    None
}

fn chain_for(state: &SaturationState, f: &Formula) -> Vec<ChainLine> {
    let mut out = Vec::new();
    let mut queue = vec![canonicalize(f)];
    let mut seen = std::collections::BTreeSet::new();
    while let Some(key) = queue.pop() {
        if !seen.insert(key.clone()) {
            continue;
        }
        if let Some((formula, prov)) = state.provenance.get(&key) {
            match prov {
                Provenance::Seed => {
                    out.push(ChainLine { formula: formula.clone(), from_seed: true })
                }
                Provenance::Derived { premises } => {
                    out.push(ChainLine { formula: formula.clone(), from_seed: false });
                    for p in premises {
                        queue.push(canonicalize(p));
                    }
                }
            }
        }
    }
    out.reverse();
    out
}
