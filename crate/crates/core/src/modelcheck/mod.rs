//! Finite semantics: universes of hereditarily finite sets together with
//! function objects (graph-domain concatenations), an evaluator for all
//! atoms and both nonstandard constructs, and brute-force axiom checks.
//!
//! A structure of rank bound `r` carries every pure hereditarily finite
//! set of rank at most `r` and every function object whose domain is a
//! carrier set and whose values have rank at most `r - 1`. The value
//! restriction is the closure condition that keeps images and graphs
//! representable inside the universe; family enumeration in the
//! sum-function check inherits it.
//!
//! Evaluation is rank-stratified: quantifiers of universal strength range
//! over the interior (rank below the bound, sets only for thing-sorted
//! variables), quantifiers of existential strength over the full carrier.
//! A plain reading over one carrier falsifies pairing, power set, and
//! ur-function existence at the rank boundary of every finite universe;
//! the stratified reading checks each axiom exactly where its witnesses
//! are representable. Terms without a denotation (the ordinal-set
//! constant, images outside a domain, encodings whose members would not
//! be pure sets) make their atoms false rather than erroring.

pub mod check;
pub mod eval;
mod hf;

pub use check::{brute_force_sum_f, check_axioms, AxiomOutcome, CheckReport, ReportRow};
pub use eval::{eval, EvalError};
pub use hf::{enumerate_hf, HfSet};

use crate::syntax::Name;
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

/// A function object: a total map on a domain set. The graph-domain
/// concatenation is kept abstract; the set encoding of the graph is
/// materialized on demand.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FunObj {
    pub domain: HfSet,
    pub map: BTreeMap<HfSet, HfSet>,
}

impl FunObj {
    pub fn inactive() -> FunObj {
        FunObj { domain: HfSet::empty(), map: BTreeMap::new() }
    }

    pub fn image(&self) -> HfSet {
        HfSet::from_children(self.map.values().cloned().collect())
    }

    /// The set encoding of the graph: `{ (x, m(x)) : x in domain }`.
    pub fn graph_set(&self) -> HfSet {
        HfSet::from_children(self.map.iter().map(|(k, v)| HfSet::pair(k, v)).collect())
    }

    /// Decode a set as the graph of a total function on `domain`.
    pub fn decode(graph: &HfSet, domain: &HfSet) -> Option<FunObj> {
        let mut map = BTreeMap::new();
        for member in graph.children() {
            // Each member must be a pair encoding {x, {x, v}}.
            let (x, v) = decode_pair(member)?;
            if !domain.contains(&x) || map.insert(x, v).is_some() {
                return None;
            }
        }
        if map.len() != domain.len() {
            return None;
        }
        let f = FunObj { domain: domain.clone(), map };
        // The encoding must be exact, not merely contain the graph.
        if &f.graph_set() == graph {
            Some(f)
        } else {
            None
        }
    }
}

/// Decode `{a, {a, b}}`; `{x}` alone decodes as the pair `(x, x)`.
pub fn decode_pair(s: &HfSet) -> Option<(HfSet, HfSet)> {
    match s.children() {
        [a] => {
            // {a} = {a, {a, b}} requires {a} = a impossible, unless a = {a,b}
            // with b = a is itself the singleton: {x, {x, x}} = {x, {x}}.
            // A singleton {c} is the pair (x, x) only if c = x and c = {x, x},
            // which cannot both hold; so a genuine pair never collapses to a
            // singleton and decoding fails.
            let _ = a;
            None
        }
        [a, b] => {
            // One of the two is the first component x, the other is {x, v}.
            for (x, rest) in [(a, b), (b, a)] {
                match rest.children() {
                    [p] if p == x => return Some((x.clone(), x.clone())),
                    [p, q] => {
                        if p == x {
                            return Some((x.clone(), q.clone()));
                        }
                        if q == x {
                            return Some((x.clone(), p.clone()));
                        }
                    }
                    _ => {}
                }
            }
            None
        }
        _ => None,
    }
}

/// An element of a structure: a set or a function object. Matrix terms of
/// the 1x2 matrix languages denote function objects too; the two readings
/// share this carrier.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Value {
    Set(HfSet),
    Fun(Arc<FunObj>),
}

impl Value {
    pub fn as_set(&self) -> Option<&HfSet> {
        match self {
            Value::Set(s) => Some(s),
            Value::Fun(_) => None,
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("rank bound {0} is outside the supported range 1..=3")]
    RankBound(usize),
    #[error("sum-function check requires a non-empty carrier set")]
    EmptyIndex,
    #[error("sum-function check argument is not in the set carrier")]
    NotInCarrier,
}

/// A finite universe: every pure hereditarily finite set of rank at most
/// the bound, and every function object on a carrier set with values one
/// rank below the bound.
#[derive(Clone, Debug)]
pub struct FiniteStructure {
    pub rank_bound: usize,
    pub sets: Vec<HfSet>,
    pub functions: Vec<Arc<FunObj>>,
    interior_sets: Vec<HfSet>,
}

impl FiniteStructure {
    pub fn interior_sets(&self) -> &[HfSet] {
        &self.interior_sets
    }

    pub fn has_set(&self, s: &HfSet) -> bool {
        s.rank() <= self.rank_bound
    }

    /// Function objects with the given domain.
    pub fn functions_on<'a>(&'a self, domain: &'a HfSet) -> impl Iterator<Item = &'a Arc<FunObj>> + 'a {
        self.functions.iter().filter(move |f| &f.domain == domain)
    }

    /// Ur-functions: singleton domain (and, by construction, singleton range).
    pub fn ur_functions_on(&self, member: &HfSet) -> Vec<Arc<FunObj>> {
        let dom = HfSet::singleton(member.clone());
        self.functions_on(&dom).cloned().collect()
    }
}

/// Build the complete structure for a rank bound between 1 and 3. Above
/// rank 3 the function carrier has more objects than can be enumerated.
pub fn enumerate_universe(rank_bound: usize) -> Result<FiniteStructure, ModelError> {
    if !(1..=3).contains(&rank_bound) {
        return Err(ModelError::RankBound(rank_bound));
    }
    let sets = enumerate_hf(rank_bound);
    let interior_sets = enumerate_hf(rank_bound - 1);
    let values = &interior_sets;
    let mut functions = Vec::new();
    for domain in &sets {
        let members: Vec<&HfSet> = domain.children().iter().collect();
        let k = members.len();
        let mut counters = vec![0usize; k];
        loop {
            let map: BTreeMap<HfSet, HfSet> = members
                .iter()
                .zip(&counters)
                .map(|(m, &i)| ((*m).clone(), values[i].clone()))
                .collect();
            functions.push(Arc::new(FunObj { domain: domain.clone(), map }));
            // Advance the mixed-radix counter.
            let mut pos = 0;
            loop {
                if pos == k {
                    break;
                }
                counters[pos] += 1;
                if counters[pos] < values.len() {
                    break;
                }
                counters[pos] = 0;
                pos += 1;
            }
            if pos == k {
                break;
            }
        }
    }
    functions.sort();
    functions.dedup();
    Ok(FiniteStructure { rank_bound, sets, functions, interior_sets })
}

/// Keys of a valuation: simple variables by name and namespace, function
/// variables by name and domain value.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum VarKey {
    Set(Name),
    Thing(Name),
    /// Composite variable: (name, evaluated domain).
    Fun(Name, HfSet),
    /// Named constant given a denotation.
    Const(Name),
}

/// Sort-respecting assignment of structure elements to variables.
#[derive(Clone, Debug, Default)]
pub struct Valuation {
    map: BTreeMap<VarKey, Value>,
}

impl Valuation {
    pub fn new() -> Valuation {
        Valuation::default()
    }

    pub fn bind_set(&mut self, name: &str, v: HfSet) -> &mut Self {
        self.map.insert(VarKey::Set(name.to_string()), Value::Set(v));
        self
    }

    pub fn bind_thing(&mut self, name: &str, v: Value) -> &mut Self {
        self.map.insert(VarKey::Thing(name.to_string()), v);
        self
    }

    pub fn bind_fun(&mut self, name: &str, domain: HfSet, f: Arc<FunObj>) -> &mut Self {
        self.map.insert(VarKey::Fun(name.to_string(), domain), Value::Fun(f));
        self
    }

    pub fn bind_const(&mut self, name: &str, v: Value) -> &mut Self {
        self.map.insert(VarKey::Const(name.to_string()), v);
        self
    }

    pub fn get(&self, key: &VarKey) -> Option<&Value> {
        self.map.get(key)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn carrier_counts() {
        let s1 = enumerate_universe(1).unwrap();
        assert_eq!(s1.sets.len(), 2);
        // Inactive function plus the single map {0} -> 0.
        assert_eq!(s1.functions.len(), 2);

        let s2 = enumerate_universe(2).unwrap();
        assert_eq!(s2.sets.len(), 4);
        // Sum over domains of |V_2|^|X|: 1 + 2 + 2 + 4 = 9.
        assert_eq!(s2.functions.len(), 9);

        let s3 = enumerate_universe(3).unwrap();
        assert_eq!(s3.sets.len(), 16);
        // Sum over the 16 subsets of V_3 of 4^|X| = (1+4)^4.
        assert_eq!(s3.functions.len(), 625);

        assert!(enumerate_universe(0).is_err());
        assert!(enumerate_universe(4).is_err());
    }

    #[test]
    fn functions_are_total_and_single_valued() {
        let s = enumerate_universe(2).unwrap();
        for f in &s.functions {
            assert_eq!(f.map.len(), f.domain.len());
            for k in f.map.keys() {
                assert!(f.domain.contains(k));
            }
        }
        // Empty domain only for the inactive function.
        let empties: Vec<_> = s.functions.iter().filter(|f| f.domain.is_empty()).collect();
        assert_eq!(empties.len(), 1);
        assert_eq!(*empties[0].as_ref(), FunObj::inactive());
    }

    #[test]
    fn graph_decode_round_trip() {
        let s = enumerate_universe(2).unwrap();
        for f in &s.functions {
            let enc = f.graph_set();
            let dec = FunObj::decode(&enc, &f.domain).expect("decodes");
            assert_eq!(&dec, f.as_ref());
        }
    }

    #[test]
    fn pair_decode_rejects_non_pairs() {
        let zero = HfSet::empty();
        let one = HfSet::singleton(zero.clone());
        let two = HfSet::singleton(one.clone());
        assert_eq!(decode_pair(&HfSet::pair(&zero, &one)), Some((zero.clone(), one.clone())));
        assert_eq!(decode_pair(&HfSet::pair(&one, &zero)), Some((one.clone(), zero.clone())));
        assert_eq!(decode_pair(&zero), None);
        assert_eq!(decode_pair(&two), None);
    }
}
