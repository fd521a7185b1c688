//! Hereditarily finite sets as canonical trees.
//!
//! Children are sorted and deduplicated, so structural equality is
//! extensional equality and the derived ordering is deterministic.
//! Values are cheap to share; carriers of a finite structure are plain
//! vectors of these.

use std::sync::Arc;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HfSet {
    rank: u16,
    children: Arc<Vec<HfSet>>,
}

impl HfSet {
    pub fn empty() -> HfSet {
        HfSet { rank: 0, children: Arc::new(Vec::new()) }
    }

    pub fn from_children(mut children: Vec<HfSet>) -> HfSet {
        children.sort();
        children.dedup();
        let rank = children.iter().map(|c| c.rank + 1).max().unwrap_or(0);
        HfSet { rank, children: Arc::new(children) }
    }

    pub fn singleton(x: HfSet) -> HfSet {
        HfSet::from_children(vec![x])
    }

    /// The ordered-pair encoding `{a, {a, b}}`.
    pub fn pair(a: &HfSet, b: &HfSet) -> HfSet {
        let inner = HfSet::from_children(vec![a.clone(), b.clone()]);
        HfSet::from_children(vec![a.clone(), inner])
    }

    pub fn rank(&self) -> usize {
        self.rank as usize
    }

    pub fn children(&self) -> &[HfSet] {
        &self.children
    }

    pub fn len(&self) -> usize {
        self.children.len()
    }

    pub fn is_empty(&self) -> bool {
        self.children.is_empty()
    }

    pub fn contains(&self, x: &HfSet) -> bool {
        self.children.binary_search(x).is_ok()
    }
}

impl std::fmt::Debug for HfSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.children.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c:?}")?;
        }
        write!(f, "}}")
    }
}

/// All hereditarily finite sets of rank at most `max_rank`, sorted.
pub fn enumerate_hf(max_rank: usize) -> Vec<HfSet> {
    let mut level: Vec<HfSet> = vec![HfSet::empty()];
    for _ in 0..max_rank {
        level = powerset(&level);
    }
    level.sort();
    level
}

fn powerset(base: &[HfSet]) -> Vec<HfSet> {
    let n = base.len();
    assert!(n <= 20, "powerset of {n} elements is out of practical range");
    let mut out = Vec::with_capacity(1 << n);
    for mask in 0u32..(1 << n) {
        let children: Vec<HfSet> =
            (0..n).filter(|i| mask & (1 << i) != 0).map(|i| base[i].clone()).collect();
        out.push(HfSet::from_children(children));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_the_cumulative_hierarchy() {
        assert_eq!(enumerate_hf(0).len(), 1);
        assert_eq!(enumerate_hf(1).len(), 2);
        assert_eq!(enumerate_hf(2).len(), 4);
        assert_eq!(enumerate_hf(3).len(), 16);
        // Each level is the powerset of the previous one.
        assert_eq!(enumerate_hf(4).len(), 1 << 16);
    }

    #[test]
    fn ranks_are_exact() {
        let sets = enumerate_hf(3);
        assert!(sets.iter().all(|s| s.rank() <= 3));
        assert!(sets.iter().any(|s| s.rank() == 3));
        assert_eq!(HfSet::empty().rank(), 0);
        assert_eq!(HfSet::singleton(HfSet::empty()).rank(), 1);
    }

    #[test]
    fn pair_encoding_shape() {
        let zero = HfSet::empty();
        let one = HfSet::singleton(zero.clone());
        // (0, 0) = {0, {0, 0}} = {0, {0}}
        let p = HfSet::pair(&zero, &zero);
        assert_eq!(p, HfSet::from_children(vec![zero.clone(), one.clone()]));
        assert_eq!(p.rank(), 2);
    }

    #[test]
    fn duplicate_children_collapse() {
        let zero = HfSet::empty();
        let a = HfSet::from_children(vec![zero.clone(), zero.clone()]);
        assert_eq!(a, HfSet::singleton(zero));
    }
}
