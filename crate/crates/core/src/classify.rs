//! Classification of wildness profiles into the descending chain of clones
//! above the almost unary functions.
//!
//! Every clone strictly above the almost unary functions is one of
//! `M(2) ⊋ M(3) ⊋ M(4) ⊋ …`, where `M(m)` is generated by the second-order
//! statistic in `m` variables together with the binary almost unary
//! functions; `M(2)` is everything and `M(3)` is the polymorphism clone of
//! the binary almost unary functions. [`chain_index`] locates the clone a
//! profile generates, by the variable-identification recursion; profiles
//! whose wild sets do not pairwise intersect generate everything.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::setfam::{IndexSet, WildProfile};
use crate::wildness::is_almost_unary_profile;

/// Where a profile lands: the clone `M(m)` for some `m ≥ 2`, or inside the
/// almost unary functions. Chain order: `M(2) ⊒ M(3) ⊒ … ⊒ AlmostUnary`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum ChainIndex {
    M(usize),
    AlmostUnary,
}

impl ChainIndex {
    /// Numeric position in the chain, almost unary mapping below every
    /// `M(m)`. Smaller value means larger clone.
    pub fn chain_value(self) -> usize {
        match self {
            ChainIndex::M(m) => m,
            ChainIndex::AlmostUnary => usize::MAX,
        }
    }

    pub fn is_almost_unary(self) -> bool {
        matches!(self, ChainIndex::AlmostUnary)
    }
}

impl fmt::Display for ChainIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainIndex::M(m) => write!(f, "M{m}"),
            ChainIndex::AlmostUnary => write!(f, "almost unary"),
        }
    }
}

/// Errors from the classification operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    /// `mnk_index` needs `2 <= k <= n`.
    Domain { n: usize, k: usize },
    /// `wild_size_upper_bound` is undefined on almost unary profiles.
    AlmostUnaryInput,
    /// Profile enumeration is guarded against antichain explosion.
    ArityTooLarge { n: usize, max: usize },
}

impl fmt::Display for ClassifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassifyError::Domain { n, k } => write!(f, "need 2 <= k <= n, got n={n}, k={k}"),
            ClassifyError::AlmostUnaryInput => {
                write!(f, "no wild-size bound for an almost unary profile")
            }
            ClassifyError::ArityTooLarge { n, max } => {
                write!(f, "profile enumeration needs 1 <= n <= {max}, got {n}")
            }
        }
    }
}

impl core::error::Error for ClassifyError {}

/// The profile induced by substituting coordinate `j` for coordinate `i`,
/// on the coordinate set without `i` (relabelled to `1..n-1`): minimal sets
/// avoiding `i` survive, minimal sets through `i` trade `i` for `j`.
pub fn induced_profile(p: &WildProfile, i: usize, j: usize) -> WildProfile {
    let n = p.n();
    assert!(n >= 2, "induced profile needs arity at least 2");
    assert!(
        i >= 1 && i <= n && j >= 1 && j <= n && i != j,
        "bad coordinate pair ({i},{j})"
    );
    let relabel = |s: IndexSet| {
        let mut out = IndexSet::EMPTY;
        for c in s.iter() {
            out = out.insert(if c < i { c } else { c - 1 });
        }
        out
    };
    let sets: Vec<IndexSet> = p
        .minimal()
        .iter()
        .map(|&m| {
            if m.contains(i) {
                relabel(m.remove(i).insert(j))
            } else {
                relabel(m)
            }
        })
        .collect();
    WildProfile::normalize(n - 1, &sets).unwrap()
}

/// Removes every coordinate that occurs in no minimal wild set and relabels
/// the rest; wildness of sets avoiding the dropped coordinates is
/// preserved. A profile with no wild sets collapses to the bounded unary
/// profile.
pub fn drop_dummy(p: &WildProfile) -> WildProfile {
    let used = p
        .minimal()
        .iter()
        .fold(IndexSet::EMPTY, |acc, &m| acc.union(m));
    if used.is_empty() {
        return WildProfile::bounded(1);
    }
    if used == IndexSet::full(p.n()) {
        return p.clone();
    }
    let kept: Vec<usize> = used.iter().collect();
    let relabel = |s: IndexSet| {
        let mut out = IndexSet::EMPTY;
        for (new, &old) in kept.iter().enumerate() {
            if s.contains(old) {
                out = out.insert(new + 1);
            }
        }
        out
    };
    let sets: Vec<IndexSet> = p.minimal().iter().map(|&m| relabel(m)).collect();
    WildProfile::normalize(kept.len(), &sets).unwrap()
}

/// Chain classification with a memo table keyed on canonical forms, shared
/// across calls. The recursion is pure, so concurrent classifiers built per
/// thread agree.
#[derive(Default)]
pub struct Classifier {
    memo: BTreeMap<(usize, Vec<u32>), ChainIndex>,
    perms: BTreeMap<usize, Vec<crate::setfam::Permutation>>,
}

impl Classifier {
    pub fn new() -> Classifier {
        Classifier::default()
    }

    /// Locates the clone generated by a function with this profile, over the
    /// almost unary functions. Non-intersecting profiles generate
    /// everything; intersecting ones classify to `M(m)` for some `m >= 3` or
    /// stay almost unary.
    pub fn chain_index(&mut self, p: &WildProfile) -> ChainIndex {
        if !p.is_intersecting() {
            return ChainIndex::M(2);
        }
        self.intersecting_index(p)
    }

    fn intersecting_index(&mut self, p: &WildProfile) -> ChainIndex {
        let p = drop_dummy(p);
        let n = p.n();
        if n == 1 || is_almost_unary_profile(&p) {
            return ChainIndex::AlmostUnary;
        }
        if p.minimal().iter().all(|m| m.len() >= n - 1) {
            // Wild exactly on the large sets: as wild as the second-order
            // statistic in n variables. Cheap enough to skip the memo.
            return ChainIndex::M(n);
        }
        let perms = self
            .perms
            .entry(n)
            .or_insert_with(|| crate::setfam::Permutation::all(n));
        let canon = p.canonical_form_with(perms);
        let key = (
            n,
            canon
                .minimal()
                .iter()
                .map(|m| m.bits())
                .collect::<Vec<u32>>(),
        );
        if let Some(&idx) = self.memo.get(&key) {
            return idx;
        }
        // Identification branches related by an automorphism of the
        // profile yield isomorphic children; swapping coordinates within a
        // block leaves the profile fixed, so one branch per ordered pair
        // of blocks suffices.
        let blocks = coordinate_blocks(&p);
        let mut seen = alloc::collections::BTreeSet::new();
        let mut best: Option<usize> = None;
        'outer: for i in 1..=n {
            for j in 1..=n {
                if i == j || !seen.insert((blocks[i - 1], blocks[j - 1])) {
                    continue;
                }
                let child = induced_profile(&p, i, j);
                debug_assert!(child.is_intersecting());
                match self.intersecting_index(&child) {
                    ChainIndex::AlmostUnary => {}
                    ChainIndex::M(m) => {
                        best = Some(best.map_or(m, |b: usize| b.min(m)));
                        if m == 3 {
                            // Intersecting profiles never reach M(2).
                            break 'outer;
                        }
                    }
                }
            }
        }
        let m = best.unwrap_or_else(|| {
            panic!("classification recursion exhausted all identifications on {p:?}")
        });
        let idx = ChainIndex::M(m);
        self.memo.insert(key, idx);
        idx
    }
}

/// One-shot classification with a fresh memo table.
pub fn chain_index(p: &WildProfile) -> ChainIndex {
    Classifier::new().chain_index(p)
}

/// Partitions coordinates into blocks whose internal swaps preserve the
/// profile. Preserving transpositions compose, so the relation generated by
/// them is an equivalence and any permutation inside a block is an
/// automorphism.
fn coordinate_blocks(p: &WildProfile) -> Vec<usize> {
    let n = p.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for a in 1..=n {
        for b in a + 1..=n {
            let (ra, rb) = (root(&mut parent, a - 1), root(&mut parent, b - 1));
            if ra == rb {
                continue;
            }
            let swap = crate::setfam::Permutation::transposition(n, a, b);
            if p.permute(&swap) == *p {
                parent[ra] = rb;
            }
        }
    }
    (0..n).map(|x| root(&mut parent, x)).collect()
}

/// Closed form for the chain position of the k-th order statistic of n
/// variables: `⌈n/(k-1)⌉`, for `2 <= k <= n`.
pub fn mnk_index(n: usize, k: usize) -> Result<usize, ClassifyError> {
    if k < 2 || k > n {
        return Err(ClassifyError::Domain { n, k });
    }
    Ok(n.div_ceil(k - 1))
}

/// Smallest minimal wild set size plus one; the chain position never
/// exceeds it.
pub fn wild_size_upper_bound(p: &WildProfile) -> Result<usize, ClassifyError> {
    if is_almost_unary_profile(p) {
        return Err(ClassifyError::AlmostUnaryInput);
    }
    Ok(p.minimal().iter().map(|m| m.len()).min().unwrap() + 1)
}

/// Cap for [`enumerate_profiles`]; the antichain count explodes past it.
pub const ENUMERATION_MAX_ARITY: usize = 5;

/// Streams all antichains of nonempty subsets of `{1,…,n}` in a
/// deterministic depth-first order (by member bitmask), starting with the
/// empty profile. Optionally restricted to pairwise intersecting families.
pub fn enumerate_profiles(
    n: usize,
    intersecting_only: bool,
) -> Result<ProfileEnumerator, ClassifyError> {
    if n == 0 || n > ENUMERATION_MAX_ARITY {
        return Err(ClassifyError::ArityTooLarge {
            n,
            max: ENUMERATION_MAX_ARITY,
        });
    }
    Ok(ProfileEnumerator {
        n,
        intersecting_only,
        chosen: Vec::new(),
        cursors: Vec::new(),
        started: false,
    })
}

pub struct ProfileEnumerator {
    n: usize,
    intersecting_only: bool,
    chosen: Vec<IndexSet>,
    cursors: Vec<u32>,
    started: bool,
}

impl ProfileEnumerator {
    fn compatible(&self, cand: IndexSet) -> bool {
        self.chosen.iter().all(|&m| {
            !m.is_subset(cand)
                && !cand.is_subset(m)
                && (!self.intersecting_only || m.intersects(cand))
        })
    }

    fn profile(&self) -> WildProfile {
        WildProfile::normalize(self.n, &self.chosen).unwrap()
    }
}

impl Iterator for ProfileEnumerator {
    type Item = WildProfile;

    fn next(&mut self) -> Option<WildProfile> {
        let size = 1u32 << self.n;
        if !self.started {
            self.started = true;
            self.cursors.push(1);
            return Some(self.profile());
        }
        loop {
            let cursor = self.cursors.last_mut()?;
            let cand = *cursor;
            *cursor += 1;
            if cand >= size {
                self.cursors.pop();
                self.chosen.pop();
                continue;
            }
            let cand = IndexSet::from_bits(cand);
            if self.compatible(cand) {
                self.chosen.push(cand);
                self.cursors.push(cand.bits() + 1);
                return Some(self.profile());
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::Term;
    use crate::wildness::exact_profile;
    use alloc::vec;

    fn s(elems: &[usize]) -> IndexSet {
        IndexSet::from_elems(elems)
    }

    fn profile(n: usize, sets: &[&[usize]]) -> WildProfile {
        let sets: Vec<IndexSet> = sets.iter().map(|e| s(e)).collect();
        WildProfile::normalize(n, &sets).unwrap()
    }

    fn mnk_profile(n: usize, k: usize) -> WildProfile {
        exact_profile(&Term::order_stat(k, (1..=n).map(Term::var).collect())).unwrap()
    }

    #[test]
    fn induced_profile_of_median() {
        let med3 = profile(3, &[&[1, 2], &[1, 3], &[2, 3]]);
        let ind = induced_profile(&med3, 3, 1);
        assert_eq!(ind, profile(2, &[&[1]]));
    }

    #[test]
    fn induced_profile_relabels_above_the_dropped_coordinate() {
        // Substituting x3 for x1 in the median leaves a function of the
        // doubled coordinate only.
        let med3 = profile(3, &[&[1, 2], &[1, 3], &[2, 3]]);
        let ind = induced_profile(&med3, 1, 3);
        assert_eq!(ind, profile(2, &[&[2]]));
    }

    #[test]
    fn induced_profile_of_second_order_stat() {
        let p = mnk_profile(4, 2); // all 3-subsets of {1..4}
        let ind = induced_profile(&p, 4, 1);
        assert_eq!(ind, profile(3, &[&[1, 2], &[1, 3]]));
    }

    #[test]
    fn induced_profile_of_middle_order_stat() {
        let p = mnk_profile(5, 3); // all 3-subsets of {1..5}
        let ind = induced_profile(&p, 5, 2);
        assert_eq!(ind, profile(4, &[&[1, 2], &[2, 3], &[2, 4], &[1, 3, 4]]));
        assert!(ind.is_intersecting());
    }

    #[test]
    fn drop_dummy_examples() {
        let padded_median = profile(4, &[&[1, 2], &[1, 3], &[2, 3]]);
        assert_eq!(
            drop_dummy(&padded_median),
            profile(3, &[&[1, 2], &[1, 3], &[2, 3]])
        );

        assert_eq!(
            drop_dummy(&WildProfile::bounded(4)),
            WildProfile::bounded(1)
        );

        let full = profile(3, &[&[1, 2], &[1, 3], &[2, 3]]);
        assert_eq!(drop_dummy(&full), full);

        // Relabelling keeps relative order of surviving coordinates.
        let sparse = profile(4, &[&[2], &[3, 4]]);
        assert_eq!(drop_dummy(&sparse), profile(3, &[&[1], &[2, 3]]));
    }

    #[test]
    fn chain_index_of_median_is_three() {
        assert_eq!(
            chain_index(&profile(3, &[&[1, 2], &[1, 3], &[2, 3]])),
            ChainIndex::M(3)
        );
    }

    #[test]
    fn chain_index_of_almost_unary_profiles() {
        assert_eq!(chain_index(&profile(2, &[&[1]])), ChainIndex::AlmostUnary);
        assert_eq!(
            chain_index(&WildProfile::bounded(3)),
            ChainIndex::AlmostUnary
        );
        assert_eq!(
            chain_index(&profile(2, &[&[1, 2]])),
            ChainIndex::AlmostUnary
        );
    }

    #[test]
    fn chain_index_of_non_intersecting_is_two() {
        assert_eq!(chain_index(&profile(2, &[&[1], &[2]])), ChainIndex::M(2));
    }

    #[test]
    fn chain_index_matches_closed_form_small() {
        let mut classifier = Classifier::new();
        for n in 2..=6 {
            for k in 2..=n {
                let p = mnk_profile(n, k);
                let expect = if p.is_intersecting() {
                    mnk_index(n, k).unwrap()
                } else {
                    2
                };
                assert_eq!(
                    classifier.chain_index(&p),
                    ChainIndex::M(expect),
                    "m[{n},{k}]"
                );
            }
        }
    }

    #[test]
    fn chain_index_of_remark_function() {
        // med5(x1,x1,x2,x3,x4) generates the same clone as med3.
        let f = exact_profile(&Term::median(vec![
            Term::var(1),
            Term::var(1),
            Term::var(2),
            Term::var(3),
            Term::var(4),
        ]))
        .unwrap();
        assert_eq!(chain_index(&f), ChainIndex::M(3));
    }

    #[test]
    fn mnk_index_closed_form() {
        assert_eq!(mnk_index(5, 3).unwrap(), 3);
        assert_eq!(mnk_index(7, 4).unwrap(), 3);
        for n in 2..=9 {
            assert_eq!(mnk_index(n, 2).unwrap(), n);
        }
        assert!(mnk_index(3, 1).is_err());
        assert!(mnk_index(3, 4).is_err());
    }

    #[test]
    fn wild_size_bound_examples() {
        let m53 = mnk_profile(5, 3);
        assert_eq!(wild_size_upper_bound(&m53).unwrap(), 4);
        assert_eq!(chain_index(&m53).chain_value(), 3);

        let med3 = profile(3, &[&[1, 2], &[1, 3], &[2, 3]]);
        assert_eq!(wild_size_upper_bound(&med3).unwrap(), 3);

        for n in 2..=6 {
            let p = mnk_profile(n, 2);
            assert_eq!(wild_size_upper_bound(&p).unwrap(), n);
            assert_eq!(chain_index(&p), ChainIndex::M(n));
        }

        assert!(wild_size_upper_bound(&profile(2, &[&[1]])).is_err());
    }

    #[test]
    fn enumeration_counts_match_antichain_counts() {
        // Antichains of nonempty subsets: one less than the Dedekind
        // numbers 3, 6, 20, 168, 7581, which count monotone families
        // including the one generated by the empty set.
        let expected = [2usize, 5, 19, 167, 7580];
        for (n, want) in (1..=5).zip(expected) {
            let got = enumerate_profiles(n, false).unwrap().count();
            assert_eq!(got, want, "n = {n}");
        }
        assert!(enumerate_profiles(6, false).is_err());
    }

    #[test]
    fn enumeration_intersecting_filter() {
        for p in enumerate_profiles(4, true).unwrap() {
            assert!(p.is_intersecting());
        }
        let all: Vec<WildProfile> = enumerate_profiles(3, false).unwrap().collect();
        let inter: Vec<WildProfile> = enumerate_profiles(3, true).unwrap().collect();
        let filtered: Vec<WildProfile> = all
            .into_iter()
            .filter(WildProfile::is_intersecting)
            .collect();
        assert_eq!(inter, filtered);
    }

    #[test]
    fn enumeration_is_deterministic() {
        let a: Vec<WildProfile> = enumerate_profiles(4, false).unwrap().collect();
        let b: Vec<WildProfile> = enumerate_profiles(4, false).unwrap().collect();
        assert_eq!(a, b);
    }
}
