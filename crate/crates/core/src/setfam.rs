//! Wild-set families over a finite coordinate set.
//!
//! Coordinates are 1-based: the ambient set for arity `n` is `N = {1,…,n}`.
//! A family of wild sets is always upward closed (supersets of wild sets are
//! wild), so a [`WildProfile`] stores only the antichain of minimal wild
//! sets. The empty set is never wild; a bounded function is the profile with
//! no wild sets at all.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Largest supported arity. Subset tables are `2^n` entries and the
/// permutation searches are factorial, so this is a hard sanity cap rather
/// than a tuning knob.
pub const MAX_ARITY: usize = 16;

/// Errors from constructing set-family values out of raw data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetError {
    /// A coordinate lies outside `1..=n`.
    OutOfRange { element: usize, arity: usize },
    /// Arity outside `1..=MAX_ARITY`.
    BadArity(usize),
    /// A wild set member was empty (a single value is never large).
    EmptyMember,
    /// The image list does not describe a bijection on `1..=n`.
    NotBijective,
}

impl fmt::Display for SetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetError::OutOfRange { element, arity } => {
                write!(f, "coordinate {element} out of range 1..={arity}")
            }
            SetError::BadArity(n) => write!(f, "arity {n} not in 1..={MAX_ARITY}"),
            SetError::EmptyMember => write!(f, "empty set cannot be wild"),
            SetError::NotBijective => write!(f, "images do not form a permutation"),
        }
    }
}

impl core::error::Error for SetError {}

/// A subset of the coordinate set `{1,…,n}`, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct IndexSet {
    bits: u32,
}

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet { bits: 0 };

    /// The set `{1,…,n}`.
    pub fn full(n: usize) -> IndexSet {
        debug_assert!(n <= MAX_ARITY);
        IndexSet {
            bits: if n == 0 { 0 } else { (u32::MAX) >> (32 - n) },
        }
    }

    /// Builds a set from 1-based elements. Panics on elements outside
    /// `1..=MAX_ARITY`; use [`IndexSet::checked_from_elems`] for raw input.
    pub fn from_elems(elems: &[usize]) -> IndexSet {
        let mut bits = 0u32;
        for &e in elems {
            assert!((1..=MAX_ARITY).contains(&e), "coordinate {e} out of range");
            bits |= 1 << (e - 1);
        }
        IndexSet { bits }
    }

    /// Like [`IndexSet::from_elems`] but validates against an ambient arity.
    pub fn checked_from_elems(elems: &[usize], n: usize) -> Result<IndexSet, SetError> {
        if n == 0 || n > MAX_ARITY {
            return Err(SetError::BadArity(n));
        }
        let mut bits = 0u32;
        for &e in elems {
            if e < 1 || e > n {
                return Err(SetError::OutOfRange {
                    element: e,
                    arity: n,
                });
            }
            bits |= 1 << (e - 1);
        }
        Ok(IndexSet { bits })
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn from_bits(bits: u32) -> IndexSet {
        IndexSet { bits }
    }

    pub fn contains(self, i: usize) -> bool {
        (1..=MAX_ARITY).contains(&i) && self.bits & (1 << (i - 1)) != 0
    }

    pub fn insert(self, i: usize) -> IndexSet {
        debug_assert!((1..=MAX_ARITY).contains(&i));
        IndexSet {
            bits: self.bits | (1 << (i - 1)),
        }
    }

    pub fn remove(self, i: usize) -> IndexSet {
        debug_assert!((1..=MAX_ARITY).contains(&i));
        IndexSet {
            bits: self.bits & !(1 << (i - 1)),
        }
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn is_subset(self, other: IndexSet) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn intersects(self, other: IndexSet) -> bool {
        self.bits & other.bits != 0
    }

    pub fn union(self, other: IndexSet) -> IndexSet {
        IndexSet {
            bits: self.bits | other.bits,
        }
    }

    pub fn intersection(self, other: IndexSet) -> IndexSet {
        IndexSet {
            bits: self.bits & other.bits,
        }
    }

    /// Complement within `{1,…,n}`.
    pub fn complement(self, n: usize) -> IndexSet {
        IndexSet {
            bits: Self::full(n).bits & !self.bits,
        }
    }

    /// True when all elements lie in `1..=n`.
    pub fn in_range(self, n: usize) -> bool {
        self.is_subset(Self::full(n))
    }

    /// Elements in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let bits = self.bits;
        (1..=MAX_ARITY).filter(move |i| bits & (1 << (i - 1)) != 0)
    }

    /// Elementwise image under a permutation.
    pub fn map(self, perm: &Permutation) -> IndexSet {
        let mut bits = 0u32;
        for i in self.iter() {
            bits |= 1 << (perm.apply(i) - 1);
        }
        IndexSet { bits }
    }

    pub fn smallest(self) -> Option<usize> {
        if self.bits == 0 {
            None
        } else {
            Some(self.bits.trailing_zeros() as usize + 1)
        }
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// A bijection on `{1,…,n}`, `images[i-1] = π(i)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Permutation {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    pub fn new(images: Vec<usize>) -> Result<Permutation, SetError> {
        let n = images.len();
        if n == 0 || n > MAX_ARITY {
            return Err(SetError::BadArity(n));
        }
        let mut seen = IndexSet::EMPTY;
        for &im in &images {
            if im < 1 || im > n || seen.contains(im) {
                return Err(SetError::NotBijective);
            }
            seen = seen.insert(im);
        }
        Ok(Permutation { images })
    }

    /// Swaps `a` and `b`, fixing everything else.
    pub fn transposition(n: usize, a: usize, b: usize) -> Permutation {
        let mut images: Vec<usize> = (1..=n).collect();
        images.swap(a - 1, b - 1);
        Permutation { images }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.n(), other.n(), "arity mismatch");
        Permutation {
            images: (1..=self.n()).map(|i| self.apply(other.apply(i))).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0usize; self.n()];
        for i in 1..=self.n() {
            images[self.apply(i) - 1] = i;
        }
        Permutation { images }
    }

    /// All `n!` permutations in lexicographic order of their image lists.
    pub fn all(n: usize) -> Vec<Permutation> {
        assert!(
            (1..=10).contains(&n),
            "permutation enumeration capped at n = 10"
        );
        let mut out = Vec::new();
        let mut images: Vec<usize> = (1..=n).collect();
        loop {
            out.push(Permutation {
                images: images.clone(),
            });
            // next_permutation in place
            let Some(i) = (0..n - 1).rev().find(|&i| images[i] < images[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| images[j] > images[i]).unwrap();
            images.swap(i, j);
            images[i + 1..].reverse();
        }
        out
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, im) in self.images.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{im}")?;
        }
        write!(f, ")")
    }
}

/// A wildness profile: arity `n` plus the antichain of minimal wild subsets
/// of `{1,…,n}`, sorted by bitmask. A set is wild exactly when it contains a
/// minimal member; `N` itself is wild iff the antichain is nonempty, which
/// encodes "bounded range" as the empty profile.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WildProfile {
    n: usize,
    minimal: Vec<IndexSet>,
}

impl WildProfile {
    /// Canonicalizes an arbitrary generating family into the minimal
    /// antichain with the same upward closure.
    pub fn normalize(n: usize, sets: &[IndexSet]) -> Result<WildProfile, SetError> {
        if n == 0 || n > MAX_ARITY {
            return Err(SetError::BadArity(n));
        }
        for &s in sets {
            if s.is_empty() {
                return Err(SetError::EmptyMember);
            }
            if !s.in_range(n) {
                let bad = s.iter().find(|&e| e > n).unwrap();
                return Err(SetError::OutOfRange {
                    element: bad,
                    arity: n,
                });
            }
        }
        let mut minimal: Vec<IndexSet> = Vec::new();
        for &s in sets {
            if minimal.iter().any(|&m| m.is_subset(s)) {
                continue;
            }
            minimal.retain(|&m| !s.is_subset(m));
            minimal.push(s);
        }
        minimal.sort_unstable();
        Ok(WildProfile { n, minimal })
    }

    /// The profile of a bounded function: no wild sets.
    pub fn bounded(n: usize) -> WildProfile {
        assert!((1..=MAX_ARITY).contains(&n));
        WildProfile {
            n,
            minimal: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn minimal(&self) -> &[IndexSet] {
        &self.minimal
    }

    /// Same minimal family viewed at a larger arity; the added coordinates
    /// are dummies that occur in no wild set.
    pub fn padded(&self, n: usize) -> WildProfile {
        assert!(
            n >= self.n && n <= MAX_ARITY,
            "padding must not shrink arity"
        );
        WildProfile {
            n,
            minimal: self.minimal.clone(),
        }
    }

    /// Wildness predicate: `A` is wild iff it contains a minimal wild set.
    pub fn is_wild(&self, a: IndexSet) -> bool {
        assert!(
            a.in_range(self.n),
            "index set {a:?} out of range for arity {}",
            self.n
        );
        self.minimal.iter().any(|&m| m.is_subset(a))
    }

    /// Whether every pair of wild sets intersects. Checking the minimal sets
    /// suffices: supersets only gain elements.
    pub fn is_intersecting(&self) -> bool {
        for (i, &a) in self.minimal.iter().enumerate() {
            for &b in &self.minimal[i + 1..] {
                if !a.intersects(b) {
                    return false;
                }
            }
        }
        true
    }

    /// Image profile under a coordinate permutation.
    pub fn permute(&self, perm: &Permutation) -> WildProfile {
        assert_eq!(perm.n(), self.n, "arity mismatch");
        let mut minimal: Vec<IndexSet> = self.minimal.iter().map(|m| m.map(perm)).collect();
        minimal.sort_unstable();
        WildProfile { n: self.n, minimal }
    }

    /// The least profile in this profile's orbit under coordinate
    /// permutations, comparing sorted bitmask sequences. Two profiles have
    /// equal canonical forms exactly when [`equiv_wild`] finds a witness.
    pub fn canonical_form(&self) -> WildProfile {
        self.canonical_form_with(&Permutation::all(self.n))
    }

    /// [`WildProfile::canonical_form`] over a precomputed permutation list,
    /// saving the factorial regeneration on hot paths.
    pub fn canonical_form_with(&self, perms: &[Permutation]) -> WildProfile {
        if self.minimal.is_empty() {
            return self.clone();
        }
        let mut best: Option<Vec<IndexSet>> = None;
        let mut image = Vec::with_capacity(self.minimal.len());
        for perm in perms {
            debug_assert_eq!(perm.n(), self.n);
            image.clear();
            image.extend(self.minimal.iter().map(|m| m.map(perm)));
            image.sort_unstable();
            match &best {
                Some(b) if image.as_slice() >= b.as_slice() => {}
                _ => best = Some(image.clone()),
            }
        }
        WildProfile {
            n: self.n,
            minimal: best.unwrap(),
        }
    }

    /// All wild subsets of `{1,…,n}` (the upward closure), ascending by
    /// bitmask. Exponential in `n`; intended for small-arity test beds.
    pub fn wild_sets(&self) -> Vec<IndexSet> {
        (1..1u32 << self.n)
            .map(IndexSet::from_bits)
            .filter(|&a| self.is_wild(a))
            .collect()
    }
}

impl fmt::Debug for WildProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "profile(n={}, {:?})", self.n, self.minimal)
    }
}

/// Searches for a permutation witnessing that `q` is at least as wild as
/// `p`: every `p`-wild set maps to a `q`-wild set. By upward closure it is
/// enough to check the minimal sets of `p`.
pub fn leq_wild(p: &WildProfile, q: &WildProfile) -> Option<Permutation> {
    assert_eq!(p.n(), q.n(), "arity mismatch");
    Permutation::all(p.n())
        .into_iter()
        .find(|perm| p.minimal.iter().all(|&m| q.is_wild(m.map(perm))))
}

/// Searches for a single permutation carrying the wild family of `p` exactly
/// onto the wild family of `q`; equivalently, mapping minimal sets onto
/// minimal sets. Exists iff `leq_wild` holds in both directions.
pub fn equiv_wild(p: &WildProfile, q: &WildProfile) -> Option<Permutation> {
    assert_eq!(p.n(), q.n(), "arity mismatch");
    if p.minimal.len() != q.minimal.len() {
        return None;
    }
    // Cheap prune: the multiset of minimal-set sizes is orbit-invariant.
    let sizes = |prof: &WildProfile| {
        let mut v: Vec<usize> = prof.minimal.iter().map(|m| m.len()).collect();
        v.sort_unstable();
        v
    };
    if sizes(p) != sizes(q) {
        return None;
    }
    let mut image = Vec::with_capacity(p.minimal.len());
    Permutation::all(p.n()).into_iter().find(|perm| {
        image.clear();
        image.extend(p.minimal.iter().map(|m| m.map(perm)));
        image.sort_unstable();
        image == q.minimal
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(elems: &[usize]) -> IndexSet {
        IndexSet::from_elems(elems)
    }

    fn profile(n: usize, sets: &[&[usize]]) -> WildProfile {
        let sets: Vec<IndexSet> = sets.iter().map(|e| s(e)).collect();
        WildProfile::normalize(n, &sets).unwrap()
    }

    #[test]
    fn normalize_removes_supersets() {
        let p = profile(3, &[&[1, 2], &[1, 2, 3]]);
        assert_eq!(p.minimal(), &[s(&[1, 2])]);
    }

    #[test]
    fn normalize_empty_input_is_bounded() {
        let p = WildProfile::normalize(2, &[]).unwrap();
        assert_eq!(p.minimal(), &[]);
        assert!(!p.is_wild(s(&[1, 2])));
    }

    #[test]
    fn normalize_keeps_incomparable_sets() {
        let p = profile(4, &[&[1, 2], &[1], &[3, 4]]);
        assert_eq!(p.minimal(), &[s(&[1]), s(&[3, 4])]);
    }

    #[test]
    fn normalize_deduplicates() {
        let p = profile(3, &[&[1, 2], &[1, 2], &[3]]);
        assert_eq!(p.minimal(), &[s(&[1, 2]), s(&[3])]);
    }

    #[test]
    fn normalize_rejects_out_of_range() {
        let err = WildProfile::normalize(2, &[s(&[3])]).unwrap_err();
        assert_eq!(
            err,
            SetError::OutOfRange {
                element: 3,
                arity: 2
            }
        );
    }

    #[test]
    fn normalize_rejects_empty_member() {
        assert_eq!(
            WildProfile::normalize(2, &[IndexSet::EMPTY]).unwrap_err(),
            SetError::EmptyMember
        );
    }

    #[test]
    fn wildness_of_median_profile() {
        let med3 = profile(3, &[&[1, 2], &[1, 3], &[2, 3]]);
        assert!(med3.is_wild(s(&[1, 2])));
        assert!(!med3.is_wild(s(&[1])));
        assert!(!med3.is_wild(IndexSet::EMPTY));
        assert!(med3.is_wild(s(&[1, 2, 3])));
    }

    #[test]
    fn intersecting_families() {
        assert!(profile(3, &[&[1, 2], &[1, 3], &[2, 3]]).is_intersecting());
        assert!(!profile(2, &[&[1], &[2]]).is_intersecting());
        assert!(WildProfile::bounded(3).is_intersecting());
    }

    #[test]
    fn permute_moves_minimal_sets() {
        let p = profile(3, &[&[1, 2]]);
        let cycle = Permutation::new(vec![2, 3, 1]).unwrap();
        assert_eq!(p.permute(&cycle).minimal(), &[s(&[2, 3])]);

        let q = profile(3, &[&[1], &[2, 3]]);
        let swap = Permutation::transposition(3, 1, 3);
        assert_eq!(q.permute(&swap).minimal(), &[s(&[1, 2]), s(&[3])]);

        let id = Permutation::identity(3);
        assert_eq!(p.permute(&id), p);
    }

    #[test]
    fn leq_wild_padded_order_statistics() {
        // Every n-subset of {1..n+1} is wild for m^{n+1}_2; the padded
        // m^n_2 has the (n-1)-subsets of {1..n} minimal. Identity works.
        for n in 2..=5 {
            let subsets = |of: usize, size: usize| -> Vec<IndexSet> {
                (1..1u32 << of)
                    .map(IndexSet::from_bits)
                    .filter(|a| a.len() == size)
                    .collect()
            };
            let p = WildProfile::normalize(n + 1, &subsets(n + 1, n)).unwrap();
            let q = WildProfile::normalize(n, &subsets(n, n - 1))
                .unwrap()
                .padded(n + 1);
            let w = leq_wild(&p, &q).expect("witness");
            assert_eq!(w.images(), Permutation::identity(n + 1).images());
            assert!(
                leq_wild(&q, &p).is_none(),
                "n = {n}: reverse direction must fail"
            );
        }
    }

    #[test]
    fn leq_wild_fails_both_ways_on_remark_profiles() {
        // med3 padded to arity 4 vs med5(x1,x1,x2,x3,x4): the 2-element wild
        // sets form a triangle in one and a star in the other.
        let g = profile(4, &[&[1, 2], &[1, 3], &[2, 3]]);
        let f = profile(4, &[&[1, 2], &[1, 3], &[1, 4], &[2, 3, 4]]);
        assert!(leq_wild(&f, &g).is_none());
        assert!(leq_wild(&g, &f).is_none());
        assert!(equiv_wild(&f, &g).is_none());
    }

    #[test]
    fn leq_wild_reflexive() {
        let p = profile(4, &[&[1, 2], &[1, 3], &[1, 4], &[2, 3, 4]]);
        assert!(leq_wild(&p, &p).is_some());
    }

    #[test]
    fn equiv_wild_on_singleton_swap() {
        let p = profile(2, &[&[1]]);
        let q = profile(2, &[&[2]]);
        let w = equiv_wild(&p, &q).expect("witness");
        assert_eq!(w.images(), &[2, 1]);
    }

    #[test]
    fn equiv_wild_median_symmetry() {
        let med3 = profile(3, &[&[1, 2], &[1, 3], &[2, 3]]);
        let swapped = med3.permute(&Permutation::transposition(3, 1, 2));
        assert!(equiv_wild(&med3, &swapped).is_some());
    }

    #[test]
    fn canonical_form_examples() {
        assert_eq!(
            profile(3, &[&[2, 3]]).canonical_form(),
            profile(3, &[&[1, 2]])
        );
        let med3 = profile(3, &[&[1, 2], &[1, 3], &[2, 3]]);
        assert_eq!(med3.canonical_form(), med3);
        assert_eq!(
            profile(3, &[&[3], &[1, 2]]).canonical_form(),
            profile(3, &[&[1], &[2, 3]])
        );
    }

    #[test]
    fn permutation_compose_and_inverse() {
        let a = Permutation::new(vec![2, 3, 1]).unwrap();
        let b = Permutation::transposition(3, 1, 2);
        let c = a.compose(&b);
        for i in 1..=3 {
            assert_eq!(c.apply(i), a.apply(b.apply(i)));
        }
        let inv = a.inverse();
        for i in 1..=3 {
            assert_eq!(inv.apply(a.apply(i)), i);
        }
    }

    #[test]
    fn permutation_enumeration_count() {
        assert_eq!(Permutation::all(1).len(), 1);
        assert_eq!(Permutation::all(4).len(), 24);
    }

    #[test]
    fn permutation_rejects_non_bijections() {
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::new(vec![1, 3]).is_err());
    }
}
