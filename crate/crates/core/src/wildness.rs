//! Wildness of terms: sound symbolic bounds, the exactly-solvable fragment,
//! and a finite-window semi-decision oracle.
//!
//! Wildness of arbitrary compositions is not decidable, so the symbolic
//! analysis is three-valued: every subset of the coordinate set is proven
//! wild, proven tame, or left undetermined. On the fragment of order
//! statistics over variables (duplication allowed) the bounds meet and the
//! profile is exact. The window oracle semi-decides wildness by exhibiting a
//! point with a large value; an exhausted search is evidence of tameness,
//! never proof.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::setfam::{IndexSet, WildProfile, MAX_ARITY};
use crate::terms::{EvalFunction, Region, Term};

/// Three-valued wildness knowledge about a term: a lower family of sets
/// proven wild and an upper family proven tame (stored as the antichain of
/// maximal tame sets). No set is ever both.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileBounds {
    n: usize,
    proven_wild: WildProfile,
    proven_tame_max: Vec<IndexSet>,
}

impl ProfileBounds {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn proven_wild(&self) -> &WildProfile {
        &self.proven_wild
    }

    /// Maximal sets proven tame; subsets of these are tame too.
    pub fn proven_tame_max(&self) -> &[IndexSet] {
        &self.proven_tame_max
    }

    pub fn is_proven_wild(&self, a: IndexSet) -> bool {
        self.proven_wild.is_wild(a)
    }

    pub fn is_proven_tame(&self, a: IndexSet) -> bool {
        self.proven_tame_max.iter().any(|&t| a.is_subset(t))
    }

    pub fn is_determined(&self, a: IndexSet) -> bool {
        self.is_proven_wild(a) || self.is_proven_tame(a)
    }

    /// Subsets the analysis could not decide.
    pub fn undetermined(&self) -> Vec<IndexSet> {
        (0..1u32 << self.n)
            .map(IndexSet::from_bits)
            .filter(|&a| !self.is_determined(a))
            .collect()
    }
}

/// Raised when a term lies outside the exact fragment and some subset is
/// left undetermined by the symbolic rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotExact {
    pub undetermined: IndexSet,
}

impl fmt::Display for NotExact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "wildness of {:?} is undetermined for this term",
            self.undetermined
        )
    }
}

impl core::error::Error for NotExact {}

/// Per-node analysis state: wild/tame masks indexed by subset bitmask, plus
/// structural monotonicity.
struct NodeInfo {
    wild: Vec<bool>,
    tame: Vec<bool>,
    monotone: bool,
}

/// Sound wildness bounds for a term, at ambient arity `t.arity()`.
pub fn symbolic_bounds(t: &Term) -> ProfileBounds {
    symbolic_bounds_at(t, t.arity())
}

/// Sound wildness bounds with dummy coordinates up to ambient arity `n`.
pub fn symbolic_bounds_at(t: &Term, n: usize) -> ProfileBounds {
    assert!(n >= t.arity(), "ambient arity below term arity");
    assert!(n <= MAX_ARITY);
    let info = analyze(t, n);
    let size = 1usize << n;
    for a in 0..size {
        assert!(
            !(info.wild[a] && info.tame[a]),
            "unsound bounds: {:?} proven both wild and tame",
            IndexSet::from_bits(a as u32)
        );
    }
    // Minimal wild sets: wild with no wild proper subset one element down.
    let mut minimal = Vec::new();
    for a in 1..size {
        if !info.wild[a] {
            continue;
        }
        let set = IndexSet::from_bits(a as u32);
        if set
            .iter()
            .all(|i| !info.wild[set.remove(i).bits() as usize])
        {
            minimal.push(set);
        }
    }
    // Maximal tame sets: tame with no tame superset one element up.
    let mut tame_max = Vec::new();
    for a in 0..size {
        if !info.tame[a] {
            continue;
        }
        let set = IndexSet::from_bits(a as u32);
        let maximal = (1..=n).all(|i| set.contains(i) || !info.tame[set.insert(i).bits() as usize]);
        if maximal {
            tame_max.push(set);
        }
    }
    ProfileBounds {
        n,
        proven_wild: WildProfile::normalize(n, &minimal).unwrap(),
        proven_tame_max: tame_max,
    }
}

fn analyze(t: &Term, n: usize) -> NodeInfo {
    let size = 1usize << n;
    let contains = |a: usize, i: usize| a & (1 << (i - 1)) != 0;
    match t {
        Term::Var(i) => NodeInfo {
            wild: (0..size).map(|a| contains(a, *i)).collect(),
            tame: (0..size).map(|a| !contains(a, *i)).collect(),
            monotone: true,
        },
        Term::OrderStat { k, args } => {
            let infos: Vec<NodeInfo> = args.iter().map(|s| analyze(s, n)).collect();
            let m = args.len();
            let mut wild = vec![false; size];
            let mut tame = vec![false; size];
            for a in 0..size {
                // The k-th smallest value is bounded once k subterm values
                // are; it is unbounded once m-k+1 monotone subterms are
                // unbounded on the section, by pushing the section diagonal.
                let tame_count = infos.iter().filter(|i| i.tame[a]).count();
                let wild_count = infos.iter().filter(|i| i.monotone && i.wild[a]).count();
                tame[a] = tame_count >= *k;
                wild[a] = wild_count > m - *k;
            }
            NodeInfo {
                wild,
                tame,
                monotone: infos.iter().all(|i| i.monotone),
            }
        }
        Term::Pairing(x, y) => {
            // The pairing dominates both arguments pointwise, so wildness of
            // either side survives; a section where both are bounded only
            // pairs finitely many values.
            let a = analyze(x, n);
            let b = analyze(y, n);
            NodeInfo {
                wild: (0..size).map(|s| a.wild[s] || b.wild[s]).collect(),
                tame: (0..size).map(|s| a.tame[s] && b.tame[s]).collect(),
                monotone: a.monotone && b.monotone,
            }
        }
        Term::RegionPairing(r, x, y) => match (x.as_ref(), y.as_ref()) {
            (Term::Var(i), Term::Var(j)) if i != j => {
                // Fixing the distinguished coordinate of the region leaves
                // finitely many points inside it; varying it keeps an
                // injective unbounded section.
                let wc = match r {
                    Region::Delta | Region::DeltaPrime => *i,
                    Region::Nabla => *j,
                };
                NodeInfo {
                    wild: (0..size).map(|a| contains(a, wc)).collect(),
                    tame: (0..size).map(|a| !contains(a, wc)).collect(),
                    monotone: false,
                }
            }
            (Term::Var(i), Term::Var(j)) if i == j => match r {
                // On the diagonal only Δ' is inhabited.
                Region::DeltaPrime => NodeInfo {
                    wild: (0..size).map(|a| contains(a, *i)).collect(),
                    tame: (0..size).map(|a| !contains(a, *i)).collect(),
                    monotone: false,
                },
                _ => NodeInfo {
                    wild: vec![false; size],
                    tame: vec![true; size],
                    monotone: false,
                },
            },
            _ => {
                // General subterms: the region can zero out arbitrarily, so
                // only tameness of both sides survives.
                let a = analyze(x, n);
                let b = analyze(y, n);
                NodeInfo {
                    wild: vec![false; size],
                    tame: (0..size).map(|s| a.tame[s] && b.tame[s]).collect(),
                    monotone: false,
                }
            }
        },
        Term::Unary(op, s) => {
            let info = analyze(s, n);
            let monotone = info.monotone && op.monotone();
            if op.bounded_range() {
                return NodeInfo {
                    wild: vec![false; size],
                    tame: vec![true; size],
                    monotone,
                };
            }
            let wild = if op.injective_monotone() {
                info.wild
            } else {
                vec![false; size]
            };
            NodeInfo {
                wild,
                tame: info.tame,
                monotone,
            }
        }
    }
}

/// The exact wildness profile of a term in the fragment where the symbolic
/// bounds determine every subset.
pub fn exact_profile(t: &Term) -> Result<WildProfile, NotExact> {
    exact_profile_at(t, t.arity())
}

/// Like [`exact_profile`] with dummy coordinates up to arity `n`.
pub fn exact_profile_at(t: &Term, n: usize) -> Result<WildProfile, NotExact> {
    let bounds = symbolic_bounds_at(t, n);
    match bounds.undetermined().first() {
        Some(&a) => Err(NotExact { undetermined: a }),
        None => Ok(bounds.proven_wild.clone()),
    }
}

/// Outcome of a finite window search for a large value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// A point whose value reaches the bound.
    Witnessed { point: Vec<u64>, value: u64 },
    /// No such point in the searched window. Evidence, not proof, of
    /// tameness.
    Exhausted { window: u64, bound: u64 },
}

impl Verdict {
    pub fn is_witnessed(&self) -> bool {
        matches!(self, Verdict::Witnessed { .. })
    }
}

/// Checks the fixing agrees with the varied set: unassigned exactly on `a`.
fn check_fixing(f: &EvalFunction, a: IndexSet, fixing: &[Option<u64>]) {
    assert_eq!(fixing.len(), f.arity(), "arity mismatch");
    assert!(a.in_range(f.arity()), "varied set out of range");
    for (idx, v) in fixing.iter().enumerate() {
        let on_a = a.contains(idx + 1);
        assert_eq!(
            v.is_none(),
            on_a,
            "fixing must assign exactly the coordinates outside the set"
        );
    }
}

/// Exhaustively searches `[0, window)^A` for a point where the value reaches
/// `bound`, the coordinates outside `A` held at the fixing.
pub fn empirical_wild(
    f: &EvalFunction,
    a: IndexSet,
    fixing: &[Option<u64>],
    bound: u64,
    window: u64,
) -> Verdict {
    check_fixing(f, a, fixing);
    let slots: Vec<usize> = a.iter().collect();
    let mut point: Vec<u64> = fixing.iter().map(|v| v.unwrap_or(0)).collect();
    let mut found = None;
    scan_cube(&mut point, &slots, window, &mut |pt| {
        let value = f.eval(pt);
        if value >= bound {
            found = Some(Verdict::Witnessed {
                point: pt.to_vec(),
                value,
            });
            false
        } else {
            true
        }
    });
    found.unwrap_or(Verdict::Exhausted { window, bound })
}

/// Odometer over the given slots, last slot fastest; `visit` returns `false`
/// to stop.
fn scan_cube(
    point: &mut [u64],
    slots: &[usize],
    window: u64,
    visit: &mut dyn FnMut(&[u64]) -> bool,
) {
    for &s in slots {
        point[s - 1] = 0;
    }
    loop {
        if !visit(point) {
            return;
        }
        let mut i = slots.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            let s = slots[i] - 1;
            point[s] += 1;
            if point[s] < window {
                break;
            }
            point[s] = 0;
        }
    }
}

/// Window-doubling search: scans the section diagonal up to `max_window`
/// and the full cube while it stays within `full_budget` points. Witnesses
/// in the monotone fragment appear on the diagonal quickly.
pub fn adaptive_wild(
    f: &EvalFunction,
    a: IndexSet,
    fixing: &[Option<u64>],
    bound: u64,
    max_window: u64,
    full_budget: u64,
) -> Verdict {
    check_fixing(f, a, fixing);
    let slots: Vec<usize> = a.iter().collect();
    let mut point: Vec<u64> = fixing.iter().map(|v| v.unwrap_or(0)).collect();
    if slots.is_empty() {
        let value = f.eval(&point);
        return if value >= bound {
            Verdict::Witnessed { point, value }
        } else {
            Verdict::Exhausted {
                window: max_window,
                bound,
            }
        };
    }
    let mut scanned_to = 0u64;
    let mut window = 16u64.min(max_window);
    loop {
        // Diagonal first.
        for t in scanned_to..window {
            for &s in &slots {
                point[s - 1] = t;
            }
            let value = f.eval(&point);
            if value >= bound {
                return Verdict::Witnessed { point, value };
            }
        }
        scanned_to = window;
        // Full cube while affordable.
        if (window as u128).pow(slots.len() as u32) <= full_budget as u128 {
            if let w @ Verdict::Witnessed { .. } = empirical_wild(f, a, fixing, bound, window) {
                return w;
            }
        }
        if window >= max_window {
            return Verdict::Exhausted {
                window: max_window,
                bound,
            };
        }
        window = (window * 2).min(max_window);
    }
}

/// Almost unary at the profile level: some coordinate is held in every
/// minimal wild set (equivalently, some `(n-1)`-subset is not wild). Unary
/// profiles are always almost unary.
pub fn is_almost_unary_profile(p: &WildProfile) -> bool {
    let n = p.n();
    if n == 1 {
        return true;
    }
    (1..=n).any(|k| !p.is_wild(IndexSet::full(n).remove(k)))
}

/// Membership in the polymorphism clone of the binary almost unary
/// functions: all pairs of wild sets intersect.
pub fn in_pol_t1(p: &WildProfile) -> bool {
    p.is_intersecting()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::UnaryAtomTable;
    use crate::terms::UnaryOp;

    fn s(elems: &[usize]) -> IndexSet {
        IndexSet::from_elems(elems)
    }

    fn med3() -> Term {
        Term::median(vec![Term::var(1), Term::var(2), Term::var(3)])
    }

    fn mnk(n: usize, k: usize) -> Term {
        Term::order_stat(k, (1..=n).map(Term::var).collect())
    }

    #[test]
    fn median_bounds_are_exact() {
        let b = symbolic_bounds(&med3());
        assert_eq!(
            b.proven_wild().minimal(),
            &[s(&[1, 2]), s(&[1, 3]), s(&[2, 3])]
        );
        assert_eq!(b.proven_tame_max(), &[s(&[1]), s(&[2]), s(&[3])]);
        assert!(b.undetermined().is_empty());
    }

    #[test]
    fn order_stat_minimal_wild_sets_have_size_n_minus_k_plus_1() {
        for n in 2..=6 {
            for k in 1..=n {
                let b = symbolic_bounds(&mnk(n, k));
                assert!(b.undetermined().is_empty(), "m[{n},{k}] must be exact");
                for m in b.proven_wild().minimal() {
                    assert_eq!(m.len(), n - k + 1, "m[{n},{k}]");
                }
                let count = b.proven_wild().minimal().len();
                let choose =
                    |n: usize, r: usize| (1..=r).fold(1usize, |acc, i| acc * (n - r + i) / i);
                assert_eq!(count, choose(n, n - k + 1));
            }
        }
    }

    #[test]
    fn delta_pairing_bounds() {
        let pd = Term::region_pairing(Region::Delta, Term::var(1), Term::var(2));
        let b = symbolic_bounds(&pd);
        assert_eq!(b.proven_wild().minimal(), &[s(&[1])]);
        assert_eq!(b.proven_tame_max(), &[s(&[2])]);

        let pn = Term::region_pairing(Region::Nabla, Term::var(1), Term::var(2));
        let b = symbolic_bounds(&pn);
        assert_eq!(b.proven_wild().minimal(), &[s(&[2])]);

        let p = Term::pairing(Term::var(1), Term::var(2));
        let b = symbolic_bounds(&p);
        assert_eq!(b.proven_wild().minimal(), &[s(&[1]), s(&[2])]);
    }

    #[test]
    fn degenerate_region_pairings_on_equal_variables() {
        let zero = Term::region_pairing(Region::Delta, Term::var(1), Term::var(1));
        let b = symbolic_bounds_at(&zero, 1);
        assert!(b.proven_wild().minimal().is_empty());
        assert!(b.is_proven_tame(s(&[1])));

        let diag = Term::region_pairing(Region::DeltaPrime, Term::var(1), Term::var(1));
        let b = symbolic_bounds_at(&diag, 1);
        assert_eq!(b.proven_wild().minimal(), &[s(&[1])]);
    }

    #[test]
    fn unary_atoms_keep_or_drop_wildness() {
        let succ = Term::unary(UnaryOp::Succ, Term::var(1));
        assert_eq!(symbolic_bounds(&succ).proven_wild().minimal(), &[s(&[1])]);

        let c = Term::unary(UnaryOp::Const(7), Term::var(1));
        let b = symbolic_bounds(&c);
        assert!(b.proven_wild().minimal().is_empty());
        assert!(b.is_proven_tame(s(&[1])));

        let named = Term::unary(UnaryOp::Named("t".into()), Term::var(1));
        let b = symbolic_bounds(&named);
        assert!(b.proven_wild().minimal().is_empty());
        assert!(!b.is_proven_tame(s(&[1])));
        assert_eq!(b.undetermined(), &[s(&[1])]);
    }

    #[test]
    fn mixed_composition_is_undetermined_but_sound() {
        // min of the two complementary region pairings is identically zero,
        // which the rules cannot see; they must leave the full set open
        // rather than claim it wild.
        let t = Term::min_of(vec![
            Term::region_pairing(Region::Delta, Term::var(1), Term::var(2)),
            Term::region_pairing(Region::Nabla, Term::var(1), Term::var(2)),
        ]);
        let b = symbolic_bounds(&t);
        assert!(!b.is_proven_wild(s(&[1, 2])));
        assert!(b.is_proven_tame(s(&[1])));
        assert!(b.is_proven_tame(s(&[2])));
        assert!(exact_profile(&t).is_err());
    }

    #[test]
    fn exact_profile_of_duplicated_order_stat_is_median_profile() {
        let t = Term::order_stat(
            3,
            vec![
                Term::var(1),
                Term::var(1),
                Term::var(2),
                Term::var(2),
                Term::var(3),
            ],
        );
        let p = exact_profile(&t).unwrap();
        assert_eq!(p.minimal(), &[s(&[1, 2]), s(&[1, 3]), s(&[2, 3])]);
    }

    #[test]
    fn exact_profile_respects_ambient_arity() {
        let p = exact_profile_at(&med3(), 4).unwrap();
        assert_eq!(p.n(), 4);
        assert_eq!(p.minimal(), &[s(&[1, 2]), s(&[1, 3]), s(&[2, 3])]);
    }

    #[test]
    fn exact_profile_of_weighted_median() {
        // med5(x1,x1,x2,x3,x4): the wild sets of two elements are exactly
        // {1,2},{1,3},{1,4}.
        let t = Term::median(vec![
            Term::var(1),
            Term::var(1),
            Term::var(2),
            Term::var(3),
            Term::var(4),
        ]);
        let p = exact_profile(&t).unwrap();
        let two_sets: Vec<IndexSet> = p
            .minimal()
            .iter()
            .copied()
            .filter(|m| m.len() == 2)
            .collect();
        assert_eq!(two_sets, &[s(&[1, 2]), s(&[1, 3]), s(&[1, 4])]);
        assert!(p.is_wild(s(&[2, 3, 4])));
    }

    #[test]
    fn empirical_witness_for_order_stat() {
        let f = EvalFunction::from_term(mnk(3, 2), UnaryAtomTable::new());
        let v = empirical_wild(&f, s(&[1, 2]), &[None, None, Some(0)], 100, 128);
        assert_eq!(
            v,
            Verdict::Witnessed {
                point: vec![100, 100, 0],
                value: 100
            }
        );
    }

    #[test]
    fn empirical_exhausted_on_bounded_section() {
        let pd = Term::region_pairing(Region::Delta, Term::var(1), Term::var(2));
        let f = EvalFunction::from_term(pd, UnaryAtomTable::new());
        let v = empirical_wild(&f, s(&[2]), &[Some(5), None], 1000, 64);
        assert_eq!(
            v,
            Verdict::Exhausted {
                window: 64,
                bound: 1000
            }
        );
    }

    #[test]
    fn empirical_witness_on_unbounded_section() {
        let pd = Term::region_pairing(Region::Delta, Term::var(1), Term::var(2));
        let f = EvalFunction::from_term(pd, UnaryAtomTable::new());
        let v = empirical_wild(&f, s(&[1]), &[None, Some(0)], 1000, 1024);
        assert!(v.is_witnessed());
        let v = adaptive_wild(&f, s(&[1]), &[None, Some(0)], 1000, 1 << 14, 1 << 16);
        assert!(v.is_witnessed());
    }

    #[test]
    fn almost_unary_profiles() {
        let pd_profile = WildProfile::normalize(2, &[s(&[1])]).unwrap();
        assert!(is_almost_unary_profile(&pd_profile));

        let med = WildProfile::normalize(3, &[s(&[1, 2]), s(&[1, 3]), s(&[2, 3])]).unwrap();
        assert!(!is_almost_unary_profile(&med));

        let min2 = WildProfile::normalize(2, &[s(&[1, 2])]).unwrap();
        assert!(is_almost_unary_profile(&min2));
    }

    #[test]
    fn pol_t1_membership() {
        let med = WildProfile::normalize(3, &[s(&[1, 2]), s(&[1, 3]), s(&[2, 3])]).unwrap();
        assert!(in_pol_t1(&med));

        let max2 = WildProfile::normalize(2, &[s(&[1]), s(&[2])]).unwrap();
        assert!(!in_pol_t1(&max2));

        for n in 2..=6 {
            for k in 2..=n {
                let p = exact_profile(&mnk(n, k)).unwrap();
                assert_eq!(in_pol_t1(&p), 2 * k <= n + 1, "m[{n},{k}]");
            }
        }
    }
}
