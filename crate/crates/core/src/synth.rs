//! Constructive side of the calculus: terms and evaluable functions
//! realizing the generation arguments, certified on finite windows.
//!
//! Everything here is window-relative for black-box functions: a
//! construction either is a term (exact everywhere) or carries finite
//! tables built over a stated window, and its contract claims equality only
//! there.

use alloc::collections::BTreeMap;
use alloc::rc::Rc;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::RefCell;
use core::fmt;

use crate::setfam::{IndexSet, Permutation, WildProfile};
use crate::terms::{pair, unpair, EvalFunction, Region, TableAtom, Term, UnaryAtomTable, UnaryOp};
use crate::wildness::{adaptive_wild, Verdict};

/// Search parameters for the window oracle used by the constructions.
#[derive(Clone, Copy, Debug)]
pub struct OracleConfig {
    /// Value a section must reach to count as witnessed.
    pub bound: u64,
    /// Largest window for adaptive doubling.
    pub max_window: u64,
    /// Largest point count for full-cube scans inside the adaptive search.
    pub full_budget: u64,
}

impl Default for OracleConfig {
    fn default() -> OracleConfig {
        OracleConfig {
            bound: 1000,
            max_window: 1 << 14,
            full_budget: 1 << 16,
        }
    }
}

impl OracleConfig {
    pub fn witnessed(&self, f: &EvalFunction, a: IndexSet, fixing: &[Option<u64>]) -> Verdict {
        adaptive_wild(f, a, fixing, self.bound, self.max_window, self.full_budget)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SynthError {
    /// The prescribed family has two disjoint members.
    NotIntersecting { a: IndexSet, b: IndexSet },
    /// A family member was empty or out of range.
    BadFamily,
    /// Order-statistic parameters outside `2 <= k <= n`.
    Domain { n: usize, k: usize },
    /// No fixing making this set wild was found within the search budget.
    MissingWitness(IndexSet),
    /// The supplied permutation does not carry wild sets to wild sets.
    InvalidWitness,
    /// A claimed unary bound fails at a window point.
    BadBound {
        point: Vec<u64>,
        value: u64,
        limit: u64,
    },
    /// The decomposition needs arity at least 3.
    ArityTooSmall(usize),
}

impl fmt::Display for SynthError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SynthError::NotIntersecting { a, b } => {
                write!(f, "family members {a:?} and {b:?} are disjoint")
            }
            SynthError::BadFamily => {
                write!(
                    f,
                    "family members must be nonempty subsets of a supported arity"
                )
            }
            SynthError::Domain { n, k } => write!(f, "need 2 <= k <= n, got n={n}, k={k}"),
            SynthError::MissingWitness(a) => {
                write!(f, "no witness fixing found for wild set {a:?}")
            }
            SynthError::InvalidWitness => write!(f, "permutation is not a wildness witness"),
            SynthError::BadBound {
                point,
                value,
                limit,
            } => {
                write!(
                    f,
                    "bound violated at {point:?}: value {value} not below {limit}"
                )
            }
            SynthError::ArityTooSmall(n) => write!(f, "decomposition needs arity >= 3, got {n}"),
        }
    }
}

impl core::error::Error for SynthError {}

/// Builds a monotone term in the exact fragment making every member of a
/// pairwise intersecting family wild, by the median recursion: a family of
/// size `k >= 3` splits into the first `k-1` sets, the first `k-2` plus the
/// last, and the last two, glued with `med3`.
pub fn synth_t_family(family: &[IndexSet], n: usize) -> Result<Term, SynthError> {
    if n == 0 || n > crate::setfam::MAX_ARITY {
        return Err(SynthError::BadFamily);
    }
    for &a in family {
        if a.is_empty() || !a.in_range(n) {
            return Err(SynthError::BadFamily);
        }
    }
    for (i, &a) in family.iter().enumerate() {
        for &b in &family[i + 1..] {
            if !a.intersects(b) {
                return Err(SynthError::NotIntersecting { a, b });
            }
        }
    }
    Ok(build_t_family(family))
}

fn build_t_family(family: &[IndexSet]) -> Term {
    match family {
        [] => Term::var(1),
        [a] => Term::var(a.smallest().unwrap()),
        [a, b] => Term::var(a.intersection(*b).smallest().unwrap()),
        _ => {
            let k = family.len();
            let left: Vec<IndexSet> = family[..k - 1].to_vec();
            let mut mid: Vec<IndexSet> = family[..k - 2].to_vec();
            mid.push(family[k - 1]);
            let right = [family[k - 2], family[k - 1]];
            Term::median(vec![
                build_t_family(&left),
                build_t_family(&mid),
                build_t_family(&right),
            ])
        }
    }
}

/// Duplicates variables in `m[n,k]` so that it computes the second-order
/// statistic of `⌈n/(k-1)⌉` variables: each variable occurs `k-1` times,
/// the last one only the division remainder when nonzero.
pub fn reduce_mnk_to_m2(n: usize, k: usize) -> Result<Term, SynthError> {
    if k < 2 || k > n {
        return Err(SynthError::Domain { n, k });
    }
    let full = n / (k - 1);
    let rem = n % (k - 1);
    let mut args = Vec::with_capacity(n);
    for j in 1..=full {
        args.extend(core::iter::repeat_n(Term::var(j), k - 1));
    }
    if rem > 0 {
        args.extend(core::iter::repeat_n(Term::var(full + 1), rem));
    }
    Ok(Term::order_stat(k, args))
}

/// `min(g(x_1,…,x_n), x_{n+1})`: bounded by its last coordinate, hence
/// almost unary; substituting a dominating function for the last coordinate
/// reconstructs anything below it.
pub fn min_trick(g: &Term) -> Term {
    let next = g.arity() + 1;
    Term::min_of(vec![g.clone(), Term::var(next)])
}

/// The pieces of the variable-pairing decomposition: `h` recomputes `f`
/// exactly, routing the last two coordinates through the pairing once as a
/// strict lower-region code and once as a swapped lower-or-diagonal code,
/// so that exactly one of `g1`, `g2` decodes at every point.
#[derive(Debug)]
pub struct BinaryDecomposition {
    pub g1: Rc<EvalFunction>,
    pub g2: Rc<EvalFunction>,
    pub h: EvalFunction,
}

/// Decomposes an `n`-ary function (`n >= 3`) into a composition of two
/// `(n-1)`-ary functions and restricted pairings. The identity `h = f`
/// holds pointwise for any total `f`; when a unary bound witnessing
/// almost-unarity in the first coordinate is supplied, it is checked on the
/// window first.
pub fn binary_decompose(
    f: Rc<EvalFunction>,
    gamma: Option<&dyn Fn(u64) -> u64>,
    window: u64,
) -> Result<BinaryDecomposition, SynthError> {
    let n = f.arity();
    if n < 3 {
        return Err(SynthError::ArityTooSmall(n));
    }
    if let Some(gamma) = gamma {
        let mut bad = None;
        crate::terms::for_each_point(n, window, |pt| {
            let value = f.eval(pt);
            let limit = gamma(pt[0]);
            if value > limit {
                bad = Some(SynthError::BadBound {
                    point: pt.to_vec(),
                    value,
                    limit,
                });
                false
            } else {
                true
            }
        });
        if let Some(err) = bad {
            return Err(err);
        }
    }

    // g1(x_1,…,x_{n-2}, z): decode z as a strict lower-region code of
    // (x_{n-1}, x_n), else echo x_1.
    let f1 = Rc::clone(&f);
    let g1 = Rc::new(EvalFunction::from_fn(n - 1, move |args| {
        let z = args[n - 2];
        if z != 0 {
            let (a, b) = unpair(z);
            if b < a {
                let mut point = args[..n - 2].to_vec();
                point.push(a);
                point.push(b);
                return f1.eval(&point);
            }
        }
        args[0]
    }));

    // g2 assumes the pair was coded in swapped order over the
    // lower-or-diagonal region.
    let f2 = Rc::clone(&f);
    let g2 = Rc::new(EvalFunction::from_fn(n - 1, move |args| {
        let z = args[n - 2];
        if z != 0 {
            let (a, b) = unpair(z);
            if b <= a {
                let mut point = args[..n - 2].to_vec();
                point.push(b);
                point.push(a);
                return f2.eval(&point);
            }
        }
        args[0]
    }));

    let (g1h, g2h) = (Rc::clone(&g1), Rc::clone(&g2));
    let h = EvalFunction::from_fn(n, move |x| {
        let mut inner = x[..n - 2].to_vec();
        inner.push(crate::terms::region_pair(Region::Delta, x[n - 2], x[n - 1]));
        let first = g1h.eval(&inner);
        let mut outer = Vec::with_capacity(n - 1);
        outer.push(first);
        outer.extend_from_slice(&x[1..n - 2]);
        outer.push(crate::terms::region_pair(
            Region::DeltaPrime,
            x[n - 1],
            x[n - 2],
        ));
        g2h.eval(&outer)
    });

    Ok(BinaryDecomposition { g1, g2, h })
}

/// A composition of the lower-region pairing and unary table atoms that
/// reproduces a binary almost unary function on the window its tables were
/// built over.
pub struct PdeltaExpression {
    pub term: Term,
    pub atoms: UnaryAtomTable,
    pub composite: EvalFunction,
    pub window: u64,
}

/// Expresses a binary function bounded by a strictly increasing unary of
/// its first coordinate through the lower-region pairing and unary atoms.
/// The inner code `t(x1,x2) = pD(eps(x1), pD(x1,x2))` is injective with
/// ranges split by region, so each piece is a unary relabelling of it.
pub fn pdelta_express(
    f: Rc<EvalFunction>,
    delta: &dyn Fn(u64) -> u64,
    window: u64,
) -> Result<PdeltaExpression, SynthError> {
    assert_eq!(f.arity(), 2, "pdelta_express needs a binary function");
    for x in 0..window {
        let (a, b) = (delta(x), delta(x + 1));
        if b <= a {
            return Err(SynthError::BadBound {
                point: vec![x, x + 1],
                value: b,
                limit: a + 1,
            });
        }
    }
    for x1 in 0..window {
        for x2 in 0..window {
            let value = f.eval(&[x1, x2]);
            if value >= delta(x1) {
                return Err(SynthError::BadBound {
                    point: vec![x1, x2],
                    value,
                    limit: delta(x1),
                });
            }
        }
    }

    // eps: strictly increasing, dominating every lower-region pairing value
    // of its argument.
    let mut eps_table = TableAtom::default();
    let mut eps_vals = Vec::with_capacity(window as usize);
    let mut prev = 0u64;
    for x in 0..window {
        let ceil = (0..x).map(|y| pair(x, y)).max().unwrap_or(0) + 1;
        let v = ceil.max(prev + 1);
        eps_table.insert(x, v);
        eps_vals.push(v);
        prev = v;
    }
    let eps = |x: u64| eps_vals[x as usize];
    let t_code = |x1: u64, x2: u64| {
        let inner = crate::terms::region_pair(Region::Delta, x1, x2);
        crate::terms::region_pair(Region::Delta, eps(x1), inner)
    };

    // u1 ∘ t computes f+1 on the strict lower region and delta+1 elsewhere.
    let mut u1 = TableAtom::default();
    let mut u1_keys: BTreeMap<u64, u64> = BTreeMap::new();
    // u2 decodes the swapped code of the complement region to f+1, and 0 to 0.
    let mut u2 = TableAtom::default();
    u2.insert(0, 0);
    for x1 in 0..window {
        for x2 in 0..window {
            let code = t_code(x1, x2);
            let fv = f.eval(&[x1, x2]);
            let v1 = if x2 < x1 { fv + 1 } else { delta(x1) + 1 };
            if let Some(old) = u1_keys.insert(code, v1) {
                assert_eq!(old, v1, "inner code collision");
            }
            u1.insert(code, v1);
            if x2 >= x1 {
                let z = pair(x2 + 1, x1);
                u2.insert(z, fv + 1);
            }
        }
    }

    // The final table decodes the pair of the two pieces back to f.
    let mut u3 = TableAtom::default();
    let mut u3_keys: BTreeMap<u64, u64> = BTreeMap::new();
    for x1 in 0..window {
        for x2 in 0..window {
            let fv = f.eval(&[x1, x2]);
            let f1v = if x2 < x1 { fv + 1 } else { delta(x1) + 1 };
            let f2v = if x2 < x1 { 0 } else { fv + 1 };
            assert!(f2v < f1v, "piece ordering violated");
            let z = pair(f1v, f2v);
            if let Some(old) = u3_keys.insert(z, fv) {
                assert_eq!(old, fv, "outer code collision with differing values");
            }
            u3.insert(z, fv);
        }
    }

    let mut atoms = UnaryAtomTable::new();
    atoms.insert("eps", eps_table);
    atoms.insert("u1", u1);
    atoms.insert("u2", u2);
    atoms.insert("u3", u3);

    let named = |name: &str, t: Term| Term::unary(UnaryOp::Named(name.into()), t);
    let pd = |a: Term, b: Term| Term::region_pairing(Region::Delta, a, b);
    let t_term = pd(named("eps", Term::var(1)), pd(Term::var(1), Term::var(2)));
    let f1_term = named("u1", t_term);
    let f2_term = named(
        "u2",
        pd(Term::unary(UnaryOp::Succ, Term::var(2)), Term::var(1)),
    );
    let term = named("u3", pd(f1_term, f2_term));

    let composite = EvalFunction::from_term(term.clone(), atoms.clone());
    Ok(PdeltaExpression {
        term,
        atoms,
        composite,
        window,
    })
}

/// Per wild set, a fixing of the complementary coordinates under which the
/// section was witnessed unbounded.
#[derive(Clone, Debug, Default)]
pub struct WitnessMap {
    fixings: BTreeMap<u32, Vec<u64>>,
}

impl WitnessMap {
    /// Searches a witness fixing for every wild set of the profile: the
    /// zero fixing first, then small constant fixings. Semi-decision: a
    /// genuinely wild set whose witnesses lie beyond the search space is
    /// reported missing.
    pub fn discover(
        f: &EvalFunction,
        p: &WildProfile,
        cfg: &OracleConfig,
    ) -> Result<WitnessMap, SynthError> {
        let n = p.n();
        assert_eq!(f.arity(), n, "arity mismatch");
        let mut fixings = BTreeMap::new();
        for a in wild_sets(p) {
            let mut found = None;
            for c in 0..=8u64 {
                let fixing = constant_fixing(n, a, c);
                if cfg.witnessed(f, a, &fixing).is_witnessed() {
                    found = Some(fixing.iter().map(|v| v.unwrap_or(0)).collect());
                    break;
                }
            }
            match found {
                Some(fix) => {
                    fixings.insert(a.bits(), fix);
                }
                None => return Err(SynthError::MissingWitness(a)),
            }
        }
        Ok(WitnessMap { fixings })
    }

    /// The all-zero witness map for every wild set of the profile, verified
    /// against the function when a config is supplied.
    pub fn zeros(
        f: &EvalFunction,
        p: &WildProfile,
        verify: Option<&OracleConfig>,
    ) -> Result<WitnessMap, SynthError> {
        let n = p.n();
        let mut fixings = BTreeMap::new();
        for a in wild_sets(p) {
            if let Some(cfg) = verify {
                if !cfg
                    .witnessed(f, a, &constant_fixing(n, a, 0))
                    .is_witnessed()
                {
                    return Err(SynthError::MissingWitness(a));
                }
            }
            fixings.insert(a.bits(), vec![0; n]);
        }
        Ok(WitnessMap { fixings })
    }

    /// Full-length tuple whose entries outside the set are the witness
    /// fixing; entries on the set are zero placeholders.
    pub fn fixing(&self, a: IndexSet) -> Option<&[u64]> {
        self.fixings.get(&a.bits()).map(Vec::as_slice)
    }

    pub fn insert(&mut self, a: IndexSet, fixing: Vec<u64>) {
        self.fixings.insert(a.bits(), fixing);
    }

    pub fn covers(&self, p: &WildProfile) -> bool {
        wild_sets(p).all(|a| self.fixings.contains_key(&a.bits()))
    }
}

fn wild_sets(p: &WildProfile) -> impl Iterator<Item = IndexSet> + '_ {
    (1..1u32 << p.n())
        .map(IndexSet::from_bits)
        .filter(|&a| p.is_wild(a))
}

fn constant_fixing(n: usize, a: IndexSet, c: u64) -> Vec<Option<u64>> {
    (1..=n)
        .map(|i| if a.contains(i) { None } else { Some(c) })
        .collect()
}

/// Reroots every wild section at the zero fixing: where the positive
/// coordinates of a point form a wild set, the zero coordinates are filled
/// from that set's witness fixing; elsewhere the function is evaluated as
/// is. Every wild set of the original is wild over the all-zero fixing for
/// the result.
pub fn zero_witness(
    g: Rc<EvalFunction>,
    p: &WildProfile,
    w: &WitnessMap,
) -> Result<EvalFunction, SynthError> {
    let n = p.n();
    assert_eq!(g.arity(), n, "arity mismatch");
    if let Some(a) = wild_sets(p).find(|a| w.fixing(*a).is_none()) {
        return Err(SynthError::MissingWitness(a));
    }
    let p = p.clone();
    let w = w.clone();
    Ok(EvalFunction::from_fn(n, move |x| {
        let mut positive = IndexSet::EMPTY;
        for (idx, &v) in x.iter().enumerate() {
            if v != 0 {
                positive = positive.insert(idx + 1);
            }
        }
        if !positive.is_empty() && p.is_wild(positive) {
            let fixing = w
                .fixing(positive)
                .expect("coverage checked at construction");
            let point: Vec<u64> = x
                .iter()
                .zip(fixing)
                .map(|(&xv, &fv)| if xv != 0 { xv } else { fv })
                .collect();
            g.eval(&point)
        } else {
            g.eval(x)
        }
    }))
}

/// Guard against runaway record scans inside [`monotonize`].
pub const RECORD_SCAN_CAP: u64 = 1 << 20;

/// Linear-probing map from packed points to values; the memo sits on the
/// hot path of the downset recursion, where tree maps dominate the runtime.
struct PointMap {
    keys: Vec<u128>,
    vals: Vec<u64>,
    len: usize,
}

const EMPTY_SLOT: u128 = u128::MAX;

impl PointMap {
    fn new() -> PointMap {
        PointMap {
            keys: alloc::vec![EMPTY_SLOT; 1024],
            vals: alloc::vec![0; 1024],
            len: 0,
        }
    }

    fn slot(&self, key: u128) -> usize {
        // Fibonacci hashing: the mix lands in the high bits, so index by
        // them rather than masking the low ones.
        let h = (key as u64 ^ (key >> 64) as u64).wrapping_mul(0x9e3779b97f4a7c15);
        let mask = self.keys.len() - 1;
        let mut i = (h >> (64 - self.keys.len().trailing_zeros())) as usize & mask;
        loop {
            let k = self.keys[i];
            if k == key || k == EMPTY_SLOT {
                return i;
            }
            i = (i + 1) & mask;
        }
    }

    fn get(&self, key: u128) -> Option<u64> {
        let i = self.slot(key);
        if self.keys[i] == key {
            Some(self.vals[i])
        } else {
            None
        }
    }

    fn contains(&self, key: u128) -> bool {
        self.keys[self.slot(key)] == key
    }

    fn insert(&mut self, key: u128, value: u64) {
        if self.len * 4 >= self.keys.len() * 3 {
            self.grow();
        }
        let i = self.slot(key);
        if self.keys[i] != key {
            self.len += 1;
        }
        self.keys[i] = key;
        self.vals[i] = value;
    }

    fn grow(&mut self) {
        let old_keys = core::mem::replace(&mut self.keys, alloc::vec![EMPTY_SLOT; 0]);
        let old_vals = core::mem::take(&mut self.vals);
        let new_cap = old_keys.len() * 2;
        self.keys = alloc::vec![EMPTY_SLOT; new_cap];
        self.vals = alloc::vec![0; new_cap];
        for (k, v) in old_keys.into_iter().zip(old_vals) {
            if k != EMPTY_SLOT {
                let i = self.slot(k);
                self.keys[i] = k;
                self.vals[i] = v;
            }
        }
    }
}

struct MonotonizeState {
    g: Rc<EvalFunction>,
    profile: WildProfile,
    witness: WitnessMap,
    /// Strictly increasing value records of the section sequence per wild
    /// set, extended lazily.
    records: BTreeMap<u32, RecordSeq>,
    /// Keyed by the packed point: 16 bits per coordinate.
    memo: PointMap,
    cap: u64,
}

#[derive(Default)]
struct RecordSeq {
    values: Vec<u64>,
    next_xi: u64,
}

fn pack(point: &[u64]) -> u128 {
    let mut key = 0u128;
    for &c in point {
        debug_assert!(c < 1 << 16);
        key = key << 16 | c as u128;
    }
    key
}

impl MonotonizeState {
    /// Value of the monotonized function. The value at a point depends on
    /// the values strictly below it; missing downset entries are filled by
    /// an explicit depth-first walk over packed keys, so repeated
    /// evaluations only pay for points not seen before.
    fn eval(&mut self, x: &[u64]) -> u64 {
        let n = x.len();
        if let Some(v) = self.memo.get(pack(x)) {
            return v;
        }
        for c in x {
            assert!(
                *c < self.cap,
                "monotonize: point {x:?} exceeds the window cap {}",
                self.cap
            );
        }
        let mut point = vec![0u64; n];
        let mut stack: Vec<u128> = vec![pack(x)];
        while let Some(&top) = stack.last() {
            if self.memo.contains(top) {
                stack.pop();
                continue;
            }
            let mut ready = true;
            for i in 0..n {
                let shift = 16 * (n - 1 - i);
                if top >> shift & 0xffff > 0 {
                    let pred = top - (1 << shift);
                    if !self.memo.contains(pred) {
                        stack.push(pred);
                        ready = false;
                    }
                }
            }
            if ready {
                stack.pop();
                for (i, slot) in point.iter_mut().enumerate() {
                    *slot = (top >> (16 * (n - 1 - i)) & 0xffff) as u64;
                }
                let v = self.value_at(&point, top);
                self.memo.insert(top, v);
            }
        }
        self.memo
            .get(pack(x))
            .expect("downset walk fills the target")
    }

    /// Assumes the memo already covers the immediate predecessors of `z`.
    fn value_at(&mut self, z: &[u64], key: u128) -> u64 {
        // Values are monotone, so the supremum over the strict downset is
        // attained at an immediate predecessor.
        let mut need = self.g.eval(z);
        let n = z.len();
        for (i, &coord) in z.iter().enumerate() {
            if coord > 0 {
                let pred = key - (1 << (16 * (n - 1 - i)));
                need = need.max(self.memo.get(pred).expect("predecessors are memoized"));
            }
        }
        let Some(push) = self.pushing_set(z) else {
            // No wild set at all: the running maximum is already monotone
            // and dominates g.
            return need;
        };
        self.first_record_reaching(push, need)
    }

    /// The shortest wild suffix of the order type (ties in the coordinate
    /// values broken by index). Present whenever the profile has any wild
    /// set, since the full suffix is the whole coordinate set.
    fn pushing_set(&self, z: &[u64]) -> Option<IndexSet> {
        if self.profile.minimal().is_empty() {
            return None;
        }
        let n = z.len();
        let mut order = [0usize; 17];
        let order = &mut order[..n];
        for (slot, i) in order.iter_mut().zip(1..) {
            *slot = i;
        }
        order.sort_unstable_by_key(|&i| (z[i - 1], i));
        let mut suffix = IndexSet::EMPTY;
        for &j in order.iter().rev() {
            suffix = suffix.insert(j);
            if self.profile.is_wild(suffix) {
                return Some(suffix);
            }
        }
        None
    }

    /// First record value of the section sequence over the pushing set that
    /// reaches `need`, extending the record list lazily.
    fn first_record_reaching(&mut self, push: IndexSet, need: u64) -> u64 {
        let fixing: Vec<u64> = self
            .witness
            .fixing(push)
            .expect("witness map covers wild sets")
            .to_vec();
        let rec = self.records.entry(push.bits()).or_default();
        while rec.values.last().is_none_or(|&v| v < need) {
            let xi = rec.next_xi;
            assert!(
                xi < RECORD_SCAN_CAP,
                "monotonize: record scan for {push:?} exceeded {RECORD_SCAN_CAP} without reaching {need}"
            );
            rec.next_xi += 1;
            let point: Vec<u64> = (1..=fixing.len())
                .map(|i| if push.contains(i) { xi } else { fixing[i - 1] })
                .collect();
            let v = self.g.eval(&point);
            if rec.values.last().is_none_or(|&last| v > last) {
                rec.values.push(v);
            }
        }
        let idx = rec.values.partition_point(|&v| v < need);
        rec.values[idx]
    }
}

/// Monotone majorant: a function above `g` that is monotone in the
/// pointwise order, built by the record recursion over finite downsets.
/// Evaluation is only defined below the window cap; the witness map must
/// cover every wild set of the profile.
pub fn monotonize(g: Rc<EvalFunction>, p: &WildProfile, w: &WitnessMap, cap: u64) -> EvalFunction {
    let n = p.n();
    assert_eq!(g.arity(), n, "arity mismatch");
    assert!(
        n <= 8 && cap < 1 << 16,
        "monotonize supports n <= 8 below 2^16"
    );
    assert!(w.covers(p), "witness map must cover every wild set");
    let state = RefCell::new(MonotonizeState {
        g,
        profile: p.clone(),
        witness: w.clone(),
        records: BTreeMap::new(),
        memo: PointMap::new(),
        cap,
    });
    EvalFunction::from_fn(n, move |x| state.borrow_mut().eval(x))
}

/// Zero-rooted monotone majorant: wild sets of the profile become wild over
/// every fixing (witnessed empirically through the zero fixing).
pub fn monotone_insane(
    g: Rc<EvalFunction>,
    p: &WildProfile,
    cfg: &OracleConfig,
    cap: u64,
) -> Result<EvalFunction, SynthError> {
    let w = WitnessMap::discover(&g, p, cfg)?;
    let gz = Rc::new(zero_witness(g, p, &w)?);
    let wz = WitnessMap::zeros(&gz, p, Some(cfg))?;
    Ok(monotonize(gz, p, &wz, cap))
}

/// Builds a function in the clone of `g` (over the almost unary functions)
/// that dominates `f` on the window, given a permutation witnessing that
/// `g` is at least as wild as `f`: the zero-rooted monotone majorant of `g`
/// is composed with the witness permutation and relabelled by the unary
/// map sending each of its window values to the largest `f`-value over the
/// matching preimage.
pub fn dominate(
    f: Rc<EvalFunction>,
    fp: &WildProfile,
    g: Rc<EvalFunction>,
    gp: &WildProfile,
    witness: &Permutation,
    window: u64,
    cfg: &OracleConfig,
) -> Result<EvalFunction, SynthError> {
    let n = fp.n();
    assert_eq!(gp.n(), n, "arity mismatch");
    assert_eq!(f.arity(), n, "arity mismatch");
    assert_eq!(g.arity(), n, "arity mismatch");
    assert_eq!(witness.n(), n, "arity mismatch");
    if fp.minimal().iter().any(|&m| !gp.is_wild(m.map(witness))) {
        return Err(SynthError::InvalidWitness);
    }
    let gpp = Rc::new(monotone_insane(g, gp, cfg, window)?);

    // Align coordinates: feed x_i into slot witness(i) of the majorant.
    let perm = witness.clone();
    let inner = Rc::clone(&gpp);
    let aligned = move |x: &[u64]| {
        let mut y = vec![0u64; n];
        for i in 1..=n {
            y[perm.apply(i) - 1] = x[i - 1];
        }
        inner.eval(&y)
    };

    let mut gamma: BTreeMap<u64, u64> = BTreeMap::new();
    crate::terms::for_each_point(n, window, |pt| {
        let v = aligned(pt);
        let fv = f.eval(pt);
        let slot = gamma.entry(v).or_insert(0);
        *slot = (*slot).max(fv);
        true
    });

    Ok(EvalFunction::from_fn(n, move |x| {
        gamma.get(&aligned(x)).copied().unwrap_or(0)
    }))
}

/// `min(f(x), h(x))`: the reconstruction of `f` from any `h` dominating it,
/// following the downward-closure argument.
pub fn reconstruct(f: &EvalFunction, h: &EvalFunction, x: &[u64]) -> u64 {
    f.eval(x).min(h.eval(x))
}
