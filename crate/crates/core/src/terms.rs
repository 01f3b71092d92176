//! Term language over order statistics, pairings and unary atoms, with exact
//! evaluation on the naturals.
//!
//! The base set is fixed to `ℕ` (as `u64`), so "small" means finite and
//! "large" means unbounded. The pairing `p` is the Cantor pairing shifted by
//! one, which keeps `0` out of its range; `pD`, `pN`, `pDp` are its
//! restrictions to the strict lower region (second argument below the
//! first), the strict upper region, and the lower-or-diagonal region, each
//! returning `0` outside its region.

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::rc::Rc;
use alloc::string::String;
use alloc::vec::Vec;
use core::cell::RefCell;
use core::fmt;

mod parse;

pub use parse::{parse, parse_with, ParseError};

/// Injective pairing `ℕ² → ℕ∖{0}`: Cantor pairing plus one.
pub fn pair(x: u64, y: u64) -> u64 {
    let (x, y) = (x as u128, y as u128);
    let v = (x + y) * (x + y + 1) / 2 + y + 1;
    u64::try_from(v).expect("pairing value exceeds u64")
}

/// Inverse of [`pair`] on its range. Panics on `0`.
pub fn unpair(z: u64) -> (u64, u64) {
    assert!(z > 0, "0 is not in the range of the pairing");
    let c = (z - 1) as u128;
    let w = (isqrt(8 * c + 1) - 1) / 2;
    let t = w * (w + 1) / 2;
    let y = c - t;
    let x = w - y;
    (x as u64, y as u64)
}

fn isqrt(v: u128) -> u128 {
    if v < 2 {
        return v;
    }
    let mut x = 1u128 << (v.ilog2() / 2 + 1);
    loop {
        let nx = (x + v / x) / 2;
        if nx >= x {
            return x;
        }
        x = nx;
    }
}

/// A region of `ℕ²` restricting the pairing.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Region {
    /// Second strictly below the first: `{(x, y) : y < x}`.
    Delta,
    /// First strictly below the second: `{(x, y) : x < y}`.
    Nabla,
    /// Second at most the first: `{(x, y) : y ≤ x}`.
    DeltaPrime,
}

impl Region {
    pub fn contains(self, x: u64, y: u64) -> bool {
        match self {
            Region::Delta => y < x,
            Region::Nabla => x < y,
            Region::DeltaPrime => y <= x,
        }
    }
}

/// The restricted pairing `p_S`: the pairing inside the region, `0` outside.
pub fn region_pair(region: Region, x: u64, y: u64) -> u64 {
    if region.contains(x, y) {
        pair(x, y)
    } else {
        0
    }
}

/// A unary operation usable as an atom in terms. The named variant resolves
/// to a finite table (default: echo the input) in a [`UnaryAtomTable`].
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub enum UnaryOp {
    Ident,
    Succ,
    Const(u64),
    Plus(u64),
    Named(String),
}

impl UnaryOp {
    /// Strictly increasing maps carry unbounded sections to unbounded
    /// sections, so they preserve wildness.
    pub fn injective_monotone(&self) -> bool {
        matches!(self, UnaryOp::Ident | UnaryOp::Succ | UnaryOp::Plus(_))
    }

    /// Monotone in the pointwise order. Table atoms are arbitrary.
    pub fn monotone(&self) -> bool {
        !matches!(self, UnaryOp::Named(_))
    }

    /// Finite range no matter the argument.
    pub fn bounded_range(&self) -> bool {
        matches!(self, UnaryOp::Const(_))
    }

    pub fn eval(&self, x: u64, atoms: &UnaryAtomTable) -> u64 {
        match self {
            UnaryOp::Ident => x,
            UnaryOp::Succ => x + 1,
            UnaryOp::Const(c) => *c,
            UnaryOp::Plus(c) => x + c,
            UnaryOp::Named(name) => atoms
                .get(name)
                .unwrap_or_else(|| panic!("unary atom `{name}` not in table"))
                .eval(x),
        }
    }
}

/// A finite unary table with echo default: inputs without an entry map to
/// themselves. Total on all of `ℕ`.
#[derive(Clone, Default, Debug, PartialEq, Eq)]
pub struct TableAtom {
    entries: BTreeMap<u64, u64>,
}

impl TableAtom {
    pub fn new(entries: BTreeMap<u64, u64>) -> TableAtom {
        TableAtom { entries }
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.entries.get(&x).copied().unwrap_or(x)
    }

    pub fn insert(&mut self, x: u64, v: u64) {
        self.entries.insert(x, v);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Named unary atoms available to terms.
#[derive(Clone, Default, Debug)]
pub struct UnaryAtomTable {
    atoms: BTreeMap<String, TableAtom>,
}

impl UnaryAtomTable {
    pub fn new() -> UnaryAtomTable {
        UnaryAtomTable::default()
    }

    pub fn insert(&mut self, name: &str, atom: TableAtom) {
        self.atoms.insert(name.to_owned(), atom);
    }

    pub fn get(&self, name: &str) -> Option<&TableAtom> {
        self.atoms.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.atoms.contains_key(name)
    }
}

/// A term over variables `x1, x2, …`, order statistics, pairings and unary
/// atoms. Evaluation is exact on `u64`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub enum Term {
    /// `x_i`, 1-based.
    Var(usize),
    /// `m[n,k]` applied to `n` subterms: the k-th smallest of their values.
    OrderStat { k: usize, args: Vec<Term> },
    /// The unrestricted pairing `p`.
    Pairing(Box<Term>, Box<Term>),
    /// A restricted pairing `p_S` for one of the three regions.
    RegionPairing(Region, Box<Term>, Box<Term>),
    /// A unary atom applied to a subterm.
    Unary(UnaryOp, Box<Term>),
}

impl Term {
    pub fn var(i: usize) -> Term {
        assert!(i >= 1, "variables are 1-based");
        Term::Var(i)
    }

    pub fn order_stat(k: usize, args: Vec<Term>) -> Term {
        assert!(!args.is_empty(), "order statistic needs arguments");
        assert!(
            k >= 1 && k <= args.len(),
            "order statistic rank out of range"
        );
        Term::OrderStat { k, args }
    }

    /// `med_n` for odd `n`.
    pub fn median(args: Vec<Term>) -> Term {
        assert!(
            args.len() % 2 == 1,
            "median needs an odd number of arguments"
        );
        let k = args.len().div_ceil(2);
        Term::order_stat(k, args)
    }

    pub fn min_of(args: Vec<Term>) -> Term {
        Term::order_stat(1, args)
    }

    pub fn max_of(args: Vec<Term>) -> Term {
        let k = args.len();
        Term::order_stat(k, args)
    }

    pub fn pairing(a: Term, b: Term) -> Term {
        Term::Pairing(Box::new(a), Box::new(b))
    }

    pub fn region_pairing(region: Region, a: Term, b: Term) -> Term {
        Term::RegionPairing(region, Box::new(a), Box::new(b))
    }

    pub fn unary(op: UnaryOp, arg: Term) -> Term {
        Term::Unary(op, Box::new(arg))
    }

    /// Number of variable slots: the largest variable index used.
    pub fn arity(&self) -> usize {
        match self {
            Term::Var(i) => *i,
            Term::OrderStat { args, .. } => args.iter().map(Term::arity).max().unwrap(),
            Term::Pairing(a, b) | Term::RegionPairing(_, a, b) => a.arity().max(b.arity()),
            Term::Unary(_, t) => t.arity(),
        }
    }

    /// Evaluates at a point. `args` may be longer than the arity (extra
    /// coordinates are dummies); shorter panics.
    pub fn eval(&self, args: &[u64], atoms: &UnaryAtomTable) -> u64 {
        match self {
            Term::Var(i) => {
                assert!(
                    *i <= args.len(),
                    "arity mismatch: x{i} with {} arguments",
                    args.len()
                );
                args[*i - 1]
            }
            Term::OrderStat { k, args: sub } => {
                let mut values: Vec<u64> = sub.iter().map(|t| t.eval(args, atoms)).collect();
                values.sort_unstable();
                values[*k - 1]
            }
            Term::Pairing(a, b) => pair(a.eval(args, atoms), b.eval(args, atoms)),
            Term::RegionPairing(r, a, b) => {
                region_pair(*r, a.eval(args, atoms), b.eval(args, atoms))
            }
            Term::Unary(op, t) => op.eval(t.eval(args, atoms), atoms),
        }
    }

    /// Evaluates a term that uses no named atoms.
    pub fn eval_closed(&self, args: &[u64]) -> u64 {
        self.eval(args, &UnaryAtomTable::new())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "x{i}"),
            Term::OrderStat { k, args } => {
                let n = args.len();
                if n % 2 == 1 && *k == n.div_ceil(2) {
                    write!(f, "med{n}")?;
                } else if *k == 1 {
                    write!(f, "min{n}")?;
                } else if *k == n {
                    write!(f, "max{n}")?;
                } else {
                    write!(f, "m[{n},{k}]")?;
                }
                write_args(f, args)
            }
            Term::Pairing(a, b) => write!(f, "p({a},{b})"),
            Term::RegionPairing(r, a, b) => {
                let name = match r {
                    Region::Delta => "pD",
                    Region::Nabla => "pN",
                    Region::DeltaPrime => "pDp",
                };
                write!(f, "{name}({a},{b})")
            }
            Term::Unary(op, t) => match op {
                UnaryOp::Ident => write!(f, "id({t})"),
                UnaryOp::Succ => write!(f, "succ({t})"),
                UnaryOp::Const(c) => write!(f, "const[{c}]({t})"),
                UnaryOp::Plus(c) => write!(f, "plus[{c}]({t})"),
                UnaryOp::Named(name) => write!(f, "u[{name}]({t})"),
            },
        }
    }
}

fn write_args(f: &mut fmt::Formatter<'_>, args: &[Term]) -> fmt::Result {
    write!(f, "(")?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{a}")?;
    }
    write!(f, ")")
}

type EvalRule = Rc<dyn Fn(&[u64]) -> u64>;

enum EvalKind {
    Term {
        term: Term,
        atoms: Rc<UnaryAtomTable>,
    },
    Table {
        entries: BTreeMap<Vec<u64>, u64>,
    },
    Native {
        f: EvalRule,
    },
    Memoized {
        f: EvalRule,
        cache: RefCell<BTreeMap<Vec<u64>, u64>>,
    },
}

/// An evaluable map `ℕⁿ → ℕ`: term-backed, finite-table-backed with an echo
/// default, or construction-backed (optionally memoized). Evaluation is
/// deterministic; memo state is interior and single-threaded per instance,
/// so share across threads by building one instance per thread.
pub struct EvalFunction {
    arity: usize,
    kind: EvalKind,
}

impl EvalFunction {
    pub fn from_term(term: Term, atoms: UnaryAtomTable) -> EvalFunction {
        let arity = term.arity();
        EvalFunction {
            arity,
            kind: EvalKind::Term {
                term,
                atoms: Rc::new(atoms),
            },
        }
    }

    /// Term-backed with dummy coordinates up to `arity`.
    pub fn from_term_padded(term: Term, atoms: UnaryAtomTable, arity: usize) -> EvalFunction {
        assert!(arity >= term.arity(), "padded arity below term arity");
        EvalFunction {
            arity,
            kind: EvalKind::Term {
                term,
                atoms: Rc::new(atoms),
            },
        }
    }

    /// Finite table with echo default: points without an entry map to their
    /// first coordinate.
    pub fn from_table(arity: usize, entries: BTreeMap<Vec<u64>, u64>) -> EvalFunction {
        assert!(arity >= 1);
        EvalFunction {
            arity,
            kind: EvalKind::Table { entries },
        }
    }

    pub fn from_fn(arity: usize, f: impl Fn(&[u64]) -> u64 + 'static) -> EvalFunction {
        assert!(arity >= 1);
        EvalFunction {
            arity,
            kind: EvalKind::Native { f: Rc::new(f) },
        }
    }

    /// Construction-backed with a memo cache in front.
    pub fn memoized(arity: usize, f: impl Fn(&[u64]) -> u64 + 'static) -> EvalFunction {
        assert!(arity >= 1);
        EvalFunction {
            arity,
            kind: EvalKind::Memoized {
                f: Rc::new(f),
                cache: RefCell::new(BTreeMap::new()),
            },
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn eval(&self, args: &[u64]) -> u64 {
        assert_eq!(args.len(), self.arity, "arity mismatch");
        match &self.kind {
            EvalKind::Term { term, atoms } => term.eval(args, atoms),
            EvalKind::Table { entries } => entries.get(args).copied().unwrap_or(args[0]),
            EvalKind::Native { f } => f(args),
            EvalKind::Memoized { f, cache } => {
                if let Some(v) = cache.borrow().get(args) {
                    return *v;
                }
                let v = f(args);
                cache.borrow_mut().insert(args.to_vec(), v);
                v
            }
        }
    }

    /// The backing term, when term-backed.
    pub fn term(&self) -> Option<&Term> {
        match &self.kind {
            EvalKind::Term { term, .. } => Some(term),
            _ => None,
        }
    }
}

impl fmt::Debug for EvalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            EvalKind::Term { term, .. } => write!(f, "EvalFunction::Term({term})"),
            EvalKind::Table { entries } => {
                write!(f, "EvalFunction::Table({} entries)", entries.len())
            }
            EvalKind::Native { .. } => write!(f, "EvalFunction::Native(arity {})", self.arity),
            EvalKind::Memoized { cache, .. } => {
                write!(f, "EvalFunction::Memoized({} cached)", cache.borrow().len())
            }
        }
    }
}

/// Iterates over all points of `[0, window)^n` in lexicographic order,
/// calling `visit` until it returns `false`.
pub fn for_each_point(n: usize, window: u64, mut visit: impl FnMut(&[u64]) -> bool) {
    assert!(window >= 1);
    let mut point = alloc::vec![0u64; n];
    loop {
        if !visit(&point) {
            return;
        }
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            point[i] += 1;
            if point[i] < window {
                break;
            }
            point[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;
    use alloc::vec;

    #[test]
    fn pair_base_values() {
        assert_eq!(pair(0, 0), 1);
        assert_eq!(pair(1, 0), 2);
        assert_eq!(pair(0, 1), 3);
    }

    #[test]
    fn pair_injective_and_zero_free_on_window() {
        let mut seen = BTreeSet::new();
        for x in 0..100 {
            for y in 0..100 {
                let v = pair(x, y);
                assert_ne!(v, 0);
                assert!(seen.insert(v), "collision at ({x},{y})");
            }
        }
        assert_eq!(seen.len(), 10_000);
    }

    #[test]
    fn unpair_inverts_pair() {
        for x in 0..60 {
            for y in 0..60 {
                assert_eq!(unpair(pair(x, y)), (x, y));
            }
        }
    }

    #[test]
    fn unpair_inverts_pair_at_large_coordinates() {
        // Exercises the integer square root around perfect-square
        // boundaries of the triangular index.
        for &x in &[0u64, 1, 999_999_999, 1 << 31] {
            for &y in &[0u64, 1, 123_456_789, (1 << 31) - 1] {
                assert_eq!(unpair(pair(x, y)), (x, y));
            }
        }
    }

    #[test]
    fn median_evaluation() {
        let med3 = Term::median(vec![Term::var(1), Term::var(2), Term::var(3)]);
        assert_eq!(med3.eval_closed(&[1, 5, 2]), 2);
    }

    #[test]
    fn order_stat_third_smallest() {
        // sorted values 1,1,3,4,5 -> third entry
        let t = Term::order_stat(3, (1..=5).map(Term::var).collect());
        assert_eq!(t.eval_closed(&[3, 1, 4, 1, 5]), 3);
    }

    #[test]
    fn order_stat_with_duplicates() {
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
        assert_eq!(t.eval_closed(&[3, 1, 4]), 3);
        assert_eq!(t.eval_closed(&[3, 1, 5]), 3);
    }

    #[test]
    fn region_pairing_evaluation() {
        let pd = Term::region_pairing(Region::Delta, Term::var(1), Term::var(2));
        assert_eq!(pd.eval_closed(&[2, 5]), 0);
        assert_eq!(pd.eval_closed(&[5, 2]), pair(5, 2));
        assert_ne!(pd.eval_closed(&[5, 2]), 0);
    }

    #[test]
    fn order_stat_extremes_are_min_and_max() {
        let args = || vec![Term::var(1), Term::var(2), Term::var(3), Term::var(4)];
        let min4 = Term::min_of(args());
        let max4 = Term::max_of(args());
        for pt in [[3, 1, 4, 1], [0, 0, 7, 2], [9, 9, 9, 9]] {
            assert_eq!(min4.eval_closed(&pt), *pt.iter().min().unwrap());
            assert_eq!(max4.eval_closed(&pt), *pt.iter().max().unwrap());
        }
    }

    #[test]
    fn duplication_identity_their_pointwise() {
        // m[5,3](x1,x1,x2,x2,x3) = m[3,2](x1,x2,x3) on [0,6)^3
        let lhs = Term::order_stat(
            3,
            vec![
                Term::var(1),
                Term::var(1),
                Term::var(2),
                Term::var(2),
                Term::var(3),
            ],
        );
        let rhs = Term::order_stat(2, vec![Term::var(1), Term::var(2), Term::var(3)]);
        for_each_point(3, 6, |pt| {
            assert_eq!(lhs.eval_closed(pt), rhs.eval_closed(pt), "at {pt:?}");
            true
        });
    }

    #[test]
    fn median_interdefinability_spot_check() {
        // med5(x1,x1,x2,x3,x3) = med3(x1,x2,x3) on [0,6)^3
        let med5 = Term::median(vec![
            Term::var(1),
            Term::var(1),
            Term::var(2),
            Term::var(3),
            Term::var(3),
        ]);
        let med3 = Term::median(vec![Term::var(1), Term::var(2), Term::var(3)]);
        for_each_point(3, 6, |pt| {
            assert_eq!(med5.eval_closed(pt), med3.eval_closed(pt), "at {pt:?}");
            true
        });
    }

    #[test]
    fn delta_pairing_is_almost_unary() {
        // sup over x2 of pD(c, x2) is attained among x2 < c
        let pd = Term::region_pairing(Region::Delta, Term::var(1), Term::var(2));
        for c in 0..20u64 {
            let bound = (0..c).map(|y| pair(c, y)).max().unwrap_or(0) + 1;
            for x2 in 0..200 {
                assert!(pd.eval_closed(&[c, x2]) < bound);
            }
        }
    }

    #[test]
    fn arity_is_max_variable_index() {
        let med3 = Term::median(vec![Term::var(1), Term::var(2), Term::var(3)]);
        assert_eq!(med3.arity(), 3);
        let dup = Term::order_stat(
            3,
            vec![
                Term::var(1),
                Term::var(1),
                Term::var(2),
                Term::var(2),
                Term::var(3),
            ],
        );
        assert_eq!(dup.arity(), 3);
        let pd = Term::region_pairing(Region::Delta, Term::var(2), Term::var(4));
        assert_eq!(pd.arity(), 4);
    }

    #[test]
    fn table_atom_echo_default() {
        let mut atom = TableAtom::default();
        atom.insert(3, 77);
        assert_eq!(atom.eval(3), 77);
        assert_eq!(atom.eval(4), 4);
    }

    #[test]
    fn eval_function_padding_and_table() {
        let med3 = Term::median(vec![Term::var(1), Term::var(2), Term::var(3)]);
        let padded = EvalFunction::from_term_padded(med3, UnaryAtomTable::new(), 4);
        assert_eq!(padded.arity(), 4);
        assert_eq!(padded.eval(&[1, 5, 2, 99]), 2);

        let mut entries = BTreeMap::new();
        entries.insert(vec![1, 2], 9u64);
        let table = EvalFunction::from_table(2, entries);
        assert_eq!(table.eval(&[1, 2]), 9);
        assert_eq!(table.eval(&[4, 0]), 4);
    }

    #[test]
    fn memoized_eval_is_stable() {
        let f = EvalFunction::memoized(2, |args| args[0] * 10 + args[1]);
        assert_eq!(f.eval(&[3, 4]), 34);
        assert_eq!(f.eval(&[3, 4]), 34);
    }
}
