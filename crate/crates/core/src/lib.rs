//! Calculus of wildness profiles for functions on the naturals.
//!
//! A function `f: ℕⁿ → ℕ` is *almost unary* when its value is trapped under a
//! unary bound of a single coordinate. Which clones sit above the almost unary
//! functions is governed entirely by the family of *wild* coordinate sets of a
//! function: a set `A ⊆ {1..n}` is wild when some fixing of the coordinates
//! outside `A` leaves an unbounded image. This crate provides
//!
//! * [`setfam`] — wild-set families as antichains of minimal wild sets, with
//!   the "at least as wild" quasiorder and canonical forms under coordinate
//!   permutation,
//! * [`terms`] — a small term language (order statistics, restricted pairings,
//!   unary atoms) with exact evaluation on `u64`,
//! * [`wildness`] — sound symbolic wildness bounds, the exactly-solvable
//!   fragment, and a finite-window semi-decision oracle,
//! * [`classify`] — the descending chain `M(2) ⊋ M(3) ⊋ …` of clones above the
//!   almost unary functions and the classification of any profile into it,
//! * [`synth`] — constructive realizations: median towers for prescribed
//!   wildness, order-statistic reductions, pairing-based decompositions,
//!   monotonization and domination, all certified on finite windows.
//!
//! The crate is `no_std` (alloc required) and has no dependencies; IO, JSON
//! and the command line front end live in the companion `clonecalc` crate.

#![no_std]

extern crate alloc;

pub mod classify;
pub mod setfam;
pub mod synth;
pub mod terms;
pub mod wildness;

pub use classify::ChainIndex;
pub use setfam::{IndexSet, Permutation, WildProfile};
pub use terms::{EvalFunction, Term};
pub use wildness::{ProfileBounds, Verdict};
