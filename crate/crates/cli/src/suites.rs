//! Seeded check suites: the per-module invariants plus the acceptance
//! criteria, runnable from the CLI (`check --suite …`) and from the
//! acceptance test target.
//!
//! All randomness flows from the configured seed through per-case forks,
//! so reports are byte-identical across runs and thread counts.

use std::collections::BTreeSet;
use std::rc::Rc;
use std::time::Duration;

use clonecalc_core::classify::{
    enumerate_profiles, induced_profile, mnk_index, ChainIndex, Classifier,
};
use clonecalc_core::setfam::{equiv_wild, leq_wild, IndexSet, Permutation, WildProfile};
use clonecalc_core::synth::{
    binary_decompose, dominate, min_trick, monotone_insane, pdelta_express, reconstruct,
    reduce_mnk_to_m2, synth_t_family, OracleConfig,
};
use clonecalc_core::terms::{
    for_each_point, pair, EvalFunction, Region, Term, UnaryAtomTable, UnaryOp,
};
use clonecalc_core::wildness::{
    adaptive_wild, exact_profile, exact_profile_at, in_pol_t1, is_almost_unary_profile,
    symbolic_bounds, Verdict,
};

use crate::report::{CaseSet, SuiteReport};
use crate::rng::Rng;

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub window: u64,
    pub bound: u64,
    pub max_window: u64,
    pub threads: usize,
}

impl Default for SuiteConfig {
    fn default() -> SuiteConfig {
        SuiteConfig {
            seed: 0,
            window: 64,
            bound: 1000,
            max_window: 1 << 14,
            threads: std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
                .min(8),
        }
    }
}

impl SuiteConfig {
    /// The window flag bounds the edge of full-cube scans; diagonal probes
    /// double up to the max window.
    fn oracle(&self) -> OracleConfig {
        OracleConfig {
            bound: self.bound,
            max_window: self.max_window,
            full_budget: self.window.saturating_mul(self.window).max(256),
        }
    }

    fn case_rng(&self, tag: u64) -> Rng {
        Rng::new(self.seed).fork(tag)
    }
}

pub const SUITE_NAMES: &[&str] = &["setfam", "wildness", "classify", "synth", "chain", "all"];

/// Runs a named suite; `None` for an unknown name.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Option<SuiteReport> {
    let report = match name {
        "setfam" => {
            let mut cases = setfam_invariants(cfg);
            merge_case_sets(&mut cases, criterion_cases(8, cfg));
            cases.run("setfam", cfg.threads)
        }
        "wildness" => wildness_invariants(cfg).run("wildness", cfg.threads),
        "classify" => {
            let mut cases = classify_invariants(cfg);
            for k in 1..=4 {
                merge_case_sets(&mut cases, criterion_cases(k, cfg));
            }
            cases.run("classify", cfg.threads)
        }
        "synth" => {
            let mut cases = synth_invariants(cfg);
            for k in 5..=7 {
                merge_case_sets(&mut cases, criterion_cases(k, cfg));
            }
            cases.run("synth", cfg.threads)
        }
        "chain" => {
            let mut cases = chain_invariants(cfg);
            merge_case_sets(&mut cases, criterion_cases(9, cfg));
            cases.run("chain", cfg.threads)
        }
        "all" => {
            let parts = ["setfam", "wildness", "classify", "synth", "chain"]
                .iter()
                .map(|s| run_suite(s, cfg).unwrap())
                .collect();
            SuiteReport::merged("all", parts)
        }
        _ => return None,
    };
    Some(report)
}

fn merge_case_sets(into: &mut CaseSet, from: CaseSet) {
    into.extend(from);
}

/// Short description of an acceptance criterion, used by the test target.
pub fn criterion_name(k: usize) -> &'static str {
    match k {
        1 => "closed-form classification of order statistics",
        2 => "intersection criterion over exhaustive small profiles",
        3 => "census of achieved chain positions by arity",
        4 => "equal clones without a wildness witness",
        5 => "synthesis soundness on intersecting families",
        6 => "construction certificates (reduce, decompose, express, dominate)",
        7 => "monotone majorant contract",
        8 => "quasiorder laws under randomized profiles",
        9 => "chain embedding and the pigeonhole boundary",
        _ => panic!("no criterion {k}"),
    }
}

/// Wall-clock budget for a criterion, when it has one.
fn criterion_budget(k: usize) -> Option<Duration> {
    match k {
        1 => Some(Duration::from_secs(10)),
        2 => Some(Duration::from_secs(60)),
        5 | 6 => Some(Duration::from_secs(300)),
        7 => Some(Duration::from_secs(120)),
        _ => None,
    }
}

/// Runs one acceptance criterion with its wall-clock budget enforced.
pub fn run_criterion(k: usize, cfg: &SuiteConfig) -> SuiteReport {
    let name = format!("acceptance-{k}");
    let mut report = criterion_cases(k, cfg).run(&name, cfg.threads);
    if let Some(limit) = criterion_budget(k) {
        if report.wall > limit {
            report.failures.push(crate::report::Failure {
                case: format!("{name}-budget"),
                detail: format!("ran {:?}, budget {:?}", report.wall, limit),
            });
        }
    }
    report
}

// ---------------------------------------------------------------- helpers

fn mnk(n: usize, k: usize) -> Term {
    Term::order_stat(k, (1..=n).map(Term::var).collect())
}

fn med3() -> Term {
    Term::median(vec![Term::var(1), Term::var(2), Term::var(3)])
}

fn term_fn(t: &Term) -> Rc<EvalFunction> {
    Rc::new(EvalFunction::from_term(t.clone(), UnaryAtomTable::new()))
}

fn term_fn_padded(t: &Term, n: usize) -> Rc<EvalFunction> {
    Rc::new(EvalFunction::from_term_padded(
        t.clone(),
        UnaryAtomTable::new(),
        n,
    ))
}

fn constant_fixing(n: usize, a: IndexSet, c: u64) -> Vec<Option<u64>> {
    (1..=n)
        .map(|i| if a.contains(i) { None } else { Some(c) })
        .collect()
}

fn all_profiles(n: usize) -> Vec<WildProfile> {
    enumerate_profiles(n, false).unwrap().collect()
}

fn random_profile(rng: &mut Rng, n: usize) -> WildProfile {
    let count = rng.below(5);
    let sets: Vec<IndexSet> = (0..count)
        .map(|_| IndexSet::from_bits(rng.range(1, (1 << n) - 1) as u32))
        .collect();
    WildProfile::normalize(n, &sets).unwrap()
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ----------------------------------------------------- module invariants

fn setfam_invariants(cfg: &SuiteConfig) -> CaseSet {
    let mut cases = CaseSet::new();

    cases.add("setfam-upward-closure-exhaustive-n4", || {
        for n in 1..=4usize {
            for p in enumerate_profiles(n, false).unwrap() {
                for a in 0..1u32 << n {
                    for b in 0..1u32 << n {
                        let (a, b) = (IndexSet::from_bits(a), IndexSet::from_bits(b));
                        if a.is_subset(b) && p.is_wild(a) && !p.is_wild(b) {
                            return Err(format!("{p:?}: {a:?} wild but superset {b:?} not"));
                        }
                    }
                }
            }
        }
        Ok(())
    });

    let mut rng = cfg.case_rng(101);
    cases.add("setfam-permute-action-seeded", move || {
        for i in 0..500 {
            let n = rng.range(2, 6) as usize;
            let p = random_profile(&mut rng, n);
            let pi = random_permutation(&mut rng, n);
            let sigma = random_permutation(&mut rng, n);
            let two = p.permute(&pi).permute(&sigma);
            let one = p.permute(&sigma.compose(&pi));
            check(two == one, || {
                format!("instance {i}: action law broke on {p:?}")
            })?;
        }
        Ok(())
    });

    let mut rng = cfg.case_rng(102);
    cases.add("setfam-canonical-orbit-seeded", move || {
        for i in 0..500 {
            let n = rng.range(2, 5) as usize;
            let p = random_profile(&mut rng, n);
            let pi = random_permutation(&mut rng, n);
            let canon = p.canonical_form();
            check(canon.canonical_form() == canon, || {
                format!("instance {i}: not idempotent")
            })?;
            check(p.permute(&pi).canonical_form() == canon, || {
                format!("instance {i}: canonical form not orbit constant on {p:?}")
            })?;
        }
        Ok(())
    });

    cases
}

fn random_permutation(rng: &mut Rng, n: usize) -> Permutation {
    let mut images: Vec<usize> = (1..=n).collect();
    for i in (1..n).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        images.swap(i, j);
    }
    Permutation::new(images).unwrap()
}

fn wildness_invariants(cfg: &SuiteConfig) -> CaseSet {
    let mut cases = CaseSet::new();

    cases.add("wildness-weighted-rule-vs-oracle", || {
        // Multiplicities 1..=3 over up to 4 distinct variables, all ranks.
        // The zero fixing decides wildness exactly on this fragment.
        for vars in 1..=4usize {
            let mut mults = vec![1usize; vars];
            loop {
                let total: usize = mults.iter().sum();
                let args: Vec<Term> = (1..=vars)
                    .flat_map(|j| std::iter::repeat_n(Term::var(j), mults[j - 1]))
                    .collect();
                for k in 1..=total {
                    let t = Term::order_stat(k, args.clone());
                    let f = term_fn(&t);
                    let profile = exact_profile(&t).map_err(|e| e.to_string())?;
                    for bits in 1..1u32 << vars {
                        let a = IndexSet::from_bits(bits);
                        let outside: usize = (1..=vars)
                            .filter(|j| !a.contains(*j))
                            .map(|j| mults[j - 1])
                            .sum();
                        let formula = outside < k;
                        check(profile.is_wild(a) == formula, || {
                            format!("profile vs formula: mults {mults:?} k={k} set {a:?}")
                        })?;
                        let fixing = constant_fixing(vars, a, 0);
                        let oracle = adaptive_wild(&f, a, &fixing, 100, 1 << 10, 1).is_witnessed();
                        check(oracle == formula, || {
                            format!("oracle vs formula: mults {mults:?} k={k} set {a:?}")
                        })?;
                    }
                }
                let Some(pos) = mults.iter().rposition(|&c| c < 3) else {
                    break;
                };
                mults[pos] += 1;
                for c in &mut mults[pos + 1..] {
                    *c = 1;
                }
            }
        }
        Ok(())
    });

    cases.add("wildness-exact-formula-five-vars", || {
        for vars in 1..=5usize {
            let mut mults = vec![1usize; vars];
            loop {
                let total: usize = mults.iter().sum();
                let args: Vec<Term> = (1..=vars)
                    .flat_map(|j| std::iter::repeat_n(Term::var(j), mults[j - 1]))
                    .collect();
                for k in 1..=total {
                    let t = Term::order_stat(k, args.clone());
                    let profile = exact_profile(&t).map_err(|e| e.to_string())?;
                    for bits in 1..1u32 << vars {
                        let a = IndexSet::from_bits(bits);
                        let outside: usize = (1..=vars)
                            .filter(|j| !a.contains(*j))
                            .map(|j| mults[j - 1])
                            .sum();
                        check(profile.is_wild(a) == (outside < k), || {
                            format!("mults {mults:?} k={k} set {a:?}")
                        })?;
                    }
                }
                let Some(pos) = mults.iter().rposition(|&c| c < 3) else {
                    break;
                };
                mults[pos] += 1;
                for c in &mut mults[pos + 1..] {
                    *c = 1;
                }
            }
        }
        Ok(())
    });

    let mut rng = cfg.case_rng(201);
    cases.add("wildness-pol-t1-terms-stay-intersecting", move || {
        // Terms over the median and binary almost unary atoms always have
        // pairwise intersecting proven-wild families.
        for i in 0..300 {
            let n = rng.range(2, 5) as usize;
            let t = random_pol_t1_term(&mut rng, n, 3);
            let bounds = symbolic_bounds(&t);
            check(bounds.proven_wild().is_intersecting(), || {
                format!("instance {i}: {t} has non-intersecting proven-wild family")
            })?;
        }
        Ok(())
    });

    cases.add("wildness-symbolic-sound-on-corpus", || {
        for t in soundness_corpus() {
            let f = term_fn(&t);
            let n = t.arity();
            let bounds = symbolic_bounds(&t);
            for bits in 1..1u32 << n {
                let a = IndexSet::from_bits(bits);
                if bounds.is_proven_wild(a) {
                    let witnessed = (0..=3u64).any(|c| {
                        adaptive_wild(&f, a, &constant_fixing(n, a, c), 1000, 1 << 14, 1 << 16)
                            .is_witnessed()
                    });
                    check(witnessed, || {
                        format!("{t}: proven wild {a:?} never witnessed")
                    })?;
                } else if bounds.is_proven_tame(a) {
                    for c in 0..=3u64 {
                        let v = adaptive_wild(&f, a, &constant_fixing(n, a, c), 1_000_000, 256, 1);
                        check(!v.is_witnessed(), || {
                            format!("{t}: proven tame {a:?} witnessed under fixing {c}")
                        })?;
                    }
                }
            }
        }
        Ok(())
    });

    cases
}

fn soundness_corpus() -> Vec<Term> {
    let v = Term::var;
    let pd = |a, b| Term::region_pairing(Region::Delta, a, b);
    let pn = |a, b| Term::region_pairing(Region::Nabla, a, b);
    vec![
        med3(),
        mnk(4, 2),
        Term::order_stat(3, vec![v(1), v(1), v(2), v(2), v(3)]),
        Term::median(vec![v(1), v(1), v(2), v(3), v(4)]),
        Term::median(vec![med3(), v(4), v(5)]),
        pd(v(1), v(2)),
        pn(v(1), v(2)),
        Term::pairing(v(1), v(2)),
        Term::pairing(pd(v(1), v(2)), v(3)),
        Term::unary(UnaryOp::Succ, med3()),
        Term::unary(UnaryOp::Const(7), v(1)),
        Term::min_of(vec![pd(v(1), v(2)), v(3)]),
        Term::max_of(vec![pd(v(1), v(2)), v(3)]),
    ]
}

fn random_pol_t1_term(rng: &mut Rng, n: usize, depth: usize) -> Term {
    if depth == 0 || rng.below(3) == 0 {
        return Term::var(1 + rng.below(n as u64) as usize);
    }
    match rng.below(5) {
        0 => Term::median(vec![
            random_pol_t1_term(rng, n, depth - 1),
            random_pol_t1_term(rng, n, depth - 1),
            random_pol_t1_term(rng, n, depth - 1),
        ]),
        1 => Term::region_pairing(
            Region::Delta,
            random_pol_t1_term(rng, n, depth - 1),
            random_pol_t1_term(rng, n, depth - 1),
        ),
        2 => Term::min_of(vec![
            random_pol_t1_term(rng, n, depth - 1),
            random_pol_t1_term(rng, n, depth - 1),
        ]),
        3 => Term::unary(UnaryOp::Succ, random_pol_t1_term(rng, n, depth - 1)),
        _ => Term::region_pairing(
            Region::DeltaPrime,
            random_pol_t1_term(rng, n, depth - 1),
            random_pol_t1_term(rng, n, depth - 1),
        ),
    }
}

fn classify_invariants(_cfg: &SuiteConfig) -> CaseSet {
    let mut cases = CaseSet::new();

    cases.add("classify-enumeration-counts", || {
        let expected = [2usize, 5, 19, 167, 7580];
        for (n, want) in (1..=5).zip(expected) {
            let got = enumerate_profiles(n, false).unwrap().count();
            check(got == want, || {
                format!("n={n}: {got} profiles, expected {want}")
            })?;
        }
        Ok(())
    });

    for n in 2..=4usize {
        cases.add(format!("classify-wilder-generates-n{n}"), move || {
            // A wildness witness from p into q forces the clone of q to
            // contain the clone of p.
            let profiles = all_profiles(n);
            let mut classifier = Classifier::new();
            let indices: Vec<ChainIndex> =
                profiles.iter().map(|p| classifier.chain_index(p)).collect();
            for (i, p) in profiles.iter().enumerate() {
                for (j, q) in profiles.iter().enumerate() {
                    if leq_wild(p, q).is_some() {
                        check(indices[j].chain_value() <= indices[i].chain_value(), || {
                            format!("{p:?} <=W {q:?} but {} above {}", indices[j], indices[i])
                        })?;
                    }
                }
            }
            Ok(())
        });
    }

    cases.add("classify-induced-preserves-intersecting-n4", || {
        for n in 2..=4usize {
            for p in enumerate_profiles(n, true).unwrap() {
                for i in 1..=n {
                    for j in 1..=n {
                        if i != j {
                            check(induced_profile(&p, i, j).is_intersecting(), || {
                                format!("{p:?} induced ({i},{j}) lost intersection")
                            })?;
                        }
                    }
                }
            }
        }
        Ok(())
    });

    cases.add("classify-two-element-wild-set-forces-m3", || {
        for n in 2..=4usize {
            let mut classifier = Classifier::new();
            for p in enumerate_profiles(n, false).unwrap() {
                let idx = classifier.chain_index(&p);
                let has_small_wild_set = p.minimal().iter().any(|m| m.len() <= 2);
                let expect =
                    p.is_intersecting() && !is_almost_unary_profile(&p) && has_small_wild_set;
                check((idx == ChainIndex::M(3)) == expect, || {
                    format!("{p:?}: index {idx}, expected M3 iff {expect}")
                })?;
            }
        }
        Ok(())
    });

    cases.add("classify-almost-unary-agreement", || {
        for n in 1..=4usize {
            let mut classifier = Classifier::new();
            for p in enumerate_profiles(n, false).unwrap() {
                if p.is_intersecting() {
                    let idx = classifier.chain_index(&p);
                    check(idx.is_almost_unary() == is_almost_unary_profile(&p), || {
                        format!("{p:?}: classification and profile criterion disagree")
                    })?;
                }
            }
        }
        Ok(())
    });

    cases.add("classify-five-ary-parts-census", || {
        // The arity census one step past the acceptance cap: all 7580
        // five-coordinate profiles land in exactly five parts.
        let mut classifier = Classifier::new();
        let mut achieved: BTreeSet<usize> = BTreeSet::new();
        for p in enumerate_profiles(5, false).unwrap() {
            achieved.insert(classifier.chain_index(&p).chain_value());
        }
        let mut expected: BTreeSet<usize> = (2..=5).collect();
        expected.insert(usize::MAX);
        check(achieved == expected, || format!("achieved {achieved:?}"))?;
        Ok(())
    });

    cases.add("classify-wild-size-bound-holds", || {
        use clonecalc_core::classify::wild_size_upper_bound;
        for n in 2..=4usize {
            let mut classifier = Classifier::new();
            for p in enumerate_profiles(n, true).unwrap() {
                if is_almost_unary_profile(&p) {
                    continue;
                }
                let bound = wild_size_upper_bound(&p).map_err(|e| e.to_string())?;
                let idx = classifier.chain_index(&p);
                check(idx.chain_value() <= bound, || {
                    format!("{p:?}: index {idx} above the wild-size bound {bound}")
                })?;
            }
        }
        Ok(())
    });

    cases
}

fn synth_invariants(_cfg: &SuiteConfig) -> CaseSet {
    let mut cases = CaseSet::new();

    cases.add("synth-t-family-stays-in-pol-t1", || {
        for n in 1..=4usize {
            for p in enumerate_profiles(n, true).unwrap() {
                let t = synth_t_family(p.minimal(), n).map_err(|e| e.to_string())?;
                let tp = exact_profile_at(&t, n).map_err(|e| e.to_string())?;
                check(in_pol_t1(&tp), || format!("tower for {p:?} left the clone"))?;
            }
        }
        Ok(())
    });

    cases.add("synth-min-trick-examples", || {
        let t = min_trick(&med3());
        check(t.to_string() == "min2(med3(x1,x2,x3),x4)", || {
            format!("printed {t}")
        })?;
        check(t.eval_closed(&[1, 5, 2, 0]) == 0, || {
            "floor at 0".to_string()
        })?;
        check(t.eval_closed(&[1, 5, 2, 9]) == 2, || {
            "pass-through at 9".to_string()
        })?;
        Ok(())
    });

    cases
}

fn chain_invariants(cfg: &SuiteConfig) -> CaseSet {
    let mut cases = CaseSet::new();
    let seed = cfg.seed;

    cases.add("chain-print-parse-round-trip", move || {
        let mut rng = Rng::new(seed).fork(950);
        for i in 0..2000 {
            let t = random_grammar_term(&mut rng, 4, 3);
            let printed = t.to_string();
            let back = clonecalc_core::terms::parse(&printed)
                .map_err(|e| format!("instance {i}: `{printed}` failed to reparse: {e}"))?;
            check(back == t, || {
                format!("instance {i}: `{printed}` reparsed differently")
            })?;
        }
        Ok(())
    });

    for n in 2..=5usize {
        cases.add(format!("chain-arity-gap-n{n}"), move || {
            let mut rng = Rng::new(seed).fork(900 + n as u64);
            for i in 0..500 {
                let t = random_low_arity_term(&mut rng, n);
                if !almost_unary_evidence(&t) {
                    return Err(format!("instance {i}: {t} failed the almost-unary check"));
                }
            }
            Ok(())
        });
    }

    cases
}

/// Random term over the whole grammar (built-in atoms only).
fn random_grammar_term(rng: &mut Rng, vars: usize, depth: usize) -> Term {
    if depth == 0 || rng.below(3) == 0 {
        return Term::var(1 + rng.below(vars as u64) as usize);
    }
    match rng.below(8) {
        0 => {
            let n = 1 + rng.below(4) as usize;
            let k = 1 + rng.below(n as u64) as usize;
            Term::order_stat(
                k,
                (0..n)
                    .map(|_| random_grammar_term(rng, vars, depth - 1))
                    .collect(),
            )
        }
        1 => Term::pairing(
            random_grammar_term(rng, vars, depth - 1),
            random_grammar_term(rng, vars, depth - 1),
        ),
        2 => Term::region_pairing(
            Region::Delta,
            random_grammar_term(rng, vars, depth - 1),
            random_grammar_term(rng, vars, depth - 1),
        ),
        3 => Term::region_pairing(
            Region::Nabla,
            random_grammar_term(rng, vars, depth - 1),
            random_grammar_term(rng, vars, depth - 1),
        ),
        4 => Term::region_pairing(
            Region::DeltaPrime,
            random_grammar_term(rng, vars, depth - 1),
            random_grammar_term(rng, vars, depth - 1),
        ),
        5 => Term::unary(UnaryOp::Succ, random_grammar_term(rng, vars, depth - 1)),
        6 => Term::unary(
            UnaryOp::Const(rng.below(50)),
            random_grammar_term(rng, vars, depth - 1),
        ),
        _ => Term::unary(
            UnaryOp::Plus(rng.below(50)),
            random_grammar_term(rng, vars, depth - 1),
        ),
    }
}

/// Random term from the generators of the n-th chain clone, using fewer
/// than n distinct variables.
fn random_low_arity_term(rng: &mut Rng, n: usize) -> Term {
    let vars = n - 1;
    fn go(rng: &mut Rng, vars: usize, n: usize, depth: usize) -> Term {
        if depth == 0 || rng.below(3) == 0 {
            return Term::var(1 + rng.below(vars as u64) as usize);
        }
        match rng.below(6) {
            0 => Term::order_stat(2, (0..n).map(|_| go(rng, vars, n, depth - 1)).collect()),
            1 => Term::region_pairing(
                Region::Delta,
                go(rng, vars, n, depth - 1),
                go(rng, vars, n, depth - 1),
            ),
            2 => Term::region_pairing(
                Region::Nabla,
                go(rng, vars, n, depth - 1),
                go(rng, vars, n, depth - 1),
            ),
            3 => Term::min_of(vec![
                go(rng, vars, n, depth - 1),
                go(rng, vars, n, depth - 1),
            ]),
            4 => Term::unary(UnaryOp::Succ, go(rng, vars, n, depth - 1)),
            _ => Term::region_pairing(
                Region::DeltaPrime,
                go(rng, vars, n, depth - 1),
                go(rng, vars, n, depth - 1),
            ),
        }
    }
    go(rng, vars, n, 2)
}

/// Almost-unary check: a symbolic tame proof for some coordinate
/// complement, with an empirical stability fallback (section maxima stop
/// growing as the scan window doubles). A semi-decision that errs toward
/// acceptance on bounded sections whose maxima appear early.
fn almost_unary_evidence(t: &Term) -> bool {
    let n = t.arity();
    if n <= 1 {
        return true;
    }
    let bounds = symbolic_bounds(t);
    let full = IndexSet::full(n);
    if (1..=n).any(|k| bounds.is_proven_tame(full.remove(k))) {
        return true;
    }
    let f = EvalFunction::from_term(t.clone(), UnaryAtomTable::new());
    'coords: for k in 1..=n {
        let a = full.remove(k);
        for c in 0..=4u64 {
            let fixing = constant_fixing(n, a, c);
            if !section_max_stable(&f, a, &fixing) {
                continue 'coords;
            }
        }
        return true;
    }
    false
}

/// Section maxima along the diagonal stop growing once the window doubles.
/// Bounded sections of this fragment attain their maximum early; unbounded
/// ones are cofinal along the diagonal.
fn section_max_stable(f: &EvalFunction, a: IndexSet, fixing: &[Option<u64>]) -> bool {
    let diag_max = |window: u64| {
        let mut point: Vec<u64> = fixing.iter().map(|v| v.unwrap_or(0)).collect();
        let slots: Vec<usize> = a.iter().collect();
        let mut best = 0u64;
        for t in 0..window {
            for &s in &slots {
                point[s - 1] = t;
            }
            best = best.max(f.eval(&point));
        }
        best
    };
    diag_max(256) == diag_max(512)
}

// ------------------------------------------------- acceptance criteria

/// Cases for one acceptance criterion.
pub fn criterion_cases(k: usize, cfg: &SuiteConfig) -> CaseSet {
    match k {
        1 => criterion_1(),
        2 => criterion_2(),
        3 => criterion_3(),
        4 => criterion_4(),
        5 => criterion_5(cfg),
        6 => criterion_6(cfg),
        7 => criterion_7(),
        8 => criterion_8(cfg),
        9 => criterion_9(cfg),
        _ => panic!("no criterion {k}"),
    }
}

fn criterion_1() -> CaseSet {
    let mut cases = CaseSet::new();
    cases.add("acc1-closed-form-mnk-n-le-8", || {
        let mut classifier = Classifier::new();
        for n in 2..=8usize {
            for k in 2..=n {
                let p = exact_profile(&mnk(n, k)).map_err(|e| e.to_string())?;
                let got = classifier.chain_index(&p);
                let want = ChainIndex::M(mnk_index(n, k).unwrap());
                check(got == want, || {
                    format!("m[{n},{k}]: got {got}, want {want}")
                })?;
            }
        }
        Ok(())
    });
    cases
}

fn criterion_2() -> CaseSet {
    let mut cases = CaseSet::new();
    for n in 1..=4usize {
        cases.add(format!("acc2-pol-t1-criterion-n{n}"), move || {
            let mut classifier = Classifier::new();
            for p in enumerate_profiles(n, false).unwrap() {
                let idx = classifier.chain_index(&p);
                if p.is_intersecting() {
                    check(idx.chain_value() >= 3, || {
                        format!("{p:?}: intersecting but classified {idx}")
                    })?;
                } else {
                    check(idx == ChainIndex::M(2), || {
                        format!("{p:?}: non-intersecting but classified {idx}")
                    })?;
                }
                check(in_pol_t1(&p) == (idx.chain_value() >= 3), || {
                    format!("{p:?}: membership test disagrees with {idx}")
                })?;
            }
            Ok(())
        });
    }
    cases
}

fn criterion_3() -> CaseSet {
    let mut cases = CaseSet::new();
    for k in 1..=4usize {
        cases.add(format!("acc3-kary-parts-census-k{k}"), move || {
            let mut classifier = Classifier::new();
            let mut achieved: BTreeSet<usize> = BTreeSet::new();
            for p in enumerate_profiles(k, false).unwrap() {
                achieved.insert(classifier.chain_index(&p).chain_value());
            }
            let mut expected: BTreeSet<usize> = (2..=k).collect();
            expected.insert(usize::MAX);
            check(achieved == expected, || {
                format!("k={k}: achieved {achieved:?}, expected {expected:?}")
            })?;
            Ok(())
        });
    }
    cases
}

fn criterion_4() -> CaseSet {
    let mut cases = CaseSet::new();
    cases.add("acc4-equal-clones-no-witness", || {
        let g = exact_profile_at(&med3(), 4).map_err(|e| e.to_string())?;
        let f = exact_profile(&Term::median(vec![
            Term::var(1),
            Term::var(1),
            Term::var(2),
            Term::var(3),
            Term::var(4),
        ]))
        .map_err(|e| e.to_string())?;
        let mut classifier = Classifier::new();
        check(classifier.chain_index(&g) == ChainIndex::M(3), || {
            "padded median not M3".into()
        })?;
        check(classifier.chain_index(&f) == ChainIndex::M(3), || {
            "weighted median not M3".into()
        })?;
        check(leq_wild(&f, &g).is_none(), || {
            "unexpected witness f -> g".into()
        })?;
        check(leq_wild(&g, &f).is_none(), || {
            "unexpected witness g -> f".into()
        })?;
        check(equiv_wild(&f, &g).is_none(), || {
            "unexpected equivalence".into()
        })?;
        Ok(())
    });
    cases
}

fn criterion_5(cfg: &SuiteConfig) -> CaseSet {
    let mut cases = CaseSet::new();
    let oracle = OracleConfig {
        bound: 1000,
        max_window: 1 << 14,
        full_budget: 1 << 12,
    };
    for n in 1..=4usize {
        let families: Vec<WildProfile> = enumerate_profiles(n, true).unwrap().collect();
        let chunk = 12usize;
        for (c, group) in families.chunks(chunk).enumerate() {
            let group: Vec<WildProfile> = group.to_vec();
            let seed = cfg.seed;
            cases.add(format!("acc5-synthesis-n{n}-part{c:02}"), move || {
                let mut rng = Rng::new(seed).fork(500 + (n * 100 + c) as u64);
                for p in &group {
                    let t = synth_t_family(p.minimal(), n).map_err(|e| e.to_string())?;
                    let tp = exact_profile_at(&t, n).map_err(|e| e.to_string())?;
                    for &m in p.minimal() {
                        check(tp.is_wild(m), || format!("tower for {p:?} misses {m:?}"))?;
                    }
                    // Insanity spot-checks: the zero fixing plus random
                    // small fixings must all be witnessed.
                    let f = term_fn_padded(&t, n);
                    for &m in p.minimal() {
                        for probe in 0..6 {
                            let fixing: Vec<Option<u64>> = (1..=n)
                                .map(|i| {
                                    if m.contains(i) {
                                        None
                                    } else if probe == 0 {
                                        Some(0)
                                    } else {
                                        Some(rng.below(9))
                                    }
                                })
                                .collect();
                            let v = oracle.witnessed(&f, m, &fixing);
                            check(v.is_witnessed(), || {
                                format!("tower for {p:?}: {m:?} not witnessed under {fixing:?}")
                            })?;
                        }
                    }
                }
                Ok(())
            });
        }
    }
    cases
}

fn criterion_6(cfg: &SuiteConfig) -> CaseSet {
    let mut cases = CaseSet::new();

    cases.add("acc6-reduce-identities", || {
        for n in 2..=6usize {
            for k in 2..=n {
                let t = reduce_mnk_to_m2(n, k).map_err(|e| e.to_string())?;
                let m = n.div_ceil(k - 1);
                let target = if m == 1 { Term::var(1) } else { mnk(m, 2) };
                let mut bad = None;
                for_each_point(m, 5, |pt| {
                    if t.eval_closed(pt) != target.eval_closed(pt) {
                        bad = Some(format!("m[{n},{k}] at {pt:?}"));
                        false
                    } else {
                        true
                    }
                });
                if let Some(b) = bad {
                    return Err(b);
                }
            }
        }
        Ok(())
    });

    cases.add("acc6-binary-decompose-corpus", || {
        for (name, f, gamma) in ternary_corpus() {
            let f = Rc::new(f);
            let d = binary_decompose(Rc::clone(&f), Some(gamma.as_ref()), 6)
                .map_err(|e| format!("{name}: {e}"))?;
            let mut bad = None;
            for_each_point(3, 6, |pt| {
                let (want, got) = (f.eval(pt), d.h.eval(pt));
                if want != got {
                    bad = Some(format!("{name} at {pt:?}: {got} != {want}"));
                    false
                } else {
                    true
                }
            });
            if let Some(b) = bad {
                return Err(b);
            }
        }
        Ok(())
    });

    cases.add("acc6-pdelta-express-corpus", || {
        for (name, f, delta) in binary_corpus() {
            let f = Rc::new(f);
            let expr = pdelta_express(Rc::clone(&f), delta.as_ref(), 16)
                .map_err(|e| format!("{name}: {e}"))?;
            let mut bad = None;
            for_each_point(2, 16, |pt| {
                let (want, got) = (f.eval(pt), expr.composite.eval(pt));
                if want != got {
                    bad = Some(format!("{name} at {pt:?}: {got} != {want}"));
                    false
                } else {
                    true
                }
            });
            if let Some(b) = bad {
                return Err(b);
            }
        }
        Ok(())
    });

    let oracle = cfg.oracle();
    cases.add("acc6-dominate-and-reconstruct", move || {
        // Same function, identity witness.
        let f = term_fn(&med3());
        let p = exact_profile(&med3()).map_err(|e| e.to_string())?;
        let h = dominate(
            Rc::clone(&f),
            &p,
            Rc::clone(&f),
            &p,
            &Permutation::identity(3),
            6,
            &oracle,
        )
        .map_err(|e| e.to_string())?;
        let mut bad = None;
        for_each_point(3, 6, |pt| {
            if f.eval(pt) > h.eval(pt) || reconstruct(&f, &h, pt) != f.eval(pt) {
                bad = Some(format!("median domination broke at {pt:?}"));
                false
            } else {
                true
            }
        });
        if let Some(b) = bad {
            return Err(b);
        }

        // The higher-arity second-order statistic against a padded lower
        // one, identity witness.
        let f = term_fn(&mnk(4, 2));
        let fp = exact_profile(&mnk(4, 2)).map_err(|e| e.to_string())?;
        let g = term_fn_padded(&mnk(3, 2), 4);
        let gp = exact_profile_at(&mnk(3, 2), 4).map_err(|e| e.to_string())?;
        let h = dominate(
            Rc::clone(&f),
            &fp,
            g,
            &gp,
            &Permutation::identity(4),
            6,
            &oracle,
        )
        .map_err(|e| e.to_string())?;
        let mut bad = None;
        for_each_point(4, 6, |pt| {
            if f.eval(pt) > h.eval(pt) || reconstruct(&f, &h, pt) != f.eval(pt) {
                bad = Some(format!("padded domination broke at {pt:?}"));
                false
            } else {
                true
            }
        });
        if let Some(b) = bad {
            return Err(b);
        }
        Ok(())
    });

    cases
}

type Unary = Box<dyn Fn(u64) -> u64 + Send>;

fn ternary_corpus() -> Vec<(&'static str, EvalFunction, Unary)> {
    let f = |n: usize, g: fn(&[u64]) -> u64| EvalFunction::from_fn(n, g);
    vec![
        (
            "min-of-sum",
            f(3, |x| x[0].min(x[1] + x[2])),
            Box::new(|c| c) as Unary,
        ),
        ("projection", f(3, |x| x[0]), Box::new(|c| c)),
        (
            "offset-mod",
            f(3, |x| x[0] + (x[1] + x[2]) % 5),
            Box::new(|c| c + 4),
        ),
        (
            "scaled-mod",
            f(3, |x| x[0] * (1 + (x[1] * x[2]) % 4)),
            Box::new(|c| 4 * c),
        ),
        (
            "branch-double",
            f(3, |x| if x[1] < x[2] { x[0] } else { 2 * x[0] }),
            Box::new(|c| 2 * c),
        ),
        (
            "min-of-product",
            f(3, |x| x[0].min(x[1] * x[2])),
            Box::new(|c| c),
        ),
        (
            "paired-parity",
            f(3, |x| pair(x[0], (x[1] + x[2]) % 2)),
            Box::new(|c| pair(c, 1)),
        ),
        (
            "clamped-max",
            f(3, |x| x[0].max(x[1].min(x[2]).min(x[0] + 3))),
            Box::new(|c| c + 3),
        ),
        (
            "difference-parity",
            f(3, |x| x[0].saturating_sub(x[1]) + (x[2] % 2) * x[0]),
            Box::new(|c| 2 * c),
        ),
        (
            "halved-mod",
            f(3, |x| (x[0] / 2) * ((x[1] + x[2]) % 3)),
            Box::new(|c| c),
        ),
    ]
}

fn binary_corpus() -> Vec<(&'static str, EvalFunction, Unary)> {
    let f = |n: usize, g: fn(&[u64]) -> u64| EvalFunction::from_fn(n, g);
    let pd = Term::region_pairing(Region::Delta, Term::var(1), Term::var(2));
    vec![
        (
            "delta-pairing",
            EvalFunction::from_term(pd, UnaryAtomTable::new()),
            Box::new(|x| pair(x, x) + 1) as Unary,
        ),
        ("minimum", f(2, |x| x[0].min(x[1])), Box::new(|x| x + 1)),
        ("constant-zero", f(2, |_| 0), Box::new(|x| x + 1)),
        ("first-projection", f(2, |x| x[0]), Box::new(|x| x + 1)),
        ("offset-mod", f(2, |x| x[0] + x[1] % 3), Box::new(|x| x + 3)),
        (
            "below-diagonal",
            f(2, |x| if x[1] < x[0] { x[1] } else { 0 }),
            Box::new(|x| x + 1),
        ),
    ]
}

fn criterion_7() -> CaseSet {
    let mut cases = CaseSet::new();
    // A lower witness bound keeps the majorant's downsets small while still
    // demonstrating the unbounded sections.
    let oracle = OracleConfig {
        bound: 100,
        max_window: 1 << 14,
        full_budget: 1 << 10,
    };

    type CorpusEntry = (&'static str, fn() -> (Rc<EvalFunction>, WildProfile));
    let corpus: Vec<CorpusEntry> = vec![
        ("m32", || {
            let t = mnk(3, 2);
            (term_fn(&t), exact_profile(&t).unwrap())
        }),
        ("max2", || {
            let t = mnk(2, 2);
            (term_fn(&t), exact_profile(&t).unwrap())
        }),
        ("weighted", || {
            let t = Term::order_stat(2, vec![Term::var(1), Term::var(1), Term::var(2)]);
            (term_fn(&t), exact_profile(&t).unwrap())
        }),
        ("parity-scaled", || {
            (
                Rc::new(EvalFunction::from_fn(2, |x| x[0] * (x[1] % 2))),
                WildProfile::normalize(2, &[IndexSet::from_elems(&[1])]).unwrap(),
            )
        }),
        ("min3", || {
            let t = mnk(3, 1);
            (term_fn(&t), exact_profile(&t).unwrap())
        }),
    ];

    for (name, build) in corpus {
        cases.add(format!("acc7-monotonize-{name}"), move || {
            let (g, p) = build();
            let n = p.n();
            let gpp =
                monotone_insane(Rc::clone(&g), &p, &oracle, 1 << 14).map_err(|e| e.to_string())?;
            let mut values: Vec<(Vec<u64>, u64)> = Vec::new();
            let mut bad = None;
            for_each_point(n, 8, |pt| {
                let v = gpp.eval(pt);
                if v < g.eval(pt) {
                    bad = Some(format!("{name}: majorant below g at {pt:?}"));
                    return false;
                }
                values.push((pt.to_vec(), v));
                true
            });
            if let Some(b) = bad {
                return Err(b);
            }
            for (x, vx) in &values {
                for (y, vy) in &values {
                    if x.iter().zip(y).all(|(a, b)| a <= b) && vx > vy {
                        return Err(format!("{name}: not monotone between {x:?} and {y:?}"));
                    }
                }
            }
            // Wild-to-insane upgrade: every minimal wild set is witnessed
            // over the all-zero fixing.
            for &m in p.minimal() {
                let fixing = constant_fixing(n, m, 0);
                let v = oracle.witnessed(&gpp, m, &fixing);
                check(v.is_witnessed(), || {
                    format!("{name}: {m:?} not insane after upgrade")
                })?;
            }
            Ok(())
        });
    }

    cases
}

fn criterion_8(cfg: &SuiteConfig) -> CaseSet {
    let mut cases = CaseSet::new();
    for part in 0..20u64 {
        let seed = cfg.seed;
        cases.add(format!("acc8-quasiorder-laws-part{part:02}"), move || {
            let mut rng = Rng::new(seed).fork(800 + part);
            for i in 0..500 {
                let n = rng.range(2, 6) as usize;
                let p = random_profile(&mut rng, n);
                let q = random_profile(&mut rng, n);
                let r = random_profile(&mut rng, n);
                check(leq_wild(&p, &p).is_some(), || {
                    format!("instance {i}: not reflexive")
                })?;
                let pq = leq_wild(&p, &q).is_some();
                let qr = leq_wild(&q, &r).is_some();
                if pq && qr {
                    check(leq_wild(&p, &r).is_some(), || {
                        format!("instance {i}: transitivity broke on {p:?}, {q:?}, {r:?}")
                    })?;
                }
                let qp = leq_wild(&q, &p).is_some();
                check(equiv_wild(&p, &q).is_some() == (pq && qp), || {
                    format!("instance {i}: equivalence vs both directions on {p:?}, {q:?}")
                })?;
            }
            Ok(())
        });
    }
    cases
}

fn criterion_9(cfg: &SuiteConfig) -> CaseSet {
    let mut cases = CaseSet::new();

    cases.add("acc9-chain-embedding-n2-7", || {
        let mut classifier = Classifier::new();
        for n in 2..=7usize {
            let p = exact_profile(&mnk(n + 1, 2)).map_err(|e| e.to_string())?;
            let q = exact_profile_at(&mnk(n, 2), n + 1).map_err(|e| e.to_string())?;
            check(leq_wild(&p, &q).is_some(), || {
                format!("n={n}: no witness into the padded lower statistic")
            })?;
            check(leq_wild(&q, &p).is_none(), || {
                format!("n={n}: unexpected reverse witness")
            })?;
            let (ip, iq) = (classifier.chain_index(&p), classifier.chain_index(&q));
            check(ip == ChainIndex::M(n + 1) && iq == ChainIndex::M(n), || {
                format!("n={n}: indices {ip}, {iq}")
            })?;
        }
        Ok(())
    });

    // First pigeonhole half: the second-order statistic of n+1 almost
    // unary functions over n variables is bounded by a unary of the
    // coordinate two of them share.
    for n in 2..=5usize {
        let slices: u64 = if n == 5 { 8 } else { 1 };
        let per = 32 / slices;
        for s in 0..slices {
            cases.add(format!("acc9-pigeonhole-bounded-n{n}-s{s}"), move || {
                let atoms: Vec<(usize, u64)> =
                    (1..=n + 1).map(|j| (((j - 1) % n) + 1, j as u64)).collect();
                let eval_atom = |(coord, scale): (usize, u64), x: &[u64]| {
                    let mix: u64 = x
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| i + 1 != coord)
                        .map(|(_, v)| v)
                        .sum();
                    scale * x[coord - 1] + mix % 3
                };
                let mut values = vec![0u64; n + 1];
                let mut point = vec![0u64; n];
                let mut bad = None;
                scan_slice(&mut point, s * per, (s + 1) * per, 32, &mut |pt| {
                    for (j, &atom) in atoms.iter().enumerate() {
                        values[j] = eval_atom(atom, pt);
                    }
                    values.sort_unstable();
                    let t = values[1];
                    let limit = (n as u64 + 1) * pt[0] + 2;
                    if t > limit {
                        bad = Some(format!("n={n}: value {t} above {limit} at {pt:?}"));
                        false
                    } else {
                        true
                    }
                });
                bad.map_or(Ok(()), Err)
            });
        }
    }

    // Second half: over only n projections the same statistic keeps an
    // unbounded section.
    let oracle = cfg.oracle();
    cases.add("acc9-pigeonhole-witnessed", move || {
        for n in 2..=5usize {
            let f = term_fn(&mnk(n, 2));
            let a = IndexSet::full(n).remove(n);
            let v = oracle.witnessed(&f, a, &constant_fixing(n, a, 0));
            check(v.is_witnessed(), || {
                format!("n={n}: section unexpectedly bounded")
            })?;
            if let Verdict::Witnessed { value, .. } = v {
                check(value >= oracle.bound, || {
                    format!("n={n}: witness below bound")
                })?;
            }
        }
        Ok(())
    });

    cases
}

/// Odometer over `[0,window)^n` with the first coordinate restricted to
/// `[lo, hi)`.
fn scan_slice(
    point: &mut [u64],
    lo: u64,
    hi: u64,
    window: u64,
    visit: &mut impl FnMut(&[u64]) -> bool,
) {
    if lo >= hi {
        return;
    }
    let n = point.len();
    point[0] = lo;
    for p in point[1..].iter_mut() {
        *p = 0;
    }
    loop {
        if !visit(point) {
            return;
        }
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            point[i] += 1;
            let limit = if i == 0 { hi } else { window };
            if point[i] < limit {
                break;
            }
            if i == 0 {
                return;
            }
            point[i] = 0;
        }
    }
}
