//! Suite reports and the sharded case runner.
//!
//! Cases are independent closures; the runner spreads them over worker
//! threads and merges results by case identifier, so the report bytes do
//! not depend on scheduling. Wall time is measured but kept out of the
//! canonical JSON so that repeated runs are byte-identical.

use std::time::{Duration, Instant};

use serde::Serialize;

#[derive(Debug, Clone, Serialize, PartialEq, Eq, PartialOrd, Ord)]
pub struct Failure {
    pub case: String,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<Failure>,
    pub wall: Duration,
}

#[derive(Serialize)]
struct SuiteReportDoc<'a> {
    suite: &'a str,
    cases: usize,
    failures: &'a [Failure],
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Canonical JSON: deterministic for a fixed seed (no wall time).
    pub fn to_json(&self) -> String {
        serde_json::to_string(&SuiteReportDoc {
            suite: &self.suite,
            cases: self.cases,
            failures: &self.failures,
        })
        .expect("report serialization cannot fail")
    }

    pub fn render_pretty(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let verdict = if self.passed() { "ok" } else { "FAILED" };
        let _ = writeln!(
            out,
            "suite {:<10} {:>5} cases  {:>3} failures  [{verdict}]",
            self.suite,
            self.cases,
            self.failures.len()
        );
        for f in &self.failures {
            let _ = writeln!(out, "  FAIL {}: {}", f.case, f.detail);
        }
        out
    }

    /// Concatenates several suite runs into one report.
    pub fn merged(name: &str, parts: Vec<SuiteReport>) -> SuiteReport {
        let mut cases = 0;
        let mut failures = Vec::new();
        let mut wall = Duration::ZERO;
        for part in parts {
            cases += part.cases;
            failures.extend(part.failures);
            wall += part.wall;
        }
        failures.sort();
        SuiteReport {
            suite: name.to_string(),
            cases,
            failures,
            wall,
        }
    }
}

type CaseFn = Box<dyn FnOnce() -> Result<(), String> + Send>;
/// A finished case: its identifier and the failure detail, if any.
type CaseOutcome = (String, Option<String>);

/// An ordered collection of named checks, run with [`CaseSet::run`].
#[derive(Default)]
pub struct CaseSet {
    cases: Vec<(String, CaseFn)>,
}

impl CaseSet {
    pub fn new() -> CaseSet {
        CaseSet::default()
    }

    pub fn add(
        &mut self,
        id: impl Into<String>,
        case: impl FnOnce() -> Result<(), String> + Send + 'static,
    ) {
        self.cases.push((id.into(), Box::new(case)));
    }

    pub fn len(&self) -> usize {
        self.cases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cases.is_empty()
    }

    pub fn extend(&mut self, other: CaseSet) {
        self.cases.extend(other.cases);
    }

    /// Runs all cases across at most `threads` workers; results are merged
    /// in case order regardless of scheduling. A panicking case is reported
    /// as a failure with the panic payload.
    pub fn run(self, suite: &str, threads: usize) -> SuiteReport {
        let start = Instant::now();
        let total = self.cases.len();
        let threads = threads.max(1).min(total.max(1));
        let mut slots: Vec<(usize, String, CaseFn)> = self
            .cases
            .into_iter()
            .enumerate()
            .map(|(i, (id, f))| (i, id, f))
            .collect();
        let mut results: Vec<Option<CaseOutcome>> = Vec::new();
        results.resize_with(total, || None);

        if threads <= 1 {
            for (i, id, case) in slots.drain(..) {
                results[i] = Some(run_case(id, case));
            }
        } else {
            // Round-robin sharding by index keeps neighbouring heavy cases
            // on distinct workers.
            let mut buckets: Vec<Vec<(usize, String, CaseFn)>> = Vec::new();
            buckets.resize_with(threads, Vec::new);
            for (pos, slot) in slots.drain(..).enumerate() {
                buckets[pos % threads].push(slot);
            }
            let outputs: Vec<Vec<(usize, CaseOutcome)>> = std::thread::scope(|scope| {
                let handles: Vec<_> = buckets
                    .into_iter()
                    .map(|bucket| {
                        scope.spawn(move || {
                            bucket
                                .into_iter()
                                .map(|(i, id, case)| (i, run_case(id, case)))
                                .collect::<Vec<_>>()
                        })
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("worker panicked"))
                    .collect()
            });
            for chunk in outputs {
                for (i, outcome) in chunk {
                    results[i] = Some(outcome);
                }
            }
        }

        let mut failures = Vec::new();
        for outcome in results.into_iter().flatten() {
            if let (id, Some(detail)) = outcome {
                failures.push(Failure { case: id, detail });
            }
        }
        failures.sort();
        SuiteReport {
            suite: suite.to_string(),
            cases: total,
            failures,
            wall: start.elapsed(),
        }
    }
}

fn run_case(id: String, case: CaseFn) -> CaseOutcome {
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(case));
    let detail = match outcome {
        Ok(Ok(())) => None,
        Ok(Err(detail)) => Some(detail),
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            Some(format!("panicked: {msg}"))
        }
    };
    (id, detail)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failures_are_ordered_and_panics_captured() {
        let mut cases = CaseSet::new();
        cases.add("b-fails", || Err("boom".to_string()));
        cases.add("a-panics", || panic!("ouch"));
        cases.add("c-passes", || Ok(()));
        let report = cases.run("demo", 4);
        assert_eq!(report.cases, 3);
        assert_eq!(report.failures.len(), 2);
        assert_eq!(report.failures[0].case, "a-panics");
        assert!(report.failures[0].detail.contains("ouch"));
        assert_eq!(report.failures[1].case, "b-fails");
        assert!(!report.passed());
    }

    #[test]
    fn json_is_scheduling_independent() {
        let build = || {
            let mut cases = CaseSet::new();
            for i in 0..16 {
                cases.add(format!("case-{i:02}"), move || {
                    if i % 5 == 0 {
                        Err(format!("bad {i}"))
                    } else {
                        Ok(())
                    }
                });
            }
            cases
        };
        let a = build().run("demo", 1).to_json();
        let b = build().run("demo", 8).to_json();
        assert_eq!(a, b);
    }
}
