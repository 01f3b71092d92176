use std::process::ExitCode;
use std::rc::Rc;

use clap::{Parser, Subcommand};

use clonecalc::dot::export_chain_dot;
use clonecalc::json::{BoundsDoc, CertificateDoc, IndexDoc, ProfileDoc};
use clonecalc::suites::{run_suite, SuiteConfig, SUITE_NAMES};
use clonecalc_core::classify::{enumerate_profiles, Classifier};
use clonecalc_core::setfam::IndexSet;
use clonecalc_core::synth::{reduce_mnk_to_m2, synth_t_family};
use clonecalc_core::terms::{for_each_point, parse, EvalFunction, Term, UnaryAtomTable};
use clonecalc_core::wildness::{exact_profile, symbolic_bounds};

/// Workbench for wildness profiles of functions on the naturals: compute
/// profiles of terms, classify them into the chain of clones above the
/// almost unary functions, and synthesize witness terms.
#[derive(Parser)]
#[command(name = "clonecalc", version, about)]
struct Cli {
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Wildness profile of a term (exact where the fragment allows).
    Profile {
        /// Term text, e.g. "med3(x1,x2,x3)".
        term: String,
    },
    /// Chain classification of a term or a profile file.
    Classify {
        #[arg(long, conflicts_with = "profile")]
        term: Option<String>,
        /// Path to a profile JSON file {"n":…,"minimal_wild":[[…]]}.
        #[arg(long)]
        profile: Option<std::path::PathBuf>,
    },
    /// Median tower making every member of a family wild.
    Synth {
        /// Family as JSON, e.g. "[[1,2],[1,3],[2,3]]".
        #[arg(long)]
        family: String,
        /// Ambient arity.
        #[arg(long)]
        n: usize,
        /// Verify the synthesized term against the window oracle.
        #[arg(long)]
        certify: bool,
        #[arg(long, default_value_t = 64)]
        window: u64,
        #[arg(long, default_value_t = 1000)]
        bound: u64,
    },
    /// Evaluate a term at a point.
    Eval {
        term: String,
        /// Comma-separated arguments, e.g. --args 1,5,2.
        #[arg(long)]
        args: String,
    },
    /// Variable duplication reducing m[n,k] to a second-order statistic.
    Reduce {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Verify the identity pointwise on a small window.
        #[arg(long)]
        certify: bool,
    },
    /// Stream all profiles of a given arity as JSON lines.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Only pairwise intersecting families.
        #[arg(long)]
        intersecting: bool,
    },
    /// DOT drawing of the descending chain of clones.
    ExportDot {
        #[arg(long)]
        max_n: usize,
    },
    /// Run a check suite.
    Check {
        /// One of: setfam, wildness, classify, synth, chain, all.
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        window: u64,
        #[arg(long, default_value_t = 1000)]
        bound: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Profile { term } => {
            let t = parse(&term).map_err(|e| e.to_string())?;
            match exact_profile(&t) {
                Ok(p) => {
                    let doc = ProfileDoc::from_profile(&p);
                    if cli.pretty {
                        println!("{}", render_profile(&doc));
                    } else {
                        println!("{}", serde_json::to_string(&doc).unwrap());
                    }
                }
                Err(_) => {
                    // Outside the exact fragment: surface the bounds and say
                    // so instead of guessing.
                    let doc = BoundsDoc::from_bounds(&symbolic_bounds(&t));
                    if cli.pretty {
                        println!("{}", render_bounds(&doc));
                    } else {
                        println!("{}", serde_json::to_string(&doc).unwrap());
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify { term, profile } => {
            let p = match (term, profile) {
                (Some(t), None) => {
                    let t = parse(&t).map_err(|e| e.to_string())?;
                    exact_profile(&t).map_err(|e| {
                        format!("{e}; classification needs a term in the exact fragment")
                    })?
                }
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| format!("{}: {e}", path.display()))?;
                    let doc: ProfileDoc = serde_json::from_str(&text).map_err(|e| e.to_string())?;
                    doc.to_profile().map_err(|e| e.to_string())?
                }
                _ => return Err("pass exactly one of --term or --profile".to_string()),
            };
            let idx = Classifier::new().chain_index(&p);
            if cli.pretty {
                println!("{idx}");
            } else {
                println!(
                    "{}",
                    serde_json::to_string(&IndexDoc::from_index(idx)).unwrap()
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Synth {
            family,
            n,
            certify,
            window,
            bound,
        } => {
            let sets: Vec<Vec<usize>> = serde_json::from_str(&family)
                .map_err(|e| format!("family must be a JSON list of lists: {e}"))?;
            let mut members = Vec::with_capacity(sets.len());
            for elems in &sets {
                members.push(IndexSet::checked_from_elems(elems, n).map_err(|e| e.to_string())?);
            }
            let t = synth_t_family(&members, n).map_err(|e| e.to_string())?;
            if certify {
                let (cert, verdicts) = certify_family(&t, &members, n, window, bound);
                let out = serde_json::json!({
                    "term": t.to_string(),
                    "certificate": cert,
                    "verdicts": verdicts,
                });
                println!("{}", serde_json::to_string(&out).unwrap());
                return Ok(if cert_ok(&out) {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::FAILURE
                });
            }
            if cli.pretty {
                println!("{t}");
            } else {
                println!("{}", serde_json::to_string(&t.to_string()).unwrap());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval { term, args } => {
            let t = parse(&term).map_err(|e| e.to_string())?;
            let point: Vec<u64> = args
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<u64>()
                        .map_err(|e| format!("bad argument `{s}`: {e}"))
                })
                .collect::<Result<_, _>>()?;
            if point.len() != t.arity() {
                return Err(format!(
                    "term has arity {}, got {} arguments",
                    t.arity(),
                    point.len()
                ));
            }
            let value = t.eval_closed(&point);
            if cli.pretty {
                println!("{t} at {point:?} = {value}");
            } else {
                println!("{value}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Reduce { n, k, certify } => {
            let t = reduce_mnk_to_m2(n, k).map_err(|e| e.to_string())?;
            if certify {
                let m = n.div_ceil(k - 1);
                let target = if m == 1 {
                    Term::var(1)
                } else {
                    Term::order_stat(2, (1..=m).map(Term::var).collect())
                };
                let mut cert = CertificateDoc::verified("reduce_mnk_to_m2", 5);
                for_each_point(m, 5, |pt| {
                    let (got, want) = (t.eval_closed(pt), target.eval_closed(pt));
                    if got != want {
                        cert =
                            CertificateDoc::failed("reduce_mnk_to_m2", 5, pt.to_vec(), want, got);
                        false
                    } else {
                        true
                    }
                });
                let failed = cert.status == "failed";
                let out = serde_json::json!({ "term": t.to_string(), "certificate": cert });
                println!("{}", serde_json::to_string(&out).unwrap());
                return Ok(if failed {
                    ExitCode::FAILURE
                } else {
                    ExitCode::SUCCESS
                });
            }
            if cli.pretty {
                println!("{t}");
            } else {
                println!("{}", serde_json::to_string(&t.to_string()).unwrap());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Enumerate { n, intersecting } => {
            let stream = enumerate_profiles(n, intersecting).map_err(|e| e.to_string())?;
            for p in stream {
                let doc = ProfileDoc::from_profile(&p);
                if cli.pretty {
                    println!("{}", render_profile(&doc));
                } else {
                    println!("{}", serde_json::to_string(&doc).unwrap());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::ExportDot { max_n } => {
            if max_n < 2 {
                return Err("the chain starts at M2; --max-n must be at least 2".to_string());
            }
            print!("{}", export_chain_dot(max_n));
            Ok(ExitCode::SUCCESS)
        }
        Command::Check {
            suite,
            seed,
            window,
            bound,
        } => {
            let mut cfg = SuiteConfig {
                seed,
                window,
                bound,
                ..SuiteConfig::default()
            };
            if let Ok(cap) = std::env::var("CLONECALC_MAX_WINDOW") {
                let cap: u64 = cap
                    .parse()
                    .map_err(|e| format!("CLONECALC_MAX_WINDOW must be a number: {e}"))?;
                cfg.max_window = cfg.max_window.min(cap);
            }
            let Some(report) = run_suite(&suite, &cfg) else {
                return Err(format!(
                    "unknown suite `{suite}`; pick one of {SUITE_NAMES:?}"
                ));
            };
            if cli.pretty {
                print!("{}", report.render_pretty());
            } else {
                println!("{}", report.to_json());
            }
            eprintln!("suite {} finished in {:?}", report.suite, report.wall);
            Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}

fn render_profile(doc: &ProfileDoc) -> String {
    let sets: Vec<String> = doc
        .minimal_wild
        .iter()
        .map(|s| {
            let elems: Vec<String> = s.iter().map(usize::to_string).collect();
            format!("{{{}}}", elems.join(","))
        })
        .collect();
    format!(
        "n = {}; minimal wild sets: {}",
        doc.n,
        if sets.is_empty() {
            "(none)".to_string()
        } else {
            sets.join(" ")
        }
    )
}

fn render_bounds(doc: &BoundsDoc) -> String {
    format!(
        "n = {}; not exact: {} wild proven, {} maximal tame, {} subsets unknown",
        doc.n,
        doc.proven_wild.len(),
        doc.proven_tame_max.len(),
        doc.undetermined
    )
}

fn cert_ok(out: &serde_json::Value) -> bool {
    out["certificate"]["status"] == "verified"
}

/// Window-oracle certificate for a synthesized family tower: every member
/// must be witnessed over the zero fixing within the adaptive search cap.
/// Returns the per-member verdicts alongside the certificate.
fn certify_family(
    t: &Term,
    members: &[IndexSet],
    n: usize,
    window: u64,
    bound: u64,
) -> (CertificateDoc, Vec<clonecalc::json::VerdictDoc>) {
    use clonecalc::json::VerdictDoc;
    use clonecalc_core::wildness::adaptive_wild;
    let max_window = oracle_cap((1u64 << 14).max(window));
    let f = Rc::new(EvalFunction::from_term_padded(
        t.clone(),
        UnaryAtomTable::new(),
        n,
    ));
    let mut verdicts = Vec::with_capacity(members.len());
    let mut all_witnessed = true;
    for &m in members {
        let fixing: Vec<Option<u64>> = (1..=n)
            .map(|i| if m.contains(i) { None } else { Some(0) })
            .collect();
        let v = adaptive_wild(&f, m, &fixing, bound, max_window, 1 << 12);
        all_witnessed &= v.is_witnessed();
        verdicts.push(VerdictDoc::from_verdict(&v));
    }
    let mut cert = CertificateDoc::verified("synth_t_family", max_window);
    if !all_witnessed {
        cert.status = "failed".to_string();
    }
    (cert, verdicts)
}

/// Oracle searches never exceed CLONECALC_MAX_WINDOW when it is set.
fn oracle_cap(max_window: u64) -> u64 {
    match std::env::var("CLONECALC_MAX_WINDOW")
        .ok()
        .and_then(|v| v.parse::<u64>().ok())
    {
        Some(cap) => max_window.min(cap),
        None => max_window,
    }
}
