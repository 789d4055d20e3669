use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;
use taufact::domain::{Elem, Window};
use taufact::factor::{enumerate_factorizations, tau_divides, ufd_diagnostic};
use taufact::props::{check, PropertyId, Verdict};
use taufact::relation::Relation;
use taufact::reldef;
use taufact::report;
use taufact::search::{search_counterexample, RelationSampler, SearchOutcome, Slot};
use taufact_cli::suite;

/// Binary relations over the nonzero nonunits of the integers: composition,
/// property checks, factorizations, and a reproducible verification suite.
#[derive(Parser)]
#[command(name = "taufact", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Enumeration bound B; overrides the bound stored in relation files.
    #[arg(long, global = true)]
    window: Option<u64>,
    /// Witness-search bound W; overrides the bound stored in relation files.
    #[arg(long, global = true)]
    witness_bound: Option<u64>,
    /// Seed for randomized subcommands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for the suite.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write output here instead of stdout (for paper-suite: the report directory).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate the composition of two relations as a JSON pair dump.
    Compose { rel1: PathBuf, rel2: PathBuf },
    /// Check one property of a relation; exit 0 if it holds, 1 if it fails.
    Check {
        rel: PathBuf,
        #[arg(long)]
        property: String,
    },
    /// List factorizations of a target under a relation, one JSON line each.
    Factorize {
        target: i64,
        rel: PathBuf,
        /// Minimum factor count; 1 includes the two trivial factorizations.
        #[arg(long, default_value_t = 2)]
        min_length: usize,
    },
    /// Decide whether a divides b through the factorizations of b.
    TauDivides { a: i64, b: i64, rel: PathBuf },
    /// Factorization-class diagnostic for every window element.
    UfdDiagnostic { rel: PathBuf },
    /// Run every suite item; write per-item reports plus a summary.
    PaperSuite,
    /// Randomized search for a relation pair meeting the hypotheses but
    /// failing the conclusion; exit 0 when found, 1 when the budget runs out.
    SearchCounterexample {
        /// Repeatable `slot:property` hypothesis, e.g. tau2:divisive_left.
        #[arg(long = "hypothesis")]
        hypotheses: Vec<String>,
        #[arg(long)]
        conclusion: String,
        #[arg(long, default_value_t = 400)]
        budget: u64,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn load_relation(path: &Path, cli: &Cli) -> Result<(Window, Relation), Failure> {
    let text = fs::read_to_string(path).map_err(|e| fail(2, format!("{}: {e}", path.display())))?;
    let (file_window, relation) =
        reldef::parse_definition(&text).map_err(|e| fail(2, format!("{}: {e}", path.display())))?;
    let window = merge_window(&file_window, cli)?;
    Ok((window, relation))
}

fn merge_window(base: &Window, cli: &Cli) -> Result<Window, Failure> {
    let b = cli.window.unwrap_or(base.bound());
    let w = cli.witness_bound.unwrap_or(base.witness_bound());
    Window::new(b, w).map_err(|e| fail(2, e.to_string()))
}

fn default_window(cli: &Cli) -> Result<Window, Failure> {
    let b = cli.window.unwrap_or(50);
    let w = cli.witness_bound.unwrap_or(600);
    Window::new(b, w).map_err(|e| fail(2, e.to_string()))
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| fail(2, format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn elem_arg(v: i64, what: &str) -> Result<Elem, Failure> {
    Elem::new(v).map_err(|e| fail(2, format!("{what}: {e}")))
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    match &cli.cmd {
        Cmd::Compose { rel1, rel2 } => {
            let (window, first) = load_relation(rel1, cli)?;
            let (_, second) = load_relation(rel2, cli)?;
            let comp = Relation::compose(first, second);
            let dump: Vec<(i64, i64)> = comp
                .enumerate(&window)
                .into_iter()
                .map(|(a, b)| (a.get(), b.get()))
                .collect();
            let doc = json!({
                "pairs": dump,
                "relation": comp.to_string(),
                "window": serde_json::to_value(window).unwrap(),
            });
            emit(&report::canonical(&doc), &cli.out)?;
            Ok(0)
        }
        Cmd::Check { rel, property } => {
            let p = PropertyId::parse(property).map_err(|e| fail(2, e.to_string()))?;
            let (window, relation) = load_relation(rel, cli)?;
            let rep = check(&relation, p, &window);
            emit(&report::canonical(&rep), &cli.out)?;
            Ok(match rep.verdict {
                Verdict::Fails => 1,
                Verdict::HoldsOnWindow | Verdict::NotApplicable => 0,
            })
        }
        Cmd::Factorize {
            target,
            rel,
            min_length,
        } => {
            let target = elem_arg(*target, "target")?;
            let (window, relation) = load_relation(rel, cli)?;
            let mut lines = String::new();
            for f in enumerate_factorizations(target, &relation, &window, *min_length) {
                lines.push_str(&report::canonical_line(&f.json()));
            }
            emit(&lines, &cli.out)?;
            Ok(0)
        }
        Cmd::TauDivides { a, b, rel } => {
            let a = elem_arg(*a, "a")?;
            let b = elem_arg(*b, "b")?;
            let (window, relation) = load_relation(rel, cli)?;
            let verdict = tau_divides(a, b, &relation, &window);
            let doc = json!({
                "a": a.get(),
                "b": b.get(),
                "divides": verdict,
                "relation": relation.to_string(),
                "window": serde_json::to_value(window).unwrap(),
            });
            emit(&report::canonical(&doc), &cli.out)?;
            Ok(0)
        }
        Cmd::UfdDiagnostic { rel } => {
            let (window, relation) = load_relation(rel, cli)?;
            let diag = ufd_diagnostic(&relation, &window);
            emit(&report::canonical(&diag), &cli.out)?;
            Ok(0)
        }
        Cmd::PaperSuite => {
            let window = default_window(cli)?;
            let out_dir = cli
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from("suite-report"));
            let jobs = cli.jobs.unwrap_or_else(|| {
                std::thread::available_parallelism()
                    .map(|n| n.get().min(8))
                    .unwrap_or(1)
            });
            let run = suite::run_suite(&out_dir, &window, cli.seed, jobs)
                .map_err(|e| fail(2, format!("{}: {e}", out_dir.display())))?;
            print!("{}", report::canonical(&run.summary));
            Ok(if run.failed.is_empty() { 0 } else { 1 })
        }
        Cmd::SearchCounterexample {
            hypotheses,
            conclusion,
            budget,
        } => {
            let mut hyps = Vec::new();
            for h in hypotheses {
                let (slot, prop) = h
                    .split_once(':')
                    .ok_or_else(|| fail(2, format!("hypothesis `{h}`: expected slot:property")))?;
                let slot = Slot::parse(slot).ok_or_else(|| {
                    fail(2, format!("hypothesis `{h}`: slot must be tau1 or tau2"))
                })?;
                let prop = PropertyId::parse(prop).map_err(|e| fail(2, e.to_string()))?;
                hyps.push((slot, prop));
            }
            let conclusion = PropertyId::parse(conclusion).map_err(|e| fail(2, e.to_string()))?;
            let b = cli.window.unwrap_or(12);
            let w = cli.witness_bound.unwrap_or(4 * b);
            let window = Window::new(b, w).map_err(|e| fail(2, e.to_string()))?;
            let outcome = search_counterexample(
                &hyps,
                conclusion,
                &RelationSampler::default(),
                *budget,
                cli.seed,
                &window,
            );
            match outcome {
                SearchOutcome::Found {
                    trial,
                    tau1,
                    tau2,
                    report: rep,
                } => {
                    let doc = json!({
                        "found": true,
                        "trial": trial,
                        "tau1": reldef::relation_to_value(&tau1),
                        "tau2": reldef::relation_to_value(&tau2),
                        "report": serde_json::to_value(&rep).unwrap(),
                    });
                    emit(&report::canonical(&doc), &cli.out)?;
                    Ok(0)
                }
                SearchOutcome::Exhausted { trials } => {
                    let doc = json!({"found": false, "trials": trials});
                    emit(&report::canonical(&doc), &cli.out)?;
                    Ok(1)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
