//! `brho`: batch front end for the B-term engines.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use brho_core::antirho::{
    check_general_condition, check_monotone, check_recurrences, default_window, in_example_t,
    in_tkn, tree_stats, Report, TknSpec,
};
use brho_core::bterm::{self, BTerm};
use brho_core::canonical::{canonicalize, equivalent_bterms, tree_of, try_canonicalize};
use brho_core::cycle::{
    iterate, load_checkpoint, Algorithm, CanonicalSearch, CheckpointPolicy, Progress,
    SearchOptions, DEFAULT_CHECKPOINT_INTERVAL, DEFAULT_CHECKPOINT_STEPS, DEFAULT_MAX_STEPS,
};
use brho_core::lambda::{bterm_to_lambda, rho_lambda_with};
use brho_core::restricted::{self, find_rho_restricted_with};
use brho_core::{Error, RhoResult};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "brho",
    version,
    about = "Canonical forms and the rho-property of B-terms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical decreasing polynomial of a term.
    Canon {
        term: String,
        /// Print the run-length form `degree*count,…`.
        #[arg(long)]
        rle: bool,
    },
    /// Decide βη-equality; exit status 0 when equal, 1 otherwise.
    Eq { term1: String, term2: String },
    /// Find rho(X) = (k, c): X^(k) = X^(k+c), both minimal.
    Rho {
        /// Term text; may be omitted with --resume.
        term: Option<String>,
        #[arg(long, value_enum, default_value_t = Engine::Canonical)]
        engine: Engine,
        #[arg(long, value_enum, default_value_t = AlgorithmArg::Brent)]
        algorithm: AlgorithmArg,
        /// Right applications allowed in this run.
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: u64,
        /// Checkpoint file (canonical engine only).
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Applications between checkpoints; a checkpoint is also written every 60 s.
        #[arg(long, default_value_t = DEFAULT_CHECKPOINT_STEPS)]
        checkpoint_interval: u64,
        /// Continue the search stored in --checkpoint.
        #[arg(long, requires = "checkpoint")]
        resume: bool,
        /// Suppress progress reports on standard error.
        #[arg(long, short)]
        quiet: bool,
    },
    /// Print X^(1) … X^(count), one canonical form per line.
    Iterate {
        term: String,
        #[arg(long, default_value_t = 10)]
        count: u64,
        /// Also print l (binders) and a (head arguments).
        #[arg(long)]
        stats: bool,
        #[arg(long)]
        rle: bool,
    },
    /// Check the anti-rho claims on a finite orbit prefix; exit status 0
    /// when every assertion holds.
    Antirho {
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        n: Option<u64>,
        /// Term to check instead of (B^k B)^((k+2)n).
        #[arg(long)]
        term: Option<String>,
        #[arg(long, value_enum)]
        predicate: Option<Predicate>,
        #[arg(long, default_value_t = 100)]
        steps: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    Canonical,
    Lambda,
    Restricted,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Brent,
    Floyd,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Brent => Algorithm::Brent,
            AlgorithmArg::Floyd => Algorithm::Floyd,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Predicate {
    /// T_(k,n); needs --k and --n.
    Tkn,
    /// The set used for (B^2 B)^2 ∘ (B B)^2 ∘ B^2.
    Example2,
}

const EXIT_FALSE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NOT_FOUND: u8 = 3;
const EXIT_IO: u8 = 4;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Syntax { .. } | Error::InvalidSeq(_) | Error::NotBFormShape(_) => EXIT_USAGE,
        Error::NotFound(_) | Error::StepBudgetExceeded(_) => EXIT_NOT_FOUND,
        Error::CheckpointIo(_) | Error::FormatVersionMismatch(_) => EXIT_IO,
        Error::Overflow | Error::AllZero => EXIT_FALSE,
    }
}

fn fail(e: Error) -> ExitCode {
    eprintln!("brho: {e}");
    ExitCode::from(exit_code(&e))
}

fn usage(msg: &str) -> ExitCode {
    eprintln!("brho: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Canon { term, rle } => canon(&term, rle),
        Command::Eq { term1, term2 } => eq(&term1, &term2),
        Command::Rho {
            term,
            engine,
            algorithm,
            max_steps,
            checkpoint,
            checkpoint_interval,
            resume,
            quiet,
        } => {
            let args = RhoArgs {
                term,
                engine,
                algorithm: algorithm.into(),
                max_steps,
                checkpoint,
                checkpoint_interval,
                resume,
                quiet,
            };
            return rho(args);
        }
        Command::Iterate {
            term,
            count,
            stats,
            rle,
        } => iterate_cmd(&term, count, stats, rle),
        Command::Antirho {
            k,
            n,
            term,
            predicate,
            steps,
        } => return antirho(k, n, term, predicate, steps),
    };
    match result {
        Ok(code) => code,
        Err(e) => fail(e),
    }
}

fn canon(term: &str, rle: bool) -> Result<ExitCode, Error> {
    let s = try_canonicalize(&bterm::parse(term)?)?;
    println!(
        "{}",
        if rle {
            s.to_rle_string()
        } else {
            s.to_string()
        }
    );
    Ok(ExitCode::SUCCESS)
}

fn eq(t1: &str, t2: &str) -> Result<ExitCode, Error> {
    let (e1, e2) = (bterm::parse(t1)?, bterm::parse(t2)?);
    let same = equivalent_bterms(&e1, &e2);
    println!("{same}");
    Ok(if same {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FALSE)
    })
}

struct RhoArgs {
    term: Option<String>,
    engine: Engine,
    algorithm: Algorithm,
    max_steps: u64,
    checkpoint: Option<PathBuf>,
    checkpoint_interval: u64,
    resume: bool,
    quiet: bool,
}

fn rho(args: RhoArgs) -> ExitCode {
    if args.checkpoint.is_some() && !matches!(args.engine, Engine::Canonical) {
        return usage("--checkpoint is only supported by the canonical engine");
    }
    let result = match args.engine {
        Engine::Canonical => rho_canonical(&args),
        Engine::Lambda => match args.term.as_deref() {
            Some(t) => bterm::parse(t).and_then(|e| {
                rho_lambda_with(&bterm_to_lambda(&e), args.algorithm, args.max_steps)
            }),
            None => return usage("a term is required"),
        },
        Engine::Restricted => match args.term.as_deref() {
            Some(t) => restricted::parse(t)
                .and_then(|x| find_rho_restricted_with(&x, args.algorithm, args.max_steps)),
            None => return usage("a term is required"),
        },
    };
    match result {
        Ok(r) => {
            println!("rho = ({}, {})", r.entry, r.cycle);
            ExitCode::SUCCESS
        }
        Err(e) => fail(e),
    }
}

fn rho_canonical(args: &RhoArgs) -> Result<RhoResult, Error> {
    let mut search = if args.resume {
        let path = args
            .checkpoint
            .as_ref()
            .expect("clap enforces --checkpoint");
        let state = load_checkpoint(path)?;
        if let Some(t) = &args.term {
            if canonicalize(&bterm::parse(t)?) != state.base {
                return Err(Error::FormatVersionMismatch(format!(
                    "checkpoint is for `{}`, not `{t}`",
                    state.term.to_text(true)
                )));
            }
        }
        CanonicalSearch::from_state(state)
    } else {
        let Some(t) = &args.term else {
            return Err(Error::Syntax {
                pos: 0,
                msg: "a term is required".into(),
            });
        };
        CanonicalSearch::new(&bterm::parse(t)?, args.algorithm)?
    };
    let mut opts = SearchOptions::new(args.algorithm, args.max_steps);
    opts.checkpoint = args.checkpoint.as_ref().map(|p| CheckpointPolicy {
        path: p.clone(),
        every_steps: args.checkpoint_interval.max(1),
        every: DEFAULT_CHECKPOINT_INTERVAL,
    });

    let progress = Progress::default();
    let done = AtomicBool::new(false);
    std::thread::scope(|scope| {
        if !args.quiet {
            scope.spawn(|| monitor(&progress, &done));
        }
        let r = search.run(&opts, Some(&progress));
        done.store(true, Ordering::Relaxed);
        r
    })
}

fn monitor(progress: &Progress, done: &AtomicBool) {
    let start = Instant::now();
    let mut next = Duration::from_secs(5);
    while !done.load(Ordering::Relaxed) {
        std::thread::sleep(Duration::from_millis(100));
        if start.elapsed() >= next {
            next += Duration::from_secs(10);
            eprintln!(
                "[{:>6.0?}] phase {} step {} applications {} length {}",
                start.elapsed(),
                progress.phase.load(Ordering::Relaxed),
                progress.step.load(Ordering::Relaxed),
                progress.applications.load(Ordering::Relaxed),
                progress.seq_len.load(Ordering::Relaxed),
            );
        }
    }
}

fn iterate_cmd(term: &str, count: u64, stats: bool, rle: bool) -> Result<ExitCode, Error> {
    let x: BTerm = bterm::parse(term)?;
    for (i, s) in iterate(&x, count).enumerate() {
        let s = s?;
        let text = if rle {
            s.to_rle_string()
        } else {
            s.to_string()
        };
        if stats {
            let h = tree_stats(&tree_of(&s));
            println!("{}\t{text}\tl={}\ta={}", i + 1, h.l, h.a);
        } else {
            println!("{}\t{text}", i + 1);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn antirho(
    k: Option<u64>,
    n: Option<u64>,
    term: Option<String>,
    predicate: Option<Predicate>,
    steps: usize,
) -> ExitCode {
    let spec = match (k, n) {
        (Some(k), Some(n)) if n >= 1 => Some(TknSpec::new(k, n)),
        (None, None) => None,
        _ => return usage("--k and --n go together, with n >= 1"),
    };
    let result = match (term, spec) {
        (None, Some(spec)) => z_report(spec, steps),
        (Some(t), spec) => match bterm::parse(&t) {
            Ok(x) => term_report(&x, spec, predicate, steps),
            Err(e) => return fail(e),
        },
        (None, None) => return usage("give --k and --n, or --term"),
    };
    match result {
        Ok(Some(report)) => {
            print!("{report}");
            if report.all_hold() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FALSE)
            }
        }
        Ok(None) => usage("--predicate tkn needs --k and --n"),
        Err(e) => fail(e),
    }
}

fn z_report(spec: TknSpec, steps: usize) -> Result<Option<Report>, Error> {
    let mut report = check_recurrences(spec, steps)?;
    report
        .assertions
        .extend(check_monotone(&spec.z(), steps, spec.window())?.assertions);
    Ok(Some(report))
}

fn term_report(
    x: &BTerm,
    spec: Option<TknSpec>,
    predicate: Option<Predicate>,
    steps: usize,
) -> Result<Option<Report>, Error> {
    let mut report = check_monotone(x, steps, default_window(x)?)?;
    let general = match (predicate, spec) {
        (Some(Predicate::Example2), _) => check_general_condition(x, in_example_t, steps)?,
        (Some(Predicate::Tkn), Some(spec)) => {
            check_general_condition(x, |t| in_tkn(t, spec), steps)?
        }
        (Some(Predicate::Tkn), None) => return Ok(None),
        (None, _) => Report::default(),
    };
    report.assertions.extend(general.assertions);
    Ok(Some(report))
}
