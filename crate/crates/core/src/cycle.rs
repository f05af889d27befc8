//! Cycle detection over flat powers `X^(1), X^(2), …`.
//!
//! The search is a resumable state machine shared by every engine
//! ([`Stepper`] supplies the states). With Floyd's algorithm it runs three
//! phases:
//!
//! 1. smallest `m` with `X^(m) = X^(2m)`;
//! 2. smallest `k` with `X^(k) = X^(m+k)`, and alongside it the smallest
//!    `0 < c ≤ k` with `X^(m) = X^(m+c)` (`c = m` when there is none);
//! 3. done: `ρ(X) = (k, c)`.
//!
//! Brent's algorithm finds the cycle length directly in phase 1 (the
//! tortoise jumps to the hare whenever the distance reaches a power of two)
//! and then locates the entry the same way. Brent is the default.
//!
//! For the canonical engine, [`CanonicalSearch`] adds checkpointing in a
//! versioned line-based text format (see [`SearchState`]).

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use crate::bterm::{self, BTerm};
use crate::canonical::{try_canonicalize, DegreeSeq};
use crate::error::{Error, Result};
use crate::fast_apply::apply_assign;

/// Default horizon for command-line searches.
pub const DEFAULT_MAX_STEPS: u64 = 10_000_000_000;
pub const DEFAULT_CHECKPOINT_STEPS: u64 = 10_000_000;
pub const DEFAULT_CHECKPOINT_INTERVAL: Duration = Duration::from_secs(60);

const CHECKPOINT_MAGIC: &str = "rho-checkpoint v1";

/// `ρ(X) = (entry, cycle)`: `X^(entry) = X^(entry+cycle)`, both minimal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RhoResult {
    pub entry: u64,
    pub cycle: u64,
}

impl fmt::Display for RhoResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.entry, self.cycle)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Floyd,
    #[default]
    Brent,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Floyd => "floyd",
            Algorithm::Brent => "brent",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "floyd" => Ok(Algorithm::Floyd),
            "brent" => Ok(Algorithm::Brent),
            _ => Err(Error::Syntax {
                pos: 0,
                msg: format!("unknown algorithm {s:?}"),
            }),
        }
    }
}

/// Produces the orbit `X^(1), X^(2), …` of one engine.
pub trait Stepper {
    type State: Clone + PartialEq;

    /// `X^(1)`.
    fn first(&mut self) -> Result<Self::State>;

    /// `X^(i)` to `X^(i+1)`.
    fn advance(&mut self, s: &mut Self::State) -> Result<()>;
}

/// In-flight cycle search. Indices are 1-based: `X^(1)` is the term itself.
#[derive(Clone, Debug, PartialEq)]
pub struct Search<S> {
    algorithm: Algorithm,
    phase: u8,
    step: u64,
    slow: S,
    fast: S,
    // Floyd phase 2 only: X^(m), for the concurrent cycle-length check.
    anchor: Option<S>,
    m: Option<u64>,
    candidate_c: Option<u64>,
}

impl<S: Clone + PartialEq> Search<S> {
    pub fn start<T: Stepper<State = S>>(stepper: &mut T, algorithm: Algorithm) -> Result<Self> {
        let slow = stepper.first()?;
        let mut fast = slow.clone();
        stepper.advance(&mut fast)?;
        let step = match algorithm {
            Algorithm::Floyd => 1,
            Algorithm::Brent => 2,
        };
        Ok(Search {
            algorithm,
            phase: 1,
            step,
            slow,
            fast,
            anchor: None,
            m: None,
            candidate_c: None,
        })
    }

    pub fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn step(&self) -> u64 {
        self.step
    }

    pub fn slow(&self) -> &S {
        &self.slow
    }

    pub fn fast(&self) -> &S {
        &self.fast
    }

    /// Orbit states currently held (not counting the engine's own base term).
    pub fn retained_states(&self) -> usize {
        2 + usize::from(self.anchor.is_some())
    }

    pub fn result(&self) -> Option<RhoResult> {
        (self.phase == 3).then(|| RhoResult {
            entry: self.step,
            cycle: self
                .candidate_c
                .expect("finished search has a cycle length"),
        })
    }

    /// Performs one comparison and the state advances that follow it.
    /// Returns the number of applications spent.
    pub fn step_once<T: Stepper<State = S>>(&mut self, stepper: &mut T) -> Result<u64> {
        match (self.phase, self.algorithm) {
            (1, Algorithm::Floyd) => {
                if self.slow == self.fast {
                    let m = self.step;
                    self.m = Some(m);
                    self.phase = 2;
                    self.slow = stepper.first()?;
                    let anchor = self.fast.clone();
                    stepper.advance(&mut self.fast)?;
                    self.anchor = Some(anchor);
                    self.step = 1;
                    Ok(2)
                } else {
                    stepper.advance(&mut self.slow)?;
                    stepper.advance(&mut self.fast)?;
                    stepper.advance(&mut self.fast)?;
                    self.step += 1;
                    Ok(3)
                }
            }
            (1, Algorithm::Brent) => {
                let hare = self.step;
                let tortoise = brent_tortoise(hare);
                if self.slow == self.fast {
                    let lambda = hare - tortoise;
                    self.m = Some(lambda);
                    self.candidate_c = Some(lambda);
                    self.phase = 2;
                    self.slow = stepper.first()?;
                    self.fast = self.slow.clone();
                    for _ in 0..lambda {
                        stepper.advance(&mut self.fast)?;
                    }
                    self.step = 1;
                    Ok(1 + lambda)
                } else {
                    if hare == 2 * tortoise {
                        self.slow = self.fast.clone();
                    }
                    stepper.advance(&mut self.fast)?;
                    self.step += 1;
                    Ok(1)
                }
            }
            (2, algorithm) => {
                let j = self.step;
                if algorithm == Algorithm::Floyd && self.candidate_c.is_none() {
                    match &self.anchor {
                        Some(anchor) if *anchor == self.fast => self.candidate_c = Some(j),
                        Some(_) => {}
                        None => {
                            return Err(Error::FormatVersionMismatch(
                                "phase-2 Floyd search is missing its anchor".into(),
                            ))
                        }
                    }
                }
                if self.slow == self.fast {
                    let m = self.m.expect("phase 2 knows m");
                    self.candidate_c = Some(self.candidate_c.unwrap_or(m));
                    self.anchor = None;
                    self.phase = 3;
                    Ok(0)
                } else {
                    stepper.advance(&mut self.slow)?;
                    stepper.advance(&mut self.fast)?;
                    self.step += 1;
                    Ok(2)
                }
            }
            _ => Ok(0),
        }
    }

    /// Rebuilds state dropped by a checkpoint: Floyd's phase-2 anchor
    /// `X^(m)` is replayed from the start when the cycle length is still
    /// open.
    pub fn restore<T: Stepper<State = S>>(&mut self, stepper: &mut T) -> Result<u64> {
        if self.phase == 2
            && self.algorithm == Algorithm::Floyd
            && self.candidate_c.is_none()
            && self.anchor.is_none()
        {
            let m = self.m.expect("phase 2 knows m");
            let mut anchor = stepper.first()?;
            for _ in 1..m {
                stepper.advance(&mut anchor)?;
            }
            self.anchor = Some(anchor);
            return Ok(m);
        }
        Ok(0)
    }

    /// Runs until done or until `budget` applications have been spent.
    /// `on_tick` sees the search roughly every 4096 applications and may
    /// stop it by returning `false`.
    pub fn run<T: Stepper<State = S>>(
        &mut self,
        stepper: &mut T,
        budget: u64,
        mut on_tick: impl FnMut(&Self, u64) -> Result<bool>,
    ) -> Result<Option<RhoResult>> {
        let mut spent = self.restore(stepper)?;
        let mut next_tick = spent + TICK;
        while self.phase != 3 {
            if spent >= budget {
                return Ok(None);
            }
            spent += self.step_once(stepper)?;
            if spent >= next_tick {
                next_tick = spent + TICK;
                if !on_tick(self, spent)? {
                    return Ok(None);
                }
            }
        }
        on_tick(self, spent)?;
        Ok(self.result())
    }
}

const TICK: u64 = 4096;

/// Tortoise index paired with hare index `hare ≥ 2` in Brent's phase 1: the
/// largest power of two below `hare`.
fn brent_tortoise(hare: u64) -> u64 {
    1u64 << (63 - (hare - 1).leading_zeros())
}

/// Runs a complete search with no checkpointing.
pub fn search<T: Stepper>(
    stepper: &mut T,
    algorithm: Algorithm,
    max_steps: u64,
) -> Result<RhoResult> {
    let mut s = Search::start(stepper, algorithm)?;
    s.run(stepper, max_steps, |_, _| Ok(true))?
        .ok_or(Error::NotFound(max_steps))
}

/// The canonical engine: states are decreasing polynomials and each step is
/// one [`apply_assign`] with the base polynomial.
#[derive(Clone, Debug)]
pub struct PolyOrbit {
    base: DegreeSeq,
}

impl PolyOrbit {
    pub fn new(base: DegreeSeq) -> Self {
        PolyOrbit { base }
    }

    pub fn base(&self) -> &DegreeSeq {
        &self.base
    }
}

impl Stepper for PolyOrbit {
    type State = DegreeSeq;

    fn first(&mut self) -> Result<DegreeSeq> {
        Ok(self.base.clone())
    }

    fn advance(&mut self, s: &mut DegreeSeq) -> Result<()> {
        apply_assign(s, &self.base)
    }
}

/// Canonical forms of `X^(1) … X^(count)`, computed lazily.
pub fn iterate(x: &BTerm, count: u64) -> Iterate {
    Iterate::new(try_canonicalize(x), count)
}

pub struct Iterate {
    base: Result<DegreeSeq>,
    current: Option<DegreeSeq>,
    remaining: u64,
}

impl Iterate {
    fn new(base: Result<DegreeSeq>, count: u64) -> Self {
        Iterate {
            base,
            current: None,
            remaining: count,
        }
    }

    pub fn from_seq(base: DegreeSeq, count: u64) -> Self {
        Iterate::new(Ok(base), count)
    }
}

impl Iterator for Iterate {
    type Item = Result<DegreeSeq>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let base = match &self.base {
            Ok(b) => b,
            Err(e) => {
                self.remaining = 0;
                return Some(Err(e.clone()));
            }
        };
        let next = match self.current.take() {
            None => Ok(base.clone()),
            Some(mut cur) => apply_assign(&mut cur, base).map(|()| cur),
        };
        match next {
            Ok(s) => {
                self.current = Some(s.clone());
                Some(Ok(s))
            }
            Err(e) => {
                self.remaining = 0;
                Some(Err(e))
            }
        }
    }
}

/// Counters a monitoring thread may read while a search runs.
#[derive(Debug, Default)]
pub struct Progress {
    pub applications: AtomicU64,
    pub phase: AtomicU64,
    pub step: AtomicU64,
    pub seq_len: AtomicU64,
}

impl Progress {
    fn record(&self, s: &Search<DegreeSeq>, applications: u64) {
        self.applications.store(applications, Ordering::Relaxed);
        self.phase.store(u64::from(s.phase()), Ordering::Relaxed);
        self.step.store(s.step(), Ordering::Relaxed);
        self.seq_len.store(s.fast().len(), Ordering::Relaxed);
    }
}

#[derive(Clone, Debug)]
pub struct CheckpointPolicy {
    pub path: PathBuf,
    pub every_steps: u64,
    pub every: Duration,
}

impl CheckpointPolicy {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        CheckpointPolicy {
            path: path.into(),
            every_steps: DEFAULT_CHECKPOINT_STEPS,
            every: DEFAULT_CHECKPOINT_INTERVAL,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SearchOptions {
    pub algorithm: Algorithm,
    /// Applications allowed in this run.
    pub max_steps: u64,
    pub checkpoint: Option<CheckpointPolicy>,
}

impl SearchOptions {
    pub fn new(algorithm: Algorithm, max_steps: u64) -> Self {
        SearchOptions {
            algorithm,
            max_steps,
            checkpoint: None,
        }
    }
}

/// A persisted canonical-engine search.
///
/// On disk:
///
/// ```text
/// rho-checkpoint v1
/// term: <B-term>
/// engine: canonical
/// algorithm: floyd|brent
/// phase: <1|2|3>
/// step: <u64>
/// m: <u64|->
/// candidate_c: <u64|->
/// slow: <run-length degree sequence>
/// fast: <run-length degree sequence>
/// ```
///
/// Floyd phase 1 at step `i` holds `X^(i)` and `X^(2i)`. Brent phase 1 at
/// step `h` holds `X^(t)` and `X^(h)`, `t` the largest power of two below
/// `h`. Phase 2 at step `j` holds `X^(j)` and `X^(j+m)`, where `m` is the
/// phase-1 result (Brent: the cycle length). Phase 3 is a finished search
/// with `step` the entry and `candidate_c` the cycle length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchState {
    pub term: BTerm,
    pub base: DegreeSeq,
    pub algorithm: Algorithm,
    pub phase: u8,
    pub step: u64,
    pub m: Option<u64>,
    pub candidate_c: Option<u64>,
    pub slow: DegreeSeq,
    pub fast: DegreeSeq,
}

fn opt_text(v: Option<u64>) -> String {
    v.map_or_else(|| "-".to_string(), |n| n.to_string())
}

impl SearchState {
    pub fn to_text(&self) -> String {
        format!(
            "{CHECKPOINT_MAGIC}\nterm: {}\nengine: canonical\nalgorithm: {}\nphase: {}\nstep: {}\nm: {}\ncandidate_c: {}\nslow: {}\nfast: {}\n",
            self.term.to_text(true),
            self.algorithm,
            self.phase,
            self.step,
            opt_text(self.m),
            opt_text(self.candidate_c),
            self.slow.to_rle_string(),
            self.fast.to_rle_string(),
        )
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = |msg: String| Error::FormatVersionMismatch(msg);
        let mut lines = text.lines();
        match lines.next() {
            Some(CHECKPOINT_MAGIC) => {}
            Some(other) => return Err(bad(format!("unknown header {other:?}"))),
            None => return Err(bad("empty checkpoint".into())),
        }
        let mut field = |name: &str| -> Result<String> {
            let line = lines
                .next()
                .ok_or_else(|| bad(format!("missing `{name}` line")))?;
            line.strip_prefix(name)
                .and_then(|r| r.strip_prefix(": "))
                .map(str::to_string)
                .ok_or_else(|| bad(format!("expected `{name}: …`, found {line:?}")))
        };
        let num = |name: &str, v: &str| -> Result<u64> {
            v.parse()
                .map_err(|_| bad(format!("bad {name} value {v:?}")))
        };
        let opt = |name: &str, v: &str| -> Result<Option<u64>> {
            if v == "-" {
                Ok(None)
            } else {
                num(name, v).map(Some)
            }
        };
        let seq = |name: &str, v: &str| -> Result<DegreeSeq> {
            DegreeSeq::parse_rle(v).map_err(|e| bad(format!("bad {name}: {e}")))
        };

        let term = bterm::parse(&field("term")?).map_err(|e| bad(format!("bad term: {e}")))?;
        let engine = field("engine")?;
        if engine != "canonical" {
            return Err(bad(format!("unsupported engine {engine:?}")));
        }
        let algorithm = field("algorithm")?
            .parse()
            .map_err(|e| bad(format!("{e}")))?;
        let phase = num("phase", &field("phase")?)?;
        let step = num("step", &field("step")?)?;
        let m = opt("m", &field("m")?)?;
        let candidate_c = opt("candidate_c", &field("candidate_c")?)?;
        let slow = seq("slow", &field("slow")?)?;
        let fast = seq("fast", &field("fast")?)?;
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(bad("trailing content".into()));
        }

        let phase = match phase {
            1..=3 => phase as u8,
            p => return Err(bad(format!("phase {p} out of range"))),
        };
        if step == 0 || (phase == 1 && algorithm == Algorithm::Brent && step < 2) {
            return Err(bad(format!("step {step} out of range")));
        }
        if phase >= 2 && m.is_none() {
            return Err(bad("phase 2 and 3 need m".into()));
        }
        if phase == 3 && candidate_c.is_none() {
            return Err(bad("finished search needs candidate_c".into()));
        }
        let base = try_canonicalize(&term)?;
        Ok(SearchState {
            term,
            base,
            algorithm,
            phase,
            step,
            m,
            candidate_c,
            slow,
            fast,
        })
    }

    /// Writes through a temporary file and renames it over `path`.
    pub fn save(&self, path: &Path) -> Result<()> {
        let io = |e: std::io::Error| Error::CheckpointIo(format!("{}: {e}", path.display()));
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        let tmp = PathBuf::from(tmp);
        {
            let mut f = fs::File::create(&tmp).map_err(io)?;
            f.write_all(self.to_text().as_bytes()).map_err(io)?;
            f.sync_all().map_err(io)?;
        }
        fs::rename(&tmp, path).map_err(io)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::CheckpointIo(format!("{}: {e}", path.display())))?;
        SearchState::parse(&text)
    }
}

pub fn save_checkpoint(state: &SearchState, path: &Path) -> Result<()> {
    state.save(path)
}

pub fn load_checkpoint(path: &Path) -> Result<SearchState> {
    SearchState::load(path)
}

/// A canonical-engine search that can be paused, persisted and resumed.
#[derive(Clone, Debug)]
pub struct CanonicalSearch {
    term: BTerm,
    orbit: PolyOrbit,
    search: Search<DegreeSeq>,
}

impl CanonicalSearch {
    pub fn new(x: &BTerm, algorithm: Algorithm) -> Result<Self> {
        let mut orbit = PolyOrbit::new(try_canonicalize(x)?);
        let search = Search::start(&mut orbit, algorithm)?;
        Ok(CanonicalSearch {
            term: x.clone(),
            orbit,
            search,
        })
    }

    pub fn from_state(state: SearchState) -> Self {
        let search = Search {
            algorithm: state.algorithm,
            phase: state.phase,
            step: state.step,
            slow: state.slow,
            fast: state.fast,
            anchor: None,
            m: state.m,
            candidate_c: state.candidate_c,
        };
        CanonicalSearch {
            term: state.term,
            orbit: PolyOrbit::new(state.base),
            search,
        }
    }

    pub fn state(&self) -> SearchState {
        SearchState {
            term: self.term.clone(),
            base: self.orbit.base().clone(),
            algorithm: self.search.algorithm,
            phase: self.search.phase,
            step: self.search.step,
            m: self.search.m,
            candidate_c: self.search.candidate_c,
            slow: self.search.slow.clone(),
            fast: self.search.fast.clone(),
        }
    }

    pub fn search(&self) -> &Search<DegreeSeq> {
        &self.search
    }

    pub fn result(&self) -> Option<RhoResult> {
        self.search.result()
    }

    /// Advances by at most `applications` applications.
    pub fn run_for(&mut self, applications: u64) -> Result<Option<RhoResult>> {
        self.search
            .run(&mut self.orbit, applications, |_, _| Ok(true))
    }

    /// Runs with checkpointing and progress reporting. When the step budget
    /// runs out the final state is still checkpointed before `NotFound` is
    /// returned.
    pub fn run(&mut self, opts: &SearchOptions, progress: Option<&Progress>) -> Result<RhoResult> {
        self.run_observed(opts, progress, |_| true)
    }

    /// Like [`run`](Self::run), with a hook that can halt the search (after
    /// a checkpoint) by returning `false`.
    pub fn run_observed(
        &mut self,
        opts: &SearchOptions,
        progress: Option<&Progress>,
        mut keep_going: impl FnMut(&Search<DegreeSeq>) -> bool,
    ) -> Result<RhoResult> {
        let term = self.term.clone();
        let base = self.orbit.base().clone();
        let mut last_save = Instant::now();
        let mut last_save_steps = 0u64;
        let mut halted = false;
        let checkpoint = opts.checkpoint.as_ref();
        let snapshot = |s: &Search<DegreeSeq>| SearchState {
            term: term.clone(),
            base: base.clone(),
            algorithm: s.algorithm,
            phase: s.phase,
            step: s.step,
            m: s.m,
            candidate_c: s.candidate_c,
            slow: s.slow.clone(),
            fast: s.fast.clone(),
        };
        let outcome = self
            .search
            .run(&mut self.orbit, opts.max_steps, |s, spent| {
                if let Some(p) = progress {
                    p.record(s, spent);
                }
                let go_on = keep_going(s);
                if let Some(cp) = checkpoint {
                    let due = spent - last_save_steps >= cp.every_steps
                        || last_save.elapsed() >= cp.every
                        || !go_on
                        || s.phase() == 3;
                    if due {
                        snapshot(s).save(&cp.path)?;
                        last_save = Instant::now();
                        last_save_steps = spent;
                    }
                }
                halted = !go_on;
                Ok(go_on)
            })?;
        match outcome {
            Some(r) => Ok(r),
            None => {
                if let (Some(cp), false) = (checkpoint, halted) {
                    self.state().save(&cp.path)?;
                }
                Err(Error::NotFound(opts.max_steps))
            }
        }
    }
}

/// ρ-property of `x` with the canonical engine.
pub fn find_rho(x: &BTerm, opts: &SearchOptions) -> Result<RhoResult> {
    CanonicalSearch::new(x, opts.algorithm)?.run(opts, None)
}

/// Continues the search persisted at `path`. The algorithm recorded in the
/// checkpoint wins over `opts.algorithm`.
pub fn resume_rho(path: &Path, opts: &SearchOptions) -> Result<RhoResult> {
    CanonicalSearch::from_state(SearchState::load(path)?).run(opts, None)
}
