//! Right application computed directly on canonical forms.
//!
//! For decreasing polynomials `P1`, `P2` the canonical form of `P1 P2` is
//! obtained without building any term:
//!
//! 1. raise every degree of `P2` by one (this is `B P2`);
//! 2. insert the units of the raised `P2` into `P1` one by one, each moving
//!    left past smaller degrees via `(B^m B)∘(B^n B) = (B^(n+1) B)∘(B^m B)`;
//! 3. drop the trailing degree-0 units and lower every remaining degree.
//!
//! Everything works on runs: a unit sweeping past a run of `r` smaller
//! degrees gains `r` at once, and a run of equal units of `P2` lands as one
//! run.

use crate::canonical::{DegreeSeq, Run};
use crate::error::{Error, Result};

/// Canonical form of `B P`.
pub fn raise(s: &DegreeSeq) -> Result<DegreeSeq> {
    let runs = s
        .runs
        .iter()
        .map(|r| {
            Ok(Run {
                degree: r.degree.checked_add(1).ok_or(Error::Overflow)?,
                count: r.count,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DegreeSeq { runs })
}

/// Inverse of [`raise`] on sequences whose lowest degree is positive.
pub fn lower(s: &DegreeSeq) -> Result<DegreeSeq> {
    if s.min_degree() == 0 {
        return Err(Error::InvalidSeq(format!(
            "cannot lower {s}: it has degree 0"
        )));
    }
    let runs = s
        .runs
        .iter()
        .map(|r| Run {
            degree: r.degree - 1,
            count: r.count,
        })
        .collect();
    Ok(DegreeSeq { runs })
}

/// Inserts `count` units of degree `degree` at the right end of `runs`.
fn insert_run(runs: &mut Vec<Run>, degree: u64, count: u64) -> Result<()> {
    let mut idx = runs.len();
    let mut d = degree;
    while idx > 0 && runs[idx - 1].degree < d {
        d = d.checked_add(runs[idx - 1].count).ok_or(Error::Overflow)?;
        idx -= 1;
    }
    if idx > 0 && runs[idx - 1].degree == d {
        let r = &mut runs[idx - 1];
        r.count = r.count.checked_add(count).ok_or(Error::Overflow)?;
    } else {
        runs.insert(idx, Run { degree: d, count });
    }
    Ok(())
}

/// Decreasing form of `s1 ∘ s2`.
pub fn compose_decreasing(s1: &DegreeSeq, s2: &DegreeSeq) -> Result<DegreeSeq> {
    let mut runs = s1.runs.clone();
    for r in &s2.runs {
        insert_run(&mut runs, r.degree, r.count)?;
    }
    Ok(DegreeSeq { runs })
}

fn strip_and_lower_runs(runs: &mut Vec<Run>) -> Result<()> {
    if runs.last().is_some_and(|r| r.degree == 0) {
        runs.pop();
    }
    if runs.is_empty() {
        return Err(Error::AllZero);
    }
    for r in runs.iter_mut() {
        r.degree -= 1;
    }
    Ok(())
}

/// Drops trailing zero degrees, then lowers every remaining degree by one.
pub fn strip_and_lower(s: &DegreeSeq) -> Result<DegreeSeq> {
    let mut runs = s.runs.clone();
    strip_and_lower_runs(&mut runs)?;
    Ok(DegreeSeq { runs })
}

/// Canonical form of the application `P1 P2`.
pub fn apply_poly(s1: &DegreeSeq, s2: &DegreeSeq) -> Result<DegreeSeq> {
    let mut out = s1.clone();
    apply_assign(&mut out, s2)?;
    Ok(out)
}

/// `*s = apply_poly(s, arg)` without reallocating.
pub fn apply_assign(s: &mut DegreeSeq, arg: &DegreeSeq) -> Result<()> {
    for r in &arg.runs {
        let raised = r.degree.checked_add(1).ok_or(Error::Overflow)?;
        insert_run(&mut s.runs, raised, r.count)?;
    }
    // raise(arg) has no zero degree, so a positive degree is always present
    strip_and_lower_runs(&mut s.runs)
}
