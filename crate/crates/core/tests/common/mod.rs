#![allow(dead_code)]

use std::collections::HashMap;

use brho_core::bterm::{self, BTerm};
use brho_core::canonical::DegreeSeq;
use brho_core::lambda::{bterm_to_lambda, normalize, LambdaTerm};
use rand::Rng;

/// βη-normal form through the λ-calculus, independent of the canonical path.
pub fn oracle_nf(e: &BTerm) -> LambdaTerm {
    normalize(&bterm_to_lambda(e)).expect("B-terms normalize")
}

/// Uniformly split random binary shape with `leaves` leaves.
pub fn random_bterm(rng: &mut impl Rng, leaves: usize) -> BTerm {
    if leaves <= 1 {
        return BTerm::B;
    }
    let left = rng.gen_range(1..leaves);
    BTerm::app(random_bterm(rng, left), random_bterm(rng, leaves - left))
}

/// All B-terms with 1..=max leaves.
pub fn all_up_to(max: usize) -> Vec<BTerm> {
    (1..=max).flat_map(bterm::all_with_leaves).collect()
}

/// Every weakly decreasing list with 1..=max_len entries from 0..=max_degree.
pub fn all_seqs(max_len: usize, max_degree: u64) -> Vec<DegreeSeq> {
    fn go(prefix: &mut Vec<u64>, max_len: usize, top: u64, out: &mut Vec<DegreeSeq>) {
        if !prefix.is_empty() {
            out.push(DegreeSeq::from_degrees(prefix).unwrap());
        }
        if prefix.len() == max_len {
            return;
        }
        for d in 0..=top {
            prefix.push(d);
            go(prefix, max_len, d, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), max_len, max_degree, &mut out);
    out
}

/// ρ by storing every iterate: the first index whose value was seen before.
pub fn rho_by_history<S: std::hash::Hash + Eq + Clone>(
    first: S,
    mut step: impl FnMut(&S) -> S,
    limit: u64,
) -> Option<(u64, u64)> {
    let mut seen: HashMap<S, u64> = HashMap::new();
    let mut cur = first;
    for i in 1..=limit {
        if let Some(&j) = seen.get(&cur) {
            return Some((j, i - j));
        }
        seen.insert(cur.clone(), i);
        cur = step(&cur);
    }
    None
}
