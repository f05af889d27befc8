//! Operational checks of the anti-ρ argument for `Z = (B^k B)^((k+2)n)`.
//!
//! B-terms are identified with the binary trees of their B-form normal forms
//! `λx1…λxl. x1 e1 … ea`. On a tree, `l` is the leaf count, `a` the number
//! of arguments on the left spine and `N1` the first of them. Along the
//! orbit of `Z`:
//!
//! ```text
//! l(Z_(i+1)) = l(Z_(i)) + (k+2)n + k + 1 − a(Z_(i))
//! a(Z_(i+1)) = a(N1(Z_(i))) + k + 1
//! N1(Z_(i+1)) = N2(Z_(i))      if N1(Z_(i)) is a variable
//!             = N1(N1(Z_(i)))  otherwise
//! ```
//!
//! and every iterate lies in `T_(k,n)`, which bounds `a` and makes `l`
//! non-decreasing. The checks here run those claims on finite orbit
//! prefixes. They are evidence, not proofs.
//!
//! Iterates are computed with [`apply_assign`] and turned into trees with
//! [`tree_of`]; the λ-oracle path ([`orbit_stats_oracle`]) is there to
//! cross-check small cases.

use std::collections::HashMap;
use std::fmt;

use crate::bterm::BTerm;
use crate::canonical::{seq_to_bterm, tree_of, try_canonicalize, DegreeSeq, Run};
use crate::error::Result;
use crate::fast_apply::apply_assign;
use crate::lambda::{bterm_to_lambda, term_stats, BinTree, LambdaTerm};

/// Parameters of `Z = (B^k B)^((k+2)n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TknSpec {
    pub k: u64,
    pub n: u64,
}

impl TknSpec {
    pub fn new(k: u64, n: u64) -> Self {
        assert!(n >= 1, "n must be positive");
        TknSpec { k, n }
    }

    /// Arguments of a non-leaf `T'` element: `(k+2)n`.
    pub fn width(&self) -> u64 {
        (self.k + 2) * self.n
    }

    pub fn z_seq(&self) -> DegreeSeq {
        DegreeSeq::from_runs(vec![Run {
            degree: self.k,
            count: self.width(),
        }])
        .expect("single run is valid")
    }

    pub fn z(&self) -> BTerm {
        seq_to_bterm(&self.z_seq())
    }

    /// `l(Z) = k + (k+2)n + 2`.
    pub fn l_z(&self) -> u64 {
        self.k + self.width() + 2
    }

    /// Window for the "increases again" check: `2(k+2)n + 2k + 4 = 2 l(Z)`.
    pub fn window(&self) -> usize {
        (2 * self.l_z()) as usize
    }
}

/// Head statistics of a tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeadStats {
    pub l: u64,
    pub a: u64,
    pub n1: Option<BinTree>,
}

pub fn tree_stats(t: &BinTree) -> HeadStats {
    let args = t.spine();
    HeadStats {
        l: t.leaves() as u64,
        a: args.len() as u64,
        n1: args.into_iter().next(),
    }
}

fn arity(t: &BinTree) -> u64 {
    let mut a = 0;
    let mut t = t;
    while let BinTree::Node(l, _) = t {
        a += 1;
        t = l;
    }
    a
}

/// `T'_(k,n)`: a leaf, or `⟨x, s1, …, s_((k+2)n)⟩` where `s_i` is a leaf
/// when `k+2` divides `i` and in `T'` otherwise.
pub fn in_tprime(t: &BinTree, spec: TknSpec) -> bool {
    if t.is_leaf() {
        return true;
    }
    let args = t.spine();
    if args.len() as u64 != spec.width() {
        return false;
    }
    args.iter().enumerate().all(|(idx, s)| {
        if (idx as u64 + 1).is_multiple_of(spec.k + 2) {
            s.is_leaf()
        } else {
            in_tprime(s, spec)
        }
    })
}

/// `T_(k,n) = { ⟨t0, t1, …, t_(k+1)⟩ | every t_i ∈ T'_(k,n) }`.
pub fn in_tkn(t: &BinTree, spec: TknSpec) -> bool {
    match t.peel(spec.k as usize + 1) {
        Some((t0, rest)) => in_tprime(&t0, spec) && rest.iter().all(|s| in_tprime(s, spec)),
        None => false,
    }
}

/// `T'` for the worked example `(B²B)²∘(BB)²∘B²`: `x`, `⟨x, t, x⟩` and
/// `⟨x, t1, x, ⟨x, t2, x⟩, x⟩` with `t, t1, t2 ∈ T'`.
pub fn in_example_tprime(t: &BinTree) -> bool {
    if t.is_leaf() {
        return true;
    }
    let args = t.spine();
    match args.as_slice() {
        [s, x] => x.is_leaf() && in_example_tprime(s),
        [s1, x1, inner, x2] => {
            x1.is_leaf() && x2.is_leaf() && in_example_tprime(s1) && is_example_wrap(inner)
        }
        _ => false,
    }
}

// ⟨x, t, x⟩ with t ∈ T'.
fn is_example_wrap(t: &BinTree) -> bool {
    matches!(t.spine().as_slice(), [s, x] if x.is_leaf() && in_example_tprime(s))
}

/// `T = { ⟨t1, ⟨x, t2, x⟩⟩ | t1, t2 ∈ T' }` for the worked example.
pub fn in_example_t(t: &BinTree) -> bool {
    match t.peel(1) {
        Some((t1, rest)) => in_example_tprime(&t1) && is_example_wrap(&rest[0]),
        None => false,
    }
}

/// The worked example `(B²B)²∘(BB)²∘B²`.
pub fn example_term() -> BTerm {
    seq_to_bterm(&DegreeSeq::from_degrees(&[2, 2, 1, 1, 0, 0]).expect("decreasing"))
}

/// Trees of `X^(1) … X^(steps)`.
pub fn orbit_trees(x: &BTerm, steps: usize) -> Result<Vec<BinTree>> {
    Ok(orbit_seqs(x, steps)?.iter().map(tree_of).collect())
}

fn orbit_seqs(x: &BTerm, steps: usize) -> Result<Vec<DegreeSeq>> {
    let base = try_canonicalize(x)?;
    let mut out = Vec::with_capacity(steps);
    let mut cur = base.clone();
    for i in 0..steps {
        if i > 0 {
            apply_assign(&mut cur, &base)?;
        }
        out.push(cur.clone());
    }
    Ok(out)
}

/// `(l, a)` of `X^(1) … X^(steps)`, read from trees.
pub fn orbit_stats(x: &BTerm, steps: usize) -> Result<Vec<(u64, u64)>> {
    Ok(orbit_trees(x, steps)?
        .iter()
        .map(|t| (t.leaves() as u64, arity(t)))
        .collect())
}

/// `(l, a)` of `X^(1) … X^(steps)` through the λ-normalizer.
pub fn orbit_stats_oracle(x: &BTerm, steps: usize) -> Result<Vec<(u64, u64)>> {
    let xl = bterm_to_lambda(x);
    let mut cur = xl.clone();
    let mut out = Vec::with_capacity(steps);
    for i in 0..steps {
        if i > 0 {
            cur = LambdaTerm::app(cur, xl.clone());
        }
        let st = term_stats(&cur)?;
        out.push((st.l as u64, st.a as u64));
        // keep the accumulated term small
        cur = crate::lambda::normalize(&cur)?;
    }
    Ok(out)
}

/// One checked claim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assertion {
    pub name: String,
    pub holds: bool,
    /// 1-based orbit index of the first violation.
    pub counterexample: Option<u64>,
    pub heuristic: bool,
    pub note: String,
}

impl Assertion {
    fn new(name: &str, counterexample: Option<u64>) -> Self {
        Assertion {
            name: name.to_string(),
            holds: counterexample.is_none(),
            counterexample,
            heuristic: false,
            note: String::new(),
        }
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    fn heuristic(mut self) -> Self {
        self.heuristic = true;
        self
    }
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {}",
            self.name,
            if self.holds { "holds" } else { "VIOLATED" }
        )?;
        if let Some(i) = self.counterexample {
            write!(f, " (first counterexample at i={i})")?;
        }
        if self.heuristic {
            f.write_str(" [heuristic]")?;
        }
        if !self.note.is_empty() {
            write!(f, " {}", self.note)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub assertions: Vec<Assertion>,
}

impl Report {
    pub fn all_hold(&self) -> bool {
        self.assertions.iter().all(|a| a.holds)
    }

    pub fn get(&self, name: &str) -> Option<&Assertion> {
        self.assertions.iter().find(|a| a.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.assertions {
            writeln!(f, "{a}")?;
        }
        Ok(())
    }
}

fn first_failure(n: usize, mut ok: impl FnMut(usize) -> bool) -> Option<u64> {
    (0..n).find(|&i| !ok(i)).map(|i| i as u64 + 1)
}

/// Monotonicity of `l` along `X^(1) … X^(steps)`: never decreasing, a
/// strict increase within every `window` steps, a strict increase before
/// the `N1` chain of the current iterate runs out, and no repeated iterate.
///
/// The fixed window is a heuristic: plateaus of `l` can grow along the
/// orbit. The `N1`-depth bound follows the argument that a plateau from
/// `X_(i)` on forces `N1(X_(j+1)) = N1(N1(X_(j)))`.
pub fn check_monotone(x: &BTerm, steps: usize, window: usize) -> Result<Report> {
    let seqs = orbit_seqs(x, steps)?;
    let trees: Vec<BinTree> = seqs.iter().map(tree_of).collect();
    let ls: Vec<u64> = trees.iter().map(|t| t.leaves() as u64).collect();

    let non_decreasing = first_failure(steps.saturating_sub(1), |i| ls[i + 1] >= ls[i]);
    let increases = first_failure(steps.saturating_sub(window), |i| {
        ls[i + 1..=i + window].iter().any(|&l| l > ls[i])
    });
    let depth_bound = first_failure(steps, |i| {
        let reach = i + n1_depth(&trees[i]) + 1;
        reach >= steps || ls[i + 1..=reach].iter().any(|&l| l > ls[i])
    });
    let mut seen = HashMap::new();
    let repeat = seqs
        .iter()
        .enumerate()
        .find_map(|(i, s)| seen.insert(s, i).map(|_| i as u64 + 1));
    Ok(Report {
        assertions: vec![
            Assertion::new("l non-decreasing", non_decreasing),
            Assertion::new("l increases within window", increases)
                .heuristic()
                .note(format!("window={window}")),
            Assertion::new("l increases within N1 depth", depth_bound),
            Assertion::new("no repeated iterate", repeat).note(format!("steps={steps}")),
        ],
    })
}

/// Number of `N1` steps from `t` down to a variable.
pub fn n1_depth(t: &BinTree) -> usize {
    let mut d = 0;
    let mut t = t.clone();
    while let Some(n1) = t.spine().into_iter().next() {
        d += 1;
        t = n1;
    }
    d
}

/// Default window for an arbitrary term: twice its leaf count.
pub fn default_window(x: &BTerm) -> Result<usize> {
    Ok(2 * tree_of(&try_canonicalize(x)?).leaves())
}

/// Checks the recurrences and bounds for `Z` over `steps` iterates.
pub fn check_recurrences(spec: TknSpec, steps: usize) -> Result<Report> {
    let z = spec.z();
    let trees = orbit_trees(&z, steps.max(1))?;
    let zt = &trees[0];
    let (lz, az) = (zt.leaves() as u64, arity(zt));
    let (k, w) = (spec.k, spec.width());
    let stats: Vec<HeadStats> = trees.iter().map(tree_stats).collect();
    let pairs = trees.len() - 1;

    let l_of_z = Assertion::new("l(Z) = k + (k+2)n + 2", (lz != spec.l_z()).then_some(1));
    let closure = first_failure(trees.len(), |i| in_tkn(&trees[i], spec));
    let a_values = first_failure(trees.len(), |i| {
        let a = stats[i].a;
        a == k + 1 || a == w + k + 1
    });
    let a_bound = first_failure(trees.len(), |i| stats[i].a < lz);
    let eq6 = first_failure(pairs, |i| {
        stats[i + 1].l + stats[i].a == stats[i].l + w + k + 1
    });
    let eq7 = first_failure(pairs, |i| {
        let a_n1 = stats[i].n1.as_ref().map_or(0, arity);
        stats[i + 1].a == a_n1 + k + 1
    });
    // N1(Z_(i+1)) = N2(Z_(i)) when N1(Z_(i)) is a variable,
    // N1(N1(Z_(i))) otherwise; the two branches are reported apart.
    let n1_next = |i: usize, want_variable: bool| {
        let args = trees[i].spine();
        match args.first() {
            Some(n1) if n1.is_leaf() != want_variable => true,
            Some(n1) if n1.is_leaf() => args.get(1).cloned() == stats[i + 1].n1,
            Some(n1) => n1.spine().into_iter().next() == stats[i + 1].n1,
            None => true,
        }
    };
    let eq8_var = first_failure(pairs, |i| n1_next(i, true));
    let eq8_compound = first_failure(pairs, |i| n1_next(i, false));
    let lemma_l = first_failure(pairs, |i| {
        let (l, a) = (stats[i].l, stats[i].a);
        stats[i + 1].l + 1 == l + lz.saturating_sub(a)
    });
    let lemma_a = first_failure(pairs, |i| {
        let a_n1 = stats[i].n1.as_ref().map_or(0, arity);
        stats[i + 1].a == az + a_n1 + stats[i].a.saturating_sub(lz)
    });

    Ok(Report {
        assertions: vec![
            l_of_z,
            Assertion::new("iterates in T_(k,n)", closure),
            Assertion::new("a in {k+1, (k+2)n+k+1}", a_values),
            Assertion::new("a <= l(Z) - 1", a_bound),
            Assertion::new("l recurrence", eq6),
            Assertion::new("a recurrence", eq7),
            Assertion::new("N1 recurrence, N1 a variable", eq8_var),
            Assertion::new("N1 recurrence, N1 compound", eq8_compound),
            Assertion::new("general l formula", lemma_l),
            Assertion::new("general a formula", lemma_a),
        ],
    })
}

/// General sufficient condition: every iterate satisfies `member` and
/// `l(X) ≥ a(X') + 1` for every observed iterate `X'`.
pub fn check_general_condition(
    x: &BTerm,
    member: impl Fn(&BinTree) -> bool,
    steps: usize,
) -> Result<Report> {
    let trees = orbit_trees(x, steps.max(1))?;
    let lx = trees[0].leaves() as u64;
    let membership = first_failure(trees.len(), |i| member(&trees[i]));
    let bound = first_failure(trees.len(), |i| lx > arity(&trees[i]));
    let hypothesis = membership.into_iter().chain(bound).min();
    Ok(Report {
        assertions: vec![
            Assertion::new("iterates in T", membership),
            Assertion::new("l(X) >= a(X') + 1", bound).note(format!("l(X)={lx}")),
            Assertion::new("hypothesis on sample", hypothesis)
                .note(format!("steps={}", trees.len())),
        ],
    })
}

/// Checks `l(X X')`, `a(X X')` and `N1(X X')` against the general lemma for
/// one pair of B-terms. Returns the names of the formulas that fail.
pub fn lemma_discrepancies(x: &BTerm, x2: &BTerm) -> Result<Vec<&'static str>> {
    let s1 = try_canonicalize(x)?;
    let s2 = try_canonicalize(x2)?;
    let t1 = tree_of(&s1);
    let t2 = tree_of(&s2);
    let mut prod = s1.clone();
    apply_assign(&mut prod, &s2)?;
    let t12 = tree_of(&prod);
    let (h1, h2, h12) = (tree_stats(&t1), tree_stats(&t2), tree_stats(&t12));
    let a_n1 = h1.n1.as_ref().map_or(0, arity);
    let mut bad = Vec::new();
    if h12.l + 1 != h1.l + h2.l.saturating_sub(h1.a) {
        bad.push("l");
    }
    if h12.a != h2.a + a_n1 + h1.a.saturating_sub(h2.l) {
        bad.push("a");
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree(s: &str) -> BinTree {
        s.parse().unwrap()
    }

    #[test]
    fn tprime_examples() {
        let s = TknSpec::new(0, 1);
        assert!(in_tprime(&BinTree::Leaf, s));
        assert!(in_tprime(&tree("<x,x,x>"), s));
        assert!(!in_tprime(&tree("<x,<x,x>>"), s));
        // position 2 must be a leaf
        assert!(!in_tprime(&tree("<x,x,<x,x,x>>"), s));
        assert!(in_tprime(&tree("<x,<x,x,x>,x>"), s));
    }

    #[test]
    fn tkn_examples() {
        assert!(!in_tkn(&BinTree::Leaf, TknSpec::new(0, 1)));
        for k in 0..=2 {
            for n in 1..=2 {
                let spec = TknSpec::new(k, n);
                let t = tree_of(&spec.z_seq());
                assert!(in_tkn(&t, spec), "{spec:?}: {t}");
                assert_eq!(t.leaves() as u64, spec.l_z());
            }
        }
    }

    #[test]
    fn z_tree_shape() {
        // λx1…x4. x1 (x2 x3 x4)
        assert_eq!(tree_of(&TknSpec::new(0, 1).z_seq()), tree("<x,<x,x,x>>"));
    }

    #[test]
    fn example_tree_and_sets() {
        let t = tree_of(&try_canonicalize(&example_term()).unwrap());
        assert_eq!(t, tree("<x,<x,<x,<x,x,x>,x>,x>>"));
        assert!(in_example_t(&t));
        assert!(!in_example_t(&tree("<x,x,x>")));
        assert!(in_example_tprime(&tree("<x,<x,x,x>,x,<x,x,x>,x>")));
        assert!(!in_example_tprime(&tree("<x,<x,x,x>,x,<x,x>,x>")));
    }

    #[test]
    fn z_orbit_first_values() {
        let stats = orbit_stats(&TknSpec::new(0, 1).z(), 3).unwrap();
        assert_eq!(stats[0], (4, 1));
    }

    #[test]
    fn tree_and_oracle_stats_agree() {
        for x in [
            TknSpec::new(0, 1).z(),
            TknSpec::new(1, 1).z(),
            example_term(),
        ] {
            assert_eq!(
                orbit_stats(&x, 12).unwrap(),
                orbit_stats_oracle(&x, 12).unwrap(),
                "{x}"
            );
        }
    }

    #[test]
    fn recurrences_hold_for_small_parameters() {
        for k in 0..=2 {
            for n in 1..=2 {
                let report = check_recurrences(TknSpec::new(k, n), 60).unwrap();
                for a in &report.assertions {
                    // for k = 0, N1(Z) is compound and the variable branch
                    // does not give N2 exactly
                    let expect = !(k == 0 && a.name == "N1 recurrence, N1 a variable");
                    assert_eq!(a.holds, expect, "k={k} n={n}\n{report}");
                }
            }
        }
    }

    #[test]
    fn monotone_for_z_and_example() {
        let spec = TknSpec::new(0, 1);
        let r = check_monotone(&spec.z(), 200, spec.window()).unwrap();
        for name in [
            "l non-decreasing",
            "l increases within N1 depth",
            "no repeated iterate",
        ] {
            assert!(r.get(name).unwrap().holds, "{r}");
        }
        // plateaus of l grow: lengths 1, 2, 3, … for k = 0, n = 1
        assert_eq!(
            r.get("l increases within window").unwrap().counterexample,
            Some(37)
        );
        let x = example_term();
        let r = check_monotone(&x, 100, default_window(&x).unwrap()).unwrap();
        assert!(r.all_hold(), "{r}");
    }

    #[test]
    fn general_condition() {
        let spec = TknSpec::new(1, 1);
        let r = check_general_condition(&spec.z(), |t| in_tkn(t, spec), 80).unwrap();
        assert!(r.all_hold(), "{r}");
        let r = check_general_condition(&example_term(), in_example_t, 80).unwrap();
        assert!(r.all_hold(), "{r}");
        let r = check_general_condition(&BTerm::B, |_| true, 20).unwrap();
        assert!(!r.all_hold());
        assert!(r.get("l(X) >= a(X') + 1").unwrap().counterexample.is_some());
    }

    #[test]
    fn b_orbit_repeats() {
        let r = check_monotone(&BTerm::B, 20, 6).unwrap();
        assert_eq!(
            r.get("no repeated iterate").unwrap().counterexample,
            Some(10)
        );
    }

    #[test]
    fn report_lines() {
        let r = check_monotone(&BTerm::B, 20, 6).unwrap();
        let text = r.to_string();
        assert_eq!(text.lines().count(), 4);
        assert!(text.contains("no repeated iterate: VIOLATED (first counterexample at i=10)"));
    }
}
