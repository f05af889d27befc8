//! Decreasing polynomials: the canonical form of B-terms.
//!
//! A polynomial `(B^n1 B) ∘ (B^n2 B) ∘ … ∘ (B^nk B)` is stored as its degree
//! list `[n1, …, nk]`; it is canonical when the list is weakly decreasing.
//! [`canonicalize`] derives the canonical form with the equations
//!
//! ```text
//! (B1)  B x y z       = x (y z)
//! (B2') B (e1 ∘ e2)   = (B e1) ∘ (B e2)
//! (B3') B ∘ (B e)     = (B (B e)) ∘ B
//! (4)   (B^m B) ∘ (B^n B) = (B^(n+1) B) ∘ (B^m B)      when m < n
//! ```
//!
//! and [`nodes`] / [`tree_of`] relate degree lists to the binary trees of
//! βη-normal forms.

use std::fmt;
use std::str::FromStr;

use crate::bterm::{self, BTerm};
use crate::error::{Error, Result};
use crate::lambda::BinTree;

/// A maximal block of equal degrees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Run {
    pub degree: u64,
    pub count: u64,
}

/// A non-empty weakly decreasing degree list, run-length encoded with
/// strictly decreasing degrees.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DegreeSeq {
    pub(crate) runs: Vec<Run>,
}

impl DegreeSeq {
    /// `B^n B`.
    pub fn monomial(n: u64) -> Self {
        DegreeSeq {
            runs: vec![Run {
                degree: n,
                count: 1,
            }],
        }
    }

    pub fn from_degrees(degrees: &[u64]) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::InvalidSeq("empty".into()));
        }
        let mut runs: Vec<Run> = Vec::new();
        for &d in degrees {
            match runs.last_mut() {
                Some(r) if r.degree == d => r.count += 1,
                Some(r) if r.degree < d => {
                    return Err(Error::InvalidSeq(format!("{} followed by {d}", r.degree)))
                }
                _ => runs.push(Run {
                    degree: d,
                    count: 1,
                }),
            }
        }
        Ok(DegreeSeq { runs })
    }

    pub fn from_runs(runs: Vec<Run>) -> Result<Self> {
        if runs.is_empty() {
            return Err(Error::InvalidSeq("empty".into()));
        }
        for w in runs.windows(2) {
            if w[0].degree <= w[1].degree {
                return Err(Error::InvalidSeq(format!(
                    "run degrees {} then {} are not strictly decreasing",
                    w[0].degree, w[1].degree
                )));
            }
        }
        if runs.iter().any(|r| r.count == 0) {
            return Err(Error::InvalidSeq("run with multiplicity 0".into()));
        }
        Ok(DegreeSeq { runs })
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    /// Number of units `B^n B`, counting multiplicity.
    pub fn len(&self) -> u64 {
        self.runs.iter().map(|r| r.count).sum()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Degrees in expanded form, highest first.
    pub fn degrees(&self) -> impl Iterator<Item = u64> + '_ {
        self.runs
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.degree, r.count as usize))
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.degrees().collect()
    }

    pub fn max_degree(&self) -> u64 {
        self.runs[0].degree
    }

    pub fn min_degree(&self) -> u64 {
        self.runs[self.runs.len() - 1].degree
    }

    /// `degree*count,…`, the checkpoint format.
    pub fn to_rle_string(&self) -> String {
        let parts: Vec<String> = self
            .runs
            .iter()
            .map(|r| format!("{}*{}", r.degree, r.count))
            .collect();
        parts.join(",")
    }

    pub fn parse_rle(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidSeq(format!("{msg}: {s:?}"));
        let mut runs = Vec::new();
        for part in s.trim().split(',') {
            let (d, c) = part
                .trim()
                .split_once('*')
                .ok_or_else(|| bad("expected degree*count"))?;
            let degree = d.trim().parse().map_err(|_| bad("bad degree"))?;
            let count = c.trim().parse().map_err(|_| bad("bad multiplicity"))?;
            runs.push(Run { degree, count });
        }
        DegreeSeq::from_runs(runs)
    }

    /// Parses the expanded `[5,2,2,2,0]` form.
    pub fn parse_expanded(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::InvalidSeq(format!("expected [..]: {s:?}")))?;
        let degrees = inner
            .split(',')
            .map(|p| p.trim().parse::<u64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::InvalidSeq(format!("bad degree list: {s:?}")))?;
        DegreeSeq::from_degrees(&degrees)
    }
}

impl fmt::Display for DegreeSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        let mut first = true;
        for d in self.degrees() {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{d}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for DegreeSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DegreeSeq({})", self.to_rle_string())
    }
}

impl FromStr for DegreeSeq {
    type Err = Error;

    /// Accepts either the expanded or the run-length form.
    fn from_str(s: &str) -> Result<Self> {
        if s.trim_start().starts_with('[') {
            DegreeSeq::parse_expanded(s)
        } else {
            DegreeSeq::parse_rle(s)
        }
    }
}

/// B-terms in which every `B` has at most two arguments, with the
/// two-argument `B` read as `∘`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompTerm {
    B,
    /// `B e`
    Raise(Box<CompTerm>),
    /// `e1 ∘ e2`
    Compose(Box<CompTerm>, Box<CompTerm>),
}

/// Rewrites `B e1 e2 e3 … en` to `e1 (e2 e3) … en` until no `B` has more
/// than two arguments, then reads the result in the `∘` syntax.
pub fn reduce_arity(e: &BTerm) -> CompTerm {
    let mut args: Vec<BTerm> = e.spine().into_iter().cloned().collect();
    while args.len() >= 3 {
        let mut rest = args.split_off(3);
        let e3 = args.pop().unwrap_or(BTerm::B);
        let e2 = args.pop().unwrap_or(BTerm::B);
        let e1 = args.pop().unwrap_or(BTerm::B);
        let mut next: Vec<BTerm> = e1.spine().into_iter().cloned().collect();
        next.push(BTerm::app(e2, e3));
        next.append(&mut rest);
        args = next;
    }
    let mut it = args.iter();
    match (it.next(), it.next()) {
        (None, _) => CompTerm::B,
        (Some(a), None) => CompTerm::Raise(Box::new(reduce_arity(a))),
        (Some(a), Some(b)) => {
            CompTerm::Compose(Box::new(reduce_arity(a)), Box::new(reduce_arity(b)))
        }
    }
}

/// Distributes `B` over `∘`, producing the (unsorted) polynomial degrees.
pub fn distribute(c: &CompTerm) -> Result<Vec<u64>> {
    match c {
        CompTerm::B => Ok(vec![0]),
        CompTerm::Raise(inner) => distribute(inner)?
            .into_iter()
            .map(|d| d.checked_add(1).ok_or(Error::Overflow))
            .collect(),
        CompTerm::Compose(a, b) => {
            let mut out = distribute(a)?;
            out.extend(distribute(b)?);
            Ok(out)
        }
    }
}

/// `(B^m B) ∘ (B^n B) = (B^(n+1) B) ∘ (B^m B)` for `m < n`.
///
/// # Panics
///
/// Panics unless `m < n`.
pub fn apply_swap(m: u64, n: u64) -> (u64, u64) {
    assert!(m < n, "swap needs m < n, got m={m} n={n}");
    (n.checked_add(1).expect("degree overflow in swap"), m)
}

/// Insertion sort driven by the swap equation: each unit is moved left past
/// every smaller neighbour, gaining one degree per swap.
pub fn sort_polynomial(raw: &[u64]) -> Result<DegreeSeq> {
    let mut sorted: Vec<u64> = Vec::with_capacity(raw.len());
    for &unit in raw {
        sorted.push(unit);
        let mut i = sorted.len() - 1;
        while i > 0 && sorted[i - 1] < sorted[i] {
            if sorted[i] == u64::MAX {
                return Err(Error::Overflow);
            }
            let (hi, lo) = apply_swap(sorted[i - 1], sorted[i]);
            sorted[i - 1] = hi;
            sorted[i] = lo;
            i -= 1;
        }
    }
    DegreeSeq::from_degrees(&sorted)
}

/// The unique decreasing polynomial βη-equal to `e`.
pub fn canonicalize(e: &BTerm) -> DegreeSeq {
    try_canonicalize(e).expect("degree overflow while canonicalizing")
}

pub fn try_canonicalize(e: &BTerm) -> Result<DegreeSeq> {
    sort_polynomial(&distribute(&reduce_arity(e))?)
}

pub fn equivalent_bterms(e1: &BTerm, e2: &BTerm) -> bool {
    canonicalize(e1) == canonicalize(e2)
}

pub fn is_monomial(s: &DegreeSeq) -> bool {
    s.len() == 1
}

/// `(B^n1 B) ∘ … ∘ (B^nk B)` with `∘` spelled out as a right-nested `B _ _`.
pub fn seq_to_bterm(s: &DegreeSeq) -> BTerm {
    let units: Vec<BTerm> = s.degrees().map(bterm::monomial).collect();
    let mut it = units.into_iter().rev();
    let last = it.next().unwrap_or(BTerm::B);
    it.fold(last, |acc, unit| BTerm::compose(unit, acc))
}

/// `nodes_i`: label leaves `i, i+1, …` from the left, label every inner node
/// with its leftmost leaf, and list the node labels right subtree first.
pub fn nodes_from(t: &BinTree, start: i64) -> Vec<i64> {
    fn go(t: &BinTree, i: i64) -> (Vec<i64>, i64) {
        match t {
            BinTree::Leaf => (Vec::new(), 1),
            BinTree::Node(l, r) => {
                let (left, left_size) = go(l, i);
                let (mut out, right_size) = go(r, i + left_size);
                out.extend(left);
                out.push(i);
                (out, left_size + right_size)
            }
        }
    }
    go(t, start).0
}

/// The degree list of the decreasing polynomial for the B-form with tree
/// `t`: `nodes_{-1}(t)` without its trailing `-1` labels. Empty for the
/// identity-like trees, which no B-term reaches.
pub fn nodes(t: &BinTree) -> Vec<u64> {
    nodes_from(t, -1)
        .into_iter()
        .filter(|&d| d >= 0)
        .map(|d| d as u64)
        .collect()
}

/// Like [`nodes`], as a [`DegreeSeq`].
pub fn nodes_seq(t: &BinTree) -> Result<DegreeSeq> {
    let ds = nodes(t);
    if ds.is_empty() {
        return Err(Error::NotBFormShape(format!("tree {t} has no polynomial")));
    }
    DegreeSeq::from_degrees(&ds)
}

/// The η-short tree `t` with `nodes(t) = s`.
///
/// Starts from the tree of `B^n1 B` and composes one unit at a time. The
/// tree is kept as the component list of its left spine: leading leaves
/// `x1 … x_(nk+1)` followed by non-leaf argument `t1` and arguments
/// `t2 … tm`.
pub fn tree_of(s: &DegreeSeq) -> BinTree {
    let mut degrees = s.degrees();
    let first = degrees.next().unwrap_or(0) as usize;
    // Stored reversed so the spine prefix is at the end of the vector.
    let mut rev: Vec<BinTree> = vec![BinTree::node(BinTree::Leaf, BinTree::Leaf)];
    rev.extend(std::iter::repeat_n(BinTree::Leaf, first + 1));
    let mut last = first;
    for n in degrees {
        let n = n as usize;
        debug_assert!(n <= last);
        let mut lead = 0;
        while rev.last().is_some_and(BinTree::is_leaf) {
            rev.pop();
            lead += 1;
        }
        debug_assert_eq!(lead, last + 1);
        let nk = lead - 1;
        // rev now ends with t1, then t2, … (rev is t_m … t_1)
        let t1 = rev.pop().unwrap_or(BinTree::Leaf);
        if nk == n {
            if rev.is_empty() {
                rev.push(BinTree::node(t1, BinTree::Leaf));
            } else {
                let t2 = rev.pop().unwrap_or(BinTree::Leaf);
                rev.push(BinTree::node(t1, t2));
            }
        } else if nk == n + 1 {
            rev.push(BinTree::node(BinTree::Leaf, t1));
        } else {
            rev.push(t1);
            rev.extend(std::iter::repeat_n(BinTree::Leaf, nk - n - 2));
            rev.push(BinTree::node(BinTree::Leaf, BinTree::Leaf));
        }
        rev.extend(std::iter::repeat_n(BinTree::Leaf, n + 1));
        last = n;
    }
    let mut it = rev.into_iter().rev();
    let head = it.next().unwrap_or(BinTree::Leaf);
    BinTree::comb(head, it)
}

/// Single rewrite steps of the equational system, each applied once at the
/// leftmost-outermost position where it matches.
pub mod rewrite {
    use crate::bterm::BTerm;

    fn first_match(e: &BTerm, rule: &dyn Fn(&BTerm) -> Option<BTerm>) -> Option<BTerm> {
        if let Some(r) = rule(e) {
            return Some(r);
        }
        match e {
            BTerm::B => None,
            BTerm::App(f, a) => {
                if let Some(f2) = first_match(f, rule) {
                    return Some(BTerm::app(f2, (**a).clone()));
                }
                first_match(a, rule).map(|a2| BTerm::app((**f).clone(), a2))
            }
        }
    }

    fn as_app(e: &BTerm) -> Option<(&BTerm, &BTerm)> {
        match e {
            BTerm::App(f, a) => Some((f, a)),
            BTerm::B => None,
        }
    }

    /// `B x` → `Some(x)`.
    fn un_b(e: &BTerm) -> Option<&BTerm> {
        as_app(e).filter(|(f, _)| **f == BTerm::B).map(|(_, a)| a)
    }

    /// `B x y` → `Some((x, y))`.
    fn un_compose(e: &BTerm) -> Option<(&BTerm, &BTerm)> {
        let (f, y) = as_app(e)?;
        Some((un_b(f)?, y))
    }

    /// (B1) `B x y z → x (y z)`.
    pub fn b1(e: &BTerm) -> Option<BTerm> {
        first_match(e, &|t| {
            let (f, z) = as_app(t)?;
            let (x, y) = un_compose(f)?;
            Some(BTerm::app(x.clone(), BTerm::app(y.clone(), z.clone())))
        })
    }

    /// (B2') `B (x ∘ y) → (B x) ∘ (B y)`.
    pub fn b2(e: &BTerm) -> Option<BTerm> {
        first_match(e, &|t| {
            let (x, y) = un_compose(un_b(t)?)?;
            Some(BTerm::compose(
                BTerm::app(BTerm::B, x.clone()),
                BTerm::app(BTerm::B, y.clone()),
            ))
        })
    }

    /// (B3') `B ∘ (B x) → (B (B x)) ∘ B`.
    pub fn b3(e: &BTerm) -> Option<BTerm> {
        first_match(e, &|t| {
            let (l, r) = un_compose(t)?;
            if *l != BTerm::B {
                return None;
            }
            let x = un_b(r)?;
            Some(BTerm::compose(
                BTerm::app(BTerm::B, BTerm::app(BTerm::B, x.clone())),
                BTerm::B,
            ))
        })
    }

    /// (4) `(B^m B) ∘ (B^n B) → (B^(n+1) B) ∘ (B^m B)` when `m < n`.
    pub fn swap(e: &BTerm) -> Option<BTerm> {
        first_match(e, &|t| {
            let (l, r) = un_compose(t)?;
            let m = l.monomial_degree()?;
            let n = r.monomial_degree()?;
            (m < n)
                .then(|| BTerm::compose(crate::bterm::monomial(n + 1), crate::bterm::monomial(m)))
        })
    }
}
