//! The λ-calculus oracle.
//!
//! Terms use de Bruijn indices, so α-equivalent terms are structurally equal.
//! [`normalize`] reduces in normal order (leftmost-outermost β until no redex
//! is left), then η-contracts bottom-up. It is deliberately naive: every fast
//! path in the crate is tested against it.

use std::fmt;
use std::rc::Rc;

use crate::bterm::BTerm;
use crate::cycle::{self, Algorithm, RhoResult, Stepper};
use crate::error::{Error, Result};

/// Default β-step budget for one normalization.
pub const DEFAULT_STEP_BUDGET: u64 = 10_000_000;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum LambdaTerm {
    Var(usize),
    Abs(Box<LambdaTerm>),
    App(Box<LambdaTerm>, Box<LambdaTerm>),
}

use LambdaTerm::{Abs, App, Var};

impl LambdaTerm {
    pub fn var(i: usize) -> Self {
        Var(i)
    }

    pub fn abs(body: LambdaTerm) -> Self {
        Abs(Box::new(body))
    }

    pub fn app(f: LambdaTerm, a: LambdaTerm) -> Self {
        App(Box::new(f), Box::new(a))
    }

    /// `n` nested binders around `body`.
    pub fn abs_n(n: usize, body: LambdaTerm) -> Self {
        (0..n).fold(body, |b, _| LambdaTerm::abs(b))
    }

    /// Left-nested application of `head` to `args`.
    pub fn apply_all(head: LambdaTerm, args: impl IntoIterator<Item = LambdaTerm>) -> Self {
        args.into_iter().fold(head, LambdaTerm::app)
    }

    /// True when every variable is bound.
    pub fn is_closed(&self) -> bool {
        self.max_free_depth(0)
    }

    fn max_free_depth(&self, depth: usize) -> bool {
        match self {
            Var(i) => *i < depth,
            Abs(b) => b.max_free_depth(depth + 1),
            App(f, a) => f.max_free_depth(depth) && a.max_free_depth(depth),
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Var(_) => 1,
            Abs(b) => 1 + b.size(),
            App(f, a) => 1 + f.size() + a.size(),
        }
    }

    fn has_free(&self, index: usize) -> bool {
        match self {
            Var(i) => *i == index,
            Abs(b) => b.has_free(index + 1),
            App(f, a) => f.has_free(index) || a.has_free(index),
        }
    }
}

/// Adds `by` to every variable at or above `cutoff`.
fn shift(t: &LambdaTerm, by: isize, cutoff: usize) -> LambdaTerm {
    match t {
        Var(i) if *i >= cutoff => Var(i.checked_add_signed(by).expect("negative de Bruijn index")),
        Var(i) => Var(*i),
        Abs(b) => LambdaTerm::abs(shift(b, by, cutoff + 1)),
        App(f, a) => LambdaTerm::app(shift(f, by, cutoff), shift(a, by, cutoff)),
    }
}

/// Substitutes `arg` for the variable bound `depth` binders above, removing
/// that binder.
fn instantiate(body: &LambdaTerm, depth: usize, arg: &LambdaTerm) -> LambdaTerm {
    match body {
        Var(i) if *i == depth => shift(arg, depth as isize, 0),
        Var(i) if *i > depth => Var(i - 1),
        Var(i) => Var(*i),
        Abs(b) => LambdaTerm::abs(instantiate(b, depth + 1, arg)),
        App(f, a) => LambdaTerm::app(instantiate(f, depth, arg), instantiate(a, depth, arg)),
    }
}

struct Reducer {
    budget: u64,
    steps: u64,
}

impl Reducer {
    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.budget {
            Err(Error::StepBudgetExceeded(self.budget))
        } else {
            Ok(())
        }
    }

    fn whnf(&mut self, t: LambdaTerm) -> Result<LambdaTerm> {
        let mut t = t;
        loop {
            match t {
                App(f, a) => {
                    let f = self.whnf(*f)?;
                    match f {
                        Abs(body) => {
                            self.tick()?;
                            t = instantiate(&body, 0, &a);
                        }
                        f => return Ok(App(Box::new(f), a)),
                    }
                }
                t => return Ok(t),
            }
        }
    }

    fn nf(&mut self, t: LambdaTerm) -> Result<LambdaTerm> {
        match self.whnf(t)? {
            Abs(b) => Ok(LambdaTerm::abs(self.nf(*b)?)),
            App(f, a) => Ok(LambdaTerm::app(self.nf(*f)?, self.nf(*a)?)),
            v => Ok(v),
        }
    }
}

fn eta(t: LambdaTerm) -> LambdaTerm {
    match t {
        Var(i) => Var(i),
        App(f, a) => LambdaTerm::app(eta(*f), eta(*a)),
        Abs(b) => match eta(*b) {
            App(f, a) if *a == Var(0) && !f.has_free(0) => shift(&f, -1, 0),
            body => LambdaTerm::abs(body),
        },
    }
}

/// βη-normal form with the default budget.
pub fn normalize(t: &LambdaTerm) -> Result<LambdaTerm> {
    normalize_with_budget(t, DEFAULT_STEP_BUDGET)
}

pub fn normalize_with_budget(t: &LambdaTerm, budget: u64) -> Result<LambdaTerm> {
    let mut r = Reducer { budget, steps: 0 };
    let beta = r.nf(t.clone())?;
    Ok(eta(beta))
}

pub fn equivalent(t1: &LambdaTerm, t2: &LambdaTerm) -> Result<bool> {
    Ok(normalize(t1)? == normalize(t2)?)
}

/// `λf.λg.λx. f (g x)`.
pub fn b_combinator() -> LambdaTerm {
    LambdaTerm::abs_n(3, LambdaTerm::app(Var(2), LambdaTerm::app(Var(1), Var(0))))
}

/// Replaces every `B` leaf by its λ-definition.
pub fn bterm_to_lambda(e: &BTerm) -> LambdaTerm {
    match e {
        BTerm::B => b_combinator(),
        BTerm::App(f, a) => LambdaTerm::app(bterm_to_lambda(f), bterm_to_lambda(a)),
    }
}

/// Combinators other than `B`, for exercising the oracle.
pub mod combinators {
    use super::LambdaTerm;

    fn v(i: usize) -> LambdaTerm {
        LambdaTerm::var(i)
    }

    fn ap(f: LambdaTerm, args: Vec<LambdaTerm>) -> LambdaTerm {
        LambdaTerm::apply_all(f, args)
    }

    pub fn b() -> LambdaTerm {
        super::b_combinator()
    }

    /// `λx. x`
    pub fn i() -> LambdaTerm {
        LambdaTerm::abs(v(0))
    }

    /// `λx.λy. x`
    pub fn k() -> LambdaTerm {
        LambdaTerm::abs_n(2, v(1))
    }

    /// `λx.λy.λz. x z y`
    pub fn c() -> LambdaTerm {
        LambdaTerm::abs_n(3, ap(v(2), vec![v(0), v(1)]))
    }

    /// `λx.λy.λz.λw. x y (z w)`
    pub fn d() -> LambdaTerm {
        LambdaTerm::abs_n(4, ap(v(3), vec![v(2), ap(v(1), vec![v(0)])]))
    }

    /// `λx.λy.λz. z y x`
    pub fn f() -> LambdaTerm {
        LambdaTerm::abs_n(3, ap(v(0), vec![v(1), v(2)]))
    }

    /// `λx.λy.λz. y z x`
    pub fn r() -> LambdaTerm {
        LambdaTerm::abs_n(3, ap(v(1), vec![v(0), v(2)]))
    }

    /// `λx.λy. y x`
    pub fn t() -> LambdaTerm {
        LambdaTerm::abs_n(2, ap(v(0), vec![v(1)]))
    }

    /// `λx.λy.λz. z x y`
    pub fn v_comb() -> LambdaTerm {
        LambdaTerm::abs_n(3, ap(v(0), vec![v(2), v(1)]))
    }

    /// `λx.λy.λz. x z (y z)`
    pub fn s() -> LambdaTerm {
        LambdaTerm::abs_n(3, ap(v(2), vec![v(0), ap(v(1), vec![v(0)])]))
    }

    /// `λx.λy. y (x y)`
    pub fn o() -> LambdaTerm {
        LambdaTerm::abs_n(2, ap(v(0), vec![ap(v(1), vec![v(0)])]))
    }
}

impl fmt::Display for LambdaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var(i) => write!(f, "{i}"),
            Abs(_) => {
                let mut t = self;
                while let Abs(b) = t {
                    f.write_str("\\")?;
                    t = b;
                }
                write!(f, ".{t}")
            }
            App(g, a) => {
                match **g {
                    Abs(_) => write!(f, "({g})")?,
                    _ => write!(f, "{g}")?,
                }
                match **a {
                    Var(i) => write!(f, " {i}"),
                    _ => write!(f, " ({a})"),
                }
            }
        }
    }
}

impl fmt::Debug for LambdaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lambda({self})")
    }
}

/// Unlabeled full binary tree: the application structure of a B-form body.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum BinTree {
    Leaf,
    Node(Rc<BinTree>, Rc<BinTree>),
}

impl BinTree {
    pub fn node(left: BinTree, right: BinTree) -> BinTree {
        BinTree::Node(Rc::new(left), Rc::new(right))
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, BinTree::Leaf)
    }

    pub fn leaves(&self) -> usize {
        match self {
            BinTree::Leaf => 1,
            BinTree::Node(l, r) => l.leaves() + r.leaves(),
        }
    }

    /// Left comb `⟨head, a1, …, an⟩ = ⟨…⟨head, a1⟩ …, an⟩`.
    pub fn comb(head: BinTree, args: impl IntoIterator<Item = BinTree>) -> BinTree {
        args.into_iter().fold(head, BinTree::node)
    }

    /// Splits the left spine: the leftmost leaf plus the right children from
    /// the bottom up. For a B-form body these are `x1` and its arguments.
    pub fn spine(&self) -> Vec<BinTree> {
        let mut args = Vec::new();
        let mut t = self;
        while let BinTree::Node(l, r) = t {
            args.push((**r).clone());
            t = l;
        }
        args.reverse();
        args
    }

    /// Peels exactly `n` right children off the left spine, returning the
    /// remaining head and the peeled arguments in order.
    pub fn peel(&self, n: usize) -> Option<(BinTree, Vec<BinTree>)> {
        let mut args = Vec::with_capacity(n);
        let mut t = self;
        for _ in 0..n {
            match t {
                BinTree::Node(l, r) => {
                    args.push((**r).clone());
                    t = l;
                }
                BinTree::Leaf => return None,
            }
        }
        args.reverse();
        Some((t.clone(), args))
    }

    /// Every tree with exactly `leaves` leaves.
    pub fn all_with_leaves(leaves: usize) -> Vec<BinTree> {
        let mut table: Vec<Vec<BinTree>> = vec![Vec::new(), vec![BinTree::Leaf]];
        for n in 2..=leaves {
            let mut here = Vec::new();
            for left in 1..n {
                for l in &table[left] {
                    for r in &table[n - left] {
                        here.push(BinTree::node(l.clone(), r.clone()));
                    }
                }
            }
            table.push(here);
        }
        if leaves == 0 {
            return Vec::new();
        }
        table.swap_remove(leaves)
    }
}

impl fmt::Display for BinTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BinTree::Leaf => f.write_str("x"),
            BinTree::Node(l, r) => write!(f, "<{l},{r}>"),
        }
    }
}

impl fmt::Debug for BinTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::str::FromStr for BinTree {
    type Err = Error;

    /// Parses `x` and `<l,r>`; `<a,b,c,…>` is read as a left comb.
    fn from_str(s: &str) -> Result<Self> {
        fn go(s: &[u8], pos: &mut usize) -> Result<BinTree> {
            while s.get(*pos).is_some_and(|c| c.is_ascii_whitespace()) {
                *pos += 1;
            }
            match s.get(*pos) {
                Some(b'x') => {
                    *pos += 1;
                    Ok(BinTree::Leaf)
                }
                Some(b'<') => {
                    *pos += 1;
                    let mut parts = vec![go(s, pos)?];
                    loop {
                        while s.get(*pos).is_some_and(|c| c.is_ascii_whitespace()) {
                            *pos += 1;
                        }
                        match s.get(*pos) {
                            Some(b',') => {
                                *pos += 1;
                                parts.push(go(s, pos)?);
                            }
                            Some(b'>') if parts.len() >= 2 => {
                                *pos += 1;
                                let mut it = parts.into_iter();
                                let head = it.next().unwrap_or(BinTree::Leaf);
                                return Ok(BinTree::comb(head, it));
                            }
                            _ => {
                                return Err(Error::Syntax {
                                    pos: *pos,
                                    msg: "expected ',' or '>'".into(),
                                })
                            }
                        }
                    }
                }
                _ => Err(Error::Syntax {
                    pos: *pos,
                    msg: "expected 'x' or '<'".into(),
                }),
            }
        }
        let mut pos = 0;
        let t = go(s.as_bytes(), &mut pos)?;
        if s[pos..].trim().is_empty() {
            Ok(t)
        } else {
            Err(Error::Syntax {
                pos,
                msg: "trailing input".into(),
            })
        }
    }
}

/// Reads the application tree of `λx1…λxk. M` where `M` uses each of
/// `x1 … xk` exactly once, in order.
pub fn lambda_to_tree(t: &LambdaTerm) -> Result<BinTree> {
    let mut binders = 0;
    let mut body = t;
    while let Abs(b) = body {
        binders += 1;
        body = b;
    }
    if binders == 0 {
        return Err(Error::NotBFormShape(format!("no binders in {t}")));
    }
    // The next leaf must be x_next, i.e. de Bruijn index binders - 1 - next.
    fn walk(m: &LambdaTerm, binders: usize, next: &mut usize) -> Result<BinTree> {
        match m {
            Var(i) => {
                if *next < binders && *i == binders - 1 - *next {
                    *next += 1;
                    Ok(BinTree::Leaf)
                } else {
                    Err(Error::NotBFormShape(format!(
                        "variable {i} out of order (expected leaf {next})"
                    )))
                }
            }
            App(f, a) => {
                let l = walk(f, binders, next)?;
                let r = walk(a, binders, next)?;
                Ok(BinTree::node(l, r))
            }
            Abs(_) => Err(Error::NotBFormShape("abstraction inside the body".into())),
        }
    }
    let mut next = 0;
    let tree = walk(body, binders, &mut next)?;
    if next != binders {
        return Err(Error::NotBFormShape(format!(
            "{binders} binders but {next} variables used"
        )));
    }
    Ok(tree)
}

/// One binder per leaf, leaves numbered `x1, x2, …` from the left.
pub fn tree_to_lambda(t: &BinTree) -> LambdaTerm {
    fn walk(t: &BinTree, binders: usize, next: &mut usize) -> LambdaTerm {
        match t {
            BinTree::Leaf => {
                let v = Var(binders - 1 - *next);
                *next += 1;
                v
            }
            BinTree::Node(l, r) => {
                let l = walk(l, binders, next);
                LambdaTerm::app(l, walk(r, binders, next))
            }
        }
    }
    let k = t.leaves();
    LambdaTerm::abs_n(k, walk(t, k, &mut 0))
}

/// Head statistics of a B-form normal form `λx1…λxl. x1 e1 … ea`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermStats {
    /// Number of binders.
    pub l: usize,
    /// Number of arguments of the head variable.
    pub a: usize,
    /// `e1`, as an open term under the `l` binders.
    pub n1: Option<LambdaTerm>,
}

/// Normalizes `t` and reads off `l`, `a` and `N1`.
pub fn term_stats(t: &LambdaTerm) -> Result<TermStats> {
    let nf = normalize(t)?;
    lambda_to_tree(&nf)?;
    let mut l = 0;
    let mut body = &nf;
    while let Abs(b) = body {
        l += 1;
        body = b;
    }
    let mut args = Vec::new();
    let mut head = body;
    while let App(f, a) = head {
        args.push(&**a);
        head = f;
    }
    args.reverse();
    Ok(TermStats {
        l,
        a: args.len(),
        n1: args.first().map(|&e| e.clone()),
    })
}

struct LambdaOrbit {
    x: LambdaTerm,
}

impl Stepper for LambdaOrbit {
    type State = LambdaTerm;

    fn first(&mut self) -> Result<LambdaTerm> {
        normalize(&self.x)
    }

    fn advance(&mut self, s: &mut LambdaTerm) -> Result<()> {
        let next = normalize(&LambdaTerm::app(s.clone(), self.x.clone()))?;
        *s = next;
        Ok(())
    }
}

/// ρ-property of an arbitrary closed term, comparing βη-normal forms.
pub fn rho_lambda(t: &LambdaTerm, max_steps: u64) -> Result<RhoResult> {
    rho_lambda_with(t, Algorithm::Floyd, max_steps)
}

pub fn rho_lambda_with(t: &LambdaTerm, algorithm: Algorithm, max_steps: u64) -> Result<RhoResult> {
    let mut orbit = LambdaOrbit { x: t.clone() };
    cycle::search(&mut orbit, algorithm, max_steps)
}

/// Normal forms of `X^(1) … X^(count)`.
pub fn flat_normal_forms(t: &LambdaTerm, count: usize) -> Result<Vec<LambdaTerm>> {
    let mut orbit = LambdaOrbit { x: t.clone() };
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return Ok(out);
    }
    let mut cur = orbit.first()?;
    out.push(cur.clone());
    for _ in 1..count {
        orbit.advance(&mut cur)?;
        out.push(cur.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::combinators as c;
    use super::*;
    use crate::bterm::{flat, parse};

    fn lam(s: &str) -> LambdaTerm {
        bterm_to_lambda(&parse(s).unwrap())
    }

    fn tree(s: &str) -> BinTree {
        s.parse().unwrap()
    }

    #[test]
    fn b_prints_in_de_bruijn_syntax() {
        assert_eq!(b_combinator().to_string(), "\\\\\\.2 (1 0)");
        assert_eq!(c::i().to_string(), "\\.0");
        let redex = LambdaTerm::app(c::i(), c::k());
        assert_eq!(redex.to_string(), "(\\.0) (\\\\.1)");
    }

    #[test]
    fn bbb_normalizes_to_two_argument_composition() {
        let nf = normalize(&lam("B B B")).unwrap();
        assert_eq!(nf.to_string(), "\\\\\\\\.3 (2 1 0)");
        // B B B = λfgxy. f (g x y): binders f=3 g=2 x=1 y=0.
        let expected = LambdaTerm::abs_n(
            4,
            LambdaTerm::app(Var(3), LambdaTerm::apply_all(Var(2), [Var(1), Var(0)])),
        );
        assert_eq!(nf, expected);
    }

    #[test]
    fn normalize_is_identity_on_normal_terms() {
        for t in [
            c::b(),
            c::s(),
            c::k(),
            c::o(),
            tree_to_lambda(&tree("<<x,x>,<x,x>>")),
        ] {
            assert_eq!(normalize(&t).unwrap(), t);
        }
    }

    #[test]
    fn sixth_flat_power_of_b() {
        let nf = normalize(&bterm_to_lambda(&flat(&BTerm::B, 6))).unwrap();
        // λx.λy.λz.λw.λv. x (y z) (w v)
        let expected = LambdaTerm::abs_n(
            5,
            LambdaTerm::apply_all(
                Var(4),
                [
                    LambdaTerm::app(Var(3), Var(2)),
                    LambdaTerm::app(Var(1), Var(0)),
                ],
            ),
        );
        assert_eq!(nf, expected);
    }

    #[test]
    fn equivalence_examples() {
        assert!(equivalent(&lam("B B (B B)"), &lam("B (B (B B)) B")).unwrap());
        assert!(equivalent(&lam("B B (B B)"), &lam("B (B B) B B")).unwrap());
        assert!(equivalent(&lam("B (B B) (B B)"), &lam("B (B B B)")).unwrap());
        assert!(!equivalent(&lam("B"), &lam("B B")).unwrap());
        assert!(equivalent(&c::s(), &c::s()).unwrap());
    }

    #[test]
    fn eta_contracts_trailing_variables() {
        // λx.λy. x y  →  λx. x
        let t = LambdaTerm::abs_n(2, LambdaTerm::app(Var(1), Var(0)));
        assert_eq!(normalize(&t).unwrap(), c::i());
        // λx. (λy. y) x  →  λx. x after β; no η loop on the identity itself
        let t = LambdaTerm::abs(LambdaTerm::app(c::i(), Var(0)));
        assert_eq!(normalize(&t).unwrap(), c::i());
    }

    #[test]
    fn step_budget_stops_omega() {
        let w = LambdaTerm::abs(LambdaTerm::app(Var(0), Var(0)));
        let omega = LambdaTerm::app(w.clone(), w);
        assert_eq!(
            normalize_with_budget(&omega, 1000),
            Err(Error::StepBudgetExceeded(1000))
        );
    }

    #[test]
    fn homomorphic_image() {
        assert_eq!(bterm_to_lambda(&BTerm::B), c::b());
        assert_eq!(lam("B B"), LambdaTerm::app(c::b(), c::b()));
        assert_eq!(
            bterm_to_lambda(&flat(&BTerm::B, 3)),
            LambdaTerm::app(LambdaTerm::app(c::b(), c::b()), c::b())
        );
    }

    #[test]
    fn trees_of_b_and_bb() {
        assert_eq!(lambda_to_tree(&c::b()).unwrap(), tree("<x,<x,x>>"));
        let bb = normalize(&lam("B B")).unwrap();
        assert_eq!(lambda_to_tree(&bb).unwrap(), tree("<<x,x>,<x,x>>"));
        assert_eq!(lambda_to_tree(&c::i()).unwrap(), BinTree::Leaf);
    }

    #[test]
    fn lambda_to_tree_rejects_other_shapes() {
        for t in [c::k(), c::c(), c::s(), c::t(), c::o()] {
            assert!(
                matches!(lambda_to_tree(&t), Err(Error::NotBFormShape(_))),
                "{t}"
            );
        }
    }

    #[test]
    fn tree_to_lambda_examples() {
        assert_eq!(tree_to_lambda(&tree("<x,<x,x>>")), c::b());
        assert_eq!(tree_to_lambda(&BinTree::Leaf), c::i());
        assert_eq!(
            tree_to_lambda(&tree("<<x,x>,<x,x>>")).to_string(),
            "\\\\\\\\.3 2 (1 0)"
        );
    }

    #[test]
    fn tree_roundtrip_exhaustive_to_twelve_leaves() {
        for n in 1..=12 {
            for t in BinTree::all_with_leaves(n) {
                assert_eq!(lambda_to_tree(&tree_to_lambda(&t)).unwrap(), t);
            }
        }
    }

    #[test]
    fn comb_parsing_is_left_nested() {
        assert_eq!(tree("<x,x,x>"), tree("<<x,x>,x>"));
        assert_eq!(tree("<x,x,x>").spine().len(), 2);
        assert!("<x>".parse::<BinTree>().is_err());
        assert!("<x,y>".parse::<BinTree>().is_err());
    }

    #[test]
    fn term_stats_examples() {
        let st = term_stats(&c::b()).unwrap();
        assert_eq!((st.l, st.a), (3, 1));
        assert_eq!(st.n1, Some(LambdaTerm::app(Var(1), Var(0))));

        // (B^1 B)^3 = (B B) ∘ (B B) ∘ (B B)
        let z = lam("B (B (B B) (B B)) (B B)");
        assert_eq!(term_stats(&z).unwrap().l, 6);

        let st = term_stats(&c::i()).unwrap();
        assert_eq!((st.l, st.a, st.n1), (1, 0, None));

        assert!(matches!(term_stats(&c::k()), Err(Error::NotBFormShape(_))));
    }

    #[test]
    fn rho_of_small_combinators() {
        let cases = [
            (c::k(), (1, 2)),
            (c::i(), (1, 1)),
            (c::c(), (3, 1)),
            (c::t(), (2, 1)),
            (c::v_comb(), (3, 1)),
            (c::f(), (3, 1)),
            (c::r(), (3, 1)),
            (c::b(), (6, 4)),
            (c::d(), (32, 20)),
        ];
        for (t, (k, cyc)) in cases {
            for alg in [Algorithm::Floyd, Algorithm::Brent] {
                let r = rho_lambda_with(&t, alg, 10_000).unwrap();
                assert_eq!((r.entry, r.cycle), (k, cyc), "{t} with {alg:?}");
            }
        }
    }

    #[test]
    fn s_and_o_do_not_cycle_early() {
        for t in [c::s(), c::o()] {
            assert_eq!(rho_lambda(&t, 30), Err(Error::NotFound(30)));
            let forms = flat_normal_forms(&t, 15).unwrap();
            for i in 0..forms.len() {
                for j in 0..i {
                    assert_ne!(forms[i], forms[j]);
                }
            }
        }
    }

    #[test]
    fn odd_powers_of_s_match_closed_form() {
        // S^(2n+1) = λx.λy. x y (x y (… (x y (λz. x z (y z)))…)) with n copies of `x y`.
        let forms = flat_normal_forms(&c::s(), 11).unwrap();
        for n in 0..=5usize {
            let inner = |depth: usize| {
                LambdaTerm::abs(LambdaTerm::apply_all(
                    Var(depth + 1),
                    [Var(0), LambdaTerm::app(Var(depth), Var(0))],
                ))
            };
            // under λx.λy: x = 1, y = 0
            let mut body = inner(1);
            for _ in 0..n {
                body = LambdaTerm::apply_all(Var(1), [Var(0), body]);
            }
            let expected = LambdaTerm::abs_n(2, body);
            assert_eq!(forms[2 * n], expected, "S^({})", 2 * n + 1);
        }
    }

    #[test]
    fn powers_of_o_match_closed_form() {
        // O^(n+1) = λx. x (x (… (x (λy. y (x y)))…)) with n copies of x.
        let forms = flat_normal_forms(&c::o(), 8).unwrap();
        for n in 0..8usize {
            let mut body =
                LambdaTerm::abs(LambdaTerm::app(Var(0), LambdaTerm::app(Var(1), Var(0))));
            if n == 0 {
                assert_eq!(forms[0], c::o());
                continue;
            }
            for _ in 0..n {
                body = LambdaTerm::app(Var(0), body);
            }
            assert_eq!(forms[n], LambdaTerm::abs(body), "O^({})", n + 1);
        }
    }
}
