//! Rewriting with `B^k` as opaque constants.
//!
//! Terms are `e ::= B^k | e e` and the only rule is
//! `B^k e1 e2 … e(k+2) → e1 (e2 … e(k+2))`. Two terms are equal when their
//! normal forms are syntactically identical, which is strictly weaker than
//! βη-equality. `B^0` behaves as the identity on two arguments and `B^1` is
//! the ordinary `B`.
//!
//! Text syntax: `B` is `B^1`, `B^k` is the constant `B^k`, juxtaposition is
//! left-associative application, so `B^2 B` is `App(Const(2), Const(1))`.
//!
//! Normal forms are computed in a hash-consed [`Store`] with memoized
//! results, so the long flat-power orbits share their common structure.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::bterm::BTerm;
use crate::canonical::{DegreeSeq, Run};
use crate::cycle::{self, Algorithm, RhoResult, Stepper};
use crate::error::{Error, Result};
use crate::fast_apply::apply_poly;

/// Contractions allowed for one normalization.
pub const DEFAULT_REWRITE_BUDGET: u64 = 1_000_000_000;

// Orbits of B^3 B nest arguments a few thousand levels deep.
const SEARCH_STACK_BYTES: usize = 1 << 30;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum RTerm {
    Const(u64),
    App(Box<RTerm>, Box<RTerm>),
}

impl RTerm {
    pub fn app(f: RTerm, a: RTerm) -> RTerm {
        RTerm::App(Box::new(f), Box::new(a))
    }

    /// `B^n B`.
    pub fn monomial(n: u64) -> RTerm {
        RTerm::app(RTerm::Const(n), RTerm::Const(1))
    }

    /// Reads every `B` leaf as `B^1`.
    pub fn from_bterm(e: &BTerm) -> RTerm {
        match e {
            BTerm::B => RTerm::Const(1),
            BTerm::App(f, a) => RTerm::app(RTerm::from_bterm(f), RTerm::from_bterm(a)),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            RTerm::Const(_) => 1,
            RTerm::App(f, a) => f.size() + a.size(),
        }
    }

    /// Canonical form of the B-term this denotes, reading `B^k` (`k ≥ 1`) as
    /// the `k`-fold composition of `B`. Fails when `B^0` is used as a value
    /// rather than applied.
    pub fn to_degree_seq(&self) -> Result<DegreeSeq> {
        match eval(self)? {
            Value::Seq(s) => Ok(s),
            Value::Identity => Err(Error::InvalidSeq("B^0 alone is not a B-term".into())),
        }
    }
}

enum Value {
    Identity,
    Seq(DegreeSeq),
}

fn eval(t: &RTerm) -> Result<Value> {
    match t {
        RTerm::Const(0) => Ok(Value::Identity),
        RTerm::Const(k) => Ok(Value::Seq(DegreeSeq::from_runs(vec![Run {
            degree: 0,
            count: *k,
        }])?)),
        RTerm::App(f, a) => match (eval(f)?, eval(a)?) {
            (Value::Identity, v) => Ok(v),
            (Value::Seq(s1), Value::Seq(s2)) => Ok(Value::Seq(apply_poly(&s1, &s2)?)),
            (Value::Seq(_), Value::Identity) => Err(Error::InvalidSeq(
                "B^0 as an argument is not a B-term".into(),
            )),
        },
    }
}

fn write_rterm(t: &RTerm, out: &mut String) {
    match t {
        RTerm::Const(1) => out.push('B'),
        RTerm::Const(k) => out.push_str(&format!("B^{k}")),
        RTerm::App(f, a) => {
            write_rterm(f, out);
            out.push(' ');
            if let RTerm::App(..) = **a {
                out.push('(');
                write_rterm(a, out);
                out.push(')');
            } else {
                write_rterm(a, out);
            }
        }
    }
}

impl fmt::Display for RTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_rterm(self, &mut s);
        f.write_str(&s)
    }
}

impl fmt::Debug for RTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RTerm({self})")
    }
}

impl FromStr for RTerm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

pub fn parse(text: &str) -> Result<RTerm> {
    let src = text.as_bytes();
    let mut pos = 0;
    let t = parse_term(src, &mut pos)?;
    skip_ws(src, &mut pos);
    if pos < src.len() {
        return Err(Error::Syntax {
            pos,
            msg: "unexpected input after term".into(),
        });
    }
    Ok(t)
}

fn skip_ws(src: &[u8], pos: &mut usize) {
    while *pos < src.len() && src[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
}

fn parse_term(src: &[u8], pos: &mut usize) -> Result<RTerm> {
    let mut acc = parse_atom(src, pos)?.ok_or(Error::Syntax {
        pos: *pos,
        msg: "expected a term".into(),
    })?;
    while let Some(a) = parse_atom(src, pos)? {
        acc = RTerm::app(acc, a);
    }
    Ok(acc)
}

fn parse_atom(src: &[u8], pos: &mut usize) -> Result<Option<RTerm>> {
    skip_ws(src, pos);
    match src.get(*pos) {
        Some(b'B') => {
            *pos += 1;
            if src.get(*pos) != Some(&b'^') {
                return Ok(Some(RTerm::Const(1)));
            }
            *pos += 1;
            let start = *pos;
            while *pos < src.len() && src[*pos].is_ascii_digit() {
                *pos += 1;
            }
            let k = std::str::from_utf8(&src[start..*pos])
                .ok()
                .and_then(|s| s.parse().ok())
                .ok_or(Error::Syntax {
                    pos: start,
                    msg: "expected an exponent after '^'".into(),
                })?;
            Ok(Some(RTerm::Const(k)))
        }
        Some(b'(') => {
            *pos += 1;
            let t = parse_term(src, pos)?;
            skip_ws(src, pos);
            if src.get(*pos) != Some(&b')') {
                return Err(Error::Syntax {
                    pos: *pos,
                    msg: "expected ')'".into(),
                });
            }
            *pos += 1;
            Ok(Some(t))
        }
        Some(b')') | None => Ok(None),
        Some(_) => Err(Error::Syntax {
            pos: *pos,
            msg: "unexpected character".into(),
        }),
    }
}

/// Handle to an interned term.
pub type Id = u32;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Node {
    Const(u64),
    App(Id, Id),
}

/// Hash-consed term DAG. Structurally equal terms get the same [`Id`].
#[derive(Default)]
pub struct Store {
    nodes: Vec<Node>,
    index: HashMap<Node, Id>,
    normal: HashMap<Id, Id>,
    pub contractions: u64,
}

impl Store {
    pub fn new() -> Self {
        Store::default()
    }

    /// Distinct nodes interned so far.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn intern(&mut self, n: Node) -> Id {
        if let Some(&id) = self.index.get(&n) {
            return id;
        }
        let id = Id::try_from(self.nodes.len()).expect("term store exceeded 2^32 nodes");
        self.nodes.push(n);
        self.index.insert(n, id);
        id
    }

    pub fn constant(&mut self, k: u64) -> Id {
        self.intern(Node::Const(k))
    }

    pub fn app(&mut self, f: Id, a: Id) -> Id {
        self.intern(Node::App(f, a))
    }

    pub fn insert(&mut self, t: &RTerm) -> Id {
        match t {
            RTerm::Const(k) => self.constant(*k),
            RTerm::App(f, a) => {
                let f = self.insert(f);
                let a = self.insert(a);
                self.app(f, a)
            }
        }
    }

    /// Expands a node back into a tree. The tree can be exponentially
    /// larger than the DAG.
    pub fn get(&self, id: Id) -> RTerm {
        match self.nodes[id as usize] {
            Node::Const(k) => RTerm::Const(k),
            Node::App(f, a) => RTerm::app(self.get(f), self.get(a)),
        }
    }

    // Pushes the arguments of `t` so that the first one ends up on top.
    fn unspine(&self, mut t: Id, stack: &mut Vec<Id>) -> u64 {
        loop {
            match self.nodes[t as usize] {
                Node::Const(k) => return k,
                Node::App(f, a) => {
                    stack.push(a);
                    t = f;
                }
            }
        }
    }

    /// Normal form of `t`, spending at most `budget` contractions.
    pub fn normalize(&mut self, t: Id, budget: u64) -> Result<Id> {
        let mut spent = 0;
        let r = self.normalize_inner(t, &mut spent, budget);
        self.contractions += spent;
        r
    }

    fn normalize_inner(&mut self, t: Id, spent: &mut u64, budget: u64) -> Result<Id> {
        if let Some(&n) = self.normal.get(&t) {
            return Ok(n);
        }
        let mut stack = Vec::new();
        let mut head = self.unspine(t, &mut stack);
        while (stack.len() as u64) >= head.saturating_add(2) {
            if *spent >= budget {
                return Err(Error::StepBudgetExceeded(budget));
            }
            *spent += 1;
            let e1 = stack.pop().expect("arity checked");
            let mut inner = stack.pop().expect("arity checked");
            for _ in 0..head {
                let e = stack.pop().expect("arity checked");
                inner = self.app(inner, e);
            }
            stack.push(inner);
            head = self.unspine(e1, &mut stack);
        }
        let mut acc = self.constant(head);
        while let Some(a) = stack.pop() {
            let a = self.normalize_inner(a, spent, budget)?;
            acc = self.app(acc, a);
        }
        self.normal.insert(t, acc);
        self.normal.insert(acc, acc);
        Ok(acc)
    }
}

/// Normal form of `t`.
pub fn rnormalize(t: &RTerm) -> Result<RTerm> {
    let mut store = Store::new();
    let id = store.insert(t);
    let n = store.normalize(id, DEFAULT_REWRITE_BUDGET)?;
    Ok(store.get(n))
}

/// Flat powers of a restricted term inside one [`Store`].
pub struct RestrictedOrbit {
    store: Store,
    base: Id,
    budget: u64,
}

impl RestrictedOrbit {
    pub fn new(x: &RTerm) -> Self {
        let mut store = Store::new();
        let base = store.insert(x);
        RestrictedOrbit {
            store,
            base,
            budget: DEFAULT_REWRITE_BUDGET,
        }
    }

    pub fn store(&self) -> &Store {
        &self.store
    }

    /// Normal forms of `X^(1) … X^(count)`.
    pub fn powers(&mut self, count: usize) -> Result<Vec<Id>> {
        let mut out = Vec::with_capacity(count);
        if count == 0 {
            return Ok(out);
        }
        let mut cur = self.first()?;
        out.push(cur);
        while out.len() < count {
            self.advance(&mut cur)?;
            out.push(cur);
        }
        Ok(out)
    }
}

impl Stepper for RestrictedOrbit {
    type State = Id;

    fn first(&mut self) -> Result<Id> {
        self.store.normalize(self.base, self.budget)
    }

    fn advance(&mut self, s: &mut Id) -> Result<()> {
        let t = self.store.app(*s, self.base);
        *s = self.store.normalize(t, self.budget)?;
        Ok(())
    }
}

/// Minimal `(k, c)` with `X^(k)` and `X^(k+c)` syntactically equal after
/// normalization.
pub fn find_rho_restricted(x: &RTerm, max_steps: u64) -> Result<RhoResult> {
    find_rho_restricted_with(x, Algorithm::default(), max_steps)
}

pub fn find_rho_restricted_with(
    x: &RTerm,
    algorithm: Algorithm,
    max_steps: u64,
) -> Result<RhoResult> {
    let x = x.clone();
    run_with_big_stack(move || {
        let mut orbit = RestrictedOrbit::new(&x);
        cycle::search(&mut orbit, algorithm, max_steps)
    })
}

/// Runs `f` on a thread with a deep stack; restricted normal forms nest
/// arguments too deeply for the default one.
pub fn run_with_big_stack<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> T {
    std::thread::Builder::new()
        .stack_size(SEARCH_STACK_BYTES)
        .spawn(f)
        .expect("spawn search thread")
        .join()
        .unwrap_or_else(|e| std::panic::resume_unwind(e))
}
