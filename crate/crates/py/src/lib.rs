//! Python bindings: `import brho`.

use std::path::PathBuf;

use brho_core::antirho::{self, Assertion, Report, TknSpec};
use brho_core::bterm::{self, flat, BTerm};
use brho_core::canonical::{self, try_canonicalize, DegreeSeq, Run};
use brho_core::cycle::{self, Algorithm, CheckpointPolicy, SearchOptions, DEFAULT_MAX_STEPS};
use brho_core::lambda::{bterm_to_lambda, rho_lambda_with};
use brho_core::restricted::{self, find_rho_restricted_with};
use brho_core::{fast_apply, Error};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

create_exception!(brho, BrhoError, PyException);
create_exception!(brho, ParseError, BrhoError);
create_exception!(brho, NotFoundError, BrhoError);
create_exception!(brho, CheckpointError, BrhoError);

fn to_py(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::Syntax { .. } | Error::InvalidSeq(_) | Error::NotBFormShape(_) => {
            ParseError::new_err(msg)
        }
        Error::NotFound(_) | Error::StepBudgetExceeded(_) => NotFoundError::new_err(msg),
        Error::CheckpointIo(_) | Error::FormatVersionMismatch(_) => CheckpointError::new_err(msg),
        Error::Overflow | Error::AllZero => BrhoError::new_err(msg),
    }
}

/// A pure B-term. `BTerm("B (B^2 B) B")`.
#[pyclass(name = "BTerm", module = "brho", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyBTerm(BTerm);

#[pymethods]
impl PyBTerm {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        bterm::parse(text).map(PyBTerm).map_err(to_py)
    }

    /// `B^n B`.
    #[staticmethod]
    fn monomial(n: u64) -> Self {
        PyBTerm(bterm::monomial(n))
    }

    #[pyo3(signature = (sugar = true))]
    fn text(&self, sugar: bool) -> String {
        self.0.to_text(sugar)
    }

    fn __str__(&self) -> String {
        self.0.to_text(true)
    }

    fn __repr__(&self) -> String {
        format!("BTerm({:?})", self.0.to_text(true))
    }

    fn __len__(&self) -> usize {
        self.0.size()
    }

    fn __call__(&self, arg: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(PyBTerm(BTerm::app(self.0.clone(), term_arg(arg)?)))
    }

    fn compose(&self, other: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(PyBTerm(BTerm::compose(self.0.clone(), term_arg(other)?)))
    }

    /// `X^(k)`: k copies of X in left-nested application.
    fn power(&self, k: usize) -> PyResult<Self> {
        if k == 0 {
            return Err(PyValueError::new_err("flat powers start at 1"));
        }
        Ok(PyBTerm(flat(&self.0, k)))
    }

    fn canonical(&self) -> PyResult<PyDegreeSeq> {
        try_canonicalize(&self.0).map(PyDegreeSeq).map_err(to_py)
    }

    fn equivalent(&self, other: &Bound<'_, PyAny>) -> PyResult<bool> {
        Ok(canonical::equivalent_bterms(&self.0, &term_arg(other)?))
    }
}

/// Accepts a `BTerm` or its text.
fn term_arg(obj: &Bound<'_, PyAny>) -> PyResult<BTerm> {
    if let Ok(t) = obj.cast::<PyBTerm>() {
        return Ok(t.get().0.clone());
    }
    let text: String = obj.extract()?;
    bterm::parse(&text).map_err(to_py)
}

/// A canonical decreasing polynomial, stored run-length encoded.
#[pyclass(
    name = "DegreeSeq",
    module = "brho",
    frozen,
    eq,
    hash,
    skip_from_py_object
)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyDegreeSeq(DegreeSeq);

#[pymethods]
impl PyDegreeSeq {
    #[new]
    fn new(degrees: Vec<u64>) -> PyResult<Self> {
        DegreeSeq::from_degrees(&degrees)
            .map(PyDegreeSeq)
            .map_err(to_py)
    }

    /// From `(degree, count)` pairs.
    #[staticmethod]
    fn from_runs(runs: Vec<(u64, u64)>) -> PyResult<Self> {
        let runs = runs
            .into_iter()
            .map(|(degree, count)| Run { degree, count })
            .collect();
        DegreeSeq::from_runs(runs).map(PyDegreeSeq).map_err(to_py)
    }

    /// `[3,1,1]` or the run-length form `3*1,1*2`.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        text.parse().map(PyDegreeSeq).map_err(to_py)
    }

    fn degrees(&self) -> Vec<u64> {
        self.0.to_vec()
    }

    fn runs(&self) -> Vec<(u64, u64)> {
        self.0.runs().iter().map(|r| (r.degree, r.count)).collect()
    }

    fn to_rle(&self) -> String {
        self.0.to_rle_string()
    }

    fn to_term(&self) -> PyBTerm {
        PyBTerm(canonical::seq_to_bterm(&self.0))
    }

    /// Binary tree of the normal form, e.g. `<x,<x,x>>`.
    fn tree(&self) -> String {
        canonical::tree_of(&self.0).to_string()
    }

    /// `(l, a)`: binder count and head argument count of the normal form.
    fn head_stats(&self) -> (u64, u64) {
        let h = antirho::tree_stats(&canonical::tree_of(&self.0));
        (h.l, h.a)
    }

    /// Canonical form of `self other`.
    fn apply(&self, other: PyRef<'_, PyDegreeSeq>) -> PyResult<Self> {
        fast_apply::apply_poly(&self.0, &other.0)
            .map(PyDegreeSeq)
            .map_err(to_py)
    }

    fn __call__(&self, other: PyRef<'_, PyDegreeSeq>) -> PyResult<Self> {
        self.apply(other)
    }

    fn __len__(&self) -> usize {
        self.0.len() as usize
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("DegreeSeq.parse({:?})", self.0.to_rle_string())
    }
}

/// One checked claim of an anti-rho report.
#[pyclass(name = "Assertion", module = "brho", frozen, get_all)]
struct PyAssertion {
    name: String,
    holds: bool,
    counterexample: Option<u64>,
    heuristic: bool,
    note: String,
}

#[pymethods]
impl PyAssertion {
    fn __repr__(&self) -> String {
        self.to_string()
    }

    fn __bool__(&self) -> bool {
        self.holds
    }
}

impl std::fmt::Display for PyAssertion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let a = Assertion {
            name: self.name.clone(),
            holds: self.holds,
            counterexample: self.counterexample,
            heuristic: self.heuristic,
            note: self.note.clone(),
        };
        write!(f, "{a}")
    }
}

fn report_list(r: Report) -> Vec<PyAssertion> {
    r.assertions
        .into_iter()
        .map(|a| PyAssertion {
            name: a.name,
            holds: a.holds,
            counterexample: a.counterexample,
            heuristic: a.heuristic,
            note: a.note,
        })
        .collect()
}

#[pyfunction]
fn canonicalize(term: &Bound<'_, PyAny>) -> PyResult<PyDegreeSeq> {
    try_canonicalize(&term_arg(term)?)
        .map(PyDegreeSeq)
        .map_err(to_py)
}

#[pyfunction]
fn equivalent(t1: &Bound<'_, PyAny>, t2: &Bound<'_, PyAny>) -> PyResult<bool> {
    Ok(canonical::equivalent_bterms(&term_arg(t1)?, &term_arg(t2)?))
}

#[pyfunction]
fn apply_poly(s1: PyRef<'_, PyDegreeSeq>, s2: PyRef<'_, PyDegreeSeq>) -> PyResult<PyDegreeSeq> {
    fast_apply::apply_poly(&s1.0, &s2.0)
        .map(PyDegreeSeq)
        .map_err(to_py)
}

fn parse_algorithm(name: &str) -> PyResult<Algorithm> {
    name.parse()
        .map_err(|_| PyValueError::new_err(format!("unknown algorithm `{name}`")))
}

/// `(k, c)` with `X^(k) = X^(k+c)`, both minimal. The GIL is released
/// during the search.
#[pyfunction]
#[pyo3(signature = (term, engine = "canonical", algorithm = "brent", max_steps = DEFAULT_MAX_STEPS, checkpoint = None))]
fn find_rho(
    py: Python<'_>,
    term: &Bound<'_, PyAny>,
    engine: &str,
    algorithm: &str,
    max_steps: u64,
    checkpoint: Option<PathBuf>,
) -> PyResult<(u64, u64)> {
    let alg = parse_algorithm(algorithm)?;
    if checkpoint.is_some() && engine != "canonical" {
        return Err(PyValueError::new_err(
            "checkpoints need the canonical engine",
        ));
    }
    let result = match engine {
        "canonical" => {
            let x = term_arg(term)?;
            let mut opts = SearchOptions::new(alg, max_steps);
            opts.checkpoint = checkpoint.map(CheckpointPolicy::new);
            py.detach(|| cycle::find_rho(&x, &opts))
        }
        "lambda" => {
            let x = bterm_to_lambda(&term_arg(term)?);
            py.detach(|| rho_lambda_with(&x, alg, max_steps))
        }
        "restricted" => {
            let text = match term.cast::<PyBTerm>() {
                Ok(t) => t.get().0.to_text(true),
                Err(_) => term.extract::<String>()?,
            };
            let x = restricted::parse(&text).map_err(to_py)?;
            py.detach(|| find_rho_restricted_with(&x, alg, max_steps))
        }
        other => return Err(PyValueError::new_err(format!("unknown engine `{other}`"))),
    };
    result.map(|r| (r.entry, r.cycle)).map_err(to_py)
}

/// Continue a canonical search from a checkpoint file.
#[pyfunction]
#[pyo3(signature = (checkpoint, max_steps = DEFAULT_MAX_STEPS))]
fn resume_rho(py: Python<'_>, checkpoint: PathBuf, max_steps: u64) -> PyResult<(u64, u64)> {
    let state = cycle::load_checkpoint(&checkpoint).map_err(to_py)?;
    let mut opts = SearchOptions::new(state.algorithm, max_steps);
    opts.checkpoint = Some(CheckpointPolicy::new(checkpoint.clone()));
    py.detach(|| cycle::resume_rho(&checkpoint, &opts))
        .map(|r| (r.entry, r.cycle))
        .map_err(to_py)
}

/// `[X^(1), …, X^(count)]` as canonical forms.
#[pyfunction]
fn iterate(term: &Bound<'_, PyAny>, count: u64) -> PyResult<Vec<PyDegreeSeq>> {
    cycle::iterate(&term_arg(term)?, count)
        .map(|s| s.map(PyDegreeSeq))
        .collect::<Result<_, _>>()
        .map_err(to_py)
}

/// Anti-rho report for `Z = (B^k B)^((k+2)n)`: recurrences, closure and
/// monotonicity along the first `steps` iterates.
#[pyfunction]
#[pyo3(signature = (k, n, steps = 100))]
fn antirho_report(py: Python<'_>, k: u64, n: u64, steps: usize) -> PyResult<Vec<PyAssertion>> {
    if n == 0 {
        return Err(PyValueError::new_err("n must be at least 1"));
    }
    let spec = TknSpec::new(k, n);
    let report = py
        .detach(|| {
            let mut r = antirho::check_recurrences(spec, steps)?;
            r.assertions
                .extend(antirho::check_monotone(&spec.z(), steps, spec.window())?.assertions);
            Ok(r)
        })
        .map_err(to_py)?;
    Ok(report_list(report))
}

/// Monotonicity report for any term.
#[pyfunction]
#[pyo3(signature = (term, steps = 100, window = None))]
fn monotone_report(
    term: &Bound<'_, PyAny>,
    steps: usize,
    window: Option<usize>,
) -> PyResult<Vec<PyAssertion>> {
    let x = term_arg(term)?;
    let window = match window {
        Some(w) => w,
        None => antirho::default_window(&x).map_err(to_py)?,
    };
    antirho::check_monotone(&x, steps, window)
        .map(report_list)
        .map_err(to_py)
}

#[pymodule]
fn brho(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add_class::<PyBTerm>()?;
    m.add_class::<PyDegreeSeq>()?;
    m.add_class::<PyAssertion>()?;
    m.add_function(wrap_pyfunction!(canonicalize, m)?)?;
    m.add_function(wrap_pyfunction!(equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(apply_poly, m)?)?;
    m.add_function(wrap_pyfunction!(find_rho, m)?)?;
    m.add_function(wrap_pyfunction!(resume_rho, m)?)?;
    m.add_function(wrap_pyfunction!(iterate, m)?)?;
    m.add_function(wrap_pyfunction!(antirho_report, m)?)?;
    m.add_function(wrap_pyfunction!(monotone_report, m)?)?;
    m.add("BrhoError", py.get_type::<BrhoError>())?;
    m.add("ParseError", py.get_type::<ParseError>())?;
    m.add("NotFoundError", py.get_type::<NotFoundError>())?;
    m.add("CheckpointError", py.get_type::<CheckpointError>())?;
    Ok(())
}
