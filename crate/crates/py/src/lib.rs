//! Python bindings for `pastlab`. Rationals cross the boundary as exact
//! strings such as `"7/2"`; graphs, certificates and tree specs as JSON text.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::pyclass::CompareOp;

use pastlab::exploration::{ast_search, SemicheckConfig};
use pastlab::hydra::{line_hydra, play_round, HydraState};
use pastlab::rational::{from_text, to_text};
use pastlab::scheduling::{constant, hashed, parity, Scheduler};
use pastlab::{
    check_proof_rule, check_rsm, collapse_to_state_graph, exp_runtime_bounds, termination_prob_upto, Direction,
    KnievelPolicy, Limits, RsmCert, RuleCert, StateGraph, TreeSpec, Verdict,
};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn scheduler(spec: &str) -> PyResult<Box<dyn Scheduler + Send>> {
    match spec {
        "const:Ln" => Ok(Box::new(constant(Direction::Ln))),
        "const:Rn" => Ok(Box::new(constant(Direction::Rn))),
        "parity" => Ok(Box::new(parity())),
        s => match s.strip_prefix("random:").map(str::parse::<u64>) {
            Some(Ok(seed)) => Ok(Box::new(hashed(seed))),
            _ => Err(PyValueError::new_err(format!(
                "unknown scheduler `{s}` (expected const:Ln, const:Rn, parity or random:SEED)"
            ))),
        },
    }
}

/// A parsed pGCL program.
#[pyclass(name = "Program", frozen)]
struct PyProgram {
    inner: pastlab::Program,
}

#[pymethods]
impl PyProgram {
    #[new]
    fn new(source: &str) -> PyResult<Self> {
        pastlab::parse(source).map(|inner| PyProgram { inner }).map_err(err)
    }

    fn __str__(&self) -> String {
        pastlab::print(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Program({:?})", pastlab::syntax::print_compact(&self.inner))
    }

    fn __eq__(&self, other: &PyProgram) -> bool {
        self.inner == other.inner
    }

    fn is_knievel(&self) -> bool {
        pastlab::is_knievel(&self.inner)
    }

    #[pyo3(signature = (width = 4, cheer = 16))]
    fn to_knievel(&self, width: usize, cheer: u64) -> PyResult<PyProgram> {
        pastlab::to_knievel(&self.inner, KnievelPolicy { width, cheer })
            .map(|inner| PyProgram { inner })
            .map_err(err)
    }

    /// Mass of runs that terminate within `k` steps.
    #[pyo3(signature = (k, scheduler = "const:Ln"))]
    fn termination_prob(&self, k: usize, scheduler: &str) -> PyResult<String> {
        let mut f = self::scheduler(scheduler)?;
        termination_prob_upto(&self.inner, &mut f, k, Limits::from_env()).map(|r| to_text(&r)).map_err(err)
    }

    /// `(lower, exact)` after `depth` steps; `exact` is `None` while runs
    /// are still alive.
    #[pyo3(signature = (depth = 64, scheduler = "const:Ln"))]
    fn runtime_bounds(&self, depth: usize, scheduler: &str) -> PyResult<(String, Option<String>)> {
        let mut f = self::scheduler(scheduler)?;
        let b = exp_runtime_bounds(&self.inner, &mut f, depth, Limits::from_env()).map_err(err)?;
        Ok((to_text(&b.lower), b.exact.as_ref().map(to_text)))
    }

    /// Smallest `n <= max_n` at which every partial schedule terminates with
    /// probability above `delta`, if any.
    #[pyo3(signature = (delta, max_n = 64))]
    fn ast_check(&self, delta: &str, max_n: usize) -> PyResult<Option<usize>> {
        let delta = from_text(delta).map_err(err)?;
        let cfg = SemicheckConfig { limits: Limits::from_env(), ..SemicheckConfig::default() };
        ast_search(&self.inner, &delta, max_n, &cfg).map_err(err)
    }

    /// State graph in JSON form, exploring at most `bound` states.
    #[pyo3(signature = (bound = 10_000))]
    fn state_graph(&self, bound: usize) -> PyResult<String> {
        collapse_to_state_graph(&self.inner, bound).map(|g| g.to_json().to_string()).map_err(err)
    }
}

/// An ordinal below epsilon-zero in Cantor normal form.
#[pyclass(name = "Ordinal", frozen)]
struct PyOrdinal {
    inner: pastlab::Ordinal,
}

#[pymethods]
impl PyOrdinal {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        pastlab::Ordinal::parse(text).map(|inner| PyOrdinal { inner }).map_err(err)
    }

    fn __str__(&self) -> String {
        self.inner.to_text()
    }

    fn __repr__(&self) -> String {
        format!("Ordinal({:?})", self.inner.to_text())
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.inner.to_text().hash(&mut h);
        h.finish()
    }

    fn __richcmp__(&self, other: &PyOrdinal, op: CompareOp) -> bool {
        op.matches(self.inner.cmp(&other.inner))
    }

    fn natural_sum(&self, other: &PyOrdinal) -> PyOrdinal {
        PyOrdinal { inner: self.inner.natural_sum(&other.inner) }
    }

    fn is_finite(&self) -> bool {
        self.inner.is_finite()
    }
}

fn verdict(v: Verdict) -> (bool, Vec<String>) {
    let lines = v
        .violations
        .iter()
        .map(|x| format!("{}: {} ({} vs {})", x.node, x.condition, x.lhs, x.rhs))
        .collect();
    (v.ok, lines)
}

/// Checks an RSM-map certificate against a state graph.
#[pyfunction(name = "check_rsm")]
fn py_check_rsm(graph_json: &str, cert_json: &str) -> PyResult<(bool, Vec<String>)> {
    let g = StateGraph::from_json_str(graph_json).map_err(err)?;
    let c = RsmCert::from_json_str(cert_json).map_err(err)?;
    check_rsm(&g, &c).map(verdict).map_err(err)
}

/// Checks a rank certificate `(g, k)` against a state graph.
#[pyfunction(name = "check_rule")]
fn py_check_rule(graph_json: &str, cert_json: &str) -> PyResult<(bool, Vec<String>)> {
    let g = StateGraph::from_json_str(graph_json).map_err(err)?;
    let c = RuleCert::from_json_str(cert_json).map_err(err)?;
    check_proof_rule(&g, &c).map(verdict).map_err(err)
}

/// Rank `T` of a hydra given in parenthesis notation, e.g. `((()))`.
#[pyfunction]
fn hydra_rank(text: &str) -> PyResult<PyOrdinal> {
    HydraState::parse(text).map(|h| PyOrdinal { inner: h.t() }).map_err(err)
}

/// Plays one round on `text`, chopping the `head`-th head in pre-order with
/// `e` evolution attempts. Returns `(survival probability, resulting tree)`.
#[pyfunction]
#[pyo3(signature = (text, head = 0, e = 0))]
fn hydra_round(text: &str, head: usize, e: u32) -> PyResult<(String, String)> {
    let h = if text == "line" { line_hydra() } else { HydraState::parse(text).map_err(err)? };
    let heads = h.heads();
    let leaf = *heads.get(head).ok_or_else(|| PyValueError::new_err(format!("no head number {head}")))?;
    let outs = play_round(&h, leaf, e).map_err(err)?;
    let s = outs.into_iter().find(|o| o.survived).expect("a round always has a surviving outcome");
    let tree = s.result.expect("survivors carry a hydra");
    Ok((to_text(&s.prob), tree.to_text()))
}

fn tree_spec(json: &str) -> PyResult<TreeSpec> {
    TreeSpec::from_json_str(json).map_err(err)
}

/// Reduction program for an ω-tree given as JSON.
#[pyfunction]
fn emit_tree_reduction(spec_json: &str) -> PyResult<PyProgram> {
    pastlab::emit_tree_reduction(&tree_spec(spec_json)?).map(|inner| PyProgram { inner }).map_err(err)
}

/// Ordinal program for an ω-tree given as JSON.
#[pyfunction]
fn emit_ordinal_program(spec_json: &str) -> PyResult<PyProgram> {
    pastlab::emit_ordinal_program(&tree_spec(spec_json)?).map(|inner| PyProgram { inner }).map_err(err)
}

#[pymodule]
fn pastlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProgram>()?;
    m.add_class::<PyOrdinal>()?;
    m.add_function(wrap_pyfunction!(py_check_rsm, m)?)?;
    m.add_function(wrap_pyfunction!(py_check_rule, m)?)?;
    m.add_function(wrap_pyfunction!(hydra_rank, m)?)?;
    m.add_function(wrap_pyfunction!(hydra_round, m)?)?;
    m.add_function(wrap_pyfunction!(emit_tree_reduction, m)?)?;
    m.add_function(wrap_pyfunction!(emit_ordinal_program, m)?)?;
    Ok(())
}
