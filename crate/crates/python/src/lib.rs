//! Python bindings for `keygraph`.

use keygraph::analysis::summarize as summarize_graph;
use keygraph::model::{self, derive_all};
use keygraph::montecarlo::{self, trial_rng, ExperimentConfig, SweepAxis, SweepSpec};
use keygraph::sampler::{build_intersection, SampledGraph};
use keygraph::scaling::{evaluate_conditions, example_family, AlphaMinRule};
use keygraph::{ChannelMatrix, ClassDistribution, KeyProfile, SystemParams};
use pyo3::create_exception;
use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(keygraph_py, NoSolutionError, PyValueError);

fn to_py(e: keygraph::Error) -> PyErr {
    match e {
        keygraph::Error::NoSolution { .. } => NoSolutionError::new_err(e.to_string()),
        keygraph::Error::ClassIndex { .. } => PyIndexError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// System parameters: class weights `mu`, ring sizes `k`, pool size and
/// the `r x r` channel matrix `alpha` (list of rows).
#[pyclass(name = "Params", frozen, from_py_object)]
#[derive(Clone)]
struct PyParams {
    inner: SystemParams,
}

#[pymethods]
impl PyParams {
    #[new]
    fn new(mu: Vec<f64>, k: Vec<u64>, pool: u64, alpha: Vec<Vec<f64>>) -> PyResult<Self> {
        let inner = SystemParams::new(
            ClassDistribution::new(mu).map_err(to_py)?,
            KeyProfile::new(k, pool).map_err(to_py)?,
            ChannelMatrix::from_rows(&alpha).map_err(to_py)?,
        )
        .map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn classes(&self) -> usize {
        self.inner.classes()
    }

    #[getter]
    fn mu(&self) -> Vec<f64> {
        self.inner.dist().weights().to_vec()
    }

    #[getter]
    fn ring_sizes(&self) -> Vec<u64> {
        self.inner.keys().ring_sizes().to_vec()
    }

    #[getter]
    fn pool_size(&self) -> u64 {
        self.inner.keys().pool_size()
    }

    #[getter]
    fn alpha(&self) -> Vec<Vec<f64>> {
        let ch = self.inner.channel();
        (0..ch.classes()).map(|i| ch.row(i).to_vec()).collect()
    }

    /// Key-sharing probability of classes `i` and `j` (zero-based).
    fn pairwise_key_prob(&self, i: usize, j: usize) -> PyResult<f64> {
        model::pairwise_key_prob(i, j, self.inner.keys()).map_err(to_py)
    }

    /// `p_ij`, `lambda`, `Lambda`, the indices `m`, `d`, `s` and the
    /// channel extremes.
    fn derive<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = derive_all(&self.inner);
        let out = PyDict::new(py);
        out.set_item("key_share", d.key_share)?;
        out.set_item("mean_key_share", d.mean_key_share)?;
        out.set_item("mean_edge", d.mean_edge)?;
        out.set_item("m", d.m)?;
        out.set_item("d", d.d)?;
        out.set_item("s", d.s)?;
        out.set_item("alpha_min", d.alpha_min)?;
        out.set_item("alpha_max", d.alpha_max)?;
        Ok(out)
    }

    fn __repr__(&self) -> String {
        format!(
            "Params(mu={:?}, k={:?}, pool={}, alpha={:?})",
            self.mu(),
            self.ring_sizes(),
            self.pool_size(),
            self.alpha()
        )
    }
}

#[pyfunction]
fn key_share_probability(k_i: u64, k_j: u64, pool: u64) -> PyResult<f64> {
    model::key_share_probability(k_i, k_j, pool).map_err(to_py)
}

/// Smallest `K_1` with `Lambda_m > ln(n)/n`, for rings `K_1 + offsets`.
#[pyfunction]
fn critical_k1(
    n: usize,
    mu: Vec<f64>,
    alpha: Vec<Vec<f64>>,
    offsets: Vec<u64>,
    pool: u64,
) -> PyResult<u64> {
    let dist = ClassDistribution::new(mu).map_err(to_py)?;
    let channel = ChannelMatrix::from_rows(&alpha).map_err(to_py)?;
    model::critical_k1(n, &dist, &channel, &offsets, pool).map_err(to_py)
}

fn tally_dict<'py>(py: Python<'py>, t: &montecarlo::TrialTally) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    out.set_item("trials", t.trials)?;
    out.set_item("connected_count", t.connected_count)?;
    out.set_item("isolated_free_count", t.isolated_free_count)?;
    out.set_item("p_connected", t.p_connected())?;
    out.set_item("p_isolated_free", t.p_isolated_free())?;
    Ok(out)
}

/// Monte Carlo estimate of connectivity and of having no isolated node.
#[pyfunction]
#[pyo3(signature = (params, n, trials, seed=0, workers=1))]
fn run_trials<'py>(
    py: Python<'py>,
    params: &PyParams,
    n: usize,
    trials: u64,
    seed: u64,
    workers: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let config = ExperimentConfig::new(n, params.inner.clone(), trials, seed).map_err(to_py)?;
    let tally = py
        .detach(|| montecarlo::run_trials(&config, workers))
        .map_err(to_py)?;
    tally_dict(py, &tally)
}

/// Sweep of `K_1` with rings `K_1 + offsets`; one dict per value.
#[pyfunction]
#[pyo3(signature = (params, n, trials, values, offsets, seed=0, workers=1))]
#[allow(clippy::too_many_arguments)]
fn sweep_k1<'py>(
    py: Python<'py>,
    params: &PyParams,
    n: usize,
    trials: u64,
    values: Vec<u64>,
    offsets: Vec<u64>,
    seed: u64,
    workers: usize,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let base = ExperimentConfig::new(n, params.inner.clone(), trials, seed).map_err(to_py)?;
    let values = values.into_iter().map(|v| v as f64).collect();
    let spec = SweepSpec::new(
        SweepAxis::K1 {
            ring_offsets: offsets,
        },
        values,
        base,
    )
    .map_err(to_py)?;
    let result = py
        .detach(|| montecarlo::run_sweep(&spec, workers))
        .map_err(to_py)?;
    result
        .rows
        .iter()
        .map(|row| {
            let d = tally_dict(py, &row.tally)?;
            d.set_item("value", row.value)?;
            d.set_item("lambda_m", row.lambda_m)?;
            d.set_item("c_n", row.c_n)?;
            d.set_item("at_threshold", row.at_threshold)?;
            Ok(d)
        })
        .collect()
}

type ClassesAndEdges = (Vec<usize>, Vec<(u32, u32)>);

/// One sampled graph: `(classes, edges)` with zero-based node ids.
#[pyfunction]
#[pyo3(signature = (params, n, seed=0))]
fn sample_graph(params: &PyParams, n: usize, seed: u64) -> PyResult<ClassesAndEdges> {
    let (assignment, graph) =
        build_intersection(n, &params.inner, &mut trial_rng(seed, 0)).map_err(to_py)?;
    Ok((assignment.classes().to_vec(), graph.edges().to_vec()))
}

/// Component count, isolated nodes and largest component of an edge list.
#[pyfunction]
fn summarize<'py>(
    py: Python<'py>,
    n: usize,
    edges: Vec<(usize, usize)>,
) -> PyResult<Bound<'py, PyDict>> {
    let graph = SampledGraph::from_edges(n, edges).map_err(to_py)?;
    let s = summarize_graph(&graph);
    let out = PyDict::new(py);
    out.set_item("component_count", s.component_count)?;
    out.set_item("isolated_count", s.isolated_count)?;
    out.set_item("largest_component", s.largest_component)?;
    out.set_item("connected", s.component_count == 1)?;
    Ok(out)
}

/// Diagnostics of the two-class scaling example with
/// `alpha_min(n) = (ln n)^-alpha_min_power`.
#[pyfunction]
#[pyo3(signature = (grid, epsilon=0.25, mu=vec![0.5, 0.5], alpha_min_power=2.0, tau=keygraph::scaling::DEFAULT_TAU))]
fn scaling_report<'py>(
    py: Python<'py>,
    grid: Vec<u64>,
    epsilon: f64,
    mu: Vec<f64>,
    alpha_min_power: f64,
    tau: f64,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let dist = ClassDistribution::new(mu).map_err(to_py)?;
    let family = example_family(
        epsilon,
        dist,
        AlphaMinRule::InverseLogPower(alpha_min_power),
    )
    .map_err(to_py)?;
    let report = evaluate_conditions(&family, &grid, tau).map_err(to_py)?;
    report
        .rows
        .iter()
        .map(|row| {
            let d = PyDict::new(py);
            d.set_item("n", row.n)?;
            d.set_item("ring_sizes", row.ring_sizes.clone())?;
            d.set_item("pool_size", row.pool_size)?;
            d.set_item("m", row.m)?;
            d.set_item("lambda_m", row.lambda_m)?;
            d.set_item("c_n", row.c_n)?;
            d.set_item("pool_ratio", row.pool_ratio)?;
            d.set_item("edge_floor", row.edge_floor)?;
            d.set_item("ring_spread", row.ring_spread)?;
            d.set_item("channel_spread", row.channel_spread)?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
fn keygraph_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyParams>()?;
    m.add("NoSolutionError", m.py().get_type::<NoSolutionError>())?;
    m.add_function(wrap_pyfunction!(key_share_probability, m)?)?;
    m.add_function(wrap_pyfunction!(critical_k1, m)?)?;
    m.add_function(wrap_pyfunction!(run_trials, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_k1, m)?)?;
    m.add_function(wrap_pyfunction!(sample_graph, m)?)?;
    m.add_function(wrap_pyfunction!(summarize, m)?)?;
    m.add_function(wrap_pyfunction!(scaling_report, m)?)?;
    Ok(())
}
