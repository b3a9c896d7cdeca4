//! Python bindings. Rankings cross the boundary as lists of `int | None`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use rankagg::ip::{build_model, export_model};
use rankagg::ranking::enumerate_weak_orders as enumerate;
use rankagg::sampling::{sample_rankings, Generator, MallowsParams, SizeDist};
use rankagg::{BnbOptions, Coefficient, Instance, Measure, MeasureConfig, Ranking};

fn err(e: rankagg::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn ranking(positions: Vec<Option<i64>>) -> PyResult<Ranking> {
    Ranking::new(positions).map_err(err)
}

fn positions(r: &Ranking) -> Vec<Option<u32>> {
    r.positions().to_vec()
}

fn instance(rows: Vec<Vec<Option<i64>>>) -> PyResult<Instance> {
    let judges = rows.into_iter().map(ranking).collect::<PyResult<Vec<_>>>()?;
    Instance::from_judges(judges).map_err(err)
}

fn parse<T: std::str::FromStr<Err = rankagg::Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(err)
}

/// Compares two rankings with `measure` (tau, tau_x, tau_x_hat, d_ks, d_pks, d_npks).
#[pyfunction]
#[pyo3(signature = (measure, a, b, gamma = 4.0))]
fn compare(measure: &str, a: Vec<Option<i64>>, b: Vec<Option<i64>>, gamma: f64) -> PyResult<f64> {
    let m: Measure = parse(measure)?;
    let cfg = MeasureConfig::new(gamma).map_err(err)?;
    m.evaluate(&ranking(a)?, &ranking(b)?, &cfg).map_err(err)
}

#[pyfunction]
fn tau_x_hat(a: Vec<Option<i64>>, b: Vec<Option<i64>>) -> PyResult<f64> {
    rankagg::tau_x_hat(&ranking(a)?, &ranking(b)?).map_err(err)
}

#[pyfunction]
fn tau_x(a: Vec<Option<i64>>, b: Vec<Option<i64>>) -> PyResult<f64> {
    rankagg::tau_x(&ranking(a)?, &ranking(b)?).map_err(err)
}

#[pyclass(frozen, get_all)]
struct OptimalitySet {
    measure: String,
    rankings: Vec<Vec<Option<u32>>>,
    objective: f64,
    penalty: f64,
    nodes_explored: u64,
    proven_complete: bool,
    skipped_judges: usize,
}

#[pymethods]
impl OptimalitySet {
    fn __len__(&self) -> usize {
        self.rankings.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "OptimalitySet(measure={:?}, optima={}, objective={}, proven_complete={})",
            self.measure,
            self.rankings.len(),
            self.objective,
            self.proven_complete
        )
    }
}

/// All consensus rankings of `rankings` under `measure` (tau_x or tau_x_hat).
#[pyfunction]
#[pyo3(signature = (rankings, measure = "tau_x_hat", node_limit = None))]
fn aggregate(rankings: Vec<Vec<Option<i64>>>, measure: &str, node_limit: Option<u64>) -> PyResult<OptimalitySet> {
    let c: Coefficient = parse(measure)?;
    let inst = instance(rankings)?;
    let opts = BnbOptions { node_limit, ..Default::default() };
    let set = rankagg::solve(&inst, c, &opts).map_err(err)?;
    Ok(OptimalitySet {
        measure: c.name().to_string(),
        rankings: set.rankings.iter().map(positions).collect(),
        objective: set.objective,
        penalty: set.penalty,
        nodes_explored: set.nodes_explored,
        proven_complete: set.proven_complete,
        skipped_judges: set.skipped_judges,
    })
}

/// Draws `count` rankings from a Mallows model around `reference`.
#[pyfunction]
#[pyo3(signature = (reference, phi, count, seed, generator = "rim", subset_size = None))]
fn sample(
    reference: Vec<i64>,
    phi: f64,
    count: usize,
    seed: u64,
    generator: &str,
    subset_size: Option<(usize, usize)>,
) -> PyResult<Vec<Vec<Option<u32>>>> {
    let g: Generator = parse(generator)?;
    let params = MallowsParams::new(ranking(reference.into_iter().map(Some).collect())?, phi).map_err(err)?;
    let sizes = subset_size.map(|(l, u)| SizeDist::new(l, u));
    let rows = sample_rankings(g, &params, sizes.as_ref(), count, seed).map_err(err)?;
    Ok(rows.iter().map(positions).collect())
}

#[pyfunction]
fn enumerate_weak_orders(n: usize) -> PyResult<Vec<Vec<Option<u32>>>> {
    Ok(enumerate(n).map_err(err)?.map(|r| positions(&r)).collect())
}

/// Writes the integer programming model in LP format.
#[pyfunction]
#[pyo3(signature = (rankings, path, measure = "tau_x_hat"))]
fn export_ip(rankings: Vec<Vec<Option<i64>>>, path: &str, measure: &str) -> PyResult<()> {
    let c: Coefficient = parse(measure)?;
    let model = build_model(&instance(rankings)?, c).map_err(err)?;
    export_model(&model, path).map_err(err)
}

#[pymodule]
fn pyrankagg(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<OptimalitySet>()?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    m.add_function(wrap_pyfunction!(tau_x, m)?)?;
    m.add_function(wrap_pyfunction!(tau_x_hat, m)?)?;
    m.add_function(wrap_pyfunction!(aggregate, m)?)?;
    m.add_function(wrap_pyfunction!(sample, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_weak_orders, m)?)?;
    m.add_function(wrap_pyfunction!(export_ip, m)?)?;
    Ok(())
}
