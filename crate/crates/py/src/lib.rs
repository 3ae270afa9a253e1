//! Python bindings for the `fpscp` decoders.

use std::sync::OnceLock;

use fpscp::fixed_route::FixedRouteOptions;
use fpscp::harness::{decode_with, generate_instance, run_comparison, InstanceParams, MethodOptions};
use fpscp::io::{emit_instance, emit_solution, parse_instance, parse_solution};
use fpscp::joint::JointOptions;
use fpscp::permgen::{generate, stochastic_knn, uniform_random, PermGenConfig, PermKind};
use fpscp::{ChargingMatrix, DecodeResult, Method, Permutation, Solution};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Instance", module = "fpscp_py", frozen)]
struct PyInstance {
    inner: fpscp::Instance,
    matrix: OnceLock<ChargingMatrix>,
}

impl PyInstance {
    fn wrap(inner: fpscp::Instance) -> Self {
        PyInstance {
            inner,
            matrix: OnceLock::new(),
        }
    }

    fn matrix(&self) -> &ChargingMatrix {
        self.matrix.get_or_init(|| ChargingMatrix::build(&self.inner))
    }

    fn permutation(&self, order: Vec<usize>) -> PyResult<Permutation> {
        Permutation::for_instance(order, &self.inner).map_err(value_error)
    }
}

#[pymethods]
impl PyInstance {
    /// Parses benchmark instance text.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        parse_instance(text).map(Self::wrap).map_err(value_error)
    }

    #[staticmethod]
    fn from_file(path: std::path::PathBuf) -> PyResult<Self> {
        let text = std::fs::read_to_string(&path)?;
        Self::parse(&text)
    }

    /// Random unit-square instance; defaults are the baseline parameters.
    #[staticmethod]
    #[pyo3(signature = (customers=100, stations=10, battery=2.0, cargo=200.0, max_demand=10.0, consumption=1.0, seed=0))]
    fn generate(
        customers: usize,
        stations: usize,
        battery: f64,
        cargo: f64,
        max_demand: f64,
        consumption: f64,
        seed: u64,
    ) -> PyResult<Self> {
        for (name, v) in [
            ("battery", battery),
            ("cargo", cargo),
            ("max_demand", max_demand),
            ("consumption", consumption),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(value_error(format!("{name} must be positive")));
            }
        }
        if max_demand > cargo {
            return Err(value_error("max_demand exceeds cargo"));
        }
        let params = InstanceParams {
            customers,
            stations,
            battery_capacity: battery,
            cargo_capacity: cargo,
            max_demand,
            consumption_rate: consumption,
        };
        Ok(Self::wrap(generate_instance(&params, seed)))
    }

    fn to_text(&self) -> String {
        emit_instance(&self.inner)
    }

    #[getter]
    fn name(&self) -> &str {
        self.inner.name()
    }

    #[getter]
    fn num_customers(&self) -> usize {
        self.inner.num_customers()
    }

    #[getter]
    fn num_stations(&self) -> usize {
        self.inner.num_stations()
    }

    #[getter]
    fn cargo_capacity(&self) -> f64 {
        self.inner.cargo_capacity()
    }

    #[getter]
    fn battery_capacity(&self) -> f64 {
        self.inner.battery_capacity()
    }

    #[getter]
    fn consumption_rate(&self) -> f64 {
        self.inner.consumption_rate()
    }

    fn __repr__(&self) -> String {
        format!(
            "Instance({:?}, customers={}, stations={})",
            self.inner.name(),
            self.inner.num_customers(),
            self.inner.num_stations()
        )
    }
}

/// Node tokens: `D` depot, `C<i>` customer, `S<j>` station.
#[pyclass(name = "Solution", module = "fpscp_py", frozen)]
struct PySolution {
    inner: Solution,
}

#[pymethods]
impl PySolution {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        parse_solution(text)
            .map(|inner| PySolution { inner })
            .map_err(value_error)
    }

    fn to_text(&self) -> String {
        emit_solution(&self.inner)
    }

    #[getter]
    fn sequence(&self) -> Vec<String> {
        self.inner.sequence.iter().map(ToString::to_string).collect()
    }

    #[getter]
    fn distance(&self) -> f64 {
        self.inner.total_distance
    }

    #[getter]
    fn routes(&self) -> Vec<Vec<String>> {
        self.inner
            .routes()
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect()
    }

    #[getter]
    fn customer_order(&self) -> Vec<usize> {
        self.inner.customer_order()
    }

    #[getter]
    fn stations_visited(&self) -> usize {
        self.inner.stations_visited()
    }

    fn __repr__(&self) -> String {
        format!(
            "Solution(distance={}, nodes={})",
            self.inner.total_distance,
            self.inner.sequence.len()
        )
    }
}

#[pyclass(name = "DecodeResult", module = "fpscp_py", frozen)]
struct PyDecodeResult {
    inner: DecodeResult,
}

#[pymethods]
impl PyDecodeResult {
    #[getter]
    fn solved(&self) -> bool {
        self.inner.is_solved()
    }

    #[getter]
    fn distance(&self) -> Option<f64> {
        self.inner.distance()
    }

    #[getter]
    fn solution(&self) -> Option<PySolution> {
        self.inner.solution().map(|s| PySolution { inner: s.clone() })
    }

    #[getter]
    fn max_front(&self) -> usize {
        self.inner.stats.max_front
    }

    #[getter]
    fn generated(&self) -> usize {
        self.inner.stats.generated
    }

    #[getter]
    fn pruned(&self) -> usize {
        self.inner.stats.pruned
    }

    #[getter]
    fn elapsed_s(&self) -> f64 {
        self.inner.stats.elapsed.as_secs_f64()
    }

    fn __repr__(&self) -> String {
        match self.inner.distance() {
            Some(d) => format!("DecodeResult(solved, distance={d})"),
            None => "DecodeResult(infeasible)".to_string(),
        }
    }
}

fn method(name: &str) -> PyResult<Method> {
    name.parse().map_err(value_error)
}

/// Decodes one customer order with `fp`, `fr` or `ss`.
#[pyfunction]
#[pyo3(signature = (instance, order, method="fp", allow_depot_as_station=true))]
fn decode(
    py: Python<'_>,
    instance: &PyInstance,
    order: Vec<usize>,
    method: &str,
    allow_depot_as_station: bool,
) -> PyResult<PyDecodeResult> {
    let m = self::method(method)?;
    let perm = instance.permutation(order)?;
    let options = MethodOptions {
        single_stop: FixedRouteOptions {
            allow_depot_as_station,
            ..FixedRouteOptions::default()
        },
    };
    let inner = py.detach(|| decode_with(m, &instance.inner, instance.matrix(), &perm, &options));
    Ok(PyDecodeResult { inner })
}

/// Optimal joint distance only, without reconstruction. `prune=False` keeps every label.
#[pyfunction]
#[pyo3(signature = (instance, order, prune=true))]
fn joint_distance(
    py: Python<'_>,
    instance: &PyInstance,
    order: Vec<usize>,
    prune: bool,
) -> PyResult<Option<f64>> {
    let perm = instance.permutation(order)?;
    let options = JointOptions {
        prune,
        ..JointOptions::default()
    };
    let decoder = fpscp::joint::JointDecoder::with_options(&instance.inner, instance.matrix(), options);
    Ok(py.detach(|| decoder.optimal_distance(&perm)))
}

/// Optimal depot cuts of `order`, ignoring the battery. `None` when a demand exceeds the capacity.
#[pyfunction]
fn split(instance: &PyInstance, order: Vec<usize>) -> PyResult<Option<(Vec<Vec<usize>>, f64)>> {
    let perm = instance.permutation(order)?;
    Ok(fpscp::split::split(&instance.inner, &perm).map(|p| (p.routes, p.total_distance)))
}

#[pyfunction(name = "uniform_random")]
fn py_uniform_random(n: usize, seed: u64) -> Vec<usize> {
    uniform_random(n, seed).into_inner()
}

#[pyfunction(name = "stochastic_knn")]
fn py_stochastic_knn(instance: &PyInstance, k: usize, seed: u64) -> PyResult<Vec<usize>> {
    if k == 0 {
        return Err(value_error("k must be at least 1"));
    }
    Ok(stochastic_knn(&instance.inner, k, seed).into_inner())
}

fn perm_config(kind: &str, k: usize, count: usize, seed: u64) -> PyResult<PermGenConfig> {
    let kind = match kind {
        "knn" if k > 0 => PermKind::StochasticKnn { k },
        "knn" => return Err(value_error("k must be at least 1")),
        "uniform" => PermKind::UniformRandom,
        other => {
            return Err(value_error(format!(
                "unknown kind {other:?}, expected knn or uniform"
            )))
        }
    };
    Ok(PermGenConfig { kind, seed, count })
}

/// `count` seeded orders; permutation `i` uses a seed derived from `(seed, i)`.
#[pyfunction]
#[pyo3(signature = (instance, count, kind="knn", k=2, seed=0))]
fn permutations(
    instance: &PyInstance,
    count: usize,
    kind: &str,
    k: usize,
    seed: u64,
) -> PyResult<Vec<Vec<usize>>> {
    let config = perm_config(kind, k, count, seed)?;
    Ok(generate(&instance.inner, &config)
        .into_iter()
        .map(Permutation::into_inner)
        .collect())
}

/// Violated constraints as messages; an empty list means the solution is valid.
#[pyfunction]
fn validate(instance: &PyInstance, order: Vec<usize>, solution: &PySolution) -> PyResult<Vec<String>> {
    let perm = instance.permutation(order)?;
    Ok(match fpscp::validate(&instance.inner, &perm, &solution.inner) {
        Ok(()) => Vec::new(),
        Err(v) => v.iter().map(ToString::to_string).collect(),
    })
}

/// Solve rates and gap statistics per instance and method, one dict each.
#[pyfunction]
#[pyo3(signature = (instances, count=100, kind="knn", k=2, seed=0, methods=vec!["fp".to_string(), "fr".to_string(), "ss".to_string()]))]
fn compare<'py>(
    py: Python<'py>,
    instances: Vec<PyRef<'py, PyInstance>>,
    count: usize,
    kind: &str,
    k: usize,
    seed: u64,
    methods: Vec<String>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let config = perm_config(kind, k, count, seed)?;
    let methods = methods.iter().map(|m| method(m)).collect::<PyResult<Vec<_>>>()?;
    let owned: Vec<fpscp::Instance> = instances.iter().map(|i| i.inner.clone()).collect();
    let cmp = py.detach(|| run_comparison(&owned, &config, &methods, &MethodOptions::default()));
    cmp.report
        .summaries
        .iter()
        .map(|s| {
            let d = PyDict::new(py);
            d.set_item("instance", &s.instance)?;
            d.set_item("method", s.method.id())?;
            d.set_item("permutations", s.permutations)?;
            d.set_item("feasible", s.feasible)?;
            d.set_item("solved", s.solved)?;
            d.set_item("solved_pct", s.solved_pct)?;
            d.set_item("zero_gap_pct", s.zero_gap_pct)?;
            d.set_item("p90", s.p90)?;
            d.set_item("p95", s.p95)?;
            d.set_item("gaps", s.gaps.clone())?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
fn fpscp_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInstance>()?;
    m.add_class::<PySolution>()?;
    m.add_class::<PyDecodeResult>()?;
    m.add_function(wrap_pyfunction!(decode, m)?)?;
    m.add_function(wrap_pyfunction!(joint_distance, m)?)?;
    m.add_function(wrap_pyfunction!(split, m)?)?;
    m.add_function(wrap_pyfunction!(py_uniform_random, m)?)?;
    m.add_function(wrap_pyfunction!(py_stochastic_knn, m)?)?;
    m.add_function(wrap_pyfunction!(permutations, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    Ok(())
}
