//! Python bindings: parse MiniOO snapshots, distill change models, select
//! tests, run suites, and compare reduced suites by mutation testing.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use pyo3::exceptions::{PyKeyError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use chtest_core::frontend::print_program;
use chtest_core::model::{ChangeId, ResolutionMode};
use chtest_core::mutator::{self, ComparisonReport, EvaluationConfig, MutationError};
use chtest_core::runtime::{discover_tests, RunConfig};
use chtest_core::selector::{self, TestConfig};
use chtest_core::{distill_delta, distill_initial, load_snapshot_dir, parse_snapshot, Resolution, SubjectId};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_mode(mode: &str) -> PyResult<ResolutionMode> {
    mode.parse().map_err(value_error)
}

fn test_config(test_class_pattern: Option<&str>, tests_pattern: Option<&str>) -> PyResult<TestConfig> {
    TestConfig::with_patterns(test_class_pattern, tests_pattern).map_err(value_error)
}

fn strings(ids: impl IntoIterator<Item = SubjectId>) -> Vec<String> {
    ids.into_iter().map(|id| id.0).collect()
}

/// A parsed and checked MiniOO snapshot.
#[pyclass(module = "chtest", frozen)]
struct Program {
    inner: chtest_core::Program,
    warnings: Vec<String>,
}

#[pymethods]
impl Program {
    /// Parses a mapping of file name to source text.
    #[staticmethod]
    fn parse(files: BTreeMap<String, String>) -> PyResult<Self> {
        let files: Vec<(String, String)> = files.into_iter().collect();
        let snapshot = parse_snapshot(&files).map_err(value_error)?;
        Ok(Program {
            inner: snapshot.program,
            warnings: snapshot.warnings.iter().map(|w| w.to_string()).collect(),
        })
    }

    /// Loads every `.moo` file of a directory.
    #[staticmethod]
    fn load(dir: PathBuf) -> PyResult<Self> {
        let snapshot = load_snapshot_dir(&dir).map_err(value_error)?;
        Ok(Program {
            inner: snapshot.program,
            warnings: snapshot.warnings.iter().map(|w| w.to_string()).collect(),
        })
    }

    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.warnings.clone()
    }

    #[getter]
    fn classes(&self) -> Vec<String> {
        self.inner.classes.iter().map(|c| c.name.clone()).collect()
    }

    /// Canonical source text.
    fn source(&self) -> String {
        print_program(&self.inner)
    }

    #[pyo3(signature = (test_class_pattern=None, tests_pattern=None))]
    fn tests(&self, test_class_pattern: Option<&str>, tests_pattern: Option<&str>) -> PyResult<Vec<String>> {
        let cfg = test_config(test_class_pattern, tests_pattern)?;
        Ok(strings(discover_tests(&self.inner, &cfg)))
    }

    fn __repr__(&self) -> String {
        format!("Program(classes={})", self.inner.classes.len())
    }
}

/// A change (`(id, kind, subject id, dependencies)`).
type ChangeTuple = (u64, String, String, Vec<u64>);

/// An append-only change model.
#[pyclass(module = "chtest")]
struct Model {
    inner: chtest_core::ChangeModel,
}

#[pymethods]
impl Model {
    /// Distills the initial model of a program.
    #[staticmethod]
    #[pyo3(signature = (program, mode="static", constructors=false))]
    fn distill(program: &Program, mode: &str, constructors: bool) -> PyResult<Self> {
        let resolution = Resolution::new(parse_mode(mode)?).with_constructors(constructors);
        let inner = distill_initial(&program.inner, resolution).map_err(value_error)?;
        Ok(Model { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = chtest_core::ChangeModel::from_json(text).map_err(value_error)?;
        Ok(Model { inner })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    /// Appends the difference between two snapshots; returns the new change ids.
    fn extend(&mut self, old: &Program, new: &Program) -> PyResult<Vec<u64>> {
        let ids = distill_delta(&mut self.inner, &old.inner, &new.inner).map_err(value_error)?;
        Ok(ids.into_iter().map(|id| id.0).collect())
    }

    #[getter]
    fn mode(&self) -> String {
        self.inner.resolution().mode.to_string()
    }

    #[getter]
    fn include_constructors(&self) -> bool {
        self.inner.resolution().include_constructors
    }

    fn changes(&self) -> Vec<ChangeTuple> {
        self.inner
            .changes()
            .iter()
            .map(|c| {
                (
                    c.change_id.0,
                    c.kind.to_string(),
                    c.subject_id.0.clone(),
                    c.depends_on.iter().map(|d| d.0).collect(),
                )
            })
            .collect()
    }

    /// Ids of the subjects that are currently alive.
    fn subjects(&self) -> Vec<String> {
        self.inner.alive_subjects().map(|s| s.id.0.clone()).collect()
    }

    /// Test method ids relevant to the given changes.
    #[pyo3(signature = (changes, test_class_pattern=None, tests_pattern=None))]
    fn select(
        &self,
        changes: Vec<u64>,
        test_class_pattern: Option<&str>,
        tests_pattern: Option<&str>,
    ) -> PyResult<Vec<String>> {
        let cfg = test_config(test_class_pattern, tests_pattern)?;
        let selected = changes
            .into_iter()
            .map(|id| {
                self.inner
                    .change(ChangeId(id))
                    .cloned()
                    .ok_or_else(|| PyKeyError::new_err(format!("unknown change {id}")))
            })
            .collect::<PyResult<Vec<_>>>()?;
        Ok(strings(selector::select_relevant_tests(&self.inner, &selected, &cfg).all_tests()))
    }

    /// Test class ids relevant to a modification of every method of `class`.
    #[pyo3(signature = (class, test_class_pattern=None, tests_pattern=None))]
    fn select_for_class(
        &self,
        class: &str,
        test_class_pattern: Option<&str>,
        tests_pattern: Option<&str>,
    ) -> PyResult<Vec<String>> {
        let cfg = test_config(test_class_pattern, tests_pattern)?;
        let tests = selector::select_for_class(&self.inner, &SubjectId::class(class), &cfg)
            .map_err(|e| PyKeyError::new_err(e.to_string()))?;
        Ok(strings(tests))
    }

    /// The same history linked under another resolution mode.
    fn relinked(&self, mode: &str) -> PyResult<Self> {
        Ok(Model {
            inner: self.inner.relinked(parse_mode(mode)?),
        })
    }

    fn __len__(&self) -> usize {
        self.inner.changes().len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Model(mode={}, constructors={}, changes={})",
            self.inner.resolution().mode,
            self.inner.resolution().include_constructors,
            self.inner.changes().len()
        )
    }
}

/// Result of a two-mode mutation comparison.
#[pyclass(module = "chtest", frozen)]
struct Report {
    inner: ComparisonReport,
}

#[pymethods]
impl Report {
    #[getter]
    fn total_mutants(&self) -> usize {
        self.inner.total_mutants
    }

    #[getter]
    fn killed_full(&self) -> usize {
        self.inner.killed_full
    }

    #[getter]
    fn killed_a(&self) -> usize {
        self.inner.killed_a
    }

    #[getter]
    fn killed_b(&self) -> usize {
        self.inner.killed_b
    }

    #[getter]
    fn reduction_ratio_a(&self) -> f64 {
        self.inner.reduction_ratio_a
    }

    #[getter]
    fn reduction_ratio_b(&self) -> f64 {
        self.inner.reduction_ratio_b
    }

    /// `(class, mutants, killed_full, killed_a, killed_b, classification)` per row.
    fn rows(&self) -> Vec<(String, usize, usize, usize, usize, String)> {
        self.inner
            .rows
            .iter()
            .map(|r| {
                (
                    r.class.clone(),
                    r.mutants,
                    r.killed_full.len(),
                    r.killed_a.len(),
                    r.killed_b.len(),
                    r.classification.to_string(),
                )
            })
            .collect()
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }

    fn summary(&self) -> String {
        self.inner.summary()
    }
}

fn run_config(step_budget: Option<u64>, tests: TestConfig) -> RunConfig {
    let mut cfg = RunConfig::from_env();
    if let Some(budget) = step_budget {
        cfg.step_budget = budget;
    }
    cfg.tests = tests;
    cfg
}

/// Runs every test; returns `(test, status, message)` triples.
#[pyfunction]
#[pyo3(signature = (program, test_class_pattern=None, tests_pattern=None, step_budget=None))]
fn run_suite(
    py: Python<'_>,
    program: &Program,
    test_class_pattern: Option<&str>,
    tests_pattern: Option<&str>,
    step_budget: Option<u64>,
) -> PyResult<Vec<(String, String, Option<String>)>> {
    let cfg = run_config(step_budget, test_config(test_class_pattern, tests_pattern)?);
    let outcomes = py.detach(|| {
        let tests = discover_tests(&program.inner, &cfg.tests);
        chtest_core::runtime::run_suite(&program.inner, &tests, &cfg)
    });
    Ok(outcomes
        .into_iter()
        .map(|o| (o.test.0, o.status.to_string(), o.message))
        .collect())
}

/// Production-code mutants as `(id, method, operator, description)`.
#[pyfunction]
#[pyo3(signature = (program, test_class_pattern=None, tests_pattern=None))]
fn mutants(
    program: &Program,
    test_class_pattern: Option<&str>,
    tests_pattern: Option<&str>,
) -> PyResult<Vec<(usize, String, String, String)>> {
    let cfg = test_config(test_class_pattern, tests_pattern)?;
    Ok(mutator::generate_production_mutants(&program.inner, &cfg)
        .into_iter()
        .map(|m| (m.id, m.method.0, m.operator.to_string(), m.description))
        .collect())
}

/// Compares per-class reduced suites of two resolution modes.
#[pyfunction]
#[pyo3(signature = (program, mode_a="static", mode_b="poly", constructors=false, step_budget=None))]
fn evaluate(
    py: Python<'_>,
    program: &Program,
    mode_a: &str,
    mode_b: &str,
    constructors: bool,
    step_budget: Option<u64>,
) -> PyResult<Report> {
    let cfg = EvaluationConfig {
        mode_a: parse_mode(mode_a)?,
        mode_b: parse_mode(mode_b)?,
        include_constructors: constructors,
        run: run_config(step_budget, TestConfig::default()),
    };
    let inner = py
        .detach(|| mutator::evaluate(&program.inner, &cfg))
        .map_err(|e| match e {
            MutationError::BaselineFailure(_) => PyRuntimeError::new_err(e.to_string()),
            other => value_error(other),
        })?;
    Ok(Report { inner })
}

/// `|reduced| / |full|`; `reduced` must be a subset of a non-empty `full`.
#[pyfunction]
fn reduction_ratio(full: Vec<String>, reduced: Vec<String>) -> PyResult<f64> {
    let full: BTreeSet<SubjectId> = full.into_iter().map(SubjectId).collect();
    let reduced: BTreeSet<SubjectId> = reduced.into_iter().map(SubjectId).collect();
    selector::reduction_ratio(&full, &reduced).map_err(value_error)
}

#[pymodule]
fn chtest(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Program>()?;
    m.add_class::<Model>()?;
    m.add_class::<Report>()?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add_function(wrap_pyfunction!(mutants, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(reduction_ratio, m)?)?;
    Ok(())
}
