//! Python module `vlgscan`: index construction, pattern parsing and search.

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use ::vlgscan::bench::GAP_BANDS;
use ::vlgscan::match_engine::{self, SearchOptions, StrategyKind};
use ::vlgscan::pattern::{self as pat, GapMode};
use ::vlgscan::text_index::{IndexError, PositionWidth};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn index_err(e: IndexError) -> PyErr {
    match e {
        IndexError::Io(_) => PyIOError::new_err(e.to_string()),
        other => value_err(other),
    }
}

fn gap_mode(name: &str) -> PyResult<GapMode> {
    match name {
        "start" => Ok(GapMode::Start),
        "end" => Ok(GapMode::End),
        other => Err(PyValueError::new_err(format!("unknown gap mode {other:?}"))),
    }
}

/// A parsed variable-length-gapped pattern.
#[pyclass(frozen, name = "Pattern")]
#[derive(Clone)]
struct PyPattern(pat::VlgPattern);

#[pymethods]
impl PyPattern {
    #[new]
    #[pyo3(signature = (text, gap_mode = "start"))]
    fn new(text: &str, gap_mode: &str) -> PyResult<Self> {
        parse_pattern(text, gap_mode)
    }

    /// Subpatterns as bytes objects.
    #[getter]
    fn subpatterns(&self) -> Vec<Vec<u8>> {
        self.0.subpatterns().to_vec()
    }

    /// Start-to-start gaps as `(min, max)` pairs.
    #[getter]
    fn gaps(&self) -> Vec<(u64, u64)> {
        self.0.gaps().iter().map(|g| (g.min, g.max)).collect()
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.k()
    }

    fn __str__(&self) -> String {
        self.0.render()
    }

    fn __repr__(&self) -> String {
        format!("Pattern({:?})", self.0.render())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

/// Outcome of a search.
#[pyclass(frozen, get_all, name = "MatchResult")]
struct PyMatchResult {
    endpoints: Vec<u64>,
    tuples: Option<Vec<Vec<u64>>>,
    truncated: bool,
    /// Candidate totals: raw, after filtering, after exact intersection.
    candidate_stages: (u64, u64, u64),
}

impl From<match_engine::MatchResult> for PyMatchResult {
    fn from(r: match_engine::MatchResult) -> Self {
        let [s0, s1, s2] = r.stats.candidate_stages();
        PyMatchResult {
            endpoints: r.endpoints,
            tuples: r.tuples,
            truncated: r.truncated,
            candidate_stages: (s0, s1, s2),
        }
    }
}

#[pymethods]
impl PyMatchResult {
    fn __len__(&self) -> usize {
        self.endpoints.len()
    }

    fn __repr__(&self) -> String {
        format!("MatchResult(endpoints={}, truncated={})", self.endpoints.len(), self.truncated)
    }
}

/// A text together with its suffix array.
#[pyclass(frozen, name = "Index")]
struct PyIndex(::vlgscan::Index);

#[pymethods]
impl PyIndex {
    #[staticmethod]
    fn build(py: Python<'_>, text: Vec<u8>) -> PyResult<Self> {
        py.allow_threads(|| ::vlgscan::Index::build(text)).map(PyIndex).map_err(index_err)
    }

    #[staticmethod]
    fn load(py: Python<'_>, path: std::path::PathBuf) -> PyResult<Self> {
        py.allow_threads(|| ::vlgscan::Index::load(path)).map(PyIndex).map_err(index_err)
    }

    #[pyo3(signature = (path, width = 5))]
    fn save(&self, py: Python<'_>, path: std::path::PathBuf, width: u8) -> PyResult<()> {
        let width = PositionWidth::from_bytes(width)
            .ok_or_else(|| PyValueError::new_err(format!("width must be 5 or 8, got {width}")))?;
        py.allow_threads(|| self.0.save(path, width)).map_err(index_err)
    }

    /// Ascending start positions of `sub` in the text.
    fn occurrences(&self, sub: &[u8]) -> PyResult<Vec<u64>> {
        let mut positions = self.0.occurrences(sub).map_err(index_err)?;
        positions.sort_unstable();
        Ok(positions)
    }

    /// Half-open SA rank range `(start, end)` of suffixes prefixed by `sub`.
    fn find(&self, sub: &[u8]) -> PyResult<(usize, usize)> {
        let ranks = self.0.find_interval(sub).map_err(index_err)?.ranks();
        Ok((ranks.start, ranks.end))
    }

    #[getter]
    fn text(&self) -> Vec<u8> {
        self.0.text().as_bytes().to_vec()
    }

    fn suffix_array(&self) -> Vec<u64> {
        self.0.suffix_array().to_vec()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    #[allow(clippy::too_many_arguments)]
    #[pyo3(signature = (pattern, strategy = "auto", block_size = None, sort_cost = None, tuples = false, tuple_cap = None))]
    fn search(
        &self,
        py: Python<'_>,
        pattern: &PyPattern,
        strategy: &str,
        block_size: Option<u64>,
        sort_cost: Option<f64>,
        tuples: bool,
        tuple_cap: Option<usize>,
    ) -> PyResult<PyMatchResult> {
        let mut opts = SearchOptions::with_strategy(strategy.parse::<StrategyKind>().map_err(value_err)?);
        opts.block_size = block_size;
        if let Some(c) = sort_cost {
            opts.sort_cost = c;
        }
        if tuples {
            opts.tuples = Some(tuple_cap);
        }
        py.allow_threads(|| match_engine::search(&self.0, &pattern.0, &opts))
            .map(PyMatchResult::from)
            .map_err(value_err)
    }
}

#[pyfunction]
#[pyo3(signature = (text, gap_mode = "start"))]
fn parse_pattern(text: &str, gap_mode: &str) -> PyResult<PyPattern> {
    pat::parse_pattern(text, self::gap_mode(gap_mode)?).map(PyPattern).map_err(value_err)
}

/// Brute-force reference search over raw text, with all tuples.
#[pyfunction]
fn oracle_search(text: &[u8], pattern: &PyPattern) -> PyMatchResult {
    match_engine::oracle_search(text, &pattern.0).into()
}

/// Random `k`-subpattern patterns over frequent `m`-grams of the index
/// text, with every gap set to `gap`.
#[pyfunction]
#[pyo3(signature = (index, k, m, gap, count = 20, seed = 0))]
fn generate_patterns(
    index: &PyIndex,
    k: usize,
    m: usize,
    gap: (u64, u64),
    count: usize,
    seed: u64,
) -> PyResult<Vec<PyPattern>> {
    let gap = pat::GapConstraint::new(gap.0, gap.1).map_err(value_err)?;
    let found = pat::generate_patterns(index.0.text(), k, m, gap, count, seed).map_err(value_err)?;
    Ok(found.into_iter().map(PyPattern).collect())
}

#[pymodule(name = "vlgscan")]
pub fn vlgscan_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyIndex>()?;
    m.add_class::<PyPattern>()?;
    m.add_class::<PyMatchResult>()?;
    m.add_function(wrap_pyfunction!(parse_pattern, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_search, m)?)?;
    m.add_function(wrap_pyfunction!(generate_patterns, m)?)?;
    let bands: Vec<(u64, u64)> = GAP_BANDS.iter().map(|g| (g.min, g.max)).collect();
    m.add("GAP_BANDS", bands)?;
    m.add("STRATEGIES", StrategyKind::ALL.iter().map(|s| s.name()).collect::<Vec<_>>())?;
    Ok(())
}
