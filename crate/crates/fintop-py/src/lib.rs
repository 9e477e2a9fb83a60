//! Python bindings. `Space` wraps the core type; report-producing calls
//! (classify, monad_laws, limit_check, census) return JSON strings so the
//! Python side parses them with the stdlib.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use fintop::census::{run_census, CensusError, CensusOptions};
use fintop::classify::classify;
use fintop::codensity::{
    stabilization_scan, CodensityError, GeneratorKind, DEFAULT_OBJECT_BUDGET,
};
use fintop::doc::SpaceDocument;
use fintop::laws::{verify_monad_laws, LawReport, SoberMonad, StoneMonad};
use fintop::laws::default_probe_panel;
use fintop::sober::{fpo_object, sierpinski_power, SoberError};
use fintop::space::{
    enumerate_continuous_maps, is_homeomorphic, kolmogorov_quotient, quasi_components,
    set_members, FiniteSpace,
};
use fintop::stone::sc_object;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn generator_kind(name: &str) -> PyResult<GeneratorKind> {
    match name {
        "finset" => Ok(GeneratorKind::FinSet),
        "sierpinski" => Ok(GeneratorKind::Sierpinski),
        other => Err(PyValueError::new_err(format!(
            "unknown generator {other:?}; use \"finset\" or \"sierpinski\""
        ))),
    }
}

fn codensity_err(e: CodensityError) -> PyErr {
    match e {
        CodensityError::BudgetExceeded { .. } => PyRuntimeError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// A finite topological space on points 0..points.
#[pyclass(frozen, eq, hash)]
#[derive(PartialEq, Eq, Hash)]
struct Space {
    inner: FiniteSpace,
}

impl Space {
    fn wrap(inner: FiniteSpace) -> Self {
        Space { inner }
    }
}

#[pymethods]
impl Space {
    /// Space(points, opens): opens as lists of point indices; must include
    /// the empty and full sets and be closed under union and intersection.
    #[new]
    fn new(points: usize, opens: Vec<Vec<usize>>) -> PyResult<Self> {
        let doc = SpaceDocument { name: String::new(), points, opens };
        Ok(Space::wrap(doc.to_space().map_err(value_err)?))
    }

    #[staticmethod]
    fn discrete(points: usize) -> PyResult<Self> {
        if points > fintop::space::MAX_POINTS {
            return Err(value_err(format!("at most {} points", fintop::space::MAX_POINTS)));
        }
        Ok(Space::wrap(FiniteSpace::discrete(points)))
    }

    #[staticmethod]
    fn indiscrete(points: usize) -> PyResult<Self> {
        if points > fintop::space::MAX_POINTS {
            return Err(value_err(format!("at most {} points", fintop::space::MAX_POINTS)));
        }
        Ok(Space::wrap(FiniteSpace::indiscrete(points)))
    }

    #[staticmethod]
    fn sierpinski() -> Self {
        Space::wrap(FiniteSpace::sierpinski())
    }

    #[staticmethod]
    fn point() -> Self {
        Space::wrap(FiniteSpace::point())
    }

    #[staticmethod]
    fn empty() -> Self {
        Space::wrap(FiniteSpace::empty())
    }

    /// The m-fold power of the two-point classifier; points are index
    /// subsets encoded as bitmasks.
    #[staticmethod]
    fn sierpinski_power(m: usize) -> PyResult<Self> {
        match sierpinski_power(m) {
            Ok(p) => Ok(Space::wrap(p.space)),
            Err(e @ SoberError::IndexCapExceeded { .. }) => Err(value_err(e)),
            Err(e) => Err(PyRuntimeError::new_err(e.to_string())),
        }
    }

    /// Parse the canonical document format.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let doc = SpaceDocument::from_json(text).map_err(value_err)?;
        Ok(Space::wrap(doc.to_space().map_err(value_err)?))
    }

    #[getter]
    fn points(&self) -> usize {
        self.inner.point_count()
    }

    #[getter]
    fn opens(&self) -> Vec<Vec<usize>> {
        self.inner.opens().iter().map(|&u| set_members(u)).collect()
    }

    /// Canonical document serialization; byte-stable across runs.
    #[pyo3(signature = (name=""))]
    fn to_json(&self, name: &str) -> String {
        SpaceDocument::canonicalize(name, &self.inner)
    }

    fn is_t0(&self) -> bool {
        self.inner.is_t0()
    }

    fn is_discrete(&self) -> bool {
        self.inner.is_discrete()
    }

    fn is_sober(&self) -> bool {
        fintop::sober::is_sober(&self.inner)
    }

    fn is_stone(&self) -> bool {
        classify(&self.inner).is_stone
    }

    /// All four classification flags as a JSON object.
    fn classify(&self) -> String {
        serde_json::to_string(&classify(&self.inner)).unwrap()
    }

    /// Blocks of points lying in exactly the same clopen sets.
    fn quasi_components(&self) -> Vec<Vec<usize>> {
        quasi_components(&self.inner).blocks.iter().map(|&b| set_members(b)).collect()
    }

    /// T0 quotient and the projection as a point table.
    fn kolmogorov_quotient(&self) -> (Self, Vec<usize>) {
        let (q, map) = kolmogorov_quotient(&self.inner);
        (Space::wrap(q), map.mapping().to_vec())
    }

    /// Filter-point carrier and the unit map as a point table.
    fn soberify(&self) -> (Self, Vec<usize>) {
        let t = fpo_object(&self.inner);
        (Space::wrap(t.carrier), t.unit.mapping().to_vec())
    }

    /// Ultrafilter carrier and the unit map as a point table.
    fn stoneify(&self) -> (Self, Vec<usize>) {
        let t = sc_object(&self.inner);
        (Space::wrap(t.carrier), t.unit.mapping().to_vec())
    }

    /// Unit, multiplication, and naturality checks; JSON list with one
    /// report per monad ("stone", "sober", or "both").
    #[pyo3(signature = (monad="both"))]
    fn monad_laws(&self, monad: &str) -> PyResult<String> {
        let probes = default_probe_panel();
        let mut reports: Vec<LawReport> = Vec::new();
        if matches!(monad, "stone" | "both") {
            reports.push(verify_monad_laws(&StoneMonad, &self.inner, &probes));
        }
        if matches!(monad, "sober" | "both") {
            reports.push(verify_monad_laws(&SoberMonad, &self.inner, &probes));
        }
        if reports.is_empty() {
            return Err(PyValueError::new_err(format!(
                "unknown monad {monad:?}; use \"stone\", \"sober\", or \"both\""
            )));
        }
        Ok(serde_json::to_string(&reports).unwrap())
    }

    /// Compare the monad carrier against truncated limits; JSON report with
    /// per-bound verdicts and the first stabilizing bound.
    #[pyo3(signature = (generator="finset", bounds=None, budget=DEFAULT_OBJECT_BUDGET))]
    fn limit_check(
        &self,
        generator: &str,
        bounds: Option<Vec<usize>>,
        budget: usize,
    ) -> PyResult<String> {
        let kind = generator_kind(generator)?;
        let bounds = bounds.unwrap_or_else(|| match kind {
            GeneratorKind::FinSet => (1..=3).collect(),
            GeneratorKind::Sierpinski => (0..=2).collect(),
        });
        let ok = match kind {
            GeneratorKind::FinSet => 1..=6,
            GeneratorKind::Sierpinski => 0..=5,
        };
        if let Some(&bad) = bounds.iter().find(|b| !ok.contains(*b)) {
            return Err(value_err(format!("bound {bad} out of range for {generator}")));
        }
        let report = stabilization_scan(&self.inner, kind, &bounds, budget)
            .map_err(codensity_err)?;
        Ok(serde_json::to_string(&report).unwrap())
    }

    /// Point tables of every continuous map into `other`.
    fn continuous_maps_to(&self, other: &Space) -> Vec<Vec<usize>> {
        enumerate_continuous_maps(&self.inner, &other.inner)
            .iter()
            .map(|f| f.mapping().to_vec())
            .collect()
    }

    /// Point table of a homeomorphism onto `other`, or None.
    fn homeomorphism_to(&self, other: &Space) -> Option<Vec<usize>> {
        is_homeomorphic(&self.inner, &other.inner).map(|f| f.mapping().to_vec())
    }

    fn __repr__(&self) -> String {
        format!("Space(points={}, opens={:?})", self.inner.point_count(), self.opens())
    }
}

/// Every labeled topology on n points, in canonical order.
#[pyfunction]
fn enumerate_spaces(n: usize) -> PyResult<Vec<Space>> {
    if n > 5 {
        return Err(value_err("enumeration supported up to 5 points"));
    }
    Ok(fintop::census::enumerate_topologies(n).into_iter().map(Space::wrap).collect())
}

/// Full census as a JSON list of rows: classification, carrier sizes, law
/// verdicts, and optional per-row limit comparisons.
#[pyfunction]
#[pyo3(signature = (n, cap=4, jobs=None, generator=None, bounds=None))]
fn census(
    n: usize,
    cap: usize,
    jobs: Option<usize>,
    generator: Option<&str>,
    bounds: Option<Vec<usize>>,
) -> PyResult<String> {
    let mut limit_checks = Vec::new();
    if let Some(name) = generator {
        let kind = generator_kind(name)?;
        let chosen = bounds.unwrap_or_else(|| match kind {
            GeneratorKind::FinSet => vec![3],
            GeneratorKind::Sierpinski => vec![2],
        });
        limit_checks.extend(chosen.into_iter().map(|b| (kind, b)));
    } else if bounds.is_some() {
        return Err(PyValueError::new_err("bounds given without a generator"));
    }
    let opts = CensusOptions { cap, jobs, limit_checks, ..Default::default() };
    let rows = run_census(n, &opts).map_err(|e| match e {
        CensusError::CapExceeded { .. } => PyRuntimeError::new_err(e.to_string()),
        CensusError::Codensity(inner) => codensity_err(inner),
    })?;
    Ok(serde_json::to_string(&rows).unwrap())
}

#[pymodule]
fn fintop_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Space>()?;
    m.add_function(wrap_pyfunction!(enumerate_spaces, m)?)?;
    m.add_function(wrap_pyfunction!(census, m)?)?;
    Ok(())
}
