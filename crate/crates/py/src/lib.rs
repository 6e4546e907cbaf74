//! Python bindings: groups, divisor profiles, verification reports and uniqueness probes.
//!
//! Exact values cross the boundary as strings in the literal grammar (`3/2`, `zeta(8)^3`).

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ::kleinian::dynkin::{affine_diagram, match_profile, null_vector};
use ::kleinian::export;
use ::kleinian::expr::{parse_number, parse_xyz};
use ::kleinian::groups::GroupKind;
use ::kleinian::invariants::{expand_xyz, invariant_triple};
use ::kleinian::mckay::verify_mckay;
use ::kleinian::pipeline;
use ::kleinian::profile::{ComponentKind, DivisorProfile};
use ::kleinian::resolution::{candidate_profile_e, divisor_profile_a, divisor_profile_d_of};

fn err(e: ::kleinian::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn kind_of(kind: &str, r: Option<u32>) -> PyResult<GroupKind> {
    let kind = kind.trim();
    let split = kind.find(|c: char| c.is_ascii_digit()).unwrap_or(kind.len());
    let (family, digits) = kind.split_at(split);
    let inline = digits.parse::<u32>().ok();
    let r = inline.or(r);
    if family.eq_ignore_ascii_case("E") {
        return GroupKind::new("E", r).map_err(err);
    }
    GroupKind::new(family, r).map_err(err)
}

fn number(c: Option<&str>) -> PyResult<Option<::kleinian::arith::CycloNum>> {
    c.map(parse_number).transpose().map_err(err)
}

/// A finite subgroup of SL2 with its elements enumerated exactly.
#[pyclass(name = "Group", frozen)]
struct PyGroup {
    inner: ::kleinian::groups::GroupData,
}

#[pymethods]
impl PyGroup {
    #[new]
    #[pyo3(signature = (kind, r=None))]
    fn new(kind: &str, r: Option<u32>) -> PyResult<Self> {
        let k = kind_of(kind, r)?;
        Ok(Self {
            inner: ::kleinian::groups::build_group(k).map_err(err)?,
        })
    }

    #[getter]
    fn kind(&self) -> String {
        self.inner.kind.to_string()
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    #[getter]
    fn projective_order(&self) -> usize {
        self.inner.projective_order()
    }

    #[getter]
    fn class_count(&self) -> usize {
        self.inner.conjugacy_classes().len()
    }

    /// (relation, holds) for every defining relation.
    fn relations(&self) -> Vec<(String, bool)> {
        self.inner
            .check_relations()
            .into_iter()
            .map(|r| (r.relation, r.holds))
            .collect()
    }

    /// Dimensions of the irreducible characters, trivial first.
    fn mckay_dimensions(&self) -> PyResult<Vec<u32>> {
        let rep = verify_mckay(&self.inner, self.inner.kind).map_err(err)?;
        Ok(rep.dimensions)
    }

    fn mckay_matches_diagram(&self) -> PyResult<bool> {
        Ok(verify_mckay(&self.inner, self.inner.kind).map_err(err)?.passed())
    }

    fn __repr__(&self) -> String {
        format!("Group({}, order={})", self.inner.kind, self.inner.order())
    }
}

/// The divisor of a function on the minimal resolution.
#[pyclass(name = "DivisorProfile", frozen)]
struct PyProfile {
    kind: GroupKind,
    inner: DivisorProfile,
}

#[pymethods]
impl PyProfile {
    /// (id, "exceptional" | "open", multiplicity) per component.
    #[getter]
    fn components(&self) -> Vec<(String, &'static str, u32)> {
        self.inner
            .components
            .iter()
            .map(|c| {
                let k = match c.kind {
                    ComponentKind::Exceptional => "exceptional",
                    ComponentKind::Open => "open",
                };
                (c.id.clone(), k, c.multiplicity)
            })
            .collect()
    }

    #[getter]
    fn adjacency(&self) -> Vec<(String, String, u32)> {
        self.inner.adjacency.clone()
    }

    fn multiplicity(&self, id: &str) -> Option<u32> {
        self.inner.multiplicity(id)
    }

    /// Whether the profile reproduces the affine diagram, with the open part as ⊕.
    fn matches_diagram(&self) -> PyResult<bool> {
        Ok(match_profile(&self.inner, &affine_diagram(self.kind).map_err(err)?).is_ok())
    }

    fn to_json(&self) -> PyResult<String> {
        let m = match_profile(&self.inner, &affine_diagram(self.kind).map_err(err)?).ok();
        Ok(export::profile_json(&self.inner, m.as_ref()))
    }

    fn to_dot(&self) -> String {
        export::profile_dot(&self.inner, &format!("divisor {}", self.kind))
    }

    fn __repr__(&self) -> String {
        let parts: Vec<String> = self
            .inner
            .components
            .iter()
            .map(|c| format!("{}:{}", c.id, c.multiplicity))
            .collect();
        format!("DivisorProfile({}: {})", self.kind, parts.join(" "))
    }
}

/// Divisor of F (X for A and E, X + cY for D), or of `candidate` given as an expression in X, Y, Z.
#[pyfunction]
#[pyo3(signature = (kind, r=None, c=None, candidate=None))]
fn divisor_profile(kind: &str, r: Option<u32>, c: Option<&str>, candidate: Option<&str>) -> PyResult<PyProfile> {
    let k = kind_of(kind, r)?;
    let c = number(c)?;
    let expr = match candidate {
        Some(s) => parse_xyz(s).map_err(err)?,
        None => pipeline::distinguished_xyz(k, c.as_ref()).map_err(err)?,
    };
    let t = invariant_triple(k).map_err(err)?;
    let p = expand_xyz(&expr, &t).map_err(err)?;
    let inner = match k {
        GroupKind::A(r) => divisor_profile_a(&p, r),
        GroupKind::D(r) => divisor_profile_d_of(&p, r).map(|d| d.profile),
        _ => candidate_profile_e(&p, k),
    }
    .map_err(err)?;
    Ok(PyProfile { kind: k, inner })
}

/// Outcome of the full verification pipeline for one group.
#[pyclass(name = "VerificationReport", frozen)]
struct PyReport {
    inner: pipeline::VerificationReport,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn passed(&self) -> bool {
        self.inner.passed()
    }

    #[getter]
    fn kind(&self) -> String {
        self.inner.kind.clone()
    }

    #[getter]
    fn c(&self) -> Option<String> {
        self.inner.c.clone()
    }

    /// (name, passed, detail) per check.
    #[getter]
    fn checks(&self) -> Vec<(String, bool, String)> {
        self.inner
            .checks
            .iter()
            .map(|c| (c.name.clone(), c.passed, c.detail.clone()))
            .collect()
    }

    #[getter]
    fn notes(&self) -> Vec<String> {
        self.inner.notes.clone()
    }

    fn to_json(&self) -> String {
        ::serde_json::to_string_pretty(&self.inner).expect("report serializes")
    }

    fn __repr__(&self) -> String {
        format!(
            "VerificationReport({}, passed={})",
            self.inner.kind,
            self.inner.passed()
        )
    }
}

#[pyfunction]
#[pyo3(signature = (kind, r=None, c=None))]
fn verify(py: Python<'_>, kind: &str, r: Option<u32>, c: Option<&str>) -> PyResult<PyReport> {
    let k = kind_of(kind, r)?;
    let c = number(c)?;
    let inner = py
        .detach(|| pipeline::verify(k, c.as_ref()))
        .map_err(err)?;
    Ok(PyReport { inner })
}

/// (accepted, reason, recovered c) for a candidate function.
#[pyfunction]
#[pyo3(signature = (kind, candidate, r=None, c=None))]
fn probe(kind: &str, candidate: &str, r: Option<u32>, c: Option<&str>) -> PyResult<(bool, String, Option<String>)> {
    let k = kind_of(kind, r)?;
    let expr = parse_xyz(candidate).map_err(err)?;
    let c = number(c)?;
    let v = pipeline::probe(k, &expr, c.as_ref()).map_err(err)?;
    Ok((v.accepted, v.reason, v.recovered_c))
}

/// Marks of the affine diagram, in diagram order, and the null vector of its Cartan matrix.
#[pyfunction]
#[pyo3(signature = (kind, r=None))]
fn affine_marks(kind: &str, r: Option<u32>) -> PyResult<(Vec<u32>, Vec<u32>)> {
    let d = affine_diagram(kind_of(kind, r)?).map_err(err)?;
    let nv = null_vector(&d.cartan()).map_err(err)?;
    Ok((d.marks().to_vec(), nv))
}

/// Normal form of an exact literal such as `1 + zeta(3) + zeta(3)^2`.
#[pyfunction]
fn normalize_number(s: &str) -> PyResult<String> {
    Ok(parse_number(s).map_err(err)?.to_string())
}

#[pymodule]
#[pyo3(name = "kleinian")]
fn kleinian_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGroup>()?;
    m.add_class::<PyProfile>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(divisor_profile, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(probe, m)?)?;
    m.add_function(wrap_pyfunction!(affine_marks, m)?)?;
    m.add_function(wrap_pyfunction!(normalize_number, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
