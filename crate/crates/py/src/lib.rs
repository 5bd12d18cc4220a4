//! Python extension module exposing the main verification operations.
//!
//! The module mirrors the Rust API at the granularity a notebook wants:
//! a `Candidate` class bundling validated group parameters with a partial
//! augmentation vector, plus free functions for field/table/search queries.
//! Reports and search outcomes cross the boundary as JSON strings so the
//! Python side sees exactly what the CLI emits.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use zasscheck_core::{
    build_report, canonical_primitive_poly, inequality_values, mu_table, r_table,
    search_prime_pairs, EpsilonVector, GroupParams, QuadField, Side,
};

fn value_err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_side(side: &str) -> PyResult<Side> {
    match side {
        "p" | "P" => Ok(Side::P),
        "q" | "Q" => Ok(Side::Q),
        other => Err(PyValueError::new_err(format!(
            "side must be 'p' or 'q', got '{other}'"
        ))),
    }
}

/// The canonical defining polynomial `(c1, c0)` of `F_{p²}` for a prime `p`.
#[pyfunction]
fn canonical_poly(prime: u64) -> PyResult<(u64, u64)> {
    canonical_primitive_poly(prime).map_err(value_err)
}

/// Residue-class table of a prime: `(stored, display)` where `stored[i]`
/// counts translates `α + t` with discrete log `≡ i (mod d)` and `display`
/// is the 1-indexed order.
#[pyfunction]
#[pyo3(signature = (prime, d, poly=None))]
fn residue_table(prime: u64, d: u64, poly: Option<(u64, u64)>) -> PyResult<(Vec<u64>, Vec<u64>)> {
    let (c1, c0) = match poly {
        Some(pair) => pair,
        None => canonical_primitive_poly(prime).map_err(value_err)?,
    };
    let field = QuadField::new(prime, c1, c0).map_err(value_err)?;
    if field.unit_group_order() % d != 0 {
        return Err(PyValueError::new_err(format!(
            "d = {d} does not divide p^2 - 1 = {}",
            field.unit_group_order()
        )));
    }
    let table = r_table(&field, d, Side::P);
    Ok((table.stored.clone(), table.paper_order()))
}

/// Enumerate admissible prime pairs; returns the full outcome as JSON.
#[pyfunction]
#[pyo3(signature = (d, m, p_max, effective=false, seed=0))]
fn search_json(d: u64, m: i64, p_max: u64, effective: bool, seed: u64) -> PyResult<String> {
    let outcome = search_prime_pairs(d, m, p_max, effective, seed).map_err(value_err)?;
    serde_json::to_string(&outcome).map_err(value_err)
}

/// A candidate `(p, q, d, ε)` with validated parameters.
#[pyclass]
struct Candidate {
    params: GroupParams,
    eps: EpsilonVector,
}

#[pymethods]
impl Candidate {
    /// Build a candidate; polynomials default to the canonical choice.
    #[new]
    #[pyo3(signature = (p, q, d, epsilon, poly_p=None, poly_q=None))]
    fn new(
        p: u64,
        q: u64,
        d: u64,
        epsilon: Vec<i64>,
        poly_p: Option<(u64, u64)>,
        poly_q: Option<(u64, u64)>,
    ) -> PyResult<Candidate> {
        let poly_p = match poly_p {
            Some(pair) => pair,
            None => canonical_primitive_poly(p).map_err(value_err)?,
        };
        let poly_q = match poly_q {
            Some(pair) => pair,
            None => canonical_primitive_poly(q).map_err(value_err)?,
        };
        let params = GroupParams::new(p, q, d, poly_p, poly_q).map_err(value_err)?;
        let eps = EpsilonVector::new(epsilon, d).map_err(value_err)?;
        Ok(Candidate { params, eps })
    }

    /// `|G|` as a decimal string (it can exceed 64 bits).
    fn group_order(&self) -> String {
        self.params.group_order().to_string()
    }

    /// Does every check pass, making the candidate a verified counterexample?
    fn is_counterexample(&self) -> PyResult<bool> {
        let cert = zasscheck_core::verdict(&self.params, &self.eps).map_err(value_err)?;
        Ok(cert.verdict.is_counterexample)
    }

    /// The inequality rows on one side (all must be non-negative).
    fn inequality_rows(&self, side: &str) -> PyResult<Vec<i64>> {
        let side = parse_side(side)?;
        let table = r_table(side.field(&self.params), self.params.d(), side);
        inequality_values(&table, &self.eps).map_err(value_err)
    }

    /// The multiplicity table entries on one side, in display order.
    fn mu_entries(&self, side: &str) -> PyResult<Vec<i64>> {
        let side = parse_side(side)?;
        let mu = mu_table(&self.params, &self.eps, side).map_err(value_err)?;
        Ok(mu.entries())
    }

    /// Run the full pipeline and return the report as JSON.
    #[pyo3(signature = (aux=None))]
    fn report_json(&self, aux: Option<u64>) -> PyResult<String> {
        let report = build_report(&self.params, &self.eps, aux).map_err(value_err)?;
        serde_json::to_string(&report).map_err(value_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Candidate(p={}, q={}, d={}, epsilon={:?})",
            self.params.p(),
            self.params.q(),
            self.params.d(),
            self.eps.canonical()
        )
    }
}

#[pymodule]
fn zasscheck(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Candidate>()?;
    m.add_function(wrap_pyfunction!(canonical_poly, m)?)?;
    m.add_function(wrap_pyfunction!(residue_table, m)?)?;
    m.add_function(wrap_pyfunction!(search_json, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
