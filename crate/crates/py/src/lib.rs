// SPDX-License-Identifier: Apache-2.0

//! Python bindings. Forms are passed as `(a, b, c)` integer triples.

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use quadrep::{ClassGroup, QuadForm};

type Triple = (BigInt, BigInt, BigInt);

fn err(e: quadrep::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn form(f: Triple) -> PyResult<QuadForm> {
    let q = QuadForm::new(f.0, f.1, f.2);
    q.validate().map_err(err)?;
    Ok(q)
}

fn triple(q: &QuadForm) -> Triple {
    (q.a.clone(), q.b.clone(), q.c.clone())
}

/// The reduced form equivalent to `f`.
#[pyfunction]
fn reduce(f: Triple) -> PyResult<Triple> {
    Ok(triple(&form(f)?.reduced().map_err(err)?))
}

#[pyfunction]
fn class_number(d: i64) -> PyResult<usize> {
    quadrep::class_number(d).map_err(err)
}

/// Reduced representatives of the form class group of discriminant `d`.
#[pyfunction]
fn class_group(d: i64) -> PyResult<Vec<Triple>> {
    let g = ClassGroup::enumerate_reduced(d).map_err(err)?;
    Ok(g.reps().iter().map(triple).collect())
}

/// Decide whether `f` represents `m`. Returns `(verdict, witness, failure)`.
#[pyfunction]
#[allow(clippy::type_complexity)]
fn decide(f: Triple, m: BigInt) -> PyResult<(bool, Option<(BigInt, BigInt)>, Option<String>)> {
    let d = quadrep::decide(&form(f)?, &m).map_err(err)?;
    Ok((d.verdict, d.witness, d.failure.map(|x| x.to_string())))
}

/// Brute-force search for `(x, y)` with `f(x, y) = m`.
#[pyfunction]
fn represent(f: Triple, m: BigInt) -> PyResult<Option<(BigInt, BigInt)>> {
    Ok(quadrep::oracle_decide(&form(f)?, &m))
}

#[pymodule]
fn quadrep_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(reduce, m)?)?;
    m.add_function(wrap_pyfunction!(class_number, m)?)?;
    m.add_function(wrap_pyfunction!(class_group, m)?)?;
    m.add_function(wrap_pyfunction!(decide, m)?)?;
    m.add_function(wrap_pyfunction!(represent, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
