//! Python bindings. Rationals cross the boundary as `"num/den"` strings.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use slopecert_core::cli::scan_rows;
use slopecert_core::futaki::{hirzebruch_endpoint_df, DEFAULT_LAMBDA_DEPTH};
use slopecert_core::rational::{fmt_q, parse_q_lenient, Q};
use slopecert_core::{self as core, DestabilizeOptions, DivisorClass, Verdict};

fn err(e: core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rational(s: &str) -> PyResult<Q> {
    parse_q_lenient(s).map_err(err)
}

fn strings(xs: &[Q]) -> Vec<String> {
    xs.iter().map(fmt_q).collect()
}

#[pyclass(frozen)]
struct Presentation {
    inner: core::SurfacePresentation,
}

#[pymethods]
impl Presentation {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(Presentation {
            inner: text.parse().map_err(err)?,
        })
    }

    #[getter]
    fn picard_rank(&self) -> usize {
        self.inner.picard_rank()
    }

    #[getter]
    fn is_minimal_polystable(&self) -> bool {
        self.inner.is_minimal_polystable()
    }

    fn normalize(&self) -> Presentation {
        Presentation {
            inner: self.inner.normalize().presentation,
        }
    }

    fn canonical(&self) -> Vec<String> {
        strings(self.inner.canonical().coeffs())
    }

    /// `(tag, class, self-intersection)` for each tracked curve.
    fn tracked_curves(&self) -> Vec<(String, Vec<String>, String)> {
        self.inner
            .tracked()
            .iter()
            .map(|c| {
                (
                    c.tag().to_string(),
                    strings(c.class().coeffs()),
                    fmt_q(&c.class().square()),
                )
            })
            .collect()
    }

    /// Intersection number of two classes given by coefficient strings.
    fn intersect(&self, a: Vec<String>, b: Vec<String>) -> PyResult<String> {
        let class = |xs: Vec<String>| -> PyResult<DivisorClass> {
            let coeffs = xs
                .iter()
                .map(|s| rational(s))
                .collect::<PyResult<Vec<_>>>()?;
            DivisorClass::new(self.inner.lattice(), coeffs).map_err(err)
        };
        Ok(fmt_q(&class(a)?.intersect(&class(b)?).map_err(err)?))
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Presentation({:?})", self.inner.to_string())
    }
}

#[pyclass(frozen)]
struct Certificate {
    inner: core::Certificate,
}

#[pymethods]
impl Certificate {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Certificate {
            inner: core::Certificate::from_json(text).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    /// `(accepted, first failing check or None)`.
    fn verify(&self) -> (bool, Option<String>) {
        let report = core::verify(&self.inner);
        (
            report.accepted,
            report.first_failure().map(|c| c.name.clone()),
        )
    }

    #[getter]
    fn lambda_(&self) -> String {
        fmt_q(&self.inner.lambda)
    }

    #[getter]
    fn df_value(&self) -> String {
        fmt_q(&self.inner.df_value)
    }

    #[getter]
    fn polarization(&self) -> Vec<String> {
        strings(&self.inner.polarization)
    }

    #[getter]
    fn epsilon_chain(&self) -> Vec<String> {
        strings(&self.inner.epsilon_chain)
    }

    #[getter]
    fn normalized_presentation(&self) -> String {
        self.inner.normalized_presentation.clone()
    }

    #[getter]
    fn assumptions(&self) -> Vec<String> {
        self.inner.assumptions.clone()
    }
}

/// A certificate, or `None` for bare `P2` and `F(0)`.
#[pyfunction]
#[pyo3(signature = (text, lambda_depth = DEFAULT_LAMBDA_DEPTH, epsilon_depth = 64))]
fn destabilize(text: &str, lambda_depth: u32, epsilon_depth: u32) -> PyResult<Option<Certificate>> {
    let p: core::SurfacePresentation = text.parse().map_err(err)?;
    let options = DestabilizeOptions {
        lambda_depth,
        epsilon_depth,
    };
    Ok(match core::destabilize(&p, options).map_err(err)? {
        Verdict::Destabilized(c) => Some(Certificate { inner: *c }),
        Verdict::MinimalPolystable { .. } => None,
    })
}

/// `DF` of the slope test configuration of `Z` for `aZ + bF` on `F(n)`.
#[pyfunction]
fn df(n: u32, a: &str, b: &str, lam: &str) -> PyResult<String> {
    let input = core::SlopeInput::hirzebruch(n, &rational(a)?, &rational(b)?).map_err(err)?;
    Ok(fmt_q(
        &core::df_slope(&input, &rational(lam)?).map_err(err)?,
    ))
}

/// Same quantity from the total-space intersection numbers.
#[pyfunction]
fn df_oracle(n: u32, a: &str, b: &str, lam: &str) -> PyResult<String> {
    let input = core::SlopeInput::hirzebruch(n, &rational(a)?, &rational(b)?).map_err(err)?;
    let tc = core::TestConfigModel::new(input);
    Ok(fmt_q(
        &core::df_total_space_oracle(&tc, &rational(lam)?).map_err(err)?,
    ))
}

#[pyfunction]
fn endpoint_df(n: u32, a: &str, b: &str) -> PyResult<String> {
    Ok(fmt_q(
        &hirzebruch_endpoint_df(n, &rational(a)?, &rational(b)?).map_err(err)?,
    ))
}

/// Rows `(t, lambda_star, df_min)` for `L = Z + tF` on `F(n)`.
#[pyfunction]
#[pyo3(signature = (n, range, grid, lambda_depth = DEFAULT_LAMBDA_DEPTH))]
fn scan(
    n: u32,
    range: &str,
    grid: usize,
    lambda_depth: u32,
) -> PyResult<Vec<(String, String, String)>> {
    let rows = scan_rows(n, &rational(range)?, grid, lambda_depth).map_err(err)?;
    Ok(rows
        .iter()
        .map(|(t, l, d)| (fmt_q(t), fmt_q(l), fmt_q(d)))
        .collect())
}

/// `(reductive, report as JSON)` for a toric presentation.
#[pyfunction]
fn reductivity(text: &str) -> PyResult<(bool, String)> {
    let p: core::SurfacePresentation = text.parse().map_err(err)?;
    let report = core::matsushima_verdict(&p).map_err(err)?;
    Ok((report.reductive, report.to_json()))
}

#[pymodule]
fn slopecert(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Presentation>()?;
    m.add_class::<Certificate>()?;
    m.add_function(wrap_pyfunction!(destabilize, m)?)?;
    m.add_function(wrap_pyfunction!(df, m)?)?;
    m.add_function(wrap_pyfunction!(df_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(endpoint_df, m)?)?;
    m.add_function(wrap_pyfunction!(scan, m)?)?;
    m.add_function(wrap_pyfunction!(reductivity, m)?)?;
    Ok(())
}
