//! Python bindings: the main algebra type plus the catalog, validation,
//! extension and decomposition entry points. Scalars cross the boundary as
//! canonical `p/q` strings; whole objects travel as document text.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use quadlie::algebra::{center, derived_and_central_series, validate_superalgebra};
use quadlie::catalog;
use quadlie::cochain::DualValued2Cochain;
use quadlie::decompose::{self, CentralDescent, SolvableTstar};
use quadlie::doc;
use quadlie::extend;
use quadlie::form::{validate_quadratic, FormSearch, GramForm, QuadraticSuperAlgebra};
use quadlie::scalar::{FieldCtx, Scalar};
use quadlie::space::Subspace;
use quadlie::SuperAlgebra;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A Lie superalgebra, optionally carrying an invariant scalar product.
#[pyclass(name = "Algebra", skip_from_py_object)]
#[derive(Clone)]
struct PyAlgebra {
    name: String,
    alg: SuperAlgebra,
    form: Option<GramForm>,
}

impl PyAlgebra {
    fn quadratic(&self) -> PyResult<QuadraticSuperAlgebra> {
        let form = self
            .form
            .clone()
            .ok_or_else(|| PyValueError::new_err("algebra carries no scalar product"))?;
        QuadraticSuperAlgebra::new(self.alg.clone(), form).map_err(err)
    }

    fn from_quadratic(name: &str, q: QuadraticSuperAlgebra) -> PyAlgebra {
        PyAlgebra { name: name.to_string(), alg: q.alg, form: Some(q.b) }
    }
}

#[pymethods]
impl PyAlgebra {
    /// Builds a named catalog fixture; `gn`, `en` and `cartan_w` take n.
    #[staticmethod]
    #[pyo3(signature = (name, n = None))]
    fn catalog(name: &str, n: Option<usize>) -> PyResult<PyAlgebra> {
        let item = match (name, n) {
            ("gn", Some(n)) => catalog::CatalogItem::Plain(catalog::make_gn(n).map_err(err)?),
            ("en", Some(n)) => {
                catalog::CatalogItem::Quadratic(catalog::make_en(n).map_err(err)?)
            }
            ("cartan_w", Some(n)) => {
                catalog::CatalogItem::Plain(catalog::make_cartan_w(n).map_err(err)?)
            }
            (other, _) => catalog::make_standard(other).map_err(err)?,
        };
        let full = match n {
            Some(n) => format!("{name}{n}"),
            None => name.to_string(),
        };
        Ok(match item {
            catalog::CatalogItem::Plain(alg) => PyAlgebra { name: full, alg, form: None },
            catalog::CatalogItem::Quadratic(q) => PyAlgebra::from_quadratic(&full, q),
        })
    }

    /// Parses a superalgebra document.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<PyAlgebra> {
        let parsed = doc::parse_algebra(text).map_err(err)?;
        Ok(PyAlgebra { name: parsed.name, alg: parsed.algebra, form: parsed.form })
    }

    /// Canonical document serialization.
    fn serialize(&self) -> String {
        doc::serialize_algebra(&self.name, &self.alg, self.form.as_ref())
    }

    #[getter]
    fn name(&self) -> String {
        self.name.clone()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.alg.dim()
    }

    #[getter]
    fn even_dim(&self) -> usize {
        self.alg.space().even_dim()
    }

    #[getter]
    fn odd_dim(&self) -> usize {
        self.alg.space().odd_dim()
    }

    fn labels(&self) -> Vec<String> {
        self.alg.space().labels().to_vec()
    }

    fn has_form(&self) -> bool {
        self.form.is_some()
    }

    /// Runs the Lie axioms (and the form axioms when a form is present);
    /// returns (all_passed, report_text).
    fn validate(&self) -> (bool, String) {
        let ra = validate_superalgebra(&self.alg);
        let mut text = ra.to_string();
        let mut ok = ra.all_passed();
        if let Some(form) = &self.form {
            let rb = validate_quadratic(&self.alg, form);
            text.push_str(&rb.to_string());
            ok &= rb.all_passed();
        }
        (ok, text)
    }

    /// Structure constants of [e_i, e_j] as canonical coefficient strings.
    fn bracket_basis(&self, i: usize, j: usize) -> PyResult<Vec<String>> {
        if i >= self.alg.dim() || j >= self.alg.dim() {
            return Err(PyValueError::new_err("index out of range"));
        }
        Ok(self.alg.structure(i, j).iter().map(Scalar::canonical_string).collect())
    }

    fn is_solvable(&self) -> PyResult<bool> {
        Ok(derived_and_central_series(&self.alg).map_err(err)?.is_solvable)
    }

    fn is_nilpotent(&self) -> PyResult<bool> {
        Ok(derived_and_central_series(&self.alg).map_err(err)?.is_nilpotent)
    }

    fn center_dim(&self) -> PyResult<usize> {
        Ok(center(&self.alg).map_err(err)?.dim())
    }

    fn center_odd_dim(&self) -> PyResult<usize> {
        Ok(center(&self.alg).map_err(err)?.odd_part().dim())
    }

    /// Decides existence of an invariant scalar product; returns the
    /// witness algebra-with-form document when one exists.
    fn invariant_scalar_product(&self) -> PyResult<Option<String>> {
        match quadlie::form::has_invariant_scalar_product(&self.alg).map_err(err)? {
            FormSearch::Yes(g) => {
                Ok(Some(doc::serialize_algebra(&self.name, &self.alg, Some(&g))))
            }
            FormSearch::No(_) => Ok(None),
        }
    }

    /// T*-extension by the zero cocycle or a cocycle document.
    #[pyo3(signature = (cocycle = None))]
    fn tstar(&self, cocycle: Option<&str>) -> PyResult<PyAlgebra> {
        let w = match cocycle {
            None => DualValued2Cochain::zero(self.alg.space().clone()),
            Some(text) => {
                let parsed = doc::parse_cocycle(text).map_err(err)?;
                parsed.to_cochain(self.alg.space()).map_err(PyValueError::new_err)?
            }
        };
        let built = extend::tstar_extension(&self.alg, &w).map_err(err)?;
        Ok(PyAlgebra::from_quadratic(&format!("{}_tstar", self.name), built))
    }

    /// Extracts the extension context through an isotropic graded ideal
    /// spanned by the given coordinate vectors (canonical strings);
    /// returns (context_document, report_text, all_passed).
    fn decompose(&self, ideal: Vec<Vec<String>>) -> PyResult<(String, String, bool)> {
        let q = self.quadratic()?;
        let mut vectors = Vec::new();
        for row in &ideal {
            let mut v = Vec::with_capacity(row.len());
            for s in row {
                v.push(Scalar::parse_canonical(s, None).map_err(PyValueError::new_err)?);
            }
            vectors.push(v);
        }
        let sub = Subspace::from_generators(q.space(), &vectors).map_err(err)?;
        let result = decompose::extension_context_from_isotropic_ideal(&q, &sub).map_err(err)?;
        Ok((
            doc::serialize_context(&result.context),
            result.report.to_string(),
            result.report.all_passed(),
        ))
    }

    /// Central isotropic descent; returns (kind, context_document) where
    /// kind is "odd", "even" or "none".
    fn decompose_auto(&self) -> PyResult<(String, Option<String>)> {
        let q = self.quadratic()?;
        match decompose::central_isotropic_descent(&q).map_err(err)? {
            CentralDescent::OddLine { result, .. } => {
                Ok(("odd".into(), Some(doc::serialize_context(&result.context))))
            }
            CentralDescent::EvenLine { result, .. } => {
                Ok(("even".into(), Some(doc::serialize_context(&result.context))))
            }
            CentralDescent::None { .. } => Ok(("none".into(), None)),
        }
    }

    /// The solvable-to-T* pipeline; returns a dict-like tuple:
    /// (case, tstar_document, report_text, all_passed, sqrt_d).
    fn solvable_to_tstar(&self) -> PyResult<(String, String, String, bool, Option<i64>)> {
        let q = self.quadratic()?;
        match decompose::solvable_to_tstar(&q, FieldCtx::rational(), true).map_err(err)? {
            SolvableTstar::Even { tstar, report, field, .. } => Ok((
                "even".into(),
                doc::serialize_algebra("tstar_presentation", &tstar.alg, Some(&tstar.b)),
                report.to_string(),
                report.all_passed(),
                field.d(),
            )),
            SolvableTstar::Odd { tstar, report, field, .. } => Ok((
                "odd".into(),
                doc::serialize_algebra("tstar_presentation", &tstar.alg, Some(&tstar.b)),
                report.to_string(),
                report.all_passed(),
                field.d(),
            )),
        }
    }
}

/// Names accepted by `Algebra.catalog`.
#[pyfunction]
fn catalog_names() -> Vec<String> {
    catalog::catalog_names().into_iter().map(String::from).collect()
}

#[pymodule]
fn quadlie_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyAlgebra>()?;
    m.add_function(wrap_pyfunction!(catalog_names, m)?)?;
    Ok(())
}
