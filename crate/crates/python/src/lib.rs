//! Python bindings.
//!
//! Senses cross the boundary as `lemma#sense` strings and dimensions as their
//! tag names (`"HasProp"`). Engine errors raise `SenseGraphError`.

use std::collections::BTreeMap;

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use sensegraph::acquisition::{self, MaskTemplate};
use sensegraph::{
    hierarchy, metonymy, similarity, store, Assertion, AssertionStore, ConceptSense, DimensionTag,
    RelationSignature, Resolution, Source,
};

create_exception!(sensegraph_py, SenseGraphError, PyException);

fn py_err(e: sensegraph::Error) -> PyErr {
    SenseGraphError::new_err(format!("{}: {}", e.code(), e))
}

fn sense(token: &str) -> PyResult<ConceptSense> {
    token.parse().map_err(py_err)
}

fn dimension(name: &str) -> PyResult<DimensionTag> {
    name.parse().map_err(py_err)
}

fn source(name: &str) -> PyResult<Source> {
    match name {
        "fixture" => Ok(Source::Fixture),
        "harvested" => Ok(Source::Harvested),
        "manual" => Ok(Source::Manual),
        other => Err(SenseGraphError::new_err(format!("unknown source `{other}`"))),
    }
}

/// Mutable assertion store.
#[pyclass(name = "Store")]
struct PyStore {
    inner: AssertionStore,
}

#[pymethods]
impl PyStore {
    #[new]
    fn new() -> Self {
        PyStore {
            inner: AssertionStore::new(),
        }
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let snap = store::load_jsonl(path).map_err(py_err)?;
        Ok(PyStore {
            inner: AssertionStore::from_snapshot(&snap),
        })
    }

    fn save(&self, path: &str) -> PyResult<()> {
        store::save_jsonl(&self.inner.snapshot(), path).map_err(py_err)
    }

    #[getter]
    fn version(&self) -> u64 {
        self.inner.version()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    #[pyo3(signature = (concept, dimension, filler, weight=1.0, source="manual"))]
    fn add_assertion(&mut self, concept: &str, dimension: &str, filler: &str, weight: f64, source: &str) -> PyResult<u64> {
        let a = Assertion::new(
            self::sense(concept)?,
            self::dimension(dimension)?,
            filler,
            weight,
            self::source(source)?,
        )
        .map_err(py_err)?;
        Ok(self.inner.add_assertion(a))
    }

    #[pyo3(signature = (verb, subject, object, weight=1.0))]
    fn add_relational(&mut self, verb: &str, subject: &str, object: &str, weight: f64) -> PyResult<u64> {
        self.inner
            .add_relational(verb, &sense(subject)?, &sense(object)?, weight, Source::Manual)
            .map_err(py_err)
    }

    #[pyo3(signature = (relation, arg1, arg2, weight=1.0))]
    fn add_signature(&mut self, relation: &str, arg1: &str, arg2: &str, weight: f64) -> PyResult<u64> {
        let sig = RelationSignature::new(relation, sense(arg1)?, sense(arg2)?, weight).map_err(py_err)?;
        Ok(self.inner.add_signature(sig))
    }

    /// Senses carrying `filler`, optionally restricted to one dimension.
    #[pyo3(signature = (filler, dimension=None))]
    fn extension(&self, filler: &str, dimension: Option<&str>) -> PyResult<Vec<String>> {
        let dim = dimension.map(self::dimension).transpose()?;
        Ok(self
            .inner
            .extension(filler, dim)
            .iter()
            .map(ToString::to_string)
            .collect())
    }

    /// `{dimension: [(weight, filler), ...]}` for every dimension.
    fn profile(&self, concept: &str) -> PyResult<BTreeMap<String, Vec<(f64, String)>>> {
        let p = self.inner.profile(&sense(concept)?);
        Ok(p.iter()
            .map(|(d, fs)| {
                (
                    d.name().to_string(),
                    fs.iter().map(|wf| (wf.weight, wf.filler.clone())).collect(),
                )
            })
            .collect())
    }

    #[pyo3(signature = (theta=0.0))]
    fn induce(&self, theta: f64) -> PyResult<PyTypeGraph> {
        let g = hierarchy::induce(&self.inner.snapshot(), theta).map_err(py_err)?;
        Ok(PyTypeGraph { inner: g })
    }

    fn d_similarity(&self, c1: &str, c2: &str, dimension: &str) -> PyResult<f64> {
        Ok(similarity::d_similarity(
            &sense(c1)?,
            &sense(c2)?,
            self::dimension(dimension)?,
            &self.inner.snapshot(),
        ))
    }

    #[pyo3(signature = (c1, c2, dims=None, weights=None))]
    fn similarity(
        &self,
        c1: &str,
        c2: &str,
        dims: Option<Vec<String>>,
        weights: Option<BTreeMap<String, f64>>,
    ) -> PyResult<f64> {
        let dims = match dims {
            None => DimensionTag::ALL.to_vec(),
            Some(ds) => ds.iter().map(|d| dimension(d)).collect::<PyResult<_>>()?,
        };
        let weights = weights
            .map(|w| {
                w.iter()
                    .map(|(k, v)| Ok((dimension(k)?, *v)))
                    .collect::<PyResult<BTreeMap<_, _>>>()
            })
            .transpose()?;
        similarity::c_similarity(&sense(c1)?, &sense(c2)?, &dims, weights.as_ref(), &self.inner.snapshot())
            .map_err(py_err)
    }

    /// Resolves `REL(a#n,b#n)`; returns a dict with `status` of `well-typed`
    /// or `coerced`.
    #[pyo3(signature = (application, theta=0.0))]
    fn resolve<'py>(&self, py: Python<'py>, application: &str, theta: f64) -> PyResult<Bound<'py, PyDict>> {
        let app: metonymy::Application = application.parse().map_err(py_err)?;
        let snap = self.inner.snapshot();
        let g = hierarchy::induce(&snap, theta).map_err(py_err)?;
        let out = PyDict::new(py);
        match metonymy::resolve_metonymy(&app, &snap, &g).map_err(py_err)? {
            Resolution::WellTyped(a) => {
                out.set_item("status", "well-typed")?;
                out.set_item("rewritten", a.to_string())?;
                out.set_item("coercions", Vec::<(usize, String)>::new())?;
            }
            Resolution::Coerced(r) => {
                out.set_item("status", "coerced")?;
                out.set_item("rewritten", r.rewritten.to_string())?;
                let cs: Vec<(usize, String)> = r
                    .coercions
                    .iter()
                    .map(|c| (c.position, c.bridge.to_string()))
                    .collect();
                out.set_item("coercions", cs)?;
            }
        }
        Ok(out)
    }
}

/// `(label, extent, intent fillers)` of one type node.
type NodeSummary = (String, Vec<String>, Vec<String>);

/// Induced subsumption graph.
#[pyclass(name = "TypeGraph")]
struct PyTypeGraph {
    inner: hierarchy::TypeGraph,
}

#[pymethods]
impl PyTypeGraph {
    fn __len__(&self) -> usize {
        self.inner.nodes().len()
    }

    fn is_subtype(&self, a: &str, b: &str) -> PyResult<bool> {
        self.inner.is_subtype(&sense(a)?, &sense(b)?).map_err(py_err)
    }

    fn label_of(&self, concept: &str) -> PyResult<String> {
        let id = self.inner.node_of(&sense(concept)?).map_err(py_err)?;
        Ok(self.inner.node(id).label().to_string())
    }

    /// Minimal common ancestors as `(label, extent, intent fillers)` tuples.
    fn lca(&self, concepts: Vec<String>) -> PyResult<Vec<NodeSummary>> {
        let senses = concepts.iter().map(|c| sense(c)).collect::<PyResult<Vec<_>>>()?;
        let ids = self.inner.lca(&senses).map_err(py_err)?;
        Ok(ids
            .into_iter()
            .map(|id| {
                let n = self.inner.node(id);
                (
                    n.label().to_string(),
                    n.extent().iter().map(ToString::to_string).collect(),
                    n.intent().iter().map(|f| f.filler.clone()).collect(),
                )
            })
            .collect())
    }

    fn edges(&self) -> Vec<(String, String)> {
        self.inner
            .edges()
            .iter()
            .map(|(c, p)| {
                (
                    self.inner.node(*c).label().to_string(),
                    self.inner.node(*p).label().to_string(),
                )
            })
            .collect()
    }

    fn to_dot(&self) -> String {
        self.inner.export_dot()
    }
}

#[pyfunction]
fn canonical_relation(alias: &str) -> PyResult<String> {
    sensegraph::canonical_relation(alias)
        .map(|r| r.name().to_string())
        .map_err(py_err)
}

#[pyfunction]
fn rank_to_weight(rank: usize, n: usize) -> PyResult<f64> {
    acquisition::rank_to_weight(rank, n).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (raw, requested=25))]
fn parse_completion_list(raw: &str, requested: usize) -> PyResult<Vec<String>> {
    acquisition::parse_completion_list(raw, requested)
        .map(|l| l.fillers)
        .map_err(py_err)
}

#[pyfunction]
fn build_mask_prompt(concept: &str, dimension: &str, text: &str, count: usize) -> PyResult<String> {
    let t = MaskTemplate::new(self::dimension(dimension)?, text, count).map_err(py_err)?;
    acquisition::build_mask_prompt(&sense(concept)?, &t).map_err(py_err)
}

#[pymodule]
fn sensegraph_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SenseGraphError", m.py().get_type::<SenseGraphError>())?;
    m.add_class::<PyStore>()?;
    m.add_class::<PyTypeGraph>()?;
    m.add_function(wrap_pyfunction!(canonical_relation, m)?)?;
    m.add_function(wrap_pyfunction!(rank_to_weight, m)?)?;
    m.add_function(wrap_pyfunction!(parse_completion_list, m)?)?;
    m.add_function(wrap_pyfunction!(build_mask_prompt, m)?)?;
    Ok(())
}
