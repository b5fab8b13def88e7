//! Python bindings: the algebra, the vacuum module with its states and
//! operators, and the claim registry with the verification runs.

use std::str::FromStr;
use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use annrel_core::claims;
use annrel_core::exact::rat;
use annrel_core::lie::{self, CartanType, SignConvention};
use annrel_core::relations::RelCtx;
use annrel_core::vacuum::State;
use annrel_core::vertex;
use annrel_core::Rational;

fn parse_type(name: &str) -> PyResult<CartanType> {
    CartanType::from_str(name).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// A finite simple Lie algebra with its root system and Chevalley basis.
#[pyclass]
struct Algebra {
    inner: Arc<lie::Algebra>,
}

#[pymethods]
impl Algebra {
    #[new]
    fn new(name: &str) -> PyResult<Self> {
        let t = parse_type(name)?;
        let alg = lie::build_algebra(t, SignConvention::Standard)
            .map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(Algebra { inner: Arc::new(alg) })
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn rank(&self) -> usize {
        self.inner.roots.rank
    }

    fn dual_coxeter(&self) -> i64 {
        self.inner.roots.dual_coxeter
    }

    fn theta(&self) -> Vec<i64> {
        self.inner.roots.theta().clone()
    }

    fn positive_roots(&self) -> Vec<Vec<i64>> {
        self.inner.roots.positive_roots.clone()
    }

    fn distinguished_indices(&self) -> Vec<usize> {
        self.inner.roots.distinguished.clone()
    }

    fn generator_names(&self) -> Vec<String> {
        self.inner.chev.basis_names(&self.inner.roots)
    }

    /// Casimir scalar `(la + 2 rho, la)` for `la` in simple-root coordinates,
    /// returned as an exact rational rendered to a string.
    fn casimir_eigenvalue(&self, coords: Vec<i64>) -> PyResult<String> {
        if coords.len() != self.inner.roots.rank {
            return Err(PyValueError::new_err("coordinate length must match the rank"));
        }
        let la: Vec<Rational> = coords.into_iter().map(rat).collect();
        Ok(self.inner.roots.casimir_eigenvalue(&la).to_string())
    }

    fn check_lemma_5_2(&self) -> PyResult<bool> {
        self.inner
            .roots
            .check_lemma_5_2()
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    /// Dot-action weights per distinguished index, rendered to strings.
    fn dot_action_weights(&self, level: i64) -> Vec<(usize, String)> {
        self.inner
            .roots
            .dot_action_weight(level)
            .into_iter()
            .map(|(star, w)| (star, w.to_string()))
            .collect()
    }
}

/// A state of the level-`k` vacuum module.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct ModuleState {
    ctx: Arc<RelCtx>,
    inner: State,
}

#[pymethods]
impl ModuleState {
    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn degree(&self) -> Option<usize> {
        self.ctx.module.state_degree(&self.inner)
    }

    fn scale(&self, numer: i64, denom: i64) -> PyResult<Self> {
        if denom == 0 {
            return Err(PyValueError::new_err("zero denominator"));
        }
        Ok(ModuleState {
            ctx: self.ctx.clone(),
            inner: self
                .inner
                .scaled(&annrel_core::exact::ratio(numer, denom)),
        })
    }

    fn __add__(&self, other: &Self) -> Self {
        ModuleState { ctx: self.ctx.clone(), inner: self.inner.add(&other.inner) }
    }

    fn __sub__(&self, other: &Self) -> Self {
        ModuleState {
            ctx: self.ctx.clone(),
            inner: self.inner.add_scaled(&rat(-1), &other.inner),
        }
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        self.ctx.module.format_state(&self.inner)
    }
}

/// The level-`k` vacuum module with its straightening action, vertex
/// operator coefficients and relation spaces.
#[pyclass]
struct VacuumModule {
    ctx: Arc<RelCtx>,
}

#[pymethods]
impl VacuumModule {
    #[new]
    fn new(algebra: &str, level: i64) -> PyResult<Self> {
        let t = parse_type(algebra)?;
        let alg = lie::build_algebra(t, SignConvention::Standard)
            .map_err(|e| PyValueError::new_err(e.to_string()))?;
        let ctx = RelCtx::new(Arc::new(alg), level)
            .map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(VacuumModule { ctx: Arc::new(ctx) })
    }

    fn level(&self) -> i64 {
        self.ctx.level
    }

    fn generator_names(&self) -> Vec<String> {
        self.ctx.alg().chev.basis_names(&self.ctx.alg().roots)
    }

    fn vacuum(&self) -> ModuleState {
        ModuleState { ctx: self.ctx.clone(), inner: self.ctx.module.vacuum() }
    }

    fn slice_dim(&self, degree: usize) -> usize {
        self.ctx.module.slice(degree).dim()
    }

    /// Left action of the mode `generator(n)`.
    fn act(&self, generator: usize, n: i32, state: &ModuleState) -> PyResult<ModuleState> {
        if generator >= self.ctx.alg().dim() {
            return Err(PyValueError::new_err("generator index out of range"));
        }
        Ok(ModuleState {
            ctx: self.ctx.clone(),
            inner: self.ctx.module.act(generator, n, &state.inner),
        })
    }

    /// The translation operator.
    fn translate(&self, state: &ModuleState) -> ModuleState {
        ModuleState { ctx: self.ctx.clone(), inner: self.ctx.module.apply_d(&state.inner) }
    }

    /// The degree operator.
    fn degree_operator(&self, state: &ModuleState) -> ModuleState {
        ModuleState { ctx: self.ctx.clone(), inner: self.ctx.module.apply_l0(&state.inner) }
    }

    /// The vertex operator coefficient `v_n w`.
    fn field_coefficient(&self, v: &ModuleState, n: i32, w: &ModuleState) -> ModuleState {
        ModuleState {
            ctx: self.ctx.clone(),
            inner: vertex::field_coeff(&self.ctx.module, &v.inner, n, &w.inner),
        }
    }

    /// The state bracket `[u, v]`.
    fn bracket(&self, u: &ModuleState, v: &ModuleState) -> ModuleState {
        ModuleState {
            ctx: self.ctx.clone(),
            inner: vertex::adjoint_bracket(&self.ctx.module, &u.inner, &v.inner),
        }
    }

    /// Dimension of the finite-dimensional relation space.
    fn relation_space_dim(&self) -> usize {
        self.ctx.dim_r()
    }

    /// Kernel dimension of the induction map at one degree.
    fn kernel_dim(&self, degree: usize) -> usize {
        self.ctx
            .kernel_dims(degree, annrel_core::relations::Ambient::Full, None)
            .total
    }
}

/// The claim registry: (id, anchor, description) triples.
#[pyfunction]
fn claims_registry() -> Vec<(String, String, String)> {
    claims::CLAIMS
        .iter()
        .map(|c| (c.id.to_string(), c.anchor.to_string(), c.description.to_string()))
        .collect()
}

/// Runs one claim and returns the report as a dict.
#[pyfunction]
fn verify(
    py: Python<'_>,
    claim: &str,
    algebra: &str,
    level: i64,
    degree: usize,
) -> PyResult<Py<PyDict>> {
    let t = parse_type(algebra)?;
    let report = claims::run_claim(claim, t, level, degree, SignConvention::Standard)
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    let json_mod = py.import("json")?;
    let parsed = json_mod.call_method1("loads", (report.to_json(),))?;
    Ok(parsed.cast_into::<PyDict>()?.unbind())
}

#[pymodule]
fn annrel(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Algebra>()?;
    m.add_class::<VacuumModule>()?;
    m.add_class::<ModuleState>()?;
    m.add_function(wrap_pyfunction!(claims_registry, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
