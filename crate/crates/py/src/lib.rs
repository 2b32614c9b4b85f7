//! Python bindings. Rationals cross the boundary as `fractions.Fraction`;
//! inputs may be `Fraction`, `int`, `str` ("p/q" or decimal) or `float`
//! (read through its decimal repr).

use nilbohr_core as nb;
use nb::dynsim::{self, BoxNbhd, TorusState, TorusSystem};
use nb::gp::{self, BohrConstraint, BohrSpec};
use nb::nilmatrix::{self, LatticeElem};
use nb::scalar::parse_rational;
use nb::setfamilies::{self, GapSeq, StarOrder};
use nb::verify::{Suite, DEFAULT_SEED};
use nb::{Rational, TieGuard};
use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: nb::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rat(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let s = obj.str()?;
    parse_rational(&s.to_cow()?).map_err(err)
}

fn rats(objs: &[Bound<'_, PyAny>]) -> PyResult<Vec<Rational>> {
    objs.iter().map(rat).collect()
}

fn guard() -> TieGuard {
    TieGuard::default()
}

/// Finite window `[lo, hi]` with the members found there.
#[pyclass(module = "nilbohr", frozen, skip_from_py_object, eq)]
#[derive(Clone, PartialEq)]
struct WindowSet {
    inner: nb::WindowSet,
}

#[pymethods]
impl WindowSet {
    #[new]
    #[pyo3(signature = (lo, hi, members, boundary = None))]
    fn new(lo: i64, hi: i64, members: Vec<i64>, boundary: Option<Vec<i64>>) -> PyResult<Self> {
        let inner = nb::WindowSet::with_boundary(lo, hi, members, boundary.unwrap_or_default()).map_err(err)?;
        Ok(WindowSet { inner })
    }

    #[getter]
    fn lo(&self) -> i64 {
        self.inner.lo()
    }

    #[getter]
    fn hi(&self) -> i64 {
        self.inner.hi()
    }

    #[getter]
    fn members(&self) -> Vec<i64> {
        self.inner.members().to_vec()
    }

    #[getter]
    fn boundary(&self) -> Vec<i64> {
        self.inner.boundary().to_vec()
    }

    fn restrict(&self, lo: i64, hi: i64) -> PyResult<Self> {
        Ok(WindowSet {
            inner: self.inner.restrict(lo, hi).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("window sets serialize")
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(WindowSet { inner })
    }

    fn __contains__(&self, n: i64) -> bool {
        self.inner.contains(n)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("WindowSet({}, {}, {:?})", self.inner.lo(), self.inner.hi(), self.inner.members())
    }
}

/// Generalized polynomial expression with rational coefficients.
#[pyclass(module = "nilbohr", frozen, skip_from_py_object)]
#[derive(Clone)]
struct GpExpr {
    inner: gp::GpExpr<Rational>,
}

#[pymethods]
impl GpExpr {
    /// `lin:a`, `binom2:a`, `key:a1,..`, or a JSON tree.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(GpExpr {
            inner: nb::serial::parse_expr_arg(text).map_err(err)?,
        })
    }

    #[staticmethod]
    fn linear(a: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(GpExpr {
            inner: gp::GpExpr::linear(rat(a)?),
        })
    }

    #[staticmethod]
    fn binom2(a: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(GpExpr {
            inner: gp::GpExpr::binom2(rat(a)?),
        })
    }

    /// Key polynomial `P(n; α₁..α_d)`.
    #[staticmethod]
    fn key(alphas: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        Ok(GpExpr {
            inner: gp::key_poly_expr(&rats(&alphas)?).map_err(err)?,
        })
    }

    fn eval(&self, n: i64) -> PyResult<Rational> {
        Ok(self.inner.eval(n, guard()).map_err(err)?.value)
    }

    fn degree(&self) -> u32 {
        self.inner.degree()
    }

    fn simplify(&self) -> Self {
        GpExpr {
            inner: gp::gp_simplify(&self.inner),
        }
    }

    fn to_json(&self) -> String {
        nb::serial::gp_to_json(&self.inner).to_string()
    }
}

/// Point of the upper-triangular unipotent group, entries in level order.
#[pyclass(module = "nilbohr", frozen, skip_from_py_object, eq)]
#[derive(Clone, PartialEq)]
struct NilCoords {
    inner: nilmatrix::NilCoords<Rational>,
}

#[pymethods]
impl NilCoords {
    #[new]
    fn new(d: usize, entries: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        Ok(NilCoords {
            inner: nilmatrix::NilCoords::from_entries(d, rats(&entries)?).map_err(err)?,
        })
    }

    #[staticmethod]
    fn superdiagonal(alphas: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        Ok(NilCoords {
            inner: nilmatrix::NilCoords::superdiagonal(&rats(&alphas)?).map_err(err)?,
        })
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn entries(&self) -> Vec<Rational> {
        self.inner.entries().to_vec()
    }

    fn get(&self, k: usize, i: usize) -> PyResult<Rational> {
        let d = self.inner.dim();
        if k == 0 || k > d || i == 0 || i > d + 1 - k {
            return Err(PyValueError::new_err(format!("no entry ({k}, {i}) for d = {d}")));
        }
        Ok(self.inner.get(k, i).clone())
    }

    fn __matmul__(&self, other: &NilCoords) -> PyResult<Self> {
        Ok(NilCoords {
            inner: nilmatrix::mat_mul(&self.inner, &other.inner).map_err(err)?,
        })
    }

    fn inv(&self) -> Self {
        NilCoords {
            inner: nilmatrix::mat_inv(&self.inner),
        }
    }

    fn pow(&self, n: i64) -> Self {
        NilCoords {
            inner: nilmatrix::mat_pow_closed(&self.inner, n),
        }
    }

    /// Greedy reduction: `(z, h)` with `self @ (-h) == z` and every entry
    /// of `z` in `[-1/2, 1/2]`; `h` is a list of integers in level order.
    fn reduce(&self) -> PyResult<(NilCoords, Vec<BigInt>)> {
        let r = nilmatrix::lattice_reduce(&self.inner, guard()).map_err(err)?;
        Ok((NilCoords { inner: r.z }, r.h.entries().to_vec()))
    }

    /// Lattice element with the given integer entries, as coordinates.
    #[staticmethod]
    fn lattice(d: usize, entries: Vec<BigInt>) -> PyResult<Self> {
        let h = LatticeElem::from_entries(d, entries).map_err(err)?;
        Ok(NilCoords { inner: h.to_coords() })
    }

    fn to_json(&self) -> String {
        nb::serial::coords_to_json(&self.inner).to_string()
    }

    fn __repr__(&self) -> String {
        format!("NilCoords({}, {})", self.inner.dim(), self.to_json())
    }
}

#[pyfunction]
#[pyo3(signature = (exprs, eps, lo, hi))]
fn bohr_window(exprs: Vec<PyRef<'_, GpExpr>>, eps: Vec<Bound<'_, PyAny>>, lo: i64, hi: i64) -> PyResult<WindowSet> {
    let eps = rats(&eps)?;
    let eps = if eps.len() == 1 { vec![eps[0].clone(); exprs.len()] } else { eps };
    if eps.len() != exprs.len() {
        return Err(PyValueError::new_err("one radius per expression, or a single shared one"));
    }
    let constraints = exprs
        .iter()
        .zip(eps)
        .map(|(e, eps)| BohrConstraint {
            expr: e.inner.clone(),
            eps,
        })
        .collect();
    let spec = BohrSpec::new(constraints, lo, hi).map_err(err)?;
    Ok(WindowSet {
        inner: gp::bohr_window(&spec, guard()).map_err(err)?,
    })
}

#[pyfunction]
fn nil_return_set(alphas: Vec<Bound<'_, PyAny>>, eta: &Bound<'_, PyAny>, lo: i64, hi: i64) -> PyResult<WindowSet> {
    let inner = nilmatrix::nil_return_set(&rats(&alphas)?, &rat(eta)?, lo, hi, guard()).map_err(err)?;
    Ok(WindowSet { inner })
}

#[pyfunction]
fn z1d_sequence(alphas: Vec<Bound<'_, PyAny>>, lo: i64, hi: i64) -> PyResult<Vec<(i64, Rational)>> {
    let pts = nilmatrix::z1d_sequence(&rats(&alphas)?, lo, hi, guard()).map_err(err)?;
    Ok(pts.into_iter().map(|p| (p.n, p.value)).collect())
}

#[pyfunction]
fn sg_d(seq: Vec<BigInt>, d: usize) -> PyResult<Vec<BigInt>> {
    setfamilies::sg_d(&GapSeq::new(seq), d).map_err(err)
}

#[pyfunction]
fn fs(seq: Vec<BigInt>) -> PyResult<Vec<BigInt>> {
    setfamilies::fs(&GapSeq::new(seq)).map_err(err)
}

#[pyfunction]
fn is_lacunary(seq: Vec<BigInt>) -> bool {
    GapSeq::new(seq).is_lacunary()
}

#[pyfunction]
#[pyo3(signature = (s, d = 1))]
fn common_diff_set(s: &WindowSet, d: usize) -> PyResult<WindowSet> {
    Ok(WindowSet {
        inner: setfamilies::common_diff_set(&s.inner, d).map_err(err)?,
    })
}

#[pyfunction]
fn is_syndetic(s: &WindowSet, gap: u64) -> PyResult<bool> {
    setfamilies::is_syndetic_window(&s.inner, gap).map_err(err)
}

#[pyfunction]
fn banach_upper_density(s: &WindowSet, len: u64) -> PyResult<f64> {
    setfamilies::banach_upper_density(&s.inner, len).map_err(err)
}

#[pyfunction]
fn intersective_witness(p: &WindowSet, f: &WindowSet, d: usize, bound: u64) -> PyResult<Option<(i64, Vec<i64>)>> {
    let w = setfamilies::intersective_witness(&p.inner, &f.inner, d, bound).map_err(err)?;
    Ok(w.map(|w| (w.a, w.ns)))
}

fn star_order(strict: bool) -> StarOrder {
    if strict {
        StarOrder::Strict
    } else {
        StarOrder::Weak
    }
}

#[pyfunction]
#[pyo3(signature = (values, strict = false))]
fn find_star_pattern(values: Vec<BigInt>, strict: bool) -> Option<[BigInt; 3]> {
    setfamilies::find_star_pattern(&values, star_order(strict))
}

/// Blocks `(B₀, B₁, B₂)` of `SG₂(seq)` for a lacunary sequence.
#[pyfunction]
fn ramsey_partition(seq: Vec<BigInt>) -> PyResult<(Vec<BigInt>, Vec<BigInt>, Vec<BigInt>)> {
    let p = setfamilies::ramsey_sg2_partition(&GapSeq::new(seq)).map_err(err)?;
    Ok((p.b0, p.b1, p.b2))
}

fn torus(d: usize, alpha: &Bound<'_, PyAny>) -> PyResult<TorusSystem<Rational>> {
    TorusSystem::new(d, rat(alpha)?).map_err(err)
}

fn state(d: usize, x0: Option<Vec<Bound<'_, PyAny>>>) -> PyResult<TorusState<Rational>> {
    match x0 {
        Some(x) => TorusState::new(rats(&x)?).map_err(err),
        None => Ok(TorusState::origin(d)),
    }
}

#[pyfunction]
#[pyo3(signature = (d, alpha, n, x0 = None))]
fn torus_orbit(d: usize, alpha: &Bound<'_, PyAny>, n: i64, x0: Option<Vec<Bound<'_, PyAny>>>) -> PyResult<Vec<Rational>> {
    let sys = torus(d, alpha)?;
    let x = dynsim::torus_orbit(&sys, &state(d, x0)?, n).map_err(err)?;
    Ok(x.coords().to_vec())
}

/// Return times of `x0` (origin by default) to the box of radius `eps`
/// around the origin.
#[pyfunction]
#[pyo3(signature = (d, alpha, eps, lo, hi, x0 = None))]
fn torus_return_set(
    d: usize,
    alpha: &Bound<'_, PyAny>,
    eps: &Bound<'_, PyAny>,
    lo: i64,
    hi: i64,
    x0: Option<Vec<Bound<'_, PyAny>>>,
) -> PyResult<WindowSet> {
    let sys = torus(d, alpha)?;
    let u = BoxNbhd::cube(d, rat(eps)?).map_err(err)?;
    Ok(WindowSet {
        inner: dynsim::return_set(&sys, &state(d, x0)?, &u, lo, hi).map_err(err)?,
    })
}

type Witnesses = Vec<(i64, Vec<f64>)>;

/// `(set, witnesses)` with one witness point per member.
#[pyfunction]
#[pyo3(signature = (d, alpha, eps, rec, lo, hi, grid = None))]
fn multi_return_set(
    d: usize,
    alpha: f64,
    eps: f64,
    rec: usize,
    lo: i64,
    hi: i64,
    grid: Option<usize>,
) -> PyResult<(WindowSet, Witnesses)> {
    let sys = TorusSystem::new(d, alpha).map_err(err)?;
    let u = BoxNbhd::cube(d, eps).map_err(err)?;
    let mr = dynsim::multi_return_set(&sys, &u, rec, lo, hi, grid.unwrap_or_else(|| dynsim::default_grid(d)))
        .map_err(err)?;
    let w = mr.witnesses.into_iter().map(|(n, x)| (n, x.coords().to_vec())).collect();
    Ok((WindowSet { inner: mr.set }, w))
}

/// `(λ₁..λ_d, λ, K_d)`.
#[pyfunction]
fn vandermonde_lambda(d: usize) -> PyResult<(Vec<BigInt>, BigInt, BigInt)> {
    let l = dynsim::vandermonde_lambda(d).map_err(err)?;
    Ok((l.lambdas, l.lambda, l.k))
}

/// Runs acceptance suites; one dict per suite.
#[pyfunction]
#[pyo3(signature = (suite = "all", seed = DEFAULT_SEED))]
fn verify<'py>(py: Python<'py>, suite: &str, seed: u64) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse().map_err(err)?]
    };
    suites
        .into_iter()
        .map(|s| {
            let r = s.run(seed);
            let d = PyDict::new(py);
            d.set_item("suite", s.name())?;
            d.set_item("number", s.number())?;
            d.set_item("passed", r.passed)?;
            d.set_item("seconds", r.elapsed.as_secs_f64())?;
            d.set_item("detail", r.detail)?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
fn nilbohr(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<WindowSet>()?;
    m.add_class::<GpExpr>()?;
    m.add_class::<NilCoords>()?;
    m.add_function(wrap_pyfunction!(bohr_window, m)?)?;
    m.add_function(wrap_pyfunction!(nil_return_set, m)?)?;
    m.add_function(wrap_pyfunction!(z1d_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(sg_d, m)?)?;
    m.add_function(wrap_pyfunction!(fs, m)?)?;
    m.add_function(wrap_pyfunction!(is_lacunary, m)?)?;
    m.add_function(wrap_pyfunction!(common_diff_set, m)?)?;
    m.add_function(wrap_pyfunction!(is_syndetic, m)?)?;
    m.add_function(wrap_pyfunction!(banach_upper_density, m)?)?;
    m.add_function(wrap_pyfunction!(intersective_witness, m)?)?;
    m.add_function(wrap_pyfunction!(find_star_pattern, m)?)?;
    m.add_function(wrap_pyfunction!(ramsey_partition, m)?)?;
    m.add_function(wrap_pyfunction!(torus_orbit, m)?)?;
    m.add_function(wrap_pyfunction!(torus_return_set, m)?)?;
    m.add_function(wrap_pyfunction!(multi_return_set, m)?)?;
    m.add_function(wrap_pyfunction!(vandermonde_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
