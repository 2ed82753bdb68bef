//! Python bindings for `zetaps`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use zetaps::arith;
use zetaps::chi::{self, ChiAssignment};
use zetaps::complexzeros::{self, Rectangle, ScanConfig, ZeroRecord};
use zetaps::dioph::{self, QuadSystem};
use zetaps::dirichlet::{PrecisionPolicy, SignedDirichletPolynomial, DEFAULT_PRECISION, DEFAULT_PRECISION_CAP};
use zetaps::mp::BigComplex;
use zetaps::realroots::{self, KSpec, RootConfig, Verdict};
use zetaps::Error;

create_exception!(zetaps_py, ZetapsError, PyRuntimeError);
create_exception!(zetaps_py, NoWitnessError, ZetapsError);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidArgument(_) => PyValueError::new_err(e.to_string()),
        Error::NoWitness { .. } => NoWitnessError::new_err(e.to_string()),
        _ => ZetapsError::new_err(e.to_string()),
    }
}

fn root_config(tolerance: f64, precision_bits: u32, precision_cap: u32) -> PyResult<RootConfig> {
    Ok(RootConfig {
        policy: PrecisionPolicy::new(precision_bits, precision_cap).map_err(to_py)?,
        tolerance,
        scan_step: None,
    })
}

/// Signed Dirichlet polynomial `sum c_m m^{-s}`, `c_m = +-1`.
#[pyclass(name = "Polynomial", module = "zetaps_py", frozen)]
struct PyPolynomial {
    inner: SignedDirichletPolynomial,
}

#[pymethods]
impl PyPolynomial {
    #[staticmethod]
    fn zeta_n(n: u64) -> PyResult<Self> {
        Ok(Self { inner: SignedDirichletPolynomial::zeta_n(n).map_err(to_py)? })
    }

    #[staticmethod]
    fn zeta_nk(n: u64, k: u64) -> PyResult<Self> {
        Ok(Self { inner: SignedDirichletPolynomial::zeta_nk(n, k).map_err(to_py)? })
    }

    #[staticmethod]
    fn from_coefficients(coeffs: Vec<i8>) -> PyResult<Self> {
        let inner = SignedDirichletPolynomial::from_coefficients(coeffs, zetaps::dirichlet::Label::ZetaN)
            .map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn n(&self) -> u64 {
        self.inner.n()
    }

    #[getter]
    fn coeffs(&self) -> Vec<i8> {
        self.inner.coeffs().to_vec()
    }

    /// `(re, im, error_bound)` of `n^s P(s)`.
    #[pyo3(signature = (sigma, tau=0.0, precision_bits=DEFAULT_PRECISION))]
    fn eval_normalized(&self, sigma: f64, tau: f64, precision_bits: u32) -> PyResult<(f64, f64, f64)> {
        let s = BigComplex::from_f64(sigma, tau, precision_bits);
        let r = self.inner.eval_normalized(&s, precision_bits).map_err(to_py)?;
        Ok((r.re_f64(), r.im_f64(), r.error_bound_f64()))
    }

    /// `(re, im, error_bound)` of the `derivative`-th derivative of `P(s)`.
    #[pyo3(signature = (sigma, tau=0.0, precision_bits=DEFAULT_PRECISION, derivative=0))]
    fn eval(&self, sigma: f64, tau: f64, precision_bits: u32, derivative: u32) -> PyResult<(f64, f64, f64)> {
        let s = BigComplex::from_f64(sigma, tau, precision_bits);
        let r = self.inner.eval(&s, precision_bits, derivative).map_err(to_py)?;
        Ok((r.re_f64(), r.im_f64(), r.error_bound_f64()))
    }

    /// `+1`, `-1`, or `None` when no precision up to the cap decides.
    #[pyo3(signature = (sigma, precision_bits=DEFAULT_PRECISION, precision_cap=DEFAULT_PRECISION_CAP))]
    fn certified_sign(&self, sigma: f64, precision_bits: u32, precision_cap: u32) -> PyResult<Option<i8>> {
        let policy = PrecisionPolicy::new(precision_bits, precision_cap).map_err(to_py)?;
        Ok(self.inner.certified_sign(sigma, &policy).map_err(to_py)?.as_i8())
    }

    /// Winding number around `(sigma_lo, sigma_hi, tau_lo, tau_hi)`.
    #[pyo3(signature = (rect, precision_bits=DEFAULT_PRECISION))]
    fn winding_number(&self, rect: (f64, f64, f64, f64), precision_bits: u32) -> PyResult<u32> {
        let r = Rectangle::new(rect.0, rect.1, rect.2, rect.3).map_err(to_py)?;
        let cfg = ScanConfig { precision_bits, ..ScanConfig::default() };
        complexzeros::winding_number(&self.inner, &r, &cfg).map_err(to_py)
    }

    /// `(zeros, complete)` with zeros as `(sigma, tau, residual)` sorted by `(tau, sigma)`.
    #[pyo3(signature = (rect, max_boxes=10_000, precision_bits=DEFAULT_PRECISION))]
    fn isolate_zeros(
        &self,
        rect: (f64, f64, f64, f64),
        max_boxes: usize,
        precision_bits: u32,
    ) -> PyResult<(Vec<(f64, f64, f64)>, bool)> {
        let r = Rectangle::new(rect.0, rect.1, rect.2, rect.3).map_err(to_py)?;
        let cfg = ScanConfig { precision_bits, ..ScanConfig::default() };
        let iso = complexzeros::isolate_zeros(&self.inner, &r, max_boxes, &cfg).map_err(to_py)?;
        Ok((zero_tuples(&iso.zeros), iso.complete))
    }

    fn __repr__(&self) -> String {
        format!("Polynomial({}, n={})", self.inner.label(), self.inner.n())
    }
}

fn zero_tuples(zeros: &[ZeroRecord]) -> Vec<(f64, f64, f64)> {
    zeros.iter().map(|z| (z.sigma, z.tau, z.residual)).collect()
}

/// Leftmost real zero of `zeta_{n,k}`.
#[pyclass(name = "RootResult", module = "zetaps_py", frozen, get_all)]
struct PyRootResult {
    n: u64,
    k: Option<u64>,
    /// `"Root"` or `"NoRealZero"`.
    verdict: String,
    /// The zero, `inf` when there is none.
    rho: f64,
    bracket: Option<(f64, f64)>,
    precision_bits: u32,
    warnings: Vec<String>,
}

#[pymethods]
impl PyRootResult {
    fn __repr__(&self) -> String {
        format!("RootResult(n={}, k={:?}, verdict={}, rho={})", self.n, self.k, self.verdict, self.rho)
    }
}

fn root_result(r: realroots::RootResult) -> PyRootResult {
    let verdict = match r.verdict {
        Verdict::Root { .. } => "Root",
        Verdict::NoRealZero { .. } => "NoRealZero",
    };
    PyRootResult {
        n: r.n,
        k: r.k,
        verdict: verdict.into(),
        rho: r.rho(),
        bracket: r.bracket(),
        precision_bits: r.precision_bits,
        warnings: r.warnings.iter().map(|w| format!("{w:?}")).collect(),
    }
}

#[pyfunction]
#[pyo3(signature = (n, k, tolerance=1e-9, precision_bits=DEFAULT_PRECISION, precision_cap=DEFAULT_PRECISION_CAP))]
fn rho(n: u64, k: u64, tolerance: f64, precision_bits: u32, precision_cap: u32) -> PyResult<PyRootResult> {
    let cfg = root_config(tolerance, precision_bits, precision_cap)?;
    realroots::rho(n, k, &cfg).map(root_result).map_err(to_py)
}

/// Rows `(n, k, rho, rho / n)`; `k` is an integer or `"full"` for `k = n - 1`.
#[pyfunction]
#[pyo3(signature = (k, n_from, n_to, step=1, tolerance=1e-9, precision_bits=DEFAULT_PRECISION, precision_cap=DEFAULT_PRECISION_CAP))]
fn rho_table(
    k: &Bound<'_, PyAny>,
    n_from: u64,
    n_to: u64,
    step: u64,
    tolerance: f64,
    precision_bits: u32,
    precision_cap: u32,
) -> PyResult<Vec<(u64, u64, f64, f64)>> {
    let spec = match k.extract::<u64>() {
        Ok(k) => KSpec::Fixed(k),
        Err(_) if k.extract::<String>().is_ok_and(|s| s == "full") => KSpec::Full,
        Err(_) => return Err(PyValueError::new_err("k must be a positive integer or \"full\"")),
    };
    let cfg = root_config(tolerance, precision_bits, precision_cap)?;
    let rows = realroots::rho_table(spec, n_from, n_to, step, &cfg).map_err(to_py)?;
    Ok(rows.iter().map(|r| (r.n, r.k, r.rho(), r.rho_over_n())).collect())
}

/// `(value, limit, abs_err)` for `n^{-cn} zeta_{n,k}(-cn)`.
#[pyfunction]
#[pyo3(signature = (n, k, c, precision_bits=DEFAULT_PRECISION))]
fn scaled_value(n: u64, k: u64, c: f64, precision_bits: u32) -> PyResult<(f64, f64, f64)> {
    let v = realroots::scaled_value(n, k, c, precision_bits).map_err(to_py)?;
    Ok((v.value, v.limit, v.abs_err))
}

/// Bounded zero scan of `zeta_n`.
#[pyclass(name = "PhiEstimate", module = "zetaps_py", frozen, get_all)]
struct PyPhiEstimate {
    n: u64,
    tau_max: f64,
    phi_hat: f64,
    rho_full: f64,
    /// `(sigma, tau, residual)` sorted by `(tau, sigma)`.
    zeros: Vec<(f64, f64, f64)>,
    complete: bool,
}

#[pymethods]
impl PyPhiEstimate {
    fn __repr__(&self) -> String {
        format!(
            "PhiEstimate(n={}, tau_max={}, phi_hat={}, zeros={}, complete={})",
            self.n,
            self.tau_max,
            self.phi_hat,
            self.zeros.len(),
            if self.complete { "True" } else { "False" }
        )
    }
}

#[pyfunction]
#[pyo3(signature = (n, tau_max, sigma_pad=1.0, tolerance=1e-9, precision_bits=DEFAULT_PRECISION))]
fn phi_hat(n: u64, tau_max: f64, sigma_pad: f64, tolerance: f64, precision_bits: u32) -> PyResult<PyPhiEstimate> {
    let cfg = ScanConfig { precision_bits, tolerance, ..ScanConfig::default() };
    let est = complexzeros::phi_hat(n, tau_max, sigma_pad, &cfg).map_err(to_py)?;
    Ok(PyPhiEstimate {
        n: est.n,
        tau_max: est.tau_max,
        phi_hat: est.phi_hat,
        rho_full: est.rho_full,
        zeros: zero_tuples(&est.zeros),
        complete: est.complete,
    })
}

/// Completely multiplicative sign function given by its `-1` primes.
#[pyclass(name = "ChiAssignment", module = "zetaps_py", frozen)]
struct PyChi {
    inner: ChiAssignment,
}

#[pymethods]
impl PyChi {
    #[new]
    fn new(negative_primes: Vec<u64>) -> PyResult<Self> {
        Ok(Self { inner: ChiAssignment::from_negative_primes(&negative_primes).map_err(to_py)? })
    }

    #[getter]
    fn overrides(&self) -> BTreeMap<u64, i8> {
        self.inner.overrides().clone()
    }

    #[getter]
    fn provenance(&self) -> &'static str {
        self.inner.provenance().name()
    }

    fn value(&self, m: u64) -> PyResult<i8> {
        if m == 0 {
            return Err(PyValueError::new_err("chi is defined on positive integers"));
        }
        Ok(self.inner.value(m))
    }

    fn verify_pattern(&self, n: u64, k: u64) -> bool {
        chi::verify_pattern(&self.inner, n, k)
    }

    fn domination_check(&self, n: u64, k: u64) -> bool {
        chi::domination_check(&self.inner, n, k)
    }

    /// `zeta_{n,chi}`.
    fn polynomial(&self, n: u64) -> PyResult<PyPolynomial> {
        Ok(PyPolynomial { inner: self.inner.polynomial(n).map_err(to_py)? })
    }

    fn __repr__(&self) -> String {
        format!("ChiAssignment({})", self.inner)
    }
}

#[pyfunction]
fn construct_chi(n: u64, k: u64) -> PyResult<PyChi> {
    Ok(PyChi { inner: chi::construct_chi(n, k).map_err(to_py)? })
}

#[pyfunction]
fn brute_force_chi(n: u64, k: u64) -> PyResult<PyChi> {
    Ok(PyChi { inner: chi::brute_force_chi(n, k).map_err(to_py)? })
}

/// `[(p, e), ...]` with `n = prod p^e`.
#[pyfunction]
fn factorize(n: u64) -> PyResult<Vec<(u64, u32)>> {
    Ok(arith::factorize(n).map_err(to_py)?.factors().to_vec())
}

#[pyfunction]
fn squarefree_kernel(n: u64) -> PyResult<u64> {
    if n == 0 {
        return Err(PyValueError::new_err("n must be positive"));
    }
    Ok(arith::squarefree_kernel(n))
}

/// `(kernels, distinct, smooth_indices, large_prime_unique)` for `r(n), ..., r(n - k)`.
#[pyfunction]
fn window_report(n: u64, k: u64) -> PyResult<(Vec<u64>, bool, Vec<u64>, bool)> {
    let w = arith::window_report(n, k).map_err(to_py)?;
    Ok((w.kernels, w.distinct, w.smooth_indices.into_iter().collect(), w.large_prime_unique))
}

#[pyfunction]
fn smooth_triple_scan(k: u64, n_max: u64) -> PyResult<Vec<u64>> {
    dioph::smooth_triple_scan(k, n_max).map_err(to_py)
}

/// Solutions `(x, y, z)` with coordinates `<= bound`.
#[pyfunction]
fn search_solutions(u: [u64; 3], kk: [u64; 3], bound: u64) -> PyResult<Vec<(u64, u64, u64)>> {
    let sys = QuadSystem::new(u, kk).map_err(to_py)?;
    Ok(dioph::search_solutions(&sys, bound))
}

/// `(X, Y, alpha, beta)` on `Y^2 = X (X - alpha) (X - beta)`.
#[pyfunction]
fn weierstrass_map(u: [u64; 3], kk: [u64; 3], solution: (u64, u64, u64)) -> PyResult<(BigInt, BigInt, BigInt, BigInt)> {
    let sys = QuadSystem::new(u, kk).map_err(to_py)?;
    let p = dioph::weierstrass_map(&sys, solution).map_err(to_py)?;
    Ok((p.x, p.y, p.alpha, p.beta))
}

#[pymodule]
fn zetaps_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ZetapsError", m.py().get_type::<ZetapsError>())?;
    m.add("NoWitnessError", m.py().get_type::<NoWitnessError>())?;
    m.add_class::<PyPolynomial>()?;
    m.add_class::<PyRootResult>()?;
    m.add_class::<PyPhiEstimate>()?;
    m.add_class::<PyChi>()?;
    m.add_function(wrap_pyfunction!(rho, m)?)?;
    m.add_function(wrap_pyfunction!(rho_table, m)?)?;
    m.add_function(wrap_pyfunction!(scaled_value, m)?)?;
    m.add_function(wrap_pyfunction!(phi_hat, m)?)?;
    m.add_function(wrap_pyfunction!(construct_chi, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_chi, m)?)?;
    m.add_function(wrap_pyfunction!(factorize, m)?)?;
    m.add_function(wrap_pyfunction!(squarefree_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(window_report, m)?)?;
    m.add_function(wrap_pyfunction!(smooth_triple_scan, m)?)?;
    m.add_function(wrap_pyfunction!(search_solutions, m)?)?;
    m.add_function(wrap_pyfunction!(weierstrass_map, m)?)?;
    Ok(())
}
