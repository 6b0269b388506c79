//! Python bindings: sensing matrices, the detectors, the ZD-GroTh guarantee
//! check and NUWS helpers.

use lmp::blocksparse::{
    self, BlockPartition, BlockSparseSignal, CMatrix, CVector, MeasurementVector,
};
use lmp::detectors;
use lmp::nuws::{self, DictionaryGrid, WaveletParams};
use lmp::rfsim::ChannelPlan;
use lmp::Complex64;
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: lmp::Error) -> PyErr {
    match e {
        lmp::Error::Io(e) => PyOSError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn matrix_from_rows(rows: &[Vec<Complex64>]) -> PyResult<CMatrix> {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    if m == 0 || n == 0 {
        return Err(PyValueError::new_err(
            "matrix must have at least one row and column",
        ));
    }
    if rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("rows have different lengths"));
    }
    Ok(CMatrix::from_fn(m, n, |r, c| rows[r][c]))
}

/// Block-partitioned complex sensing matrix.
#[pyclass(name = "SensingMatrix", module = "lmp_py", frozen)]
struct PySensingMatrix {
    inner: blocksparse::SensingMatrix,
}

#[pymethods]
impl PySensingMatrix {
    /// `rows` is a list of equal-length lists of complex numbers; the block
    /// sizes must sum to the row length.
    #[new]
    fn new(rows: Vec<Vec<Complex64>>, block_sizes: Vec<usize>) -> PyResult<Self> {
        let entries = matrix_from_rows(&rows)?;
        let partition = BlockPartition::new(block_sizes).map_err(to_py)?;
        let inner = blocksparse::SensingMatrix::new(entries, partition).map_err(to_py)?;
        Ok(Self { inner })
    }

    /// Effective matrix `Theta Psi^-1` of `{-1, 0, +1}` wavelet rows.
    #[staticmethod]
    fn from_wavelet_rows(rows: Vec<Vec<i8>>, block_sizes: Vec<usize>) -> PyResult<Self> {
        let n = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || rows.iter().any(|r| r.len() != n) {
            return Err(PyValueError::new_err(
                "rows must be nonempty and of equal length",
            ));
        }
        let theta = CMatrix::from_fn(rows.len(), n, |r, c| Complex64::from(rows[r][c] as f64));
        let partition = BlockPartition::new(block_sizes).map_err(to_py)?;
        let inner = nuws::effective_matrix(&theta, n, &partition).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn rows(&self) -> usize {
        self.inner.rows()
    }

    #[getter]
    fn cols(&self) -> usize {
        self.inner.cols()
    }

    #[getter]
    fn block_sizes(&self) -> Vec<usize> {
        self.inner.partition().sizes().to_vec()
    }

    fn entries(&self) -> Vec<Vec<Complex64>> {
        let e = self.inner.entries();
        (0..e.nrows())
            .map(|r| e.row(r).iter().copied().collect())
            .collect()
    }

    /// Block coherence `mu_B`.
    fn coherence(&self) -> PyResult<f64> {
        blocksparse::block_coherence(&self.inner).map_err(to_py)
    }

    /// Smallest singular value over all blocks.
    fn min_block_singular(&self) -> f64 {
        blocksparse::min_block_singular(&self.inner)
    }

    /// Whitened block correlations `lambda_i(r)`.
    fn correlations(&self, r: Vec<Complex64>) -> PyResult<Vec<f64>> {
        self.inner
            .correlations(&CVector::from_vec(r))
            .map_err(to_py)
    }

    /// `A x` for a full-length coefficient vector.
    fn apply(&self, x: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
        if x.len() != self.inner.cols() {
            return Err(PyValueError::new_err(format!(
                "expected {} coefficients, got {}",
                self.inner.cols(),
                x.len()
            )));
        }
        Ok((self.inner.entries() * CVector::from_vec(x))
            .iter()
            .copied()
            .collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "SensingMatrix(rows={}, cols={}, blocks={})",
            self.inner.rows(),
            self.inner.cols(),
            self.inner.num_blocks()
        )
    }
}

#[pyclass(name = "Detection", module = "lmp_py", frozen, get_all)]
struct PyDetection {
    declared_unused: usize,
    method: String,
    scores: Vec<f64>,
}

impl From<detectors::Detection> for PyDetection {
    fn from(d: detectors::Detection) -> Self {
        Self {
            declared_unused: d.declared_unused,
            method: d.method.to_string(),
            scores: d.scores,
        }
    }
}

#[pymethods]
impl PyDetection {
    fn __repr__(&self) -> String {
        format!(
            "Detection(method={:?}, declared_unused={})",
            self.method, self.declared_unused
        )
    }
}

#[pyclass(name = "BompTrace", module = "lmp_py", frozen, get_all)]
struct PyBompTrace {
    support_sequence: Vec<usize>,
    correlation_history: Vec<Vec<f64>>,
    residual_norms: Vec<f64>,
    final_estimate: Vec<Complex64>,
}

#[pyclass(name = "GuaranteeReport", module = "lmp_py", frozen, get_all)]
struct PyGuaranteeReport {
    lhs: f64,
    rhs: f64,
    holds: bool,
    coherence: f64,
    min_singular: f64,
    min_used_norm: f64,
    used_norm_sum: f64,
    noise_norm: f64,
    unused_upper: f64,
    used_lower: f64,
}

#[pymethods]
impl PyGuaranteeReport {
    fn __repr__(&self) -> String {
        format!(
            "GuaranteeReport(lhs={}, rhs={}, holds={})",
            self.lhs, self.rhs, self.holds
        )
    }
}

fn measurement(y: Vec<Complex64>) -> MeasurementVector {
    MeasurementVector::new(CVector::from_vec(y))
}

#[pyfunction]
fn zd_groth(a: &PySensingMatrix, y: Vec<Complex64>) -> PyResult<PyDetection> {
    detectors::zd_groth(&a.inner, &measurement(y))
        .map(Into::into)
        .map_err(to_py)
}

#[pyfunction(name = "lmp")]
#[pyo3(signature = (a, y, depth = detectors::DEFAULT_LMP_DEPTH))]
fn least_matching_pursuit(
    a: &PySensingMatrix,
    y: Vec<Complex64>,
    depth: usize,
) -> PyResult<PyDetection> {
    detectors::lmp(&a.inner, &measurement(y), depth)
        .map(Into::into)
        .map_err(to_py)
}

#[pyfunction]
fn bomp_elimination(a: &PySensingMatrix, y: Vec<Complex64>) -> PyResult<PyDetection> {
    detectors::bomp_elimination(&a.inner, &measurement(y))
        .map(Into::into)
        .map_err(to_py)
}

#[pyfunction]
fn nyquist_min_power(x: Vec<Complex64>, block_sizes: Vec<usize>) -> PyResult<PyDetection> {
    let p = BlockPartition::new(block_sizes).map_err(to_py)?;
    detectors::nyquist_min_power(&CVector::from_vec(x), &p)
        .map(Into::into)
        .map_err(to_py)
}

#[pyfunction]
fn bomp(a: &PySensingMatrix, y: Vec<Complex64>, iterations: usize) -> PyResult<PyBompTrace> {
    let t = detectors::bomp(&a.inner, &measurement(y), iterations).map_err(to_py)?;
    Ok(PyBompTrace {
        support_sequence: t.support_sequence,
        correlation_history: t.correlation_history,
        residual_norms: t.residual_norms,
        final_estimate: t.final_estimate.iter().copied().collect(),
    })
}

#[pyfunction]
fn block_coherence(a: &PySensingMatrix) -> PyResult<f64> {
    a.coherence()
}

#[pyfunction]
fn check_zd_guarantee(
    a: &PySensingMatrix,
    x: Vec<Complex64>,
    noise_norm: f64,
) -> PyResult<PyGuaranteeReport> {
    let x =
        BlockSparseSignal::new(CVector::from_vec(x), a.inner.partition().clone()).map_err(to_py)?;
    let r = detectors::check_zd_guarantee(&a.inner, &x, noise_norm).map_err(to_py)?;
    let b = r.correlation_bounds();
    Ok(PyGuaranteeReport {
        lhs: r.lhs,
        rhs: r.rhs,
        holds: r.holds,
        coherence: r.coherence,
        min_singular: r.min_singular,
        min_used_norm: r.min_used_norm,
        used_norm_sum: r.used_norm_sum,
        noise_norm: r.noise_norm,
        unused_upper: b.unused_upper,
        used_lower: b.used_lower,
    })
}

#[pyfunction]
fn haar_wavelet(tau: usize, rho: usize, half_period: usize, n: usize) -> PyResult<Vec<i8>> {
    nuws::haar_wavelet(
        WaveletParams {
            tau,
            rho,
            half_period,
        },
        n,
    )
    .map_err(to_py)
}

/// Greedy NUWS selection of `m` rows from the default dictionary for `b`
/// equal channels of `n / b` bins. Returns `(rows, matrix, trajectory)`.
#[pyfunction]
#[pyo3(signature = (m, n = 200, b = 20, candidates_per_step = Some(200), seed = 1))]
fn greedy_select(
    py: Python<'_>,
    m: usize,
    n: usize,
    b: usize,
    candidates_per_step: Option<usize>,
    seed: u64,
) -> PyResult<(Vec<usize>, PySensingMatrix, Vec<f64>)> {
    if b == 0 || !n.is_multiple_of(b) {
        return Err(PyValueError::new_err("n must be a positive multiple of b"));
    }
    let plan = ChannelPlan {
        num_channels: b,
        bins_per_channel: n / b,
        ..ChannelPlan::default()
    };
    let sel = py
        .detach(|| {
            let dict = DictionaryGrid::default().build(n)?;
            nuws::greedy_select(
                &dict,
                &plan.partition(),
                m,
                candidates_per_step,
                seed,
                blocksparse::DEFAULT_RANK_TOLERANCE,
            )
        })
        .map_err(to_py)?;
    Ok((
        sel.chosen,
        PySensingMatrix { inner: sel.matrix },
        sel.coherence_trajectory,
    ))
}

#[pymodule]
fn lmp_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySensingMatrix>()?;
    m.add_class::<PyDetection>()?;
    m.add_class::<PyBompTrace>()?;
    m.add_class::<PyGuaranteeReport>()?;
    m.add_function(wrap_pyfunction!(zd_groth, m)?)?;
    m.add_function(wrap_pyfunction!(least_matching_pursuit, m)?)?;
    m.add_function(wrap_pyfunction!(bomp_elimination, m)?)?;
    m.add_function(wrap_pyfunction!(nyquist_min_power, m)?)?;
    m.add_function(wrap_pyfunction!(bomp, m)?)?;
    m.add_function(wrap_pyfunction!(block_coherence, m)?)?;
    m.add_function(wrap_pyfunction!(check_zd_guarantee, m)?)?;
    m.add_function(wrap_pyfunction!(haar_wavelet, m)?)?;
    m.add_function(wrap_pyfunction!(greedy_select, m)?)?;
    Ok(())
}
