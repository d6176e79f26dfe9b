//! Python bindings: the detector pipeline, morphology kernels, and the
//! Monte-Carlo harness, exposed as the `morphdet` extension module.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use morphdet_core as core;

fn err(e: core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn decision_sign(d: core::Decision) -> i32 {
    d.sign()
}

/// Two-component Gaussian mixture noise parameters.
#[pyclass(name = "NoiseParams", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyNoiseParams {
    inner: core::NoiseParams,
}

#[pymethods]
impl PyNoiseParams {
    #[new]
    fn new(epsilon: f64, sigma1: f64, sigma2: f64) -> PyResult<Self> {
        Ok(Self {
            inner: core::NoiseParams::new(epsilon, sigma1, sigma2).map_err(err)?,
        })
    }

    #[getter]
    fn epsilon(&self) -> f64 {
        self.inner.epsilon()
    }

    #[getter]
    fn sigma1(&self) -> f64 {
        self.inner.sigma1()
    }

    #[getter]
    fn sigma2(&self) -> f64 {
        self.inner.sigma2()
    }

    #[getter]
    fn total_std(&self) -> f64 {
        self.inner.total_std()
    }

    /// Mixture density at x.
    fn pdf(&self, x: f64) -> PyResult<f64> {
        self.inner.pdf(x).map_err(err)
    }

    /// Underflow-safe log of the mixture density.
    fn log_pdf(&self, x: f64) -> PyResult<f64> {
        self.inner.log_pdf(x).map_err(err)
    }

    /// Draw n labeled samples; returns (samples, labels) with label 1 for
    /// the background component and 0 for the impulse component.
    fn sample_labeled(&self, n: usize, seed: u64) -> (Vec<f64>, Vec<u8>) {
        let mut rng = core::symbol_stream(seed, 0, 0);
        let noise = self.inner.sample_labeled(n, &mut rng);
        (noise.samples().to_vec(), noise.labels().to_vec())
    }

    fn __repr__(&self) -> String {
        format!(
            "NoiseParams(epsilon={}, sigma1={}, sigma2={})",
            self.inner.epsilon(),
            self.inner.sigma1(),
            self.inner.sigma2()
        )
    }
}

/// Quantizer geometry: levels-per-unit scale and level count.
#[pyclass(name = "QuantConfig", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyQuantConfig {
    inner: core::QuantConfig,
}

#[pymethods]
impl PyQuantConfig {
    #[new]
    fn new(scale: f64, levels: usize) -> PyResult<Self> {
        Ok(Self {
            inner: core::QuantConfig::new(scale, levels).map_err(err)?,
        })
    }

    #[getter]
    fn scale(&self) -> f64 {
        self.inner.scale()
    }

    #[getter]
    fn levels(&self) -> usize {
        self.inner.levels()
    }

    #[getter]
    fn offset(&self) -> i32 {
        self.inner.offset()
    }

    fn __repr__(&self) -> String {
        format!(
            "QuantConfig(scale={}, levels={})",
            self.inner.scale(),
            self.inner.levels()
        )
    }
}

/// Horizontal line structuring element (odd length).
#[pyclass(name = "StructuringElement", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyStructuringElement {
    inner: core::StructuringElement,
}

#[pymethods]
impl PyStructuringElement {
    #[new]
    fn new(length: usize) -> PyResult<Self> {
        Ok(Self {
            inner: core::StructuringElement::line(length).map_err(err)?,
        })
    }

    #[getter]
    fn length(&self) -> usize {
        self.inner.length()
    }

    #[getter]
    fn origin(&self) -> usize {
        self.inner.origin()
    }

    fn __repr__(&self) -> String {
        format!("StructuringElement(length={})", self.inner.length())
    }
}

/// Unit-sum receiver filter.
#[pyclass(name = "ImpulseResponse", frozen, from_py_object)]
#[derive(Clone)]
struct PyImpulseResponse {
    inner: core::ImpulseResponse,
}

#[pymethods]
impl PyImpulseResponse {
    #[new]
    fn new(taps: Vec<f64>) -> PyResult<Self> {
        Ok(Self {
            inner: core::ImpulseResponse::from_taps(taps).map_err(err)?,
        })
    }

    /// The default raised-cosine design of effective length
    /// round(significant_fraction * symbol_len).
    #[staticmethod]
    #[pyo3(signature = (symbol_len, significant_fraction=0.1))]
    fn design(symbol_len: usize, significant_fraction: f64) -> PyResult<Self> {
        Ok(Self {
            inner: core::design_receiver_filter(symbol_len, significant_fraction).map_err(err)?,
        })
    }

    #[getter]
    fn taps(&self) -> Vec<f64> {
        self.inner.taps().to_vec()
    }

    #[getter]
    fn peak_index(&self) -> usize {
        self.inner.peak_index()
    }

    /// Peak-aligned convolution; output length equals input length.
    fn convolve(&self, x: Vec<f64>) -> Vec<f64> {
        core::convolve(&x, &self.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "ImpulseResponse(len={}, peak_index={})",
            self.inner.len(),
            self.inner.peak_index()
        )
    }
}

/// Bit-packed binary image (columns = time, rows = amplitude levels).
#[pyclass(name = "BinaryImage", skip_from_py_object)]
#[derive(Clone)]
struct PyBinaryImage {
    inner: core::BinaryImage,
}

#[pymethods]
impl PyBinaryImage {
    #[new]
    #[pyo3(signature = (width, height, filled=false))]
    fn new(width: usize, height: usize, filled: bool) -> PyResult<Self> {
        let inner = if filled {
            core::BinaryImage::filled(width, height)
        } else {
            core::BinaryImage::zeros(width, height)
        };
        Ok(Self {
            inner: inner.map_err(err)?,
        })
    }

    #[getter]
    fn width(&self) -> usize {
        self.inner.width()
    }

    #[getter]
    fn height(&self) -> usize {
        self.inner.height()
    }

    fn get(&self, col: usize, row: usize) -> PyResult<bool> {
        if col >= self.inner.width() || row >= self.inner.height() {
            return Err(PyValueError::new_err(format!(
                "pixel ({col},{row}) out of range"
            )));
        }
        Ok(self.inner.get(col, row))
    }

    fn set(&mut self, col: usize, row: usize, value: bool) -> PyResult<()> {
        if col >= self.inner.width() || row >= self.inner.height() {
            return Err(PyValueError::new_err(format!(
                "pixel ({col},{row}) out of range"
            )));
        }
        self.inner.set(col, row, value);
        Ok(())
    }

    fn column_sums(&self) -> Vec<u32> {
        self.inner.column_sums()
    }

    fn count_ones(&self) -> u64 {
        self.inner.count_ones()
    }

    /// Plain-text portable bitmap (P1) dump.
    fn to_pbm(&self) -> String {
        self.inner.to_pbm()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "BinaryImage({}x{}, {} ones)",
            self.inner.width(),
            self.inner.height(),
            self.inner.count_ones()
        )
    }
}

/// Per-detector error statistics at one impulse-std value.
#[pyclass(name = "BerPoint", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyBerPoint {
    inner: core::BerPoint,
}

#[pymethods]
impl PyBerPoint {
    #[getter]
    fn detector(&self) -> &'static str {
        self.inner.detector.name()
    }

    #[getter]
    fn sigma2(&self) -> f64 {
        self.inner.sigma2
    }

    #[getter]
    fn total_std(&self) -> f64 {
        self.inner.total_std
    }

    #[getter]
    fn symbols(&self) -> u64 {
        self.inner.symbols
    }

    #[getter]
    fn errors(&self) -> u64 {
        self.inner.errors
    }

    #[getter]
    fn ber(&self) -> f64 {
        self.inner.ber
    }

    #[getter]
    fn ci_low(&self) -> f64 {
        self.inner.ci_low
    }

    #[getter]
    fn ci_high(&self) -> f64 {
        self.inner.ci_high
    }

    #[getter]
    fn capped(&self) -> bool {
        self.inner.capped
    }

    fn __repr__(&self) -> String {
        format!(
            "BerPoint(detector='{}', sigma2={}, ber={:.6e}, errors={}, symbols={}, capped={})",
            self.inner.detector.name(),
            self.inner.sigma2,
            self.inner.ber,
            self.inner.errors,
            self.inner.symbols,
            self.inner.capped
        )
    }
}

/// One Monte-Carlo experiment point.
#[pyclass(name = "Scenario", skip_from_py_object)]
#[derive(Clone)]
struct PyScenario {
    inner: core::Scenario,
}

#[pymethods]
impl PyScenario {
    #[new]
    #[pyo3(signature = (
        epsilon,
        sigma1,
        sigma2,
        detectors,
        amplitude = 1.0,
        symbol_len = 70,
        scale = 10.0,
        levels = 300,
        se_length = 15,
        seed = 0,
        min_errors = 100,
        max_symbols = 10_000_000,
        filter = None,
    ))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        epsilon: f64,
        sigma1: f64,
        sigma2: f64,
        detectors: Vec<String>,
        amplitude: f64,
        symbol_len: usize,
        scale: f64,
        levels: usize,
        se_length: usize,
        seed: u64,
        min_errors: u64,
        max_symbols: u64,
        filter: Option<PyImpulseResponse>,
    ) -> PyResult<Self> {
        let parsed: Vec<core::DetectorKind> = detectors
            .iter()
            .map(|name| name.parse().map_err(err))
            .collect::<PyResult<_>>()?;
        let filter = match filter {
            Some(f) => f.inner,
            None => core::design_receiver_filter(symbol_len, 0.1).map_err(err)?,
        };
        let scenario = core::Scenario {
            noise: core::NoiseParams::new(epsilon, sigma1, sigma2).map_err(err)?,
            quant: core::QuantConfig::new(scale, levels).map_err(err)?,
            se: core::StructuringElement::line(se_length).map_err(err)?,
            amplitude,
            symbol_len,
            filter,
            detectors: parsed,
            master_seed: seed,
            min_errors,
            max_symbols,
        };
        scenario.validate().map_err(err)?;
        Ok(Self { inner: scenario })
    }

    #[getter]
    fn detectors(&self) -> Vec<&'static str> {
        self.inner.detectors.iter().map(|d| d.name()).collect()
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.master_seed
    }

    fn __repr__(&self) -> String {
        format!(
            "Scenario(epsilon={}, sigma1={}, sigma2={}, detectors={:?}, seed={})",
            self.inner.noise.epsilon(),
            self.inner.noise.sigma1(),
            self.inner.noise.sigma2(),
            self.detectors(),
            self.inner.master_seed
        )
    }
}

#[pyfunction]
fn quantize(signal: Vec<f64>, cfg: &PyQuantConfig) -> Vec<i32> {
    core::quantize(&signal, &cfg.inner).into_values()
}

#[pyfunction]
fn signal_to_image(values: Vec<i32>, cfg: &PyQuantConfig) -> PyResult<PyBinaryImage> {
    let q = core::QuantizedSignal::from_values(values, &cfg.inner).map_err(err)?;
    Ok(PyBinaryImage {
        inner: core::signal_to_image(&q, &cfg.inner),
    })
}

#[pyfunction]
fn signal_to_image_mirrored(values: Vec<i32>, cfg: &PyQuantConfig) -> PyResult<PyBinaryImage> {
    let q = core::QuantizedSignal::from_values(values, &cfg.inner).map_err(err)?;
    Ok(PyBinaryImage {
        inner: core::signal_to_image_mirrored(&q, &cfg.inner),
    })
}

#[pyfunction]
#[pyo3(signature = (img, cfg, negate=false))]
fn image_to_signal(img: &PyBinaryImage, cfg: &PyQuantConfig, negate: bool) -> PyResult<Vec<i32>> {
    if img.inner.height() != cfg.inner.levels() {
        return Err(PyValueError::new_err(format!(
            "image height {} does not match quantizer levels {}",
            img.inner.height(),
            cfg.inner.levels()
        )));
    }
    Ok(core::image_to_signal(&img.inner, &cfg.inner, negate))
}

#[pyfunction]
fn erode(img: &PyBinaryImage, se: &PyStructuringElement) -> PyBinaryImage {
    PyBinaryImage {
        inner: core::erode(&img.inner, &se.inner),
    }
}

#[pyfunction]
fn dilate(img: &PyBinaryImage, se: &PyStructuringElement) -> PyBinaryImage {
    PyBinaryImage {
        inner: core::dilate(&img.inner, &se.inner),
    }
}

#[pyfunction]
fn open(img: &PyBinaryImage, se: &PyStructuringElement) -> PyBinaryImage {
    PyBinaryImage {
        inner: core::open(&img.inner, &se.inner),
    }
}

#[pyfunction]
fn close(img: &PyBinaryImage, se: &PyStructuringElement) -> PyBinaryImage {
    PyBinaryImage {
        inner: core::close(&img.inner, &se.inner),
    }
}

#[pyfunction]
fn open_close(img: &PyBinaryImage, se: &PyStructuringElement) -> PyBinaryImage {
    PyBinaryImage {
        inner: core::open_close(&img.inner, &se.inner),
    }
}

/// Morphological decision (+1 or -1) on a filtered waveform.
#[pyfunction]
fn detect_morph(r: Vec<f64>, cfg: &PyQuantConfig, se: &PyStructuringElement) -> i32 {
    decision_sign(core::detect_morph(&r, &cfg.inner, &se.inner))
}

/// Morphological decision plus the intermediate signals as a dict with
/// keys q, s1, s2, s_r.
#[pyfunction]
fn detect_morph_traced<'py>(
    py: Python<'py>,
    r: Vec<f64>,
    cfg: &PyQuantConfig,
    se: &PyStructuringElement,
) -> PyResult<(i32, Bound<'py, pyo3::types::PyDict>)> {
    let (decision, trace) = core::detect_morph_traced(&r, &cfg.inner, &se.inner);
    let dict = pyo3::types::PyDict::new(py);
    dict.set_item("q", trace.quantized)?;
    dict.set_item("s1", trace.first_pass)?;
    dict.set_item("s2", trace.second_pass)?;
    dict.set_item("s_r", trace.averaged)?;
    Ok((decision_sign(decision), dict))
}

#[pyfunction]
fn detect_map_mixture(
    r: Vec<f64>,
    plus: Vec<f64>,
    minus: Vec<f64>,
    params: &PyNoiseParams,
) -> PyResult<i32> {
    let hyp = core::HypothesisPair::new(plus, minus).map_err(err)?;
    if r.len() != hyp.len() {
        return Err(PyValueError::new_err("waveform length mismatch"));
    }
    Ok(decision_sign(core::detect_map_mixture(
        &r,
        &hyp,
        &params.inner,
    )))
}

#[pyfunction]
fn detect_map_genie(
    r: Vec<f64>,
    labels: Vec<u8>,
    plus: Vec<f64>,
    minus: Vec<f64>,
    params: &PyNoiseParams,
) -> PyResult<i32> {
    let hyp = core::HypothesisPair::new(plus, minus).map_err(err)?;
    if r.len() != hyp.len() || r.len() != labels.len() {
        return Err(PyValueError::new_err("waveform/label length mismatch"));
    }
    Ok(decision_sign(
        core::detect_map_genie(&r, &labels, &hyp, &params.inner).map_err(err)?,
    ))
}

#[pyfunction]
fn detect_matched_filter(r: Vec<f64>, template: Vec<f64>) -> PyResult<i32> {
    if r.len() != template.len() {
        return Err(PyValueError::new_err("waveform length mismatch"));
    }
    Ok(decision_sign(core::detect_matched_filter(&r, &template)))
}

/// Simulate one symbol; returns (truth, decisions) as +1/-1 signs, with
/// decisions parallel to the scenario's detector list.
#[pyfunction]
fn run_symbol(scenario: &PyScenario, symbol_index: u64) -> PyResult<(i32, Vec<i32>)> {
    let outcome = core::run_symbol(&scenario.inner, symbol_index).map_err(err)?;
    Ok((
        outcome.truth.sign(),
        outcome.decisions.iter().map(|d| d.sign()).collect(),
    ))
}

/// Run one BER point; returns one BerPoint per enabled detector.
#[pyfunction]
fn run_ber_point(py: Python<'_>, scenario: &PyScenario) -> PyResult<Vec<PyBerPoint>> {
    let inner = scenario.inner.clone();
    let points = py
        .detach(move || core::run_ber_point(&inner))
        .map_err(err)?;
    Ok(points
        .into_iter()
        .map(|inner| PyBerPoint { inner })
        .collect())
}

/// Run a BER sweep over a sigma2 grid; points are ordered by sigma2.
#[pyfunction]
fn sweep(
    py: Python<'_>,
    scenario: &PyScenario,
    sigma2_grid: Vec<f64>,
) -> PyResult<Vec<PyBerPoint>> {
    let inner = scenario.inner.clone();
    let points = py
        .detach(move || core::sweep(&inner, &sigma2_grid))
        .map_err(err)?;
    Ok(points
        .into_iter()
        .map(|inner| PyBerPoint { inner })
        .collect())
}

/// 95% Wilson score interval for errors/trials.
#[pyfunction]
fn wilson_interval(errors: u64, trials: u64) -> PyResult<(f64, f64)> {
    if trials == 0 || errors > trials {
        return Err(PyValueError::new_err(
            "need 0 <= errors <= trials with trials > 0",
        ));
    }
    Ok(core::wilson_interval(errors, trials))
}

#[pymodule]
fn morphdet(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyNoiseParams>()?;
    m.add_class::<PyQuantConfig>()?;
    m.add_class::<PyStructuringElement>()?;
    m.add_class::<PyImpulseResponse>()?;
    m.add_class::<PyBinaryImage>()?;
    m.add_class::<PyBerPoint>()?;
    m.add_class::<PyScenario>()?;
    m.add_function(wrap_pyfunction!(quantize, m)?)?;
    m.add_function(wrap_pyfunction!(signal_to_image, m)?)?;
    m.add_function(wrap_pyfunction!(signal_to_image_mirrored, m)?)?;
    m.add_function(wrap_pyfunction!(image_to_signal, m)?)?;
    m.add_function(wrap_pyfunction!(erode, m)?)?;
    m.add_function(wrap_pyfunction!(dilate, m)?)?;
    m.add_function(wrap_pyfunction!(open, m)?)?;
    m.add_function(wrap_pyfunction!(close, m)?)?;
    m.add_function(wrap_pyfunction!(open_close, m)?)?;
    m.add_function(wrap_pyfunction!(detect_morph, m)?)?;
    m.add_function(wrap_pyfunction!(detect_morph_traced, m)?)?;
    m.add_function(wrap_pyfunction!(detect_map_mixture, m)?)?;
    m.add_function(wrap_pyfunction!(detect_map_genie, m)?)?;
    m.add_function(wrap_pyfunction!(detect_matched_filter, m)?)?;
    m.add_function(wrap_pyfunction!(run_symbol, m)?)?;
    m.add_function(wrap_pyfunction!(run_ber_point, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(wilson_interval, m)?)?;
    Ok(())
}
