//! Python module `pupiloc`: images, regions, the three pupil locators and
//! the detection-error metric.
//!
//! Library errors raise `pupiloc.PupilocError` (a `ValueError`) whose
//! message starts with the error code, e.g. `no_candidate_pixels: ...`.
//! File system failures raise `OSError`.

use pyo3::create_exception;
use pyo3::exceptions::{PyIndexError, PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;

use pupiloc::eval::{EyeAnnotation, PixelPos};
use pupiloc::{
    AlgoParams, Algorithm, CdfParams, EaParams, Error, EvalRecord, EvalStatus, PfParams,
    PupilEstimate, SynthEyeSpec,
};

create_exception!(pupiloc, PupilocError, PyValueError);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyOSError::new_err(e.to_string()),
        e => PupilocError::new_err(format!("{}: {e}", e.code())),
    }
}

/// 8-bit grayscale image.
#[pyclass(name = "GrayImage", module = "pupiloc", frozen)]
struct PyGrayImage {
    inner: pupiloc::GrayImage,
}

#[pymethods]
impl PyGrayImage {
    /// Builds an image from `width * height` row-major bytes.
    #[new]
    fn new(width: usize, height: usize, data: Vec<u8>) -> PyResult<Self> {
        let inner = pupiloc::GrayImage::new(width, height, data).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn filled(width: usize, height: usize, value: u8) -> PyResult<Self> {
        if width == 0 || height == 0 {
            return Err(PupilocError::new_err(
                "invalid_image: dimensions must be positive",
            ));
        }
        Ok(Self {
            inner: pupiloc::GrayImage::filled(width, height, value),
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

    fn get(&self, x: usize, y: usize) -> PyResult<u8> {
        if x >= self.inner.width() || y >= self.inner.height() {
            return Err(PyIndexError::new_err(format!(
                "pixel ({x}, {y}) is outside the image"
            )));
        }
        Ok(self.inner.get(x, y))
    }

    /// Raw row-major pixels.
    fn to_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, self.inner.as_raw())
    }

    fn bounds(&self) -> PyRegion {
        PyRegion {
            inner: self.inner.bounds(),
        }
    }

    fn crop(&self, region: &PyRegion) -> PyResult<Self> {
        let inner = self.inner.crop(&region.inner).map_err(to_py)?;
        Ok(Self { inner })
    }

    fn mirror_horizontal(&self) -> Self {
        Self {
            inner: self.inner.mirror_horizontal(),
        }
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "GrayImage(width={}, height={})",
            self.inner.width(),
            self.inner.height()
        )
    }
}

/// Axis-aligned rectangle `x0, y0, width, height`.
#[pyclass(name = "Region", module = "pupiloc", frozen)]
struct PyRegion {
    inner: pupiloc::Region,
}

#[pymethods]
impl PyRegion {
    #[new]
    fn new(x0: usize, y0: usize, width: usize, height: usize) -> PyResult<Self> {
        let inner = pupiloc::Region::new(x0, y0, width, height).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn x0(&self) -> usize {
        self.inner.x0()
    }

    #[getter]
    fn y0(&self) -> usize {
        self.inner.y0()
    }

    #[getter]
    fn width(&self) -> usize {
        self.inner.width()
    }

    #[getter]
    fn height(&self) -> usize {
        self.inner.height()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "Region(x0={}, y0={}, width={}, height={})",
            self.inner.x0(),
            self.inner.y0(),
            self.inner.width(),
            self.inner.height()
        )
    }
}

fn region_or_bounds(img: &PyGrayImage, roi: Option<&PyRegion>) -> pupiloc::Region {
    roi.map_or_else(|| img.inner.bounds(), |r| r.inner)
}

fn xy(est: PupilEstimate) -> (f64, f64) {
    (est.x, est.y)
}

#[pyfunction]
fn read_pgm(path: std::path::PathBuf) -> PyResult<PyGrayImage> {
    let inner = pupiloc::read_pgm(path).map_err(to_py)?;
    Ok(PyGrayImage { inner })
}

#[pyfunction]
fn write_pgm(path: std::path::PathBuf, image: &PyGrayImage) -> PyResult<()> {
    pupiloc::write_pgm(path, &image.inner).map_err(to_py)
}

#[pyfunction]
fn decode_pgm(data: &[u8]) -> PyResult<PyGrayImage> {
    let inner = pupiloc::decode_pgm(data).map_err(to_py)?;
    Ok(PyGrayImage { inner })
}

#[pyfunction]
fn encode_pgm<'py>(py: Python<'py>, image: &PyGrayImage) -> Bound<'py, PyBytes> {
    PyBytes::new(py, &pupiloc::encode_pgm(&image.inner))
}

/// CDF locator; returns `(x, y)` in image coordinates.
#[pyfunction]
#[pyo3(signature = (image, roi=None, quantile=0.05))]
fn locate_cdf(image: &PyGrayImage, roi: Option<&PyRegion>, quantile: f64) -> PyResult<(f64, f64)> {
    let params = CdfParams {
        quantile,
        ..CdfParams::default()
    };
    pupiloc::locate_pupil_cdf(&image.inner, &region_or_bounds(image, roi), &params)
        .map(xy)
        .map_err(to_py)
}

/// Projection-function locator; `alpha` blends in the variance projection.
#[pyfunction]
#[pyo3(signature = (image, roi=None, alpha=0.0, threshold_factor=0.5))]
fn locate_pf(
    image: &PyGrayImage,
    roi: Option<&PyRegion>,
    alpha: f64,
    threshold_factor: f64,
) -> PyResult<(f64, f64)> {
    let params = PfParams {
        alpha,
        threshold_factor,
        ..PfParams::default()
    };
    pupiloc::locate_pupil_pf(&image.inner, &region_or_bounds(image, roi), &params)
        .map(xy)
        .map_err(to_py)
}

/// Edge-analysis locator.
#[pyfunction]
#[pyo3(signature = (image, roi=None, sigma=1.0, low_factor=1.5, high_factor=2.0))]
fn locate_ea(
    image: &PyGrayImage,
    roi: Option<&PyRegion>,
    sigma: f64,
    low_factor: f64,
    high_factor: f64,
) -> PyResult<(f64, f64)> {
    let params = EaParams {
        sigma,
        low_factor,
        high_factor,
        ..EaParams::default()
    };
    pupiloc::locate_pupil_ea(&image.inner, &region_or_bounds(image, roi), &params)
        .map(xy)
        .map_err(to_py)
}

/// Runs `algo` ("cdf", "pf"/"gpf" or "ea") with default parameters.
#[pyfunction]
#[pyo3(signature = (image, algo, roi=None))]
fn locate(image: &PyGrayImage, algo: &str, roi: Option<&PyRegion>) -> PyResult<(f64, f64)> {
    let algorithm: Algorithm = algo.parse().map_err(to_py)?;
    algorithm
        .locate(
            &image.inner,
            &region_or_bounds(image, roi),
            &AlgoParams::default(),
        )
        .map(xy)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (image, roi=None))]
fn histogram_cdf(image: &PyGrayImage, roi: Option<&PyRegion>) -> PyResult<Vec<f64>> {
    let cdf = pupiloc::histogram_cdf(&image.inner, &region_or_bounds(image, roi)).map_err(to_py)?;
    Ok(cdf.values().to_vec())
}

#[pyfunction]
#[pyo3(signature = (image, radius, roi=None))]
fn minimum_filter(
    image: &PyGrayImage,
    radius: usize,
    roi: Option<&PyRegion>,
) -> PyResult<PyGrayImage> {
    let inner = pupiloc::minimum_filter(&image.inner, &region_or_bounds(image, roi), radius)
        .map_err(to_py)?;
    Ok(PyGrayImage { inner })
}

/// Renders a synthetic eye; returns `(image, (cx, cy))`.
#[pyfunction]
#[pyo3(signature = (
    roi_size=31, center=None, iris_radius=6.0, pupil_radius=3.0,
    eyelid_coverage=0.0, noise_sigma=0.0, seed=0
))]
fn synth_eye(
    roi_size: usize,
    center: Option<(f64, f64)>,
    iris_radius: f64,
    pupil_radius: f64,
    eyelid_coverage: f64,
    noise_sigma: f64,
    seed: u64,
) -> PyResult<(PyGrayImage, (f64, f64))> {
    let middle = (roi_size / 2) as f64;
    let spec = SynthEyeSpec {
        roi_size,
        center: center.unwrap_or((middle, middle)),
        iris_radius,
        pupil_radius,
        eyelid_coverage,
        noise_sigma,
        seed,
        ..SynthEyeSpec::default()
    };
    let (inner, centre) = pupiloc::synth_eye(&spec).map_err(to_py)?;
    Ok((PyGrayImage { inner }, centre))
}

/// Worse pupil error over the interocular distance. Truth positions are
/// integer pixels; predictions are paired with them by smallest total
/// distance.
#[pyfunction]
fn detection_error(
    truth_left: (usize, usize),
    truth_right: (usize, usize),
    pred_left: (f64, f64),
    pred_right: (f64, f64),
) -> PyResult<f64> {
    let truth = EyeAnnotation::new(
        PixelPos::new(truth_left.0, truth_left.1),
        PixelPos::new(truth_right.0, truth_right.1),
    );
    pupiloc::detection_error(
        &truth,
        &PupilEstimate::new(pred_left.0, pred_left.1),
        &PupilEstimate::new(pred_right.0, pred_right.1),
    )
    .map_err(to_py)
}

/// Fraction of located images (`None` marks a failure) with error strictly
/// below each level.
#[pyfunction]
fn efficiency(errors: Vec<Option<f64>>, dmax: Vec<f64>) -> PyResult<Vec<f64>> {
    let records: Vec<EvalRecord> = errors
        .iter()
        .enumerate()
        .map(|(i, d)| EvalRecord {
            image_id: i.to_string(),
            algorithm: Algorithm::Cdf,
            predicted_left: None,
            predicted_right: None,
            d: *d,
            status: if d.is_some() {
                EvalStatus::Ok
            } else {
                EvalStatus::BothFailed
            },
        })
        .collect();
    let curves = pupiloc::efficiency_table(&records, &dmax).map_err(to_py)?;
    Ok(curves[0].points.iter().map(|&(_, e)| e).collect())
}

#[pymodule]
#[pyo3(name = "pupiloc")]
fn pupiloc_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("PupilocError", m.py().get_type::<PupilocError>())?;
    m.add_class::<PyGrayImage>()?;
    m.add_class::<PyRegion>()?;
    m.add_function(wrap_pyfunction!(read_pgm, m)?)?;
    m.add_function(wrap_pyfunction!(write_pgm, m)?)?;
    m.add_function(wrap_pyfunction!(decode_pgm, m)?)?;
    m.add_function(wrap_pyfunction!(encode_pgm, m)?)?;
    m.add_function(wrap_pyfunction!(locate, m)?)?;
    m.add_function(wrap_pyfunction!(locate_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(locate_pf, m)?)?;
    m.add_function(wrap_pyfunction!(locate_ea, m)?)?;
    m.add_function(wrap_pyfunction!(histogram_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(minimum_filter, m)?)?;
    m.add_function(wrap_pyfunction!(synth_eye, m)?)?;
    m.add_function(wrap_pyfunction!(detection_error, m)?)?;
    m.add_function(wrap_pyfunction!(efficiency, m)?)?;
    Ok(())
}
