//! Pupil localization with projection functions.
//!
//! Column and row intensity profiles of the eye region (integral and
//! variance projections, blended by `alpha`) dip where the iris is. The
//! flanks of that dip are found by thresholding the profile derivative and
//! the pupil centre is the midpoint between the flanks on each axis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::{GrayImage, PupilEstimate, Region};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    /// One value per column, projecting along y.
    Vertical,
    /// One value per row, projecting along x.
    Horizontal,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionCurve {
    pub axis: Axis,
    pub values: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PfParams {
    /// Weight of the variance projection in the blend; 0 is pure IPF.
    pub alpha: f64,
    /// Derivative threshold as a fraction of the largest |derivative|.
    pub threshold_factor: f64,
    /// Width of the box smoother applied before differencing (odd).
    pub smooth_width: usize,
}

impl Default for PfParams {
    fn default() -> Self {
        Self {
            alpha: 0.0,
            threshold_factor: 0.5,
            smooth_width: 3,
        }
    }
}

impl PfParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::InvalidParams(format!(
                "alpha must be in [0, 1], got {}",
                self.alpha
            )));
        }
        if !(self.threshold_factor > 0.0 && self.threshold_factor < 1.0) {
            return Err(Error::InvalidParams(format!(
                "threshold factor must be in (0, 1), got {}",
                self.threshold_factor
            )));
        }
        if self.smooth_width == 0 || self.smooth_width.is_multiple_of(2) {
            return Err(Error::InvalidParams(format!(
                "smooth width must be odd and >= 1, got {}",
                self.smooth_width
            )));
        }
        Ok(())
    }
}

/// Raw integral (mean) and variance projections along `axis`.
pub fn raw_projections(img: &GrayImage, roi: &Region, axis: Axis) -> Result<(Vec<f64>, Vec<f64>)> {
    roi.check_within(img)?;
    let (outer, inner) = match axis {
        Axis::Vertical => (roi.x_range(), roi.y_range()),
        Axis::Horizontal => (roi.y_range(), roi.x_range()),
    };
    let n = inner.len() as f64;
    let pixel = |o: usize, i: usize| match axis {
        Axis::Vertical => f64::from(img.get(o, i)),
        Axis::Horizontal => f64::from(img.get(i, o)),
    };
    let mut ipf = Vec::with_capacity(outer.len());
    let mut vpf = Vec::with_capacity(outer.len());
    for o in outer {
        let mean = inner.clone().map(|i| pixel(o, i)).sum::<f64>() / n;
        let var = inner
            .clone()
            .map(|i| {
                let d = pixel(o, i) - mean;
                d * d
            })
            .sum::<f64>()
            / n;
        ipf.push(mean);
        vpf.push(var);
    }
    Ok((ipf, vpf))
}

/// Min-max normalization to [0, 1]; a constant curve maps to all zeros.
pub fn normalize(values: &[f64]) -> Vec<f64> {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = max - min;
    if span > 0.0 {
        values.iter().map(|v| (v - min) / span).collect()
    } else {
        vec![0.0; values.len()]
    }
}

/// General projection function `(1 - alpha)·IPF + alpha·VPF`, with both
/// terms min-max normalized first.
pub fn projection(
    img: &GrayImage,
    roi: &Region,
    axis: Axis,
    alpha: f64,
) -> Result<ProjectionCurve> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParams(format!(
            "alpha must be in [0, 1], got {alpha}"
        )));
    }
    let (ipf, vpf) = raw_projections(img, roi, axis)?;
    let ipf = normalize(&ipf);
    let values = if alpha == 0.0 {
        ipf
    } else {
        let vpf = normalize(&vpf);
        ipf.iter()
            .zip(vpf.iter())
            .map(|(i, v)| (1.0 - alpha) * i + alpha * v)
            .collect()
    };
    Ok(ProjectionCurve { axis, values })
}

/// Centred box filter; the window shrinks at the ends.
pub fn smooth(values: &[f64], width: usize) -> Vec<f64> {
    let half = width / 2;
    let n = values.len();
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half).min(n - 1);
            values[lo..=hi].iter().sum::<f64>() / (hi - lo + 1) as f64
        })
        .collect()
}

/// Central differences, one-sided at both ends.
pub fn derivative(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n)
            .map(|i| {
                if i == 0 {
                    values[1] - values[0]
                } else if i == n - 1 {
                    values[n - 1] - values[n - 2]
                } else {
                    (values[i + 1] - values[i - 1]) / 2.0
                }
            })
            .collect(),
    }
}

/// Positions where the projection changes rapidly.
///
/// Indices with `|d| > k·max|d|` are grouped into runs of consecutive
/// indices sharing the derivative's sign (a falling and a rising flank that
/// touch are two boundaries, not one). Each run contributes its centroid.
pub fn boundary_points(curve: &ProjectionCurve, params: &PfParams) -> Result<Vec<f64>> {
    params.validate()?;
    if curve.values.len() < 5 {
        return Err(Error::RegionTooSmall(format!(
            "projection curve needs at least 5 samples, got {}",
            curve.values.len()
        )));
    }
    let smoothed = smooth(&curve.values, params.smooth_width);
    let deriv = derivative(&smoothed);
    let peak = deriv.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    if peak <= 0.0 {
        return Err(Error::NoBoundaries);
    }
    let threshold = params.threshold_factor * peak;

    let mut centers = Vec::new();
    let mut run: Option<(usize, usize, bool)> = None;
    fn close((start, end, _): (usize, usize, bool), out: &mut Vec<f64>) {
        out.push((start + end) as f64 / 2.0);
    }
    for (i, d) in deriv.iter().enumerate() {
        let marked = d.abs() > threshold;
        let rising = *d > 0.0;
        run = match (run, marked) {
            (Some((s, e, r)), true) if e + 1 == i && r == rising => Some((s, i, r)),
            (Some(prev), true) => {
                close(prev, &mut centers);
                Some((i, i, rising))
            }
            (None, true) => Some((i, i, rising)),
            (Some(prev), false) => {
                close(prev, &mut centers);
                None
            }
            (None, false) => None,
        };
    }
    if let Some(prev) = run {
        close(prev, &mut centers);
    }
    Ok(centers)
}

/// Index of the smallest value; ties go to the first.
fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = i;
        }
    }
    best
}

/// Midpoint of the two boundaries flanking the deepest point of the curve.
pub fn flanking_midpoint(curve: &ProjectionCurve, params: &PfParams) -> Result<f64> {
    let boundaries = boundary_points(curve, params)?;
    let valley = argmin(&smooth(&curve.values, params.smooth_width)) as f64;
    let left = boundaries.iter().copied().rfind(|&b| b < valley);
    let right = boundaries.iter().copied().find(|&b| b > valley);
    match (left, right) {
        (Some(l), Some(r)) => Ok((l + r) / 2.0),
        _ => Err(Error::NoFlankingPair),
    }
}

pub fn locate_pupil_pf(img: &GrayImage, roi: &Region, params: &PfParams) -> Result<PupilEstimate> {
    params.validate()?;
    let vertical = projection(img, roi, Axis::Vertical, params.alpha)?;
    let horizontal = projection(img, roi, Axis::Horizontal, params.alpha)?;
    let x = flanking_midpoint(&vertical, params)?;
    let y = flanking_midpoint(&horizontal, params)?;
    Ok(PupilEstimate::new(roi.x0() as f64 + x, roi.y0() as f64 + y))
}
