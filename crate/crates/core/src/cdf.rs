//! Pupil localization by cumulative-distribution thresholding.
//!
//! The darkest few percent of the eye region are kept, cleaned up with a
//! minimum filter, and the darkest surviving pixel (the PMI) seeds a local
//! search: the pupil centre is the centroid of pixels darker than the
//! average intensity around the PMI.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::{GrayImage, PupilEstimate, Region};
use crate::kernels::{histogram_cdf, mean_intensity, min_filter_local};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CdfParams {
    /// Pixels whose intensity has a CDF value below this are kept.
    pub quantile: f64,
    /// Radius of the minimum filter, used both on the binary mask and in
    /// the refinement window.
    pub min_filter_radius: usize,
    /// Side of the square used to measure the average intensity (AI).
    pub ai_window: usize,
    /// Side of the square searched for pixels darker than AI.
    pub refine_window: usize,
}

impl Default for CdfParams {
    fn default() -> Self {
        Self {
            quantile: 0.05,
            min_filter_radius: 2,
            ai_window: 10,
            refine_window: 15,
        }
    }
}

impl CdfParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.quantile > 0.0 && self.quantile < 1.0) {
            return Err(Error::InvalidParams(format!(
                "quantile must be in (0, 1), got {}",
                self.quantile
            )));
        }
        if self.min_filter_radius == 0 || self.ai_window == 0 || self.refine_window == 0 {
            return Err(Error::InvalidParams(
                "filter radius and windows must be >= 1".into(),
            ));
        }
        if self.ai_window > self.refine_window {
            return Err(Error::InvalidParams(format!(
                "AI window ({}) must not exceed refine window ({})",
                self.ai_window, self.refine_window
            )));
        }
        Ok(())
    }
}

/// Marks pixels of `roi` whose intensity has `CDF < quantile` with 255.
///
/// The CDF is computed over `roi` only. The returned mask has the size of
/// `img`; pixels outside `roi` are 0.
pub fn cdf_binarize(img: &GrayImage, roi: &Region, quantile: f64) -> Result<GrayImage> {
    let cdf = histogram_cdf(img, roi)?;
    let mut mask = GrayImage::filled(img.width(), img.height(), 0);
    for y in roi.y_range() {
        for x in roi.x_range() {
            if cdf.at(img.get(x, y)) < quantile {
                mask.set(x, y, 255);
            }
        }
    }
    Ok(mask)
}

/// Darkest pixel of `img` among the white pixels of `mask` inside `roi`.
/// Ties go to the first pixel in row-major order.
pub fn find_pmi(img: &GrayImage, mask: &GrayImage, roi: &Region) -> Result<(usize, usize)> {
    roi.check_within(img)?;
    roi.check_within(mask)?;
    let mut best: Option<(u8, usize, usize)> = None;
    for y in roi.y_range() {
        for x in roi.x_range() {
            if mask.get(x, y) != 255 {
                continue;
            }
            let v = img.get(x, y);
            if best.is_none_or(|(b, _, _)| v < b) {
                best = Some((v, x, y));
            }
        }
    }
    best.map(|(_, x, y)| (x, y)).ok_or(Error::NoCandidatePixels)
}

pub fn locate_pupil_cdf(
    img: &GrayImage,
    roi: &Region,
    params: &CdfParams,
) -> Result<PupilEstimate> {
    params.validate()?;
    roi.check_within(img)?;

    let mask = cdf_binarize(img, roi, params.quantile)?;
    let mask = min_filter_local(&mask.crop(roi)?, params.min_filter_radius);
    let local_roi = mask.bounds();
    let local = img.crop(roi)?;
    let (px, py) = find_pmi(&local, &mask, &local_roi)?;

    let ai_window = local_roi.window_around(px, py, params.ai_window)?;
    let ai = mean_intensity(&local, &ai_window)?;

    let refine = local_roi.window_around(px, py, params.refine_window)?;
    let filtered = min_filter_local(&local.crop(&refine)?, params.min_filter_radius);

    let (mut sx, mut sy, mut n) = (0.0, 0.0, 0usize);
    for y in 0..filtered.height() {
        for x in 0..filtered.width() {
            if f64::from(filtered.get(x, y)) < ai {
                sx += x as f64;
                sy += y as f64;
                n += 1;
            }
        }
    }
    if n == 0 {
        return Err(Error::NoDarkPixels);
    }
    let n = n as f64;
    Ok(PupilEstimate::new(
        (roi.x0() + refine.x0()) as f64 + sx / n,
        (roi.y0() + refine.y0()) as f64 + sy / n,
    ))
}
