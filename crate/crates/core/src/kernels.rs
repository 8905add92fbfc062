//! Pixel kernels shared by the localization algorithms.
//!
//! Every kernel takes a [`Region`] and only reads and writes pixels inside
//! it, so the same code serves whole frames and eye regions. Image-returning
//! kernels copy their input and leave pixels outside the region untouched.

use crate::error::{Error, Result};
use crate::image::{GrayImage, Region};

/// Cumulative intensity distribution of a region: `at(r)` is the fraction of
/// pixels with intensity `<= r`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cdf256 {
    values: [f64; 256],
}

impl Cdf256 {
    pub fn at(&self, intensity: u8) -> f64 {
        self.values[intensity as usize]
    }

    pub fn values(&self) -> &[f64; 256] {
        &self.values
    }
}

pub fn histogram(img: &GrayImage, region: &Region) -> Result<[u32; 256]> {
    region.check_within(img)?;
    let mut counts = [0u32; 256];
    for y in region.y_range() {
        for x in region.x_range() {
            counts[img.get(x, y) as usize] += 1;
        }
    }
    Ok(counts)
}

pub fn histogram_cdf(img: &GrayImage, region: &Region) -> Result<Cdf256> {
    let counts = histogram(img, region)?;
    let total = region.area() as f64;
    let mut values = [0.0; 256];
    let mut running = 0u64;
    for (value, &count) in values.iter_mut().zip(counts.iter()) {
        running += u64::from(count);
        // division of the exact integer count keeps cdf[255] == 1.0
        *value = running as f64 / total;
    }
    Ok(Cdf256 { values })
}

/// Grey-scale erosion with a `(2·radius+1)²` square window.
///
/// Windows shrink at the region border instead of padding, so border pixels
/// only see pixels that actually exist inside the region.
pub fn minimum_filter(img: &GrayImage, region: &Region, radius: usize) -> Result<GrayImage> {
    if radius == 0 {
        return Err(Error::InvalidParams(
            "minimum filter radius must be >= 1".into(),
        ));
    }
    let local = img.crop(region)?;
    let filtered = min_filter_local(&local, radius);
    Ok(paste(img, region, &filtered))
}

/// Separable Gaussian blur with radius `ceil(3·sigma)`, edge replication at
/// the region border, and round-to-nearest output.
pub fn gaussian_blur(img: &GrayImage, region: &Region, sigma: f64) -> Result<GrayImage> {
    let local = img.crop(region)?;
    let blurred = gaussian_blur_local(&local, sigma)?;
    Ok(paste(img, region, &blurred))
}

pub fn mean_intensity(img: &GrayImage, region: &Region) -> Result<f64> {
    region.check_within(img)?;
    let mut sum = 0u64;
    for y in region.y_range() {
        for x in region.x_range() {
            sum += u64::from(img.get(x, y));
        }
    }
    Ok(sum as f64 / region.area() as f64)
}

/// Normalized 1-D Gaussian taps for offsets `-radius..=radius`.
pub fn gaussian_kernel(sigma: f64) -> Result<Vec<f64>> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParams(format!(
            "gaussian sigma must be positive, got {sigma}"
        )));
    }
    let radius = (3.0 * sigma).ceil() as i64;
    let taps: Vec<f64> = (-radius..=radius)
        .map(|k| (-((k * k) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = taps.iter().sum();
    Ok(taps.into_iter().map(|t| t / sum).collect())
}

/// Erosion over the whole image, separable into a row pass and a column
/// pass (a clipped square window is the product of two clipped intervals).
pub(crate) fn min_filter_local(img: &GrayImage, radius: usize) -> GrayImage {
    let (w, h) = (img.width(), img.height());
    let src = img.as_raw();
    let mut rows = vec![0u8; w * h];
    for y in 0..h {
        let line = &src[y * w..(y + 1) * w];
        for x in 0..w {
            let lo = x.saturating_sub(radius);
            let hi = (x + radius).min(w - 1);
            rows[y * w + x] = *line[lo..=hi].iter().min().expect("non-empty window");
        }
    }
    let mut out = vec![0u8; w * h];
    for y in 0..h {
        let lo = y.saturating_sub(radius);
        let hi = (y + radius).min(h - 1);
        for x in 0..w {
            let mut m = u8::MAX;
            for yy in lo..=hi {
                m = m.min(rows[yy * w + x]);
            }
            out[y * w + x] = m;
        }
    }
    GrayImage::new(w, h, out).expect("same dimensions as input")
}

/// Blurred image as floating point values before rounding.
pub(crate) fn gaussian_blur_f64(img: &GrayImage, sigma: f64) -> Result<Vec<f64>> {
    let kernel = gaussian_kernel(sigma)?;
    let radius = (kernel.len() / 2) as i64;
    let (w, h) = (img.width(), img.height());
    let src = img.as_raw();
    let clamp = |v: i64, n: usize| v.clamp(0, n as i64 - 1) as usize;

    let mut horizontal = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (i, tap) in kernel.iter().enumerate() {
                let xx = clamp(x as i64 + i as i64 - radius, w);
                acc += tap * f64::from(src[y * w + xx]);
            }
            horizontal[y * w + x] = acc;
        }
    }
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (i, tap) in kernel.iter().enumerate() {
                let yy = clamp(y as i64 + i as i64 - radius, h);
                acc += tap * horizontal[yy * w + x];
            }
            out[y * w + x] = acc;
        }
    }
    Ok(out)
}

pub(crate) fn gaussian_blur_local(img: &GrayImage, sigma: f64) -> Result<GrayImage> {
    let values = gaussian_blur_f64(img, sigma)?;
    let data = values
        .into_iter()
        .map(|v| v.round().clamp(0.0, 255.0) as u8)
        .collect();
    GrayImage::new(img.width(), img.height(), data)
}

fn paste(img: &GrayImage, region: &Region, patch: &GrayImage) -> GrayImage {
    let mut out = img.clone();
    for (py, y) in region.y_range().enumerate() {
        for (px, x) in region.x_range().enumerate() {
            out.set(x, y, patch.get(px, py));
        }
    }
    out
}
