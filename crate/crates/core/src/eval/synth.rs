//! Synthetic eyes with known centres.
//!
//! An eye is a bright background with an anti-aliased iris disk and a
//! darker concentric pupil. An optional eyelid band hides the top part of
//! the iris. Seeded Gaussian noise is added last.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::GrayImage;

use super::dataset::{EyeAnnotation, PixelPos};
use super::rng_for;

/// Sub-samples per pixel axis used for anti-aliasing.
const SUPERSAMPLE: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthEyeSpec {
    pub roi_size: usize,
    /// True pupil centre in pixel coordinates (pixel centres are integers).
    pub center: (f64, f64),
    pub iris_radius: f64,
    pub pupil_radius: f64,
    pub background: u8,
    pub iris_intensity: u8,
    pub pupil_intensity: u8,
    /// Fraction of the iris diameter hidden by the upper eyelid.
    pub eyelid_coverage: f64,
    pub noise_sigma: f64,
    pub seed: u64,
}

impl Default for SynthEyeSpec {
    fn default() -> Self {
        Self {
            roi_size: 31,
            center: (15.0, 15.0),
            iris_radius: 6.0,
            pupil_radius: 3.0,
            background: 200,
            iris_intensity: 60,
            pupil_intensity: 20,
            eyelid_coverage: 0.0,
            noise_sigma: 0.0,
            seed: 0,
        }
    }
}

impl SynthEyeSpec {
    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidSpec(msg));
        if !(self.pupil_radius > 0.0 && self.pupil_radius < self.iris_radius) {
            return invalid(format!(
                "need 0 < pupil radius ({}) < iris radius ({})",
                self.pupil_radius, self.iris_radius
            ));
        }
        if self.iris_radius >= self.roi_size as f64 / 2.0 {
            return invalid(format!(
                "iris radius {} must be below half the ROI size {}",
                self.iris_radius, self.roi_size
            ));
        }
        if !(self.pupil_intensity < self.iris_intensity && self.iris_intensity < self.background) {
            return invalid("need pupil < iris < background intensity".into());
        }
        if !(0.0..=0.4).contains(&self.eyelid_coverage) {
            return invalid(format!(
                "eyelid coverage must be in [0, 0.4], got {}",
                self.eyelid_coverage
            ));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return invalid(format!(
                "noise sigma must be >= 0, got {}",
                self.noise_sigma
            ));
        }
        let (cx, cy) = self.center;
        let limit = self.roi_size as f64 - 1.0;
        if !(0.0..=limit).contains(&cx) || !(0.0..=limit).contains(&cy) {
            return invalid(format!("centre ({cx}, {cy}) outside the ROI"));
        }
        Ok(())
    }

    fn shape(&self) -> EyeShape {
        EyeShape {
            center: self.center,
            iris_radius: self.iris_radius,
            pupil_radius: self.pupil_radius,
            background: f64::from(self.background),
            iris: f64::from(self.iris_intensity),
            pupil: f64::from(self.pupil_intensity),
            eyelid_coverage: self.eyelid_coverage,
        }
    }
}

/// Renders a single square eye region. Returns the image and the exact
/// pupil centre used.
pub fn synth_eye(spec: &SynthEyeSpec) -> Result<(GrayImage, (f64, f64))> {
    spec.validate()?;
    let n = spec.roi_size;
    let mut canvas = vec![f64::from(spec.background); n * n];
    spec.shape().render(&mut canvas, n, n);
    let img = finish(canvas, n, n, spec.noise_sigma, spec.seed)?;
    Ok((img, spec.center))
}

/// A face-sized frame with two synthetic eyes, for building BioID-style
/// datasets.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthFaceSpec {
    pub width: usize,
    pub height: usize,
    pub interocular: f64,
    pub iris_radius: f64,
    pub pupil_radius: f64,
    pub skin: u8,
    pub iris_intensity: u8,
    pub pupil_intensity: u8,
    pub eyelid_coverage: f64,
    pub noise_sigma: f64,
    pub seed: u64,
}

impl Default for SynthFaceSpec {
    fn default() -> Self {
        Self {
            width: 384,
            height: 286,
            interocular: 100.0,
            iris_radius: 7.0,
            pupil_radius: 3.2,
            skin: 200,
            iris_intensity: 60,
            pupil_intensity: 20,
            eyelid_coverage: 0.1,
            noise_sigma: 4.0,
            seed: 0,
        }
    }
}

/// Renders a frame with two eyes at integer positions and returns it with
/// the matching annotation. The subject's left eye is on the viewer's
/// right, as in BioID.
pub fn synth_face(spec: &SynthFaceSpec) -> Result<(GrayImage, EyeAnnotation)> {
    if spec.interocular.is_nan() || spec.interocular < 20.0 {
        return Err(Error::InvalidSpec(format!(
            "interocular distance must be >= 20, got {}",
            spec.interocular
        )));
    }
    let margin = spec.interocular / 2.0 + 4.0 * spec.iris_radius;
    if (spec.width as f64) < 2.0 * margin || (spec.height as f64) < 2.0 * (4.0 * spec.iris_radius) {
        return Err(Error::InvalidSpec(format!(
            "{}x{} frame cannot hold eyes {} px apart",
            spec.width, spec.height, spec.interocular
        )));
    }
    let eye = SynthEyeSpec {
        roi_size: (4.0 * spec.iris_radius).ceil() as usize + 2,
        center: (spec.iris_radius, spec.iris_radius),
        iris_radius: spec.iris_radius,
        pupil_radius: spec.pupil_radius,
        background: spec.skin,
        iris_intensity: spec.iris_intensity,
        pupil_intensity: spec.pupil_intensity,
        eyelid_coverage: spec.eyelid_coverage,
        noise_sigma: spec.noise_sigma,
        seed: spec.seed,
    };
    eye.validate()?;

    let mut rng = rng_for(spec.seed, 0);
    let half = (spec.interocular / 2.0).round() as i64;
    let x_slack = ((spec.width as f64 / 2.0 - margin).max(0.0) / 3.0) as i64;
    let y_lo = (4.0 * spec.iris_radius) as i64;
    let y_hi = (spec.height as i64 - 1 - y_lo).max(y_lo);
    let mid_x = spec.width as i64 / 2 + rng.random_range(-x_slack..=x_slack);
    let mid_y = rng.random_range(y_lo..=y_hi.min(y_lo + spec.height as i64 / 3));
    let tilt = rng.random_range(-2..=2);
    let left = PixelPos::new((mid_x + half) as usize, (mid_y + tilt) as usize);
    let right = PixelPos::new((mid_x - half) as usize, (mid_y - tilt) as usize);

    let mut canvas = vec![f64::from(spec.skin); spec.width * spec.height];
    for p in [left, right] {
        EyeShape {
            center: (p.x as f64, p.y as f64),
            ..eye.shape()
        }
        .render(&mut canvas, spec.width, spec.height);
    }
    let img = finish(canvas, spec.width, spec.height, spec.noise_sigma, spec.seed)?;
    Ok((img, EyeAnnotation::new(left, right)))
}

struct EyeShape {
    center: (f64, f64),
    iris_radius: f64,
    pupil_radius: f64,
    background: f64,
    iris: f64,
    pupil: f64,
    eyelid_coverage: f64,
}

impl EyeShape {
    fn render(&self, canvas: &mut [f64], width: usize, height: usize) {
        let (cx, cy) = self.center;
        let r = self.iris_radius;
        let eyelid_edge = cy - r + self.eyelid_coverage * 2.0 * r;
        let x_lo = (cx - r - 1.0).floor().max(0.0) as usize;
        let y_lo = (cy - r - 1.0).floor().max(0.0) as usize;
        let x_hi = ((cx + r + 1.0).ceil() as usize).min(width - 1);
        let y_hi = ((cy + r + 1.0).ceil() as usize).min(height - 1);
        let step = 1.0 / SUPERSAMPLE as f64;
        let samples = (SUPERSAMPLE * SUPERSAMPLE) as f64;
        for y in y_lo..=y_hi {
            for x in x_lo..=x_hi {
                let mut acc = 0.0;
                for sy in 0..SUPERSAMPLE {
                    let py = y as f64 - 0.5 + (sy as f64 + 0.5) * step;
                    for sx in 0..SUPERSAMPLE {
                        let px = x as f64 - 0.5 + (sx as f64 + 0.5) * step;
                        let dist2 = (px - cx).powi(2) + (py - cy).powi(2);
                        acc += if dist2 > r * r || py < eyelid_edge {
                            self.background
                        } else if dist2 <= self.pupil_radius * self.pupil_radius {
                            self.pupil
                        } else {
                            self.iris
                        };
                    }
                }
                canvas[y * width + x] = acc / samples;
            }
        }
    }
}

fn finish(
    canvas: Vec<f64>,
    width: usize,
    height: usize,
    sigma: f64,
    seed: u64,
) -> Result<GrayImage> {
    let mut values = canvas;
    if sigma > 0.0 {
        let normal = Normal::new(0.0, sigma).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        let mut rng = rng_for(seed, 1);
        for v in values.iter_mut() {
            *v += normal.sample(&mut rng);
        }
    }
    let data = values
        .into_iter()
        .map(|v| v.round().clamp(0.0, 255.0) as u8)
        .collect();
    GrayImage::new(width, height, data)
}
