//! Eye regions derived from ground truth, standing in for a face/eye
//! detector. Each region is shifted by a seeded random offset so that
//! simply returning the region centre does not score well.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::Region;

use super::dataset::{EyeAnnotation, PixelPos};
use super::rng_for;

/// Smallest acceptable side of a derived eye region.
const MIN_ROI_SIDE: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoiPolicy {
    /// Region side as a fraction of the interocular distance.
    pub scale: f64,
    /// Maximum centre offset per axis as a fraction of the side.
    pub jitter: f64,
}

impl Default for RoiPolicy {
    fn default() -> Self {
        Self {
            scale: 0.4,
            jitter: 0.1,
        }
    }
}

impl RoiPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "ROI scale must be positive, got {}",
                self.scale
            )));
        }
        if !(0.0..0.5).contains(&self.jitter) {
            return Err(Error::InvalidParams(format!(
                "ROI jitter must be in [0, 0.5), got {}",
                self.jitter
            )));
        }
        Ok(())
    }
}

/// Left and right eye regions: squares of side `round(scale·D)` around the
/// annotated pupils, offset uniformly within `±jitter·side` per axis and
/// clipped to the image.
pub fn derive_roi(
    annotation: &EyeAnnotation,
    image_width: usize,
    image_height: usize,
    policy: &RoiPolicy,
    seed: u64,
) -> Result<(Region, Region)> {
    policy.validate()?;
    let interocular = annotation.interocular_distance();
    if interocular <= 0.0 {
        return Err(Error::DegenerateTruth);
    }
    let side = (policy.scale * interocular).round() as usize;
    let max_offset = policy.jitter * side as f64;
    let mut rng = rng_for(seed, 0);
    let mut offset = || {
        if max_offset > 0.0 {
            rng.random_range(-max_offset..=max_offset)
        } else {
            0.0
        }
    };
    let left_offset = (offset(), offset());
    let right_offset = (offset(), offset());

    let square = |centre: PixelPos, (dx, dy): (f64, f64)| -> Result<Region> {
        let corner = |c: usize, d: f64| (c as f64 + d - side as f64 / 2.0 + 0.5).floor() as i64;
        let region = Region::clamped(
            corner(centre.x, dx),
            corner(centre.y, dy),
            side as i64,
            side as i64,
            image_width,
            image_height,
        )
        .map_err(|_| {
            Error::RoiOutOfBounds(format!(
                "eye at ({}, {}) is outside the image",
                centre.x, centre.y
            ))
        })?;
        if region.width().min(region.height()) < MIN_ROI_SIDE {
            return Err(Error::RoiOutOfBounds(format!(
                "eye region {region} is smaller than {MIN_ROI_SIDE} px after clipping"
            )));
        }
        Ok(region)
    };
    Ok((
        square(annotation.left, left_offset)?,
        square(annotation.right, right_offset)?,
    ))
}
