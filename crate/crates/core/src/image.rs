//! Raster and geometry types shared by every algorithm.
//!
//! Coordinates follow the usual raster convention: the origin is the
//! top-left pixel, `x` grows to the right (columns) and `y` grows downward
//! (rows). Intensity 0 is black and 255 is white.

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// 8-bit single-channel image stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        if data.len() != width * height {
            return Err(Error::InvalidImage(format!(
                "expected {} bytes for {width}x{height}, got {}",
                width * height,
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Image of the given size with every pixel set to `value`.
    ///
    /// # Panics
    /// If either dimension is zero.
    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be positive");
        Self {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    /// # Panics
    /// If either dimension is zero.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be positive");
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: u8) {
        self.data[y * self.width + x] = value;
    }

    pub fn as_raw(&self) -> &[u8] {
        &self.data
    }

    pub fn into_raw(self) -> Vec<u8> {
        self.data
    }

    /// Region covering the whole image.
    pub fn bounds(&self) -> Region {
        Region {
            x0: 0,
            y0: 0,
            width: self.width,
            height: self.height,
        }
    }

    /// Copy of the pixels inside `region` as a standalone image.
    pub fn crop(&self, region: &Region) -> Result<GrayImage> {
        region.check_within(self)?;
        let mut data = Vec::with_capacity(region.area());
        for y in region.y_range() {
            let start = y * self.width + region.x0;
            data.extend_from_slice(&self.data[start..start + region.width]);
        }
        GrayImage::new(region.width, region.height, data)
    }

    /// Left-right mirror image.
    pub fn mirror_horizontal(&self) -> GrayImage {
        GrayImage::from_fn(self.width, self.height, |x, y| {
            self.get(self.width - 1 - x, y)
        })
    }
}

impl fmt::Debug for GrayImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GrayImage")
            .field("width", &self.width)
            .field("height", &self.height)
            .finish_non_exhaustive()
    }
}

/// Axis-aligned integer rectangle inside an image.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Region {
    x0: usize,
    y0: usize,
    width: usize,
    height: usize,
}

impl Region {
    pub fn new(x0: usize, y0: usize, width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyRegion);
        }
        Ok(Self {
            x0,
            y0,
            width,
            height,
        })
    }

    /// Intersects the (possibly out-of-range) rectangle with a
    /// `bounds_width` x `bounds_height` image. Fails if nothing is left.
    pub fn clamped(
        x0: i64,
        y0: i64,
        width: i64,
        height: i64,
        bounds_width: usize,
        bounds_height: usize,
    ) -> Result<Self> {
        let left = x0.max(0);
        let top = y0.max(0);
        let right = x0.saturating_add(width).min(bounds_width as i64);
        let bottom = y0.saturating_add(height).min(bounds_height as i64);
        if right <= left || bottom <= top {
            return Err(Error::EmptyRegion);
        }
        Ok(Self {
            x0: left as usize,
            y0: top as usize,
            width: (right - left) as usize,
            height: (bottom - top) as usize,
        })
    }

    /// Square of side `side` around the pixel `(cx, cy)`, clipped to `self`.
    ///
    /// Even sides have no middle pixel; the square spans
    /// `[c - side/2, c - side/2 + side)`, so a side of 10 covers offsets
    /// -5..=4 and a side of 15 covers -7..=7.
    pub fn window_around(&self, cx: usize, cy: usize, side: usize) -> Result<Region> {
        let half = (side / 2) as i64;
        let clipped = Region::clamped(
            cx as i64 - half - self.x0 as i64,
            cy as i64 - half - self.y0 as i64,
            side as i64,
            side as i64,
            self.width,
            self.height,
        )?;
        Ok(Region {
            x0: clipped.x0 + self.x0,
            y0: clipped.y0 + self.y0,
            ..clipped
        })
    }

    pub fn x0(&self) -> usize {
        self.x0
    }

    pub fn y0(&self) -> usize {
        self.y0
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// One past the last column.
    pub fn x1(&self) -> usize {
        self.x0 + self.width
    }

    /// One past the last row.
    pub fn y1(&self) -> usize {
        self.y0 + self.height
    }

    pub fn area(&self) -> usize {
        self.width * self.height
    }

    pub fn x_range(&self) -> Range<usize> {
        self.x0..self.x1()
    }

    pub fn y_range(&self) -> Range<usize> {
        self.y0..self.y1()
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.x_range().contains(&x) && self.y_range().contains(&y)
    }

    /// True when the sub-pixel point lies within the closed pixel-centre
    /// hull of the region.
    pub fn contains_point(&self, x: f64, y: f64) -> bool {
        x >= self.x0 as f64
            && x <= (self.x1() - 1) as f64
            && y >= self.y0 as f64
            && y <= (self.y1() - 1) as f64
    }

    pub fn check_within(&self, img: &GrayImage) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::EmptyRegion);
        }
        if self.x1() > img.width() || self.y1() > img.height() {
            return Err(Error::RegionOutOfBounds {
                region: self.to_string(),
                width: img.width(),
                height: img.height(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.x0, self.y0, self.width, self.height)
    }
}

/// Sub-pixel pupil location in the coordinates of the parent image.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PupilEstimate {
    pub x: f64,
    pub y: f64,
}

impl PupilEstimate {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance_to(&self, x: f64, y: f64) -> f64 {
        (self.x - x).hypot(self.y - y)
    }
}
