//! Pupil localization by edge analysis.
//!
//! A Canny edge map of the eye region votes for columns and rows; the two
//! best-supported, sufficiently separated columns are taken as the left and
//! right iris boundaries (likewise rows for the eyelid/iris borders) and
//! the pupil is the midpoint between them.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::{GrayImage, PupilEstimate, Region};
use crate::kernels::gaussian_blur_f64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EaParams {
    pub sigma: f64,
    /// Weak-edge threshold as a multiple of the mean blurred intensity.
    pub low_factor: f64,
    /// Strong-edge threshold as a multiple of the mean blurred intensity.
    pub high_factor: f64,
    pub min_separation_base: usize,
    pub min_separation_fraction: f64,
}

impl Default for EaParams {
    fn default() -> Self {
        Self {
            sigma: 1.0,
            low_factor: 1.5,
            high_factor: 2.0,
            min_separation_base: 7,
            min_separation_fraction: 0.23,
        }
    }
}

impl EaParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "sigma must be positive, got {}",
                self.sigma
            )));
        }
        if !(self.low_factor > 0.0 && self.low_factor < self.high_factor) {
            return Err(Error::InvalidParams(format!(
                "need 0 < low factor < high factor, got {} and {}",
                self.low_factor, self.high_factor
            )));
        }
        if self.min_separation_base == 0 {
            return Err(Error::InvalidParams(
                "minimum separation must be >= 1".into(),
            ));
        }
        if !(self.min_separation_fraction > 0.0 && self.min_separation_fraction < 1.0) {
            return Err(Error::InvalidParams(format!(
                "minimum separation fraction must be in (0, 1), got {}",
                self.min_separation_fraction
            )));
        }
        Ok(())
    }

    /// Line separation for an axis of `len` pixels: the base value, grown
    /// proportionally for regions larger than ~30 px.
    pub fn min_separation(&self, len: usize) -> usize {
        let scaled = (self.min_separation_fraction * len as f64).round() as usize;
        self.min_separation_base.max(scaled)
    }
}

/// Binary edge mask with the dimensions of the region it was computed on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeMap {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl EdgeMap {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, edge: bool) {
        self.bits[y * self.width + x] = edge;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Edges as white (255) on black, e.g. for dumping as PGM.
    pub fn to_image(&self) -> GrayImage {
        GrayImage::from_fn(self.width, self.height, |x, y| {
            if self.get(x, y) {
                255
            } else {
                0
            }
        })
    }
}

/// Canny edge detection inside `roi`.
///
/// Hysteresis thresholds are `low_factor·M` and `high_factor·M` where `M`
/// is the mean intensity of the blurred region. Sobel responses are only
/// computed for pixels with a full 3x3 neighbourhood, so the outermost ring
/// of the region never carries an edge.
pub fn canny(img: &GrayImage, roi: &Region, params: &EaParams) -> Result<EdgeMap> {
    params.validate()?;
    roi.check_within(img)?;
    if roi.width() < 5 || roi.height() < 5 {
        return Err(Error::RegionTooSmall(format!(
            "edge detection needs at least 5x5 pixels, got {}x{}",
            roi.width(),
            roi.height()
        )));
    }
    let local = img.crop(roi)?;
    let (w, h) = (local.width(), local.height());
    let blurred = gaussian_blur_f64(&local, params.sigma)?;
    let mean = blurred.iter().sum::<f64>() / blurred.len() as f64;

    let mut magnitude = vec![0.0; w * h];
    let mut direction = vec![0u8; w * h];
    let at = |x: usize, y: usize| blurred[y * w + x];
    for y in 1..h - 1 {
        for x in 1..w - 1 {
            let gx = (at(x + 1, y - 1) + 2.0 * at(x + 1, y) + at(x + 1, y + 1))
                - (at(x - 1, y - 1) + 2.0 * at(x - 1, y) + at(x - 1, y + 1));
            let gy = (at(x - 1, y + 1) + 2.0 * at(x, y + 1) + at(x + 1, y + 1))
                - (at(x - 1, y - 1) + 2.0 * at(x, y - 1) + at(x + 1, y - 1));
            magnitude[y * w + x] = gx.hypot(gy);
            direction[y * w + x] = quantize_direction(gx, gy);
        }
    }

    // non-maximum suppression; on a flat-topped ridge the strict/non-strict
    // pair keeps exactly one pixel
    let mut thin = vec![0.0; w * h];
    for y in 1..h - 1 {
        for x in 1..w - 1 {
            let m = magnitude[y * w + x];
            if m <= 0.0 {
                continue;
            }
            let (dx, dy): (isize, isize) = match direction[y * w + x] {
                0 => (1, 0),
                1 => (1, 1),
                2 => (0, 1),
                _ => (-1, 1),
            };
            let before = magnitude[(y as isize - dy) as usize * w + (x as isize - dx) as usize];
            let after = magnitude[(y as isize + dy) as usize * w + (x as isize + dx) as usize];
            if m > before && m >= after {
                thin[y * w + x] = m;
            }
        }
    }

    let high = params.high_factor * mean;
    let low = params.low_factor * mean;
    let mut edges = EdgeMap::new(w, h);
    let mut queue = VecDeque::new();
    for (i, &m) in thin.iter().enumerate() {
        if m > 0.0 && m >= high {
            edges.bits[i] = true;
            queue.push_back(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        let (x, y) = ((i % w) as isize, (i / w) as isize);
        for dy in -1..=1 {
            for dx in -1..=1 {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                    continue;
                }
                let j = ny as usize * w + nx as usize;
                if !edges.bits[j] && thin[j] > 0.0 && thin[j] >= low {
                    edges.bits[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    Ok(edges)
}

/// Gradient direction folded to [0°, 180°) and quantized to 0°, 45°, 90°
/// or 135° (returned as 0..=3). With `y` pointing down, 45° runs towards
/// the bottom-right neighbour.
fn quantize_direction(gx: f64, gy: f64) -> u8 {
    let mut angle = gy.atan2(gx).to_degrees();
    if angle < 0.0 {
        angle += 180.0;
    }
    if !(22.5..157.5).contains(&angle) {
        0
    } else if angle < 67.5 {
        1
    } else if angle < 112.5 {
        2
    } else {
        3
    }
}

/// Edge-pixel counts per column and per row.
pub fn line_votes(edges: &EdgeMap) -> (Vec<usize>, Vec<usize>) {
    let mut columns = vec![0; edges.width];
    let mut rows = vec![0; edges.height];
    for (y, row_count) in rows.iter_mut().enumerate() {
        for (x, column_count) in columns.iter_mut().enumerate() {
            if edges.get(x, y) {
                *column_count += 1;
                *row_count += 1;
            }
        }
    }
    (columns, rows)
}

/// The best-supported line and the best line at least `min_separation`
/// away from it, returned in ascending order. Ties go to the smaller index.
pub fn select_boundary_lines(counts: &[usize], min_separation: usize) -> Result<(usize, usize)> {
    if counts.len() <= min_separation {
        return Err(Error::RegionTooSmall(format!(
            "{} lines cannot hold two lines {min_separation} apart",
            counts.len()
        )));
    }
    let first = argmax(counts.iter().copied().enumerate()).ok_or(Error::NoVotes)?;
    if counts[first] == 0 {
        return Err(Error::NoVotes);
    }
    let second = argmax(
        counts
            .iter()
            .copied()
            .enumerate()
            .filter(|&(i, _)| i.abs_diff(first) >= min_separation),
    )
    .filter(|&i| counts[i] > 0)
    .ok_or(Error::NoSecondLine)?;
    Ok((first.min(second), first.max(second)))
}

fn argmax(items: impl Iterator<Item = (usize, usize)>) -> Option<usize> {
    let mut best: Option<(usize, usize)> = None;
    for (i, c) in items {
        if best.is_none_or(|(_, b)| c > b) {
            best = Some((i, c));
        }
    }
    best.map(|(i, _)| i)
}

pub fn locate_pupil_ea(img: &GrayImage, roi: &Region, params: &EaParams) -> Result<PupilEstimate> {
    if roi.width() < 10 || roi.height() < 10 {
        return Err(Error::RegionTooSmall(format!(
            "edge analysis needs at least 10x10 pixels, got {}x{}",
            roi.width(),
            roi.height()
        )));
    }
    let edges = canny(img, roi, params)?;
    let (columns, rows) = line_votes(&edges);
    let (left, right) = select_boundary_lines(&columns, params.min_separation(columns.len()))?;
    let (top, bottom) = select_boundary_lines(&rows, params.min_separation(rows.len()))?;
    Ok(PupilEstimate::new(
        roi.x0() as f64 + (left + right) as f64 / 2.0,
        roi.y0() as f64 + (top + bottom) as f64 / 2.0,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_region_has_no_edges() {
        let img = GrayImage::filled(20, 20, 140);
        let edges = canny(&img, &img.bounds(), &EaParams::default()).unwrap();
        assert_eq!(edges.count(), 0);
        assert!(matches!(
            locate_pupil_ea(&img, &img.bounds(), &EaParams::default()),
            Err(Error::NoVotes)
        ));
    }

    #[test]
    fn tiny_regions_are_rejected() {
        let img = GrayImage::filled(20, 20, 140);
        let r = Region::new(0, 0, 4, 10).unwrap();
        assert!(matches!(
            canny(&img, &r, &EaParams::default()),
            Err(Error::RegionTooSmall(_))
        ));
        let r = Region::new(0, 0, 9, 12).unwrap();
        assert!(matches!(
            locate_pupil_ea(&img, &r, &EaParams::default()),
            Err(Error::RegionTooSmall(_))
        ));
    }

    #[test]
    fn votes_of_a_vertical_line() {
        let mut edges = EdgeMap::new(20, 20);
        for y in 0..20 {
            edges.set(7, y, true);
        }
        let (cols, rows) = line_votes(&edges);
        assert_eq!(cols[7], 20);
        assert_eq!(cols.iter().sum::<usize>(), 20);
        assert!(rows.iter().all(|&r| r == 1));
        let (cols, rows) = line_votes(&EdgeMap::new(4, 3));
        assert_eq!((cols, rows), (vec![0; 4], vec![0; 3]));
    }

    #[test]
    fn boundary_line_selection() {
        let counts = [0, 0, 9, 0, 0, 0, 0, 0, 0, 7, 0, 0];
        assert_eq!(select_boundary_lines(&counts, 7).unwrap(), (2, 9));
        assert!(matches!(
            select_boundary_lines(&[0; 12], 7),
            Err(Error::NoVotes)
        ));
        let mut tied = [0; 14];
        tied[3] = 5;
        tied[11] = 5;
        assert_eq!(select_boundary_lines(&tied, 7).unwrap(), (3, 11));
        let mut lonely = [0; 12];
        lonely[5] = 4;
        lonely[6] = 3;
        assert!(matches!(
            select_boundary_lines(&lonely, 7),
            Err(Error::NoSecondLine)
        ));
    }

    #[test]
    fn separation_scales_with_length() {
        let p = EaParams::default();
        assert_eq!(p.min_separation(30), 7);
        assert_eq!(p.min_separation(20), 7);
        assert_eq!(p.min_separation(40), 9);
    }

    #[test]
    fn direction_quantization() {
        assert_eq!(quantize_direction(1.0, 0.0), 0);
        assert_eq!(quantize_direction(-1.0, 0.0), 0);
        assert_eq!(quantize_direction(1.0, 1.0), 1);
        assert_eq!(quantize_direction(0.0, -1.0), 2);
        assert_eq!(quantize_direction(-1.0, 1.0), 3);
    }

    #[test]
    fn params_are_validated() {
        let p = EaParams {
            low_factor: 2.0,
            high_factor: 1.5,
            ..EaParams::default()
        };
        assert!(p.validate().is_err());
        assert!(EaParams {
            sigma: 0.0,
            ..EaParams::default()
        }
        .validate()
        .is_err());
    }
}
