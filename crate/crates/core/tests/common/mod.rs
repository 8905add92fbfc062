//! Brute-force reference implementations and input generators shared by
//! the property suites and the acceptance run.
#![allow(dead_code)]

use pupiloc::{
    Algorithm, EdgeMap, EvalRecord, EvalStatus, GrayImage, PupilEstimate, Region, SynthEyeSpec,
};
use rand::Rng;

/// `cdf[r]` by counting, for every level, the pixels at or below it.
pub fn brute_cdf(img: &GrayImage, region: &Region) -> Vec<f64> {
    let pixels: Vec<u8> = region
        .y_range()
        .flat_map(|y| region.x_range().map(move |x| (x, y)))
        .map(|(x, y)| img.get(x, y))
        .collect();
    (0..=255u8)
        .map(|r| pixels.iter().filter(|&&p| p <= r).count() as f64 / pixels.len() as f64)
        .collect()
}

/// Minimum over the clipped square window, pixel by pixel; pixels outside
/// the region are copied.
pub fn brute_min_filter(img: &GrayImage, region: &Region, radius: usize) -> GrayImage {
    GrayImage::from_fn(img.width(), img.height(), |x, y| {
        if !region.contains(x, y) {
            return img.get(x, y);
        }
        let mut m = u8::MAX;
        for yy in region.y_range() {
            for xx in region.x_range() {
                if xx.abs_diff(x) <= radius && yy.abs_diff(y) <= radius {
                    m = m.min(img.get(xx, yy));
                }
            }
        }
        m
    })
}

pub fn brute_line_votes(edges: &EdgeMap) -> (Vec<usize>, Vec<usize>) {
    let columns = (0..edges.width())
        .map(|x| (0..edges.height()).filter(|&y| edges.get(x, y)).count())
        .collect();
    let rows = (0..edges.height())
        .map(|y| (0..edges.width()).filter(|&x| edges.get(x, y)).count())
        .collect();
    (columns, rows)
}

/// Per algorithm (in first-appearance order): `(dmax, efficiency)` pairs by
/// recounting the records for every level.
pub fn brute_efficiency(records: &[EvalRecord], dmax: &[f64]) -> Vec<(Algorithm, Vec<(f64, f64)>)> {
    let mut order = Vec::new();
    for r in records {
        if !order.contains(&r.algorithm) {
            order.push(r.algorithm);
        }
    }
    order
        .into_iter()
        .map(|a| {
            let ok: Vec<f64> = records
                .iter()
                .filter(|r| r.algorithm == a && r.status == EvalStatus::Ok)
                .map(|r| r.d.unwrap())
                .collect();
            let points = dmax
                .iter()
                .map(|&m| {
                    (
                        m,
                        ok.iter().filter(|&&d| d < m).count() as f64 / ok.len() as f64,
                    )
                })
                .collect();
            (a, points)
        })
        .collect()
}

/// Column means (IPF) of a region, summed directly.
pub fn brute_column_means(img: &GrayImage, region: &Region) -> Vec<f64> {
    region
        .x_range()
        .map(|x| {
            region
                .y_range()
                .map(|y| f64::from(img.get(x, y)))
                .sum::<f64>()
                / region.height() as f64
        })
        .collect()
}

/// Column variances (VPF) around the column means.
pub fn brute_column_variances(img: &GrayImage, region: &Region) -> Vec<f64> {
    let means = brute_column_means(img, region);
    region
        .x_range()
        .zip(means)
        .map(|(x, m)| {
            region
                .y_range()
                .map(|y| (f64::from(img.get(x, y)) - m).powi(2))
                .sum::<f64>()
                / region.height() as f64
        })
        .collect()
}

pub fn min_max_normalize(values: &[f64]) -> Vec<f64> {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo == 0.0 {
        return vec![0.0; values.len()];
    }
    values.iter().map(|v| (v - lo) / (hi - lo)).collect()
}

pub fn random_image(rng: &mut impl Rng, width: usize, height: usize) -> GrayImage {
    GrayImage::from_fn(width, height, |_, _| rng.random())
}

/// Random eye for the localization benchmark: region side 31-41, iris
/// radius 5-9, levels 20/60/200, noise up to 8, eyelid up to 0.2 and a
/// sub-pixel centre within 3 px of the middle.
pub fn benchmark_eye(rng: &mut impl Rng, seed: u64) -> SynthEyeSpec {
    let roi_size: usize = rng.random_range(31..=41);
    let iris_radius: f64 = rng.random_range(5.0..=9.0);
    let middle = roi_size as f64 / 2.0 - 0.5;
    let center = (
        middle + rng.random_range(-3.0..=3.0),
        middle + rng.random_range(-3.0..=3.0),
    );
    SynthEyeSpec {
        roi_size,
        center,
        iris_radius,
        pupil_radius: (0.45 * iris_radius).clamp(3.0, 3.8),
        background: 200,
        iris_intensity: 60,
        pupil_intensity: 20,
        eyelid_coverage: rng.random_range(0.0..=0.2),
        noise_sigma: rng.random_range(0.0..=8.0),
        seed,
    }
}

pub fn record(algorithm: Algorithm, d: Option<f64>) -> EvalRecord {
    EvalRecord {
        image_id: String::new(),
        algorithm,
        predicted_left: d.map(|_| PupilEstimate::new(0.0, 0.0)),
        predicted_right: d.map(|_| PupilEstimate::new(0.0, 0.0)),
        d,
        status: if d.is_some() {
            EvalStatus::Ok
        } else {
            EvalStatus::BothFailed
        },
    }
}
