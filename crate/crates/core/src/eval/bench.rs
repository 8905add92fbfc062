use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::algorithm::{AlgoParams, Algorithm};
use crate::image::PupilEstimate;

use super::dataset::Sample;
use super::metric::detection_error;
use super::mix_seed;
use super::roi::{derive_roi, RoiPolicy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalStatus {
    Ok,
    LeftFailed,
    RightFailed,
    BothFailed,
}

impl EvalStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            EvalStatus::Ok => "ok",
            EvalStatus::LeftFailed => "left_failed",
            EvalStatus::RightFailed => "right_failed",
            EvalStatus::BothFailed => "both_failed",
        }
    }
}

/// Outcome of one algorithm on one image. `d` is present iff `status` is
/// [`EvalStatus::Ok`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalRecord {
    pub image_id: String,
    pub algorithm: Algorithm,
    pub predicted_left: Option<PupilEstimate>,
    pub predicted_right: Option<PupilEstimate>,
    pub d: Option<f64>,
    pub status: EvalStatus,
}

#[derive(Clone, Debug)]
pub struct TimedRecord {
    pub record: EvalRecord,
    /// Wall time spent locating the left and right pupils.
    pub left_time: Duration,
    pub right_time: Duration,
}

/// Runs every algorithm on both eyes of every sample.
///
/// Images are processed in parallel; the output is ordered by sample, then
/// by the order of `algorithms`. Each sample's region jitter is seeded from
/// `seed` and the sample index, so the result depends only on the inputs.
pub fn run_benchmark(
    dataset: &[Sample],
    algorithms: &[Algorithm],
    policy: &RoiPolicy,
    params: &AlgoParams,
    seed: u64,
) -> Vec<EvalRecord> {
    dataset
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, sample)| {
            evaluate(sample, i, algorithms, policy, params, seed)
                .into_iter()
                .map(|t| t.record)
        })
        .collect()
}

/// Sequential variant of [`run_benchmark`] that also reports per-eye
/// processing time.
pub fn run_benchmark_timed(
    dataset: &[Sample],
    algorithms: &[Algorithm],
    policy: &RoiPolicy,
    params: &AlgoParams,
    seed: u64,
) -> Vec<TimedRecord> {
    dataset
        .iter()
        .enumerate()
        .flat_map(|(i, sample)| evaluate(sample, i, algorithms, policy, params, seed))
        .collect()
}

fn evaluate(
    sample: &Sample,
    index: usize,
    algorithms: &[Algorithm],
    policy: &RoiPolicy,
    params: &AlgoParams,
    seed: u64,
) -> Vec<TimedRecord> {
    let rois = derive_roi(
        &sample.annotation,
        sample.image.width(),
        sample.image.height(),
        policy,
        mix_seed(seed, index as u64),
    );
    algorithms
        .iter()
        .map(|&algorithm| {
            let Ok((left_roi, right_roi)) = rois else {
                return TimedRecord {
                    record: EvalRecord {
                        image_id: sample.id.clone(),
                        algorithm,
                        predicted_left: None,
                        predicted_right: None,
                        d: None,
                        status: EvalStatus::BothFailed,
                    },
                    left_time: Duration::ZERO,
                    right_time: Duration::ZERO,
                };
            };
            let start = Instant::now();
            let left = algorithm.locate(&sample.image, &left_roi, params).ok();
            let left_time = start.elapsed();
            let start = Instant::now();
            let right = algorithm.locate(&sample.image, &right_roi, params).ok();
            let right_time = start.elapsed();

            let (status, d) = match (&left, &right) {
                (Some(l), Some(r)) => match detection_error(&sample.annotation, l, r) {
                    Ok(d) => (EvalStatus::Ok, Some(d)),
                    Err(_) => (EvalStatus::BothFailed, None),
                },
                (None, Some(_)) => (EvalStatus::LeftFailed, None),
                (Some(_), None) => (EvalStatus::RightFailed, None),
                (None, None) => (EvalStatus::BothFailed, None),
            };
            TimedRecord {
                record: EvalRecord {
                    image_id: sample.id.clone(),
                    algorithm,
                    predicted_left: left,
                    predicted_right: right,
                    d,
                    status,
                },
                left_time,
                right_time,
            }
        })
        .collect()
}
