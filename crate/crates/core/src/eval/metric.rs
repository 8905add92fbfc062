use serde::Serialize;

use crate::algorithm::Algorithm;
use crate::error::{Error, Result};
use crate::image::PupilEstimate;

use super::bench::{EvalRecord, EvalStatus};
use super::dataset::EyeAnnotation;

/// Error levels reported in the summary table.
pub const DEFAULT_DMAX_LEVELS: [f64; 6] = [0.02, 0.05, 0.1, 0.15, 0.2, 0.25];

/// Worse of the two pupil errors divided by the interocular distance.
///
/// Predictions are matched to the annotated pupils by the assignment with
/// the smaller total distance, so the metric does not depend on whether a
/// dataset labels eyes from the subject's or the viewer's side.
pub fn detection_error(
    truth: &EyeAnnotation,
    pred_left: &PupilEstimate,
    pred_right: &PupilEstimate,
) -> Result<f64> {
    let interocular = truth.interocular_distance();
    if interocular <= 0.0 {
        return Err(Error::DegenerateTruth);
    }
    let (lx, ly) = (truth.left.x as f64, truth.left.y as f64);
    let (rx, ry) = (truth.right.x as f64, truth.right.y as f64);
    let straight = (
        pred_left.distance_to(lx, ly),
        pred_right.distance_to(rx, ry),
    );
    let swapped = (
        pred_right.distance_to(lx, ly),
        pred_left.distance_to(rx, ry),
    );
    let (a, b) = if swapped.0 + swapped.1 < straight.0 + straight.1 {
        swapped
    } else {
        straight
    };
    Ok(a.max(b) / interocular)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EfficiencyCurve {
    pub algorithm: Algorithm,
    /// `(d_max, efficiency)` pairs in ascending `d_max`.
    pub points: Vec<(f64, f64)>,
    /// Records with both eyes located (the efficiency denominator).
    pub evaluated_count: usize,
    /// All records for this algorithm, including failures.
    pub total_count: usize,
}

/// Fraction of successfully evaluated records with `d < d_max`, per
/// algorithm, in the order the algorithms first appear in `records`.
pub fn efficiency_table(
    records: &[EvalRecord],
    dmax_levels: &[f64],
) -> Result<Vec<EfficiencyCurve>> {
    if dmax_levels.is_empty() {
        return Err(Error::InvalidParams("d_max list is empty".into()));
    }
    if dmax_levels.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParams("d_max list must be ascending".into()));
    }
    let mut algorithms: Vec<Algorithm> = Vec::new();
    for r in records {
        if !algorithms.contains(&r.algorithm) {
            algorithms.push(r.algorithm);
        }
    }
    if algorithms.is_empty() {
        return Err(Error::NoEvaluatedRecords("empty record set".into()));
    }

    algorithms
        .into_iter()
        .map(|algorithm| {
            let mine = records.iter().filter(|r| r.algorithm == algorithm);
            let total_count = mine.clone().count();
            let mut errors: Vec<f64> = mine
                .filter(|r| r.status == EvalStatus::Ok)
                .filter_map(|r| r.d)
                .collect();
            if errors.is_empty() {
                return Err(Error::NoEvaluatedRecords(algorithm.to_string()));
            }
            errors.sort_by(f64::total_cmp);
            let n = errors.len() as f64;
            let points = dmax_levels
                .iter()
                .map(|&dmax| {
                    let below = errors.partition_point(|&d| d < dmax);
                    (dmax, below as f64 / n)
                })
                .collect();
            Ok(EfficiencyCurve {
                algorithm,
                points,
                evaluated_count: errors.len(),
                total_count,
            })
        })
        .collect()
}

/// `d_max` from 0 to 0.3 in steps of 0.005 (61 levels).
pub fn dmax_sweep() -> Vec<f64> {
    (0..=60).map(|i| f64::from(i) / 200.0).collect()
}
