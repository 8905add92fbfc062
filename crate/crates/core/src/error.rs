use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("region is empty")]
    EmptyRegion,
    #[error("region {region} does not fit inside a {width}x{height} image")]
    RegionOutOfBounds {
        region: String,
        width: usize,
        height: usize,
    },
    #[error("region is too small: {0}")]
    RegionTooSmall(String),
    #[error("invalid image: {0}")]
    InvalidImage(String),
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("no candidate pixels survived binarization")]
    NoCandidatePixels,
    #[error("no pixels darker than the average intensity around the darkest pixel")]
    NoDarkPixels,
    #[error("projection curve has no boundaries")]
    NoBoundaries,
    #[error("no boundary on one side of the projection valley")]
    NoFlankingPair,
    #[error("edge map has no votes")]
    NoVotes,
    #[error("no second boundary line at the required separation")]
    NoSecondLine,

    #[error("ground truth has zero interocular distance")]
    DegenerateTruth,
    #[error("eye region out of bounds: {0}")]
    RoiOutOfBounds(String),
    #[error("invalid synthetic eye spec: {0}")]
    InvalidSpec(String),
    #[error("no evaluated records for {0}")]
    NoEvaluatedRecords(String),

    #[error("malformed PGM data: {0}")]
    Pgm(String),
    #[error("{}: malformed PGM: {reason}", path.display())]
    MalformedPgm { path: PathBuf, reason: String },
    #[error("{}: no matching .eye annotation file", path.display())]
    MissingAnnotation { path: PathBuf },
    #[error("{}: malformed eye file: {reason}", path.display())]
    MalformedEyeFile { path: PathBuf, reason: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Stable snake_case identifier used in CSV status columns and by the
    /// Python bindings.
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptyRegion => "empty_region",
            Error::RegionOutOfBounds { .. } => "region_out_of_bounds",
            Error::RegionTooSmall(_) => "region_too_small",
            Error::InvalidImage(_) => "invalid_image",
            Error::InvalidParams(_) => "invalid_params",
            Error::NoCandidatePixels => "no_candidate_pixels",
            Error::NoDarkPixels => "no_dark_pixels",
            Error::NoBoundaries => "no_boundaries",
            Error::NoFlankingPair => "no_flanking_pair",
            Error::NoVotes => "no_votes",
            Error::NoSecondLine => "no_second_line",
            Error::DegenerateTruth => "degenerate_truth",
            Error::RoiOutOfBounds(_) => "roi_out_of_bounds",
            Error::InvalidSpec(_) => "invalid_spec",
            Error::NoEvaluatedRecords(_) => "no_evaluated_records",
            Error::Pgm(_) | Error::MalformedPgm { .. } => "malformed_pgm",
            Error::MissingAnnotation { .. } => "missing_annotation",
            Error::MalformedEyeFile { .. } => "malformed_eye_file",
            Error::Io { .. } => "io",
        }
    }

    /// True for the errors an algorithm reports when it cannot find a pupil
    /// in an otherwise valid region.
    pub fn is_detection_failure(&self) -> bool {
        matches!(
            self,
            Error::NoCandidatePixels
                | Error::NoDarkPixels
                | Error::NoBoundaries
                | Error::NoFlankingPair
                | Error::NoVotes
                | Error::NoSecondLine
        )
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
