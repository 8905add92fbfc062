//! # pupiloc
//!
//! Eye pupil localization in 8-bit grayscale eye regions, with three
//! interchangeable algorithms:
//!
//! - [`cdf`]: cumulative-distribution thresholding followed by a local
//!   centroid of dark pixels around the darkest candidate;
//! - [`pf`]: integral/variance projection functions and their derivative
//!   boundaries;
//! - [`ea`]: Canny edges voting for the iris boundary lines.
//!
//! The [`eval`] module reproduces a BioID-style benchmark: eye regions are
//! derived from ground truth, the error of a prediction is the worse pupil
//! error divided by the interocular distance, and efficiency curves count
//! the images below an error bound.
//!
//! ```
//! use pupiloc::{synth_eye, Algorithm, AlgoParams, SynthEyeSpec};
//!
//! let (img, (cx, cy)) = synth_eye(&SynthEyeSpec::default()).unwrap();
//! let est = Algorithm::Cdf
//!     .locate(&img, &img.bounds(), &AlgoParams::default())
//!     .unwrap();
//! assert!(est.distance_to(cx, cy) < 1.0);
//! ```

pub mod algorithm;
pub mod cdf;
pub mod cli;
pub mod ea;
mod error;
pub mod eval;
pub mod image;
pub mod kernels;
pub mod pf;
pub mod pgm;

pub use algorithm::{AlgoParams, Algorithm};
pub use cdf::{cdf_binarize, find_pmi, locate_pupil_cdf, CdfParams};
pub use ea::{canny, line_votes, locate_pupil_ea, select_boundary_lines, EaParams, EdgeMap};
pub use error::{Error, Result};
pub use eval::{
    derive_roi, detection_error, efficiency_table, load_bioid, run_benchmark, synth_eye,
    synth_face, EfficiencyCurve, EvalRecord, EvalStatus, EyeAnnotation, PixelPos, RoiPolicy,
    Sample, SynthEyeSpec, SynthFaceSpec,
};
pub use image::{GrayImage, PupilEstimate, Region};
pub use kernels::{gaussian_blur, histogram_cdf, mean_intensity, minimum_filter, Cdf256};
pub use pf::{boundary_points, locate_pupil_pf, projection, Axis, PfParams, ProjectionCurve};
pub use pgm::{decode_pgm, encode_pgm, read_pgm, write_pgm};
