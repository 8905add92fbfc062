//! Evaluation harness: dataset I/O, eye-region derivation, the
//! interocular-normalized detection error, efficiency curves, and a
//! synthetic eye renderer with known ground truth.
//!
//! All randomness goes through [`rng_for`], a ChaCha8 generator
//! (`rand_chacha`) seeded from a `u64`, so benchmark results reproduce
//! across platforms.

mod bench;
mod dataset;
mod metric;
mod roi;
mod synth;

pub use bench::{run_benchmark, run_benchmark_timed, EvalRecord, EvalStatus, TimedRecord};
pub use dataset::{
    load_bioid, parse_eye_file, read_eye_file, write_eye_file, EyeAnnotation, PixelPos, Sample,
};
pub use metric::{
    detection_error, dmax_sweep, efficiency_table, EfficiencyCurve, DEFAULT_DMAX_LEVELS,
};
pub use roi::{derive_roi, RoiPolicy};
pub use synth::{synth_eye, synth_face, SynthEyeSpec, SynthFaceSpec};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic generator for `(seed, stream)`; streams are independent
/// so per-image draws do not depend on processing order.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Derives an independent per-item seed (splitmix64 finalizer).
pub fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
