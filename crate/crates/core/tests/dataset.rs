//! Dataset round trips and end-to-end benchmarking of synthetic faces.

use pupiloc::eval::{dmax_sweep, write_eye_file};
use pupiloc::{
    efficiency_table, load_bioid, run_benchmark, synth_face, write_pgm, AlgoParams, Algorithm,
    EvalStatus, RoiPolicy, SynthFaceSpec,
};

fn write_faces(dir: &std::path::Path, count: u64, noise: f64) -> Vec<SynthFaceSpec> {
    (0..count)
        .map(|i| {
            let spec = SynthFaceSpec {
                noise_sigma: noise,
                seed: 100 + i,
                ..SynthFaceSpec::default()
            };
            let (img, eyes) = synth_face(&spec).unwrap();
            write_pgm(dir.join(format!("face_{i:02}.pgm")), &img).unwrap();
            write_eye_file(dir.join(format!("face_{i:02}.eye")), &eyes).unwrap();
            spec
        })
        .collect()
}

#[test]
fn written_faces_load_back_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let specs = write_faces(dir.path(), 4, 4.0);
    let samples = load_bioid(dir.path()).unwrap();
    assert_eq!(samples.len(), 4);
    for (sample, spec) in samples.iter().zip(&specs) {
        let (img, eyes) = synth_face(spec).unwrap();
        assert_eq!(sample.image, img);
        assert_eq!(sample.annotation, eyes);
        assert_eq!((img.width(), img.height()), (384, 286));
    }
    assert_eq!(samples[0].id, "face_00");
}

#[test]
fn clean_faces_are_all_located() {
    let dir = tempfile::tempdir().unwrap();
    write_faces(dir.path(), 6, 0.0);
    let samples = load_bioid(dir.path()).unwrap();
    let records = run_benchmark(
        &samples,
        &Algorithm::ALL,
        &RoiPolicy::default(),
        &AlgoParams::default(),
        5,
    );
    assert!(
        records.iter().all(|r| r.status == EvalStatus::Ok),
        "{records:?}"
    );

    let curves = efficiency_table(&records, &dmax_sweep()).unwrap();
    for c in &curves {
        assert_eq!(c.points.len(), 61);
        assert!(c.points.windows(2).all(|w| w[0].1 <= w[1].1));
        let full = c
            .points
            .iter()
            .find(|(_, e)| *e == 1.0)
            .expect("reaches 1.0");
        assert!(
            full.0 < 0.25,
            "{} reaches 1.0 only at {}",
            c.algorithm,
            full.0
        );
    }
}
