//! Randomized checks of the building blocks against brute-force oracles
//! and of the algebraic properties the algorithms are expected to keep.

mod common;

use common::*;
use proptest::prelude::*;
use pupiloc::eval::{EyeAnnotation, PixelPos};
use pupiloc::pf::{normalize, raw_projections};
use pupiloc::{
    canny, cdf_binarize, detection_error, efficiency_table, gaussian_blur, histogram_cdf,
    line_votes, locate_pupil_pf, minimum_filter, projection, select_boundary_lines, synth_eye,
    Algorithm, Axis, EaParams, EdgeMap, GrayImage, PfParams, PupilEstimate, Region,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random image plus a region inside it.
fn image_and_region(max_side: usize) -> impl Strategy<Value = (GrayImage, Region)> {
    (1..=max_side, 1..=max_side, any::<u64>()).prop_flat_map(|(w, h, seed)| {
        (0..w, 0..h).prop_flat_map(move |(x0, y0)| {
            (1..=w - x0, 1..=h - y0).prop_map(move |(rw, rh)| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                // few distinct levels so ties are common
                let levels: Vec<u8> = (0..rng.random_range(1..6)).map(|_| rng.random()).collect();
                let img =
                    GrayImage::from_fn(w, h, |_, _| levels[rng.random_range(0..levels.len())]);
                (img, Region::new(x0, y0, rw, rh).unwrap())
            })
        })
    })
}

fn outside_is_untouched(before: &GrayImage, after: &GrayImage, region: &Region) -> bool {
    (0..before.height()).all(|y| {
        (0..before.width()).all(|x| region.contains(x, y) || before.get(x, y) == after.get(x, y))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn histogram_cdf_matches_counting((img, region) in image_and_region(12)) {
        let cdf = histogram_cdf(&img, &region).unwrap();
        prop_assert_eq!(cdf.values().to_vec(), brute_cdf(&img, &region));
        prop_assert_eq!(cdf.values()[255], 1.0);
        prop_assert!(cdf.values().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn minimum_filter_matches_window_scan((img, region) in image_and_region(12), radius in 1usize..4) {
        let fast = minimum_filter(&img, &region, radius).unwrap();
        prop_assert_eq!(&fast, &brute_min_filter(&img, &region, radius));
        prop_assert!(outside_is_untouched(&img, &fast, &region));
        prop_assert!(fast.as_raw().iter().zip(img.as_raw()).all(|(f, i)| f <= i));
    }

    #[test]
    fn erosion_composes_on_the_interior(seed in any::<u64>(), radius in 1usize..4) {
        let img = random_image(&mut ChaCha8Rng::seed_from_u64(seed), 16, 16);
        let all = img.bounds();
        let twice = minimum_filter(&minimum_filter(&img, &all, radius).unwrap(), &all, radius).unwrap();
        let once = minimum_filter(&img, &all, 2 * radius).unwrap();
        let margin = 2 * radius;
        for y in margin..16 - margin {
            for x in margin..16 - margin {
                prop_assert_eq!(twice.get(x, y), once.get(x, y), "at ({}, {})", x, y);
            }
        }
    }

    #[test]
    fn blur_keeps_horizontal_constancy(seed in any::<u64>(), sigma in 0.3f64..3.0, w in 1usize..20, h in 1usize..20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let column: Vec<u8> = (0..h).map(|_| rng.random()).collect();
        let img = GrayImage::from_fn(w, h, |_, y| column[y]);
        let out = gaussian_blur(&img, &img.bounds(), sigma).unwrap();
        for y in 0..h {
            prop_assert!((0..w).all(|x| out.get(x, y) == out.get(0, y)));
        }
    }

    #[test]
    fn blur_leaves_the_outside_alone((img, region) in image_and_region(14), sigma in 0.3f64..2.0) {
        let out = gaussian_blur(&img, &region, sigma).unwrap();
        prop_assert!(outside_is_untouched(&img, &out, &region));
    }

    #[test]
    fn binarize_marks_fewer_than_the_quantile(seed in any::<u64>(), q in 0.001f64..0.5) {
        let img = random_image(&mut ChaCha8Rng::seed_from_u64(seed), 32, 32);
        let mask = cdf_binarize(&img, &img.bounds(), q).unwrap();
        let white = mask.as_raw().iter().filter(|&&v| v == 255).count();
        prop_assert!((white as f64 / 1024.0) < q);
        prop_assert!(mask.as_raw().iter().all(|&v| v == 0 || v == 255));
    }

    #[test]
    fn projections_match_direct_sums((img, region) in image_and_region(12)) {
        let (ipf, vpf) = raw_projections(&img, &region, Axis::Vertical).unwrap();
        let means = brute_column_means(&img, &region);
        let vars = brute_column_variances(&img, &region);
        for (a, b) in ipf.iter().zip(&means) {
            prop_assert!((a - b).abs() <= 1e-9);
        }
        for (a, b) in vpf.iter().zip(&vars) {
            prop_assert!((a - b).abs() <= 1e-6);
        }
    }

    #[test]
    fn gpf_endpoints((img, region) in image_and_region(12), alpha in 0.0f64..=1.0) {
        for axis in [Axis::Vertical, Axis::Horizontal] {
            let (ipf, vpf) = raw_projections(&img, &region, axis).unwrap();
            let at0 = projection(&img, &region, axis, 0.0).unwrap();
            prop_assert_eq!(&at0.values, &normalize(&ipf));
            let at1 = projection(&img, &region, axis, 1.0).unwrap();
            prop_assert_eq!(&at1.values, &normalize(&vpf));
            let blend = projection(&img, &region, axis, alpha).unwrap();
            let (ni, nv) = (normalize(&ipf), normalize(&vpf));
            for (k, v) in blend.values.iter().enumerate() {
                prop_assert!((v - ((1.0 - alpha) * ni[k] + alpha * nv[k])).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn line_votes_match_counting(seed in any::<u64>(), w in 1usize..25, h in 1usize..25, density in 0.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = EdgeMap::new(w, h);
        for y in 0..h {
            for x in 0..w {
                edges.set(x, y, rng.random_bool(density));
            }
        }
        let (columns, rows) = line_votes(&edges);
        prop_assert_eq!((columns.clone(), rows.clone()), brute_line_votes(&edges));
        prop_assert_eq!(columns.iter().sum::<usize>(), edges.count());
        prop_assert_eq!(rows.iter().sum::<usize>(), edges.count());
    }

    #[test]
    fn boundary_lines_are_separated(counts in prop::collection::vec(0usize..6, 9..40), sep in 1usize..8) {
        if let Ok((a, b)) = select_boundary_lines(&counts, sep) {
            prop_assert!(a < b && b - a >= sep);
            let top = *counts.iter().max().unwrap();
            prop_assert!(counts[a] == top || counts[b] == top);
        }
    }

    #[test]
    fn efficiency_table_matches_recount(
        ds in prop::collection::vec((0usize..3, prop::option::weighted(0.8, 0.0f64..0.4)), 1..60),
        mut dmax in prop::collection::vec(0.0f64..0.4, 1..8),
    ) {
        dmax.sort_by(f64::total_cmp);
        let records: Vec<_> = ds.iter().map(|&(a, d)| record(Algorithm::ALL[a], d)).collect();
        let oracle = brute_efficiency(&records, &dmax);
        match efficiency_table(&records, &dmax) {
            Ok(curves) => {
                prop_assert_eq!(curves.len(), oracle.len());
                for (c, (a, points)) in curves.iter().zip(&oracle) {
                    prop_assert_eq!(c.algorithm, *a);
                    prop_assert_eq!(&c.points, points);
                    prop_assert!(c.points.windows(2).all(|w| w[0].1 <= w[1].1));
                }
            }
            // only when some algorithm has no successful record
            Err(_) => prop_assert!(oracle.iter().any(|(_, p)| p.iter().any(|(_, e)| e.is_nan()))),
        }
    }

    #[test]
    fn detection_error_is_rigid_and_scale_invariant(
        l in (0usize..200, 0usize..200),
        r in (0usize..200, 0usize..200),
        noise in prop::array::uniform4(-20.0f64..20.0),
        shift in (0usize..500, 0usize..500),
        quarter_turns in 0u8..4,
        scale in 1usize..6,
    ) {
        prop_assume!(l != r);
        let truth = EyeAnnotation::new(PixelPos::new(l.0, l.1), PixelPos::new(r.0, r.1));
        let pl = PupilEstimate::new(l.0 as f64 + noise[0], l.1 as f64 + noise[1]);
        let pr = PupilEstimate::new(r.0 as f64 + noise[2], r.1 as f64 + noise[3]);
        let d = detection_error(&truth, &pl, &pr).unwrap();
        prop_assert_eq!(detection_error(&truth, &PupilEstimate::new(l.0 as f64, l.1 as f64), &PupilEstimate::new(r.0 as f64, r.1 as f64)).unwrap(), 0.0);
        // swapping both pairs together changes nothing
        let swapped = EyeAnnotation::new(truth.right, truth.left);
        prop_assert!((detection_error(&swapped, &pr, &pl).unwrap() - d).abs() <= 1e-9 * d.max(1e-12));

        // scale, rotate by quarter turns about the origin, then shift so
        // every coordinate stays non-negative
        let big = 1200.0;
        let map = |x: f64, y: f64| {
            let (x, y) = (x * scale as f64, y * scale as f64);
            let (x, y) = match quarter_turns {
                0 => (x, y),
                1 => (-y, x),
                2 => (-x, -y),
                _ => (y, -x),
            };
            (x + big + shift.0 as f64, y + big + shift.1 as f64)
        };
        let pix = |p: (usize, usize)| {
            let (x, y) = map(p.0 as f64, p.1 as f64);
            PixelPos::new(x.round() as usize, y.round() as usize)
        };
        let est = |p: &PupilEstimate| {
            let (x, y) = map(p.x, p.y);
            PupilEstimate::new(x, y)
        };
        let moved = EyeAnnotation::new(pix(l), pix(r));
        let d2 = detection_error(&moved, &est(&pl), &est(&pr)).unwrap();
        prop_assert!((d2 - d).abs() <= 1e-9 * d.max(1e-12), "{} vs {}", d, d2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn pf_ignores_affine_intensity_changes(seed in any::<u64>(), b in 0u8..=20, double in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut spec = benchmark_eye(&mut rng, seed);
        // darker palette and mild noise leave headroom for a*I + b
        spec.background = 100;
        spec.iris_intensity = 30;
        spec.pupil_intensity = 10;
        spec.noise_sigma = spec.noise_sigma.min(4.0);
        let (img, _) = synth_eye(&spec).unwrap();
        let a: u16 = if double { 2 } else { 1 };
        prop_assume!(img.as_raw().iter().all(|&v| u16::from(v) * a + u16::from(b) <= 255));
        let scaled = GrayImage::from_fn(img.width(), img.height(), |x, y| {
            (u16::from(img.get(x, y)) * a + u16::from(b)) as u8
        });
        let p = PfParams::default();
        let before = locate_pupil_pf(&img, &img.bounds(), &p);
        let after = locate_pupil_pf(&scaled, &scaled.bounds(), &p);
        match (before, after) {
            (Ok(e1), Ok(e2)) => prop_assert!(e1.distance_to(e2.x, e2.y) <= 1e-9, "{:?} vs {:?}", e1, e2),
            (Err(e1), Err(e2)) => prop_assert_eq!(e1.code(), e2.code()),
            (x, y) => prop_assert!(false, "{:?} vs {:?}", x, y),
        }
    }

    #[test]
    fn canny_output_is_binary_and_local(seed in any::<u64>(), w in 5usize..24, h in 5usize..24, x0 in 0usize..6, y0 in 0usize..6) {
        let img = random_image(&mut ChaCha8Rng::seed_from_u64(seed), w + x0 + 3, h + y0 + 3);
        let region = Region::new(x0, y0, w, h).unwrap();
        let edges = canny(&img, &region, &EaParams::default()).unwrap();
        prop_assert_eq!((edges.width(), edges.height()), (region.width(), region.height()));
        let dump = edges.to_image();
        prop_assert!(dump.as_raw().iter().all(|&v| v == 0 || v == 255));
        // the outer ring has no gradient and therefore no edges
        for x in 0..edges.width() {
            prop_assert!(!edges.get(x, 0) && !edges.get(x, edges.height() - 1));
        }
    }
}
