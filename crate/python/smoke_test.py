"""Smoke test for the pupiloc extension module.

Build and install the module first (`maturin develop` in crates/python),
then run `python python/smoke_test.py` from the repository root.
"""

import os
import tempfile

import pupiloc


def main():
    img, (cx, cy) = pupiloc.synth_eye(roi_size=31, iris_radius=6.0)
    assert (img.width, img.height) == (31, 31)
    assert (cx, cy) == (15.0, 15.0)

    for algo, tol in (("cdf", 1.0), ("pf", 1.5), ("ea", 2.0)):
        x, y = pupiloc.locate(img, algo)
        err = ((x - cx) ** 2 + (y - cy) ** 2) ** 0.5
        assert err <= tol, (algo, x, y)
        print(f"{algo}: ({x:.2f}, {y:.2f}) error {err:.3f} px")

    roi = pupiloc.Region(0, 0, 31, 31)
    assert pupiloc.locate_pf(img, roi, alpha=0.0) == pupiloc.locate(img, "pf", roi)
    assert pupiloc.locate_cdf(img, quantile=0.05) == pupiloc.locate(img, "cdf")

    flat = pupiloc.GrayImage.filled(20, 20, 90)
    try:
        pupiloc.locate_cdf(flat)
    except pupiloc.PupilocError as e:
        assert isinstance(e, ValueError)
        assert str(e).startswith("no_candidate_pixels"), str(e)
    else:
        raise AssertionError("constant image should not yield a pupil")

    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "eye.pgm")
        pupiloc.write_pgm(path, img)
        assert pupiloc.read_pgm(path) == img
    assert pupiloc.decode_pgm(pupiloc.encode_pgm(img)) == img
    try:
        pupiloc.read_pgm(os.path.join(tempfile.gettempdir(), "missing-pupiloc.pgm"))
    except OSError:
        pass
    else:
        raise AssertionError("missing file should raise OSError")

    cdf = pupiloc.histogram_cdf(img)
    assert len(cdf) == 256 and cdf[-1] == 1.0
    eroded = pupiloc.minimum_filter(img, 2)
    assert all(a <= b for a, b in zip(eroded.to_bytes(), img.to_bytes()))

    assert pupiloc.detection_error((0, 0), (100, 0), (0.0, 10.0), (100.0, 0.0)) == 0.1
    assert pupiloc.efficiency([0.01, 0.04, 0.2, None], [0.05, 0.25]) == [2 / 3, 1.0]

    print("smoke test passed")


if __name__ == "__main__":
    main()
