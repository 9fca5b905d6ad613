"""Exit criteria for the package, one test per criterion.

Each test records a PASS/FAIL/SKIP line that pytest prints in an
"acceptance criteria" section of the terminal summary.
"""

import os
import time

import numpy as np
import pytest

from quasimap.engine import EscapeParams, Viewport, compute_grid
from quasimap.maps import MapFamily
from quasimap.render import Raster, decode_pgm, encode_image, membership_raster
from quasimap.sweep import SweepSpec, TransitionProfile, detect_discontinuity, generate_frames, transition_profile
from quasimap.validation import equivalence_check, real_axis_disagreements

CLASSICAL = MapFamily.classical()
FULL_512 = Viewport(-2.5, 1.5, -2.0, 2.0, 512, 512)
SQUARE_3 = Viewport(-3.0, 3.0, -3.0, 3.0, 256, 256)
SEED = 20240611
THRESHOLD = 0.5


def crossing_steps(values, point):
    """Parameter values p[k+1] of the steps whose closed interval contains ``point``."""
    out = []
    for a, b in zip(values, values[1:]):
        if min(a, b) - 1e-12 <= point <= max(a, b) + 1e-12:
            out.append(b)
    return out


def rel_change(a, b):
    return abs(b - a) / a


def test_c1_reduction_bitwise(report_criterion):
    params = EscapeParams(256, 2.0)
    ref = compute_grid(CLASSICAL, FULL_512, params).cells
    same = {}
    for fam in (MapFamily.conjugate(0.0), MapFamily.alpha(2.0), MapFamily.balgebra(0.0)):
        same[str(fam)] = bool(np.array_equal(compute_grid(fam, FULL_512, params).cells, ref))
    ok = all(same.values())
    report_criterion(1, ok, f"reduction grids bit-identical to classical: {same}")
    assert ok


def test_c2_epsilon_half_conjugacy(report_criterion):
    rep = equivalence_check("epsilon_half", samples=10_000, seed=SEED, max_iter=512)
    rate = rep.mismatches / rep.total
    ok = rate <= 1e-3
    report_criterion(2, ok, f"eps=0.5 mismatch rate {rate:.4%} (<= 0.1%), membership mismatches "
                            f"{rep.membership_mismatches}, grazing {rep.grazing}, "
                            f"max per-step defect {rep.max_step_defect_ulps:g} ulp")
    assert ok


def test_c3_real_axis_oracle(report_criterion):
    bad = real_axis_disagreements(samples=10_000, seed=SEED, max_iter=10_000, lo=-2.5, hi=0.5)
    ok = not bad
    report_criterion(3, ok, f"real-axis disagreements outside parabolic bands: {len(bad)}")
    assert ok, bad[:10]


def test_c4_classical_area(report_criterion):
    a1 = compute_grid(CLASSICAL, Viewport(-2.5, 1.5, -2, 2, 1000, 1000), EscapeParams(2048, 2.0)).area_estimate
    a2 = compute_grid(CLASSICAL, Viewport(-2.5, 1.5, -2, 2, 2000, 2000), EscapeParams(4096, 2.0)).area_estimate
    ok = abs(a1 - 1.51) <= 0.05 and rel_change(a2, a1) < 0.02
    report_criterion(4, ok, f"classical area {a1:.5f} (1.51 +/- 0.05), refined {a2:.5f}, "
                            f"diff {rel_change(a2, a1):.3%} (< 2%)")
    assert ok


def test_c5_perplex_rectangle_area(report_criterion):
    vp = Viewport(-2.5, 0.75, -2.5, 0.75, 512, 512)
    area = compute_grid(MapFamily.epsilon(0.0), vp, EscapeParams(1000, 4.0)).area_estimate
    ok = abs(area - 5.06) <= 0.10
    report_criterion(5, ok, f"eps=0 area {area:.5f} (5.06 +/- 0.10; exact 2.25^2 = 5.0625)")
    assert ok


def _profile(kind, lo, hi, frames):
    s = SweepSpec(kind, lo, hi, frames, SQUARE_3, EscapeParams(512, 4.0))
    return transition_profile(s)


def _fmt(prof):
    return ", ".join(f"{p:.3g}:{c:.1%}" for p, c in zip(prof.params[1:], prof.relative_changes()))


def test_c6a_epsilon_sweep_sharp(report_criterion):
    prof = _profile("epsilon", 0.20, 0.30, 11)
    flags = detect_discontinuity(prof, THRESHOLD)
    allowed = crossing_steps(prof.params, 0.25)
    ok = len(flags) == 1 and flags[0] in allowed
    report_criterion("6a", ok, f"eps sweep 0.20->0.30 flags {flags}, want exactly one of {allowed}; "
                               f"relative area steps [{_fmt(prof)}]")
    assert ok


def test_c6b_b_sweep_sharp(report_criterion):
    prof = _profile("balgebra", -2.5, -1.5, 11)
    flags = detect_discontinuity(prof, THRESHOLD)
    allowed = crossing_steps(prof.params, -2.0)
    area = {b: _profile("balgebra", b, b, 1).rows[0].area_estimate for b in (-1.9, -2.1, -1.0, -1.2)}
    across = rel_change(area[-1.9], area[-2.1])
    inside = rel_change(area[-1.0], area[-1.2])
    ok = len(flags) == 1 and flags[0] in allowed and across > 0.25 and inside < 0.05
    report_criterion("6b", ok, f"b sweep -2.5->-1.5 flags {flags}, want exactly one of {allowed}; "
                               f"area change b=-1.9->-2.1 {across:.1%} (> 25%), "
                               f"b=-1.0->-1.2 {inside:.1%} (< 5%)")
    assert ok


def test_c6c_a_sweep_continuous(report_criterion):
    prof = _profile("conjugate", 0.0, 0.5, 11)
    flags = detect_discontinuity(prof, THRESHOLD)
    report_criterion("6c", not flags, f"a sweep 0->0.5 flags {flags} (want none); max step "
                                      f"{max(prof.relative_changes()):.1%}")
    assert not flags


def test_c6d_alpha_sweep_continuous(report_criterion):
    prof = _profile("alpha", 2.0, 0.5, 16)
    flags = detect_discontinuity(prof, THRESHOLD)
    report_criterion("6d", not flags, f"alpha sweep 2->0.5 flags {flags} (want none); max step "
                                      f"{max(prof.relative_changes()):.1%}")
    assert not flags


def test_c7_symmetry(report_criterion):
    cells = compute_grid(CLASSICAL, FULL_512, EscapeParams(256, 2.0)).cells
    ok = bool(np.array_equal(cells, cells[::-1]))
    report_criterion(7, ok, "classical 512x512 grid equals its vertical mirror")
    assert ok


def _tree_bytes(root):
    return {p.name: p.read_bytes() for p in sorted(root.iterdir())}


def test_c8_determinism_across_threads(tmp_path, report_criterion):
    trees = []
    for threads in (1, 4):
        out = tmp_path / f"t{threads}"
        s = SweepSpec("conjugate", 0.1, 0.5, 5, Viewport(-2.5, 1.5, -2, 2, 200, 160), EscapeParams(256, 4.0),
                      fmt="pgm", outdir=out)
        generate_frames(s, threads=threads)
        trees.append(_tree_bytes(out))
    g1 = compute_grid(CLASSICAL, FULL_512, EscapeParams(256, 2.0), threads=1).cells
    g4 = compute_grid(CLASSICAL, FULL_512, EscapeParams(256, 2.0), threads=4).cells
    ok = trees[0] == trees[1] and np.array_equal(g1, g4)
    report_criterion(8, ok, f"byte-identical PGM/CSV/JSON and grids at 1 and 4 threads ({len(trees[0])} files)")
    assert ok


def test_c8_parallel_speedup(report_criterion):
    cores = len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else os.cpu_count()
    if cores < 4:
        report_criterion("8-speedup", None, f"host has {cores} usable core(s); criterion is defined on a 4-core host")
        pytest.skip(f"needs a 4-core host, have {cores}")
    params = EscapeParams(256, 2.0)
    compute_grid(CLASSICAL, FULL_512, params, threads=4)  # warm-up

    def best(threads):
        times = []
        for _ in range(3):
            t0 = time.perf_counter()
            compute_grid(CLASSICAL, FULL_512, params, threads=threads)
            times.append(time.perf_counter() - t0)
        return min(times)

    t1, t4 = best(1), best(4)
    ok = t1 / t4 >= 2.0
    report_criterion("8-speedup", ok, f"speedup {t1 / t4:.2f}x at 4 threads (>= 2x)")
    assert ok


def test_c9_figure_series(tmp_path, report_criterion):
    details = []
    ok = True
    for kind, lo, hi, frames, want in (("conjugate", 0.1, 0.5, 5, [0.1, 0.2, 0.3, 0.4, 0.5]),
                                       ("alpha", 1.1, 0.5, 4, [1.1, 0.9, 0.7, 0.5])):
        out = tmp_path / kind
        s = SweepSpec(kind, lo, hi, frames, Viewport(0.0, 0.5, -0.75, -0.25, 160, 160),
                      EscapeParams(256, 4.0), fmt="png", outdir=out)
        manifest = generate_frames(s)
        names = [f"frame_{k:04d}.png" for k in range(frames)]
        files_ok = manifest["files"] == names and all((out / n).is_file() for n in names)
        params_ok = np.allclose(manifest["params"], want, atol=1e-12) and manifest["complete"]
        csv_rows = TransitionProfile.from_csv((out / "metrics.csv").read_text()).rows
        metrics_ok = csv_rows == transition_profile(s).rows
        ok &= files_ok and params_ok and metrics_ok
        details.append(f"{kind}: files {files_ok}, params {params_ok}, metrics {metrics_ok}")
    report_criterion(9, ok, "; ".join(details))
    assert ok


def test_c10_image_formats(report_criterion):
    from io import BytesIO

    from PIL import Image

    header_ok = (encode_image(Raster(np.array([[0]], np.uint8)), "pgm") == b"P5\n1 1\n255\n\x00"
                 and encode_image(Raster(np.array([[0, 255]], np.uint8)), "pgm") == b"P5\n2 1\n255\n\x00\xff")
    r = membership_raster(compute_grid(CLASSICAL, Viewport(-2.5, 1.5, -2, 2, 123, 77), EscapeParams(200, 2.0)))
    pgm_ok = decode_pgm(encode_image(r, "pgm")) == r
    png_ok = np.array_equal(np.asarray(Image.open(BytesIO(encode_image(r, "png")))), r.pixels)
    ok = header_ok and pgm_ok and png_ok
    report_criterion(10, ok, f"PGM header exact {header_ok}, PGM round trip {pgm_ok}, PNG round trip {png_ok}")
    assert ok
