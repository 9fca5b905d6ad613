#!/usr/bin/env python3
"""Area and boundary profiles for the four parameter sweeps.

Prints each profile with its relative area steps and the parameter values
flagged by ``detect_discontinuity``.  The boundary-pixel column is printed
alongside because it reacts to the shape change at the algebra class
boundary even where the area does not.
"""

import argparse

from quasimap.engine import EscapeParams, Viewport
from quasimap.sweep import SweepSpec, detect_discontinuity, transition_profile

SWEEPS = [
    ("epsilon", 0.20, 0.30, 11),
    ("balgebra", -2.5, -1.5, 11),
    ("conjugate", 0.0, 0.5, 11),
    ("conjugate", 0.0, -0.5, 11),
    ("alpha", 2.0, 0.5, 16),
    ("alpha", 2.0, 10.0, 17),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--size", type=int, default=256)
    ap.add_argument("--max-iter", type=int, default=512)
    ap.add_argument("--radius", type=float, default=4.0)
    ap.add_argument("--threshold", type=float, default=0.5)
    args = ap.parse_args()

    vp = Viewport(-3, 3, -3, 3, args.size, args.size)
    for kind, lo, hi, frames in SWEEPS:
        prof = transition_profile(SweepSpec(kind, lo, hi, frames, vp, EscapeParams(args.max_iter, args.radius)))
        print(f"\n{kind} {lo} -> {hi} ({frames} frames)")
        print(f"{'param':>8} {'area':>9} {'step':>7} {'boundary':>9}")
        prev = None
        for r in prof.rows:
            step = "" if prev is None else f"{abs(r.area_estimate - prev) / prev:.1%}"
            print(f"{r.param:8.3f} {r.area_estimate:9.4f} {step:>7} {r.boundary_pixels:9d}")
            prev = r.area_estimate
        print("flagged:", detect_discontinuity(prof, args.threshold))


if __name__ == "__main__":
    main()
