#!/usr/bin/env python3
"""Render the conjugate-perturbation and alpha-family boundary series.

Writes one directory per series under ``--out`` (frames, manifest.json,
metrics.csv).  The viewport is a window on the lower-right quadrant of the
classical set; it was chosen by eye, no published coordinates exist.
"""

import argparse
import logging
from pathlib import Path

from quasimap.engine import EscapeParams, Viewport
from quasimap.sweep import SweepSpec, generate_frames

LOWER_RIGHT = (0.0, 0.55, -0.8, -0.25)

SERIES = {
    "classical": ("classical", 0.0, 0.0, 1),
    "conjugate_pos": ("conjugate", 0.1, 0.5, 5),
    "conjugate_neg": ("conjugate", -0.1, -0.5, 5),
    "alpha": ("alpha", 1.1, 0.5, 4),
    "alpha_large": ("alpha", 2.0, 10.0, 5),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--out", default="figures")
    ap.add_argument("--size", type=int, default=800, help="square image size in pixels")
    ap.add_argument("--max-iter", type=int, default=1000)
    ap.add_argument("--format", default="png", choices=("png", "pgm"))
    ap.add_argument("--style", default="membership", choices=("membership", "escape", "boundary"))
    ap.add_argument("--threads", type=int, default=0)
    ap.add_argument("--only", nargs="*", choices=sorted(SERIES))
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    vp = Viewport(*LOWER_RIGHT, args.size, args.size)
    for name in args.only or SERIES:
        kind, lo, hi, frames = SERIES[name]
        radius = 2.0 if kind == "classical" else 4.0
        spec = SweepSpec(kind, lo, hi, frames, vp, EscapeParams(args.max_iter, radius), fmt=args.format,
                         style=args.style, outdir=Path(args.out) / name)
        manifest = generate_frames(spec, threads=args.threads)
        print(f"{name}: {len(manifest['files'])} frames -> {spec.outdir}")


if __name__ == "__main__":
    main()
