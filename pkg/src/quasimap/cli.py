"""Command-line interface: ``quasimap {render,sweep,profile,classify,verify}``.

Options can also come from a JSON job file (``--config``); a flag given on
the command line overrides the same key in the file.  Config keys are the
long flag names with dashes replaced by underscores, e.g.::

    {"command": "sweep", "family": "conjugate", "range": [0.1, 0.5],
     "frames": 5, "viewport": [0.0, 0.5, -0.75, -0.25], "size": "600x600",
     "out": "figs/"}

Exit status: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import algebra
from .engine import PREVIEW_MAX_ITER, STILL_MAX_ITER, EscapeParams, Viewport, compute_grid
from .maps import PARAM_NAMES, MapFamily
from .render import FORMATS, write_image
from .sweep import STYLES, SweepSpec, detect_discontinuity, generate_frames, transition_profile
from .validation import KINDS, equivalence_check

log = logging.getLogger("quasimap")

DEFAULT_VIEWPORT = (-2.5, 1.5, -2.0, 2.0)
DEFAULT_SIZE = (800, 800)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _floats(text, n: int, what: str) -> tuple[float, ...]:
    if isinstance(text, (list, tuple)):
        parts = list(text)
    else:
        parts = str(text).split(",")
    try:
        vals = tuple(float(p) for p in parts)
    except ValueError:
        raise UsageError(f"{what}: expected {n} comma-separated numbers, got {text!r}") from None
    if len(vals) != n:
        raise UsageError(f"{what}: expected {n} comma-separated numbers, got {text!r}")
    return vals


def _size(text) -> tuple[int, int]:
    if isinstance(text, (list, tuple)) and len(text) == 2:
        w, h = text
    else:
        try:
            w, h = str(text).lower().split("x")
        except ValueError:
            raise UsageError(f"--size: expected WIDTHxHEIGHT, got {text!r}") from None
    try:
        return int(w), int(h)
    except ValueError:
        raise UsageError(f"--size: expected WIDTHxHEIGHT, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    # every option defaults to None so config-file values can fill the gaps
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON job file; flags override its keys")
    common.add_argument("--threads", type=int, help="worker threads, 0 = auto ($QUASIMAP_THREADS, then CPU count)")
    common.add_argument("-v", "--verbose", action="store_true", default=None)

    fam = _Parser(add_help=False)
    fam.add_argument("--family", choices=sorted(PARAM_NAMES), help="map family")
    fam.add_argument("--eps", type=float)
    fam.add_argument("--a", type=float)
    fam.add_argument("--alpha", type=float)
    fam.add_argument("--b", type=float)

    grid = _Parser(add_help=False)
    grid.add_argument("--viewport", help="min_c1,max_c1,min_c2,max_c2")
    grid.add_argument("--size", help="WIDTHxHEIGHT in pixels")
    grid.add_argument("--max-iter", type=int)
    grid.add_argument("--radius", type=float, help="escape radius (default 2 classical, 4 otherwise)")
    grid.add_argument("--cycle-tol", type=float, help="enable periodicity shortcut with this tolerance")

    img = _Parser(add_help=False)
    img.add_argument("--format", choices=FORMATS)
    img.add_argument("--style", choices=sorted(STYLES))

    rng = _Parser(add_help=False)
    rng.add_argument("--range", help="lo,hi of the family parameter")
    rng.add_argument("--frames", type=int)

    parser = _Parser(prog="quasimap", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    p = sub.add_parser("render", parents=[common, fam, grid, img], help="render one image")
    p.add_argument("--out")
    p = sub.add_parser("sweep", parents=[common, fam, grid, img, rng], help="write a frame sequence")
    p.add_argument("--out")
    p = sub.add_parser("profile", parents=[common, fam, grid, rng], help="set-area transition profile")
    p.add_argument("--threshold", type=float)
    p.add_argument("--out", help="write metrics CSV here instead of stdout")
    p = sub.add_parser("classify", parents=[common], help="classify the algebra i^2 = p + q i")
    p.add_argument("--p", type=float)
    p.add_argument("--q", type=float)
    p = sub.add_parser("verify", parents=[common], help="equivalence check against the classical map")
    p.add_argument("--kind", choices=KINDS)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--max-iter", type=int)
    return parser


def merge_config(ns: argparse.Namespace) -> dict:
    opts = {}
    if ns.config:
        try:
            with open(ns.config) as fh:
                opts = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {ns.config}: {exc}") from None
        if not isinstance(opts, dict):
            raise UsageError("config file must hold a JSON object")
        cmd = opts.pop("command", None)
        if cmd is not None and cmd != ns.command:
            raise UsageError(f"config is for command {cmd!r}, not {ns.command!r}")
    for key, val in vars(ns).items():
        if val is not None and key != "config":
            opts[key] = val
    return opts


def _family(opts: dict, param: float | None = None) -> MapFamily:
    kind = opts.get("family", "classical")
    if kind not in PARAM_NAMES:
        raise UsageError(f"unknown family {kind!r}")
    if param is None and PARAM_NAMES[kind] is not None:
        param = opts.get(PARAM_NAMES[kind])
        if param is None:
            raise UsageError(f"family {kind!r} needs --{PARAM_NAMES[kind]}")
    return MapFamily.from_name(kind, param if PARAM_NAMES[kind] else None)


def _viewport(opts: dict) -> Viewport:
    box = _floats(opts.get("viewport", DEFAULT_VIEWPORT), 4, "--viewport")
    w, h = _size(opts.get("size", DEFAULT_SIZE))
    try:
        return Viewport(*box, w, h)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _escape_params(opts: dict, kind: str, default_iter: int) -> EscapeParams:
    fam = MapFamily.from_name(kind, 0.0)
    base = EscapeParams.default_for(fam, int(opts.get("max_iter", default_iter)))
    try:
        return EscapeParams(base.max_iter, float(opts.get("radius", base.escape_radius)),
                            float(opts.get("cycle_tol", 0.0)))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _sweep_spec(opts: dict, need_out: bool) -> SweepSpec:
    kind = opts.get("family", "classical")
    if kind not in PARAM_NAMES:
        raise UsageError(f"unknown family {kind!r}")
    if "range" in opts:
        lo, hi = _floats(opts["range"], 2, "--range")
    else:
        single = opts.get(PARAM_NAMES[kind]) if PARAM_NAMES[kind] else 0.0
        if single is None:
            raise UsageError("sweep needs --range lo,hi")
        lo = hi = float(single)
    frames = int(opts.get("frames", 1 if lo == hi else 11))
    out = opts.get("out")
    if need_out and not out:
        raise UsageError("sweep needs --out DIR")
    try:
        return SweepSpec(kind=kind, lo=lo, hi=hi, frames=frames, viewport=_viewport(opts),
                         params=_escape_params(opts, kind, PREVIEW_MAX_ITER),
                         fmt=opts.get("format", "png"), style=opts.get("style", "membership"),
                         outdir=Path(out) if out else None)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_render(opts: dict) -> int:
    fam = _family(opts)
    vp = _viewport(opts)
    params = _escape_params(opts, fam.kind, STILL_MAX_ITER)
    out = opts.get("out")
    if not out:
        raise UsageError("render needs --out FILE")
    fmt = opts.get("format") or Path(out).suffix.lstrip(".").lower() or "png"
    if fmt not in FORMATS:
        raise UsageError(f"cannot infer image format from {out!r}; pass --format")
    grid = compute_grid(fam, vp, params, threads=opts.get("threads"))
    raster = STYLES[opts.get("style", "membership")](grid)
    write_image(raster, out, fmt)
    log.info("%s: %d member pixels, area %.6g", fam, grid.member_pixels, grid.area_estimate)
    return 0


def cmd_sweep(opts: dict) -> int:
    spec = _sweep_spec(opts, need_out=True)
    manifest = generate_frames(spec, threads=opts.get("threads"))
    print(f"wrote {len(manifest['files'])} frames to {spec.outdir}")
    return 0


def cmd_profile(opts: dict) -> int:
    spec = _sweep_spec(opts, need_out=False)
    profile = transition_profile(spec, threads=opts.get("threads"))
    text = profile.to_csv()
    if spec.outdir is not None:
        Path(spec.outdir).write_text(text)
    else:
        sys.stdout.write(text)
    threshold = opts.get("threshold")
    if threshold is not None and len(profile.rows) >= 2:
        jumps = detect_discontinuity(profile, float(threshold))
        print(json.dumps({"threshold": threshold, "discontinuities": jumps}), file=sys.stderr)
    return 0


def cmd_classify(opts: dict) -> int:
    if opts.get("p") is None or opts.get("q") is None:
        raise UsageError("classify needs --p and --q")
    try:
        spec = algebra.AlgebraSpec(float(opts["p"]), float(opts["q"]))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(algebra.classify_algebra(spec).value)
    return 0


def cmd_verify(opts: dict) -> int:
    kinds = [opts["kind"]] if opts.get("kind") else list(KINDS)
    ok = True
    for kind in kinds:
        report = equivalence_check(kind, samples=int(opts.get("samples", 10_000)),
                                   seed=int(opts.get("seed", 0)), max_iter=int(opts.get("max_iter", 512)))
        print(json.dumps(report.to_json()))
        ok &= report.passed
    return 0 if ok else 1


HANDLERS = {
    "render": cmd_render,
    "sweep": cmd_sweep,
    "profile": cmd_profile,
    "classify": cmd_classify,
    "verify": cmd_verify,
}


_LIST_FLAGS = ("--viewport", "--range")


def _join_list_values(argv: list[str]) -> list[str]:
    """Turn ``--viewport -2.5,1.5,-2,2`` into ``--viewport=-2.5,...``; argparse would read it as a flag."""
    out = []
    it = iter(range(len(argv)))
    for i in it:
        tok = argv[i]
        if tok in _LIST_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-") and "," in argv[i + 1]:
            out.append(f"{tok}={argv[i + 1]}")
            next(it, None)
        else:
            out.append(tok)
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = _join_list_values(list(sys.argv[1:] if argv is None else argv))
    try:
        ns = parser.parse_args(argv)
        if ns.command is None:
            raise UsageError(parser.format_usage().strip())
        opts = merge_config(ns)
        logging.basicConfig(level=logging.INFO if opts.get("verbose") else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        return HANDLERS[ns.command](opts)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
