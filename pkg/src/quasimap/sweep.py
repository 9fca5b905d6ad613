"""Parameter sweeps: frame sequences and set-area transition profiles."""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .engine import EscapeGrid, EscapeParams, Viewport, compute_grid
from .maps import MapFamily
from .render import Raster, boundary_mask, encode_image, escape_colormap, extract_boundary, membership_raster

log = logging.getLogger(__name__)

CSV_COLUMNS = ("param", "member_pixels", "boundary_pixels", "area_estimate")
AREA_FLOOR = 1e-12

STYLES = {
    "membership": membership_raster,
    "escape": escape_colormap,
    "boundary": extract_boundary,
}


@dataclass(frozen=True)
class SweepSpec:
    kind: str
    lo: float
    hi: float
    frames: int
    viewport: Viewport
    params: EscapeParams
    fmt: str = "png"
    style: str = "membership"
    outdir: Path | None = None

    def __post_init__(self):
        MapFamily.from_name(self.kind, self.lo)  # validates the family name
        if self.frames < 1:
            raise ValueError("frame count must be >= 1")
        if self.frames == 1 and self.lo != self.hi:
            raise ValueError("a single-frame sweep needs lo == hi")
        if self.style not in STYLES:
            raise ValueError(f"unknown style {self.style!r}; expected one of {sorted(STYLES)}")

    def values(self) -> list[float]:
        """Uniformly spaced parameter values; decreasing ranges are allowed."""
        if self.frames == 1:
            return [float(self.lo)]
        step = (self.hi - self.lo) / (self.frames - 1)
        return [self.lo + k * step for k in range(self.frames)]

    def families(self) -> list[MapFamily]:
        return [MapFamily.from_name(self.kind, v) for v in self.values()]


@dataclass(frozen=True)
class ProfileRow:
    param: float
    member_pixels: int
    boundary_pixels: int
    area_estimate: float


@dataclass
class TransitionProfile:
    rows: list[ProfileRow] = field(default_factory=list)

    @property
    def params(self) -> list[float]:
        return [r.param for r in self.rows]

    @property
    def areas(self) -> list[float]:
        return [r.area_estimate for r in self.rows]

    def relative_changes(self) -> list[float]:
        a = self.areas
        return [abs(a[k + 1] - a[k]) / max(a[k], AREA_FLOOR) for k in range(len(a) - 1)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow([repr(r.param), r.member_pixels, r.boundary_pixels, repr(r.area_estimate)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> TransitionProfile:
        reader = csv.DictReader(io.StringIO(text))
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ValueError(f"unexpected metrics header {reader.fieldnames}")
        return cls([ProfileRow(float(d["param"]), int(d["member_pixels"]), int(d["boundary_pixels"]),
                               float(d["area_estimate"])) for d in reader])


def profile_row(param: float, grid: EscapeGrid) -> ProfileRow:
    members = grid.members
    n_members = int(np.count_nonzero(members))
    return ProfileRow(
        param=float(param),
        member_pixels=n_members,
        boundary_pixels=int(np.count_nonzero(boundary_mask(members))),
        area_estimate=n_members * grid.viewport.pixel_area,
    )


def render_frame(family: MapFamily, spec: SweepSpec, threads: int | None = None) -> tuple[EscapeGrid, Raster]:
    grid = compute_grid(family, spec.viewport, spec.params, threads=threads)
    return grid, STYLES[spec.style](grid)


def transition_profile(spec: SweepSpec, threads: int | None = None) -> TransitionProfile:
    rows = []
    for fam in spec.families():
        grid = compute_grid(fam, spec.viewport, spec.params, threads=threads)
        rows.append(profile_row(fam.param, grid))
    return TransitionProfile(rows)


def detect_discontinuity(profile: TransitionProfile, threshold: float) -> list[float]:
    """Parameter values ``p[k+1]`` where the area jumps by more than ``threshold`` (relative)."""
    if threshold <= 0:
        raise ValueError("threshold must be > 0")
    if len(profile.rows) < 2:
        raise ValueError("need at least two profile rows to look for a discontinuity")
    params = profile.params
    return [params[k + 1] for k, rel in enumerate(profile.relative_changes()) if rel > threshold]


def frame_name(k: int, fmt: str) -> str:
    return f"frame_{k:04d}.{fmt}"


def _manifest(spec: SweepSpec, values: list[float], files: list[str], complete: bool) -> dict:
    return {
        "family": spec.kind,
        "params": values,
        "files": files,
        "viewport": spec.viewport.to_json(),
        "escape_params": spec.params.to_json(),
        "format": spec.fmt,
        "style": spec.style,
        "complete": complete,
    }


def generate_frames(spec: SweepSpec, threads: int | None = None) -> dict:
    """Write frames, ``manifest.json`` and ``metrics.csv`` into ``spec.outdir``.

    On an I/O error the manifest and metrics are still written for the frames
    completed so far (with ``"complete": false``) before the error propagates.
    """
    if spec.outdir is None:
        raise ValueError("sweep spec has no output directory")
    outdir = Path(spec.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    done_values: list[float] = []
    files: list[str] = []
    profile = TransitionProfile()
    complete = False
    try:
        for k, fam in enumerate(spec.families()):
            grid, raster = render_frame(fam, spec, threads=threads)
            name = frame_name(k, spec.fmt)
            (outdir / name).write_bytes(encode_image(raster, spec.fmt))
            log.info("frame %d/%d %s -> %s", k + 1, spec.frames, fam, name)
            done_values.append(fam.param)
            files.append(name)
            profile.rows.append(profile_row(fam.param, grid))
        complete = True
    finally:
        manifest = _manifest(spec, done_values, files, complete)
        try:
            (outdir / "metrics.csv").write_text(profile.to_csv())
            (outdir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
        except OSError:
            if complete:
                raise
            log.error("could not write partial manifest to %s", outdir)
    return manifest
