"""Escape-time membership of the zero orbit, pointwise and on pixel grids.

Escape results are stored as integers: ``0`` (:data:`MEMBER`) means the orbit
stayed within the escape radius for the whole budget, ``n >= 1`` means the
orbit first left the disk ``|s| > R`` (or became non-finite) at step ``n``.

Grids are split into horizontal bands that are filled by a numba kernel
released from the GIL, so a plain thread pool gives real parallelism.  Every
cell depends only on its own parameter point, which makes the output
independent of the number of workers.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numba
import numpy as np

from .maps import MapFamily, PlanePoint, step_xy

MEMBER = 0

STILL_MAX_ITER = 1000
PREVIEW_MAX_ITER = 256
THREADS_ENV = "QUASIMAP_THREADS"


@dataclass(frozen=True)
class EscapeParams:
    max_iter: int = STILL_MAX_ITER
    escape_radius: float = 2.0
    # > 0 enables the periodicity shortcut in grid kernels
    cycle_tol: float = 0.0

    def __post_init__(self):
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise ValueError(f"max_iter must be a positive integer, got {self.max_iter}")
        if not (self.escape_radius > 0 and math.isfinite(self.escape_radius)):
            raise ValueError(f"escape_radius must be positive and finite, got {self.escape_radius}")
        if self.cycle_tol < 0:
            raise ValueError("cycle_tol must be >= 0")

    @classmethod
    def default_for(cls, family: MapFamily, max_iter: int = STILL_MAX_ITER) -> EscapeParams:
        """R=2 suffices for the classical map; perturbed families get R=4."""
        return cls(max_iter=max_iter, escape_radius=2.0 if family.kind == "classical" else 4.0)

    def to_json(self) -> dict:
        return {"max_iter": self.max_iter, "escape_radius": self.escape_radius, "cycle_tol": self.cycle_tol}


@dataclass(frozen=True)
class Viewport:
    """Rectangle of the parameter plane sampled at pixel centres.

    Row 0 is the top of the image (``c2`` near ``max_c2``).
    """

    min_c1: float
    max_c1: float
    min_c2: float
    max_c2: float
    width_px: int
    height_px: int

    def __post_init__(self):
        if not (self.min_c1 < self.max_c1 and self.min_c2 < self.max_c2):
            raise ValueError(f"degenerate viewport {self}")
        if self.width_px < 1 or self.height_px < 1:
            raise ValueError("viewport pixel counts must be >= 1")

    @classmethod
    def centered(cls, c: tuple[float, float], half_width: float = 0.5, half_height: float | None = None,
                 width_px: int = 1, height_px: int = 1) -> Viewport:
        hh = half_width if half_height is None else half_height
        return cls(c[0] - half_width, c[0] + half_width, c[1] - hh, c[1] + hh, width_px, height_px)

    @property
    def pixel_area(self) -> float:
        return ((self.max_c1 - self.min_c1) / self.width_px) * ((self.max_c2 - self.min_c2) / self.height_px)

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        """Pixel-centre coordinates ``(c1 per column, c2 per row)``.

        Offsets are taken from the viewport centre in half-integer pixel
        units, so a viewport symmetric about zero samples exactly symmetric
        points.
        """
        return (_centres(self.min_c1, self.max_c1, self.width_px, ascending=True),
                _centres(self.min_c2, self.max_c2, self.height_px, ascending=False))

    def to_json(self) -> dict:
        return {"min_c1": self.min_c1, "max_c1": self.max_c1, "min_c2": self.min_c2,
                "max_c2": self.max_c2, "width_px": self.width_px, "height_px": self.height_px}


def _centres(lo: float, hi: float, n: int, ascending: bool) -> np.ndarray:
    mid = (lo + hi) / 2.0
    delta = (hi - lo) / n
    k = np.arange(n, dtype=np.float64) - (n - 1) / 2.0
    if not ascending:
        k = -k
    return mid + k * delta


@dataclass(frozen=True, eq=False)
class EscapeGrid:
    viewport: Viewport
    cells: np.ndarray = field(repr=False)  # int32, shape (height_px, width_px)
    family: MapFamily
    params: EscapeParams

    def __post_init__(self):
        if self.cells.shape != (self.viewport.height_px, self.viewport.width_px):
            raise ValueError(f"cells shape {self.cells.shape} does not match viewport")
        self.cells.setflags(write=False)

    @property
    def members(self) -> np.ndarray:
        return self.cells == MEMBER

    @property
    def member_pixels(self) -> int:
        return int(np.count_nonzero(self.cells == MEMBER))

    @property
    def area_estimate(self) -> float:
        return self.member_pixels * self.viewport.pixel_area


@numba.njit(nogil=True, cache=True)
def _escape_point(kind, param, c1, c2, max_iter, r2, cycle_tol):
    x = 0.0
    y = 0.0
    sx = 0.0
    sy = 0.0
    lam = 0
    power = 1
    for n in range(1, max_iter + 1):
        x, y = step_xy(kind, param, x, y, c1, c2)
        # written so that NaN also counts as escaped
        if not (x * x + y * y <= r2):
            return n
        if cycle_tol > 0.0:
            lam += 1
            if abs(x - sx) < cycle_tol and abs(y - sy) < cycle_tol:
                return 0
            if lam == power:
                sx = x
                sy = y
                power *= 2
                lam = 0
    return 0


@numba.njit(nogil=True, cache=True)
def _fill_band(kind, param, c1s, c2s, max_iter, r2, cycle_tol, out):
    for i in range(c2s.shape[0]):
        c2 = c2s[i]
        for j in range(c1s.shape[0]):
            out[i, j] = _escape_point(kind, param, c1s[j], c2, max_iter, r2, cycle_tol)


@numba.njit(nogil=True, cache=True)
def _fill_points(kind, param, c1s, c2s, max_iter, r2, cycle_tol, out):
    for k in range(c1s.shape[0]):
        out[k] = _escape_point(kind, param, c1s[k], c2s[k], max_iter, r2, cycle_tol)


@numba.njit(nogil=True, cache=True)
def _max_norm2(kind, param, c1, c2, n_steps):
    x = 0.0
    y = 0.0
    best = 0.0
    for _ in range(n_steps):
        x, y = step_xy(kind, param, x, y, c1, c2)
        m = x * x + y * y
        if not (m <= 1e300):
            return np.inf
        if m > best:
            best = m
    return best


def _r2(params: EscapeParams) -> float:
    r = float(params.escape_radius)
    return r * r  # may be inf for absurd radii; the kernels then catch overflow as NaN


def escape_time(family: MapFamily, c: tuple[float, float], params: EscapeParams) -> int:
    """Escape step of the zero orbit, or :data:`MEMBER` (0) if it stays bounded."""
    return int(_escape_point(family.code, family.param, float(c[0]), float(c[1]),
                             params.max_iter, _r2(params), 0.0))


def escape_times(family: MapFamily, c1s, c2s, params: EscapeParams) -> np.ndarray:
    """Vectorised :func:`escape_time` over matching arrays of parameter points."""
    c1s = np.ascontiguousarray(c1s, dtype=np.float64)
    c2s = np.ascontiguousarray(c2s, dtype=np.float64)
    if c1s.shape != c2s.shape or c1s.ndim != 1:
        raise ValueError("c1s and c2s must be 1-d arrays of equal length")
    out = np.empty(c1s.shape[0], dtype=np.int32)
    _fill_points(family.code, family.param, c1s, c2s, params.max_iter, _r2(params),
                 float(params.cycle_tol), out)
    return out


def max_orbit_norm(family: MapFamily, c: tuple[float, float], n_steps: int) -> float:
    """Largest Euclidean norm reached by the zero orbit in ``n_steps`` steps (inf if it blows up)."""
    return math.sqrt(_max_norm2(family.code, family.param, float(c[0]), float(c[1]), n_steps))


def orbit(family: MapFamily, c: tuple[float, float], n_steps: int) -> tuple[list[PlanePoint], bool]:
    """Zero orbit ``[s0, s1, ..., s_n]``.

    Returns ``(points, truncated)``; iteration stops at the first non-finite
    state, which is not included, and ``truncated`` is then True.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    pts = [PlanePoint(0.0, 0.0)]
    x = y = 0.0
    c1, c2 = float(c[0]), float(c[1])
    for _ in range(n_steps):
        x, y = step_xy(family.code, family.param, x, y, c1, c2)
        if not (math.isfinite(x) and math.isfinite(y)):
            return pts, True
        pts.append(PlanePoint(x, y))
    return pts, False


def detect_cycle(family: MapFamily, c: tuple[float, float], params: EscapeParams,
                 tol: float = 1e-10) -> int | None:
    """Period of the zero orbit if it returns within ``tol`` (max-norm) of a saved point.

    Uses Brent's doubling scheme for the saved point.  Returns None if the
    orbit escapes or no return is seen within ``params.max_iter`` steps.
    """
    if tol <= 0:
        raise ValueError("tol must be > 0")
    r2 = _r2(params)
    c1, c2 = float(c[0]), float(c[1])
    x = y = sx = sy = 0.0
    lam, power = 0, 1
    for _ in range(params.max_iter):
        x, y = step_xy(family.code, family.param, x, y, c1, c2)
        if not (x * x + y * y <= r2):
            return None
        lam += 1
        if abs(x - sx) < tol and abs(y - sy) < tol:
            return lam
        if lam == power:
            sx, sy = x, y
            power *= 2
            lam = 0
    return None


def resolve_threads(threads: int | None = None) -> int:
    """0 or None means: ``$QUASIMAP_THREADS`` if set, else the CPU count."""
    if threads is None or threads == 0:
        env = os.environ.get(THREADS_ENV, "").strip()
        threads = int(env) if env else 0
    if threads < 0:
        raise ValueError("threads must be >= 0")
    if threads == 0:
        threads = os.cpu_count() or 1
    return threads


def compute_grid(family: MapFamily, viewport: Viewport, params: EscapeParams,
                 threads: int | None = None, band_rows: int | None = None) -> EscapeGrid:
    """Escape results for every pixel centre of ``viewport``."""
    n_threads = resolve_threads(threads)
    c1s, c2s = viewport.axes()
    h, w = viewport.height_px, viewport.width_px
    try:
        cells = np.empty((h, w), dtype=np.int32)
    except MemoryError as exc:
        raise MemoryError(f"cannot allocate {h}x{w} escape grid") from exc
    if band_rows is None:
        # several bands per worker to balance the uneven per-row cost
        band_rows = max(1, h // (8 * n_threads)) if n_threads > 1 else h
    args = (family.code, family.param)
    tail = (params.max_iter, _r2(params), float(params.cycle_tol))
    bands = [(r, min(r + band_rows, h)) for r in range(0, h, band_rows)]

    def run(band):
        r0, r1 = band
        _fill_band(*args, c1s, c2s[r0:r1], *tail, cells[r0:r1])

    if n_threads == 1:
        for band in bands:
            run(band)
    else:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            list(pool.map(run, bands))
    return EscapeGrid(viewport, cells, family, params)
