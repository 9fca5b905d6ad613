"""Grayscale rasters from escape grids, and PGM/PNG encoding."""

from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .engine import MEMBER, EscapeGrid

FORMATS = ("pgm", "png")


@dataclass(frozen=True, eq=False)
class Raster:
    pixels: np.ndarray  # uint8, shape (height, width)

    def __post_init__(self):
        if self.pixels.ndim != 2 or self.pixels.dtype != np.uint8:
            raise ValueError("raster pixels must be a 2-d uint8 array")
        if self.pixels.size == 0:
            raise ValueError("raster must have at least one pixel")

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def __eq__(self, other):
        return isinstance(other, Raster) and np.array_equal(self.pixels, other.pixels)


def membership_raster(grid: EscapeGrid) -> Raster:
    """Members black (0), everything else white (255)."""
    return Raster(np.where(grid.cells == MEMBER, 0, 255).astype(np.uint8))


def escape_colormap(grid: EscapeGrid) -> Raster:
    """Members 0; escaped cells 55..255 increasing with the escape step."""
    cells = grid.cells.astype(np.int64)
    n_max = grid.params.max_iter
    if n_max == 1:
        shade = np.full(cells.shape, 255, dtype=np.int64)
    else:
        shade = 55 + (200 * (cells - 1)) // (n_max - 1)
    shade = np.clip(shade, 55, 255)
    return Raster(np.where(cells == MEMBER, 0, shade).astype(np.uint8))


def boundary_mask(members: np.ndarray) -> np.ndarray:
    """Members with at least one escaped 4-neighbour inside the image."""
    escaped = ~members
    near = np.zeros_like(members)
    near[1:, :] |= escaped[:-1, :]
    near[:-1, :] |= escaped[1:, :]
    near[:, 1:] |= escaped[:, :-1]
    near[:, :-1] |= escaped[:, 1:]
    return members & near


def extract_boundary(grid: EscapeGrid) -> Raster:
    return Raster(np.where(boundary_mask(grid.members), 255, 0).astype(np.uint8))


def encode_pgm(raster: Raster) -> bytes:
    header = f"P5\n{raster.width} {raster.height}\n255\n".encode("ascii")
    return header + np.ascontiguousarray(raster.pixels).tobytes()


def _png_chunk(tag: bytes, data: bytes) -> bytes:
    body = tag + data
    return struct.pack(">I", len(data)) + body + struct.pack(">I", zlib.crc32(body) & 0xFFFFFFFF)


def encode_png(raster: Raster) -> bytes:
    """8-bit grayscale, non-interlaced, filter type 0 on every scanline."""
    h, w = raster.pixels.shape
    ihdr = struct.pack(">IIBBBBB", w, h, 8, 0, 0, 0, 0)
    scanlines = np.zeros((h, w + 1), dtype=np.uint8)
    scanlines[:, 1:] = raster.pixels
    idat = zlib.compress(scanlines.tobytes(), 9)
    return (b"\x89PNG\r\n\x1a\n" + _png_chunk(b"IHDR", ihdr) + _png_chunk(b"IDAT", idat)
            + _png_chunk(b"IEND", b""))


def encode_image(raster: Raster, fmt: str) -> bytes:
    fmt = fmt.lower()
    if fmt == "pgm":
        return encode_pgm(raster)
    if fmt == "png":
        return encode_png(raster)
    raise ValueError(f"unsupported image format {fmt!r}; expected one of {FORMATS}")


def decode_pgm(data: bytes) -> Raster:
    """Inverse of :func:`encode_pgm` (binary P5, maxval 255, single-space header)."""
    parts = data.split(b"\n", 3)
    if len(parts) != 4 or parts[0] != b"P5" or parts[2] != b"255":
        raise ValueError("not a P5/255 PGM produced by encode_pgm")
    w, h = (int(v) for v in parts[1].split())
    body = parts[3]
    if len(body) != w * h:
        raise ValueError(f"PGM body has {len(body)} bytes, expected {w * h}")
    return Raster(np.frombuffer(body, dtype=np.uint8).reshape(h, w).copy())


def write_image(raster: Raster, path: str | Path, fmt: str | None = None) -> Path:
    path = Path(path)
    if fmt is None:
        fmt = path.suffix.lstrip(".").lower() or "pgm"
    data = encode_image(raster, fmt)
    path.write_bytes(data)
    return path
