import io

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from PIL import Image

from quasimap.engine import MEMBER, EscapeGrid, EscapeParams, Viewport
from quasimap.maps import MapFamily
from quasimap.render import (Raster, decode_pgm, encode_image, escape_colormap, extract_boundary,
                             membership_raster, write_image)

M = MEMBER


def make_grid(cells, max_iter=1000):
    cells = np.asarray(cells, dtype=np.int32)
    h, w = cells.shape
    return EscapeGrid(Viewport(0, 1, 0, 1, w, h), cells, MapFamily.classical(), EscapeParams(max_iter, 2.0))


rasters = arrays(np.uint8, st.tuples(st.integers(1, 12), st.integers(1, 12))).map(Raster)
cell_grids = arrays(np.int32, st.tuples(st.integers(1, 10), st.integers(1, 10)), elements=st.integers(0, 50))


def test_membership_raster():
    assert (membership_raster(make_grid(np.zeros((3, 4)))).pixels == 0).all()
    assert (membership_raster(make_grid(np.full((3, 4), 7))).pixels == 255).all()
    assert membership_raster(make_grid([[M, 5]])).pixels.tolist() == [[0, 255]]


def test_escape_colormap_ends():
    px = escape_colormap(make_grid([[1, 1000, M, 500]])).pixels[0].tolist()
    assert px[:3] == [55, 255, 0]
    assert px[3] == 55 + (200 * 499) // 999


def test_escape_colormap_single_iteration_budget():
    assert escape_colormap(make_grid([[1, M]], max_iter=1)).pixels.tolist() == [[255, 0]]


@given(cell_grids)
def test_colormap_monotone(cells):
    grid = make_grid(cells, max_iter=50)
    px = escape_colormap(grid).pixels.ravel().astype(int)
    n = grid.cells.ravel()
    order = np.argsort(n, kind="stable")
    esc = order[n[order] != M]
    assert np.all(np.diff(px[esc]) >= 0)
    assert np.all(px[n == M] == 0) and np.all(px[n != M] >= 55)


def test_boundary_examples():
    assert (extract_boundary(make_grid(np.zeros((4, 4)))).pixels == 0).all()
    cells = np.full((3, 3), 9)
    cells[1, 1] = M
    expected = np.zeros((3, 3), dtype=np.uint8)
    expected[1, 1] = 255
    np.testing.assert_array_equal(extract_boundary(make_grid(cells)).pixels, expected)
    assert extract_boundary(make_grid([[M, M, 4, 4]])).pixels.tolist() == [[0, 255, 0, 0]]


def boundary_brute(members):
    h, w = members.shape
    out = np.zeros((h, w), dtype=np.uint8)
    for i in range(h):
        for j in range(w):
            if not members[i, j]:
                continue
            for di, dj in ((-1, 0), (1, 0), (0, -1), (0, 1)):
                a, b = i + di, j + dj
                if 0 <= a < h and 0 <= b < w and not members[a, b]:
                    out[i, j] = 255
    return out


@given(cell_grids)
def test_boundary_matches_brute_force_and_is_subset(cells):
    grid = make_grid(cells)
    bnd = extract_boundary(grid).pixels
    np.testing.assert_array_equal(bnd, boundary_brute(grid.members))
    assert np.all(membership_raster(grid).pixels[bnd == 255] == 0)


def test_pgm_exact_bytes():
    assert encode_image(Raster(np.array([[0]], np.uint8)), "pgm") == b"P5\n1 1\n255\n\x00"
    assert encode_image(Raster(np.array([[0, 255]], np.uint8)), "pgm") == b"P5\n2 1\n255\n\x00\xff"


@given(rasters)
def test_pgm_round_trip(r):
    assert decode_pgm(encode_image(r, "pgm")) == r
    pil = np.asarray(Image.open(io.BytesIO(encode_image(r, "pgm"))))
    np.testing.assert_array_equal(pil, r.pixels)


@given(rasters)
def test_png_round_trip_with_independent_decoder(r):
    img = Image.open(io.BytesIO(encode_image(r, "png")))
    assert img.mode == "L"
    np.testing.assert_array_equal(np.asarray(img), r.pixels)


def test_png_deterministic():
    r = Raster(np.arange(60, dtype=np.uint8).reshape(6, 10))
    assert encode_image(r, "png") == encode_image(r, "png")


def test_bad_format_and_raster():
    with pytest.raises(ValueError):
        encode_image(Raster(np.zeros((1, 1), np.uint8)), "gif")
    with pytest.raises(ValueError):
        Raster(np.zeros((2, 2), np.int32))


def test_write_image_infers_format(tmp_path):
    r = Raster(np.array([[1, 2], [3, 4]], np.uint8))
    path = write_image(r, tmp_path / "x.pgm")
    assert path.read_bytes() == b"P5\n2 2\n255\n\x01\x02\x03\x04"
