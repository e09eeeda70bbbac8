import cmath

import numpy as np
import pytest

from misiurewicz.dynamics import escape_time, escape_time_anti
from misiurewicz.errors import EmptySet, RangeExceeded
from misiurewicz.render import (MembershipGrid, PlanarSet, RescaledWindow, Window,
                                classify_julia, classify_mandelbrot, classify_parameters,
                                classify_param, classify_tricorn, extract_boundary, pgm_bytes,
                                rescaled_julia_window, rescaled_param_window, truncate,
                                write_pgm, write_png)
from misiurewicz.tricorn import IDENTITY, RealLinearMap

OMEGA = cmath.exp(2j * cmath.pi / 3)


def brute(window, fn):
    pts = window.points()
    return np.array([[fn(z) for z in row] for row in pts])


def test_window_pixel_geometry():
    w = Window(1 + 1j, 4.0, 4)
    pts = w.points()
    # top-left pixel is (i=0, j=res-1)
    assert pts[0, 0] == 1 + 1j + 4 * (0.5 / 4 - 0.5) + 1j * 4 * (3.5 / 4 - 0.5)
    assert pts[-1, -1] == 1 + 1j + 4 * (3.5 / 4 - 0.5) + 1j * 4 * (0.5 / 4 - 0.5)
    assert w.pixel_pitch == 1.0
    with pytest.raises(ValueError):
        Window(0, 0, 4)
    with pytest.raises(ValueError):
        Window(0, 1, 0)


def test_julia_c0_is_unit_disk():
    w = Window(0, 4.0, 64)
    grid = classify_julia(0, w)
    assert np.array_equal(grid.bits, np.abs(w.points()) <= 1)
    assert np.array_equal(grid.bits, brute(w, lambda z: escape_time(0, z) is None))


def test_julia_c0_point_symmetry():
    bits = classify_julia(0, Window(0, 3.0, 256), budget=300).bits
    assert np.array_equal(bits, bits[::-1, ::-1])


def test_julia_matches_scalar_escape_time():
    w = Window(-0.1 + 0.2j, 3.2, 48)
    for c in (-0.8 + 0.156j, 0.285 + 0.01j):
        assert np.array_equal(classify_julia(c, w, 200).bits,
                              brute(w, lambda z: escape_time(c, z, 200) is None))
        assert np.array_equal(classify_julia(c, w, 200, anti=True).bits,
                              brute(w, lambda z: escape_time_anti(c, z, 200) is None))


@pytest.mark.parametrize("c", [-1.4303576324513074, -0.75, -1.0, 0.2, -2.0])
def test_real_c_dynamical_grids_coincide(c):
    w = Window(0, 4.0, 256)
    a = classify_julia(c, w, 500).bits
    b = classify_julia(c, w, 500, anti=True).bits
    assert np.array_equal(a, b)


def test_mandelbrot_conjugation_symmetry():
    bits = classify_mandelbrot(Window(-0.75, 3.0, 256), budget=300).bits
    assert np.array_equal(bits, bits[::-1, :])
    tb = classify_tricorn(Window(-0.25, 3.5, 256), budget=300).bits
    assert np.array_equal(tb, tb[::-1, :])


def test_mandelbrot_matches_scalar_escape_time():
    w = Window(-0.6 + 0.3j, 2.5, 40)
    assert np.array_equal(classify_mandelbrot(w, 150).bits,
                          brute(w, lambda c: escape_time(c, c, 150) is None))
    assert np.array_equal(classify_tricorn(w, 150).bits,
                          brute(w, lambda c: escape_time_anti(c, c, 150) is None))


def test_mandelbrot_single_pixels():
    assert classify_mandelbrot(Window(-2, 1e-3, 1)).bits[0, 0]
    assert not classify_mandelbrot(Window(0.3, 1e-3, 1)).bits[0, 0]


def test_tricorn_rotation_on_samples():
    rng = np.random.default_rng(11)
    c = 2 * np.sqrt(rng.uniform(0, 1, 2000)) * np.exp(2j * np.pi * rng.uniform(0, 1, 2000))
    a = classify_parameters(c, anti=True)
    assert np.array_equal(a, classify_parameters(OMEGA * c, anti=True))
    assert np.array_equal(a, classify_parameters(OMEGA ** 2 * c, anti=True))
    assert 0 < a.sum() < a.size


def test_real_slice_tricorn_equals_mandelbrot():
    x = np.linspace(-2.5, 0.5, 256).astype(complex)
    t = classify_parameters(x, anti=True)
    m = classify_parameters(x)
    assert np.array_equal(t, m)
    assert np.array_equal(t, (x.real >= -2) & (x.real <= 0.25))


def test_resolution_consistency():
    win_hi = Window(-0.75, 3.0, 1024)
    win_lo = Window(-0.75, 3.0, 512)
    hi = classify_mandelbrot(win_hi, 256).bits
    lo = classify_mandelbrot(win_lo, 256).bits
    votes = hi[0::2, 0::2].astype(int) + hi[1::2, 0::2] + hi[0::2, 1::2] + hi[1::2, 1::2]
    assert np.mean((votes >= 2) == lo) >= 0.99


def test_cover_mode_contains_plain_and_sees_dendrites():
    w = Window(-0.75, 3.0, 128)
    plain = classify_mandelbrot(w, 300).bits
    cover = classify_mandelbrot(w, 300, cover=True).bits
    assert np.all(cover[plain])
    jw = Window(0, 4.0, 256)
    assert classify_julia(1j, jw).bits.sum() == 0
    assert classify_julia(1j, jw, cover=True).bits.sum() > 500


def test_extract_boundary_degenerate_grids():
    w = Window(0, 1.0, 8)
    full = MembershipGrid(w, np.ones((8, 8), bool), 10)
    assert len(extract_boundary(full)) == 0
    assert len(extract_boundary(full, frame=True)) == 4 * 8 - 4
    checker = (np.indices((8, 8)).sum(axis=0) % 2 == 0)
    pts = extract_boundary(MembershipGrid(w, checker, 10)).points
    assert len(pts) == checker.sum()
    with pytest.raises(EmptySet):
        extract_boundary(MembershipGrid(w, np.zeros((8, 8), bool), 10))


def test_extract_boundary_of_unit_disk():
    w = Window(0, 4.0, 256)
    grid = classify_julia(0, w)
    s = extract_boundary(grid)
    assert np.max(np.abs(np.abs(s.points) - 1)) <= w.pixel_pitch
    assert s.scale_hint == w.pixel_pitch
    # each point is a member with a non-member 4-neighbour
    centers = w.pixel_centers()
    lookup = {complex(z): (r, c) for (r, c), z in np.ndenumerate(centers)}
    for z in s.points:
        r, c = lookup[complex(z)]
        assert grid.bits[r, c]
        nbrs = [grid.bits[r + dr, c + dc] for dr, dc in ((1, 0), (-1, 0), (0, 1), (0, -1))]
        assert not all(nbrs)


def test_truncate_examples():
    empty = PlanarSet(np.zeros(0, complex), 0.1)
    t = truncate(empty, 2.0, 16)
    assert len(t) == 16
    assert np.allclose(np.abs(t.points), 2.0)
    inside = PlanarSet(np.array([0.5, 1j, -1 - 1j]), 0.1)
    t = truncate(inside, 2.0, 8)
    assert len(t) == 11 and np.array_equal(t.points[:3], inside.points)
    far = PlanarSet(np.array([4.0 + 0j, 0.1]), 0.1)
    t = truncate(far, 2.0, 4)
    assert 4.0 not in t.points and len(t) == 5
    with pytest.raises(ValueError):
        truncate(inside, 0, 4)


def test_rescaled_window_geometry(basilica_tip, dendrite_i):
    w = rescaled_julia_window(basilica_tip, 0, r=1.0, resolution=5)
    assert w.rho == -0.25
    assert w.w_jacobian == (-0.25, 0)
    assert w.to_plane(0) == -2
    assert w.points()[2, 2] == -2  # odd resolution: the centre pixel is w = 0
    for k in (0, 3, 7):
        jw = rescaled_julia_window(dendrite_i, k, 2.0, 512)
        pw = rescaled_param_window(dendrite_i, k, 2.0, 512)
        assert jw.to_plane(0) == dendrite_i.c0 == pw.to_plane(0)
        assert abs(jw.w_jacobian[0]) * jw.pixel_pitch == pytest.approx(
            abs(dendrite_i.A0 * dendrite_i.lambda0 ** k) ** -1 * 4 / 512, rel=1e-14)
        assert pw.w_jacobian[0] == dendrite_i.Q * jw.rho
    with pytest.raises(RangeExceeded):
        rescaled_julia_window(basilica_tip, 600)


def test_rescaled_window_round_trip(tricorn_jt1):
    pw = rescaled_param_window(tricorn_jt1, 2, 2.0, 8)
    w = pw.pixel_centers()
    assert np.max(np.abs(pw.to_w(pw.to_plane(w)) - w)) < 1e-9


def test_conformal_H_matches_quadratic_window(dendrite_i):
    quad = rescaled_param_window(dendrite_i, 3, 2.0, 16)
    as_real_linear = RescaledWindow(quad.c0, quad.rho, RealLinearMap(dendrite_i.Q, 0j), 2.0, 16)
    assert np.array_equal(quad.points(), as_real_linear.points())
    assert rescaled_julia_window(dendrite_i, 3).H == IDENTITY


def test_param_panels_contain_c0(dendrite_i, tricorn_jt1):
    for d in (dendrite_i, tricorn_jt1):
        for k in (0, 2, 4):
            g = classify_param(d, rescaled_param_window(d, k, 2.0, 65), cover=True)
            assert g.bits[32, 32]


def test_pgm_format(tmp_path):
    w = Window(0, 1.0, 2)
    grid = MembershipGrid(w, np.array([[True, False], [False, True]]), 10)
    assert pgm_bytes(grid) == b"P5\n2 2\n255\n\x00\xff\xff\x00"
    p = tmp_path / "a.pgm"
    write_pgm(grid, p)
    first = p.read_bytes()
    write_pgm(grid, p)
    assert p.read_bytes() == first
    big = classify_julia(0, Window(0, 4.0, 512), 50)
    write_pgm(big, p)
    assert p.stat().st_size == len(b"P5\n512 512\n255\n") + 512 * 512


def test_pgm_of_point_set_and_png(tmp_path):
    w = Window(0, 4.0, 4)
    s = PlanarSet(np.array([-1.5 + 1.5j, 10.0]), 1.0)
    data = pgm_bytes(s, w)
    img = np.frombuffer(data[len(b"P5\n4 4\n255\n"):], dtype=np.uint8).reshape(4, 4)
    assert img[0, 0] == 0 and img.sum() == 255 * 15
    with pytest.raises(ValueError):
        pgm_bytes(s)
    from PIL import Image
    grid = classify_julia(0, Window(0, 4.0, 32), 50)
    write_png(grid, tmp_path / "g.png")
    back = np.array(Image.open(tmp_path / "g.png"))
    assert np.array_equal(back == 0, grid.bits)
