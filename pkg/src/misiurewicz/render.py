"""Membership grids for K_c, M and the tricorn, Julia boundaries, truncated
sets, and PGM/PNG output.

Two classification modes exist. Plain mode marks a pixel when the orbit of
its centre stays within the escape radius for the whole budget. Cover mode
additionally marks escaping pixels whose distance estimate says the set
passes within the pixel's circumradius. Cover mode is what makes sets with
empty interior (dendrites such as J_i, filaments of M) visible at all: in
plain mode essentially no pixel centre lands exactly on them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .dynamics import DEFAULT_BUDGET, ESCAPE_RADIUS
from .errors import EmptySet
from .rescale import rho_k
from .tricorn import IDENTITY, RealLinearMap, apply_H, apply_h

DEFAULT_RESOLUTION = 512
DEFAULT_R = 2.0
# escaped orbits are pushed this far out before the distance estimate is read
DE_RADIUS = 1e6
DE_EXTRA_STEPS = 64
COVER_FACTOR = math.sqrt(2) / 2


@dataclass(frozen=True)
class Window:
    """Axis-aligned square of the plane sampled at pixel centres.

    Pixel (i, j) sits at center + width*((i+0.5)/res - 0.5)
    + 1j*width*((j+0.5)/res - 0.5), j counting upward. Arrays are stored
    row-major from the top row down, so row index = res - 1 - j.
    """

    center: complex
    width: float
    resolution: int

    def __post_init__(self):
        if self.width <= 0:
            raise ValueError("window width must be positive")
        if self.resolution < 1:
            raise ValueError("resolution must be >= 1")

    @property
    def pixel_pitch(self) -> float:
        return self.width / self.resolution

    @property
    def w_jacobian(self):
        """(dz/dw, dz/dw-bar) of the map from grid coordinates to the plane."""
        return (1.0 + 0j, 0j)

    def pixel_centers(self) -> np.ndarray:
        t = ((np.arange(self.resolution) + 0.5) / self.resolution - 0.5) * self.width
        return complex(self.center) + t[None, :] + 1j * t[::-1, None]

    def points(self) -> np.ndarray:
        return self.pixel_centers()


@dataclass(frozen=True)
class RescaledWindow:
    """The w-plane square [-r, r]^2 pushed forward by w -> c0 + H(rho * w).

    Classification happens at the pushed-forward points; pixel geometry and
    extracted sets live in the w-plane. H is only real-linear in the tricorn
    case, so no single complex scale describes the image.
    """

    c0: complex
    rho: complex
    H: RealLinearMap
    r: float
    resolution: int

    @property
    def w_window(self) -> Window:
        return Window(0j, 2.0 * self.r, self.resolution)

    @property
    def pixel_pitch(self) -> float:
        return self.w_window.pixel_pitch

    @property
    def w_jacobian(self):
        """(dz/dw, dz/dw-bar) of w -> c0 + H(rho w)."""
        return (self.H.Q * self.rho, self.H.Qp * np.conj(self.rho))

    def pixel_centers(self) -> np.ndarray:
        return self.w_window.pixel_centers()

    def to_plane(self, w):
        return self.c0 + apply_H(self.H, self.rho * np.asarray(w))

    def to_w(self, z):
        return apply_h(self.H, np.asarray(z) - self.c0) / self.rho

    def points(self) -> np.ndarray:
        return self.to_plane(self.pixel_centers())


AnyWindow = Union[Window, RescaledWindow]


@dataclass(frozen=True)
class MembershipGrid:
    window: AnyWindow
    bits: np.ndarray
    budget: int
    cover: bool = False


@dataclass(frozen=True)
class PlanarSet:
    points: np.ndarray
    scale_hint: float

    def __len__(self) -> int:
        return len(self.points)


def _classify(z0: np.ndarray, c, budget: int, anti: bool, param: bool, cover: bool,
              cover_radius: float, radius: float, da0=None, db0=None,
              dc=(1.0, 0.0)) -> np.ndarray:
    """Vectorised escape iteration with active-set compaction.

    Returns a boolean array: bounded at budget, or (cover mode) within
    ``cover_radius`` of the set according to the distance estimate.
    Derivatives are taken with respect to the pixel coordinate w: da0, db0
    seed dz/dw and dz/dw-bar at the start, and in parameter mode
    dc = (dc/dw, dc/dw-bar) enters at every step.
    """
    shape = z0.shape
    z = z0.ravel().astype(complex)
    cc = np.broadcast_to(np.asarray(c, dtype=complex), shape).ravel().copy()
    n = z.size
    member = np.ones(n, dtype=bool)
    idx = np.arange(n)
    da = np.full(n, dc[0] if param else 1.0, dtype=complex) if da0 is None \
        else np.asarray(da0, complex).ravel().copy()
    db = np.full(n, dc[1] if param else 0.0, dtype=complex) if db0 is None \
        else np.asarray(db0, complex).ravel().copy()
    pa, pb = (dc if param else (0.0, 0.0))
    r2 = radius * radius

    def step(z, da, db, cc):
        if anti:
            zb = np.conj(z)
            if cover:
                da, db = 2 * zb * np.conj(db) + pa, 2 * zb * np.conj(da) + pb
            z = zb * zb + cc
        else:
            if cover:
                da, db = 2 * z * da + pa, 2 * z * db + pb
            z = z * z + cc
        return z, da, db

    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for it in range(budget + 1):
            if it:
                z, da, db = step(z, da, db, cc)
            esc = ~(z.real * z.real + z.imag * z.imag <= r2)  # non-finite escapes too
            if not esc.any():
                continue
            gone = idx[esc]
            if cover:
                ze, dae, dbe, ce = z[esc], da[esc], db[esc], cc[esc]
                for _ in range(DE_EXTRA_STEPS):
                    far = ~(np.abs(ze) <= DE_RADIUS)
                    if far.all():
                        break
                    zn, dan, dbn = step(ze, dae, dbe, ce)
                    ze = np.where(far, ze, zn)
                    dae = np.where(far, dae, dan)
                    dbe = np.where(far, dbe, dbn)
                az = np.abs(ze)
                est = 0.5 * az * np.log(az) / (np.abs(dae) + np.abs(dbe))
                # an overflowed derivative means the set is extremely close
                member[gone] = np.isfinite(az) & ~(est > cover_radius)
            else:
                member[gone] = False
            keep = ~esc
            idx, z, da, db, cc = idx[keep], z[keep], da[keep], db[keep], cc[keep]
            if idx.size == 0:
                break
    return member.reshape(shape)


def _grid(window: AnyWindow, z0, c, budget, anti, param, cover, radius) -> MembershipGrid:
    """Classify at window.points(); distance estimates are read in pixel units
    of the window's own grid."""
    p, q = window.w_jacobian
    if param:
        bits = _classify(z0, c, budget, anti, True, cover, COVER_FACTOR * window.pixel_pitch,
                         radius, dc=(p, q))
    else:
        bits = _classify(z0, c, budget, anti, False, cover, COVER_FACTOR * window.pixel_pitch,
                         radius, np.full(z0.shape, p, complex), np.full(z0.shape, q, complex))
    return MembershipGrid(window=window, bits=bits, budget=budget, cover=cover)


def classify_julia(c: complex, window: AnyWindow, budget: int = DEFAULT_BUDGET,
                   anti: bool = False, cover: bool = False,
                   radius: float = ESCAPE_RADIUS) -> MembershipGrid:
    """Filled Julia set of f_c (or g_c when ``anti``) sampled on a window."""
    return _grid(window, window.points(), complex(c), budget, anti, False, cover, radius)


def classify_mandelbrot(window: AnyWindow, budget: int = DEFAULT_BUDGET, cover: bool = False,
                        radius: float = ESCAPE_RADIUS) -> MembershipGrid:
    pts = window.points()
    return _grid(window, pts, pts, budget, False, True, cover, radius)


def classify_tricorn(window: AnyWindow, budget: int = DEFAULT_BUDGET, cover: bool = False,
                     radius: float = ESCAPE_RADIUS) -> MembershipGrid:
    pts = window.points()
    return _grid(window, pts, pts, budget, True, True, cover, radius)


def classify_landed(c: complex, z, dz_dw, dz_dwbar, window: AnyWindow,
                    budget: int = DEFAULT_BUDGET, anti: bool = False, cover: bool = False,
                    radius: float = ESCAPE_RADIUS) -> MembershipGrid:
    """Classify orbits of f_c (g_c) started at precomputed points z(w).

    ``z`` holds one starting point per pixel of ``window``; the derivative
    arrays give dz/dw and dz/dw-bar so the distance estimate is measured in
    the window's own pixel plane.
    """
    bits = _classify(np.asarray(z, dtype=complex), complex(c), budget, anti, False, cover,
                     COVER_FACTOR * window.pixel_pitch, radius, dz_dw, dz_dwbar)
    return MembershipGrid(window=window, bits=bits, budget=budget, cover=cover)


def extract_boundary(grid: MembershipGrid, frame: bool = False) -> PlanarSet:
    """Centres of member pixels with at least one non-member 4-neighbour.

    Coordinates are those of the window's own pixel grid (the w-plane for
    rescaled windows). With ``frame`` the outside of the grid counts as
    non-member, so members on the outer frame are boundary too.
    """
    bits = np.asarray(grid.bits, dtype=bool)
    if not bits.any():
        raise EmptySet("grid has no member pixels")
    padded = np.pad(bits, 1, constant_values=not frame)
    inner = (padded[:-2, 1:-1] & padded[2:, 1:-1] & padded[1:-1, :-2] & padded[1:-1, 2:])
    edge = bits & ~inner
    pts = grid.window.pixel_centers()[edge]
    return PlanarSet(points=pts, scale_hint=grid.window.pixel_pitch)


def truncate(s: PlanarSet, r: float, circle_samples: int) -> PlanarSet:
    """(S within the closed disk of radius r) together with sampled |z| = r."""
    if r <= 0:
        raise ValueError("r must be positive")
    pts = np.asarray(s.points, dtype=complex)
    inside = pts[np.abs(pts) <= r]
    circle = r * np.exp(2j * np.pi * np.arange(circle_samples) / circle_samples)
    return PlanarSet(points=np.concatenate([inside, circle]), scale_hint=s.scale_hint)


def rescaled_julia_window(d, k: int, r: float = DEFAULT_R,
                          resolution: int = DEFAULT_RESOLUTION) -> RescaledWindow:
    """Dynamical-plane window: z = c0 + rho_k w over |Re w|, |Im w| <= r."""
    return RescaledWindow(c0=d.c0, rho=rho_k(d, k), H=IDENTITY, r=r, resolution=resolution)


def rescaled_param_window(d, k: int, r: float = DEFAULT_R,
                          resolution: int = DEFAULT_RESOLUTION) -> RescaledWindow:
    """Parameter-plane window: c = c0 + Q rho_k w, or c0 + H(rho_k w) for the tricorn."""
    H = d.H if getattr(d, "family", "quadratic") == "tricorn" else RealLinearMap(d.Q, 0j)
    return RescaledWindow(c0=d.c0, rho=rho_k(d, k), H=H, r=r, resolution=resolution)


def classify_parameters(points, budget: int = DEFAULT_BUDGET, anti: bool = False,
                        radius: float = ESCAPE_RADIUS) -> np.ndarray:
    """Bounded-at-budget flags for arbitrary parameter samples (M, or T when
    ``anti``)."""
    pts = np.asarray(points, dtype=complex)
    return _classify(pts, pts, budget, anti, True, False, 0.0, radius)


def classify_param(d, window: AnyWindow, budget: int = DEFAULT_BUDGET, cover: bool = False,
                   radius: float = ESCAPE_RADIUS) -> MembershipGrid:
    if getattr(d, "family", "quadratic") == "tricorn":
        return classify_tricorn(window, budget, cover, radius)
    return classify_mandelbrot(window, budget, cover, radius)


def classify_dynamical(d, window: AnyWindow, budget: int = DEFAULT_BUDGET, cover: bool = False,
                       radius: float = ESCAPE_RADIUS) -> MembershipGrid:
    anti = getattr(d, "family", "quadratic") == "tricorn"
    return classify_julia(d.c0, window, budget, anti, cover, radius)


def _raster(obj, window: Optional[Window]) -> np.ndarray:
    if isinstance(obj, MembershipGrid):
        return np.where(obj.bits, 0, 255).astype(np.uint8)
    if isinstance(obj, PlanarSet):
        if window is None:
            raise ValueError("rasterising a PlanarSet needs a window")
        res = window.resolution
        img = np.full((res, res), 255, dtype=np.uint8)
        rel = (np.asarray(obj.points) - window.center) / window.width
        i = np.floor((rel.real + 0.5) * res).astype(int)
        j = np.floor((rel.imag + 0.5) * res).astype(int)
        ok = (i >= 0) & (i < res) & (j >= 0) & (j < res)
        img[res - 1 - j[ok], i[ok]] = 0
        return img
    raise TypeError(f"cannot rasterise {type(obj).__name__}")


def pgm_bytes(obj, window: Optional[Window] = None) -> bytes:
    img = _raster(obj, window)
    h, w = img.shape
    return b"P5\n%d %d\n255\n" % (w, h) + img.tobytes()


def write_pgm(obj, path, window: Optional[Window] = None) -> None:
    """Binary greyscale PGM: 0 for members / set points, 255 for background."""
    Path(path).write_bytes(pgm_bytes(obj, window))


def write_png(obj, path, window: Optional[Window] = None) -> None:
    from PIL import Image

    Image.fromarray(_raster(obj, window), mode="L").save(path, format="PNG")
