"""Hausdorff distance between point clouds, and the convergence tables that
compare rescaled Julia sets / parameter-space pieces with the limit set."""
from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Iterable, List

import numpy as np
from scipy.spatial import cKDTree

from .dynamics import DEFAULT_BUDGET
from .errors import EmptyInput
from .poincare import skeleton_for
from .render import (DEFAULT_R, DEFAULT_RESOLUTION, PlanarSet, classify_dynamical,
                     classify_landed, classify_param, extract_boundary, rescaled_julia_window,
                     rescaled_param_window, truncate)
from .rescale import rho_k

# candidates pulled from the tree per query; the final distance is recomputed
# with abs() over all of them so near-ties resolve exactly as brute force does
NN_CANDIDATES = 8
CSV_HEADER = "k,rho_abs,d_julia,d_param\n"


def _points(s) -> np.ndarray:
    pts = np.asarray(s.points if isinstance(s, PlanarSet) else s, dtype=complex).ravel()
    if pts.size == 0:
        raise EmptyInput("Hausdorff distance needs two non-empty sets")
    return pts


def _directed(src: np.ndarray, dst: np.ndarray, tree: cKDTree) -> float:
    k = min(NN_CANDIDATES, dst.size)
    _, idx = tree.query(np.column_stack([src.real, src.imag]), k=k)
    idx = idx.reshape(src.size, k)
    return float(np.max(np.min(np.abs(src[:, None] - dst[idx]), axis=1)))


def hausdorff_distance(A, B) -> float:
    """max(sup_a dist(a, B), sup_b dist(b, A)) for finite point sets."""
    a, b = _points(A), _points(B)
    ta = cKDTree(np.column_stack([a.real, a.imag]))
    tb = cKDTree(np.column_stack([b.real, b.imag]))
    return max(_directed(a, b, tb), _directed(b, a, ta))


def hausdorff_brute(A, B) -> float:
    a, b = _points(A), _points(B)
    dist = np.abs(a[:, None] - b[None, :])
    return float(max(dist.min(axis=1).max(), dist.min(axis=0).max()))


@dataclass(frozen=True)
class ConvergenceRow:
    k: int
    rho_abs: float
    d_julia: float
    d_param: float


def _truncated(grid, r: float) -> PlanarSet:
    return truncate(extract_boundary(grid), r, 4 * grid.window.resolution)


def reference_set(d, k: int, r: float = DEFAULT_R, resolution: int = DEFAULT_RESOLUTION,
                  budget: int = DEFAULT_BUDGET, cover: bool = True) -> PlanarSet:
    """[J]_r for the limit model, with phi_k standing in for phi.

    A pixel w belongs when the f_{c0} (g_{c0}) orbit of phi_k(w) stays
    bounded. phi_k is evaluated along the exact orbit of c0, so this is
    not the same computation as the Julia-side grid at depth k.
    """
    win = rescaled_julia_window(d, k, r, resolution)
    anti = getattr(d, "family", "quadratic") == "tricorn"
    z, da, db = skeleton_for(d).land_jet(k, win.rho * win.pixel_centers(), win.rho)
    grid = classify_landed(d.c0, z, da, db, win, budget, anti, cover)
    return _truncated(grid, r)


def julia_side(d, k: int, r: float = DEFAULT_R, resolution: int = DEFAULT_RESOLUTION,
               budget: int = DEFAULT_BUDGET, cover: bool = True) -> PlanarSet:
    win = rescaled_julia_window(d, k, r, resolution)
    return _truncated(classify_dynamical(d, win, budget, cover), r)


def param_side(d, k: int, r: float = DEFAULT_R, resolution: int = DEFAULT_RESOLUTION,
               budget: int = DEFAULT_BUDGET, cover: bool = True) -> PlanarSet:
    win = rescaled_param_window(d, k, r, resolution)
    return _truncated(classify_param(d, win, budget, cover), r)


def similarity_table(d, k_range: Iterable[int], r: float = DEFAULT_R,
                     resolution: int = DEFAULT_RESOLUTION, budget: int = DEFAULT_BUDGET,
                     cover: bool = True) -> List[ConvergenceRow]:
    """Hausdorff distance of each rescaled piece to the deepest reference.

    Works for quadratic and tricorn records alike; for the tricorn the
    parameter side is pulled back pointwise through h.
    """
    ks = sorted(set(int(k) for k in k_range))
    if not ks:
        raise ValueError("empty k range")
    ref = reference_set(d, ks[-1], r, resolution, budget, cover)
    rows = []
    for k in ks:
        jul = julia_side(d, k, r, resolution, budget, cover)
        par = param_side(d, k, r, resolution, budget, cover)
        rows.append(ConvergenceRow(k=k, rho_abs=abs(rho_k(d, k)),
                                   d_julia=hausdorff_distance(jul, ref),
                                   d_param=hausdorff_distance(par, ref)))
    return rows


def similarity_table_tricorn(d, k_range: Iterable[int], r: float = DEFAULT_R,
                             resolution: int = DEFAULT_RESOLUTION, budget: int = DEFAULT_BUDGET,
                             cover: bool = True) -> List[ConvergenceRow]:
    if getattr(d, "family", None) != "tricorn":
        raise TypeError("similarity_table_tricorn needs a TricornData record")
    return similarity_table(d, k_range, r, resolution, budget, cover)


def table_csv(rows: Iterable[ConvergenceRow]) -> str:
    out = io.StringIO()
    out.write(CSV_HEADER)
    for row in rows:
        out.write(f"{row.k},{row.rho_abs:.12g},{row.d_julia:.12g},{row.d_param:.12g}\n")
    return out.getvalue()


def write_table_csv(rows: Iterable[ConvergenceRow], path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(table_csv(rows))


def non_increasing_within(values, floor: float) -> bool:
    """values[i+1] <= values[i] + floor for every consecutive pair."""
    return all(b <= a + floor for a, b in zip(values, values[1:]))
