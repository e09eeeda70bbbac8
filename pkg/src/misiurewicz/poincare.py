"""Poincaré functions at the landing cycle, and the rescaled families
converging to them.

All evaluations run the orbit as a deviation from the exact (idealised)
preperiodic orbit of c0, see :func:`misiurewicz.dynamics.deviation_orbit`.
Direct iteration of ``c0 + rho_k * w`` throws away about
``eps / |rho_k|`` of w, which at depth k ~ 11 is already larger than the
convergence error being measured.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from .dynamics import deviation_orbit, iterate_f, iterate_g
from .errors import NoConvergence
from .rescale import check_depth, rho_k

DEFAULT_TOL = 1e-10
DEFAULT_N_CAP = 60
DEFAULT_R_MAX = 1e3


@dataclass(frozen=True)
class OrbitSkeleton:
    """Exact orbit of c0: the pre-periodic part then one period of the cycle.

    Both tuples list the points *before* each single step of the map. For
    the antiholomorphic family a "period" is 2p single steps of g, i.e. p
    steps of the holomorphic second iterate.
    """

    c0: complex
    a0: complex
    pre: Tuple[complex, ...]
    cycle: Tuple[complex, ...]
    anti: bool = False

    @classmethod
    def build(cls, c0: complex, a0: complex, pre_steps: int, cycle_steps: int,
              anti: bool = False) -> "OrbitSkeleton":
        step = _g_step if anti else _f_step
        pre, z = [], complex(c0)
        for _ in range(pre_steps):
            pre.append(z)
            z = step(c0, z)
        cyc, z = [], complex(a0)
        for _ in range(cycle_steps):
            cyc.append(z)
            z = step(c0, z)
        return cls(complex(c0), complex(a0), tuple(pre), tuple(cyc), anti)

    def land(self, k: int, delta, eps=0j):
        """f^{pre + k*period} evaluated at c0 + delta with parameter c0 + eps."""
        d = deviation_orbit(self.pre, delta, eps, self.anti)
        for _ in range(k):
            d = deviation_orbit(self.cycle, d, eps, self.anti)
        return self.a0 + d

    def land_jet(self, k: int, delta, ddelta):
        """land() with eps = 0, also carrying derivatives with respect to w.

        ``ddelta`` is d(delta)/dw. Returns (z, dz/dw, dz/dw-bar); the second
        derivative only becomes non-zero for the antiholomorphic family.
        """
        d = np.asarray(delta, dtype=complex)
        da = np.broadcast_to(np.asarray(ddelta, dtype=complex), d.shape).copy()
        db = np.zeros_like(da)
        for b in self._steps(k):
            if self.anti:
                d, da, db = np.conj(d), np.conj(db), np.conj(da)
                b = b.conjugate()
            t = 2.0 * (b + d)
            d = (2.0 * b + d) * d
            da, db = t * da, t * db
        return self.a0 + d, da, db

    def _steps(self, k: int):
        yield from self.pre
        for _ in range(k):
            yield from self.cycle

    def around_cycle(self, n: int, delta):
        """n periods of the cycle map started at a0 + delta."""
        d = delta
        for _ in range(n):
            d = deviation_orbit(self.cycle, d, 0j, self.anti)
        return self.a0 + d


def _f_step(c, z):
    return z * z + c


def _g_step(c, z):
    z = z.conjugate()
    return z * z + c


@dataclass(frozen=True)
class PoincareEvaluator:
    c0: complex
    a0: complex
    lambda0: complex
    p: int
    tol: float = DEFAULT_TOL
    n_cap: int = DEFAULT_N_CAP
    r_max: float = DEFAULT_R_MAX
    anti: bool = False
    skeleton: OrbitSkeleton = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if abs(self.lambda0) <= 1:
            raise ValueError("lambda0 must be repelling")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        steps = 2 * self.p if self.anti else self.p
        object.__setattr__(self, "skeleton",
                           OrbitSkeleton.build(self.c0, self.a0, 0, steps, self.anti))

    @classmethod
    def from_data(cls, d, **kwargs) -> "PoincareEvaluator":
        """Evaluator for a quadratic or tricorn record.

        Weakly repelling cycles converge slowly, so unless given, n_cap is
        raised until |lambda0|^n_cap comfortably exceeds 1/eps.
        """
        anti = getattr(d, "family", "quadratic") == "tricorn"
        kwargs.setdefault("n_cap", max(DEFAULT_N_CAP, math.ceil(40 / math.log(abs(d.lambda0)))))
        return cls(c0=d.c0, a0=d.a0, lambda0=d.lambda0, p=d.p, anti=anti, **kwargs)

    def period_map(self, z):
        """One period of the cycle map: f^p, or g^{2p} for the tricorn family."""
        if np.ndim(z):
            return np.vectorize(self.period_map, otypes=[complex])(z)
        if self.anti:
            return iterate_g(self.c0, z, 2 * self.p)
        return iterate_f(self.c0, z, self.p)

    def phi_n(self, w, n: int):
        """Finite approximant f^{np}(a0 + w / lambda0^n)."""
        return self.skeleton.around_cycle(n, w / self.lambda0 ** n)


def _as_array(w):
    return np.asarray(w, dtype=complex)


def phi(ev: PoincareEvaluator, w):
    """Limit of ev.phi_n(w), stopped once two consecutive increments are
    below ``tol`` (relative to max(1, |phi|))."""
    arr = _as_array(w)
    wmax = float(np.max(np.abs(arr))) if arr.size else 0.0
    if wmax > ev.r_max:
        raise ValueError(f"|w| = {wmax:g} exceeds r_max = {ev.r_max:g}")
    lam = abs(ev.lambda0)
    n = max(0, math.ceil(math.log(wmax) / math.log(lam))) if wmax > 1 else 0
    with np.errstate(invalid="ignore", over="ignore"):
        prev = ev.phi_n(arr, n)
        quiet = 0
        while n < ev.n_cap:
            n += 1
            cur = ev.phi_n(arr, n)
            inc = np.abs(cur - prev) / np.maximum(1.0, np.abs(cur))
            if np.all(inc < ev.tol):  # NaN increments never pass
                quiet += 1
                if quiet == 2:
                    return cur if arr.ndim else complex(cur)
            else:
                quiet = 0
            prev = cur
    if not np.all(np.isfinite(prev)):
        raise NoConvergence(f"phi_n left double range for |w| up to {wmax:g}")
    raise NoConvergence(f"Poincaré limit not reached within n_cap = {ev.n_cap}")


def cauchy_increments(ev: PoincareEvaluator, w, n_max: int) -> List[float]:
    """|phi_{n+1}(w) - phi_n(w)| for n = 0 .. n_max - 1 (sup over array input)."""
    arr = _as_array(w)
    out = []
    prev = ev.phi_n(arr, 0)
    for n in range(1, n_max + 1):
        cur = ev.phi_n(arr, n)
        out.append(float(np.max(np.abs(cur - prev))))
        prev = cur
    return out


def functional_equation_residual(ev: PoincareEvaluator, w):
    """|phi(lambda0 w) - F(phi(w))| where F is the period map."""
    arr = _as_array(w)
    lhs = phi(ev, ev.lambda0 * arr)
    rhs = ev.period_map(phi(ev, arr))
    res = np.abs(lhs - rhs)
    return float(res) if arr.ndim == 0 else res


def skeleton_for(d) -> OrbitSkeleton:
    """Orbit skeleton of a quadratic (RescaleData) or tricorn record."""
    if getattr(d, "family", "quadratic") == "tricorn":
        return OrbitSkeleton.build(d.c0, d.a0, 2 * d.l, 2 * d.p, anti=True)
    return OrbitSkeleton.build(d.c0, d.a0, d.l, d.p)


def phi_k(d, k: int, w):
    """f_{c0}^{l+kp}(c0 + rho_k w); no limit involved."""
    check_depth(d.lambda0, k)
    arr = _as_array(w)
    out = skeleton_for(d).land(k, rho_k(d, k) * arr)
    return out if arr.ndim else complex(out)


def Phi_k(d, k: int, w):
    """f_c^{l+kp}(c) at the perturbed parameter c = c0 + Q rho_k w.

    For a tricorn record the parameter is c0 + H(rho_k w) and the map is g.
    """
    check_depth(d.lambda0, k)
    arr = _as_array(w)
    if getattr(d, "family", "quadratic") == "tricorn":
        eps = d.H(rho_k(d, k) * arr)
    else:
        eps = d.Q * rho_k(d, k) * arr
    out = skeleton_for(d).land(k, eps, eps)
    return out if arr.ndim else complex(out)


def disk_grid(radius: float = 1.0, n: int = 33) -> np.ndarray:
    """Points of an n x n grid over the disk's bounding square lying in the
    closed disk."""
    t = np.linspace(-radius, radius, n)
    pts = (t[None, :] + 1j * t[:, None]).ravel()
    return pts[np.abs(pts) <= radius * (1 + 1e-12)]


def sup_difference(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def disk_sample(count: int = 100, radius: float = 1.0) -> np.ndarray:
    """``count`` points spread evenly over the closed disk (sunflower layout)."""
    j = np.arange(count)
    golden = (3 - math.sqrt(5)) * math.pi
    return radius * np.sqrt((j + 0.5) / count) * np.exp(1j * golden * j)


def intersection_rows(d, ks, w, proxy_tol: float = 1e-13):
    """Per k: (k, sup|phi_k - phi|, sup|Phi_k - phi|, sup|Phi_k - phi_k|) over w.

    phi is the limit evaluated at ``proxy_tol``.
    """
    ev = PoincareEvaluator.from_data(d, tol=proxy_tol)
    ref = phi(ev, w)
    rows = []
    for k in ks:
        a, b = phi_k(d, k, w), Phi_k(d, k, w)
        rows.append((k, sup_difference(a, ref), sup_difference(b, ref), sup_difference(a, b)))
    return rows


def cauchy_depth(lambda0: complex) -> int:
    """Number of increments worth reporting before rounding noise takes over."""
    return max(4, math.ceil(math.log(1e10) / math.log(abs(lambda0))))
