"""Rescaling constants attached to a certified Misiurewicz parameter.

The dynamical zoom at depth k uses rho_k = 1/(A0 * lambda0**k); the
parameter-plane zoom uses Q * rho_k with Q = A0/B0. Both Q and q = 1/Q are
kept because the two zoom directions use them in opposite roles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .dynamics import orbit_with_derivatives
from .errors import DegenerateA0, DegenerateB0, RangeExceeded
from .solver import MisiurewiczData

A0_FLOOR = 1e-12
B0_FLOOR = 1e-10
RANGE_GUARD = 1e300


@dataclass(frozen=True)
class RescaleData:
    base: MisiurewiczData
    A0: complex
    B0: complex
    Q: complex
    q: complex

    # shortcuts so RescaleData can stand in wherever the base record is read
    @property
    def c0(self) -> complex:
        return self.base.c0

    @property
    def a0(self) -> complex:
        return self.base.a0

    @property
    def lambda0(self) -> complex:
        return self.base.lambda0

    @property
    def l(self) -> int:
        return self.base.l

    @property
    def p(self) -> int:
        return self.base.p


def compute_A0(d: MisiurewiczData) -> complex:
    A0 = orbit_with_derivatives(d.c0, d.c0, d.l).dz
    if abs(A0) < A0_FLOOR:
        raise DegenerateA0(f"|A0| = {abs(A0):.3e}; c0 looks strictly periodic")
    return A0


def compute_B0(d: MisiurewiczData) -> complex:
    """Derivative of b(c) - a(c) at c0, with b(c) = f_c^l(c).

    a'(c0) comes from implicit differentiation of f_c^p(a(c)) = a(c):
    a' = (d/dc f_c^p)(a0) / (1 - lambda0).
    """
    db = orbit_with_derivatives(d.c0, d.c0, d.l, z_depends_on_c=True).dc
    dfdc = orbit_with_derivatives(d.c0, d.a0, d.p).dc
    da = dfdc / (1.0 - d.lambda0)
    B0 = db - da
    if abs(B0) < B0_FLOOR:
        raise DegenerateB0(f"|B0| = {abs(B0):.3e}; transversality fails numerically")
    return B0


def compute_Q(d: MisiurewiczData) -> RescaleData:
    A0 = compute_A0(d)
    B0 = compute_B0(d)
    Q = A0 / B0
    return RescaleData(base=d, A0=A0, B0=B0, Q=Q, q=B0 / A0)


def check_depth(lambda0: complex, k: int) -> None:
    if k < 0:
        raise ValueError("k must be non-negative")
    if abs(lambda0) > 1 and k * math.log(abs(lambda0)) >= math.log(RANGE_GUARD):
        raise RangeExceeded(f"|lambda0|^{k} exceeds {RANGE_GUARD:g}")


def rho_k(d, k: int) -> complex:
    """1/(A0 * lambda0**k). ``d`` is any record exposing A0 and lambda0."""
    check_depth(d.lambda0, k)
    scale = d.A0
    for _ in range(k):
        scale *= d.lambda0
    return 1.0 / scale
