"""Orbits of the quadratic family f_c(z) = z^2 + c and its antiholomorphic
twin g_c(z) = conj(z)^2 + c.

Points are plain Python ``complex`` values. Overflow is never raised: an
orbit that leaves double range simply becomes non-finite, and callers test
``cmath.isfinite`` when they care.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Optional, Sequence

ESCAPE_RADIUS = 2.0
DEFAULT_BUDGET = 1000


class Dual:
    """Complex value paired with its first derivative along one variable.

    Only complex-linear operations are supported; conjugation has no dual
    rule and deliberately raises.
    """

    __slots__ = ("val", "der")

    def __init__(self, val, der=0j):
        self.val = complex(val)
        self.der = complex(der)

    @classmethod
    def variable(cls, val) -> "Dual":
        return cls(val, 1.0)

    @staticmethod
    def _lift(other) -> "Dual":
        return other if isinstance(other, Dual) else Dual(other, 0j)

    def __add__(self, other):
        o = self._lift(other)
        return Dual(self.val + o.val, self.der + o.der)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return Dual(self.val - o.val, self.der - o.der)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self):
        return Dual(-self.val, -self.der)

    def __mul__(self, other):
        o = self._lift(other)
        return Dual(self.val * o.val, self.val * o.der + self.der * o.val)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        return Dual(self.val / o.val, (self.der * o.val - self.val * o.der) / (o.val * o.val))

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def square(self) -> "Dual":
        return Dual(self.val * self.val, 2.0 * self.val * self.der)

    def conjugate(self):
        raise TypeError("conjugation is not complex-differentiable")

    def __repr__(self) -> str:
        return f"Dual({self.val!r}, {self.der!r})"


@dataclass(frozen=True)
class OrbitResult:
    final: complex
    escaped_at: Optional[int]
    dz: complex
    dc: complex

    @property
    def finite(self) -> bool:
        return cmath.isfinite(self.final) and cmath.isfinite(self.dz) and cmath.isfinite(self.dc)


def _check_count(n: int) -> None:
    if n < 0:
        raise ValueError(f"iteration count must be non-negative, got {n}")


def iterate_f(c: complex, z: complex, n: int) -> complex:
    _check_count(n)
    c = complex(c)
    z = complex(z)
    for _ in range(n):
        z = z * z + c
    return z


def iterate_g(c: complex, z: complex, n: int) -> complex:
    _check_count(n)
    c = complex(c)
    z = complex(z)
    for _ in range(n):
        z = z.conjugate()
        z = z * z + c
    return z


def orbit_with_derivatives(c: complex, z: complex, n: int, z_depends_on_c: bool = False) -> OrbitResult:
    """Iterate f_c n times from z, carrying two dual channels.

    ``dz`` is the derivative with respect to the starting point. ``dc`` is
    the derivative with respect to the parameter; when ``z_depends_on_c``
    the starting point is the parameter itself (the critical-value orbit
    z = c), otherwise the starting point is held fixed.
    """
    _check_count(n)
    zz = Dual.variable(z)
    zc = Dual(z, 1.0 if z_depends_on_c else 0.0)
    cc = Dual.variable(c)
    escaped = None if abs(zz.val) <= ESCAPE_RADIUS else 0
    for m in range(1, n + 1):
        zz = zz.square() + c
        zc = zc.square() + cc
        if escaped is None and abs(zz.val) > ESCAPE_RADIUS:
            escaped = m
    return OrbitResult(final=zz.val, escaped_at=escaped, dz=zz.der, dc=zc.der)


def escape_time(c: complex, z: complex, n_max: int = DEFAULT_BUDGET,
                radius: float = ESCAPE_RADIUS) -> Optional[int]:
    """Smallest n <= n_max with |f_c^n(z)| > radius, or None if bounded at budget."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    c = complex(c)
    z = complex(z)
    r2 = radius * radius
    if z.real * z.real + z.imag * z.imag > r2:
        return 0
    for n in range(1, n_max + 1):
        z = z * z + c
        if z.real * z.real + z.imag * z.imag > r2:
            return n
    return None


def escape_time_anti(c: complex, z: complex, n_max: int = DEFAULT_BUDGET,
                     radius: float = ESCAPE_RADIUS) -> Optional[int]:
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    c = complex(c)
    z = complex(z)
    r2 = radius * radius
    if z.real * z.real + z.imag * z.imag > r2:
        return 0
    for n in range(1, n_max + 1):
        z = z.conjugate()
        z = z * z + c
        if z.real * z.real + z.imag * z.imag > r2:
            return n
    return None


def deviation_orbit(base: Sequence[complex], delta, eps=0j, anti: bool = False):
    """Follow a perturbed orbit as a deviation from a known base orbit.

    ``base[j]`` is the exact j-th orbit point of the unperturbed map, the
    starting deviation is ``delta`` and the parameter is shifted by ``eps``.
    Returns the deviation after ``len(base)`` steps. Works on scalars and on
    numpy arrays alike.

    The recurrence delta -> 2*b*delta + delta^2 + eps (conjugated first for
    the antiholomorphic map) is algebraically exact, but keeps full relative
    precision in delta, which direct iteration from b + delta would lose.
    """
    d = delta
    for b in base:
        if anti:
            d = d.conjugate()
            b = b.conjugate()
        d = (2.0 * b + d) * d + eps
    return d
