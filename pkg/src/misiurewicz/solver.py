"""Locating and certifying Misiurewicz parameters of z^2 + c."""
from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Callable, Iterator, Tuple

from .dynamics import iterate_f, orbit_with_derivatives
from .errors import BasinJump, NoConvergence, NotMinimal, NotRepelling

DEFAULT_TOL = 1e-13
MAX_NEWTON = 100
MINIMALITY_TOL = 1e-8
EPS = sys.float_info.epsilon


@dataclass(frozen=True)
class MisiurewiczData:
    c0: complex
    l: int
    p: int
    a0: complex
    lambda0: complex
    residual: float


def relation_residual(c: complex, l: int, p: int) -> float:
    """|f_c^{l+p}(c) - f_c^l(c)| by plain iteration."""
    b = iterate_f(c, c, l)
    return abs(iterate_f(c, b, p) - b)


def _noise_floor(deriv: complex, x: complex) -> float:
    # residual reachable once x is pinned to the last ulp
    return 16.0 * EPS * abs(deriv) * max(1.0, abs(x))


def newton(func: Callable[[complex], Tuple[complex, complex]], x: complex, tol: float,
           max_iter: int = MAX_NEWTON) -> Tuple[complex, float]:
    """Damped complex Newton iteration.

    ``func`` returns (value, derivative). Steps are halved while the
    residual fails to decrease. Returns (root, residual).
    """
    fx, dfx = func(x)
    for _ in range(max_iter):
        res = abs(fx)
        if res <= max(tol, _noise_floor(dfx, x)):
            return _polish(func, x, fx, dfx)
        if dfx == 0:
            break
        step = fx / dfx
        t = 1.0
        for _ in range(30):
            cand = x - t * step
            fc, dfc = func(cand)
            if abs(fc) < res:
                break
            t *= 0.5
        else:
            # no decrease even for tiny steps: we are sitting on rounding noise
            if res <= max(tol, 1e3 * _noise_floor(dfx, x)):
                return x, res
            break
        x, fx, dfx = cand, fc, dfc
    raise NoConvergence(f"Newton failed to converge (residual {abs(fx):.3e} at {x!r})")


def _polish(func, x, fx, dfx, steps: int = 3) -> Tuple[complex, float]:
    for _ in range(steps):
        if fx == 0 or dfx == 0:
            break
        cand = x - fx / dfx
        fc, dfc = func(cand)
        if abs(fc) > abs(fx):
            break
        x, fx, dfx = cand, fc, dfc
    return x, abs(fx)


def misiurewicz_relation(l: int, p: int) -> Callable[[complex], Tuple[complex, complex]]:
    """F(c) = f_c^{l+p}(c) - f_c^l(c) together with F'(c)."""

    def F(c: complex) -> Tuple[complex, complex]:
        pre = orbit_with_derivatives(c, c, l, z_depends_on_c=True)
        full = orbit_with_derivatives(c, c, l + p, z_depends_on_c=True)
        return full.final - pre.final, full.dc - pre.dc

    return F


def _proper_pairs(l: int, p: int) -> Iterator[Tuple[int, int]]:
    divisors = [d for d in range(1, p + 1) if p % d == 0]
    for lp in range(1, l + 1):
        for pp in divisors:
            if (lp, pp) != (l, p):
                yield lp, pp


def multiplier(c: complex, a: complex, p: int) -> complex:
    return orbit_with_derivatives(c, a, p).dz


def solve_misiurewicz(l: int, p: int, seed: complex, tol: float = DEFAULT_TOL,
                      max_iter: int = MAX_NEWTON) -> MisiurewiczData:
    if l < 1 or p < 1:
        raise ValueError("l and p must be >= 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    c0, res = newton(misiurewicz_relation(l, p), complex(seed), tol, max_iter)
    for lp, pp in _proper_pairs(l, p):
        if relation_residual(c0, lp, pp) < MINIMALITY_TOL:
            raise NotMinimal(f"c0={c0!r} already satisfies (l, p) = ({lp}, {pp})")
    a0 = iterate_f(c0, c0, l)
    lam = multiplier(c0, a0, p)
    if abs(lam) <= 1.0:
        raise NotRepelling(f"|lambda0| = {abs(lam):.6g} at c0={c0!r}")
    return MisiurewiczData(c0=c0, l=l, p=p, a0=a0, lambda0=lam, residual=res)


def track_periodic_point(c: complex, a_seed: complex, p: int, tol: float = DEFAULT_TOL,
                         max_jump: float = 0.1) -> complex:
    """Continue the period-p point near ``a_seed`` to the parameter ``c``."""

    def h(z: complex) -> Tuple[complex, complex]:
        orb = orbit_with_derivatives(c, z, p)
        return orb.final - z, orb.dz - 1.0

    a, _ = newton(h, complex(a_seed), tol)
    if abs(a - a_seed) > max_jump:
        raise BasinJump(f"continued point {a!r} is {abs(a - a_seed):.3g} from seed {a_seed!r}")
    return a


def find_misiurewicz(seed: complex, l_max: int = 12, p_max: int = 8, radius: float = 1e-6,
                     tol: float = DEFAULT_TOL) -> MisiurewiczData:
    """Certify the Misiurewicz parameter at (or extremely near) ``seed``.

    Pairs are tried in order of increasing l, then p; the first certified
    root lying within ``radius`` of the seed wins.
    """
    seed = complex(seed)
    for l in range(1, l_max + 1):
        for p in range(1, p_max + 1):
            try:
                d = solve_misiurewicz(l, p, seed, tol)
            except (NoConvergence, NotMinimal, NotRepelling):
                continue
            if abs(d.c0 - seed) <= radius * max(1.0, abs(seed)):
                return d
    raise NoConvergence(f"no Misiurewicz parameter with l<={l_max}, p<={p_max} near {seed!r}")
