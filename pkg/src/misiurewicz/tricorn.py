"""Antiholomorphic family g_c(z) = conj(z)^2 + c and its tricorn.

g_c is not complex-differentiable in c, so every parameter derivative here
is a real 2x2 Jacobian built from central differences. Derivatives in z go
through the second iterate G_c = g_c o g_c, which is a genuine polynomial in
z, and can use the dual channel.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, replace
from typing import Tuple

import numpy as np

from .dynamics import Dual, iterate_g
from .errors import (BasinJump, DegenerateA0, DegenerateTransversality, NoConvergence,
                     NotInvertible, NotMinimal, NotRepelling)
from .poincare import Phi_k, skeleton_for
from .rescale import A0_FLOOR, check_depth, rho_k
from .solver import DEFAULT_TOL, MAX_NEWTON, MINIMALITY_TOL, _proper_pairs

EPS = sys.float_info.epsilon
FD_STEP = 1e-6
TRANSVERSALITY_MARGIN = 1e-6


@dataclass(frozen=True)
class RealLinearMap:
    """H(w) = Q w + Q' conj(w)."""

    Q: complex
    Qp: complex

    @property
    def determinant(self) -> float:
        return abs(self.Q) ** 2 - abs(self.Qp) ** 2

    @property
    def invertible(self) -> bool:
        return abs(self.Q) != abs(self.Qp)

    @property
    def stretch(self) -> float:
        """Largest factor by which H stretches lengths."""
        return abs(self.Q) + abs(self.Qp)

    def __call__(self, w):
        return apply_H(self, w)

    def inverse(self, W):
        return apply_h(self, W)


IDENTITY = RealLinearMap(1.0 + 0j, 0j)


def apply_H(m: RealLinearMap, w):
    return m.Q * w + m.Qp * np.conj(w)


def apply_h(m: RealLinearMap, W):
    if not m.invertible:
        raise NotInvertible(f"|Q| = |Q'| = {abs(m.Q):g}")
    return (np.conj(m.Q) * W - m.Qp * np.conj(W)) / m.determinant


@dataclass(frozen=True)
class TricornData:
    c0: complex
    l: int
    p: int
    a0: complex
    lambda0: complex
    A0: complex
    B0: complex
    B0p: complex
    Q: complex
    Qp: complex
    residual: float = 0.0

    family = "tricorn"

    @property
    def H(self) -> RealLinearMap:
        return RealLinearMap(self.Q, self.Qp)


def biquadratic(c: complex, z: complex, n: int) -> complex:
    """G_c^n(z) with G_c(z) = (z^2 + conj(c))^2 + c."""
    if n < 0:
        raise ValueError("n must be non-negative")
    c = complex(c)
    cb = c.conjugate()
    z = complex(z)
    for _ in range(n):
        u = z * z + cb
        z = u * u + c
    return z


def biquadratic_dz(c: complex, z: complex, n: int) -> Tuple[complex, complex]:
    """(G_c^n(z), d/dz G_c^n(z)) through the dual channel."""
    c = complex(c)
    cb = c.conjugate()
    zz = Dual.variable(z)
    for _ in range(n):
        zz = (zz.square() + cb).square() + c
    return zz.val, zz.der


def relation_residual_anti(c: complex, l: int, p: int) -> float:
    b = iterate_g(c, c, l)
    return abs(iterate_g(c, b, p) - b)


def _realify(z: complex) -> np.ndarray:
    return np.array([z.real, z.imag])


def real_jacobian(func, c: complex, h: float = None) -> np.ndarray:
    """Central-difference Jacobian of a map C -> C viewed as R^2 -> R^2."""
    c = complex(c)
    if h is None:
        h = FD_STEP * max(1.0, abs(c))
    dx = (func(c + h) - func(c - h)) / (2 * h)
    dy = (func(c + 1j * h) - func(c - 1j * h)) / (2 * h)
    return np.array([[dx.real, dy.real], [dx.imag, dy.imag]])


def wirtinger_pair(jac) -> Tuple[complex, complex]:
    """Split a real 2x2 Jacobian into (d/dc, d/dc-bar) coefficients."""
    (m11, m12), (m21, m22) = np.asarray(jac, dtype=float)
    B0 = complex(m11 + m22, m21 - m12) / 2
    B0p = complex(m11 - m22, m21 + m12) / 2
    return B0, B0p


def assemble_jacobian(B0: complex, B0p: complex) -> np.ndarray:
    """Real matrix of w -> B0 w + B0p conj(w); inverse of wirtinger_pair."""
    dx = B0 + B0p
    dy = 1j * (B0 - B0p)
    return np.array([[dx.real, dy.real], [dx.imag, dy.imag]])


def _newton_real2(func, c: complex, tol: float, max_iter: int) -> Tuple[complex, float]:
    fc = func(c)
    for _ in range(max_iter):
        res = abs(fc)
        jac = real_jacobian(func, c, h=1e-7 * max(1.0, abs(c)))
        floor = 16 * EPS * np.linalg.norm(jac, 2) * max(1.0, abs(c))
        if res <= max(tol, floor):
            return c, res
        try:
            step = np.linalg.solve(jac, _realify(fc))
        except np.linalg.LinAlgError:
            break
        step = complex(step[0], step[1])
        t = 1.0
        for _ in range(30):
            cand = c - t * step
            fcand = func(cand)
            if abs(fcand) < res:
                break
            t *= 0.5
        else:
            if res <= max(tol, 1e3 * floor):
                return c, res
            break
        c, fc = cand, fcand
    raise NoConvergence(f"2D Newton failed (residual {abs(fc):.3e} at {c!r})")


def track_fixed_point_G(c: complex, a_seed: complex, p: int, tol: float = DEFAULT_TOL,
                        max_jump: float = 0.1) -> complex:
    """Fixed point of G_c^p continued from ``a_seed`` (Newton in z)."""
    a = complex(a_seed)
    for _ in range(MAX_NEWTON):
        val, der = biquadratic_dz(c, a, p)
        r = val - a
        if abs(r) <= max(tol, 16 * EPS * abs(der) * max(1.0, abs(a))):
            break
        a = a - r / (der - 1.0)
    else:
        raise NoConvergence(f"fixed point of G^{p} not found near {a_seed!r}")
    if abs(a - a_seed) > max_jump:
        raise BasinJump(f"continued point {a!r} is {abs(a - a_seed):.3g} from seed")
    return a


def _transversality_map(d) -> callable:
    """u(c) = g_c^{2l}(c) - a(c), with a(c) the continued fixed point of G_c^p."""

    def u(c: complex) -> complex:
        return biquadratic(c, c, d.l) - track_fixed_point_G(c, d.a0, d.p)

    return u


def compute_B0_pair(d, h: float = None) -> Tuple[complex, complex]:
    jac = real_jacobian(_transversality_map(d), d.c0, h)
    B0, B0p = wirtinger_pair(jac)
    if abs(abs(B0) - abs(B0p)) < TRANSVERSALITY_MARGIN * (abs(B0) + abs(B0p)):
        raise DegenerateTransversality(f"|B0| = {abs(B0):.6g} ~ |B0'| = {abs(B0p):.6g}")
    return B0, B0p


def compute_QQp(A0: complex, B0: complex, B0p: complex) -> RealLinearMap:
    """The unique H with B0 H(z) + B0' conj(H(z)) = A0 z."""
    det = abs(B0) ** 2 - abs(B0p) ** 2
    if det == 0 or abs(abs(B0) - abs(B0p)) < TRANSVERSALITY_MARGIN * (abs(B0) + abs(B0p)):
        raise DegenerateTransversality(f"|B0| = |B0'| = {abs(B0):.6g}")
    Q = A0 * np.conj(B0) / det
    Qp = -np.conj(A0) * B0p / det
    return RealLinearMap(complex(Q), complex(Qp))


def solve_tricorn_misiurewicz(l: int, p: int, seed: complex, tol: float = DEFAULT_TOL,
                              max_iter: int = MAX_NEWTON) -> TricornData:
    if l < 1 or p < 1:
        raise ValueError("l and p must be >= 1")

    def F(c: complex) -> complex:
        b = iterate_g(c, c, l)
        return iterate_g(c, b, p) - b

    c0, res = _newton_real2(F, complex(seed), tol, max_iter)
    for lp, pp in _proper_pairs(l, p):
        if relation_residual_anti(c0, lp, pp) < MINIMALITY_TOL:
            raise NotMinimal(f"c0={c0!r} already satisfies (l, p) = ({lp}, {pp})")
    a0, A0 = biquadratic_dz(c0, c0, l)
    lam = biquadratic_dz(c0, a0, p)[1]
    if abs(lam) <= 1.0:
        raise NotRepelling(f"|lambda0| = {abs(lam):.6g} at c0={c0!r}")
    if abs(A0) < A0_FLOOR:
        raise DegenerateA0(f"|A0| = {abs(A0):.3e}")
    nan = complex("nan")
    d = TricornData(c0=c0, l=l, p=p, a0=a0, lambda0=lam, A0=A0, B0=nan, B0p=nan,
                    Q=nan, Qp=nan, residual=res)
    B0, B0p = compute_B0_pair(d)
    H = compute_QQp(A0, B0, B0p)
    return replace(d, B0=B0, B0p=B0p, Q=H.Q, Qp=H.Qp)


def find_tricorn_misiurewicz(seed: complex, l_max: int = 12, p_max: int = 8,
                             radius: float = 1e-6, tol: float = DEFAULT_TOL) -> TricornData:
    seed = complex(seed)
    for l in range(1, l_max + 1):
        for p in range(1, p_max + 1):
            try:
                d = solve_tricorn_misiurewicz(l, p, seed, tol)
            except (NoConvergence, NotMinimal, NotRepelling, DegenerateA0):
                continue
            if abs(d.c0 - seed) <= radius * max(1.0, abs(seed)):
                return d
    raise NoConvergence(f"no tricorn Misiurewicz parameter with l<={l_max}, p<={p_max} near {seed!r}")


def phi_k_tricorn(d: TricornData, k: int, w):
    """g_{c0}^{2l+2kp}(c0 + rho_k w)."""
    check_depth(d.lambda0, k)
    arr = np.asarray(w, dtype=complex)
    out = skeleton_for(d).land(k, rho_k(d, k) * arr)
    return out if arr.ndim else complex(out)


def Phi_k_tricorn(d: TricornData, k: int, w):
    """g_c^{2l+2kp}(c) at c = c0 + H(rho_k w)."""
    return Phi_k(d, k, w)
