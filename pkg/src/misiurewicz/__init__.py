"""Misiurewicz parameters of z^2 + c and conj(z)^2 + c: certification,
rescaling constants, Poincaré functions, zoom rendering and Hausdorff
convergence tables."""

from .errors import (DegenerateTransversality, MisiurewiczError, NoConvergence, NotMinimal,
                     NotRepelling)
from .rescale import RescaleData, compute_Q, rho_k
from .solver import MisiurewiczData, find_misiurewicz, solve_misiurewicz
from .tricorn import TricornData, find_tricorn_misiurewicz, solve_tricorn_misiurewicz

__all__ = [
    "DegenerateTransversality", "MisiurewiczData", "MisiurewiczError", "NoConvergence",
    "NotMinimal", "NotRepelling", "RescaleData", "TricornData", "compute_Q",
    "find_misiurewicz", "find_tricorn_misiurewicz", "rho_k", "solve_misiurewicz",
    "solve_tricorn_misiurewicz",
]
