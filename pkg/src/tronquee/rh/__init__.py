"""Steepest-descent side: phase functions, model parametrices, residue calculus."""

from .linalg import HomogeneousLaurent, LaurentMatrix2, Matrix2
from .phase import GContext, g_eval, make_gcontext, stationary_points, theta_eval
from .stokes import StokesData, jump_factorization_check, stokes_closure

__all__ = [
    "GContext",
    "HomogeneousLaurent",
    "LaurentMatrix2",
    "Matrix2",
    "StokesData",
    "g_eval",
    "jump_factorization_check",
    "make_gcontext",
    "stationary_points",
    "stokes_closure",
    "theta_eval",
]
