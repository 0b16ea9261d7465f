"""Resurgent transseries and Riemann-Hilbert tools for the Painleve I tronquee solutions."""

from .errors import ComputationError
from .mpkernel import PrecisionContext

__version__ = "0.1.0"

__all__ = ["ComputationError", "PrecisionContext", "__version__"]
