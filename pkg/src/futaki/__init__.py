"""Exact relative Donaldson-Futaki invariants for degenerations of projectivized bundles over curves."""

from .bundle import CentralFiber, derive_invariants, normalize_slope_zero
from .exactnum import Poly, Q, RatFunc
from .moments import moment_table_closed, moment_table_direct
from .relative import Sign, Verdict, futaki_value, relative_futaki

__version__ = "0.1.0"

__all__ = [
    "CentralFiber",
    "Poly",
    "Q",
    "RatFunc",
    "Sign",
    "Verdict",
    "derive_invariants",
    "futaki_value",
    "moment_table_closed",
    "moment_table_direct",
    "normalize_slope_zero",
    "relative_futaki",
]
