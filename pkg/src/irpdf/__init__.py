"""Characters and invariant random positive definite functions on discrete groups."""

from .perm import Perm, compose, cycle_counts, from_cycles, inverse, parse_perm, restricted_inversion_parity
from .thoma import ThomaParams, s_k, tau, validate_params

__version__ = "0.1.0"

__all__ = [
    "Perm",
    "ThomaParams",
    "compose",
    "cycle_counts",
    "from_cycles",
    "inverse",
    "parse_perm",
    "restricted_inversion_parity",
    "s_k",
    "tau",
    "validate_params",
]
