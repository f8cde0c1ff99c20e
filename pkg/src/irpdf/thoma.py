"""Thoma parameters and the extremal characters of S_∞."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .perm import Perm, cycle_counts

SIMPLEX_TOL = 1e-12


@dataclass(frozen=True)
class ThomaParams:
    """Finitely supported Thoma parameters (alpha, beta).

    Entries are strictly positive and non-increasing; ``delta`` is derived.
    Build instances through :func:`validate_params`.
    """

    alpha: tuple[float, ...] = ()
    beta: tuple[float, ...] = ()

    @property
    def delta(self) -> float:
        return max(0.0, 1.0 - sum(self.alpha) - sum(self.beta))

    def to_json(self) -> str:
        return json.dumps({"alpha": list(self.alpha), "beta": list(self.beta)})

    @classmethod
    def from_json(cls, text: str) -> "ThomaParams":
        d = json.loads(text)
        return validate_params(d.get("alpha", []), d.get("beta", []))


def _normalize(name: str, seq: Sequence[float]) -> tuple[float, ...]:
    vals = [float(x) for x in seq]
    for i, x in enumerate(vals):
        if x < 0:
            raise ValueError(f"{name}[{i}] = {x} is negative")
        if x > 1:
            raise ValueError(f"{name}[{i}] = {x} exceeds 1")
    for i in range(len(vals) - 1):
        if vals[i + 1] > vals[i]:
            raise ValueError(
                f"{name} must be non-increasing: {name}[{i}] = {vals[i]} < {name}[{i + 1}] = {vals[i + 1]}"
            )
    # non-increasing, so zeros can only trail
    return tuple(x for x in vals if x > 0)


def validate_params(alpha: Sequence[float] = (), beta: Sequence[float] = ()) -> ThomaParams:
    a = _normalize("alpha", alpha)
    b = _normalize("beta", beta)
    total = sum(a) + sum(b)
    if total > 1 + SIMPLEX_TOL:
        raise ValueError(f"sum(alpha) + sum(beta) = {total!r} exceeds 1")
    return ThomaParams(a, b)


def s_k(params: ThomaParams, k: int) -> float:
    """Power sum ``Σ αᵢᵏ + (-1)^(k+1) Σ βᵢᵏ`` for k >= 2."""
    if k < 2:
        raise ValueError(f"s_k is defined for k >= 2, got k = {k}")
    pa = sum(x**k for x in params.alpha)
    pb = sum(x**k for x in params.beta)
    return pa + pb if k % 2 else pa - pb


def tau(params: ThomaParams, g: Perm) -> float:
    """Evaluate τ_{α,β}(g) = ∏ s_k^{r_k(g)}; empty exponents contribute 1."""
    out = 1.0
    for k, r in cycle_counts(g).items():
        out *= s_k(params, k) ** r
    return out


REGULAR = ThomaParams()
TRIVIAL = ThomaParams((1.0,), ())
ALTERNATING = ThomaParams((), (1.0,))
