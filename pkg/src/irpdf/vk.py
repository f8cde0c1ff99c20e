"""The Vershik–Kerov space for S_∞ and its sign-twisted stabilizer functions.

A configuration ω is a finite prefix (ω_1, ..., ω_n) of i.i.d. labels from
Q = N₊ ⊔ N₋ ⊔ [0, δ]. Permutations act by moving coordinates,
``(h.ω)_i = ω_{h⁻¹(i)}``, and ``phi(g, ω)`` is ``cocycle_sign(g, ω)`` when g
fixes ω and 0 otherwise.

Why a finite prefix suffices: φ_ω(g) only looks at coordinates up to
N = max(support(g)). For the sign, take a pair i < j of N₋ positions. If
j > N then g(j) = j > N >= g(i), so the factor g(j) - g(i) is positive; if
both exceed N the factor is j - i > 0. Only pairs inside [1, N] can flip the
sign, which is the restricted inversion parity of g on those positions.
Factors never vanish since g is injective.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Union

import numpy as np

from . import streams
from .groups import PERMS
from .pd import PDFunctionView
from .perm import Perm, inverse, restricted_inversion_parity
from .thoma import ThomaParams


@dataclass(frozen=True)
class Plus:
    index: int

    def __str__(self):
        return f"+{self.index}"


@dataclass(frozen=True)
class Minus:
    index: int

    def __str__(self):
        return f"-{self.index}"


@dataclass(frozen=True)
class Continuum:
    value: float

    def __str__(self):
        return repr(self.value)


Label = Union[Plus, Minus, Continuum]


@dataclass(frozen=True)
class Configuration:
    labels: tuple[Label, ...]
    params: ThomaParams

    def __len__(self) -> int:
        return len(self.labels)

    def __getitem__(self, i: int) -> Label:
        """1-based coordinate access, matching the permutation convention."""
        if not 1 <= i <= len(self.labels):
            raise IndexError(f"coordinate {i} outside 1..{len(self.labels)}")
        return self.labels[i - 1]

    def __str__(self) -> str:
        return " ".join(str(x) for x in self.labels)


# -- sampling ---------------------------------------------------------------


def encode_uniforms(params: ThomaParams, u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Inverse-CDF map from uniforms to labels, as (codes, values) arrays.

    Code +i is Plus(i), -i is Minus(i), 0 is Continuum(value). The atoms come
    first in [0, 1) and the continuum block [1 - δ, 1) last, so u minus the
    atom mass is already uniform on [0, δ).
    """
    a, b = params.alpha, params.beta
    masses = np.array(a + b, dtype=float)
    codes = np.zeros(u.shape, dtype=np.int64)
    values = np.zeros(u.shape, dtype=float)
    if masses.size:
        cum = np.cumsum(masses)
        idx = np.searchsorted(cum, u, side="right")
        if params.delta == 0.0:
            # rounding can leave a sliver above cum[-1]
            idx = np.minimum(idx, masses.size - 1)
        na = len(a)
        codes = np.where(idx < na, idx + 1, np.where(idx < masses.size, -(idx - na + 1), 0))
        cont = codes == 0
        values = np.where(cont, np.clip(u - cum[-1], 0.0, params.delta), 0.0)
    else:
        values = u.astype(float).copy()
    return codes.astype(np.int64), values


def _decode(code: int, value: float) -> Label:
    if code > 0:
        return Plus(int(code))
    if code < 0:
        return Minus(int(-code))
    return Continuum(float(value))


def sample_config(params: ThomaParams, n: int, rng: np.random.Generator | int, index: int = 0) -> Configuration:
    """Draw n i.i.d. labels from μ.

    ``rng`` may be a numpy Generator or an integer seed; with a seed the labels
    come from the (seed, index) stream used by the Monte Carlo batches, so the
    scalar and vectorized paths agree sample for sample.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if isinstance(rng, np.random.Generator):
        u = rng.random(n)
    else:
        u = streams.uniforms(int(rng), [index], n)[0]
    codes, values = encode_uniforms(params, u)
    return Configuration(tuple(_decode(c, v) for c, v in zip(codes, values)), params)


# -- action, sign, phi ------------------------------------------------------


def _check_fits(g: Perm, omega: Configuration) -> None:
    if g.max_support() > len(omega):
        raise ValueError(
            f"permutation {g} moves point {g.max_support()} but the configuration has only "
            f"{len(omega)} coordinates; sample with a larger n"
        )


def act(h: Perm, omega: Configuration) -> Configuration:
    _check_fits(h, omega)
    hinv = inverse(h)
    labels = tuple(omega.labels[hinv(i) - 1] for i in range(1, len(omega) + 1))
    return Configuration(labels, omega.params)


def is_fixed(g: Perm, omega: Configuration) -> bool:
    _check_fits(g, omega)
    return all(omega[g(i)] == omega[i] for i in g.support)


def cocycle_sign(g: Perm, omega: Configuration) -> int:
    _check_fits(g, omega)
    top = g.max_support()
    positions = [i for i in range(1, top + 1) if isinstance(omega[i], Minus)]
    return restricted_inversion_parity(g, positions)


def phi(g: Perm, omega: Configuration) -> int:
    if not is_fixed(g, omega):
        return 0
    return cocycle_sign(g, omega)


def stabilizer_indicator(g: Perm, omega: Configuration) -> int:
    """The untwisted IRS: 1 on Stab(ω), 0 elsewhere."""
    return 1 if is_fixed(g, omega) else 0


# -- generic cocycle construction ------------------------------------------


@dataclass(frozen=True)
class Action:
    """A measure-preserving action: how to sample a point and how g moves it."""

    sample: Callable[[np.random.Generator], Any]
    act: Callable[[Any, Any], Any]
    group: Any = PERMS


@dataclass(frozen=True)
class CocycleIrpdf:
    action: Action
    cocycle: Callable[[Any, Any], complex]

    def evaluate(self, g, omega) -> complex:
        if self.action.act(g, omega) != omega:
            return 0
        return self.cocycle(g, omega)

    def at(self, omega) -> PDFunctionView:
        return PDFunctionView(lambda g: self.evaluate(g, omega), self.action.group)


def make_cocycle_irpdf(action: Action, cocycle: Callable[[Any, Any], complex]) -> CocycleIrpdf:
    return CocycleIrpdf(action, cocycle)


def vk_action(params: ThomaParams, n: int) -> Action:
    return Action(sample=lambda rng: sample_config(params, n, rng), act=act)


def constant_cocycle(g, omega) -> int:
    return 1


# -- vectorized batches for Monte Carlo --------------------------------------


@dataclass(frozen=True)
class ConfigBatch:
    """Many configurations at once: codes/values arrays of shape (N, n)."""

    codes: np.ndarray
    values: np.ndarray
    params: ThomaParams

    @classmethod
    def from_stream(cls, params: ThomaParams, n: int, seed: int, indices) -> "ConfigBatch":
        codes, values = encode_uniforms(params, streams.uniforms(seed, indices, n))
        return cls(codes, values, params)

    def config(self, row: int) -> Configuration:
        return Configuration(
            tuple(_decode(c, v) for c, v in zip(self.codes[row], self.values[row])), self.params
        )

    def fixed(self, g: Perm) -> np.ndarray:
        if g.max_support() > self.codes.shape[1]:
            raise ValueError(f"permutation {g} exceeds batch width {self.codes.shape[1]}")
        out = np.ones(self.codes.shape[0], dtype=bool)
        for i in g.support:
            j = g(i)
            out &= self.codes[:, j - 1] == self.codes[:, i - 1]
            out &= self.values[:, j - 1] == self.values[:, i - 1]
        return out

    def cocycle_sign(self, g: Perm) -> np.ndarray:
        top = g.max_support()
        pairs = [(a, b) for a in range(1, top + 1) for b in range(a + 1, top + 1) if g(a) > g(b)]
        if not pairs:
            return np.ones(self.codes.shape[0], dtype=np.int64)
        minus = self.codes[:, :top] < 0
        A = np.array([a - 1 for a, _ in pairs])
        B = np.array([b - 1 for _, b in pairs])
        m = (minus[:, A] & minus[:, B]).sum(axis=1)
        return np.where(m % 2 == 1, -1, 1)

    def phi(self, g: Perm) -> np.ndarray:
        return np.where(self.fixed(g), self.cocycle_sign(g), 0)


def averaged_view(params: ThomaParams, samples: int, seed: int, width: int, twisted: bool = True) -> PDFunctionView:
    """Empirical mean of φ_ω over ``samples`` configurations of the given width.

    An average of positive definite functions, so again positive definite.
    """
    batch = ConfigBatch.from_stream(params, max(1, width), seed, np.arange(samples))

    def evaluate(g: Perm) -> float:
        vals = batch.phi(g) if twisted else batch.fixed(g)
        return float(np.mean(vals))

    return PDFunctionView(evaluate, PERMS)
