"""Minimal group adapters: just enough structure to form g_j⁻¹ g_i."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Hashable, Protocol, Sequence

import numpy as np

from .perm import Perm, compose, inverse


class Group(Protocol):
    identity: Any

    def mul(self, a, b): ...

    def inv(self, a): ...


class PermGroup:
    """Finitary permutations under composition."""

    identity = Perm()

    def mul(self, a: Perm, b: Perm) -> Perm:
        return compose(a, b)

    def inv(self, a: Perm) -> Perm:
        return inverse(a)


class IntegerGroup:
    """The integers under addition."""

    identity = 0

    def mul(self, a: int, b: int) -> int:
        return a + b

    def inv(self, a: int) -> int:
        return -a


class MatrixGroup:
    """Unitary n×n matrices; the inverse is the conjugate transpose."""

    def __init__(self, n: int):
        self.n = n
        self.identity = np.eye(n, dtype=complex)

    def mul(self, a, b):
        return np.asarray(a) @ np.asarray(b)

    def inv(self, a):
        return np.asarray(a).conj().T


PERMS = PermGroup()
INTEGERS = IntegerGroup()


@dataclass
class FiniteGroup:
    """A finite group on elements 0..n-1 given by its multiplication table.

    ``table[a][b]`` is the index of the product ab. ``labels`` optionally keeps
    the objects the indices stand for.
    """

    table: np.ndarray
    labels: list[Hashable] | None = None
    identity: int = field(init=False)
    _inv: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.int64)
        n = t.shape[0]
        if t.shape != (n, n):
            raise ValueError("multiplication table must be square")
        rng = np.arange(n)
        for row in t:
            if sorted(row) != list(rng):
                raise ValueError("multiplication table rows must be permutations (Latin square)")
        ids = [e for e in range(n) if np.array_equal(t[e], rng) and np.array_equal(t[:, e], rng)]
        if len(ids) != 1:
            raise ValueError("multiplication table has no identity element")
        self.table = t
        self.identity = ids[0]
        self._inv = np.array([int(np.nonzero(t[a] == self.identity)[0][0]) for a in range(n)])
        # exhaustive associativity check is cheap at these sizes
        if n <= 200:
            for a in range(n):
                if not np.array_equal(t[t[a]], t[a][t]):
                    raise ValueError("multiplication table is not associative")

    def __len__(self) -> int:
        return self.table.shape[0]

    @property
    def elements(self) -> list[int]:
        return list(range(len(self)))

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self._inv[a])

    def index(self, label: Hashable) -> int:
        if self.labels is None:
            raise ValueError("group has no labels")
        return self.labels.index(label)

    @classmethod
    def from_elements(cls, elements: Sequence[Hashable], mul) -> "FiniteGroup":
        """Tabulate a group from an explicit element list closed under ``mul``."""
        lookup = {x: i for i, x in enumerate(elements)}
        n = len(elements)
        table = np.empty((n, n), dtype=np.int64)
        for i, a in enumerate(elements):
            for j, b in enumerate(elements):
                try:
                    table[i, j] = lookup[mul(a, b)]
                except KeyError:
                    raise ValueError(f"element list not closed: {a} * {b}") from None
        return cls(table, list(elements))


def symmetric_group(n: int) -> FiniteGroup:
    """S_n as finitary permutations supported in {1..n}, identity first."""
    elems = []
    for img in itertools.permutations(range(1, n + 1)):
        elems.append(Perm(dict(zip(range(1, n + 1), img))))
    elems.sort(key=lambda p: (len(p.support), str(p)))
    return FiniteGroup.from_elements(elems, compose)


def _matrix_key(m: np.ndarray, decimals: int) -> bytes:
    r = np.round(m, decimals) + 0.0  # collapse -0.0
    return r.tobytes()


def close_matrix_group(generators: Sequence[np.ndarray], limit: int = 10_000, decimals: int = 8) -> list[np.ndarray]:
    """All products of the generators, by orbit enumeration from the identity.

    Raises if more than ``limit`` distinct matrices appear; use :func:`word_ball`
    for infinite groups.
    """
    gens = [np.asarray(g, dtype=complex) for g in generators]
    if not gens:
        raise ValueError("need at least one generator")
    n = gens[0].shape[0]
    ident = np.eye(n, dtype=complex)
    seen = {_matrix_key(ident, decimals): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = g @ x
                k = _matrix_key(y, decimals)
                if k not in seen:
                    seen[k] = y
                    nxt.append(y)
                    if len(seen) > limit:
                        raise ValueError(f"group generated exceeds {limit} elements; use a word ball")
        frontier = nxt
    return list(seen.values())


def word_ball(generators: Sequence[np.ndarray], radius: int, decimals: int = 8) -> list[np.ndarray]:
    """Distinct products of at most ``radius`` generators or their inverses."""
    gens = [np.asarray(g, dtype=complex) for g in generators]
    gens = gens + [g.conj().T for g in gens]
    n = gens[0].shape[0]
    ident = np.eye(n, dtype=complex)
    seen = {_matrix_key(ident, decimals): ident}
    frontier = [ident]
    for _ in range(radius):
        nxt = []
        for x in frontier:
            for g in gens:
                y = g @ x
                k = _matrix_key(y, decimals)
                if k not in seen:
                    seen[k] = y
                    nxt.append(y)
        frontier = nxt
    return list(seen.values())
