"""Finitary permutations of the positive integers.

A :class:`Perm` moves finitely many points and fixes the rest. Composition
follows ``(p * q)(i) == p(q(i))`` everywhere in this package.
"""

from __future__ import annotations

import re
from collections import Counter
from typing import Iterable, Mapping, Sequence

__all__ = [
    "Perm",
    "from_cycles",
    "compose",
    "inverse",
    "conjugate",
    "cycle_counts",
    "restricted_inversion_parity",
    "sign",
    "parse_perm",
    "parse_perm_list",
]

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


class Perm:
    """Immutable finitary permutation of {1, 2, 3, ...}.

    Only moved points are stored, so two permutations compare equal exactly
    when they are the same group element.
    """

    __slots__ = ("_map", "_hash")

    def __init__(self, images: Mapping[int, int] | None = None):
        m = {int(i): int(j) for i, j in (images or {}).items() if i != j}
        if any(i < 1 for i in m) or set(m) != set(m.values()):
            raise ValueError(f"not a permutation of its support: {dict(images or {})}")
        self._map = m
        self._hash = hash(frozenset(m.items()))

    @classmethod
    def identity(cls) -> "Perm":
        return _IDENTITY

    def __call__(self, i: int) -> int:
        return self._map.get(i, i)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self._map)

    @property
    def images(self) -> dict[int, int]:
        return dict(self._map)

    def max_support(self) -> int:
        """Largest moved point, 0 for the identity."""
        return max(self._map, default=0)

    def is_identity(self) -> bool:
        return not self._map

    def __mul__(self, other: "Perm") -> "Perm":
        return compose(self, other)

    def __invert__(self) -> "Perm":
        return inverse(self)

    def __pow__(self, k: int) -> "Perm":
        base = self if k >= 0 else inverse(self)
        out = _IDENTITY
        for _ in range(abs(k)):
            out = compose(base, out)
        return out

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Perm) and self._map == other._map

    def __hash__(self) -> int:
        return self._hash

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each starting at its smallest point, sorted."""
        seen: set[int] = set()
        out = []
        for start in sorted(self._map):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            j = self._map[start]
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self._map[j]
            out.append(tuple(cyc))
        return out

    def order(self) -> int:
        from math import lcm

        return lcm(*(len(c) for c in self.cycles())) if self._map else 1

    def __str__(self) -> str:
        if not self._map:
            return "e"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles())

    def __repr__(self) -> str:
        return f"Perm({str(self)!r})"


_IDENTITY = Perm()


def from_cycles(cycles: Iterable[Sequence[int]]) -> Perm:
    """Product of disjoint cycles. ``from_cycles([])`` is the identity."""
    images: dict[int, int] = {}
    seen: set[int] = set()
    for cyc in cycles:
        cyc = [int(x) for x in cyc]
        for x in cyc:
            if x < 1:
                raise ValueError(f"cycle entries must be positive integers, got {x}")
            if x in seen:
                raise ValueError(f"point {x} appears more than once in the cycles")
            seen.add(x)
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            images[a] = b
    return Perm(images)


def compose(p: Perm, q: Perm) -> Perm:
    """Return p∘q, i.e. the map i -> p(q(i))."""
    pts = p._map.keys() | q._map.keys()
    return Perm({i: p(q(i)) for i in pts})


def inverse(p: Perm) -> Perm:
    return Perm({j: i for i, j in p._map.items()})


def conjugate(g: Perm, h: Perm) -> Perm:
    """Return h g h⁻¹ by relabelling the support of g through h."""
    return Perm({h(i): h(j) for i, j in g._map.items()})


def cycle_counts(p: Perm) -> dict[int, int]:
    """Map k -> number of k-cycles (k >= 2)."""
    return dict(sorted(Counter(len(c) for c in p.cycles()).items()))


def restricted_inversion_parity(p: Perm, positions: Sequence[int]) -> int:
    """Sign of the product of (p(b) - p(a)) over pairs a < b drawn from ``positions``.

    ``positions`` must be strictly increasing; the count of inverted pairs is
    done directly in O(m²).
    """
    pos = list(positions)
    for a, b in zip(pos, pos[1:]):
        if not a < b:
            raise ValueError(f"positions must be strictly increasing, got {a} before {b}")
    imgs = [p(a) for a in pos]
    m = 0
    for i in range(len(imgs)):
        pi = imgs[i]
        for j in range(i + 1, len(imgs)):
            if pi > imgs[j]:
                m += 1
    return -1 if m % 2 else 1


def sign(p: Perm) -> int:
    """Ordinary permutation sign, from the cycle type."""
    s = 1
    for k, r in cycle_counts(p).items():
        if (k % 2 == 0) and (r % 2 == 1):
            s = -s
    return s


def parse_perm(text: str) -> Perm:
    """Parse disjoint-cycle notation such as ``"(1 2)(3 4 5)"``; ``"e"`` is the identity."""
    t = text.strip()
    if t in ("e", "", "()"):
        return _IDENTITY
    leftover = _CYCLE_RE.sub("", t).strip()
    if leftover:
        raise ValueError(f"cannot parse permutation {text!r}")
    cycles = []
    for body in _CYCLE_RE.findall(t):
        parts = body.replace(",", " ").split()
        if not parts:
            continue
        cycles.append([int(x) for x in parts])
    return from_cycles(cycles)


def parse_perm_list(text: str) -> list[Perm]:
    """Parse a ``;``-separated list of permutations."""
    return [parse_perm(s) for s in text.split(";") if s.strip()]
