"""Witnesses for infinite conjugacy classes in finitary S_∞."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from . import streams
from .perm import Perm, conjugate


@dataclass(frozen=True)
class WitnessReport:
    witness: Perm
    conjugated_set: tuple[Perm, ...]
    verified: bool

    def to_dict(self) -> dict:
        return {
            "witness": str(self.witness),
            "conjugated_set": [str(p) for p in self.conjugated_set],
            "verified": self.verified,
        }


def shift_witness(M: int) -> Perm:
    """γ = (1, M+1)(2, M+2)...(M, 2M)."""
    images = {}
    for i in range(1, M + 1):
        images[i] = M + i
        images[M + i] = i
    return Perm(images)


def displacing_element(F: Iterable[Perm]) -> WitnessReport:
    """Find γ with γFγ⁻¹ ∩ F ⊆ {e}.

    Swapping [1, M] with [M+1, 2M], M the largest moved point in F, pushes every
    support off itself, so conjugates of nontrivial elements land outside F.
    """
    F = list(F)
    M = max((f.max_support() for f in F), default=0)
    gamma = shift_witness(M)
    conj = tuple(conjugate(f, gamma) for f in F)
    members = set(F)
    verified = all(c.is_identity() or c not in members for c in conj)
    if not verified:
        raise AssertionError(f"displacing element {gamma} failed to displace {F}")
    return WitnessReport(gamma, conj, verified)


def conjugacy_lower_bound(g: Perm, k: int, seed: int = 0) -> int:
    """Number of distinct conjugates h g h⁻¹ over k random conjugators.

    Conjugator i is uniform on the permutations of [1, max(support(g)) + i + 1]
    and drawn from its own (seed, i) stream, so the bound for k is computed on a
    prefix of the draws for any larger k.
    """
    top = g.max_support()
    seen = set()
    for i in range(k):
        img = streams.generator(seed, i).permutation(top + i + 1) + 1
        # only h restricted to support(g) matters for h g h⁻¹
        seen.add(Perm({int(img[a - 1]): int(img[b - 1]) for a, b in g.images.items()}))
    return max(len(seen), 1)
