"""Positive definite functions: Gram matrices, PSD certification, finite GNS."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Callable, Sequence

import numpy as np

from .groups import Group

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class PDFunctionView:
    """A function on a group, meant to be positive definite with value 1 at e."""

    evaluate: Callable[[Any], complex]
    group: Group

    def __call__(self, g) -> complex:
        return self.evaluate(g)


@dataclass
class GramReport:
    matrix: np.ndarray
    min_eigenvalue: float
    psd: bool
    tolerance: float

    @property
    def spectral_norm(self) -> float:
        return float(np.linalg.norm(self.matrix, 2))

    def to_dict(self) -> dict:
        m = self.matrix
        return {
            "size": int(m.shape[0]),
            "min_eigenvalue": self.min_eigenvalue,
            "spectral_norm": self.spectral_norm,
            "psd": self.psd,
            "tolerance": self.tolerance,
            "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in m],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


class NotPositiveError(ValueError):
    def __init__(self, report: GramReport):
        super().__init__(
            f"Gram matrix is not positive semidefinite: min eigenvalue {report.min_eigenvalue:.3e}"
        )
        self.report = report


def gram(phi: PDFunctionView, elements: Sequence) -> np.ndarray:
    """Matrix with entries phi(g_j⁻¹ g_i), Hermitian-symmetrized."""
    if len(elements) == 0:
        raise ValueError("gram needs at least one element")
    G = phi.group
    invs = [G.inv(g) for g in elements]
    m = len(elements)
    A = np.empty((m, m), dtype=complex)
    for i, gi in enumerate(elements):
        for j in range(m):
            A[i, j] = phi(G.mul(invs[j], gi))
    return (A + A.conj().T) / 2


def psd_check(A: np.ndarray, tol: float = DEFAULT_TOL) -> GramReport:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    scale = max(1.0, float(np.linalg.norm(A, 2)))
    asym = float(np.linalg.norm(A - A.conj().T, 2))
    if asym > tol * scale:
        raise ValueError(f"matrix is not Hermitian (asymmetry {asym:.3e})")
    H = (A + A.conj().T) / 2
    w = np.linalg.eigvalsh(H)
    lam = float(w[0])
    return GramReport(H, lam, lam >= -tol * scale, tol)


def gns_vectors(phi: PDFunctionView, elements: Sequence, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Rows v_i with <v_i, v_j> = phi(g_j⁻¹ g_i), in dimension r = numerical rank.

    The inner product is linear in the first slot: <v, w> = Σ v_k conj(w_k).
    """
    A = gram(phi, elements)
    report = psd_check(A, tol)
    if not report.psd:
        raise NotPositiveError(report)
    w, V = np.linalg.eigh(report.matrix)
    norm = max(float(np.abs(w).max()), 0.0)
    keep = w > tol * norm
    return V[:, keep] * np.sqrt(w[keep])[None, :]


def inner_products(vectors: np.ndarray) -> np.ndarray:
    """Matrix of <v_i, v_j> for rows v_i."""
    return vectors @ vectors.conj().T
