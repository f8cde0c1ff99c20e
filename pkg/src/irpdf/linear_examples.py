"""Linear-algebraic random positive definite functions.

Sphere vectors under a unitary group, characters z^k of Z on the circle,
matrix coefficients of a unitary representation along a Haar-random orbit,
and the point-stabilizer IRS of S_n.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from . import streams
from .perm import Perm

UNIT_TOL = 1e-12
UNITARY_TOL = 1e-9


def _as_unit_vector(xi) -> np.ndarray:
    xi = np.asarray(xi, dtype=complex)
    if xi.ndim != 1:
        raise ValueError("expected a vector")
    if abs(np.linalg.norm(xi) - 1.0) > UNIT_TOL:
        raise ValueError(f"vector has norm {np.linalg.norm(xi)!r}, expected 1")
    return xi


def check_unitary(U, tol: float = UNITARY_TOL) -> np.ndarray:
    U = np.asarray(U, dtype=complex)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {U.shape}")
    err = np.linalg.norm(U.conj().T @ U - np.eye(U.shape[0]), 2)
    if err > tol:
        raise ValueError(f"matrix is not unitary (|U*U - I| = {err:.3e})")
    return U


def sample_sphere(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform point on the unit sphere of C^n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return z / np.linalg.norm(z)


def sphere_batch(n: int, seed: int, indices) -> np.ndarray:
    """Rows are sphere samples drawn from the per-index streams."""
    g = streams.normals(seed, indices, 2 * n)
    z = g[:, :n] + 1j * g[:, n:]
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def sphere_phi(gamma, xi) -> complex:
    """<γξ, ξ>, linear in the first slot."""
    gamma = np.asarray(gamma, dtype=complex)
    xi = _as_unit_vector(xi)
    if gamma.shape != (xi.size, xi.size):
        raise ValueError(f"dimension mismatch: matrix {gamma.shape}, vector {xi.size}")
    return complex(np.vdot(xi, gamma @ xi))


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed element of U(n).

    QR of a complex Ginibre matrix, with the columns of Q rescaled by the
    phases of diag(R) so the law does not depend on the QR sign convention.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))[None, :]


def rep_phi(pi: Callable, g, h, xi, mul: Callable | None = None) -> complex:
    """<π(hg)ξ, π(g)ξ>.

    ``mul`` is the group law used to form hg; by default matrix product, which
    covers the case where group elements are themselves unitary matrices.
    """
    xi = _as_unit_vector(xi)
    hg = mul(h, g) if mul is not None else np.asarray(h) @ np.asarray(g)
    A = np.asarray(pi(hg), dtype=complex)
    B = np.asarray(pi(g), dtype=complex)
    if A.shape != (xi.size, xi.size) or B.shape != A.shape:
        raise ValueError("dimension mismatch between representation and vector")
    return complex(np.vdot(B @ xi, A @ xi))


def check_homomorphism(pi: Callable, elements: Sequence, mul: Callable, pairs: int | None = None,
                       rng: np.random.Generator | None = None, tol: float = UNITARY_TOL) -> None:
    """Verify π(ab) = π(a)π(b).

    Exhaustive when ``pairs`` is None (use for finite groups up to ~10³
    elements), otherwise on ``pairs`` random pairs.
    """
    els = list(elements)
    if pairs is None:
        todo = ((a, b) for a in els for b in els)
    else:
        rng = rng or np.random.default_rng(0)
        idx = rng.integers(0, len(els), size=(pairs, 2))
        todo = ((els[i], els[j]) for i, j in idx)
    for a, b in todo:
        lhs = np.asarray(pi(mul(a, b)))
        rhs = np.asarray(pi(a)) @ np.asarray(pi(b))
        err = np.linalg.norm(lhs - rhs, 2)
        if err > tol:
            raise ValueError(f"representation is not a homomorphism on ({a}, {b}): error {err:.3e}")


def circle_phi(z: complex, k: int) -> complex:
    if abs(abs(z) - 1.0) > UNIT_TOL:
        raise ValueError(f"|z| = {abs(z)!r}, expected 1")
    return complex(z) ** int(k)


def circle_batch(seed: int, indices) -> np.ndarray:
    u = streams.uniforms(seed, indices, 1)[:, 0]
    return np.exp(2j * np.pi * u)


def sn_irs_phi(i: int, sigma: Perm, n: int) -> int:
    """Indicator that σ fixes the point i of {1..n}."""
    if not 1 <= i <= n:
        raise ValueError(f"point {i} outside 1..{n}")
    if sigma.max_support() > n:
        raise ValueError(f"{sigma} is not a permutation of 1..{n}")
    return 1 if sigma(i) == i else 0


def permutation_matrix(sigma: Perm, n: int) -> np.ndarray:
    """Matrix sending basis vector e_i to e_σ(i)."""
    P = np.zeros((n, n))
    for i in range(1, n + 1):
        P[sigma(i) - 1, i - 1] = 1.0
    return P
