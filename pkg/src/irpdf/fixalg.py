"""Fixed-point algebras of matrix-valued functions on a finite action space.

A finite group G acts on points Ω (weights μ) and unitarily on C^d through an
irreducible representation π. A matrix field is an array ``f`` of shape
``(|Ω|, d, d)``; G acts on fields by

    (θ_γ f)_{γ.ω} = π(γ) f_ω π(γ)⁻¹,

and the invariant fields form a finite-dimensional *-algebra. Positive
invariant fields with Σ_ω μ(ω) f_ω = 1 are the same thing as random positive
definite functions ω ↦ (γ ↦ tr(π(γ) f_ω)/d) integrating to tr∘π/d; minimal
projections of the algebra give the extremal ones.

Fields carry the inner product <f, g> = Σ_ω μ(ω) tr(f_ω* g_ω)/d and trace
τ_M(f) = Σ_ω μ(ω) tr(f_ω)/d.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

from .groups import FiniteGroup
from .linear_examples import check_unitary
from .pd import PDFunctionView

TOL = 1e-9


@dataclass
class Representation:
    """Unitary matrices ``matrices[g]`` for the elements g of a finite group."""

    group: FiniteGroup
    matrices: np.ndarray

    def __post_init__(self):
        mats = np.asarray(self.matrices, dtype=complex)
        if mats.ndim != 3 or mats.shape[0] != len(self.group) or mats.shape[1] != mats.shape[2]:
            raise ValueError(f"expected {len(self.group)} square matrices, got shape {mats.shape}")
        for m in mats:
            check_unitary(m)
        G = self.group
        for a in G.elements:
            for b in G.elements:
                err = np.linalg.norm(mats[G.mul(a, b)] - mats[a] @ mats[b], 2)
                if err > TOL:
                    raise ValueError(f"not a homomorphism at ({a}, {b}): error {err:.3e}")
        self.matrices = mats

    @property
    def dim(self) -> int:
        return self.matrices.shape[1]

    def __call__(self, g: int) -> np.ndarray:
        return self.matrices[g]

    def character(self, g: int) -> complex:
        """Normalized character tr(π(g))/d."""
        return complex(np.trace(self.matrices[g])) / self.dim

    def is_irreducible(self, tol: float = TOL) -> bool:
        """Schur test: the character has norm one, (1/|G|) Σ |tr π(g)|² = 1."""
        traces = np.trace(self.matrices, axis1=1, axis2=2)
        return abs(float(np.mean(np.abs(traces) ** 2)) - 1.0) <= tol


@dataclass
class FiniteActionSpace:
    """Points 0..m-1 with weights; ``table[g][w]`` is the point g.w."""

    group: FiniteGroup
    table: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.int64)
        G = self.group
        if t.ndim != 2 or t.shape[0] != len(G):
            raise ValueError("action table needs one row per group element")
        m = t.shape[1]
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (m,):
            raise ValueError(f"expected {m} weights, got shape {w.shape}")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {w.sum()!r}, not 1")
        if (w <= 0).any():
            raise ValueError("weights must be strictly positive")
        if not np.array_equal(t[G.identity], np.arange(m)):
            raise ValueError("identity does not act trivially")
        for a in G.elements:
            if sorted(t[a]) != list(range(m)):
                raise ValueError(f"element {a} does not act bijectively")
            for b in G.elements:
                if not np.array_equal(t[G.mul(a, b)], t[a][t[b]]):
                    raise ValueError(f"action table is not an action at ({a}, {b})")
            if not np.array_equal(w[t[a]], w):
                raise ValueError(f"weights are not invariant under element {a}")
        self.table = t
        self.weights = w

    def __len__(self) -> int:
        return self.table.shape[1]

    def act(self, g: int, point: int) -> int:
        return int(self.table[g, point])

    def is_transitive(self) -> bool:
        return len(set(self.table[:, 0])) == len(self)

    @classmethod
    def uniform(cls, group: FiniteGroup, table) -> "FiniteActionSpace":
        t = np.asarray(table)
        return cls(group, t, np.full(t.shape[1], 1.0 / t.shape[1]))


def left_multiplication_space(group: FiniteGroup) -> FiniteActionSpace:
    """G acting on itself by left multiplication, uniform weights."""
    return FiniteActionSpace.uniform(group, group.table.copy())


def point_space(group: FiniteGroup) -> FiniteActionSpace:
    return FiniteActionSpace.uniform(group, np.zeros((len(group), 1), dtype=np.int64))


# -- field arithmetic --------------------------------------------------------


def identity_field(m: int, d: int) -> np.ndarray:
    return np.broadcast_to(np.eye(d, dtype=complex), (m, d, d)).copy()


def adjoint(f: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(f, -1, -2))


def field_inner(f: np.ndarray, g: np.ndarray, weights: np.ndarray) -> complex:
    d = f.shape[-1]
    return complex(np.einsum("w,wij,wij->", weights, np.conj(f), g)) / d


def field_norm(f: np.ndarray, weights: np.ndarray) -> float:
    return float(np.sqrt(max(field_inner(f, f, weights).real, 0.0)))


def tau_M(f: np.ndarray, weights: np.ndarray) -> complex:
    d = f.shape[-1]
    return complex(np.einsum("w,wii->", weights, f)) / d


def theta(f: np.ndarray, g: int, space: FiniteActionSpace, rep: Representation) -> np.ndarray:
    """The field θ_g f."""
    P = rep(g)
    out = np.empty_like(f)
    out[space.table[g]] = P[None] @ f @ P.conj().T[None]
    return out


def invariance_residual(f: np.ndarray, space: FiniteActionSpace, rep: Representation,
                        generators: Sequence[int] | None = None) -> float:
    gens = space.group.elements if generators is None else generators
    return max(field_norm(theta(f, g, space, rep) - f, space.weights) for g in gens)


# -- fixed space -------------------------------------------------------------


@dataclass
class FixedPointBasis:
    """Orthonormal basis (shape (k, |Ω|, d, d)) of the invariant fields."""

    basis: np.ndarray
    space: FiniteActionSpace
    rep: Representation

    @property
    def dimension(self) -> int:
        return self.basis.shape[0]

    @property
    def weights(self) -> np.ndarray:
        return self.space.weights

    def coords(self, f: np.ndarray) -> np.ndarray:
        d = f.shape[-1]
        return np.einsum("w,kwij,wij->k", self.weights, np.conj(self.basis), f) / d

    def expand(self, c: np.ndarray) -> np.ndarray:
        return np.tensordot(c, self.basis, axes=1)

    def residual(self, f: np.ndarray) -> float:
        """Distance from f to the span of the basis."""
        return field_norm(f - self.expand(self.coords(f)), self.weights)

    def identity(self) -> np.ndarray:
        return identity_field(len(self.space), self.rep.dim)


def fixed_space(space: FiniteActionSpace, rep: Representation,
                generators: Sequence[int] | None = None) -> FixedPointBasis:
    """Solve f_{γ.ω} = π(γ) f_ω π(γ)⁻¹ for all generators γ and points ω.

    Unknowns are rescaled by sqrt(μ(ω)/d) so that an SVD null space is
    orthonormal for the weighted trace inner product.
    """
    if rep.group is not space.group:
        raise ValueError("representation and action must be over the same group")
    G = space.group
    gens = G.elements if generators is None else list(generators)
    m, d = len(space), rep.dim
    dd = d * d
    rows = []
    for g in gens:
        P = rep(g)
        K = np.kron(P, P.conj())  # row-major vec(P X P*) = (P ⊗ conj P) vec(X)
        for w in range(m):
            block = np.zeros((dd, m * dd), dtype=complex)
            tw = space.act(g, w)
            block[:, tw * dd:(tw + 1) * dd] += np.eye(dd)
            block[:, w * dd:(w + 1) * dd] -= K
            rows.append(block)
    A = np.vstack(rows)
    scale = np.repeat(np.sqrt(space.weights / d), dd)
    N = scipy.linalg.null_space(A / scale[None, :], rcond=1e-10)
    fields = (N / scale[:, None]).T.reshape(-1, m, d, d)
    basis = FixedPointBasis(fields, space, rep)
    for f in fields:
        r = invariance_residual(f, space, rep)
        if r > TOL:
            raise ArithmeticError(f"fixed-space basis element has invariance residual {r:.3e}")
    return basis


# -- algebra structure -------------------------------------------------------


def check_closure(basis: FixedPointBasis, tol: float = TOL) -> float:
    """Largest re-expansion residual of products and adjoints of basis elements."""
    worst = 0.0
    B = basis.basis
    for a in B:
        worst = max(worst, basis.residual(adjoint(a)))
        for b in B:
            worst = max(worst, basis.residual(a @ b))
    if worst > tol:
        raise ArithmeticError(f"fixed space is not a *-algebra (residual {worst:.3e})")
    return worst


def _spectral_projections(h: np.ndarray, support: np.ndarray | None = None,
                          gap: float = 1e-6) -> list[np.ndarray]:
    """Spectral projections of a Hermitian field, optionally inside a projection field.

    Eigenvalues are pooled across points and clustered; each cluster gives one
    projection field.
    """
    m, d, _ = h.shape
    vecs, vals, owner = [], [], []
    for w in range(m):
        if support is None:
            Q = np.eye(d, dtype=complex)
        else:
            ev, V = np.linalg.eigh((support[w] + support[w].conj().T) / 2)
            Q = V[:, ev > 0.5]
        if Q.shape[1] == 0:
            continue
        hw = Q.conj().T @ ((h[w] + h[w].conj().T) / 2) @ Q
        ev, V = np.linalg.eigh(hw)
        for k in range(len(ev)):
            vals.append(ev[k])
            vecs.append(Q @ V[:, k])
            owner.append(w)
    order = np.argsort(vals)
    clusters: list[list[int]] = []
    last = None
    for i in order:
        if last is None or vals[i] - last > gap:
            clusters.append([])
        clusters[-1].append(i)
        last = vals[i]
    out = []
    for cl in clusters:
        p = np.zeros((m, d, d), dtype=complex)
        for i in cl:
            v = vecs[i]
            p[owner[i]] += np.outer(v, v.conj())
        out.append(p)
    return out


def _random_hermitian(basis: FixedPointBasis, rng: np.random.Generator) -> np.ndarray:
    c = rng.standard_normal(basis.dimension) + 1j * rng.standard_normal(basis.dimension)
    a = basis.expand(c)
    return (a + adjoint(a)) / 2


def center(basis: FixedPointBasis) -> np.ndarray:
    """Coefficient vectors (rows) spanning the center of the algebra."""
    B = basis.basis
    k = basis.dimension
    blocks = []
    for b in B:
        cols = [(a @ b - b @ a).ravel() for a in B]
        blocks.append(np.stack(cols, axis=1))
    C = np.vstack(blocks)
    return scipy.linalg.null_space(C, rcond=1e-10).T if k else np.zeros((0, 0))


def compressed_dimension(p: np.ndarray, basis: FixedPointBasis) -> int:
    """Dimension of p M p, read off from the numerical rank of {p b p}."""
    stack = np.stack([basis.coords(p @ b @ p) for b in basis.basis])
    s = np.linalg.svd(stack, compute_uv=False)
    return int((s > 1e-7 * max(1.0, s[0])).sum())


def minimal_projections(basis: FixedPointBasis, seed: int = 0, attempts: int = 20) -> list[np.ndarray]:
    """An orthogonal family of minimal projections of the algebra summing to 1.

    Central projections come from a generic Hermitian element of the center;
    each block is then split by the spectral projections of a generic
    Hermitian element compressed to it. ``seed`` picks the generic elements,
    so different seeds give different (unitarily rotated) families.
    """
    check_closure(basis)
    w = basis.weights
    one = basis.identity()
    if basis.dimension == 1:
        return [one]
    rng = np.random.default_rng(seed)
    Z = center(basis)
    for _ in range(attempts):
        zc = rng.standard_normal(Z.shape[0]) @ Z
        z = basis.expand(zc)
        z = (z + adjoint(z)) / 2
        family: list[np.ndarray] = []
        for zp in _spectral_projections(z):
            a = _random_hermitian(basis, rng)
            family.extend(_spectral_projections(zp @ a @ zp, support=zp))
        if _valid_family(family, basis, one, w):
            return family
    raise ArithmeticError("could not split the algebra into minimal projections")


def _valid_family(family, basis, one, w) -> bool:
    if field_norm(sum(family) - one, w) > TOL:
        return False
    for i, p in enumerate(family):
        if field_norm(p @ p - p, w) > TOL or field_norm(adjoint(p) - p, w) > TOL:
            return False
        if basis.residual(p) > TOL:
            return False
        if compressed_dimension(p, basis) != 1:
            return False
        for q in family[i + 1:]:
            if field_norm(p @ q, w) > TOL:
                return False
    return True


# -- correspondence with random positive definite functions -------------------


@dataclass
class ExpectationCheck:
    holds: bool
    residual: float
    tau: float

    def __bool__(self) -> bool:
        return self.holds


def expectation_identity_check(f: np.ndarray, space: FiniteActionSpace, tol: float = TOL) -> ExpectationCheck:
    """Test Σ_ω μ(ω) f_ω = τ_M(f)·1."""
    w = space.weights
    d = f.shape[-1]
    avg = np.einsum("w,wij->ij", w, f)
    t = tau_M(f, w)
    res = float(np.linalg.norm(avg - t * np.eye(d), 2))
    return ExpectationCheck(res <= tol, res, float(t.real))


@dataclass
class FieldIrpdf:
    """ω ↦ (γ ↦ tr(π(γ) f_ω)/d) for a positive invariant field f with τ_M(f) = 1."""

    field: np.ndarray
    rep: Representation
    space: FiniteActionSpace

    def evaluate(self, point: int, g: int) -> complex:
        return complex(np.trace(self.rep(g) @ self.field[point])) / self.rep.dim

    def at(self, point: int) -> PDFunctionView:
        return PDFunctionView(lambda g: self.evaluate(point, g), self.space.group)

    def table(self) -> np.ndarray:
        """values[ω, γ]."""
        return np.einsum("gij,wji->wg", self.rep.matrices, self.field) / self.rep.dim


def irpdf_from_positive_element(f: np.ndarray, rep: Representation, space: FiniteActionSpace,
                                tol: float = TOL) -> FieldIrpdf:
    f = np.asarray(f, dtype=complex)
    m, d = len(space), rep.dim
    if f.shape != (m, d, d):
        raise ValueError(f"field has shape {f.shape}, expected {(m, d, d)}")
    r = invariance_residual(f, space, rep)
    if r > tol:
        raise ValueError(f"field is not invariant: residual {r:.3e} > {tol:g}")
    for w in range(m):
        herm = np.linalg.norm(f[w] - f[w].conj().T, 2)
        if herm > tol:
            raise ValueError(f"f at point {w} is not selfadjoint: |f - f*| = {herm:.3e}")
        lam = np.linalg.eigvalsh((f[w] + f[w].conj().T) / 2)[0]
        if lam < -tol:
            raise ValueError(f"f at point {w} is not positive: min eigenvalue {lam:.3e} < 0")
    t = tau_M(f, space.weights)
    if abs(t - 1) > tol:
        raise ValueError(f"tau_M(f) = {t.real:.12g}, expected 1")
    return FieldIrpdf(f, rep, space)


def normalized(p: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """τ_M(p)⁻¹ p."""
    return p / tau_M(p, weights).real


# -- stock representations ---------------------------------------------------


def standard_representation(group: FiniteGroup, n: int) -> Representation:
    """The (n-1)-dimensional irreducible representation of S_n.

    ``group`` must be labelled by permutations of 1..n, e.g. from
    :func:`irpdf.groups.symmetric_group`.
    """
    from .linear_examples import permutation_matrix

    # orthonormal basis of the sum-zero hyperplane
    H = scipy.linalg.null_space(np.ones((1, n)))
    mats = [H.T @ permutation_matrix(s, n) @ H for s in group.labels]
    return Representation(group, np.array(mats, dtype=complex))


def trivial_representation(group: FiniteGroup) -> Representation:
    return Representation(group, np.ones((len(group), 1, 1), dtype=complex))
