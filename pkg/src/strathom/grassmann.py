"""Subspace arithmetic in R^n.

A :class:`Subspace` is a point of a Grassmannian, held as a column-
orthonormal basis.  Bases are non-canonical, so subspaces are only ever
compared through principal angles; the distance between two subspaces of
equal dimension is their largest principal angle, which makes statements
like "v stays at angle >= eps from the limit" directly readable off the
numbers.

Rank decisions use a relative singular-value cutoff (RTOL times the
largest singular value) with a tiny absolute floor so that matrices that
are zero up to roundoff get rank 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

RTOL = 1e-8  # relative rank tolerance
ATOL = 1e-12  # absolute floor for singular values
CONTAIN_TOL = 1e-6  # default containment tolerance, radians

__all__ = [
    "Subspace",
    "SubspaceSequence",
    "GrassmannLimit",
    "Containment",
    "span_of",
    "principal_angles",
    "grassmann_distance",
    "subspace_sum",
    "subspace_intersection",
    "kernel",
    "grassmann_limit",
]


def _rank(sv: np.ndarray, rtol: float = RTOL) -> int:
    if sv.size == 0:
        return 0
    cut = max(rtol * float(sv[0]), ATOL)
    return int(np.count_nonzero(sv > cut))


def _orthonormal_range(mat: np.ndarray, rtol: float = RTOL) -> np.ndarray:
    """Orthonormal basis of the column span, rank-revealing via SVD."""
    if mat.size == 0:
        return np.zeros((mat.shape[0], 0))
    u, sv, _ = np.linalg.svd(mat, full_matrices=False)
    return u[:, : _rank(sv, rtol)]


@dataclass(frozen=True)
class Subspace:
    """Linear subspace of R^n with an orthonormal basis (n x k)."""

    basis: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=float)
        if b.ndim != 2:
            raise ValueError("basis must be an n x k matrix")
        gram = b.T @ b
        if gram.size and np.max(np.abs(gram - np.eye(b.shape[1]))) > 1e-10:
            raise ValueError("basis columns are not orthonormal")
        b = b.copy()
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def n(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @staticmethod
    def zero(n: int) -> "Subspace":
        return Subspace(np.zeros((n, 0)))

    @staticmethod
    def full(n: int) -> "Subspace":
        return Subspace(np.eye(n))

    def project(self, v: np.ndarray) -> np.ndarray:
        """Orthogonal projection of vectors (..., n) onto the subspace."""
        v = np.asarray(v, dtype=float)
        return (v @ self.basis) @ self.basis.T

    def orthogonal_complement(self) -> "Subspace":
        if self.dim == 0:
            return Subspace.full(self.n)
        u, _, _ = np.linalg.svd(self.basis, full_matrices=True)
        return Subspace(u[:, self.dim :])

    def contains(self, other: "Subspace", tol: float = CONTAIN_TOL) -> "Containment":
        """Whether every direction of ``other`` lies in self, with evidence.

        The worst principal angle between ``other`` and its projection
        onto self is returned together with the unit vector of ``other``
        realizing it.
        """
        _check_ambient(self, other)
        if other.dim == 0:
            return Containment(True, 0.0, None)
        if other.dim > self.dim:
            # at least one direction is lost entirely; find it
            angles, vectors = _angles_with_vectors(self, other)
            return Containment(False, float(angles[-1]), vectors[:, -1])
        angles, vectors = _angles_with_vectors(self, other)
        worst = float(angles[-1]) if angles.size else 0.0
        vec = vectors[:, -1] if angles.size else None
        return Containment(worst < tol, worst, vec)

    def to_json(self) -> list[list[float]]:
        return [list(col) for col in self.basis.T]

    @staticmethod
    def from_json(cols: list[list[float]], n: int) -> "Subspace":
        if not cols:
            return Subspace.zero(n)
        return Subspace(np.array(cols, dtype=float).T)


@dataclass(frozen=True)
class Containment:
    ok: bool
    worst_angle: float
    worst_vector: np.ndarray | None


def _check_ambient(a: Subspace, b: Subspace) -> None:
    if a.n != b.n:
        raise ValueError(f"ambient dimensions differ: {a.n} vs {b.n}")


def span_of(vectors, n: int | None = None, rtol: float = RTOL) -> Subspace:
    """Orthonormalised span of a list of n-vectors (rank-revealing).

    An empty list gives the zero subspace, in which case ``n`` is
    required.
    """
    vecs = [np.asarray(v, dtype=float) for v in vectors]
    if not vecs:
        if n is None:
            raise ValueError("ambient dimension required for an empty span")
        return Subspace.zero(n)
    mat = np.stack(vecs, axis=1)
    if n is not None and mat.shape[0] != n:
        raise ValueError(f"vectors have dimension {mat.shape[0]}, expected {n}")
    return Subspace(_orthonormal_range(mat, rtol))


def _stable_angles(a_basis: np.ndarray, b_basis: np.ndarray) -> np.ndarray:
    """Angles of b against a, ascending, one entry per column of b.

    Cosine-based angles lose half the precision near 0 (arccos of a
    near-1 singular value), so small angles are recomputed from the
    singular values of the residual (I - P_a) b, which is accurate there.
    Directions of b beyond dim a come out as pi/2.
    """
    kb = b_basis.shape[1]
    if kb == 0:
        return np.zeros(0)
    if a_basis.shape[1] == 0:
        return np.full(kb, np.pi / 2)
    cos_sv = np.linalg.svd(a_basis.T @ b_basis, compute_uv=False)
    cos_sv = np.concatenate([np.clip(cos_sv, 0.0, 1.0), np.zeros(kb - cos_sv.size)])
    angles = np.arccos(cos_sv)  # ascending
    small = angles < np.pi / 4
    if np.any(small):
        resid = b_basis - a_basis @ (a_basis.T @ b_basis)
        sin_sv = np.sort(np.clip(np.linalg.svd(resid, compute_uv=False), 0.0, 1.0))
        sin_sv = np.concatenate([np.zeros(kb - sin_sv.size), sin_sv])
        angles = np.where(small, np.arcsin(sin_sv), angles)
    return angles


def _angles_with_vectors(a: Subspace, b: Subspace) -> tuple[np.ndarray, np.ndarray]:
    """Principal angles of b against a, plus principal vectors in b.

    Angles are padded with pi/2 (and matching vectors) for directions of
    b that exceed dim a, so the output always has dim b entries,
    nondecreasing.
    """
    if b.dim == 0:
        return np.zeros(0), np.zeros((b.n, 0))
    if a.dim == 0:
        return np.full(b.dim, np.pi / 2), b.basis.copy()
    angles = _stable_angles(a.basis, b.basis)
    _, _, vt = np.linalg.svd(a.basis.T @ b.basis, full_matrices=True)
    vectors = b.basis @ vt.T
    return angles, vectors


def principal_angles(a: Subspace, b: Subspace) -> np.ndarray:
    """Principal angles between two subspaces, nondecreasing in [0, pi/2].

    Returns min(dim a, dim b) angles; symmetric in its arguments.
    """
    _check_ambient(a, b)
    k = min(a.dim, b.dim)
    if k == 0:
        return np.zeros(0)
    if a.dim >= b.dim:
        return _stable_angles(a.basis, b.basis)[:k]
    return _stable_angles(b.basis, a.basis)[:k]


def grassmann_distance(a: Subspace, b: Subspace) -> float:
    """Largest principal angle, padded to pi/2 on dimension mismatch."""
    _check_ambient(a, b)
    if a.dim != b.dim:
        return np.pi / 2
    if a.dim == 0:
        return 0.0
    return float(principal_angles(a, b)[-1])


def subspace_sum(a: Subspace, b: Subspace, rtol: float = RTOL) -> Subspace:
    _check_ambient(a, b)
    return Subspace(_orthonormal_range(np.hstack([a.basis, b.basis]), rtol))


def subspace_intersection(a: Subspace, b: Subspace, rtol: float = RTOL) -> Subspace:
    """Intersection via the kernel of stacked complement projectors.

    A vector lies in both subspaces iff both residuals (I - P_A)v and
    (I - P_B)v vanish, so the intersection is the null space of the
    stacked 2n x n residual matrix.
    """
    _check_ambient(a, b)
    n = a.n
    ra = np.eye(n) - a.basis @ a.basis.T
    rb = np.eye(n) - b.basis @ b.basis.T
    return kernel(np.vstack([ra, rb]), rtol)


def kernel(matrix, rtol: float = RTOL) -> Subspace:
    """Orthonormal basis of the numerical null space of an m x n matrix."""
    mat = np.asarray(matrix, dtype=float)
    if mat.ndim != 2:
        raise ValueError("kernel expects a matrix")
    n = mat.shape[1]
    if mat.size == 0:
        return Subspace.full(n)
    _, sv, vt = np.linalg.svd(mat)
    r = _rank(sv, rtol)
    return Subspace(vt[r:].T) if r < n else Subspace.zero(n)


@dataclass(frozen=True)
class SubspaceSequence:
    """Subspaces of one Grassmannian, ordered along an approach."""

    entries: tuple[Subspace, ...]
    tags: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.entries:
            raise ValueError("empty subspace sequence")
        n, k = self.entries[0].n, self.entries[0].dim
        for i, s in enumerate(self.entries):
            if s.n != n or s.dim != k:
                raise ValueError(
                    f"entry {i} has shape ({s.n}, {s.dim}), sequence started at ({n}, {k}); "
                    "the sequence does not live in one Grassmannian"
                )
        if self.tags and len(self.tags) != len(self.entries):
            raise ValueError("one tag per entry")

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def dim(self) -> int:
        return self.entries[0].dim


@dataclass(frozen=True)
class GrassmannLimit:
    converged: bool
    limit: Subspace | None
    residual: float
    history: tuple[float, ...]  # consecutive-pair distances along the sequence


def grassmann_limit(
    seq: SubspaceSequence, window: int = 5, tol: float = CONTAIN_TOL
) -> GrassmannLimit:
    """Detect convergence by a trailing Cauchy window.

    If every pair inside the last ``window`` entries is within ``tol``
    (largest principal angle), the final entry is reported as the limit
    together with the observed residual; otherwise the full residual
    history is returned for diagnosis.  No extrapolation is attempted:
    checkers need evidence, not acceleration.
    """
    entries = seq.entries
    history = tuple(
        grassmann_distance(entries[i], entries[i + 1]) for i in range(len(entries) - 1)
    )
    w = min(window, len(entries))
    tail = entries[-w:]
    residual = 0.0
    for i in range(len(tail)):
        for j in range(i + 1, len(tail)):
            residual = max(residual, grassmann_distance(tail[i], tail[j]))
    if residual < tol:
        return GrassmannLimit(True, entries[-1], residual, history)
    return GrassmannLimit(False, None, residual, history)
