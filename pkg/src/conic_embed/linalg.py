"""Dense symmetric linear algebra: storage, trace inner product, a cyclic Jacobi
eigensolver, and PSD / rank queries built on top of it."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, EighConvergenceError, NotSymmetric

DEFAULT_TOL = 1e-8
_EPS = float(np.finfo(float).eps)


class SymMatrix:
    """Immutable dense real symmetric matrix.

    The backing array is symmetrized on construction (exact for input that is
    already symmetric) and marked read-only, so downstream code can rely on
    entry(i, j) == entry(j, i) holding bit for bit.
    """

    __slots__ = ("a",)

    def __init__(self, array, sym_tol: float = 1e-9):
        a = np.array(array, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
        skew = float(np.abs(a - a.T).max())
        if skew > sym_tol * (1.0 + float(np.abs(a).max())):
            raise NotSymmetric(f"matrix deviates from symmetry by {skew:.3e}")
        a = 0.5 * (a + a.T)
        a.setflags(write=False)
        self.a = a

    @property
    def dim(self) -> int:
        return self.a.shape[0]

    def entry(self, i: int, j: int) -> float:
        return float(self.a[i, j])

    @classmethod
    def zeros(cls, n: int) -> "SymMatrix":
        return cls(np.zeros((n, n)))

    @classmethod
    def identity(cls, n: int) -> "SymMatrix":
        return cls(np.eye(n))

    @classmethod
    def diagonal(cls, values) -> "SymMatrix":
        return cls(np.diag(np.asarray(values, dtype=float)))

    def __repr__(self) -> str:
        return f"SymMatrix(dim={self.dim})"


def block_diag(blocks: Sequence[SymMatrix]) -> SymMatrix:
    """Assemble symmetric blocks into one block-diagonal SymMatrix."""
    if not blocks:
        raise DimensionMismatch("need at least one block")
    n = sum(b.dim for b in blocks)
    out = np.zeros((n, n))
    at = 0
    for b in blocks:
        out[at:at + b.dim, at:at + b.dim] = b.a
        at += b.dim
    return SymMatrix(out)


def trace_inner(a: SymMatrix, b: SymMatrix) -> float:
    """Trace inner product Tr(AB) = sum_ij a_ij * b_ij for symmetric A, B."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimensions differ: {a.dim} vs {b.dim}")
    return float(np.sum(a.a * b.a))


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Eigenvalues in ascending order with matching orthonormal column eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def eigh(a: SymMatrix, tol: float = DEFAULT_TOL, max_sweeps: int = 100) -> EigenDecomposition:
    """Eigendecomposition by cyclic Jacobi rotations.

    Sweeps rotate every (p, q) pair in row order until each off-diagonal
    magnitude falls below tol * (1 + max |entry|) of the input. Raises
    EighConvergenceError carrying the residual if max_sweeps is exhausted.
    """
    n = a.dim
    m = a.a.copy()
    vecs = np.eye(n)
    if n == 1:
        return EigenDecomposition(m.diagonal().copy(), vecs)

    thresh = tol * (1.0 + float(np.abs(m).max()))
    skip = 0.01 * thresh
    off = _max_offdiag(m)
    sweeps = 0
    while off >= thresh:
        if sweeps == max_sweeps:
            raise EighConvergenceError(off, sweeps)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p, q]
                if abs(apq) <= skip:
                    continue
                tau = (m[q, q] - m[p, p]) / (2.0 * apq)
                t = np.sign(tau) / (abs(tau) + np.hypot(1.0, tau)) if tau != 0.0 else 1.0
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                _rotate(m, vecs, p, q, c, s)
        sweeps += 1
        off = _max_offdiag(m)

    vals = m.diagonal().copy()
    order = np.argsort(vals, kind="stable")
    vals = vals[order]
    vecs = vecs[:, order]
    vals.setflags(write=False)
    vecs.setflags(write=False)
    return EigenDecomposition(vals, vecs)


def _max_offdiag(m: np.ndarray) -> float:
    off = np.abs(m).copy()
    np.fill_diagonal(off, 0.0)
    return float(off.max())


def _rotate(m: np.ndarray, vecs: np.ndarray, p: int, q: int, c: float, s: float) -> None:
    # two-sided rotation G^T M G with G acting in the (p, q) plane
    col_p = m[:, p].copy()
    col_q = m[:, q].copy()
    m[:, p] = c * col_p - s * col_q
    m[:, q] = s * col_p + c * col_q
    row_p = m[p, :].copy()
    row_q = m[q, :].copy()
    m[p, :] = c * row_p - s * row_q
    m[q, :] = s * row_p + c * row_q
    m[p, q] = 0.0
    m[q, p] = 0.0
    vp = vecs[:, p].copy()
    vq = vecs[:, q].copy()
    vecs[:, p] = c * vp - s * vq
    vecs[:, q] = s * vp + c * vq


class PsdStatus(Enum):
    POSITIVE_DEFINITE = "positive_definite"
    POSITIVE_SEMIDEFINITE = "positive_semidefinite"
    INDEFINITE = "indefinite"


def psd_status(a: SymMatrix, tol: float = DEFAULT_TOL) -> PsdStatus:
    """Classify definiteness from the smallest eigenvalue with an absolute tol band."""
    lam_min = float(eigh(a, tol).eigenvalues[0])
    if lam_min > tol:
        return PsdStatus.POSITIVE_DEFINITE
    if lam_min >= -tol:
        return PsdStatus.POSITIVE_SEMIDEFINITE
    return PsdStatus.INDEFINITE


def numeric_rank(a: SymMatrix, tol: float = DEFAULT_TOL) -> int:
    """Count of eigenvalues with |lambda| > tol * max(1, |lambda|_max)."""
    lam = np.abs(eigh(a, tol).eigenvalues)
    return int(np.count_nonzero(lam > tol * max(1.0, float(lam.max()))))


def orthonormal_complement(vectors: np.ndarray, dim: int) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of the given columns in R^dim.

    Columns are assumed orthonormal (within roundoff); the complement is filled
    deterministically by Householder QR against the standard basis.
    """
    k = vectors.shape[1] if vectors.size else 0
    if k == 0:
        return np.eye(dim)
    if k >= dim:
        return np.zeros((dim, 0))
    q, _ = np.linalg.qr(np.hstack([vectors, np.eye(dim)]))
    return q[:, k:dim]
