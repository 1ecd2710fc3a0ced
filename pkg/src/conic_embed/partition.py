"""Optimal-partition bookkeeping: cone-side labels, the closed-form arrow-head
eigensystem, and the two routes from a labeled cone solution to subspace bases
(B, N, T) of the embedded problem.

The table route builds the bases directly from the labels and the boundary
directions; the eigen route decomposes a transported matrix pair. For proper
transports (block rank equal to the cone rank everywhere) the two agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    InconsistentPair,
    LabelMismatch,
    MissingSolutionPart,
    NotComplementary,
    NotPSD,
    OutsideCone,
)
from .linalg import (
    DEFAULT_TOL,
    EigenDecomposition,
    PsdStatus,
    SymMatrix,
    eigh,
    orthonormal_complement,
    psd_status,
    trace_inner,
)
from .sdo import SdoSolution, Side
from .soco import (
    ConePosition,
    SocoProblem,
    SocoSolution,
    cone_position,
    jordan_product,
)
from .embed_dual import FullRank, RankOne, SimZhao, map_solution_dual
from .embed_primal import map_solution_primal


class ConeLabel(Enum):
    B = "B"
    N = "N"
    R = "R"
    T1 = "T1"
    T2 = "T2"
    T3 = "T3"


_POSITION_LABEL = {
    (ConePosition.INTERIOR, ConePosition.ZERO): ConeLabel.B,
    (ConePosition.ZERO, ConePosition.INTERIOR): ConeLabel.N,
    (ConePosition.BOUNDARY_NONZERO, ConePosition.BOUNDARY_NONZERO): ConeLabel.R,
    (ConePosition.ZERO, ConePosition.ZERO): ConeLabel.T1,
    (ConePosition.BOUNDARY_NONZERO, ConePosition.ZERO): ConeLabel.T2,
    (ConePosition.ZERO, ConePosition.BOUNDARY_NONZERO): ConeLabel.T3,
}


def classify_cones(
    problem: SocoProblem, sol: SocoSolution, tol: float = DEFAULT_TOL
) -> list[ConeLabel]:
    """Label each cone from the positions of (x_i, s_i).

    Position pairs outside the six complementary combinations, or pairs whose
    Jordan product is not zero within tolerance (e.g. two boundary vectors
    that are not opposite), raise InconsistentPair. Vectors outside the cone
    raise OutsideCone.
    """
    if sol.x_blocks is None or sol.s_blocks is None:
        raise MissingSolutionPart("classification needs x and s blocks")
    sol.validate_against(problem)
    labels = []
    for i, (x, s) in enumerate(zip(sol.x_blocks, sol.s_blocks)):
        px = cone_position(x, tol)
        ps = cone_position(s, tol)
        if ConePosition.OUTSIDE in (px, ps):
            raise OutsideCone(f"cone {i}: vector outside the cone")
        label = _POSITION_LABEL.get((px, ps))
        if label is None:
            raise InconsistentPair(
                f"cone {i}: positions ({px.value}, {ps.value}) cannot be complementary"
            )
        comp = float(np.abs(jordan_product(x, s)).max())
        band = tol * (1.0 + float(np.abs(x).max())) * (1.0 + float(np.abs(s).max()))
        if comp > band:
            raise InconsistentPair(
                f"cone {i}: jordan product magnitude {comp:.3e} breaks complementarity"
            )
        labels.append(label)
    return labels


def arrowhead_eigensystem(v) -> EigenDecomposition:
    """Closed-form eigendecomposition of the arrow-head matrix of v.

    Eigenvalues ascending: v1 - ||t||, then v1 with multiplicity n - 2, then
    v1 + ||t|| (t = v[1:]); extreme eigenvectors are (1, -d)/sqrt(2) and
    (1, d)/sqrt(2) for the unit tail direction d, middle ones are (0, z) with
    z spanning the tail complement. Degenerates to the standard basis when the
    tail vanishes.
    """
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.shape[0] < 1:
        raise DimensionMismatch(f"need a nonempty vector, got shape {v.shape}")
    n = v.shape[0]
    head = float(v[0])
    if n == 1:
        return EigenDecomposition(np.array([head]), np.eye(1))
    tail = v[1:]
    rho = float(np.linalg.norm(tail))
    if rho == 0.0:
        return EigenDecomposition(np.full(n, head), np.eye(n))
    d = tail / rho
    vals = np.concatenate(([head - rho], np.full(n - 2, head), [head + rho]))
    vecs = np.zeros((n, n))
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    vecs[0, 0] = inv_sqrt2
    vecs[1:, 0] = -d * inv_sqrt2
    if n > 2:
        vecs[1:, 1:n - 1] = _tail_complement(d)
    vecs[0, n - 1] = inv_sqrt2
    vecs[1:, n - 1] = d * inv_sqrt2
    vals.setflags(write=False)
    vecs.setflags(write=False)
    return EigenDecomposition(vals, vecs)


def _tail_complement(d: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the complement of unit d, via the Householder
    reflector exchanging d with e1."""
    k = d.shape[0]
    w = d.copy()
    w[0] -= 1.0
    wtw = float(w @ w)
    if wtw <= 1e-30:
        return np.eye(k)[:, 1:]
    h = np.eye(k) - (2.0 / wtw) * np.outer(w, w)
    return h[:, 1:]


@dataclass(frozen=True, eq=False)
class SdoPartition:
    """Orthonormal bases of the three mutually orthogonal subspaces."""

    basis_b: np.ndarray
    basis_n: np.ndarray
    basis_t: np.ndarray

    def __post_init__(self):
        for name in ("basis_b", "basis_n", "basis_t"):
            a = np.array(getattr(self, name), dtype=float)
            if a.ndim != 2:
                raise DimensionMismatch(f"{name} must be a matrix, got shape {a.shape}")
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    @property
    def dims(self) -> tuple[int, int, int]:
        return (self.basis_b.shape[1], self.basis_n.shape[1], self.basis_t.shape[1])

    def validate(self, gate: float = 1e-6) -> None:
        n = self.basis_b.shape[0]
        stacked = np.hstack([self.basis_b, self.basis_n, self.basis_t])
        if stacked.shape != (n, n):
            raise DimensionMismatch(
                f"basis dimensions {self.dims} do not sum to the ambient {n}"
            )
        dev = float(np.abs(stacked.T @ stacked - np.eye(n)).max())
        if dev > gate:
            raise DimensionMismatch(f"bases deviate from orthonormality by {dev:.3e}")


def _boundary_direction(blocks, i: int, what: str) -> np.ndarray:
    if blocks is None:
        raise MissingSolutionPart(f"label needs the {what} block for cone {i}")
    v = np.asarray(blocks[i], dtype=float)
    if v.shape[0] < 2:
        raise LabelMismatch(f"cone {i} is one-dimensional; no boundary direction exists")
    rho = float(np.linalg.norm(v[1:]))
    if rho <= 0.0:
        raise LabelMismatch(f"cone {i}: {what} block has a zero tail, no direction")
    return v[1:] / rho


def _block_frame(d: np.ndarray, n: int):
    """(v_plus, v_minus, middles) columns for one block, local coordinates."""
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    vp = np.concatenate(([inv_sqrt2], d * inv_sqrt2)).reshape(n, 1)
    vm = np.concatenate(([inv_sqrt2], -d * inv_sqrt2)).reshape(n, 1)
    if n > 2:
        mid = np.vstack([np.zeros((1, n - 2)), _tail_complement(d)])
    else:
        mid = np.zeros((n, 0))
    return vp, vm, mid


def map_partition(
    problem: SocoProblem,
    sol: SocoSolution,
    labels: Sequence[ConeLabel],
    side: Side,
    tol: float = DEFAULT_TOL,
) -> SdoPartition:
    """Route per-cone eigenvector bases into (B, N, T) by label.

    Full blocks go wholesale: B for label B, N for label N, T for T1. Boundary
    labels split a block into the aligned vector (1, d)/sqrt(2), the opposed
    vector (1, -d)/sqrt(2), and the middle vectors (0, z), z perpendicular to
    d; the two sides route those differently because the transported X is a
    low-rank image on the dual side but an arrow-head on the primal side.
    """
    if side not in (Side.DUAL, Side.PRIMAL):
        raise DimensionMismatch(f"side must be dual or primal, got {side!r}")
    labels = list(labels)
    if len(labels) != problem.r:
        raise DimensionMismatch(f"{len(labels)} labels for {problem.r} cones")
    layout = problem.layout
    total = layout.total
    cols_b, cols_n, cols_t = [], [], []

    def _embed(local: np.ndarray, i: int) -> np.ndarray:
        out = np.zeros((total, local.shape[1]))
        out[layout.block_slice(i), :] = local
        return out

    for i, label in enumerate(labels):
        n = problem.cone_dims[i]
        if label is ConeLabel.B:
            cols_b.append(_embed(np.eye(n), i))
            continue
        if label is ConeLabel.N:
            cols_n.append(_embed(np.eye(n), i))
            continue
        if label is ConeLabel.T1:
            cols_t.append(_embed(np.eye(n), i))
            continue
        if label in (ConeLabel.R, ConeLabel.T2):
            d = _boundary_direction(sol.x_blocks, i, "x")
        else:
            d = _boundary_direction(sol.s_blocks, i, "s")
        vp, vm, mid = _block_frame(d, n)
        if label is ConeLabel.R:
            if side is Side.DUAL:
                cols_b.append(_embed(vp, i))
                cols_n.append(_embed(np.hstack([vm, mid]), i))
            else:
                cols_b.append(_embed(np.hstack([vp, mid]), i))
                cols_n.append(_embed(vm, i))
        elif label is ConeLabel.T2:
            if side is Side.DUAL:
                cols_b.append(_embed(vp, i))
                cols_t.append(_embed(np.hstack([vm, mid]), i))
            else:
                cols_b.append(_embed(np.hstack([vp, mid]), i))
                cols_t.append(_embed(vm, i))
        elif label is ConeLabel.T3:
            if side is Side.DUAL:
                cols_n.append(_embed(np.hstack([vp, mid]), i))
                cols_t.append(_embed(vm, i))
            else:
                cols_n.append(_embed(vp, i))
                cols_t.append(_embed(np.hstack([vm, mid]), i))
        else:
            raise LabelMismatch(f"unknown label {label!r}")

    def _pack(cols) -> np.ndarray:
        return np.hstack(cols) if cols else np.zeros((total, 0))

    part = SdoPartition(_pack(cols_b), _pack(cols_n), _pack(cols_t))
    part.validate()
    return part


def sdo_partition_from_solution(
    X: SymMatrix, S: SymMatrix, tol: float = DEFAULT_TOL
) -> SdoPartition:
    """Eigen route: B spans the range of X, N the range of S, T the rest.

    X and S must be PSD within tol and trace-complementary; B and N must come
    out orthogonal (gate sqrt(tol)), otherwise the pair was not complementary
    enough to define a partition.
    """
    if X.dim != S.dim:
        raise DimensionMismatch(f"dimensions differ: {X.dim} vs {S.dim}")
    if psd_status(X, tol) is PsdStatus.INDEFINITE:
        raise NotPSD("X is indefinite beyond tolerance")
    if psd_status(S, tol) is PsdStatus.INDEFINITE:
        raise NotPSD("S is indefinite beyond tolerance")
    t = trace_inner(X, S)
    if abs(t) > tol:
        raise NotComplementary(f"trace inner product {t:.3e} exceeds {tol:.1e}")
    n = X.dim
    ex = eigh(X, tol)
    es = eigh(S, tol)
    bx = ex.eigenvectors[:, ex.eigenvalues > tol * max(1.0, float(np.abs(ex.eigenvalues).max()))]
    ns = es.eigenvectors[:, es.eigenvalues > tol * max(1.0, float(np.abs(es.eigenvalues).max()))]
    if bx.shape[1] and ns.shape[1]:
        overlap = float(np.abs(bx.T @ ns).max())
        if overlap > math.sqrt(tol):
            raise NotComplementary(
                f"range(X) and range(S) overlap with cosine {overlap:.3e}"
            )
    bt = orthonormal_complement(np.hstack([bx, ns]), n)
    part = SdoPartition(bx, ns, bt)
    part.validate()
    return part


def proper_map_solution(
    problem: SocoProblem,
    sol: SocoSolution,
    side: Side,
    interior: str = "simzhao",
    tol: float = DEFAULT_TOL,
) -> SdoSolution:
    """Transport with the proper per-cone completion: the chosen full-rank map
    on interior blocks, the forced rank-one block on the nonzero boundary, the
    zero block at the origin. The result's block ranks equal the cone ranks,
    which is what the partition correspondence requires."""
    if interior not in ("simzhao", "full"):
        raise DimensionMismatch(f"interior transport must be simzhao or full, got {interior!r}")
    if side is Side.DUAL:
        blocks = sol.x_blocks
    elif side is Side.PRIMAL:
        blocks = sol.s_blocks
    else:
        raise DimensionMismatch(f"side must be dual or primal, got {side!r}")
    if blocks is None:
        raise MissingSolutionPart("proper transport needs the mapped-side blocks")
    choices = []
    for v in blocks:
        if cone_position(v, tol) is ConePosition.INTERIOR:
            choices.append(SimZhao() if interior == "simzhao" else FullRank())
        else:
            choices.append(RankOne())
    if side is Side.DUAL:
        return map_solution_dual(problem, sol, choices, tol)
    return map_solution_primal(problem, sol, choices, tol)


def max_principal_angle(u: np.ndarray, v: np.ndarray) -> float:
    """Largest principal angle between equal-dimension column spans (radians).

    Computed from the residual of v against the projector onto span(u); the
    sine form stays accurate for tiny angles, where arccos of a cosine near 1
    loses half the digits. Subspaces of different dimension are maximally
    apart by convention.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape[1] != v.shape[1]:
        return math.pi / 2.0
    if u.shape[1] == 0:
        return 0.0
    residual = v - u @ (u.T @ v)
    sig = np.linalg.svd(residual, compute_uv=False)
    return float(math.asin(min(1.0, float(sig.max()))))
