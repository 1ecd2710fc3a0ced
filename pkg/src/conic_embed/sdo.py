"""Standard-form semidefinite problem data and residuals.

min Tr(CX)  s.t.  Tr(A_j X) = b_j,  X PSD, with the dual living in (y, S),
C - sum_j y_j A_j = S. Problems produced by the embedding builders carry meta
describing which side they came from and how rows are laid out.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .errors import DimensionMismatch, MissingSolutionPart
from .linalg import SymMatrix, trace_inner


class Side(Enum):
    DUAL = "dual"
    PRIMAL = "primal"
    GENERIC = "generic"


@dataclass(frozen=True)
class EmbeddingMeta:
    """Provenance of an embedded problem.

    zero_pairs lists the (h, l) coordinate pairs (global, 0-based, h < l) whose
    X entries are pinned to zero by structural rows; tied_diagonals lists the
    non-leading diagonal indices tied to their block's leading diagonal entry.
    Both are empty for dual-side embeddings.
    """

    side: Side
    cone_dims: Optional[tuple[int, ...]] = None
    m_original: int = 0
    zero_pairs: tuple[tuple[int, int], ...] = ()
    tied_diagonals: tuple[int, ...] = ()

    def __post_init__(self):
        if self.cone_dims is not None:
            object.__setattr__(self, "cone_dims", tuple(int(d) for d in self.cone_dims))
        object.__setattr__(
            self, "zero_pairs", tuple((int(h), int(l)) for h, l in self.zero_pairs)
        )
        object.__setattr__(self, "tied_diagonals", tuple(int(k) for k in self.tied_diagonals))


GENERIC_META = EmbeddingMeta(Side.GENERIC)


@dataclass(frozen=True, eq=False)
class SdoProblem:
    dim: int
    C: SymMatrix
    constraints: tuple[SymMatrix, ...]
    b: np.ndarray
    meta: EmbeddingMeta = GENERIC_META

    def __post_init__(self):
        if self.C.dim != self.dim:
            raise DimensionMismatch(f"C has dim {self.C.dim}, expected {self.dim}")
        object.__setattr__(self, "constraints", tuple(self.constraints))
        for j, a in enumerate(self.constraints):
            if a.dim != self.dim:
                raise DimensionMismatch(f"constraint {j} has dim {a.dim}, expected {self.dim}")
        b = np.array(self.b, dtype=float)
        if b.ndim != 1 or b.shape[0] != len(self.constraints):
            raise DimensionMismatch(
                f"b has shape {b.shape}, expected ({len(self.constraints)},)"
            )
        b.setflags(write=False)
        object.__setattr__(self, "b", b)

    @property
    def num_constraints(self) -> int:
        return len(self.constraints)


@dataclass(frozen=True, eq=False)
class DualSplit:
    """Dual vector decomposed as (v | w | u): original multipliers, zero-pair
    multipliers aligned with meta.zero_pairs, tied-diagonal multipliers aligned
    with meta.tied_diagonals."""

    v: np.ndarray
    w: tuple[float, ...] = ()
    u: tuple[float, ...] = ()

    def __post_init__(self):
        v = np.array(self.v, dtype=float)
        v.setflags(write=False)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "w", tuple(float(t) for t in self.w))
        object.__setattr__(self, "u", tuple(float(t) for t in self.u))

    def concatenated(self) -> np.ndarray:
        return np.concatenate([self.v, np.asarray(self.w), np.asarray(self.u)])


@dataclass(frozen=True, eq=False)
class SdoSolution:
    X: Optional[SymMatrix] = None
    y: Optional[np.ndarray] = None
    S: Optional[SymMatrix] = None
    dual_split: Optional[DualSplit] = None

    def __post_init__(self):
        if self.y is not None:
            y = np.array(self.y, dtype=float)
            if y.ndim != 1:
                raise DimensionMismatch(f"y must be a vector, got shape {y.shape}")
            y.setflags(write=False)
            object.__setattr__(self, "y", y)

    def validate_against(self, problem: SdoProblem) -> None:
        if self.X is not None and self.X.dim != problem.dim:
            raise DimensionMismatch(f"X has dim {self.X.dim}, expected {problem.dim}")
        if self.S is not None and self.S.dim != problem.dim:
            raise DimensionMismatch(f"S has dim {self.S.dim}, expected {problem.dim}")
        if self.y is not None and self.y.shape[0] != problem.num_constraints:
            raise DimensionMismatch(
                f"y has length {self.y.shape[0]}, expected {problem.num_constraints}"
            )
        if self.dual_split is not None and self.y is not None:
            cat = self.dual_split.concatenated()
            if cat.shape != self.y.shape or float(np.abs(cat - self.y).max()) > 1e-12:
                raise DimensionMismatch("dual_split does not concatenate to y")


def sdo_primal_residual(problem: SdoProblem, sol: SdoSolution) -> float:
    """max_j |Tr(A_j X) - b_j|."""
    if sol.X is None:
        raise MissingSolutionPart("primal residual needs X")
    sol.validate_against(problem)
    worst = 0.0
    for a, rhs in zip(problem.constraints, problem.b):
        worst = max(worst, abs(trace_inner(a, sol.X) - float(rhs)))
    return worst


def sdo_dual_residual(problem: SdoProblem, sol: SdoSolution) -> float:
    """|| C - sum_j y_j A_j - S ||_inf."""
    if sol.y is None or sol.S is None:
        raise MissingSolutionPart("dual residual needs y and S")
    sol.validate_against(problem)
    acc = problem.C.a.copy()
    for coef, a in zip(sol.y, problem.constraints):
        acc -= coef * a.a
    acc -= sol.S.a
    return float(np.abs(acc).max())


def sdo_gap(problem: SdoProblem, sol: SdoSolution) -> float:
    """Signed gap Tr(CX) - b^T y."""
    if sol.X is None or sol.y is None:
        raise MissingSolutionPart("gap needs X and y")
    sol.validate_against(problem)
    return trace_inner(problem.C, sol.X) - float(problem.b @ sol.y)
