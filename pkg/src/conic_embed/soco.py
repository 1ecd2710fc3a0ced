"""Second-order cone problem data, Lorentz-cone geometry, and arrow-head operators.

Vectors attached to a product of Lorentz cones are always carried as explicit
per-block lists; flattening into one long vector is an explicit serialization
concern, never implicit.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionMismatch, MissingSolutionPart, NotArrowHead
from .linalg import DEFAULT_TOL, SymMatrix, block_diag


class ConePosition(Enum):
    ZERO = "zero"
    BOUNDARY_NONZERO = "boundary_nonzero"
    INTERIOR = "interior"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class BlockLayout:
    """Index bookkeeping for a concatenation of cone blocks."""

    dims: tuple[int, ...]
    offsets: tuple[int, ...]
    total: int

    @classmethod
    def from_dims(cls, dims: Sequence[int]) -> "BlockLayout":
        dims = tuple(int(d) for d in dims)
        if not dims or any(d < 1 for d in dims):
            raise DimensionMismatch(f"cone dimensions must be positive, got {dims}")
        offsets = tuple(int(x) for x in np.cumsum((0,) + dims[:-1]))
        return cls(dims, offsets, sum(dims))

    def block_slice(self, i: int) -> slice:
        return slice(self.offsets[i], self.offsets[i] + self.dims[i])

    def lead(self, i: int) -> int:
        """Global index of block i's leading coordinate."""
        return self.offsets[i]

    def cone_of(self, idx: int) -> int:
        """Block number owning global coordinate idx."""
        if not 0 <= idx < self.total:
            raise DimensionMismatch(f"index {idx} out of range for total {self.total}")
        for i, off in enumerate(self.offsets):
            if off <= idx < off + self.dims[i]:
                return i
        raise DimensionMismatch(f"index {idx} not covered")  # unreachable


def _frozen_vector(v, length: int | None = None, what: str = "vector") -> np.ndarray:
    a = np.array(v, dtype=float)
    if a.ndim != 1:
        raise DimensionMismatch(f"{what} must be one-dimensional, got shape {a.shape}")
    if length is not None and a.shape[0] != length:
        raise DimensionMismatch(f"{what} has length {a.shape[0]}, expected {length}")
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SocoProblem:
    """min sum_i <c_i, x_i>  s.t.  sum_i A_i x_i = b,  each x_i in a Lorentz cone."""

    cone_dims: tuple[int, ...]
    A_blocks: tuple[np.ndarray, ...]
    c_blocks: tuple[np.ndarray, ...]
    b: np.ndarray

    def __post_init__(self):
        layout = BlockLayout.from_dims(self.cone_dims)
        object.__setattr__(self, "cone_dims", layout.dims)
        b = _frozen_vector(self.b, what="b")
        m = b.shape[0]
        if len(self.A_blocks) != len(layout.dims) or len(self.c_blocks) != len(layout.dims):
            raise DimensionMismatch("A and c must have one block per cone")
        A = []
        for i, blk in enumerate(self.A_blocks):
            a = np.array(blk, dtype=float)
            if a.shape != (m, layout.dims[i]):
                raise DimensionMismatch(
                    f"A block {i} has shape {a.shape}, expected {(m, layout.dims[i])}"
                )
            a.setflags(write=False)
            A.append(a)
        c = [_frozen_vector(blk, layout.dims[i], f"c block {i}") for i, blk in enumerate(self.c_blocks)]
        object.__setattr__(self, "A_blocks", tuple(A))
        object.__setattr__(self, "c_blocks", tuple(c))
        object.__setattr__(self, "b", b)

    @property
    def r(self) -> int:
        return len(self.cone_dims)

    @property
    def m(self) -> int:
        return self.b.shape[0]

    @property
    def total_dim(self) -> int:
        return int(sum(self.cone_dims))

    @property
    def layout(self) -> BlockLayout:
        return BlockLayout.from_dims(self.cone_dims)


@dataclass(frozen=True, eq=False)
class SocoSolution:
    """Primal blocks, dual multipliers, slack blocks; any part may be absent."""

    x_blocks: Optional[tuple[np.ndarray, ...]] = None
    y: Optional[np.ndarray] = None
    s_blocks: Optional[tuple[np.ndarray, ...]] = None

    def __post_init__(self):
        for name in ("x_blocks", "s_blocks"):
            blocks = getattr(self, name)
            if blocks is not None:
                object.__setattr__(
                    self, name,
                    tuple(_frozen_vector(v, what=f"{name}[{i}]") for i, v in enumerate(blocks)),
                )
        if self.y is not None:
            object.__setattr__(self, "y", _frozen_vector(self.y, what="y"))

    def validate_against(self, problem: SocoProblem) -> None:
        for name, blocks in (("x", self.x_blocks), ("s", self.s_blocks)):
            if blocks is None:
                continue
            if len(blocks) != problem.r:
                raise DimensionMismatch(f"{name} has {len(blocks)} blocks, expected {problem.r}")
            for i, v in enumerate(blocks):
                if v.shape[0] != problem.cone_dims[i]:
                    raise DimensionMismatch(
                        f"{name} block {i} has length {v.shape[0]}, expected {problem.cone_dims[i]}"
                    )
        if self.y is not None and self.y.shape[0] != problem.m:
            raise DimensionMismatch(f"y has length {self.y.shape[0]}, expected {problem.m}")


def arrow_head(v) -> SymMatrix:
    """Arrow-head matrix [[v1, t^T], [t, v1*I]] with t = v[1:]."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.shape[0] < 1:
        raise DimensionMismatch(f"arrow_head needs a nonempty vector, got shape {v.shape}")
    n = v.shape[0]
    m = np.zeros((n, n))
    np.fill_diagonal(m, v[0])
    m[0, 1:] = v[1:]
    m[1:, 0] = v[1:]
    return SymMatrix(m)


def arrow_head_inv(m: SymMatrix, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Read the vector back out of an arrow-head matrix.

    Off-arrow entries must vanish and trailing diagonal entries must equal the
    leading one, all within tol; otherwise NotArrowHead reports the worst
    violation.
    """
    a = m.a
    n = m.dim
    worst = 0.0
    where = ""
    for j in range(1, n):
        dev = abs(a[j, j] - a[0, 0])
        if dev > worst:
            worst, where = dev, f"diagonal ({j},{j})"
    if n > 2:
        tri = np.triu(np.abs(a[1:, 1:]), 1)
        k = int(np.argmax(tri))
        dev = float(tri.flat[k])
        if dev > worst:
            i, j = divmod(k, n - 1)
            worst, where = dev, f"off-arrow ({i + 1},{j + 1})"
    if worst > tol:
        raise NotArrowHead(worst, where)
    return np.concatenate(([a[0, 0]], a[0, 1:]))


def block_arrow_head(blocks: Sequence[np.ndarray]) -> SymMatrix:
    """Block-diagonal arrow-head matrix of per-cone vectors."""
    return block_diag([arrow_head(v) for v in blocks])


def jordan_product(x, s) -> np.ndarray:
    """Jordan product (x^T s; x1*s[1:] + s1*x[1:]) on one cone block."""
    x = np.asarray(x, dtype=float)
    s = np.asarray(s, dtype=float)
    if x.shape != s.shape or x.ndim != 1:
        raise DimensionMismatch(f"operands differ in shape: {x.shape} vs {s.shape}")
    return np.concatenate(([float(x @ s)], x[0] * s[1:] + s[0] * x[1:]))


def jordan_product_blocks(x_blocks, s_blocks) -> list[np.ndarray]:
    if len(x_blocks) != len(s_blocks):
        raise DimensionMismatch("block counts differ")
    return [jordan_product(x, s) for x, s in zip(x_blocks, s_blocks)]


def cone_position(v, tol: float = DEFAULT_TOL) -> ConePosition:
    """Locate v relative to its Lorentz cone.

    Zero when ||v||_inf <= tol; otherwise the margin v1 - ||v[1:]|| is compared
    against tol scaled by (1 + ||v||_inf).
    """
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.shape[0] < 1:
        raise DimensionMismatch(f"cone_position needs a nonempty vector, got shape {v.shape}")
    peak = float(np.abs(v).max())
    if peak <= tol:
        return ConePosition.ZERO
    margin = float(v[0]) - float(np.linalg.norm(v[1:]))
    band = tol * (1.0 + peak)
    if margin > band:
        return ConePosition.INTERIOR
    if abs(margin) <= band and v[0] > tol:
        return ConePosition.BOUNDARY_NONZERO
    return ConePosition.OUTSIDE


def primal_residual(problem: SocoProblem, sol: SocoSolution) -> float:
    """Infinity norm of sum_i A_i x_i - b."""
    if sol.x_blocks is None:
        raise MissingSolutionPart("primal residual needs x blocks")
    sol.validate_against(problem)
    acc = -problem.b.copy()
    for a, x in zip(problem.A_blocks, sol.x_blocks):
        acc += a @ x
    return float(np.abs(acc).max())


def dual_residual(problem: SocoProblem, sol: SocoSolution) -> float:
    """Max over blocks of || A_i^T y + s_i - c_i ||_inf."""
    if sol.y is None or sol.s_blocks is None:
        raise MissingSolutionPart("dual residual needs y and s blocks")
    sol.validate_against(problem)
    worst = 0.0
    for a, s, c in zip(problem.A_blocks, sol.s_blocks, problem.c_blocks):
        worst = max(worst, float(np.abs(a.T @ sol.y + s - c).max()))
    return worst


def duality_gap(problem: SocoProblem, sol: SocoSolution) -> float:
    """Signed gap c^T x - b^T y."""
    if sol.x_blocks is None or sol.y is None:
        raise MissingSolutionPart("duality gap needs x blocks and y")
    sol.validate_against(problem)
    cx = sum(float(c @ x) for c, x in zip(problem.c_blocks, sol.x_blocks))
    return cx - float(problem.b @ sol.y)
