"""Primal-side embedding: scaled arrow-head data matrices plus structural rows
that pin the embedded X to block arrow-head form.

The data rows spread each leading coefficient over the block diagonal (scale
1/n_i) and halve the off-leading coefficients, so Tr of a row against an
arrow-head X reproduces the original inner product. Structural rows then force
X's off-arrow entries to zero and tie every non-leading diagonal entry to its
block's leading one. The embedded dual vector is (v | w | u): original
multipliers, one w per pinned pair, one u per tied diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    InconsistentDual,
    NotArrowHead,
    TemplateViolation,
)
from .linalg import DEFAULT_TOL, SymMatrix, block_diag
from .sdo import DualSplit, EmbeddingMeta, SdoProblem, SdoSolution, Side
from .embed_dual import (
    RankOne,
    RankSpecLike,
    _require_in_cone,
    map_block,
    per_cone_choices,
    rank_one_map,
)
from .soco import BlockLayout, SocoProblem, SocoSolution, arrow_head, arrow_head_inv


@dataclass(frozen=True)
class StructuralIndex:
    """Pinned entry pairs and tied diagonals for a cone layout (0-based, global).

    zero_pairs: every cross-block upper pair plus every within-block off-arrow
    upper pair, lexicographic. tied_diagonals: every non-leading index,
    ascending.
    """

    zero_pairs: tuple[tuple[int, int], ...]
    tied_diagonals: tuple[int, ...]
    layout: BlockLayout

    @classmethod
    def from_dims(cls, cone_dims: Sequence[int]) -> "StructuralIndex":
        layout = BlockLayout.from_dims(cone_dims)
        pairs = []
        for h in range(layout.total):
            bh = layout.cone_of(h)
            for l in range(h + 1, layout.total):
                bl = layout.cone_of(l)
                if bh != bl:
                    pairs.append((h, l))
                elif h != layout.lead(bh):
                    pairs.append((h, l))
        tied = [
            k
            for i, d in enumerate(layout.dims)
            for k in range(layout.lead(i) + 1, layout.lead(i) + d)
        ]
        return cls(tuple(pairs), tuple(tied), layout)

    def cone_of(self, idx: int) -> int:
        return self.layout.cone_of(idx)


def scaled_arrow_head_blocks(blocks: Sequence[np.ndarray], dims: Sequence[int]) -> SymMatrix:
    """Block-diagonal arrow-head of (v1/n_i, v2/2, ..., vn/2) per block."""
    parts = []
    for v, n in zip(blocks, dims):
        v = np.asarray(v, dtype=float)
        scaled = np.concatenate(([v[0] / n], v[1:] / 2.0))
        parts.append(arrow_head(scaled))
    return block_diag(parts)


def build_primal_embedding(problem: SocoProblem) -> SdoProblem:
    """Scaled data rows, then pinned-pair rows, then tied-diagonal rows.

    Row order: the m data rows; one row per zero pair, lexicographic; one row
    per tied diagonal, ascending. b is zero-padded to match.
    """
    index = StructuralIndex.from_dims(problem.cone_dims)
    layout = index.layout
    n = layout.total
    C = scaled_arrow_head_blocks(problem.c_blocks, problem.cone_dims)
    rows = [
        scaled_arrow_head_blocks(
            [blk[j] for blk in problem.A_blocks], problem.cone_dims
        )
        for j in range(problem.m)
    ]
    for h, l in index.zero_pairs:
        e = np.zeros((n, n))
        e[h, l] = 1.0
        e[l, h] = 1.0
        rows.append(SymMatrix(e))
    for k in index.tied_diagonals:
        lead = layout.lead(index.cone_of(k))
        d = np.zeros((n, n))
        d[lead, lead] = 1.0
        d[k, k] = -1.0
        rows.append(SymMatrix(d))
    b = np.concatenate([problem.b, np.zeros(len(index.zero_pairs) + len(index.tied_diagonals))])
    meta = EmbeddingMeta(
        Side.PRIMAL,
        problem.cone_dims,
        m_original=problem.m,
        zero_pairs=index.zero_pairs,
        tied_diagonals=index.tied_diagonals,
    )
    return SdoProblem(n, C, tuple(rows), b, meta)


def rank_one_slack_map(s, tol: float = DEFAULT_TOL) -> SymMatrix:
    """Rank-one slack block eta eta^T; same formula as the dual-side rank-one
    transport applied to the slack vector."""
    return rank_one_map(s, tol)


def recover_uw(
    S: SymMatrix,
    s_blocks: Sequence[np.ndarray],
    cone_dims: Sequence[int],
    tol: float = DEFAULT_TOL,
) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Read the structural multipliers out of a slack matrix.

    u_k = S[k, k] - s1_i / n_i for each tied diagonal k of block i;
    w_hl = -S[h, l] for each pinned pair. The block template (block trace
    equals s1, first block row equals s[1:] / 2) is verified within tol scaled
    by the block magnitude; violations raise TemplateViolation.
    """
    index = StructuralIndex.from_dims(cone_dims)
    layout = index.layout
    if S.dim != layout.total:
        raise DimensionMismatch(f"S has dim {S.dim}, expected {layout.total}")
    for i, s in enumerate(s_blocks):
        s = np.asarray(s, dtype=float)
        sl = layout.block_slice(i)
        block = S.a[sl, sl]
        scale = 1.0 + float(np.abs(s).max())
        dev = abs(float(np.trace(block)) - float(s[0]))
        if dev > tol * scale:
            raise TemplateViolation(
                f"block {i} trace deviates from s1 by {dev:.3e}"
            )
        if s.shape[0] > 1:
            dev = float(np.abs(block[0, 1:] - s[1:] / 2.0).max())
            if dev > tol * scale:
                raise TemplateViolation(
                    f"block {i} first row deviates from s/2 by {dev:.3e}"
                )
    u = tuple(
        float(S.a[k, k]) - float(np.asarray(s_blocks[index.cone_of(k)])[0]) / layout.dims[index.cone_of(k)]
        for k in index.tied_diagonals
    )
    w = tuple(-float(S.a[h, l]) for h, l in index.zero_pairs)
    return u, w


def map_solution_primal(
    problem: SocoProblem,
    sol: SocoSolution,
    spec: RankSpecLike = RankOne(),
    tol: float = DEFAULT_TOL,
) -> SdoSolution:
    """Transport a cone solution into the primal-side embedded problem.

    x blocks become their block arrow-head; slack blocks go through the chosen
    per-cone transports; the embedded dual vector (v | w | u) is assembled from
    y and the constructed slack matrix. The dual vector needs both y and s, so
    it stays absent unless both are supplied.
    """
    sol.validate_against(problem)
    choices = per_cone_choices(spec, problem.r)
    X = None
    if sol.x_blocks is not None:
        for x in sol.x_blocks:
            _require_in_cone(x, tol)
        X = block_diag([arrow_head(x) for x in sol.x_blocks])
    S = None
    y_full = None
    split = None
    if sol.s_blocks is not None:
        S = block_diag([map_block(s, ch, tol) for s, ch in zip(sol.s_blocks, choices)])
        if sol.y is not None:
            u, w = recover_uw(S, sol.s_blocks, problem.cone_dims, tol)
            split = DualSplit(sol.y, w, u)
            y_full = split.concatenated()
    return SdoSolution(X=X, y=y_full, S=S, dual_split=split)


def inverse_map_primal(
    problem: SocoProblem,
    sol: SdoSolution,
    tol: float = DEFAULT_TOL,
) -> SocoSolution:
    """Pull an SDO solution for a primal-side embedding back to cone vectors.

    X must be block arrow-head (within tol) and inverts blockwise; the original
    multipliers are the first m entries of y; slack blocks are read from S via
    (block trace; 2 * first block row) and cross-checked against c_i - A_i^T v
    when both are available. Disagreement raises InconsistentDual.
    """
    layout = problem.layout
    x_blocks = None
    if sol.X is not None:
        if sol.X.dim != layout.total:
            raise DimensionMismatch(f"X has dim {sol.X.dim}, expected {layout.total}")
        mask = np.ones((layout.total, layout.total), dtype=bool)
        for i in range(problem.r):
            sl = layout.block_slice(i)
            mask[sl, sl] = False
        stray = float(np.abs(sol.X.a[mask]).max()) if mask.any() else 0.0
        if stray > tol:
            raise NotArrowHead(stray, "off-block entry")
        x_blocks = tuple(
            arrow_head_inv(SymMatrix(sol.X.a[layout.block_slice(i), layout.block_slice(i)]), tol)
            for i in range(problem.r)
        )
    v = None
    if sol.y is not None:
        if sol.y.shape[0] < problem.m:
            raise DimensionMismatch(
                f"y has length {sol.y.shape[0]}, expected at least {problem.m}"
            )
        v = sol.y[: problem.m].copy()
    s_blocks = None
    if sol.S is not None:
        if sol.S.dim != layout.total:
            raise DimensionMismatch(f"S has dim {sol.S.dim}, expected {layout.total}")
        s_blocks = []
        for i in range(problem.r):
            sl = layout.block_slice(i)
            block = sol.S.a[sl, sl]
            s = np.concatenate(([float(np.trace(block))], 2.0 * block[0, 1:]))
            if v is not None:
                alt = problem.c_blocks[i] - problem.A_blocks[i].T @ v
                dev = float(np.abs(s - alt).max())
                if dev > tol * (1.0 + float(np.abs(alt).max())):
                    raise InconsistentDual(
                        f"slack block {i} read from S deviates from c - A^T v by {dev:.3e}"
                    )
            s_blocks.append(s)
        s_blocks = tuple(s_blocks)
    elif v is not None:
        s_blocks = tuple(
            problem.c_blocks[i] - problem.A_blocks[i].T @ v for i in range(problem.r)
        )
    return SocoSolution(x_blocks=x_blocks, y=v, s_blocks=s_blocks)
