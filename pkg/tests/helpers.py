"""Shared test utilities: seeded instance corpora and enumeration of the
transport specs that are legal for a given instance and side."""

from __future__ import annotations

import numpy as np

from conic_embed import (
    ConePosition,
    FullRank,
    RankK,
    RankOne,
    Side,
    SimZhao,
    cone_position,
    generate_instance,
)

LABELS_1D = ("B", "N", "T1")
LABELS_ANY = ("B", "N", "R", "T1", "T2", "T3")


def random_config(rng: np.random.Generator, max_dim_choices=(1, 2, 3, 5, 8)):
    r = int(rng.integers(1, 4))
    dims = tuple(int(rng.choice(max_dim_choices)) for _ in range(r))
    labels = tuple(
        str(rng.choice(LABELS_1D if n == 1 else LABELS_ANY)) for n in dims
    )
    m = int(rng.integers(1, 7))
    return dims, labels, m


def corpus(count: int, master_seed: int = 20240601, dim_choices=(1, 2, 3, 5, 8)):
    """Deterministic list of solved instances with varied shapes and labels."""
    rng = np.random.default_rng(master_seed)
    out = []
    for _ in range(count):
        dims, labels, m = random_config(rng, dim_choices)
        seed = int(rng.integers(0, 2**31 - 1))
        out.append(generate_instance(dims, labels, m=m, seed=seed))
    return out


def mapped_blocks(inst, side: Side):
    return inst.solution.x_blocks if side is Side.DUAL else inst.solution.s_blocks


def legal_rank_specs(inst, side: Side, tol: float = 1e-8):
    """(name, spec) pairs valid for the mapped-side blocks of this instance.

    Uniform rank-one and the closed-form map are always legal; uniform full
    rank only when every mapped block is interior; the mixed spec puts full
    rank on interior blocks and rank one elsewhere; each interior block of
    dimension >= 2 contributes one spec per prescribed rank k in 2..n.
    """
    blocks = mapped_blocks(inst, side)
    interior = [cone_position(v, tol) is ConePosition.INTERIOR for v in blocks]
    specs = [("one", RankOne()), ("simzhao", SimZhao())]
    if all(interior):
        specs.append(("full", FullRank()))
    specs.append(
        ("mixed", tuple(FullRank() if flag else RankOne() for flag in interior))
    )
    for i, (v, flag) in enumerate(zip(blocks, interior)):
        n = v.shape[0]
        if flag and n >= 2:
            for k in range(2, n + 1):
                spec = tuple(
                    RankK(k) if j == i else RankOne() for j in range(len(blocks))
                )
                specs.append((f"k{k}-cone{i}", spec))
    return specs


def max_block_diff(blocks_a, blocks_b) -> float:
    return max(
        float(np.abs(np.asarray(a) - np.asarray(b)).max())
        for a, b in zip(blocks_a, blocks_b)
    )
