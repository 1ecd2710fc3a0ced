"""File formats: JSON problem/solution schemas and SDPA sparse export.

JSON is emitted through a small canonical serializer (fixed key order, floats
at 17 significant digits) so that saving what was loaded reproduces the file
byte for byte. Parsing is plain stdlib json.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .errors import ConicEmbedError, DimensionMismatch, ParseError
from .linalg import SymMatrix
from .sdo import DualSplit, EmbeddingMeta, SdoProblem, SdoSolution, Side
from .soco import SocoProblem, SocoSolution

PathLike = Union[str, Path]


def flatten_blocks(blocks: Sequence[np.ndarray]) -> np.ndarray:
    """Concatenate per-cone vectors into one flat vector."""
    return np.concatenate([np.asarray(b, dtype=float) for b in blocks])


def split_vector(v: np.ndarray, dims: Sequence[int]) -> list[np.ndarray]:
    """Cut a flat vector back into per-cone blocks."""
    v = np.asarray(v, dtype=float)
    if v.shape[0] != sum(dims):
        raise DimensionMismatch(f"vector length {v.shape[0]} does not match dims {tuple(dims)}")
    out = []
    at = 0
    for n in dims:
        out.append(v[at:at + n].copy())
        at += n
    return out


def _fmt_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ConicEmbedError(f"cannot serialize non-finite value {x!r}")
    if x == 0.0:
        return "0"  # "-0" would come back from json as the integer 0
    return format(x, ".17g")


def _emit(value, indent: int) -> str:
    pad = " " * indent
    if isinstance(value, dict):
        if not value:
            return "{}"
        inner = ",\n".join(
            f'{pad}  {json.dumps(str(k))}: {_emit(v, indent + 2)}' for k, v in value.items()
        )
        return "{\n" + inner + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        items = list(value)
        if not items:
            return "[]"
        if any(isinstance(x, (dict, list, tuple)) for x in items):
            inner = ",\n".join(f"{pad}  {_emit(x, indent + 2)}" for x in items)
            return "[\n" + inner + "\n" + pad + "]"
        return "[" + ", ".join(_emit(x, indent) for x in items) + "]"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _fmt_float(value)
    if value is None:
        return "null"
    if isinstance(value, str):
        return json.dumps(value)
    raise ConicEmbedError(f"cannot serialize {type(value).__name__}")


def write_json(obj: dict, path: PathLike) -> None:
    Path(path).write_text(_emit(obj, 0) + "\n")


_write_json = write_json


def _read_json(path: PathLike) -> dict:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None
    if not isinstance(obj, dict):
        raise ParseError(f"{path}: expected a JSON object at top level")
    return obj


def _field(obj: dict, key: str, path: PathLike):
    if key not in obj:
        raise ParseError(f"{path}: missing field '{key}'")
    return obj[key]


def _vector(raw, what: str, path: PathLike, length: Optional[int] = None) -> np.ndarray:
    try:
        v = np.array(raw, dtype=float)
    except (TypeError, ValueError):
        raise ParseError(f"{path}: field '{what}' is not numeric") from None
    if v.ndim != 1:
        raise ParseError(f"{path}: field '{what}' must be a flat list")
    if length is not None and v.shape[0] != length:
        raise ParseError(f"{path}: field '{what}' has length {v.shape[0]}, expected {length}")
    return v


def _matrix(raw, what: str, path: PathLike, shape: Optional[tuple[int, int]] = None) -> np.ndarray:
    try:
        m = np.array(raw, dtype=float)
    except (TypeError, ValueError):
        raise ParseError(f"{path}: field '{what}' is not numeric") from None
    if m.ndim != 2:
        raise ParseError(f"{path}: field '{what}' must be a list of rows")
    if shape is not None and m.shape != shape:
        raise ParseError(f"{path}: field '{what}' has shape {m.shape}, expected {shape}")
    return m


def load_problem(path: PathLike) -> SocoProblem:
    obj = _read_json(path)
    cones_raw = _field(obj, "cones", path)
    if not isinstance(cones_raw, list) or not cones_raw or not all(
        isinstance(n, int) and n >= 1 for n in cones_raw
    ):
        raise ParseError(f"{path}: field 'cones' must be a list of positive integers")
    dims = tuple(cones_raw)
    m = _field(obj, "m", path)
    if not isinstance(m, int) or m < 1:
        raise ParseError(f"{path}: field 'm' must be a positive integer")
    a_raw = _field(obj, "A", path)
    c_raw = _field(obj, "c", path)
    if not isinstance(a_raw, list) or len(a_raw) != len(dims):
        raise ParseError(f"{path}: field 'A' must have one block per cone")
    if not isinstance(c_raw, list) or len(c_raw) != len(dims):
        raise ParseError(f"{path}: field 'c' must have one block per cone")
    A = tuple(_matrix(blk, f"A[{i}]", path, (m, dims[i])) for i, blk in enumerate(a_raw))
    c = tuple(_vector(blk, f"c[{i}]", path, dims[i]) for i, blk in enumerate(c_raw))
    b = _vector(_field(obj, "b", path), "b", path, m)
    return SocoProblem(dims, A, c, b)


def save_problem(problem: SocoProblem, path: PathLike) -> None:
    _write_json(
        {
            "cones": list(problem.cone_dims),
            "m": problem.m,
            "A": [a.tolist() for a in problem.A_blocks],
            "b": problem.b.tolist(),
            "c": [c.tolist() for c in problem.c_blocks],
        },
        path,
    )


def load_solution(path: PathLike, problem: SocoProblem) -> SocoSolution:
    obj = _read_json(path)
    dims = problem.cone_dims
    x = s = y = None
    if "x" in obj:
        raw = obj["x"]
        if not isinstance(raw, list) or len(raw) != len(dims):
            raise ParseError(f"{path}: field 'x' must have one block per cone")
        x = tuple(_vector(blk, f"x[{i}]", path, dims[i]) for i, blk in enumerate(raw))
    if "s" in obj:
        raw = obj["s"]
        if not isinstance(raw, list) or len(raw) != len(dims):
            raise ParseError(f"{path}: field 's' must have one block per cone")
        s = tuple(_vector(blk, f"s[{i}]", path, dims[i]) for i, blk in enumerate(raw))
    if "y" in obj:
        y = _vector(obj["y"], "y", path, problem.m)
    return SocoSolution(x_blocks=x, y=y, s_blocks=s)


def save_solution(sol: SocoSolution, path: PathLike) -> None:
    obj: dict = {}
    if sol.x_blocks is not None:
        obj["x"] = [v.tolist() for v in sol.x_blocks]
    if sol.y is not None:
        obj["y"] = sol.y.tolist()
    if sol.s_blocks is not None:
        obj["s"] = [v.tolist() for v in sol.s_blocks]
    _write_json(obj, path)


def save_sdo_problem(problem: SdoProblem, path: PathLike) -> None:
    meta = problem.meta
    _write_json(
        {
            "dim": problem.dim,
            "C": problem.C.a.tolist(),
            "A": [a.a.tolist() for a in problem.constraints],
            "b": problem.b.tolist(),
            "meta": {
                "side": meta.side.value,
                "cone_dims": list(meta.cone_dims) if meta.cone_dims is not None else None,
                "m_original": meta.m_original,
                "zero_pairs": [list(p) for p in meta.zero_pairs],
                "tied_diagonals": list(meta.tied_diagonals),
            },
        },
        path,
    )


def load_sdo_problem(path: PathLike) -> SdoProblem:
    obj = _read_json(path)
    dim = _field(obj, "dim", path)
    if not isinstance(dim, int) or dim < 1:
        raise ParseError(f"{path}: field 'dim' must be a positive integer")
    C = SymMatrix(_matrix(_field(obj, "C", path), "C", path, (dim, dim)))
    a_raw = _field(obj, "A", path)
    if not isinstance(a_raw, list):
        raise ParseError(f"{path}: field 'A' must be a list of matrices")
    rows = tuple(
        SymMatrix(_matrix(blk, f"A[{j}]", path, (dim, dim))) for j, blk in enumerate(a_raw)
    )
    b = _vector(_field(obj, "b", path), "b", path, len(rows))
    meta_raw = obj.get("meta")
    meta = EmbeddingMeta(Side.GENERIC)
    if isinstance(meta_raw, dict):
        try:
            side = Side(meta_raw.get("side", "generic"))
        except ValueError:
            raise ParseError(f"{path}: meta.side must be dual, primal or generic") from None
        cone_dims = meta_raw.get("cone_dims")
        meta = EmbeddingMeta(
            side,
            tuple(cone_dims) if cone_dims is not None else None,
            int(meta_raw.get("m_original", 0)),
            tuple((int(h), int(l)) for h, l in meta_raw.get("zero_pairs", [])),
            tuple(int(k) for k in meta_raw.get("tied_diagonals", [])),
        )
    return SdoProblem(dim, C, rows, b, meta)


def save_sdo_solution(
    sol: SdoSolution, path: PathLike, meta: Optional[EmbeddingMeta] = None
) -> None:
    obj: dict = {}
    if sol.X is not None:
        obj["X"] = sol.X.a.tolist()
    if sol.y is not None:
        obj["y"] = sol.y.tolist()
    if sol.S is not None:
        obj["S"] = sol.S.a.tolist()
    if sol.dual_split is not None:
        if meta is None:
            raise ConicEmbedError("saving a dual split needs the embedding meta for indices")
        split = sol.dual_split
        obj["dual_split"] = {
            "v": split.v.tolist(),
            "w": [[h, l, val] for (h, l), val in zip(meta.zero_pairs, split.w)],
            "u": [[k, val] for k, val in zip(meta.tied_diagonals, split.u)],
        }
    _write_json(obj, path)


def load_sdo_solution(path: PathLike, problem: Optional[SdoProblem] = None) -> SdoSolution:
    obj = _read_json(path)
    dim = problem.dim if problem is not None else None
    X = y = S = split = None
    if "X" in obj:
        shape = (dim, dim) if dim else None
        X = SymMatrix(_matrix(obj["X"], "X", path, shape))
    if "S" in obj:
        shape = (dim, dim) if dim else None
        S = SymMatrix(_matrix(obj["S"], "S", path, shape))
    if "y" in obj:
        length = problem.num_constraints if problem is not None else None
        y = _vector(obj["y"], "y", path, length)
    if "dual_split" in obj:
        raw = obj["dual_split"]
        if not isinstance(raw, dict):
            raise ParseError(f"{path}: field 'dual_split' must be an object")
        v = _vector(_field(raw, "v", path), "dual_split.v", path)
        w_raw = raw.get("w", [])
        u_raw = raw.get("u", [])
        if problem is not None and problem.meta.side is not Side.GENERIC:
            meta = problem.meta
            w_map = {}
            for entry in w_raw:
                if not isinstance(entry, list) or len(entry) != 3:
                    raise ParseError(f"{path}: dual_split.w entries must be [h, l, value]")
                w_map[(int(entry[0]), int(entry[1]))] = float(entry[2])
            if set(w_map) != set(meta.zero_pairs):
                raise ParseError(f"{path}: dual_split.w pairs do not match the embedding")
            u_map = {}
            for entry in u_raw:
                if not isinstance(entry, list) or len(entry) != 2:
                    raise ParseError(f"{path}: dual_split.u entries must be [k, value]")
                u_map[int(entry[0])] = float(entry[1])
            if set(u_map) != set(meta.tied_diagonals):
                raise ParseError(f"{path}: dual_split.u indices do not match the embedding")
            split = DualSplit(
                v,
                tuple(w_map[p] for p in meta.zero_pairs),
                tuple(u_map[k] for k in meta.tied_diagonals),
            )
        else:
            split = DualSplit(
                v,
                tuple(float(e[2]) for e in w_raw),
                tuple(float(e[1]) for e in u_raw),
            )
    return SdoSolution(X=X, y=y, S=S, dual_split=split)


def export_sdpa(problem: SdoProblem, path: PathLike, split_blocks: bool = False) -> None:
    """Write the embedded problem in SDPA sparse format (.dat-s).

    Header: constraint count, block count, block sizes, right-hand side. Then
    one line per upper-triangle nonzero, 'matno blkno i j value' with matrix 0
    the objective, 1-based indices, values at 17 significant digits. Without
    split_blocks everything lives in a single block of the full dimension;
    with it, each cone becomes its own block, which requires meta guaranteeing
    block-diagonal data (dual side, or a single-cone primal embedding).
    """
    meta = problem.meta
    if split_blocks:
        if meta.cone_dims is None or meta.side is Side.GENERIC:
            raise ConicEmbedError("split export needs embedding meta with cone dimensions")
        if meta.side is Side.PRIMAL and len(meta.cone_dims) > 1:
            raise ConicEmbedError(
                "multi-cone primal embeddings are not block-diagonal "
                "(pinned pairs straddle blocks); export without splitting"
            )
        dims = meta.cone_dims
    else:
        dims = (problem.dim,)
    offsets = np.cumsum((0,) + dims[:-1])

    def entries(matno: int, m: SymMatrix):
        for blk, (off, n) in enumerate(zip(offsets, dims)):
            sub = m.a[off:off + n, off:off + n]
            for i in range(n):
                for j in range(i, n):
                    v = sub[i, j]
                    if v != 0.0:
                        yield (matno, blk + 1, i + 1, j + 1, v)
        # data outside the declared blocks must not exist
        if len(dims) > 1:
            mask = np.ones((problem.dim, problem.dim), dtype=bool)
            for off, n in zip(offsets, dims):
                mask[off:off + n, off:off + n] = False
            stray = float(np.abs(m.a[mask]).max())
            if stray != 0.0:
                raise ConicEmbedError(
                    f"matrix {matno} has entries outside the declared blocks"
                )

    lines = [
        str(problem.num_constraints),
        str(len(dims)),
        " ".join(str(n) for n in dims),
        " ".join(_fmt_float(v) for v in problem.b),
    ]
    all_entries = []
    all_entries.extend(entries(0, problem.C))
    for j, a in enumerate(problem.constraints):
        all_entries.extend(entries(j + 1, a))
    all_entries.sort(key=lambda e: e[:4])
    lines.extend(f"{m} {blk} {i} {j} {_fmt_float(v)}" for m, blk, i, j, v in all_entries)
    Path(path).write_text("\n".join(lines) + "\n")
