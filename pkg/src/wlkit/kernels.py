"""Refinement round kernels: compiled backend when available, NumPy fallback.

Both backends emit, for every k-tuple, the row ``[previous color | sorted
substitution codes]``.  A substitution code encodes the k-vector of previous
colors obtained by substituting one vertex x into the tuple, ordered from the
last tuple position down to the first.  Codes are order-isomorphic to the
lexicographic order on those k-vectors, so dense-ranking the rows yields the
same color ids no matter which backend produced them.

Set WLKIT_KERNEL=python or WLKIT_KERNEL=cython to force a backend.
"""
from __future__ import annotations

import os

import numpy as np

_FORCED = os.environ.get("WLKIT_KERNEL", "").strip().lower()
_cy = None
if _FORCED not in ("python", "numpy", "py"):
    try:
        from . import _refine_cy as _cy  # type: ignore[attr-defined]
    except ImportError:
        _cy = None
if _FORCED in ("cython", "c") and _cy is None:
    raise ImportError("WLKIT_KERNEL=cython requested but the compiled kernel is missing")

# codes must fit comfortably in int64
_PACK_LIMIT = 2**62

_active = "auto"


def set_backend(name: str) -> None:
    """Select the round kernel at runtime: auto, python, or cython."""
    global _active
    if name not in ("auto", "python", "cython"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "cython" and _cy is None:
        raise ImportError("compiled kernel is not available")
    _active = name


def backend_name() -> str:
    return "cython" if (_cy is not None and _active != "python") else "python"


def packable(base: int, k: int) -> bool:
    return base**k < _PACK_LIMIT


_IDX_CACHE: dict[tuple[int, int], list[np.ndarray]] = {}


def index_matrices(n: int, k: int) -> list[np.ndarray]:
    """Per-position gather indices: mats[j][T, x] = rank of T with slot j := x."""
    key = (n, k)
    mats = _IDX_CACHE.get(key)
    if mats is None:
        idx = np.arange(n**k, dtype=np.int64)
        xs = np.arange(n, dtype=np.int64)
        mats = []
        for j in range(k):
            stride = n ** (k - 1 - j)
            digit = (idx // stride) % n
            base = idx - digit * stride
            mats.append(base[:, None] + xs[None, :] * stride)
        if len(_IDX_CACHE) >= 4:
            _IDX_CACHE.clear()
        _IDX_CACHE[key] = mats
    return mats


def tuple_digits(n: int, k: int) -> list[np.ndarray]:
    """digits[j][T] = vertex at position j of the rank-T tuple."""
    idx = np.arange(n**k, dtype=np.int64)
    return [(idx // (n ** (k - 1 - j))) % n for j in range(k)]


def dense_rank_rows(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Dense ids by lexicographic rank of int64 rows, plus unique rows by id.

    Non-negative entries only: rows are byte-swapped to big-endian and
    compared as raw bytes, which coincides with numeric lexicographic order.
    """
    m = rows.shape[0]
    if m == 0:
        return np.empty(0, dtype=np.int64), rows.copy()
    contig = np.ascontiguousarray(rows)
    be = contig.astype(">i8")
    view = be.view(f"V{8 * rows.shape[1]}").ravel()
    _, first, inverse = np.unique(view, return_index=True, return_inverse=True)
    return inverse.astype(np.int64), contig[first]


def round_rows(colors: np.ndarray, n: int, k: int, ncolors: int):
    """One k-dim refinement round; returns (rows, decode_info).

    rows: (n^k, 1+n) int64, column 0 the previous color, the rest the sorted
    substitution codes.  decode_info is ("packed", base) when codes are
    base-`base` big-endian packed vectors, or ("table", vecs) where vecs[i]
    is the k-vector a code i abbreviates.
    """
    if k < 2:
        raise ValueError("round_rows handles k >= 2 only")
    nk = colors.shape[0]
    base = max(2, int(ncolors))
    if packable(base, k):
        out = np.empty((nk, n + 1), dtype=np.int64)
        if _cy is not None and _active != "python":
            _cy.wl_round_rows(colors, n, k, base, out)
        else:
            mats = index_matrices(n, k)
            codes = colors[mats[k - 1]].copy()
            for j in range(k - 2, -1, -1):
                codes *= base
                codes += colors[mats[j]]
            out[:, 0] = colors
            out[:, 1:] = codes
        out[:, 1:].sort(axis=1)
        return out, ("packed", base)
    # overflow-safe path: rank the substitution vectors instead of packing
    mats = index_matrices(n, k)
    stacked = np.empty((nk * n, k), dtype=np.int64)
    for t in range(k):
        stacked[:, t] = colors[mats[k - 1 - t]].ravel()
    vec_ids, vecs = dense_rank_rows(stacked)
    codes = vec_ids.reshape(nk, n)
    codes.sort(axis=1)
    out = np.empty((nk, n + 1), dtype=np.int64)
    out[:, 0] = colors
    out[:, 1:] = codes
    return out, ("table", vecs)
