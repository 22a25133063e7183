"""k-dimensional color refinement over tuples of vertices.

The coloring starts from the isomorphism type of each k-tuple (equality
pattern, pair codes in both directions, vertex colors) and each round
appends, for every tuple, the sorted list of substitution vectors: the
k-vector of current colors obtained by replacing one position at a time
(last position first) with a vertex x, collected over all x.  Colors are
re-indexed densely every round; the process stops when the partition stops
splitting.

For k = 1 tuples are vertices and a round appends the multiset of
(neighbor color, edge code out, edge code in) triples together with the
multiset of non-neighbor colors, which refines like the classical degree
iteration but is aware of edge colors and orientation.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ResourceLimitError, UnsupportedGraphError
from .graph import ColoredGraph, disjoint_union
from .kernels import dense_rank_rows, round_rows, tuple_digits
from .limits import DEFAULT_LIMITS, Limits

_SENTINEL = 2**62


@dataclass
class RoundRecord:
    """Decoding data for one round: unique rows by color id plus code scheme."""

    rows: np.ndarray
    mode: str  # "iso" | "vertex" | "packed" | "table" | "k1"
    base: int | None = None
    table: np.ndarray | None = None


@dataclass
class TupleColoring:
    """Stable k-tuple coloring with optional per-round history and decoders."""

    k: int
    n: int
    colors: np.ndarray
    num_colors: int
    rounds: int
    class_counts: list[int]
    history: list[np.ndarray] | None = None
    records: list[RoundRecord] | None = None

    def rank(self, tup: Sequence[int]) -> int:
        if len(tup) != self.k:
            raise ValueError(f"expected a {self.k}-tuple")
        idx = 0
        for v in tup:
            if not 0 <= v < self.n:
                raise ValueError("vertex out of range")
            idx = idx * self.n + v
        return idx

    def color_of(self, tup: Sequence[int]) -> int:
        return int(self.colors[self.rank(tup)])

    def decode_color(self, rnd: int, color: int):
        """Structure behind a color id at round `rnd` (0 = initial)."""
        if self.records is None:
            raise ValueError("coloring was computed without decode records")
        rec = self.records[rnd]
        row = rec.rows[color]
        if rec.mode == "iso":
            return ("iso", tuple(int(v) for v in row))
        if rec.mode == "vertex":
            return ("vertex", int(row[0]))
        if rec.mode == "k1":
            prev = int(row[0])
            pb = rec.base
            nbr = []
            for code in row[1 : 1 + self.n]:
                code = int(code)
                if code >= _SENTINEL:
                    continue
                code, pvu = divmod(code, pb)
                pc, puv = divmod(code, pb)
                nbr.append((pc, puv, pvu))
            non = [int(c) for c in row[1 + self.n :] if int(c) < _SENTINEL]
            return ("k1", prev, tuple(nbr), tuple(non))
        prev = int(row[0])
        vecs = []
        for code in row[1:]:
            code = int(code)
            if rec.mode == "packed":
                digits = []
                for _ in range(self.k):
                    code, d = divmod(code, rec.base)
                    digits.append(d)
                vecs.append(tuple(reversed(digits)))
            else:
                vecs.append(tuple(int(v) for v in rec.table[code]))
        return ("round", prev, tuple(vecs))

    def export_text(self) -> str:
        """One line per tuple: `t v1 ... vk color`, tuples in rank order."""
        digits = tuple_digits(self.n, self.k)
        lines = []
        for idx in range(self.n**self.k):
            vs = " ".join(str(int(d[idx])) for d in digits)
            lines.append(f"t {vs} {int(self.colors[idx])}")
        return "\n".join(lines) + "\n"


@dataclass
class ProjectedColoring:
    """t-tuple coloring obtained by projecting a stable k-tuple coloring."""

    t: int
    n: int
    colors: np.ndarray
    num_colors: int

    def color_of(self, tup: Sequence[int]) -> int:
        idx = 0
        for v in tup:
            if not 0 <= v < self.n:
                raise ValueError("vertex out of range")
            idx = idx * self.n + v
        return int(self.colors[idx])


@dataclass
class LiftedColoring:
    """Keys for t-tuples with t > k, built recursively from a k-coloring."""

    t: int
    n: int
    keys: dict[tuple[int, ...], object] = field(repr=False, default_factory=dict)

    def key_of(self, tup: Sequence[int]):
        return self.keys[tuple(tup)]


def iso_type(g: ColoredGraph, tup: Sequence[int]) -> tuple:
    """Isomorphism type of an ordered tuple: equality pattern, pair codes
    for all ordered position pairs, and the vertex color at each position."""
    p = g.pair_codes()
    k = len(tup)
    eq = tuple(int(tup[i] == tup[j]) for i in range(k) for j in range(i + 1, k))
    pc = tuple(
        int(p[tup[i], tup[j]]) for i in range(k) for j in range(k) if i != j
    )
    vc = tuple(int(g.vertex_colors[v]) for v in tup)
    return (eq, pc, vc)


def _initial_rows(g: ColoredGraph, k: int) -> np.ndarray:
    """Iso-type feature rows for all n^k tuples (dense-rankable)."""
    n = g.n
    p = g.pair_codes()
    vc = np.asarray(g.vertex_colors, dtype=np.int64)
    digits = tuple_digits(n, k)
    cols = []
    for i in range(k):
        for j in range(i + 1, k):
            cols.append((digits[i] == digits[j]).astype(np.int64))
    for i in range(k):
        for j in range(k):
            if i != j:
                cols.append(p[digits[i], digits[j]])
    for i in range(k):
        cols.append(vc[digits[i]])
    return np.column_stack(cols)


def _estimate_bytes(n: int, k: int) -> int:
    if k == 1:
        return 8 * n * (2 * n + 2) * 3
    return 8 * (n**k) * (n + 1) * (k + 3)


def _round_rows_k1(g: ColoredGraph, colors: np.ndarray) -> tuple[np.ndarray, int]:
    n = g.n
    p = g.pair_codes()
    pb = int(p.max()) + 1
    if n * pb * pb >= _SENTINEL:
        raise ResourceLimitError("edge color space too large for the 1-dim round")
    mask = (p > 0) | (p.T > 0)
    np.fill_diagonal(mask, False)
    nbr = (colors[None, :] * pb + p) * pb + p.T
    nbr = np.where(mask, nbr, _SENTINEL)
    non = np.broadcast_to(colors[None, :], (n, n)).copy()
    non[mask] = _SENTINEL
    np.fill_diagonal(non, _SENTINEL)
    nbr.sort(axis=1)
    non.sort(axis=1)
    rows = np.empty((n, 1 + 2 * n), dtype=np.int64)
    rows[:, 0] = colors
    rows[:, 1 : 1 + n] = nbr
    rows[:, 1 + n :] = non
    return rows, pb


def refine_k(
    g: ColoredGraph,
    k: int,
    *,
    vertex_colors: Sequence[int] | None = None,
    limits: Limits = DEFAULT_LIMITS,
    keep_history: bool = True,
    keep_records: bool = True,
) -> TupleColoring:
    """Run k-dim refinement to stability.  `vertex_colors` overrides the
    graph's own colors (used for individualization) without copying edges."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if vertex_colors is not None:
        g = g.with_vertex_colors(vertex_colors)
    n = g.n
    need = _estimate_bytes(n, k)
    if need > limits.memory_bytes:
        raise ResourceLimitError(
            f"refinement at n={n}, k={k} needs about {need} bytes",
            required=need,
            cap=limits.memory_bytes,
        )
    history: list[np.ndarray] | None = [] if keep_history else None
    records: list[RoundRecord] | None = [] if keep_records else None
    class_counts: list[int] = []

    if n == 0:
        return TupleColoring(
            k=k, n=0, colors=np.empty(0, dtype=np.int64), num_colors=0,
            rounds=0, class_counts=[0],
            history=[] if keep_history else None,
            records=[] if keep_records else None,
        )

    if k == 1:
        vc = np.asarray(g.vertex_colors, dtype=np.int64)
        colors, uniq = dense_rank_rows(vc[:, None])
        if records is not None:
            records.append(RoundRecord(rows=uniq, mode="vertex"))
    else:
        rows0 = _initial_rows(g, k)
        colors, uniq = dense_rank_rows(rows0)
        if records is not None:
            records.append(RoundRecord(rows=uniq, mode="iso"))
    ncolors = int(colors.max()) + 1
    class_counts.append(ncolors)
    if history is not None:
        history.append(colors)

    rounds = 0
    while True:
        if k == 1:
            rows, pb = _round_rows_k1(g, colors)
            info = ("k1", pb)
        else:
            rows, info = round_rows(colors, n, k, ncolors)
        ids, uniq = dense_rank_rows(rows)
        if np.array_equal(ids, colors):
            break
        colors = ids
        ncolors = int(colors.max()) + 1
        rounds += 1
        class_counts.append(ncolors)
        if history is not None:
            history.append(colors)
        if records is not None:
            if info[0] == "packed":
                records.append(RoundRecord(rows=uniq, mode="packed", base=info[1]))
            elif info[0] == "table":
                records.append(RoundRecord(rows=uniq, mode="table", table=info[1]))
            else:
                records.append(RoundRecord(rows=uniq, mode="k1", base=info[1]))
    return TupleColoring(
        k=k, n=n, colors=colors, num_colors=ncolors, rounds=rounds,
        class_counts=class_counts, history=history, records=records,
    )


def refine_1(g: ColoredGraph, **kwargs) -> TupleColoring:
    return refine_k(g, 1, **kwargs)


def refine_2(g: ColoredGraph, **kwargs) -> TupleColoring:
    return refine_k(g, 2, **kwargs)


def invariant_bytes(tc: TupleColoring) -> bytes:
    """Label-invariant summary of a coloring: round class counts plus the
    histogram of final colors (sorted by color id, which is itself a
    label-invariant order)."""
    head = np.asarray([tc.n, tc.k, tc.rounds] + tc.class_counts, dtype=np.int64)
    hist = np.bincount(tc.colors, minlength=tc.num_colors).astype(np.int64)
    return head.tobytes() + b"|" + hist.tobytes()


def project(tc: TupleColoring, t: int) -> ProjectedColoring:
    """Restrict a stable k-coloring to t-tuples (1 <= t <= k) by repeatedly
    sorting out the last position."""
    if not 1 <= t <= tc.k:
        raise ValueError("projection needs 1 <= t <= k")
    cur = tc.colors
    n = tc.n
    for level in range(tc.k - 1, t - 1, -1):
        rows = cur.reshape(n**level, n).copy()
        rows.sort(axis=1)
        cur, _ = dense_rank_rows(rows)
    num = int(cur.max()) + 1 if cur.size else 0
    return ProjectedColoring(t=t, n=n, colors=cur, num_colors=num)


def vertex_classes(tc: TupleColoring) -> np.ndarray:
    """Vertex coloring induced by a stable k-coloring."""
    return project(tc, 1).colors


def lift(
    g: ColoredGraph,
    tc: TupleColoring,
    t: int,
    tuples: Iterable[Sequence[int]] | None = None,
) -> LiftedColoring:
    """Extend a stable k-coloring to t-tuples (t > k): the key of a tuple is
    its isomorphism type together with the keys of all delete-one-position
    subtuples, deleting the last position first."""
    if t <= tc.k:
        raise ValueError("lift needs t > k; use project for t <= k")
    n = tc.n
    memo: dict[tuple[int, ...], object] = {}

    def key(tup: tuple[int, ...]):
        got = memo.get(tup)
        if got is not None:
            return got
        if len(tup) == tc.k:
            out = ("s", tc.color_of(tup))
        else:
            subs = tuple(
                key(tup[:i] + tup[i + 1 :]) for i in range(len(tup) - 1, -1, -1)
            )
            out = ("l", iso_type(g, tup), subs)
        memo[tup] = out
        return out

    lifted = LiftedColoring(t=t, n=n)
    if tuples is None:
        if n**t > 200_000:
            raise ResourceLimitError(
                f"enumerating all {n}^{t} tuples is too large; pass explicit tuples"
            )
        digits = tuple_digits(n, t)
        tuples = (
            tuple(int(d[idx]) for d in digits) for idx in range(n**t)
        )
    for tup in tuples:
        tup = tuple(tup)
        if len(tup) != t:
            raise ValueError(f"expected {t}-tuples")
        lifted.keys[tup] = key(tup)
    return lifted


def similar_k(
    g: ColoredGraph,
    h: ColoredGraph,
    k: int,
    *,
    limits: Limits = DEFAULT_LIMITS,
) -> bool:
    """True when no k-dim refinement invariant separates g and h: run the
    refinement on the disjoint union and compare the color multisets of the
    all-in-g and all-in-h tuples."""
    if g.n != h.n or g.directed != h.directed:
        return False
    if g.n == 0:
        return True
    u = disjoint_union(g, h)
    tc = refine_k(u, k, limits=limits, keep_history=False, keep_records=False)
    digits = tuple_digits(u.n, k)
    in_g = np.ones(u.n**k, dtype=bool)
    in_h = np.ones(u.n**k, dtype=bool)
    for d in digits:
        in_g &= d < g.n
        in_h &= d >= g.n
    cg = np.sort(tc.colors[in_g])
    ch = np.sort(tc.colors[in_h])
    return bool(np.array_equal(cg, ch))


def count_paths(
    g: ColoredGraph,
    u: int,
    v: int,
    length: int,
    coloring: Sequence[int] | None = None,
) -> dict[tuple[int, ...], int]:
    """Count simple u-v paths with `length` edges, bucketed by the sequence
    of colors along the path (endpoints included)."""
    if coloring is None:
        coloring = g.vertex_colors
    out: dict[tuple[int, ...], int] = {}
    path = [u]
    seen = {u}

    def walk(x: int) -> None:
        if len(path) == length + 1:
            if x == v:
                chara = tuple(int(coloring[w]) for w in path)
                out[chara] = out.get(chara, 0) + 1
            return
        for y in g.neighbors(x):
            if y in seen:
                continue
            path.append(y)
            seen.add(y)
            walk(y)
            seen.discard(y)
            path.pop()

    walk(u)
    return out


def _hash(*parts: bytes) -> bytes:
    h = hashlib.sha256()
    for p in parts:
        h.update(p)
    return h.digest()


def stable_vertex_names(
    g: ColoredGraph,
    *,
    vertex_colors: Sequence[int] | None = None,
    limits: Limits = DEFAULT_LIMITS,
) -> list[bytes]:
    """Absolute per-vertex names under 1-dim refinement: each color id is
    renamed to a digest of its decoded structure, bottom up, so names agree
    across runs and across graphs whenever the underlying structure does."""
    tc = refine_k(g, 1, vertex_colors=vertex_colors, limits=limits)
    assert tc.records is not None
    names: list[bytes] = []
    for rnd, rec in enumerate(tc.records):
        if rec.mode == "vertex":
            names = [
                _hash(b"v", int(rec.rows[c][0]).to_bytes(8, "big"))
                for c in range(rec.rows.shape[0])
            ]
            continue
        prev_names = names
        nxt: list[bytes] = []
        for c in range(rec.rows.shape[0]):
            _, prev, nbr, non = tc.decode_color(rnd, c)
            nbr_parts = sorted(
                prev_names[pc] + puv.to_bytes(8, "big") + pvu.to_bytes(8, "big")
                for pc, puv, pvu in nbr
            )
            non_parts = sorted(prev_names[pc] for pc in non)
            nxt.append(
                _hash(
                    b"r", prev_names[prev],
                    b"N", *nbr_parts,
                    b"E", *non_parts,
                )
            )
        names = nxt
    return [names[int(c)] for c in tc.colors]
