"""Coherent configurations: validation, closure, and the Klein-group scheme.

A configuration is stored as an (n, n) matrix of relation ids.  Validation
checks the three axioms directly: the diagonal is a union of relations, the
transpose of every relation is a relation, and the number of z with
(x, z) in R_i, (z, y) in R_j depends only on the relation of (x, y).

The Klein scheme of a cubic graph puts a 4-point fibre on every vertex,
carrying that fibre's identity relation and three pairings (points as 2-bit
vectors; pairing m joins points differing by m).  Every ordered adjacent
fibre pair carries two block relations built from the port numbers of the
edge; every ordered non-adjacent pair carries one full block relation.
Relation ids are absolute: each block's relations are distinct ids, numbered
in a fixed scan order, so two schemes are compared id for id.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CoherenceError, ParseError, UnsupportedGraphError
from .graph import ColoredGraph
from .kernels import dense_rank_rows


@dataclass
class CoherentConfig:
    n: int
    s: int
    rel: np.ndarray
    roles: dict[int, tuple] | None = None

    def copy(self) -> "CoherentConfig":
        return CoherentConfig(
            n=self.n, s=self.s, rel=self.rel.copy(),
            roles=dict(self.roles) if self.roles is not None else None,
        )


@dataclass
class ValidationReport:
    ok: bool
    axiom: int | None = None
    witness: tuple | None = None
    transpose_map: list[int] | None = None
    # relation id -> {(i, j): count of z with (x,z) in i, (z,y) in j}
    intersection: dict[int, dict[tuple[int, int], int]] | None = field(
        default=None, repr=False
    )


def validate(c: CoherentConfig) -> ValidationReport:
    """Check the configuration axioms; on failure the report names the axiom
    (1 diagonal, 2 transpose, 3 intersection numbers) and a witness cell."""
    rel = c.rel
    n = c.n
    if rel.shape != (n, n):
        return ValidationReport(ok=False, axiom=0, witness=(rel.shape, (n, n)))
    present = np.unique(rel)
    if rel.min() < 0 or rel.max() >= c.s or present.shape[0] != c.s:
        missing = sorted(set(range(c.s)) - set(int(x) for x in present))
        return ValidationReport(ok=False, axiom=0, witness=tuple(missing))
    diag_ids = set(int(x) for x in np.unique(np.diag(rel)))
    off = ~np.eye(n, dtype=bool)
    for did in diag_ids:
        cells = np.argwhere((rel == did) & off)
        if cells.shape[0]:
            x, y = (int(v) for v in cells[0])
            return ValidationReport(ok=False, axiom=1, witness=(did, x, y))
    tmap = [-1] * c.s
    for rid in range(c.s):
        xs, ys = np.nonzero(rel == rid)
        tvals = np.unique(rel[ys, xs])
        if tvals.shape[0] != 1:
            x, y = int(xs[0]), int(ys[0])
            return ValidationReport(ok=False, axiom=2, witness=(rid, x, y))
        tmap[rid] = int(tvals[0])
    sparse: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    exemplar: dict[int, tuple[int, int]] = {}
    for x in range(n):
        row = rel[x, :] * c.s
        for y in range(n):
            rid = int(rel[x, y])
            codes, counts = np.unique(row + rel[:, y], return_counts=True)
            got = sparse.get(rid)
            if got is None:
                sparse[rid] = (codes, counts)
                exemplar[rid] = (x, y)
            elif not (
                np.array_equal(got[0], codes) and np.array_equal(got[1], counts)
            ):
                return ValidationReport(
                    ok=False, axiom=3, witness=(rid, x, y, *exemplar[rid]),
                )
    inter = {
        rid: {
            (int(code) // c.s, int(code) % c.s): int(cnt)
            for code, cnt in zip(codes, counts)
        }
        for rid, (codes, counts) in sparse.items()
    }
    return ValidationReport(ok=True, transpose_map=tmap, intersection=inter)


def graph_seed(g: ColoredGraph) -> np.ndarray:
    """Seed partition of V x V from a colored graph: diagonal split by vertex
    color, off-diagonal split by edge code in both directions."""
    n = g.n
    p = g.pair_codes()
    vc = np.asarray(g.vertex_colors, dtype=np.int64)
    diag = np.eye(n, dtype=np.int64)
    c0 = diag
    c1 = diag * (1 + vc[:, None])
    c2 = (1 - diag) * p
    c3 = (1 - diag) * p.T
    rows = np.stack([c0, c1, c2, c3], axis=2).reshape(n * n, 4)
    ids, _ = dense_rank_rows(rows)
    return ids.reshape(n, n)


def cellular_closure(seed: np.ndarray | ColoredGraph) -> CoherentConfig:
    """Coarsest coherent configuration refining the seed partition.

    Rounds replace each cell's color with (its color, the multiset over z of
    the color pair (c(x, z), c(z, y))) until stable; the result is validated
    before it is returned.  Ids come out dense, diagonal relations first.
    """
    if isinstance(seed, ColoredGraph):
        seed = graph_seed(seed)
    seed = np.asarray(seed, dtype=np.int64)
    if seed.ndim != 2 or seed.shape[0] != seed.shape[1]:
        raise UnsupportedGraphError("seed must be a square matrix")
    n = seed.shape[0]
    if n == 0:
        return CoherentConfig(n=0, s=0, rel=seed.copy())
    # force the diagonal apart from the rest before refining
    start = seed * 2 + np.eye(n, dtype=np.int64)
    ids, _ = dense_rank_rows(start.reshape(n * n, 1))
    cur = ids.reshape(n, n)
    while True:
        s = int(cur.max()) + 1
        t = cur[:, None, :] * s + cur.T[None, :, :]
        t.sort(axis=2)
        rows = np.concatenate([cur.reshape(n * n, 1), t.reshape(n * n, n)], axis=1)
        ids, _ = dense_rank_rows(rows)
        nxt = ids.reshape(n, n)
        if np.array_equal(nxt, cur):
            break
        cur = nxt
    # canonical ids: diagonal relations first, then the rest, old order kept
    diag_ids = sorted(set(int(x) for x in np.unique(np.diag(cur))))
    other = [rid for rid in range(int(cur.max()) + 1) if rid not in set(diag_ids)]
    remap = np.empty(int(cur.max()) + 1, dtype=np.int64)
    for new, old in enumerate(diag_ids + other):
        remap[old] = new
    rel = remap[cur]
    out = CoherentConfig(n=n, s=int(rel.max()) + 1, rel=rel)
    report = validate(out)
    if not report.ok:
        raise CoherenceError("closure output failed validation", report.axiom, report.witness)
    return out


def _check_cubic(g: ColoredGraph) -> None:
    if g.directed:
        raise UnsupportedGraphError("the fibre scheme needs an undirected base")
    if g.n == 0:
        raise UnsupportedGraphError("the fibre scheme needs a non-empty base")
    if any(g.degree(v) != 3 for v in range(g.n)):
        raise UnsupportedGraphError("the fibre scheme needs a cubic base")
    if any(c != 0 for _, _, c in g.edge_list()):
        raise UnsupportedGraphError("the fibre scheme needs uncolored base edges")


def klein_scheme(
    g: ColoredGraph,
    ports: dict[int, dict[int, int]] | None = None,
) -> CoherentConfig:
    """Klein-group scheme of a cubic graph: points 4v..4v+3 per vertex v.

    `ports` assigns each vertex a bijection from its neighbors to {1, 2, 3}
    (default: ascending neighbor order).  With points read as 2-bit vectors,
    an edge {i, j} with ports c and c' relates (x, y) by whether x lies in
    {0, c} exactly when y lies in {0, c'}; that block and its complement are
    the edge's two relations, in both directions.
    """
    _check_cubic(g)
    if ports is None:
        ports = {
            v: {u: t + 1 for t, u in enumerate(g.neighbors(v))} for v in range(g.n)
        }
    for v in range(g.n):
        got = ports.get(v)
        if got is None or sorted(got) != g.neighbors(v) or sorted(got.values()) != [1, 2, 3]:
            raise UnsupportedGraphError(
                f"ports of vertex {v} must map its neighbors onto {{1, 2, 3}}"
            )
    n = g.n
    npts = 4 * n
    rel = np.full((npts, npts), -1, dtype=np.int64)
    roles: dict[int, tuple] = {}
    nid = 0
    for i in range(n):
        roles[nid] = ("diag", i)
        for x in range(4):
            rel[4 * i + x, 4 * i + x] = nid
        nid += 1
    for i in range(n):
        for m in (1, 2, 3):
            roles[nid] = ("fibre", i, m)
            for x in range(4):
                rel[4 * i + x, 4 * i + (x ^ m)] = nid
            nid += 1
    adj = {(u, v) for u, v, _ in g.edge_list()} | {(v, u) for u, v, _ in g.edge_list()}
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if (i, j) in adj:
                cij, cji = ports[i][j], ports[j][i]
                r1, r2 = nid, nid + 1
                roles[r1] = ("edge", i, j, 1)
                roles[r2] = ("edge", i, j, 2)
                for x in range(4):
                    for y in range(4):
                        same = (x in (0, cij)) == (y in (0, cji))
                        rel[4 * i + x, 4 * j + y] = r1 if same else r2
                nid += 2
            else:
                roles[nid] = ("non", i, j)
                rel[4 * i : 4 * i + 4, 4 * j : 4 * j + 4] = nid
                nid += 1
    assert int(rel.min()) >= 0
    return CoherentConfig(n=npts, s=nid, rel=rel, roles=roles)


def klein_relation_count(num_vertices: int, num_edges: int) -> int:
    """Relation count of the scheme: 4 per fibre, 4 per edge (two ordered
    directions, two relations each), 1 per ordered non-adjacent pair."""
    s, m = num_vertices, num_edges
    return 4 * s + 4 * m + (s * (s - 1) - 2 * m)


def psi_twist(c: CoherentConfig, i: int) -> CoherentConfig:
    """Swap the two relations inside every edge block incident to fibre i
    (both directions).  The relation ids keep their meaning as indices; only
    which cells carry which id changes."""
    if c.n % 4 != 0:
        raise UnsupportedGraphError("twist needs a fibre scheme (4-point fibres)")
    nf = c.n // 4
    if not 0 <= i < nf:
        raise ValueError("fibre index out of range")
    out = c.copy()
    rel = out.rel
    for j in range(nf):
        if j == i:
            continue
        for a, b in ((i, j), (j, i)):
            block = rel[4 * a : 4 * a + 4, 4 * b : 4 * b + 4]
            ids = np.unique(block)
            if ids.shape[0] != 2:
                continue
            r1, r2 = int(ids[0]), int(ids[1])
            mask = block == r1
            block[mask] = r2
            block[~mask] = r1
    return out


def scheme_graph(c: CoherentConfig) -> ColoredGraph:
    """Directed edge-colored graph of a fibre scheme: one di-edge per cell,
    colored by relation id, except the diagonal and the full one-relation
    blocks (non-adjacent fibre pairs)."""
    if c.n % 4 != 0:
        raise UnsupportedGraphError("expected a fibre scheme (4-point fibres)")
    nf = c.n // 4
    edges = []
    for a in range(nf):
        for b in range(nf):
            block = c.rel[4 * a : 4 * a + 4, 4 * b : 4 * b + 4]
            if a == b:
                for x in range(4):
                    for y in range(4):
                        if x != y:
                            edges.append((4 * a + x, 4 * b + y, int(block[x, y])))
                continue
            if np.unique(block).shape[0] < 2:
                continue
            for x in range(4):
                for y in range(4):
                    edges.append((4 * a + x, 4 * b + y, int(block[x, y])))
    return ColoredGraph(c.n, edges, directed=True)


def config_graph(c: CoherentConfig) -> ColoredGraph:
    """Lossless graph form of any configuration: vertices colored by their
    diagonal relation, all off-diagonal cells as colored di-edges."""
    diag = np.diag(c.rel)
    _, inverse = np.unique(diag, return_inverse=True)
    edges = [
        (x, y, int(c.rel[x, y]))
        for x in range(c.n)
        for y in range(c.n)
        if x != y
    ]
    return ColoredGraph(
        c.n, edges, directed=True, vertex_colors=[int(v) for v in inverse]
    )


def merge_relations(c: CoherentConfig, groups: list[list[int]]) -> np.ndarray:
    """Seed matrix with each listed group of relation ids fused into one
    color (unlisted ids stay separate).  The result is generally not
    coherent; feed it to cellular_closure."""
    seen: set[int] = set()
    for grp in groups:
        for rid in grp:
            if not 0 <= rid < c.s:
                raise ValueError(f"relation id {rid} out of range")
            if rid in seen:
                raise ValueError(f"relation id {rid} in two groups")
            seen.add(rid)
    remap = np.empty(c.s, dtype=np.int64)
    nxt = 0
    for grp in groups:
        for rid in grp:
            remap[rid] = nxt
        nxt += 1
    for rid in range(c.s):
        if rid not in seen:
            remap[rid] = nxt
            nxt += 1
    return remap[c.rel]


def klein_merge_groups(c: CoherentConfig) -> list[list[int]]:
    """The role-respecting fusion of a fibre scheme: all fibre identities,
    the three pairing families, the two edge-relation families, and the
    non-adjacent blocks."""
    if c.roles is None:
        raise ValueError("scheme has no role table")
    buckets: dict[tuple, list[int]] = {}
    for rid in range(c.s):
        role = c.roles[rid]
        if role[0] == "diag":
            key = ("diag",)
        elif role[0] == "fibre":
            key = ("fibre", role[2])
        elif role[0] == "edge":
            key = ("edge", role[3])
        else:
            key = ("non",)
        buckets.setdefault(key, []).append(rid)
    order = [("diag",), ("fibre", 1), ("fibre", 2), ("fibre", 3),
             ("edge", 1), ("edge", 2), ("non",)]
    return [buckets[k] for k in order if k in buckets]


def serialize_scheme(c: CoherentConfig) -> str:
    lines = [f"p cc {c.n} {c.s}"]
    for x in range(c.n):
        for y in range(c.n):
            lines.append(f"r {x} {y} {int(c.rel[x, y])}")
    return "\n".join(lines) + "\n"


def parse_scheme(text: str) -> CoherentConfig:
    n = s = None
    rel = None
    filled = None
    count = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise ParseError("duplicate header", lineno)
            if len(parts) != 4 or parts[1] != "cc":
                raise ParseError("expected `p cc <points> <relations>`", lineno)
            try:
                n, s = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError("header counts must be integers", lineno)
            if n < 0 or s < 0:
                raise ParseError("header counts must be non-negative", lineno)
            rel = np.full((n, n), -1, dtype=np.int64)
            filled = np.zeros((n, n), dtype=bool)
        elif parts[0] == "r":
            if rel is None:
                raise ParseError("cell before header", lineno)
            if len(parts) != 4:
                raise ParseError("expected `r <x> <y> <relation>`", lineno)
            try:
                x, y, rid = int(parts[1]), int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError("cell fields must be integers", lineno)
            if not (0 <= x < n and 0 <= y < n):
                raise ParseError("cell out of range", lineno)
            if not 0 <= rid < s:
                raise ParseError("relation id out of range", lineno)
            if filled[x, y]:
                raise ParseError(f"cell ({x}, {y}) assigned twice", lineno)
            filled[x, y] = True
            rel[x, y] = rid
            count += 1
        else:
            raise ParseError(f"unknown record {parts[0]!r}", lineno)
    if n is None:
        raise ParseError("missing `p cc` header")
    if count != n * n:
        raise ParseError(f"expected {n * n} cells, found {count}")
    present = set(int(v) for v in np.unique(rel)) if n else set()
    if n and present != set(range(s)):
        raise ParseError("relation ids must be exactly 0..s-1")
    return CoherentConfig(n=n, s=s, rel=rel)
