"""Stable subsets, their closures, and the contraction-based reduction.

A subset S is color-stable (here: CWS) when any two vertices of S that share
a class color also share their colored neighborhood outside S.  The closure
of a seed set keeps adding, for every same-colored pair inside, the vertices
whose adjacency tells the pair apart, until nothing is forced; the result is
the minimal CWS superset.  A CWS set is prime when every same-colored pair
inside it closes to exactly the whole set.

`reduce` repeats: refine, contract twin groups, contract overlap blocks
(vertices whose pair closures give several distinct primes), then contract
the prime pieces found by the scan, each piece replaced by one vertex whose
color ranks the piece's canonical certificate and whose attachment edges
rank the colored attachment profiles.  The run ends in a terminal graph; the
combined digest hashes the terminal certificate plus every level's piece
digests and rank tables, so two inputs reduce to the same digest only if the
whole decomposition matches piece for piece.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .canon import Certificate, certify
from .errors import DecompositionError, UnsupportedGraphError
from .graph import ColoredGraph
from .limits import DEFAULT_LIMITS, Limits
from .refine import project, refine_k


@dataclass(frozen=True)
class CWSRecord:
    vertices: frozenset[int]
    colors: tuple[tuple[int, int], ...]  # (vertex, class color), sorted
    prime: bool
    seed_pair: tuple[int, int] | None = None


@dataclass
class Level:
    kind: str  # "twin" | "overlap" | "prime"
    pieces: list[CWSRecord]
    digests: list[bytes]
    mapping: list[int]  # old vertex -> new vertex
    color_table: list[bytes]  # piece digest per fresh color rank
    profile_table: list[bytes]  # attachment profile per fresh edge color rank
    size_before: int
    size_after: int


@dataclass
class DecompositionTree:
    k: int
    levels: list[Level]
    terminal: ColoredGraph
    terminal_certificate: Certificate = field(repr=False, default=None)

    @property
    def depth(self) -> int:
        return len(self.levels)

    def digest(self) -> bytes:
        h = hashlib.sha256()
        h.update(b"T")
        h.update(self.terminal_certificate.digest)
        for lv in self.levels:
            h.update(b"L")
            h.update(lv.kind.encode("ascii"))
            for d in sorted(lv.digests):
                h.update(b"p")
                h.update(d)
            for d in lv.color_table:
                h.update(b"c")
                h.update(d)
            for p in lv.profile_table:
                h.update(b"e")
                h.update(p)
        return h.digest()


def _as_colors(g: ColoredGraph, coloring) -> np.ndarray:
    arr = np.asarray(list(coloring), dtype=np.int64)
    if arr.shape != (g.n,):
        raise ValueError("coloring must assign one class per vertex")
    return arr


def _refined_classes(g: ColoredGraph, k: int, limits: Limits) -> np.ndarray:
    tc = refine_k(g, k, limits=limits, keep_history=False, keep_records=False)
    return project(tc, 1).colors


def is_cws(g: ColoredGraph, coloring, s) -> bool:
    """Same-colored members of s must agree on their colored adjacency to
    every vertex outside s."""
    cols = _as_colors(g, coloring)
    sset = sorted(set(int(v) for v in s))
    if not all(0 <= v < g.n for v in sset):
        raise ValueError("subset vertex out of range")
    outside = np.asarray([v for v in range(g.n) if v not in set(sset)], dtype=np.int64)
    if outside.shape[0] == 0:
        return True
    p = g.pair_codes()
    members = np.asarray(sset, dtype=np.int64)
    for c in np.unique(cols[members]):
        group = members[cols[members] == c]
        if group.shape[0] < 2:
            continue
        block = p[np.ix_(group, outside)]
        if not np.array_equal(block, np.broadcast_to(block[0], block.shape)):
            return False
        blockT = p[np.ix_(outside, group)]
        if not np.array_equal(blockT, np.broadcast_to(blockT[:, :1], blockT.shape)):
            return False
    return True


def _closure_impl(p: np.ndarray, cols: np.ndarray, seed, directed: bool) -> frozenset[int]:
    s = set(int(v) for v in seed)
    members = sorted(s)
    pending = [
        (x, y)
        for i, x in enumerate(members)
        for y in members[i + 1 :]
        if cols[x] == cols[y]
    ]
    while pending:
        x, y = pending.pop()
        neq = p[x] != p[y]
        if directed:
            neq = neq | (p[:, x] != p[:, y])
        for w in np.flatnonzero(neq):
            w = int(w)
            if w in s or w == x or w == y:
                continue
            pending.extend((w, z) for z in s if cols[z] == cols[w])
            s.add(w)
    return frozenset(s)


class _Scan:
    """Memoized pair closures and primality checks for one (graph, coloring)."""

    def __init__(self, g: ColoredGraph, cols: np.ndarray):
        self.g = g
        self.cols = cols
        self.p = g.pair_codes()
        self.cl: dict[tuple[int, int], frozenset[int]] = {}
        self.prime: dict[frozenset[int], bool] = {}

    def closure_pair(self, x: int, y: int) -> frozenset[int]:
        key = (x, y) if x < y else (y, x)
        got = self.cl.get(key)
        if got is None:
            got = _closure_impl(self.p, self.cols, key, self.g.directed)
            self.cl[key] = got
        return got

    def is_prime(self, sset: frozenset[int]) -> bool:
        got = self.prime.get(sset)
        if got is not None:
            return got
        out = False
        if len(sset) >= 2 and is_cws(self.g, self.cols, sset):
            members = sorted(sset)
            any_pair = False
            out = True
            for i, x in enumerate(members):
                for y in members[i + 1 :]:
                    if self.cols[x] != self.cols[y]:
                        continue
                    any_pair = True
                    if self.closure_pair(x, y) != sset:
                        out = False
                        break
                if not out:
                    break
            out = out and any_pair
        self.prime[sset] = out
        return out


def closure(g: ColoredGraph, coloring, seed) -> frozenset[int]:
    """Minimal CWS superset of `seed`: whenever a same-colored pair inside
    disagrees about a vertex, that vertex is forced in."""
    cols = _as_colors(g, coloring)
    s = set(int(v) for v in seed)
    if not all(0 <= v < g.n for v in s):
        raise ValueError("seed vertex out of range")
    return _closure_impl(g.pair_codes(), cols, s, g.directed)


def is_prime(g: ColoredGraph, coloring, s) -> bool:
    """True when s is a CWS set, contains at least one same-colored pair, and
    every same-colored pair inside closes to exactly s."""
    cols = _as_colors(g, coloring)
    sset = frozenset(int(v) for v in s)
    return _Scan(g, cols).is_prime(sset)


def cws_spectrum(g: ColoredGraph, coloring, v: int) -> list[frozenset[int]]:
    """Distinct pair closures of v with its classmates, smallest first."""
    cols = _as_colors(g, coloring)
    if not 0 <= v < g.n:
        raise ValueError("vertex out of range")
    out: set[frozenset[int]] = set()
    for w in range(g.n):
        if w != v and cols[w] == cols[v]:
            out.add(closure(g, cols, (v, w)))
    return sorted(out, key=lambda s: (len(s), sorted(s)))


class _UF:
    def __init__(self, n: int):
        self.p = list(range(n))

    def find(self, x: int) -> int:
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.p[max(ra, rb)] = min(ra, rb)


def twin_classes(
    g: ColoredGraph, coloring
) -> tuple[list[list[int]], list[list[int]]]:
    """Groups of mutual twins: (adjacent-pair groups, non-adjacent groups).
    Twins share a class color and their colored adjacency to every other
    vertex; adjacent twin groups come out as uniform cliques."""
    cols = _as_colors(g, coloring)
    p = g.pair_codes()
    n = g.n
    uf_t, uf_f = _UF(n), _UF(n)
    for x in range(n):
        for y in range(x + 1, n):
            if cols[x] != cols[y]:
                continue
            rest = [w for w in range(n) if w != x and w != y]
            same = all(p[x, w] == p[y, w] and p[w, x] == p[w, y] for w in rest)
            if not same:
                continue
            if p[x, y] != 0:
                uf_t.union(x, y)
            else:
                uf_f.union(x, y)
    def collect(uf: _UF) -> list[list[int]]:
        groups: dict[int, list[int]] = {}
        for v in range(n):
            groups.setdefault(uf.find(v), []).append(v)
        return [sorted(vs) for _, vs in sorted(groups.items()) if len(vs) >= 2]
    return collect(uf_t), collect(uf_f)


def _piece_graph(g: ColoredGraph, cols: np.ndarray, piece: frozenset[int]) -> ColoredGraph:
    sub, index = g.induced(sorted(piece))
    local = cols[np.asarray(index, dtype=np.int64)]
    _, dense = np.unique(local, return_inverse=True)
    return sub.with_vertex_colors([int(c) for c in dense])


def _piece_digest(
    g: ColoredGraph, cols: np.ndarray, piece: frozenset[int], k: int, limits: Limits
) -> bytes:
    return certify(_piece_graph(g, cols, piece), k, "canonical", limits=limits).digest


def _attachment_profiles(
    g: ColoredGraph, cols: np.ndarray, pieces: list[frozenset[int]]
) -> tuple[dict, dict]:
    """Serialized colored attachment patterns: per (outside vertex, piece)
    and per piece pair.  Entries use class colors, so they are stable under
    relabeling of the input."""
    owner = {}
    for pi, piece in enumerate(pieces):
        for v in piece:
            owner[v] = pi
    outside = [v for v in range(g.n) if v not in owner]
    op: dict[tuple[int, int], bytes] = {}
    pp: dict[tuple[int, int], bytes] = {}
    for w in outside:
        per_piece: dict[int, list] = {}
        for u in g.neighbors(w):
            pi = owner.get(u)
            if pi is None:
                continue
            c = g.edge_color(w, u)
            cr = g.edge_color(u, w)
            per_piece.setdefault(pi, []).append(
                (int(cols[u]), -1 if c is None else c, -1 if cr is None else cr)
            )
        for pi, entries in per_piece.items():
            op[(w, pi)] = ("op" + repr(sorted(entries))).encode("ascii")
    for i in range(len(pieces)):
        for j in range(i + 1, len(pieces)):
            entries = []
            for u in pieces[i]:
                for v in g.neighbors(u):
                    if owner.get(v) == j:
                        c = g.edge_color(u, v)
                        entries.append(
                            (*sorted((int(cols[u]), int(cols[v]))), 0 if c is None else c)
                        )
            if entries:
                pp[(i, j)] = ("pp" + repr(sorted(entries))).encode("ascii")
    return op, pp


def contract_batch(
    g: ColoredGraph,
    cols: np.ndarray,
    pieces: list[frozenset[int]],
    digests: list[bytes],
) -> tuple[ColoredGraph, list[int], list[bytes], list[bytes]]:
    """Replace each piece by one vertex; returns (new graph, old->new map,
    digest table behind the fresh colors, profile table behind the fresh
    edge colors)."""
    seen: set[int] = set()
    for piece in pieces:
        if seen & piece:
            raise DecompositionError("pieces overlap")
        seen |= piece
    outside = [v for v in range(g.n) if v not in seen]
    order = sorted(range(len(pieces)), key=lambda i: (digests[i], min(pieces[i])))
    mapping = [-1] * g.n
    for new, v in enumerate(outside):
        mapping[v] = new
    for slot, i in enumerate(order):
        for v in pieces[i]:
            mapping[v] = len(outside) + slot
    color_table = sorted(set(digests))
    vbase = g.max_vertex_color() + 1
    colors = [g.vertex_colors[v] for v in outside] + [
        vbase + color_table.index(digests[i]) for i in order
    ]
    op, pp = _attachment_profiles(g, cols, pieces)
    profile_table = sorted(set(op.values()) | set(pp.values()))
    ebase = g.max_edge_color() + 1
    edges: dict[tuple[int, int], int] = {}
    for u, v, c in g.edge_list():
        iu, iv = u in seen, v in seen
        if not iu and not iv:
            edges[(mapping[u], mapping[v])] = c
    slot_of_piece = {i: len(outside) + slot for slot, i in enumerate(order)}
    for (w, pi), prof in op.items():
        a, b = mapping[w], slot_of_piece[pi]
        edges[(min(a, b), max(a, b))] = ebase + profile_table.index(prof)
    for (i, j), prof in pp.items():
        a, b = slot_of_piece[i], slot_of_piece[j]
        edges[(min(a, b), max(a, b))] = ebase + profile_table.index(prof)
    out = ColoredGraph(
        len(outside) + len(pieces),
        [(u, v, c) for (u, v), c in sorted(edges.items())],
        directed=False,
        vertex_colors=colors,
    )
    return out, mapping, color_table, profile_table


def contract(
    g: ColoredGraph,
    s,
    *,
    k: int = 2,
    coloring=None,
    limits: Limits = DEFAULT_LIMITS,
) -> ColoredGraph:
    """Contract one CWS subset to a single vertex.  The fresh vertex color
    embeds the piece's canonical digest; attachment edges embed their profile
    digests; so equal results mean equal pieces attached the same way."""
    if g.directed:
        raise UnsupportedGraphError("contraction is defined for undirected graphs")
    cols = (
        _refined_classes(g, k, limits) if coloring is None else _as_colors(g, coloring)
    )
    piece = frozenset(int(v) for v in s)
    if not piece or not is_cws(g, cols, piece):
        raise UnsupportedGraphError("subset is not color-stable; refusing to contract")
    digest = _piece_digest(g, cols, piece, k, limits)
    outside = [v for v in range(g.n) if v not in piece]
    mapping = {v: i for i, v in enumerate(outside)}
    pv = len(outside)
    vbase = g.max_vertex_color() + 1
    ebase = g.max_edge_color() + 1
    colors = [g.vertex_colors[v] for v in outside]
    colors.append(vbase + 1 + int.from_bytes(digest[:6], "big"))
    op, _ = _attachment_profiles(g, cols, [piece])
    edges = []
    for u, v, c in g.edge_list():
        if u not in piece and v not in piece:
            edges.append((mapping[u], mapping[v], c))
    for (w, _pi), prof in op.items():
        pcode = int.from_bytes(hashlib.sha256(prof).digest()[:6], "big")
        edges.append((mapping[w], pv, ebase + 1 + pcode))
    return ColoredGraph(pv + 1, edges, directed=False, vertex_colors=colors)


def decompose(
    g: ColoredGraph,
    k: int = 2,
    *,
    coloring=None,
    limits: Limits = DEFAULT_LIMITS,
    _scan: _Scan | None = None,
) -> list[CWSRecord]:
    """Scan the class colors in ascending order; for the smallest uncovered
    member of a class, collect the closures with its uncovered classmates
    and accept the unique prime among them.  A class whose scan vertex has
    no prime closure is dropped; several distinct primes raise, since that
    is exactly the overlap situation normalization removes."""
    if g.directed:
        raise UnsupportedGraphError("decomposition is defined for undirected graphs")
    cols = (
        _refined_classes(g, k, limits) if coloring is None else _as_colors(g, coloring)
    )
    scan = _Scan(g, cols) if _scan is None else _scan
    covered: set[int] = set()
    records: list[CWSRecord] = []
    for cid in sorted(set(int(c) for c in cols)):
        while True:
            members = [v for v in range(g.n) if cols[v] == cid and v not in covered]
            if len(members) < 2:
                break
            u = members[0]
            primes: dict[frozenset[int], tuple[int, int]] = {}
            for y in members[1:]:
                s = scan.closure_pair(u, y)
                if s not in primes and scan.is_prime(s):
                    primes[s] = (u, y)
            if not primes:
                break
            if len(primes) > 1:
                sizes = sorted(len(s) for s in primes)
                raise DecompositionError(
                    f"vertex {u} closes to {len(primes)} distinct primes "
                    f"(sizes {sizes}); normalize overlaps first"
                )
            piece, pair = next(iter(primes.items()))
            if piece & covered:
                raise DecompositionError(
                    f"prime of vertex {u} intersects an accepted piece"
                )
            records.append(
                CWSRecord(
                    vertices=piece,
                    colors=tuple(sorted((v, int(cols[v])) for v in piece)),
                    prime=True,
                    seed_pair=pair,
                )
            )
            covered |= piece
    return records


def _overlap_blocks(
    g: ColoredGraph, cols: np.ndarray, limits: Limits, scan: _Scan | None = None
) -> list[frozenset[int]]:
    """Vertices whose pair closures hit two or more distinct primes, each
    bundled with the intersection of those primes."""
    if scan is None:
        scan = _Scan(g, cols)
    blocks: list[frozenset[int]] = []
    takenfrom: set[frozenset[int]] = set()
    for cid in sorted(set(int(c) for c in cols)):
        members = [v for v in range(g.n) if cols[v] == cid]
        if len(members) < 3 or len(members) > limits.overlap_class_cap:
            continue
        for x in members:
            primes: set[frozenset[int]] = set()
            for y in members:
                if y == x:
                    continue
                s = scan.closure_pair(x, y)
                if s not in primes and scan.is_prime(s):
                    primes.add(s)
            if len(primes) >= 2:
                block = frozenset.intersection(*primes)
                if len(block) >= 2 and block not in takenfrom:
                    takenfrom.add(block)
                    blocks.append(block)
    for i, a in enumerate(blocks):
        for b in blocks[i + 1 :]:
            if a & b:
                raise DecompositionError("overlap blocks intersect each other")
    return blocks


def normalize_cliques(
    g: ColoredGraph,
    k: int = 2,
    *,
    limits: Limits = DEFAULT_LIMITS,
) -> ColoredGraph:
    """Contract twin groups (adjacent groups first) until none remain."""
    if g.directed:
        raise UnsupportedGraphError("normalization is defined for undirected graphs")
    cur = g
    while True:
        cols = _refined_classes(cur, k, limits)
        true_groups, false_groups = twin_classes(cur, cols)
        groups = true_groups or false_groups
        if not groups:
            return cur
        pieces = [frozenset(grp) for grp in groups]
        digests = [_piece_digest(cur, cols, p, k, limits) for p in pieces]
        cur, _, _, _ = contract_batch(cur, cols, pieces, digests)


def normalize_overlaps(
    g: ColoredGraph,
    k: int = 2,
    *,
    limits: Limits = DEFAULT_LIMITS,
) -> ColoredGraph:
    """Contract overlap blocks until every scan vertex has at most one prime."""
    if g.directed:
        raise UnsupportedGraphError("normalization is defined for undirected graphs")
    cur = g
    while True:
        cols = _refined_classes(cur, k, limits)
        blocks = _overlap_blocks(cur, cols, limits)
        if not blocks:
            return cur
        digests = [_piece_digest(cur, cols, b, k, limits) for b in blocks]
        cur, _, _, _ = contract_batch(cur, cols, blocks, digests)


def reduce_graph(
    g: ColoredGraph,
    k: int = 2,
    *,
    limits: Limits = DEFAULT_LIMITS,
    escalate: bool = False,
) -> tuple[DecompositionTree, Certificate]:
    """Full reduction loop; see the module docstring.  `escalate` certifies
    pieces one dimension higher (slower, finer piece separation)."""
    if g.directed:
        raise UnsupportedGraphError("reduction is defined for undirected graphs")
    piece_k = k + 1 if escalate else k
    levels: list[Level] = []
    cur = g
    while True:
        if len(levels) > g.n + 1:
            raise DecompositionError("reduction failed to terminate")
        cols = _refined_classes(cur, k, limits)
        true_groups, false_groups = twin_classes(cur, cols)
        groups = true_groups or false_groups
        if groups:
            kind = "twin"
            pieces = [frozenset(grp) for grp in groups]
        else:
            scan = _Scan(cur, cols)
            blocks = _overlap_blocks(cur, cols, limits, scan=scan)
            if blocks:
                kind = "overlap"
                pieces = blocks
            else:
                records = decompose(cur, k, coloring=cols, limits=limits, _scan=scan)
                if not records:
                    break
                kind = "prime"
                pieces = [r.vertices for r in records]
        digests = [_piece_digest(cur, cols, p, piece_k, limits) for p in pieces]
        nxt, mapping, color_table, profile_table = contract_batch(
            cur, cols, pieces, digests
        )
        recs = [
            CWSRecord(
                vertices=p,
                colors=tuple(sorted((v, int(cols[v])) for v in p)),
                prime=(kind == "prime"),
            )
            for p in pieces
        ]
        levels.append(
            Level(
                kind=kind, pieces=recs, digests=digests, mapping=mapping,
                color_table=color_table, profile_table=profile_table,
                size_before=cur.n, size_after=nxt.n,
            )
        )
        cur = nxt
    tree = DecompositionTree(k=k, levels=levels, terminal=cur)
    tree.terminal_certificate = certify(cur, piece_k, "canonical", limits=limits)
    cert = Certificate(
        digest=tree.digest(), k=k, mode="reduce", n=g.n,
        trace=tuple((i, len(lv.pieces)) for i, lv in enumerate(levels)),
    )
    return tree, cert


def mutually_stable_trivial(
    g: ColoredGraph,
    coloring,
    subsets,
    k: int = 2,
    *,
    limits: Limits = DEFAULT_LIMITS,
) -> bool:
    """Sufficient condition for a family of disjoint CWS subsets to be
    interchangeable: equal class-color multisets, pairwise k-similar induced
    graphs, and same-colored members agreeing on adjacency outside the
    union of the family."""
    from .refine import similar_k

    cols = _as_colors(g, coloring)
    fam = [frozenset(int(v) for v in s) for s in subsets]
    if len(fam) < 2:
        return True
    union: set[int] = set()
    for s in fam:
        if union & s:
            return False
        union |= s
    for s in fam:
        if not is_cws(g, cols, s):
            return False
    profs = [sorted(int(cols[v]) for v in s) for s in fam]
    if any(p != profs[0] for p in profs[1:]):
        return False
    graphs = [_piece_graph(g, cols, s) for s in fam]
    for other in graphs[1:]:
        if not similar_k(graphs[0], other, k, limits=limits):
            return False
    outside = [v for v in range(g.n) if v not in union]
    p = g.pair_codes()
    members = sorted(union)
    for c in sorted(set(int(cols[v]) for v in members)):
        group = [v for v in members if cols[v] == c]
        if len(group) < 2:
            continue
        for w in outside:
            base = p[group[0], w]
            baseT = p[w, group[0]]
            if any(p[v, w] != base or p[w, v] != baseT for v in group[1:]):
                return False
    return True
