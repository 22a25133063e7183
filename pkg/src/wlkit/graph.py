"""Colored-graph core: representation, WLG text I/O, and small combinators.

Graphs are finite, loop-free, and simple (at most one edge per vertex pair,
one di-edge per ordered pair when directed).  Vertices are 0..n-1 and carry
non-negative integer colors (default 0); edges carry non-negative integer
colors as well.

WLG text format::

    # comment
    p wlg <n> <m> <directed: 0|1>
    v <index> <color>
    e <u> <v> [<color>]

Serialization is canonical: header, ``v`` lines ascending by index with
color-0 lines omitted, then ``e`` lines ascending lexicographically with
color-0 fields omitted.
"""
from __future__ import annotations

import random
from itertools import combinations

import numpy as np

from .errors import ParseError, ResourceLimitError, UnsupportedGraphError
from .limits import DEFAULT_LIMITS, Limits


class ColoredGraph:
    """Immutable colored graph. Mutating helpers return new instances."""

    __slots__ = ("n", "directed", "vertex_colors", "edges", "_pair_codes", "_adj_bits", "_neighbors")

    def __init__(self, n: int, edges=(), directed: bool = False, vertex_colors=None):
        if n < 0:
            raise UnsupportedGraphError("vertex count must be non-negative")
        self.n = n
        self.directed = bool(directed)
        if vertex_colors is None:
            vertex_colors = (0,) * n
        else:
            vertex_colors = tuple(int(c) for c in vertex_colors)
            if len(vertex_colors) != n:
                raise UnsupportedGraphError("vertex_colors length must equal n")
            if any(c < 0 for c in vertex_colors):
                raise UnsupportedGraphError("vertex colors must be non-negative")
        self.vertex_colors = vertex_colors

        norm: dict[tuple[int, int], int] = {}
        for item in edges:
            if len(item) == 2:
                u, v, c = item[0], item[1], 0
            else:
                u, v, c = item
            u, v, c = int(u), int(v), int(c)
            if not (0 <= u < n and 0 <= v < n):
                raise UnsupportedGraphError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise UnsupportedGraphError(f"self-loop at vertex {u}")
            if c < 0:
                raise UnsupportedGraphError("edge colors must be non-negative")
            if not self.directed and u > v:
                u, v = v, u
            if (u, v) in norm:
                raise UnsupportedGraphError(f"duplicate edge ({u},{v})")
            norm[(u, v)] = c
        self.edges = norm
        self._pair_codes = None
        self._adj_bits = None
        self._neighbors = None

    # -- basic accessors ---------------------------------------------------

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def edge_color(self, u: int, v: int) -> int | None:
        """Color of edge (u,v), or None when absent. Respects direction."""
        if not self.directed and u > v:
            u, v = v, u
        return self.edges.get((u, v))

    def has_edge(self, u: int, v: int) -> bool:
        return self.edge_color(u, v) is not None

    def neighbors(self, v: int) -> list[int]:
        """Sorted neighbors of v; di-edges count in either orientation."""
        return self._neighbor_lists()[v]

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def max_vertex_color(self) -> int:
        return max(self.vertex_colors, default=0)

    def max_edge_color(self) -> int:
        return max(self.edges.values(), default=0)

    def _neighbor_lists(self) -> list[list[int]]:
        if self._neighbors is None:
            nbrs: list[set[int]] = [set() for _ in range(self.n)]
            for (u, v) in self.edges:
                nbrs[u].add(v)
                nbrs[v].add(u)
            self._neighbors = [sorted(s) for s in nbrs]
        return self._neighbors

    def adj_bits(self) -> list[int]:
        """Per-vertex neighbor bitmask (orientation-insensitive)."""
        if self._adj_bits is None:
            bits = [0] * self.n
            for (u, v) in self.edges:
                bits[u] |= 1 << v
                bits[v] |= 1 << u
            self._adj_bits = bits
        return self._adj_bits

    def pair_codes(self) -> np.ndarray:
        """(n,n) int64 matrix: 0 for non-adjacent, 1+color for a (di-)edge."""
        if self._pair_codes is None:
            P = np.zeros((self.n, self.n), dtype=np.int64)
            for (u, v), c in self.edges.items():
                P[u, v] = 1 + c
                if not self.directed:
                    P[v, u] = 1 + c
            self._pair_codes = P
        return self._pair_codes

    # -- equality / rebuilding --------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ColoredGraph)
            and self.n == other.n
            and self.directed == other.directed
            and self.vertex_colors == other.vertex_colors
            and self.edges == other.edges
        )

    def __repr__(self) -> str:
        kind = "digraph" if self.directed else "graph"
        return f"<ColoredGraph {kind} n={self.n} m={self.num_edges}>"

    def edge_list(self) -> list[tuple[int, int, int]]:
        """Edges as (u,v,color), canonically sorted."""
        return [(u, v, c) for (u, v), c in sorted(self.edges.items())]

    def with_vertex_colors(self, colors) -> "ColoredGraph":
        return ColoredGraph(self.n, self.edge_list(), self.directed, colors)

    def relabel(self, perm: list[int]) -> "ColoredGraph":
        """Apply vertex permutation: vertex i of self becomes perm[i]."""
        if sorted(perm) != list(range(self.n)):
            raise UnsupportedGraphError("relabel requires a permutation of 0..n-1")
        colors = [0] * self.n
        for i, c in enumerate(self.vertex_colors):
            colors[perm[i]] = c
        edges = [(perm[u], perm[v], c) for (u, v), c in self.edges.items()]
        return ColoredGraph(self.n, edges, self.directed, colors)

    def induced(self, subset) -> tuple["ColoredGraph", list[int]]:
        """Subgraph on ``subset``; returns (graph, sorted original indices)."""
        keep = sorted(set(subset))
        pos = {v: i for i, v in enumerate(keep)}
        edges = [
            (pos[u], pos[v], c)
            for (u, v), c in self.edges.items()
            if u in pos and v in pos
        ]
        colors = [self.vertex_colors[v] for v in keep]
        return ColoredGraph(len(keep), edges, self.directed, colors), keep


# -- WLG text I/O ----------------------------------------------------------


def parse_wlg(text: str) -> ColoredGraph:
    """Parse WLG text into a ColoredGraph. Raises ParseError with line numbers."""
    header = None
    vcolors: dict[int, int] = {}
    edges: list[tuple[int, int, int]] = []
    header_line = 0

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        tag = parts[0]
        if tag == "p":
            if header is not None:
                raise ParseError("duplicate header", lineno)
            if len(parts) != 5 or parts[1] != "wlg":
                raise ParseError("header must be 'p wlg <n> <m> <directed>'", lineno)
            try:
                n, m, d = int(parts[2]), int(parts[3]), int(parts[4])
            except ValueError:
                raise ParseError("header fields must be integers", lineno)
            if n < 0 or m < 0 or d not in (0, 1):
                raise ParseError("invalid header values", lineno)
            header = (n, m, d)
            header_line = lineno
        elif tag == "v":
            if header is None:
                raise ParseError("'v' line before header", lineno)
            if len(parts) != 3:
                raise ParseError("vertex line must be 'v <index> <color>'", lineno)
            try:
                idx, c = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError("vertex fields must be integers", lineno)
            if not 0 <= idx < header[0]:
                raise ParseError(f"vertex index {idx} out of range", lineno)
            if c < 0:
                raise ParseError("vertex color must be non-negative", lineno)
            if idx in vcolors:
                raise ParseError(f"duplicate color line for vertex {idx}", lineno)
            vcolors[idx] = c
        elif tag == "e":
            if header is None:
                raise ParseError("'e' line before header", lineno)
            if len(parts) not in (3, 4):
                raise ParseError("edge line must be 'e <u> <v> [<color>]'", lineno)
            try:
                u, v = int(parts[1]), int(parts[2])
                c = int(parts[3]) if len(parts) == 4 else 0
            except ValueError:
                raise ParseError("edge fields must be integers", lineno)
            n, _, d = header
            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(f"edge ({u},{v}) out of range", lineno)
            if u == v:
                raise ParseError(f"self-loop at vertex {u}", lineno)
            a, b = (u, v) if d or u < v else (v, u)
            if any((a, b) == (x, y) for x, y, _ in edges):
                raise ParseError(f"duplicate edge ({u},{v})", lineno)
            edges.append((a, b, c))
        else:
            raise ParseError(f"unknown directive {tag!r}", lineno)

    if header is None:
        raise ParseError("missing 'p wlg' header", 1)
    n, m, d = header
    if len(edges) != m:
        raise ParseError(f"header declares {m} edges, found {len(edges)}", header_line)
    colors = [vcolors.get(i, 0) for i in range(n)]
    return ColoredGraph(n, edges, directed=bool(d), vertex_colors=colors)


def serialize_wlg(g: ColoredGraph) -> str:
    """Canonical WLG serialization; parse(serialize(g)) == g."""
    out = [f"p wlg {g.n} {g.num_edges} {int(g.directed)}"]
    for i, c in enumerate(g.vertex_colors):
        if c != 0:
            out.append(f"v {i} {c}")
    for (u, v), c in sorted(g.edges.items()):
        out.append(f"e {u} {v} {c}" if c != 0 else f"e {u} {v}")
    return "\n".join(out) + "\n"


# -- combinators -----------------------------------------------------------


def complement(g: ColoredGraph) -> ColoredGraph:
    """Edge-complement of an undirected, edge-uncolored graph."""
    if g.directed:
        raise UnsupportedGraphError("complement requires an undirected graph")
    if any(c != 0 for c in g.edges.values()):
        raise UnsupportedGraphError("complement of an edge-colored graph is ambiguous")
    edges = [
        (u, v) for u in range(g.n) for v in range(u + 1, g.n) if (u, v) not in g.edges
    ]
    return ColoredGraph(g.n, edges, False, g.vertex_colors)


def disjoint_union(g: ColoredGraph, h: ColoredGraph) -> ColoredGraph:
    """Disjoint union; h's vertices are shifted by g.n."""
    if g.directed != h.directed:
        raise UnsupportedGraphError("cannot union directed with undirected")
    edges = g.edge_list() + [(u + g.n, v + g.n, c) for u, v, c in h.edge_list()]
    colors = list(g.vertex_colors) + list(h.vertex_colors)
    return ColoredGraph(g.n + h.n, edges, g.directed, colors)


def join(g: ColoredGraph, h: ColoredGraph) -> ColoredGraph:
    """Disjoint union plus all cross edges, colored with a fresh edge color."""
    if g.directed or h.directed:
        raise UnsupportedGraphError("join requires undirected graphs")
    u = disjoint_union(g, h)
    cross_color = max(u.max_edge_color() + 1, 1) if u.edges else 1
    edges = u.edge_list()
    for a in range(g.n):
        for b in range(h.n):
            edges.append((a, g.n + b, cross_color))
    return ColoredGraph(u.n, edges, False, u.vertex_colors)


def connected_components(g: ColoredGraph) -> list[list[int]]:
    """Components (orientation-insensitive), each sorted, ordered by minimum."""
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        stack, comp = [s], []
        seen[s] = True
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in g.neighbors(v):
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def is_connected(g: ColoredGraph) -> bool:
    return g.n <= 1 or len(connected_components(g)) == 1


def distance(g: ColoredGraph, u: int, v: int) -> int | None:
    """BFS distance from u to v (orientation-insensitive), None if unreachable."""
    if u == v:
        return 0
    dist = {u: 0}
    frontier = [u]
    while frontier:
        nxt = []
        for x in frontier:
            for y in g.neighbors(x):
                if y not in dist:
                    dist[y] = dist[x] + 1
                    if y == v:
                        return dist[y]
                    nxt.append(y)
        frontier = nxt
    return None


def min_separator_size(
    g: ColoredGraph, bound: int | None = None, limits: Limits = DEFAULT_LIMITS
) -> int | None:
    """Smallest |S| such that G minus S has no component of size >= |V|/2.

    Exhaustive over subsets in size order; returns None when every subset up
    to ``bound`` fails.  ``bound`` defaults to n.
    """
    if g.directed:
        raise UnsupportedGraphError("separator search requires an undirected graph")
    if not is_connected(g):
        raise UnsupportedGraphError("separator search requires a connected graph")
    n = g.n
    half = n / 2
    if bound is None:
        bound = n
    examined = 0
    verts = list(range(n))
    for size in range(0, bound + 1):
        for subset in combinations(verts, size):
            examined += 1
            if examined > limits.separator_subsets:
                raise ResourceLimitError(
                    "separator search too large",
                    required=examined,
                    cap=limits.separator_subsets,
                )
            removed = set(subset)
            seen = set(removed)
            ok = True
            for s in verts:
                if s in seen:
                    continue
                stack, count = [s], 0
                seen.add(s)
                while stack:
                    x = stack.pop()
                    count += 1
                    for y in g.neighbors(x):
                        if y not in seen:
                            seen.add(y)
                            stack.append(y)
                if count >= half:
                    ok = False
                    break
            if ok:
                return size
    return None


def random_relabel(g: ColoredGraph, seed: int) -> tuple[ColoredGraph, list[int]]:
    """Seed-deterministic relabeling; returns (H, perm) with old i -> perm[i]."""
    rng = random.Random(seed)
    perm = list(range(g.n))
    rng.shuffle(perm)
    return g.relabel(perm), perm
