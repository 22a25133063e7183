"""Brute-force reference algorithms for small graphs.

The automorphism search is plain color- and adjacency-pruned backtracking
over vertex images — no refinement of any kind — so it can serve as an
independent check of everything the refinement machinery reports.  The
isomorphism search uses the classical 1-dim partition to prune (sound: class
sizes are isomorphism invariants) but returns only explicitly verified
mappings, and exhausts the branch space before reporting non-isomorphism.
"""
from __future__ import annotations

import numpy as np

from .errors import ResourceLimitError
from .graph import ColoredGraph, disjoint_union
from .limits import DEFAULT_LIMITS, Limits
from .refine import refine_k


def is_automorphism(g: ColoredGraph, sigma) -> bool:
    sigma = [int(x) for x in sigma]
    if sorted(sigma) != list(range(g.n)):
        return False
    vc = g.vertex_colors
    if any(vc[sigma[v]] != vc[v] for v in range(g.n)):
        return False
    p = g.pair_codes()
    s = np.asarray(sigma)
    return bool(np.array_equal(p[np.ix_(s, s)], p))


def is_isomorphism(g: ColoredGraph, h: ColoredGraph, mapping) -> bool:
    mapping = [int(x) for x in mapping]
    if g.n != h.n or g.directed != h.directed:
        return False
    if sorted(mapping) != list(range(g.n)):
        return False
    if any(h.vertex_colors[mapping[v]] != g.vertex_colors[v] for v in range(g.n)):
        return False
    pg = g.pair_codes()
    ph = h.pair_codes()
    m = np.asarray(mapping)
    return bool(np.array_equal(ph[np.ix_(m, m)], pg))


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _aut_backtrack(g: ColoredGraph, limits: Limits):
    """Enumerate all automorphisms; returns (count, union-find of orbits)."""
    n = g.n
    if n > limits.oracle_vertices:
        raise ResourceLimitError(
            f"automorphism oracle is capped at {limits.oracle_vertices} vertices",
            required=n, cap=limits.oracle_vertices,
        )
    p = g.pair_codes()
    vc = g.vertex_colors
    uf = _UnionFind(n)
    f = [-1] * n
    used = [False] * n
    state = {"count": 0, "nodes": 0}

    def rec(v: int) -> None:
        state["nodes"] += 1
        if state["nodes"] > limits.oracle_nodes:
            raise ResourceLimitError(
                "automorphism oracle exceeded the node budget",
                required=state["nodes"], cap=limits.oracle_nodes,
            )
        if v == n:
            state["count"] += 1
            for u in range(n):
                uf.union(u, f[u])
            return
        for w in range(n):
            if used[w] or vc[w] != vc[v]:
                continue
            ok = True
            for u in range(v):
                fu = f[u]
                if p[v, u] != p[w, fu] or p[u, v] != p[fu, w]:
                    ok = False
                    break
            if not ok:
                continue
            f[v] = w
            used[w] = True
            rec(v + 1)
            used[w] = False
            f[v] = -1

    if n:
        rec(0)
    return state["count"], uf


def aut_order_oracle(g: ColoredGraph, *, limits: Limits = DEFAULT_LIMITS) -> int:
    """|Aut(g)| by exhaustive backtracking."""
    if g.n == 0:
        return 1
    count, _ = _aut_backtrack(g, limits)
    return count


def orbits_oracle(g: ColoredGraph, *, limits: Limits = DEFAULT_LIMITS) -> list[list[int]]:
    """Vertex orbits of Aut(g), sorted by smallest member."""
    if g.n == 0:
        return []
    _, uf = _aut_backtrack(g, limits)
    groups: dict[int, list[int]] = {}
    for v in range(g.n):
        groups.setdefault(uf.find(v), []).append(v)
    return [sorted(vs) for _, vs in sorted(groups.items())]


def iso_oracle(
    g: ColoredGraph,
    h: ColoredGraph,
    *,
    limits: Limits = DEFAULT_LIMITS,
) -> list[int] | None:
    """An explicit isomorphism g -> h, or None after exhausting the search.

    Branches individualize a vertex pair (one per side) and re-run the 1-dim
    partition on the disjoint union; classes with unequal side counts prune
    the branch.  Any returned mapping is re-verified edge by edge.
    """
    if g.n != h.n or g.directed != h.directed:
        return None
    n = g.n
    if n == 0:
        return []
    if n > limits.iso_vertices:
        raise ResourceLimitError(
            f"isomorphism oracle is capped at {limits.iso_vertices} vertices",
            required=n, cap=limits.iso_vertices,
        )
    if g.num_edges != h.num_edges:
        return None
    if sorted(g.vertex_colors) != sorted(h.vertex_colors):
        return None
    if sorted(c for _, _, c in g.edge_list()) != sorted(c for _, _, c in h.edge_list()):
        return None
    u = disjoint_union(g, h)
    base = np.asarray(u.vertex_colors, dtype=np.int64)
    state = {"nodes": 0}

    def rec(colors: np.ndarray) -> list[int] | None:
        state["nodes"] += 1
        if state["nodes"] > limits.iso_nodes:
            raise ResourceLimitError(
                "isomorphism oracle exceeded the node budget",
                required=state["nodes"], cap=limits.iso_nodes,
            )
        tc = refine_k(u, 1, vertex_colors=colors, limits=limits,
                      keep_history=False, keep_records=False)
        cc = tc.colors
        split_class = None
        for cid in range(tc.num_colors):
            members = np.flatnonzero(cc == cid)
            left = [int(x) for x in members if x < n]
            right = [int(x) - n for x in members if x >= n]
            if len(left) != len(right):
                return None
            if len(left) >= 2 and split_class is None:
                split_class = (left, right)
        if split_class is None:
            mapping = [-1] * n
            for cid in range(tc.num_colors):
                members = np.flatnonzero(cc == cid)
                mapping[int(members[0])] = int(members[1]) - n
            if is_isomorphism(g, h, mapping):
                return mapping
            return None
        left, right = split_class
        x = left[0]
        fresh = int(colors.max()) + 1
        for y in right:
            c2 = colors.copy()
            c2[x] = fresh
            c2[n + y] = fresh
            got = rec(c2)
            if got is not None:
                return got
        return None

    return rec(base)


def aut_group_order(
    generators,
    n: int,
    *,
    limits: Limits = DEFAULT_LIMITS,
) -> int:
    """Order of the permutation group generated by `generators` (closure by
    composition, breadth first)."""
    gens = [tuple(int(x) for x in s) for s in generators]
    for s in gens:
        if sorted(s) != list(range(n)):
            raise ValueError("generator is not a permutation of range(n)")
    identity = tuple(range(n))
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for e in frontier:
            for s in gens:
                comp = tuple(s[e[i]] for i in range(n))
                if comp not in seen:
                    if len(seen) >= limits.group_elements:
                        raise ResourceLimitError(
                            "group closure exceeded the element budget",
                            required=len(seen) + 1, cap=limits.group_elements,
                        )
                    seen.add(comp)
                    nxt.append(comp)
        frontier = nxt
    return len(seen)
