from __future__ import annotations

import pytest

from wlkit.errors import ParseError, UnsupportedGraphError
from wlkit.families import complete, complete_bipartite, cycle, petersen
from wlkit.graph import ColoredGraph, disjoint_union
from wlkit.cfi import (
    cfi_build,
    gadget_size,
    iterate_lambda,
    lambda_inverse,
    parse_cfi_map_roles,
    serialize_cfi_map,
)
from wlkit.oracle import is_isomorphism, iso_oracle
from wlkit.refine import similar_k


# -- sizes ---------------------------------------------------------------------


def test_gadget_size():
    assert gadget_size(2) == 6
    assert gadget_size(3) == 10
    assert gadget_size(4) == 16
    assert gadget_size(5) == 26


def test_gadget_graph_of_k4(cfi_k4):
    g, m = cfi_k4
    assert g.n == 4 * gadget_size(3) == 40
    assert all(g.degree(v) == 3 for v in range(g.n))
    # ends share one color per base vertex, middles another
    ends = sum(1 for c in g.vertex_colors if c % 2 == 0)
    middles = sum(1 for c in g.vertex_colors if c % 2 == 1)
    assert ends == 4 * 6 and middles == 4 * 4


def test_middles_join_even_subsets_only(cfi_k4):
    g, m = cfi_k4
    for (v, subset), x in m.m_index.items():
        assert len(subset) % 2 == 0
        assert g.degree(x) == 3
        for u in complete(4).neighbors(v):
            end = m.a_index[(v, u)] if u in subset else m.b_index[(v, u)]
            assert g.has_edge(x, end)


def test_map_bookkeeping(cfi_k4):
    g, m = cfi_k4
    fib = m.fibres()
    assert sorted(fib) == [0, 1, 2, 3]
    assert all(len(xs) == gadget_size(3) for xs in fib.values())
    v, role = lambda_inverse(m, m.a_index[(2, 3)])
    assert v == 2 and role == ("a", 3)
    with pytest.raises(ValueError):
        lambda_inverse(m, 40)


def test_twist_flag_recorded():
    g, m = cfi_build(complete(4), twisted=((1, 0),))
    assert m.twisted == frozenset({(0, 1)})
    with pytest.raises(UnsupportedGraphError):
        cfi_build(complete(4), twisted=((0, 0),))
    with pytest.raises(UnsupportedGraphError):
        cfi_build(complete_bipartite(3, 3), twisted=((0, 1),))


def test_twisted_edge_crosses_the_pair(cfi_k4, cfi_k4_twisted):
    plain, mp = cfi_k4
    tw, mt = cfi_k4_twisted
    a01, b01 = mp.a_index[(0, 1)], mp.b_index[(0, 1)]
    a10, b10 = mp.a_index[(1, 0)], mp.b_index[(1, 0)]
    assert plain.has_edge(a01, a10) and plain.has_edge(b01, b10)
    assert not plain.has_edge(a01, b10)
    ta01, tb01 = mt.a_index[(0, 1)], mt.b_index[(0, 1)]
    ta10, tb10 = mt.a_index[(1, 0)], mt.b_index[(1, 0)]
    assert tw.has_edge(ta01, tb10) and tw.has_edge(tb01, ta10)
    assert not tw.has_edge(ta01, ta10)


# -- base validation -------------------------------------------------------------


def test_base_requirements():
    with pytest.raises(UnsupportedGraphError):
        cfi_build(cycle(6))  # max degree below 3
    with pytest.raises(UnsupportedGraphError):
        cfi_build(disjoint_union(complete(4), complete(4)))  # disconnected
    with pytest.raises(UnsupportedGraphError):
        cfi_build(ColoredGraph(4, [(0, 1, 0), (0, 2, 0), (0, 3, 0)]))  # leaves
    with pytest.raises(UnsupportedGraphError):
        cfi_build(ColoredGraph(2, [(0, 1, 0)], directed=True))


def test_colored_base_colors_the_gadgets():
    base = complete(4).with_vertex_colors([0, 1, 1, 2])
    g, m = cfi_build(base)
    for x in range(g.n):
        v = m.origin[x]
        expect = 2 * base.vertex_colors[v] + (1 if m.role[x][0] == "m" else 0)
        assert g.vertex_colors[x] == expect


def test_edge_colors_survive_on_cross_edges():
    base = ColoredGraph(
        4,
        [(0, 1, 7), (0, 2, 0), (0, 3, 0), (1, 2, 0), (1, 3, 0), (2, 3, 0)],
    )
    g, m = cfi_build(base)
    a01, a10 = m.a_index[(0, 1)], m.a_index[(1, 0)]
    assert g.edge_color(a01, a10) == 7
    inner = m.m_index[(0, frozenset())]
    b01 = m.b_index[(0, 1)]
    assert g.edge_color(inner, b01) == 0


# -- twist parity ------------------------------------------------------------------


def test_one_twist_is_not_isomorphic(cfi_k4, cfi_k4_twisted):
    assert iso_oracle(cfi_k4[0], cfi_k4_twisted[0]) is None


def test_two_twists_are_isomorphic(cfi_k4):
    double, _ = cfi_build(complete(4), twisted=((0, 1), (2, 3)))
    mapping = iso_oracle(cfi_k4[0], double)
    assert mapping is not None
    assert is_isomorphism(cfi_k4[0], double, mapping)


def test_twisted_pair_is_low_dim_similar(cfi_k4, cfi_k4_twisted):
    assert similar_k(cfi_k4[0], cfi_k4_twisted[0], 1)
    assert similar_k(cfi_k4[0], cfi_k4_twisted[0], 2)


# -- iteration ----------------------------------------------------------------------


def test_iterated_replacement_sizes():
    g1, maps = iterate_lambda(complete(4), 1)
    assert g1.n == 40 and len(maps) == 1
    g2, maps2 = iterate_lambda(complete(4), 2)
    # every vertex of the first gadget graph is cubic, so each contributes 10
    assert g2.n == 40 * gadget_size(3) == 400
    assert len(maps2) == 2
    with pytest.raises(ValueError):
        iterate_lambda(complete(4), 0)


def test_petersen_base():
    g, _ = cfi_build(petersen())
    assert g.n == 10 * gadget_size(3) == 100
    assert all(g.degree(v) == 3 for v in range(g.n))


# -- sidecar format --------------------------------------------------------------------


def test_sidecar_round_trip(cfi_k4_twisted):
    g, m = cfi_k4_twisted
    rows = parse_cfi_map_roles(serialize_cfi_map(m))
    assert len(rows) == g.n
    for x, v, role in rows:
        assert m.origin[x] == v
        assert m.role[x] == role


@pytest.mark.parametrize(
    "text",
    [
        "m 0 0\n",  # missing role
        "m 0 0 c:1\n",  # unknown role kind
        "m 0 0 a:x\n",  # non-integer neighbor
        "m 0 0 m:1,x\n",  # bad subset
        "x 0 0 a:1\n",  # wrong tag
    ],
)
def test_sidecar_parse_errors(text):
    with pytest.raises(ParseError):
        parse_cfi_map_roles(text)
