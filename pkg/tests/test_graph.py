from __future__ import annotations

import numpy as np
import pytest

from wlkit.errors import ParseError, UnsupportedGraphError
from wlkit.families import (
    bowtie,
    complete,
    complete_bipartite,
    cycle,
    path,
    petersen,
    random_graph,
)
from wlkit.graph import (
    ColoredGraph,
    complement,
    connected_components,
    disjoint_union,
    distance,
    is_connected,
    join,
    min_separator_size,
    parse_wlg,
    random_relabel,
    serialize_wlg,
)
from wlkit.oracle import is_isomorphism, iso_oracle


# -- construction ------------------------------------------------------------


def test_basic_accessors():
    g = ColoredGraph(4, [(0, 1, 0), (1, 2, 5)], vertex_colors=[0, 1, 0, 2])
    assert g.n == 4
    assert g.num_edges == 2
    assert g.has_edge(0, 1) and g.has_edge(1, 0)
    assert not g.has_edge(0, 2)
    assert g.edge_color(1, 2) == 5
    assert g.edge_color(0, 2) is None
    assert g.neighbors(1) == [0, 2]
    assert g.degree(1) == 2 and g.degree(3) == 0
    assert g.max_vertex_color() == 2
    assert g.max_edge_color() == 5


def test_directed_edges_are_one_way():
    g = ColoredGraph(3, [(0, 1, 0)], directed=True)
    assert g.has_edge(0, 1)
    assert not g.has_edge(1, 0)
    p = g.pair_codes()
    assert p[0, 1] == 1 and p[1, 0] == 0


def test_relabel_and_induced():
    g = cycle(4)
    h = g.relabel([1, 2, 3, 0])
    assert h.num_edges == 4
    sub, verts = cycle(6).induced([0, 1, 2])
    assert verts == [0, 1, 2]
    assert sub.n == 3 and sub.num_edges == 2


def test_rejects_bad_input():
    with pytest.raises(UnsupportedGraphError):
        ColoredGraph(2, [(0, 0, 0)])
    with pytest.raises(UnsupportedGraphError):
        ColoredGraph(2, [(0, 5, 0)])
    with pytest.raises(UnsupportedGraphError):
        ColoredGraph(2, [(0, 1, 0), (1, 0, 0)])
    with pytest.raises(UnsupportedGraphError):
        ColoredGraph(2, vertex_colors=[0])
    with pytest.raises(UnsupportedGraphError):
        ColoredGraph(-1)


# -- text format -------------------------------------------------------------


@pytest.mark.parametrize(
    "g",
    [
        cycle(6),
        complete(4),
        petersen(),
        bowtie(),
        ColoredGraph(3, [(0, 1, 2), (1, 2, 0)], vertex_colors=[1, 0, 4]),
        ColoredGraph(3, [(0, 1, 0), (1, 0, 1)], directed=True),
        ColoredGraph(0),
        ColoredGraph(5),
    ],
)
def test_round_trip(g):
    assert parse_wlg(serialize_wlg(g)) == g


def test_parser_accepts_comments_and_blank_lines():
    text = "# a comment\n\np wlg 2 1 0  # trailing\ne 0 1\n"
    g = parse_wlg(text)
    assert g.n == 2 and g.has_edge(0, 1)


def test_default_colors_are_omitted():
    text = serialize_wlg(ColoredGraph(3, [(0, 1, 0)], vertex_colors=[0, 0, 2]))
    lines = text.strip().splitlines()
    assert lines == ["p wlg 3 1 0", "v 2 2", "e 0 1"]


@pytest.mark.parametrize(
    "text,lineno",
    [
        ("e 0 1\n", 1),  # edge before header
        ("p wlg 2 0 0\np wlg 2 0 0\n", 2),  # duplicate header
        ("p wlg 2 0 7\n", 1),  # bad directed flag
        ("p wlg x 0 0\n", 1),  # non-integer field
        ("p wlg 2 1 0\ne 0 2\n", 2),  # endpoint out of range
        ("p wlg 2 1 0\ne 0 0\n", 2),  # self loop
        ("p wlg 2 2 0\ne 0 1\ne 1 0\n", 3),  # duplicate edge
        ("p wlg 2 0 0\nv 5 1\n", 2),  # vertex out of range
        ("p wlg 2 0 0\nv 0 1\nv 0 2\n", 3),  # duplicate vertex line
        ("p wlg 2 0 0\nq 1\n", 2),  # unknown directive
        ("p wlg 2 3 0\ne 0 1\n", 1),  # edge count mismatch
    ],
)
def test_parse_errors_carry_line_numbers(text, lineno):
    with pytest.raises(ParseError) as info:
        parse_wlg(text)
    assert info.value.line == lineno


def test_missing_header():
    with pytest.raises(ParseError):
        parse_wlg("# nothing here\n")


# -- combinators -------------------------------------------------------------


def test_complement():
    g = cycle(5)
    cg = complement(g)
    assert cg.num_edges == 5
    assert complement(cg) == g
    # the pentagon is self-complementary
    assert iso_oracle(g, cg) is not None


def test_disjoint_union_and_join():
    u = disjoint_union(cycle(3), cycle(4))
    assert u.n == 7 and u.num_edges == 7
    assert connected_components(u) == [[0, 1, 2], [3, 4, 5, 6]]
    j = join(cycle(3), cycle(3))
    assert j.n == 6 and j.num_edges == 3 + 3 + 9
    assert is_connected(j)


def test_distance():
    g = cycle(6)
    assert distance(g, 0, 3) == 3
    assert distance(g, 0, 0) == 0
    assert distance(disjoint_union(cycle(3), cycle(3)), 0, 4) is None


# -- separators --------------------------------------------------------------


def test_separator_frozen_values():
    # every leftover component must be strictly smaller than n/2
    assert min_separator_size(path(4)) == 2
    assert min_separator_size(cycle(6)) == 2
    assert min_separator_size(complete(4)) == 3


def test_separator_rejects_directed_and_disconnected():
    with pytest.raises(UnsupportedGraphError):
        min_separator_size(ColoredGraph(2, [(0, 1, 0)], directed=True))
    with pytest.raises(UnsupportedGraphError):
        min_separator_size(disjoint_union(cycle(3), cycle(3)))


# -- relabeling --------------------------------------------------------------


def test_random_relabel_is_isomorphic():
    for seed in range(5):
        g = random_graph(9, 0.4, seed=seed)
        h, perm = random_relabel(g, seed=seed + 100)
        assert h == g.relabel(perm)
        assert is_isomorphism(g, h, perm)
