from __future__ import annotations

import dataclasses

import pytest

from wlkit.errors import ResourceLimitError
from wlkit.families import bowtie, complete, cycle, path, petersen, random_graph
from wlkit.graph import ColoredGraph, disjoint_union, random_relabel
from wlkit.limits import DEFAULT_LIMITS
from wlkit.oracle import (
    aut_group_order,
    aut_order_oracle,
    is_automorphism,
    is_isomorphism,
    iso_oracle,
    orbits_oracle,
)


# -- permutation checks ---------------------------------------------------------


def test_is_automorphism():
    g = cycle(4)
    assert is_automorphism(g, [1, 2, 3, 0])
    assert is_automorphism(g, [0, 3, 2, 1])
    assert not is_automorphism(path(3), [1, 0, 2])
    colored = g.with_vertex_colors([1, 0, 0, 0])
    assert not is_automorphism(colored, [1, 2, 3, 0])
    assert is_automorphism(colored, [0, 3, 2, 1])


def test_is_isomorphism():
    g = path(3)
    h = g.relabel([2, 0, 1])
    assert is_isomorphism(g, h, [2, 0, 1])
    assert not is_isomorphism(g, h, [0, 1, 2])
    assert not is_isomorphism(g, cycle(3), [0, 1, 2])


# -- automorphism group sizes ----------------------------------------------------


@pytest.mark.parametrize(
    "g,order",
    [
        (complete(4), 24),
        (cycle(4), 8),
        (cycle(6), 12),
        (petersen(), 120),
        (bowtie(), 8),
        (path(3), 2),
        (ColoredGraph(1), 1),
        (ColoredGraph(3), 6),
    ],
)
def test_group_orders(g, order):
    assert aut_order_oracle(g) == order


def test_colors_cut_the_group_down():
    g = cycle(4).with_vertex_colors([1, 0, 0, 0])
    assert aut_order_oracle(g) == 2
    h = ColoredGraph(2, [(0, 1, 3)], vertex_colors=[0, 1])
    assert aut_order_oracle(h) == 1


def test_orbits():
    assert orbits_oracle(cycle(4)) == [[0, 1, 2, 3]]
    assert orbits_oracle(path(4)) == [[0, 3], [1, 2]]
    assert orbits_oracle(bowtie()) == [[0, 1, 3, 4], [2]]
    assert orbits_oracle(complete(4)) == [[0, 1, 2, 3]]


def test_oracle_vertex_cap():
    with pytest.raises(ResourceLimitError):
        aut_order_oracle(random_graph(13, 0.5, seed=0))
    wider = dataclasses.replace(DEFAULT_LIMITS, oracle_vertices=13)
    assert aut_order_oracle(random_graph(13, 0.5, seed=0), limits=wider) >= 1


# -- isomorphism oracle ------------------------------------------------------------


def test_iso_oracle_finds_and_verifies_a_mapping():
    for seed in range(5):
        g = random_graph(10, 0.5, seed=seed)
        h, _ = random_relabel(g, seed=seed + 77)
        mapping = iso_oracle(g, h)
        assert mapping is not None
        assert is_isomorphism(g, h, mapping)


def test_iso_oracle_rejects_non_isomorphic_pairs():
    assert iso_oracle(cycle(6), disjoint_union(cycle(3), cycle(3))) is None
    assert iso_oracle(path(4), cycle(4)) is None
    # same degree sequence, different structure
    a = ColoredGraph(6, [(0, 1, 0), (1, 2, 0), (2, 3, 0), (3, 0, 0), (4, 5, 0)])
    b = ColoredGraph(6, [(0, 1, 0), (1, 2, 0), (2, 0, 0), (3, 4, 0), (4, 5, 0)])
    assert iso_oracle(a, b) is None


def test_iso_oracle_respects_colors():
    g = cycle(4).with_vertex_colors([1, 0, 0, 0])
    h = cycle(4).with_vertex_colors([0, 1, 0, 0])
    assert iso_oracle(g, h) is not None
    odd = cycle(4).with_vertex_colors([2, 0, 0, 0])
    assert iso_oracle(g, odd) is None


def test_iso_oracle_size_guards():
    assert iso_oracle(cycle(4), cycle(5)) is None
    with pytest.raises(ResourceLimitError):
        iso_oracle(random_graph(41, 0.2, seed=0), random_graph(41, 0.2, seed=1))


# -- group order from generators ------------------------------------------------------


def test_group_order_closure():
    assert aut_group_order([], 4) == 1
    assert aut_group_order([(1, 0, 2, 3)], 4) == 2
    assert aut_group_order([(1, 2, 3, 0)], 4) == 4
    assert aut_group_order([(1, 2, 3, 0), (0, 3, 2, 1)], 4) == 8
    # two generators of S4
    assert aut_group_order([(1, 0, 2, 3), (1, 2, 3, 0)], 4) == 24


def test_group_order_element_cap():
    tight = dataclasses.replace(DEFAULT_LIMITS, group_elements=5)
    with pytest.raises(ResourceLimitError):
        aut_group_order([(1, 0, 2, 3), (1, 2, 3, 0)], 4, limits=tight)
