"""Shared fixtures and partition helpers.

Color ids produced by dense ranking are arbitrary; two equal partitions of
the same index set can carry different ids.  Tests therefore compare
partitions through a first-occurrence renumbering instead of raw ids.
"""
from __future__ import annotations

import numpy as np
import pytest

from wlkit.families import complete
from wlkit.cfi import cfi_build
from wlkit.graph import ColoredGraph


def canon_partition(colors) -> np.ndarray:
    """Renumber ids by first occurrence so equal partitions compare equal."""
    arr = np.asarray(colors).ravel()
    out = np.empty(arr.shape[0], dtype=np.int64)
    seen: dict[int, int] = {}
    for i, c in enumerate(arr.tolist()):
        out[i] = seen.setdefault(int(c), len(seen))
    return out


def same_partition(a, b) -> bool:
    """True when a and b cut the same index set into the same classes."""
    a = np.asarray(a).ravel()
    b = np.asarray(b).ravel()
    if a.shape != b.shape:
        return False
    return bool(np.array_equal(canon_partition(a), canon_partition(b)))


def crown_graph() -> ColoredGraph:
    """Two color classes {0,1,2} and {3,4,5}, edges i-(3+j) for i != j."""
    edges = [(i, 3 + j, 0) for i in range(3) for j in range(3) if i != j]
    return ColoredGraph(6, edges, vertex_colors=[1, 1, 1, 2, 2, 2])


@pytest.fixture(scope="session")
def cfi_k4():
    graph, m = cfi_build(complete(4))
    return graph, m


@pytest.fixture(scope="session")
def cfi_k4_twisted():
    graph, m = cfi_build(complete(4), twisted=((0, 1),))
    return graph, m
