"""Resource caps with environment-variable overrides.

Every cap can be overridden by an environment variable named WLKIT_<FIELD>
(upper-cased), e.g. WLKIT_MEMORY_BYTES=8000000000.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Limits:
    # refine_k dense storage budget (bytes of working arrays)
    memory_bytes: int = 2 * 1024**3
    # explored nodes in canonical-mode branching
    canon_nodes: int = 200_000
    # vertex cap for the exhaustive orbit/automorphism oracle
    oracle_vertices: int = 12
    # search-node budget for the oracles
    oracle_nodes: int = 5_000_000
    # vertex cap (per side) for the isomorphism oracle
    iso_vertices: int = 40
    # search-node budget for the isomorphism oracle
    iso_nodes: int = 2_000_000
    # subsets examined by the exhaustive separator search
    separator_subsets: int = 5_000_000
    # vertices in a color class considered by overlap normalization
    overlap_class_cap: int = 64
    # element cap for naive generated-group order counting
    group_elements: int = 1_000_000
    # worker hint; the engine is deterministic regardless of its value
    threads: int = 0


def limits_from_env(base: Limits | None = None) -> Limits:
    """Return ``base`` (default ``Limits()``) with WLKIT_* overrides applied."""
    lim = base or Limits()
    overrides = {}
    for f in fields(Limits):
        raw = os.environ.get("WLKIT_" + f.name.upper())
        if raw is not None:
            try:
                overrides[f.name] = int(raw)
            except ValueError:
                raise ValueError(f"WLKIT_{f.name.upper()} must be an integer, got {raw!r}")
    return replace(lim, **overrides) if overrides else lim


DEFAULT_LIMITS = limits_from_env()
