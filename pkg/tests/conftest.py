"""Shared test helpers: independent oracles and random instance generators."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from giep import Graph, make_graph


def brute_force_matching_size(g: Graph) -> int:
    """Maximum matching size by bitmask dynamic programming (independent of blossom).

    Enumerates, for every set of still-available vertices, the choice of
    leaving the lowest vertex unmatched or pairing it with each available
    neighbor.  Exact for n <= ~20; used here for n <= 10.
    """
    n = g.n
    pairs = g.bidirected_pairs()
    adj: list[list[int]] = [[] for _ in range(n)]
    for a, b in pairs:
        adj[a - 1].append(b - 1)
        adj[b - 1].append(a - 1)

    @lru_cache(maxsize=None)
    def best(mask: int) -> int:
        if mask == 0:
            return 0
        v = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << v)
        result = best(rest)
        for u in adj[v]:
            if rest & (1 << u):
                result = max(result, 1 + best(rest & ~(1 << u)))
        return result

    size = best((1 << n) - 1)
    best.cache_clear()
    return size


def random_undirected_graph(rng: np.random.Generator, n: int, p: float) -> Graph:
    """Plain G(n, p) without any planted structure."""
    pairs = [
        (a, b)
        for a in range(1, n + 1)
        for b in range(a + 1, n + 1)
        if rng.uniform() < p
    ]
    return make_graph(n, pairs, directed=False)
