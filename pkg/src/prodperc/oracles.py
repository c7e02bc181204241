"""Brute-force reference computations.

These deliberately avoid the fast paths (union-find, Gray-code walk,
implicit adjacency) so they can be used to check them.
"""

from __future__ import annotations

import random
from collections import Counter, deque
from fractions import Fraction
from itertools import combinations

from prodperc import hashing
from prodperc.graph_core import FactorGraph, from_edges
from prodperc.product import ProductGraph


def materialized_census(pg: ProductGraph, seed: int, p: float) -> dict:
    """Component census of ``G_p`` via explicit adjacency and plain BFS."""
    g = pg.materialize()
    open_adj = [[] for _ in range(g.vertex_count)]
    for a, b in g.edges():
        if hashing.uniform(seed, pg.canonical_edge_id(a, b)) < p:
            open_adj[a].append(b)
            open_adj[b].append(a)
    seen = [False] * g.vertex_count
    sizes = []
    for s in range(g.vertex_count):
        if seen[s]:
            continue
        seen[s] = True
        q = deque([s])
        n = 0
        while q:
            v = q.popleft()
            n += 1
            for u in open_adj[v]:
                if not seen[u]:
                    seen[u] = True
                    q.append(u)
        sizes.append(n)
    sizes.sort(reverse=True)
    return {
        "component_count": len(sizes),
        "L1": sizes[0],
        "L2": sizes[1] if len(sizes) > 1 else 0,
        "size_histogram": dict(sorted(Counter(sizes).items())),
    }


def isoperimetric_brute(g: FactorGraph) -> Fraction:
    """``min |dS|/|S|`` by listing subsets with ``itertools.combinations``."""
    nv = g.vertex_count
    best = None
    for size in range(1, nv // 2 + 1):
        for S in combinations(range(nv), size):
            inside = set(S)
            b = sum(1 for v in S for u in g.adjacency[v] if u not in inside)
            r = Fraction(b, size)
            if best is None or r < best:
                best = r
    return best


def random_connected_graph(rng: random.Random, n: int, extra: float = 0.3) -> FactorGraph:
    """Random spanning tree plus each remaining pair with probability ``extra``."""
    order = list(range(n))
    rng.shuffle(order)
    edges = set()
    for i in range(1, n):
        a, b = order[i], order[rng.randrange(i)]
        edges.add((min(a, b), max(a, b)))
    for a in range(n):
        for b in range(a + 1, n):
            if (a, b) not in edges and rng.random() < extra:
                edges.add((a, b))
    return from_edges(n, sorted(edges), label=f"R{n}")


def random_product(
    rng: random.Random, max_vertices: int, factors=(2, 3), sizes=(2, 6)
) -> ProductGraph:
    """Random product of connected factors with at most ``max_vertices`` vertices."""
    while True:
        k = rng.randint(*factors)
        fs = [random_connected_graph(rng, rng.randint(*sizes)) for _ in range(k)]
        total = 1
        for f in fs:
            total *= f.vertex_count
        if total <= max_vertices:
            return ProductGraph(fs)
