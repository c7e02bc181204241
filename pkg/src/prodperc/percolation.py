"""Seeded bond percolation on implicit products."""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass

import numpy as np

from prodperc import hashing
from prodperc._kernels import uf_component_sizes, uf_union_edges
from prodperc.errors import CapacityError, InvalidParameterError
from prodperc.product import PERCOLATION_CAP, ProductGraph

MODES = ("bitmask", "on_the_fly")
BITMASK_BUDGET = 1 << 33
_CHUNK = 1 << 22


def _check_p(p: float, name: str = "p") -> None:
    if not 0.0 <= p <= 1.0:
        raise InvalidParameterError(f"{name}={p} outside [0, 1]")


@dataclass(frozen=True)
class PercolationSample:
    seed: int
    p: float
    mode: str = "bitmask"

    def __post_init__(self) -> None:
        _check_p(self.p)
        if self.mode not in MODES:
            raise InvalidParameterError(f"mode must be one of {MODES}")
        if not 0 <= self.seed < 1 << 64:
            raise InvalidParameterError("seed must be an unsigned 64-bit integer")

    def is_open(self, edge: int) -> bool:
        return edge_open(self.seed, edge, self.p)


def default_mode(pg: ProductGraph) -> str:
    return "bitmask" if pg.edge_count <= BITMASK_BUDGET else "on_the_fly"


def edge_open(seed: int, edge: int, p: float) -> bool:
    return hashing.uniform(seed, edge) < p


def edge_bitmask(pg: ProductGraph, seed: int, p: float) -> np.ndarray:
    """Packed open-edge bits, little-endian bit order, one bit per edge id."""
    _check_p(p)
    parts = []
    for start in range(0, pg.edge_count, _CHUNK):
        ids = np.arange(start, min(start + _CHUNK, pg.edge_count), dtype=np.uint64)
        parts.append(np.packbits(hashing.uniforms(seed, ids) < p, bitorder="little"))
    if not parts:
        return np.zeros(0, dtype=np.uint8)
    # _CHUNK is a multiple of 8 so the concatenated bytes stay aligned.
    return np.concatenate(parts)


@dataclass(frozen=True)
class ComponentStats:
    component_count: int
    L1: int
    L2: int
    size_histogram: dict[int, int]
    vertex_count: int

    @classmethod
    def from_sizes(cls, sizes, vertex_count: int) -> ComponentStats:
        sizes = sorted((int(s) for s in sizes), reverse=True)
        if sum(sizes) != vertex_count:
            raise AssertionError("component sizes do not add up to the vertex count")
        return cls(
            component_count=len(sizes),
            L1=sizes[0],
            L2=sizes[1] if len(sizes) > 1 else 0,
            size_histogram=dict(sorted(Counter(sizes).items())),
            vertex_count=vertex_count,
        )

    @property
    def L1_frac(self) -> float:
        return self.L1 / self.vertex_count

    @property
    def L2_frac(self) -> float:
        return self.L2 / self.vertex_count

    def to_dict(self) -> dict:
        return {
            "vertex_count": self.vertex_count,
            "component_count": self.component_count,
            "L1": self.L1,
            "L2": self.L2,
            "L1_frac": self.L1_frac,
            "L2_frac": self.L2_frac,
            "size_histogram": {str(k): v for k, v in self.size_histogram.items()},
        }


def _check_capacity(pg: ProductGraph) -> None:
    if pg.vertex_count > PERCOLATION_CAP:
        raise CapacityError(
            f"product has {pg.vertex_count} vertices; percolation allows {PERCOLATION_CAP}"
        )


def _census_bitmask(pg: ProductGraph, sample: PercolationSample) -> ComponentStats:
    bits = edge_bitmask(pg, sample.seed, sample.p)
    V = pg.vertex_count
    parent = np.arange(V, dtype=np.int64)
    size = np.ones(V, dtype=np.int64)
    for start in range(0, pg.edge_count, _CHUNK):
        stop = min(start + _CHUNK, pg.edge_count)
        chunk = np.unpackbits(
            bits[start // 8 : (stop + 7) // 8], count=stop - start, bitorder="little"
        )
        ids = np.flatnonzero(chunk) + start
        if ids.size:
            us, vs = pg.edge_endpoints_array(ids)
            uf_union_edges(parent, size, us, vs)
    return ComponentStats.from_sizes(uf_component_sizes(parent, size), V)


def _census_on_the_fly(pg: ProductGraph, sample: PercolationSample) -> ComponentStats:
    seen = bytearray(pg.vertex_count)
    sizes = []
    seed, p = sample.seed, sample.p
    for s in range(pg.vertex_count):
        if seen[s]:
            continue
        seen[s] = 1
        count = 1
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w, e in pg.neighbors(v):
                if not seen[w] and hashing.uniform(seed, e) < p:
                    seen[w] = 1
                    count += 1
                    queue.append(w)
        sizes.append(count)
    return ComponentStats.from_sizes(sizes, pg.vertex_count)


def component_stats(pg: ProductGraph, sample: PercolationSample) -> ComponentStats:
    _check_capacity(pg)
    if sample.mode == "bitmask":
        return _census_bitmask(pg, sample)
    return _census_on_the_fly(pg, sample)


def percolate(pg: ProductGraph, p: float, seed: int, mode: str | None = None) -> ComponentStats:
    return component_stats(pg, PercolationSample(seed, p, mode or default_mode(pg)))


# -- two-round exposure -------------------------------------------------


def sprinkle_split(p: float, p1: float) -> float:
    """Second-round probability ``p2`` with ``(1 - p1)(1 - p2) = 1 - p``."""
    _check_p(p)
    _check_p(p1, "p1")
    if p1 > p:
        raise InvalidParameterError(f"p1={p1} exceeds p={p}")
    if p1 >= 1.0:
        raise InvalidParameterError("p1 must be below 1")
    if p1 == p:
        return 0.0
    return 1.0 - (1.0 - p) / (1.0 - p1)


def union_open(seed: int, edge: int, p1: float, p2: float) -> bool:
    return (
        hashing.uniform(seed, edge) < p1
        or hashing.uniform(seed ^ hashing.SECOND_ROUND_SALT, edge) < p2
    )


@dataclass
class UnionDistributionReport:
    p: float
    p1: float
    p2: float
    trials: int
    union_freq: np.ndarray
    direct_freq: np.ndarray
    stderr: float

    @property
    def max_union_dev(self) -> float:
        return float(np.max(np.abs(self.union_freq - self.p)))

    @property
    def max_direct_dev(self) -> float:
        return float(np.max(np.abs(self.direct_freq - self.p)))

    @property
    def ok(self) -> bool:
        tol = 4 * self.stderr
        return self.max_union_dev <= tol and self.max_direct_dev <= tol

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "p1": self.p1,
            "p2": self.p2,
            "trials": self.trials,
            "edges": int(self.union_freq.size),
            "stderr": self.stderr,
            "max_union_dev": self.max_union_dev,
            "max_direct_dev": self.max_direct_dev,
            "pass": self.ok,
        }


def union_distribution_check(
    pg: ProductGraph, p: float, p1: float, trials: int, seed: int
) -> UnionDistributionReport:
    """Per-edge open frequencies of ``G_p1 U G_p2`` against direct ``G_p``.

    Trial ``t`` uses seed ``seed + t`` for the direct draw and the first
    round, and ``(seed + t) ^ SECOND_ROUND_SALT`` for the second round.
    """
    p2 = sprinkle_split(p, p1)
    ids = np.arange(pg.edge_count, dtype=np.uint64)
    union_hits = np.zeros(pg.edge_count, dtype=np.int64)
    direct_hits = np.zeros(pg.edge_count, dtype=np.int64)
    block = max(1, (1 << 20) // max(1, pg.edge_count))
    for t0 in range(0, trials, block):
        seeds = (np.arange(t0, min(t0 + block, trials), dtype=np.uint64) + np.uint64(seed))
        first = hashing.uniforms_grid(seeds, ids)
        second = hashing.uniforms_grid(seeds ^ np.uint64(hashing.SECOND_ROUND_SALT), ids)
        direct_hits += (first < p).sum(axis=0)
        union_hits += ((first < p1) | (second < p2)).sum(axis=0)
    return UnionDistributionReport(
        p=p,
        p1=p1,
        p2=p2,
        trials=trials,
        union_freq=union_hits / trials,
        direct_freq=direct_hits / trials,
        stderr=math.sqrt(p * (1 - p) / trials),
    )


# -- capped exploration ---------------------------------------------------


def explore_component(
    pg: ProductGraph, start: int, sample: PercolationSample, cap: int
) -> tuple[int, bool]:
    """FIFO exploration of the open cluster of ``start``.

    A vertex counts as processed once reached (active) and stays processed
    after its edges are revealed (passive). Stops when the cluster is
    exhausted or ``cap`` vertices have been processed.
    """
    if cap < 1:
        raise InvalidParameterError("cap must be at least 1")
    pg._check_vertex(start)
    processed = {start}
    active = deque([start])
    while active and len(processed) < cap:
        v = active.popleft()
        for w, e in pg.neighbors(v):
            if w in processed or not sample.is_open(e):
                continue
            processed.add(w)
            active.append(w)
            if len(processed) >= cap:
                break
    return len(processed), len(processed) >= cap
