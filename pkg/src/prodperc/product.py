"""Implicit Cartesian products of factor graphs.

Vertices are mixed-radix integers, least-significant factor first:
``index = sum_j coords[j] * stride[j]`` with ``stride[j] = prod_{i<j} radix[i]``.

Edge ids are dense in ``[0, edge_count)``. Edges that change coordinate ``j``
along the ``e``-th edge ``(a, b)`` of factor ``j`` (edges listed with
``a < b`` in lexicographic order) form one block of ``V / radix[j]`` ids,
indexed by the remaining coordinates::

    rest = (u mod stride[j]) + (u div (stride[j] * radix[j])) * stride[j]
    id   = block_base[j] + e * (V / radix[j]) + rest

where ``u`` is either endpoint and ``block_base[j] = sum_{i<j} |E_i| V / radix[i]``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from math import prod
from typing import Sequence

import numpy as np

from prodperc.errors import CapacityError, InvalidParameterError
from prodperc.graph_core import FactorGraph, average_degree, build_named, validate

MATERIALIZE_CAP = 1 << 16
PERCOLATION_CAP = 1 << 27


class ProductGraph:
    def __init__(
        self,
        factors: Sequence[FactorGraph],
        declared_C: int | None = None,
        declared_gamma: float | None = None,
    ):
        if not factors:
            raise InvalidParameterError("a product needs at least one factor")
        self.factors = tuple(factors)
        cap = declared_C if declared_C is not None else max(g.max_degree for g in self.factors)
        if cap < 1:
            raise InvalidParameterError("declared_C must be positive")
        for j, g in enumerate(self.factors):
            report = validate(g, cap)
            if not report.ok:
                raise InvalidParameterError(
                    f"factor {j} ({g.label}) unusable: {', '.join(report.problems())}"
                )
        self.declared_C = cap
        self.declared_gamma = declared_gamma

        self.radices = tuple(g.vertex_count for g in self.factors)
        self.vertex_count = prod(self.radices)
        strides = [1]
        for r in self.radices[:-1]:
            strides.append(strides[-1] * r)
        self.strides = tuple(strides)

        self.factor_edges = tuple(tuple(g.edges()) for g in self.factors)
        self._edge_index = tuple({e: i for i, e in enumerate(es)} for es in self.factor_edges)
        # Per factor, per vertex: factor-edge index aligned with adjacency.
        self._incident = tuple(
            tuple(
                tuple(idx[(min(a, b), max(a, b))] for b in g.adjacency[a])
                for a in range(g.vertex_count)
            )
            for g, idx in zip(self.factors, self._edge_index)
        )
        self.block_len = tuple(self.vertex_count // r for r in self.radices)
        bases = [0]
        for es, m in zip(self.factor_edges, self.block_len):
            bases.append(bases[-1] + len(es) * m)
        self.block_base = tuple(bases[:-1])
        self.edge_count = bases[-1]
        self.mean_degree = sum((average_degree(g) for g in self.factors), Fraction(0))

    @property
    def n(self) -> int:
        return len(self.factors)

    @property
    def label(self) -> str:
        labels = [g.label for g in self.factors]
        if len(set(labels)) == 1 and len(labels) > 1:
            return f"{labels[0]}^{len(labels)}"
        return "*".join(labels)

    def __repr__(self) -> str:
        return f"ProductGraph({self.label}, V={self.vertex_count}, E={self.edge_count})"

    def describe(self) -> dict:
        return {
            "label": self.label,
            "factors": [g.label for g in self.factors],
            "radices": list(self.radices),
            "vertex_count": self.vertex_count,
            "edge_count": self.edge_count,
            "mean_degree": str(self.mean_degree),
            "mean_degree_float": float(self.mean_degree),
            "declared_C": self.declared_C,
            "declared_gamma": self.declared_gamma,
        }

    # -- vertex encoding -------------------------------------------------

    def encode(self, coords: Sequence[int]) -> int:
        if len(coords) != self.n:
            raise InvalidParameterError(f"expected {self.n} coordinates, got {len(coords)}")
        v = 0
        for c, r, s in zip(coords, self.radices, self.strides):
            if not 0 <= c < r:
                raise InvalidParameterError(f"coordinate {c} outside [0, {r})")
            v += c * s
        return v

    def decode(self, v: int) -> tuple[int, ...]:
        self._check_vertex(v)
        out = []
        for r in self.radices:
            v, c = divmod(v, r)
            out.append(c)
        return tuple(out)

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.vertex_count:
            raise InvalidParameterError(f"vertex {v} outside [0, {self.vertex_count})")

    # -- adjacency -------------------------------------------------------

    def _edge_id(self, j: int, e: int, u: int) -> int:
        s = self.strides[j]
        rest = u % s + (u // (s * self.radices[j])) * s
        return self.block_base[j] + e * self.block_len[j] + rest

    def neighbors(self, v: int) -> list[tuple[int, int]]:
        """``(neighbour, edge_id)`` pairs, by coordinate then factor adjacency order."""
        self._check_vertex(v)
        out = []
        rem = v
        for j, (g, r, s) in enumerate(zip(self.factors, self.radices, self.strides)):
            rem, c = divmod(rem, r)
            for w, e in zip(g.adjacency[c], self._incident[j][c]):
                out.append((v + (w - c) * s, self._edge_id(j, e, v)))
        return out

    def vertex_degree(self, v: int) -> int:
        return sum(g.degree(c) for g, c in zip(self.factors, self.decode(v)))

    def canonical_edge_id(self, u: int, v: int) -> int:
        cu, cv = self.decode(u), self.decode(v)
        diff = [j for j in range(self.n) if cu[j] != cv[j]]
        if len(diff) != 1:
            raise InvalidParameterError(f"{u} and {v} are not adjacent")
        j = diff[0]
        key = (min(cu[j], cv[j]), max(cu[j], cv[j]))
        e = self._edge_index[j].get(key)
        if e is None:
            raise InvalidParameterError(f"{u} and {v} are not adjacent")
        return self._edge_id(j, e, u)

    def edge_endpoints(self, edge_id: int) -> tuple[int, int]:
        """Inverse of :meth:`canonical_edge_id`; returns ``(smaller, larger)``."""
        if not 0 <= edge_id < self.edge_count:
            raise InvalidParameterError(f"edge id {edge_id} outside [0, {self.edge_count})")
        j = int(np.searchsorted(self.block_base, edge_id, side="right")) - 1
        e, rest = divmod(edge_id - self.block_base[j], self.block_len[j])
        a, b = self.factor_edges[j][e]
        s = self.strides[j]
        u = rest % s + a * s + (rest // s) * s * self.radices[j]
        return u, u + (b - a) * s

    # -- vectorised edge tables -----------------------------------------

    @cached_property
    def _slot_tables(self):
        """Flattened per-block arrays used by :meth:`edge_endpoints_array`."""
        slot_j, slot_a, slot_b = [], [], []
        for j, es in enumerate(self.factor_edges):
            for a, b in es:
                slot_j.append(j)
                slot_a.append(a)
                slot_b.append(b)
        slot_start = np.array(
            [self.block_base[j] + e * self.block_len[j]
             for j, es in enumerate(self.factor_edges) for e in range(len(es))],
            dtype=np.int64,
        )
        return (
            slot_start,
            np.array(slot_j, dtype=np.int64),
            np.array(slot_a, dtype=np.int64),
            np.array(slot_b, dtype=np.int64),
        )

    def edge_endpoints_array(self, ids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        ids = np.asarray(ids, dtype=np.int64)
        slot_start, slot_j, slot_a, slot_b = self._slot_tables
        slot = np.searchsorted(slot_start, ids, side="right") - 1
        j = slot_j[slot]
        rest = ids - slot_start[slot]
        s = np.asarray(self.strides, dtype=np.int64)[j]
        r = np.asarray(self.radices, dtype=np.int64)[j]
        a = slot_a[slot]
        u = rest % s + a * s + (rest // s) * s * r
        return u, u + (slot_b[slot] - a) * s

    def materialize(self) -> FactorGraph:
        if self.vertex_count > MATERIALIZE_CAP:
            raise CapacityError(
                f"product has {self.vertex_count} vertices; materialize allows {MATERIALIZE_CAP}"
            )
        adj = tuple(
            tuple(sorted(w for w, _ in self.neighbors(v))) for v in range(self.vertex_count)
        )
        return FactorGraph(label=self.label, vertex_count=self.vertex_count, adjacency=adj)


def hypercube(n: int) -> ProductGraph:
    if n < 1:
        raise InvalidParameterError("hypercube dimension must be positive")
    k2 = build_named("edge", 2)
    return ProductGraph([k2] * n, declared_C=1)
