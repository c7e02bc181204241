"""Exact edge-isoperimetric constants and balanced empty cuts."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from prodperc._kernels import min_boundary_ratio
from prodperc.errors import CapacityError, InvalidParameterError
from prodperc.graph_core import FactorGraph
from prodperc.product import ProductGraph

EXACT_CAP = 24
CELL_CAP = 20


@dataclass(frozen=True)
class IsoperimetryResult:
    value: Fraction
    witness: tuple[int, ...]
    boundary_size: int

    def to_dict(self) -> dict:
        return {
            "value": str(self.value),
            "value_float": float(self.value),
            "witness": list(self.witness),
            "boundary_size": self.boundary_size,
        }


def boundary_size(g: FactorGraph, subset) -> int:
    s = set(subset)
    return sum(1 for v in s for u in g.adjacency[v] if u not in s)


def isoperimetric_exact(g: FactorGraph) -> IsoperimetryResult:
    """Minimum of ``|dS| / |S|`` over ``1 <= |S| <= |V|/2`` by full enumeration."""
    nv = g.vertex_count
    if nv > EXACT_CAP:
        raise CapacityError(f"{nv} vertices; exhaustive search allows at most {EXACT_CAP}")
    if nv < 2:
        raise InvalidParameterError("isoperimetric constant needs at least two vertices")
    nbr_mask = np.zeros(nv, dtype=np.int64)
    for v, nbrs in enumerate(g.adjacency):
        for u in nbrs:
            nbr_mask[v] |= 1 << u
    deg = np.array([len(a) for a in g.adjacency], dtype=np.int64)
    b, s, mask = min_boundary_ratio(nbr_mask, deg, nv)
    witness = tuple(v for v in range(nv) if (int(mask) >> v) & 1)
    return IsoperimetryResult(Fraction(int(b), int(s)), witness, int(b))


def chung_tetali_bounds(pg: ProductGraph) -> tuple[Fraction, Fraction]:
    """``(min_k i(G_k) / 2, min_k i(G_k))``, which bracket ``i(G)``."""
    m = min(isoperimetric_exact(g).value for g in pg.factors)
    return m / 2, m


@dataclass(frozen=True)
class SandwichReport:
    lower: Fraction
    exact: IsoperimetryResult
    upper: Fraction

    @property
    def ok(self) -> bool:
        return self.lower <= self.exact.value <= self.upper

    def to_dict(self) -> dict:
        return {
            "lower": str(self.lower),
            "upper": str(self.upper),
            "exact": self.exact.to_dict(),
            "pass": self.ok,
        }


def verify_sandwich(pg: ProductGraph) -> SandwichReport:
    lower, upper = chung_tetali_bounds(pg)
    exact = isoperimetric_exact(pg.materialize())
    return SandwichReport(lower, exact, upper)


def decay_condition(pg: ProductGraph) -> dict | None:
    """Post-hoc check of ``i(G_j) >= n**-gamma`` for the declared gamma."""
    if pg.declared_gamma is None:
        return None
    threshold = pg.n ** (-pg.declared_gamma)
    values = [isoperimetric_exact(g).value for g in pg.factors]
    return {
        "gamma": pg.declared_gamma,
        "threshold": threshold,
        "min_factor_constant": str(min(values)),
        "holds": all(float(v) >= threshold for v in values),
    }


# -- balanced empty cuts ------------------------------------------------


@dataclass(frozen=True)
class BalancedCutResult:
    criterion_holds: bool
    witness: tuple[int, ...] | None
    largest_component: int
    order: int


def _check_partition(h: FactorGraph, parts: Sequence[Sequence[int]]) -> list[list[int]]:
    cells = [sorted(set(c)) for c in parts]
    if any(len(c) == 0 for c in cells):
        raise InvalidParameterError("empty cell")
    if len(cells) > CELL_CAP:
        raise CapacityError(f"{len(cells)} cells; at most {CELL_CAP} supported")
    owner = {}
    for i, c in enumerate(cells):
        for v in c:
            if not 0 <= v < h.vertex_count:
                raise InvalidParameterError(f"vertex {v} not in graph")
            if v in owner:
                raise InvalidParameterError(f"vertex {v} in cells {owner[v]} and {i}")
            owner[v] = i
    if len(owner) != h.vertex_count:
        raise InvalidParameterError("cells do not cover the vertex set")
    for i, c in enumerate(cells):
        inside = set(c)
        seen = {c[0]}
        stack = [c[0]]
        while stack:
            v = stack.pop()
            for u in h.adjacency[v]:
                if u in inside and u not in seen:
                    seen.add(u)
                    stack.append(u)
        if len(seen) != len(c):
            raise InvalidParameterError(f"cell {i} does not induce a connected subgraph")
    return cells


def balanced_cut_check(h: FactorGraph, parts: Sequence[Sequence[int]]) -> BalancedCutResult:
    """Look for a union of cells of size in ``[h/3, 2h/3]`` with no edge leaving it.

    Returns the first such index set (by increasing bitmask) as ``witness``;
    otherwise the criterion holds and the largest component must exceed
    ``h/3``, which is asserted.
    """
    cells = _check_partition(h, parts)
    k = len(cells)
    order = h.vertex_count
    owner = [0] * order
    for i, c in enumerate(cells):
        for v in c:
            owner[v] = i
    cell_adj = [0] * k
    for v in range(order):
        for u in h.adjacency[v]:
            if owner[u] != owner[v]:
                cell_adj[owner[v]] |= 1 << owner[u]
    sizes = [len(c) for c in cells]
    full = (1 << k) - 1

    witness = None
    for J in range(1, full + 1):
        total = sum(sizes[i] for i in range(k) if (J >> i) & 1)
        if not (order <= 3 * total <= 2 * order):
            continue
        outside = full & ~J
        if not any(cell_adj[i] & outside for i in range(k) if (J >> i) & 1):
            witness = tuple(i for i in range(k) if (J >> i) & 1)
            break

    largest = h.largest_component()
    if witness is None and not 3 * largest > order:
        raise AssertionError(
            f"criterion holds but largest component {largest} <= {order}/3"
        )
    return BalancedCutResult(witness is None, witness, largest, order)
