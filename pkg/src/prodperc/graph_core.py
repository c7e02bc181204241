"""Small explicit graphs used as the factors of a product."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from prodperc.errors import InvalidParameterError

FAMILIES = ("complete", "cycle", "path", "edge")


@dataclass(frozen=True)
class FactorGraph:
    """Simple undirected graph on vertices ``0..vertex_count-1``.

    ``adjacency[v]`` is the sorted tuple of neighbours of ``v``. Structural
    invariants (symmetry, no loops, no duplicates) are enforced here;
    connectivity and degree caps are reported by :func:`validate`.
    """

    label: str
    vertex_count: int
    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.vertex_count < 1:
            raise InvalidParameterError("vertex_count must be positive")
        if len(self.adjacency) != self.vertex_count:
            raise InvalidParameterError("adjacency length differs from vertex_count")
        for v, nbrs in enumerate(self.adjacency):
            if list(nbrs) != sorted(set(nbrs)):
                raise InvalidParameterError(f"neighbours of {v} not sorted/deduplicated")
            for u in nbrs:
                if not 0 <= u < self.vertex_count:
                    raise InvalidParameterError(f"neighbour {u} of {v} out of range")
                if u == v:
                    raise InvalidParameterError(f"self-loop at {v}")
                if v not in self.adjacency[u]:
                    raise InvalidParameterError(f"edge {v}-{u} is not symmetric")

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    @property
    def max_degree(self) -> int:
        return max(len(a) for a in self.adjacency)

    def edges(self) -> list[tuple[int, int]]:
        """Edges ``(a, b)`` with ``a < b`` in lexicographic order."""
        return [(a, b) for a, nbrs in enumerate(self.adjacency) for b in nbrs if a < b]

    def components(self) -> list[list[int]]:
        seen = [False] * self.vertex_count
        out = []
        for s in range(self.vertex_count):
            if seen[s]:
                continue
            seen[s] = True
            comp = [s]
            queue = deque([s])
            while queue:
                v = queue.popleft()
                for u in self.adjacency[v]:
                    if not seen[u]:
                        seen[u] = True
                        comp.append(u)
                        queue.append(u)
            out.append(comp)
        return out

    def largest_component(self) -> int:
        return max(len(c) for c in self.components())

    def to_dict(self) -> dict:
        return {"label": self.label, "n": self.vertex_count, "edges": [list(e) for e in self.edges()]}


def from_edges(n: int, edges: Iterable[Sequence[int]], label: str | None = None) -> FactorGraph:
    """Build a graph from an edge list; repeated edges and loops are rejected."""
    if n < 1:
        raise InvalidParameterError("n must be positive")
    adj: list[set[int]] = [set() for _ in range(n)]
    for e in edges:
        if len(e) != 2:
            raise InvalidParameterError(f"edge {e!r} does not have two endpoints")
        a, b = int(e[0]), int(e[1])
        if not (0 <= a < n and 0 <= b < n):
            raise InvalidParameterError(f"edge {a}-{b} out of range for n={n}")
        if a == b:
            raise InvalidParameterError(f"self-loop at {a}")
        if b in adj[a]:
            raise InvalidParameterError(f"duplicate edge {a}-{b}")
        adj[a].add(b)
        adj[b].add(a)
    return FactorGraph(
        label=label if label is not None else f"G{n}",
        vertex_count=n,
        adjacency=tuple(tuple(sorted(s)) for s in adj),
    )


def build_named(kind: str, k: int = 2) -> FactorGraph:
    """Complete graph, cycle, path or single edge on ``k`` vertices."""
    if kind not in FAMILIES:
        raise InvalidParameterError(f"unknown family {kind!r}; expected one of {FAMILIES}")
    if k < 2:
        raise InvalidParameterError(f"{kind} needs k >= 2, got {k}")
    if kind == "edge":
        if k != 2:
            raise InvalidParameterError("edge family only exists for k = 2")
        return from_edges(2, [(0, 1)], label="K2")
    if kind == "complete":
        return from_edges(k, [(a, b) for a in range(k) for b in range(a + 1, k)], label=f"K{k}")
    if kind == "path":
        return from_edges(k, [(a, a + 1) for a in range(k - 1)], label=f"P{k}")
    # A cycle on two vertices would be a double edge; the simple-graph version is K2.
    if k == 2:
        return from_edges(2, [(0, 1)], label="C2")
    return from_edges(k, [(a, (a + 1) % k) for a in range(k)], label=f"C{k}")


def is_connected(g: FactorGraph) -> bool:
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for u in g.adjacency[v]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == g.vertex_count


def average_degree(g: FactorGraph) -> Fraction:
    return Fraction(2 * g.edge_count, g.vertex_count)


@dataclass(frozen=True)
class ValidationReport:
    connected: bool
    has_edge: bool
    symmetric: bool
    max_degree: int
    max_degree_cap: int

    @property
    def degree_ok(self) -> bool:
        return self.max_degree <= self.max_degree_cap

    @property
    def ok(self) -> bool:
        return self.connected and self.has_edge and self.symmetric and self.degree_ok

    def problems(self) -> list[str]:
        out = []
        if not self.connected:
            out.append("disconnected")
        if not self.has_edge:
            out.append("no edges")
        if not self.symmetric:
            out.append("asymmetric adjacency")
        if not self.degree_ok:
            out.append(f"max degree {self.max_degree} exceeds cap {self.max_degree_cap}")
        return out


def validate(g: FactorGraph, max_degree_cap: int) -> ValidationReport:
    # Symmetry is also enforced at construction; re-checked so the report is self-contained.
    symmetric = all(v in g.adjacency[u] for v in range(g.vertex_count) for u in g.adjacency[v])
    return ValidationReport(
        connected=is_connected(g),
        has_edge=g.edge_count > 0,
        symmetric=symmetric,
        max_degree=g.max_degree,
        max_degree_cap=max_degree_cap,
    )
