from fractions import Fraction

import pytest

from prodperc.errors import InvalidParameterError
from prodperc.graph_core import (
    FactorGraph,
    average_degree,
    build_named,
    from_edges,
    is_connected,
    validate,
)


def test_k2():
    g = build_named("edge", 2)
    assert g.vertex_count == 2 and g.edge_count == 1


def test_c4():
    g = build_named("cycle", 4)
    assert g.vertex_count == 4 and g.edge_count == 4
    assert [g.degree(v) for v in range(4)] == [2, 2, 2, 2]


def test_p4_degrees():
    g = build_named("path", 4)
    assert [g.degree(v) for v in range(4)] == [1, 2, 2, 1]


@pytest.mark.parametrize("kind", ["complete", "cycle", "path"])
def test_small_k_rejected(kind):
    with pytest.raises(InvalidParameterError):
        build_named(kind, 1)


def test_unknown_family():
    with pytest.raises(InvalidParameterError):
        build_named("star", 4)


@pytest.mark.parametrize("kind", ["complete", "cycle", "path"])
@pytest.mark.parametrize("k", range(2, 9))
def test_handshake(kind, k):
    g = build_named(kind, k)
    assert sum(g.degree(v) for v in range(k)) == 2 * g.edge_count
    assert validate(g, g.max_degree).ok


def test_validate_examples():
    assert validate(build_named("edge"), 1).ok
    report = validate(build_named("cycle", 4), 1)
    assert not report.ok and not report.degree_ok
    two_edges = from_edges(4, [(0, 1), (2, 3)])
    report = validate(two_edges, 5)
    assert not report.ok and not report.connected


def test_validate_edgeless():
    report = validate(from_edges(1, []), 1)
    assert not report.has_edge and not report.ok


@pytest.mark.parametrize(
    "g, expected",
    [
        (build_named("edge"), Fraction(1)),
        (build_named("path", 3), Fraction(4, 3)),
        (build_named("cycle", 4), Fraction(2)),
    ],
)
def test_average_degree(g, expected):
    d = average_degree(g)
    assert isinstance(d, Fraction) and d == expected


def test_is_connected():
    assert is_connected(build_named("path", 4))
    assert not is_connected(from_edges(4, [(0, 1), (2, 3)]))
    assert is_connected(build_named("edge"))


@pytest.mark.parametrize(
    "edges",
    [[(0, 0)], [(0, 1), (1, 0)], [(0, 5)], [(0, 1, 2)]],
)
def test_from_edges_rejects(edges):
    with pytest.raises(InvalidParameterError):
        from_edges(3, edges)


def test_asymmetric_adjacency_rejected():
    with pytest.raises(InvalidParameterError):
        FactorGraph("bad", 2, ((1,), ()))
    with pytest.raises(InvalidParameterError):
        FactorGraph("bad", 3, ((2, 1), (0,), (0,)))
