import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prodperc.errors import CapacityError, InvalidParameterError
from prodperc.graph_core import average_degree, build_named, from_edges
from prodperc.product import ProductGraph, hypercube

K2 = build_named("edge")
C4 = build_named("cycle", 4)
P3 = build_named("path", 3)
P4 = build_named("path", 4)


def radix_graph(r):
    return build_named("path", r) if r > 2 else K2


def product_of(radices):
    return ProductGraph([radix_graph(r) for r in radices])


def test_encode_examples():
    pg = product_of([2, 2, 3])
    assert pg.encode((1, 0, 2)) == 9
    assert pg.encode((0, 0, 0)) == 0
    assert product_of([2, 2]).encode((1, 1)) == 3


def test_decode_examples():
    pg = product_of([2, 2, 3])
    assert pg.decode(9) == (1, 0, 2)
    assert pg.decode(0) == (0, 0, 0)
    assert pg.decode(pg.vertex_count - 1) == (1, 1, 2)


def test_encode_out_of_range():
    pg = product_of([2, 3])
    with pytest.raises(InvalidParameterError):
        pg.encode((2, 0))
    with pytest.raises(InvalidParameterError):
        pg.decode(6)


@pytest.mark.parametrize("radices", [[2], [3, 2], [2, 3, 4], [4, 4], [5, 2, 3]])
def test_encode_decode_exhaustive(radices):
    pg = product_of(radices)
    coords = list(itertools.product(*[range(r) for r in radices]))
    assert sorted(pg.encode(c) for c in coords) == list(range(pg.vertex_count))
    for c in coords:
        assert pg.decode(pg.encode(c)) == c


@settings(max_examples=50)
@given(st.lists(st.integers(2, 40), min_size=1, max_size=8), st.data())
def test_encode_decode_random(radices, data):
    pg = product_of(radices)
    v = data.draw(st.integers(0, pg.vertex_count - 1))
    assert pg.encode(pg.decode(v)) == v


def test_hypercube_neighbors():
    h3 = hypercube(3)
    assert {w for w, _ in h3.neighbors(0)} == {1, 2, 4}
    for v in range(8):
        assert h3.vertex_degree(v) == 3


def test_c4_k2_neighbors():
    pg = ProductGraph([C4, K2])
    nbrs = {pg.decode(w) for w, _ in pg.neighbors(pg.encode((0, 0)))}
    assert nbrs == {(1, 0), (3, 0), (0, 1)}


def test_grid_degrees():
    pg = ProductGraph([P3, P3])
    assert pg.vertex_degree(pg.encode((0, 0))) == 2
    assert pg.vertex_degree(pg.encode((1, 1))) == 4


@pytest.mark.parametrize("n", range(1, 9))
def test_hypercube_specialisation(n):
    pg = hypercube(n)
    assert pg.vertex_count == 2**n
    assert pg.mean_degree == n
    assert pg.edge_count == n * 2 ** (n - 1)
    assert all(pg.vertex_degree(v) == n for v in range(pg.vertex_count))


SMALL_PRODUCTS = [
    [C4, K2],
    [P3, P3],
    [K2, K2, K2],
    [C4, C4],
    [build_named("complete", 4), P3],
    [build_named("cycle", 5), P4, K2],
    [from_edges(5, [(0, 1), (1, 2), (1, 3), (3, 4)]), build_named("cycle", 3)],
]


@pytest.mark.parametrize("factors", SMALL_PRODUCTS)
def test_neighbor_symmetry_and_edge_ids(factors):
    pg = ProductGraph(factors)
    ids = {}
    for v in range(pg.vertex_count):
        nb = pg.neighbors(v)
        assert len(nb) == pg.vertex_degree(v)
        assert pg.vertex_degree(v) == sum(g.degree(c) for g, c in zip(pg.factors, pg.decode(v)))
        for w, e in nb:
            assert (v, e) in pg.neighbors(w)
            assert pg.canonical_edge_id(v, w) == pg.canonical_edge_id(w, v) == e
            ids.setdefault(e, set()).add(frozenset((v, w)))
    assert all(len(s) == 1 for s in ids.values())
    assert sorted(ids) == list(range(pg.edge_count))
    for e, (pair,) in ids.items():
        assert set(pg.edge_endpoints(e)) == set(pair)


def test_h3_edge_ids_dense():
    pg = hypercube(3)
    ids = {pg.canonical_edge_id(u, w) for u in range(8) for w, _ in pg.neighbors(u)}
    assert ids == set(range(12))


def test_c4c4_edge_count():
    pg = ProductGraph([C4, C4])
    ids = {pg.canonical_edge_id(u, w) for u in range(16) for w, _ in pg.neighbors(u)}
    assert len(ids) == 32 == pg.edge_count


def test_non_adjacent_rejected():
    pg = ProductGraph([C4, K2])
    with pytest.raises(InvalidParameterError):
        pg.canonical_edge_id(0, 0)
    with pytest.raises(InvalidParameterError):
        pg.canonical_edge_id(pg.encode((0, 0)), pg.encode((2, 0)))
    with pytest.raises(InvalidParameterError):
        pg.canonical_edge_id(pg.encode((0, 0)), pg.encode((1, 1)))


@pytest.mark.parametrize("factors", SMALL_PRODUCTS)
def test_vectorised_endpoints(factors):
    import numpy as np

    pg = ProductGraph(factors)
    us, vs = pg.edge_endpoints_array(np.arange(pg.edge_count))
    assert [(int(a), int(b)) for a, b in zip(us, vs)] == [
        pg.edge_endpoints(e) for e in range(pg.edge_count)
    ]


@pytest.mark.parametrize("factors", SMALL_PRODUCTS)
def test_mean_degree_additivity(factors):
    pg = ProductGraph(factors)
    assert pg.mean_degree == sum(average_degree(g) for g in factors)
    g = pg.materialize()
    assert pg.mean_degree == Fraction(2 * g.edge_count, g.vertex_count)
    assert pg.mean_degree >= pg.n
    expected_edges = sum(f.edge_count * pg.vertex_count // f.vertex_count for f in factors)
    assert pg.edge_count == g.edge_count == expected_edges


def test_materialize_examples():
    g = ProductGraph([K2, K2]).materialize()
    assert g.vertex_count == 4 and g.edge_count == 4
    assert all(g.degree(v) == 2 for v in range(4)) and g.largest_component() == 4
    g = hypercube(3).materialize()
    assert (g.vertex_count, g.edge_count) == (8, 12)
    g = ProductGraph([P3, K2]).materialize()
    assert (g.vertex_count, g.edge_count) == (6, 7)


def test_materialize_cap():
    with pytest.raises(CapacityError):
        hypercube(17).materialize()


def test_factor_validation():
    with pytest.raises(InvalidParameterError):
        ProductGraph([from_edges(4, [(0, 1), (2, 3)])])
    with pytest.raises(InvalidParameterError):
        ProductGraph([C4], declared_C=1)
    with pytest.raises(InvalidParameterError):
        ProductGraph([])
    assert ProductGraph([C4, K2]).declared_C == 2


def test_large_product_constructible():
    pg = hypercube(40)
    assert pg.vertex_count == 2**40
    assert pg.decode(2**40 - 1) == (1,) * 40
