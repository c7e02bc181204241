import random
from fractions import Fraction

import pytest

from prodperc.errors import CapacityError, InvalidParameterError
from prodperc.graph_core import build_named, from_edges
from prodperc.isoperimetry import (
    balanced_cut_check,
    boundary_size,
    chung_tetali_bounds,
    decay_condition,
    isoperimetric_exact,
    verify_sandwich,
)
from prodperc.oracles import isoperimetric_brute, random_connected_graph
from prodperc.product import ProductGraph, hypercube

K2 = build_named("edge")
C4 = build_named("cycle", 4)
P4 = build_named("path", 4)


def test_examples():
    assert isoperimetric_exact(K2).value == 1
    assert isoperimetric_exact(P4).value == Fraction(1, 2)
    assert isoperimetric_exact(C4).value == 1


def test_result_invariants():
    r = isoperimetric_exact(P4)
    assert r.value == Fraction(r.boundary_size, len(r.witness))
    assert 1 <= len(r.witness) <= 2
    assert boundary_size(P4, r.witness) == r.boundary_size


def test_tie_break_smallest_mask():
    # every pair of adjacent vertices of C4 has boundary 2; {0,1} has the smallest mask
    assert isoperimetric_exact(C4).witness == (0, 1)
    assert isoperimetric_exact(K2).witness == (0,)


def test_matches_brute_force():
    rng = random.Random(11)
    for _ in range(60):
        g = random_connected_graph(rng, rng.randint(2, 11), extra=rng.random() * 0.5)
        r = isoperimetric_exact(g)
        assert r.value == isoperimetric_brute(g)
        assert boundary_size(g, r.witness) == r.boundary_size


def test_zero_iff_disconnected():
    rng = random.Random(5)
    for _ in range(30):
        n = rng.randint(2, 9)
        edges = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.3]
        g = from_edges(n, edges)
        assert (isoperimetric_exact(g).value == 0) == (g.largest_component() < n)


def test_capacity():
    with pytest.raises(CapacityError):
        isoperimetric_exact(build_named("cycle", 25))
    with pytest.raises(InvalidParameterError):
        isoperimetric_exact(from_edges(1, []))


def test_chung_tetali_examples():
    assert chung_tetali_bounds(hypercube(5)) == (Fraction(1, 2), 1)
    assert chung_tetali_bounds(ProductGraph([C4, P4])) == (Fraction(1, 4), Fraction(1, 2))
    g = build_named("path", 5)
    i = isoperimetric_exact(g).value
    assert chung_tetali_bounds(ProductGraph([g])) == (i / 2, i)


@pytest.mark.parametrize(
    "factors, exact",
    [([K2, K2], Fraction(1)), ([C4, C4], Fraction(1)), ([P4, K2], Fraction(1, 2))],
)
def test_verify_sandwich_examples(factors, exact):
    # exact values from the itertools brute force oracle
    rep = verify_sandwich(ProductGraph(factors))
    assert rep.ok and rep.exact.value == exact
    assert rep.lower <= rep.exact.value <= rep.upper


def test_decay_condition():
    pg = ProductGraph([P4, P4, P4, P4], declared_gamma=0.5)
    d = decay_condition(pg)
    assert d["holds"] and d["threshold"] == 0.5
    assert not decay_condition(ProductGraph([P4, P4, P4, P4], declared_gamma=0.4))["holds"]
    assert decay_condition(ProductGraph([P4])) is None


# -- balanced cuts --------------------------------------------------------


def test_balanced_cut_path():
    r = balanced_cut_check(build_named("path", 3), [[0], [1], [2]])
    assert r.criterion_holds and r.largest_component == 3


def test_balanced_cut_two_edges():
    r = balanced_cut_check(from_edges(4, [(0, 1), (2, 3)]), [[0, 1], [2, 3]])
    assert not r.criterion_holds and r.witness == (0,)


def test_balanced_cut_c6():
    r = balanced_cut_check(build_named("cycle", 6), [[v] for v in range(6)])
    assert r.criterion_holds and r.largest_component == 6


def test_balanced_cut_c6_brute_force():
    # enumerate all 2^6 cell subsets directly
    g = build_named("cycle", 6)
    for J in range(1, 63):
        S = {v for v in range(6) if J >> v & 1}
        if 2 <= len(S) <= 4:
            assert boundary_size(g, S) > 0


@pytest.mark.parametrize(
    "parts",
    [
        [[0, 2], [1], [3]],  # cell {0,2} not connected in P4
        [[0, 1], [1, 2], [3]],  # overlap
        [[0, 1], [2]],  # does not cover vertex 3
        [[0, 1], [], [2, 3]],
    ],
)
def test_balanced_cut_invalid(parts):
    with pytest.raises(InvalidParameterError):
        balanced_cut_check(P4, parts)
