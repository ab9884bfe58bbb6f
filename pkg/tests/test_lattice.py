import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings

from ratgraph.graph import intersect
from ratgraph.lattice import (
    SingularMatrixError,
    canonical_cycle,
    canonical_degree,
    canonical_degree_via_k,
    check_negative_definite,
    leading_minors,
    solve,
)

from conftest import chain, rational_trees, star, trees


def naive_det(m):
    n = len(m)
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        prod = 1
        for i in range(n):
            prod *= m[i][perm[i]]
        total += (-1) ** inv * prod
    return total


@pytest.mark.parametrize(
    "graph, det",
    [
        (chain(2, 2, 2, 2), 5),
        (star(2, [[2], [2], [2, 2]]), 4),  # D5
        (star(2, [[2], [2, 2], [2, 2]]), 3),  # E6
        (star(2, [[2], [2, 2], [2, 2, 2]]), 2),  # E7
        (star(2, [[2], [2, 2], [2, 2, 2, 2]]), 1),  # E8
    ],
)
def test_ade_determinants(graph, det):
    n = graph.size
    assert abs(leading_minors(graph.matrix())[-1]) == det
    assert check_negative_definite(graph)
    assert (-1) ** n * naive_det(graph.matrix()) == det


def test_four_legged_minus_two_star_is_not_definite():
    rep = check_negative_definite(star(2, [[2], [2], [2], [2]]))
    assert not rep
    assert rep.failing_minor == 5


@given(trees(max_size=6))
def test_minors_match_naive_determinants(g):
    m = g.matrix()
    minors = leading_minors(m)
    for k, d in enumerate(minors, 1):
        assert d == naive_det([row[:k] for row in m[:k]])


def test_solve_exact():
    assert solve([[2, 1], [1, 3]], [3, 5]) == [Fraction(4, 5), Fraction(7, 5)]
    with pytest.raises(SingularMatrixError):
        solve([[1, 2], [2, 4]], [1, 1])


def test_canonical_cycle_of_a_single_curve():
    assert canonical_cycle(chain(3)) == (Fraction(-1, 3),)
    assert canonical_cycle(chain(2, 2)) == (0, 0)


@given(rational_trees())
def test_canonical_degree_two_routes(g):
    z = tuple(1 for _ in range(g.size))
    assert canonical_degree(g, z) == canonical_degree_via_k(g, z)
    k = canonical_cycle(g)
    for i, v in enumerate(g.vertices):
        e = tuple(int(j == i) for j in range(g.size))
        assert intersect(g, e, e) + intersect(g, e, k) == -2


def sign_check(g, bound=5):
    """Negative definite iff A.A < 0 for every nonzero A in the box."""
    for a in itertools.product(range(-bound, bound + 1), repeat=g.size):
        if any(a) and intersect(g, a, a) >= 0:
            return False
    return True


@settings(max_examples=40, deadline=None)
@given(trees(max_size=4, max_weight=3))
def test_minors_agree_with_exhaustive_sign_check(g):
    assert bool(check_negative_definite(g)) == sign_check(g)


@pytest.mark.parametrize(
    "graph, definite",
    [(star(2, [[2], [2], [2], [2]]), False), (star(2, [[2], [2], [2, 2]]), True)],
)
def test_sign_check_on_five_vertices(graph, definite):
    assert bool(check_negative_definite(graph)) == sign_check(graph) == definite


def test_e8_cycle_squares_to_minus_two():
    g = star(2, [[2], [2, 2], [2, 2, 2, 2]])
    z = (6, 3, 4, 2, 5, 4, 3, 2)
    assert intersect(g, z, z) == -2
