import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ratgraph.fundamental import (
    BoxExhausted,
    EdgePoint,
    FreePoint,
    NotNegativeDefinite,
    Reason,
    blow_up,
    brute_force_fundamental_cycle,
    complexity,
    degree,
    enumerate_box_infimum,
    fc,
    fundamental_cycle,
    is_anti_nef,
    is_rational,
    pull_back,
    steepen,
)
from ratgraph.graph import GraphError, ResolutionGraph

from conftest import chain, rational_trees, star, trees


@pytest.mark.parametrize(
    "graph, z",
    [
        (chain(2, 2, 2), (1, 1, 1)),
        (star(2, [[2], [2], [2, 2]]), (2, 1, 1, 2, 1)),  # D5
        (star(2, [[2], [2, 2], [2, 2]]), (3, 2, 2, 1, 2, 1)),  # E6
        (star(2, [[2], [2, 2], [2, 2, 2, 2]]), (6, 3, 4, 2, 5, 4, 3, 2)),  # E8
        (star(2, [[2], [2], [2]]), (2, 1, 1, 1)),  # D4
        (star(3, [[2], [2], [2]]), (1, 1, 1, 1)),
    ],
)
def test_known_cycles(graph, z):
    assert fc(graph) == z


def test_trace_reaches_result():
    g = star(2, [[2], [2, 2], [2, 2]])
    z, trace = fundamental_cycle(g)
    assert trace.start == (1,) * 6
    assert trace.steps[-1].cycle == z
    assert len(trace.steps) == sum(z) - 6
    assert trace.rationality_violation is None


def test_not_definite_raises():
    with pytest.raises(NotNegativeDefinite):
        fc(star(2, [[2], [2], [2], [2]]))


@settings(max_examples=60, deadline=None)
@given(trees(max_size=6, max_weight=4))
def test_fc_matches_box_oracle(g):
    if not is_rational(g) and not fc_safe(g):
        return
    z = fc(g)
    assert brute_force_fundamental_cycle(g, max(z)) == z
    if max(z) > 1:
        with pytest.raises(BoxExhausted):
            brute_force_fundamental_cycle(g, max(z) - 1)


def fc_safe(g):
    try:
        fc(g)
        return True
    except NotNegativeDefinite:
        return False


@settings(max_examples=40, deadline=None)
@given(trees(max_size=4, max_weight=4))
def test_factored_oracle_matches_enumeration(g):
    if not fc_safe(g):
        return
    for box in (1, 2, 3):
        try:
            fast = brute_force_fundamental_cycle(g, box)
        except BoxExhausted:
            with pytest.raises(BoxExhausted):
                enumerate_box_infimum(g, box)
        else:
            assert enumerate_box_infimum(g, box) == fast


@given(rational_trees())
def test_fc_is_anti_nef_and_minimal(g):
    z = fc(g)
    assert is_anti_nef(g, z)
    # lowering any coefficient breaks anti-nefness or positivity
    for i in range(g.size):
        lower = list(z)
        lower[i] -= 1
        assert lower[i] == 0 or not is_anti_nef(g, lower)


def test_rationality_reasons():
    assert is_rational(chain(2, 3)).reason is Reason.PASSES
    g1 = ResolutionGraph.build([2], [], genera=[1])
    assert is_rational(g1).reason is Reason.GENUS_WEIGHT
    assert is_rational(star(2, [[2], [2], [2], [2]])).reason is Reason.NOT_NEGATIVE_DEFINITE
    tri = ResolutionGraph.build([3, 3, 3], [(0, 1), (1, 2), (0, 2)])
    assert is_rational(tri).reason is Reason.NOT_SIMPLE_TREE
    rep = is_rational(star(2, [[3], [3], [3], [3]]))
    assert rep.reason is Reason.LAUFER_VIOLATION
    assert "step" in rep.describe()


def test_degree():
    assert degree(chain(3)) == 3
    assert degree(chain(2, 2, 2)) == 2
    with pytest.raises(GraphError):
        degree(star(2, [[3], [3], [3], [3]]))


@given(rational_trees(max_size=7), st.data())
def test_blow_up_pulls_back_fc(g, data):
    z = fc(g)
    i = data.draw(st.integers(0, g.size - 1))
    new, e = blow_up(g, FreePoint(i))
    assert e == g.size
    assert fc(new) == pull_back(g, new, FreePoint(i), z)
    if g.edges:
        a, b = data.draw(st.sampled_from(sorted(g.edges)))
        new, _ = blow_up(g, EdgePoint(a, b))
        assert fc(new) == pull_back(g, new, EdgePoint(a, b), z)


@given(rational_trees(max_size=7), st.data())
def test_steepening_keeps_rationality(g, data):
    i = data.draw(st.integers(0, g.size - 1))
    h = steepen(g, {i: data.draw(st.integers(1, 3))})
    assert is_rational(h)
    assert all(a <= b for a, b in zip(fc(h), fc(g)))


def test_steepen_rejects_nonpositive():
    with pytest.raises(GraphError):
        steepen(chain(2), {0: 0})


def test_complexity():
    assert complexity(chain(2, 2)) == 0
    assert complexity(star(2, [[2], [2], [2]])) == 1
    assert complexity(star(2, [[2], [2], [2], [2]])) == 2
