import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ratgraph.acceptance import small_trees
from ratgraph.classify import (
    EnumerationCaps,
    central_multiplicity_from_sequences,
    enumerate_almost_reduced,
    enumerate_minimal_representatives,
    enumerate_single_nonreduced,
    printed_degree8_chains,
    search_single_vertex,
    single_vertex_types,
    star_graph,
    verify_chain_of_three,
    verify_degree6_single_mult4,
    verify_degree6_two_threes,
    verify_degree8_t_joint,
    verify_printed_degree8,
)
from ratgraph.fundamental import complexity, fc, is_rational
from ratgraph.graph import canonical_form, components_without, self_intersection
from ratgraph.rdp import A, ConfigName, local_sequence


def degree_of(g):
    return -self_intersection(g, fc(g))


@pytest.mark.parametrize("m, count", [(3, 1), (4, 2), (5, 4), (6, 9), (7, 20)])
def test_minimal_representative_counts(m, count):
    graphs = enumerate_minimal_representatives(m)
    assert len(graphs) == count
    assert len({canonical_form(g) for g in graphs}) == count
    for g in graphs:
        assert is_rational(g) and degree_of(g) == m
        assert complexity(g) <= m - 2


def _brute_kind(g, max_chain):
    """("ar", m) or ("snr", m) for graphs either enumerator should emit."""
    if not is_rational(g):
        return None
    z = fc(g)
    big = [i for i, b in enumerate(g.weights) if b > 2]
    if not big:
        return None
    comps = components_without(g, big)
    if any(len(c) > max_chain for c in comps):
        return None
    nonred = {i for i in big if z[i] > 1}
    if not nonred:
        return "ar", degree_of(g)
    if any(i in nonred and j in nonred for i, j in g.edges):
        return None
    for c in comps:
        if len({u for v in c for u in g.neighbors(v) if u in nonred}) > 1:
            return None
    return "snr", degree_of(g)


@pytest.fixture(scope="module")
def brute_small():
    # weights above the degree cannot occur when m <= 4
    out = {}
    for g in small_trees(6, (2, 3, 4)):
        kind = _brute_kind(g, 4)
        if kind:
            out.setdefault(kind, set()).add(canonical_form(g))
    return out


@pytest.mark.parametrize("m", [3, 4])
def test_enumerators_against_brute_force(m, brute_small):
    ar = list(enumerate_almost_reduced(m))
    sn = list(enumerate_single_nonreduced(m))
    for graphs, kind in ((ar, "ar"), (sn, "snr")):
        forms = [canonical_form(g) for g in graphs]
        assert len(set(forms)) == len(forms)
        small = {f for g, f in zip(graphs, forms) if g.size <= 6}
        assert small == brute_small.get((kind, m), set())
        for g in graphs:
            assert is_rational(g) and degree_of(g) == m
            assert complexity(g) <= m - 2
            z = fc(g)
            reduced = all(z[i] == 1 for i, b in enumerate(g.weights) if b > 2)
            assert reduced == (kind == "ar")


def test_degree_five_counts_are_stable():
    assert sum(1 for _ in enumerate_almost_reduced(5)) == 791
    assert sum(1 for _ in enumerate_single_nonreduced(5)) == 72


def test_enumerator_rejects_low_degree():
    with pytest.raises(ValueError):
        next(enumerate_almost_reduced(2))
    with pytest.raises(ValueError):
        EnumerationCaps(max_chain=0)


TYPES = single_vertex_types(6, 4)
SEQS = {t: local_sequence(t, "L", 16) for t in TYPES}


@settings(max_examples=150, deadline=None)
@given(st.lists(st.sampled_from(TYPES), min_size=1, max_size=5), st.integers(3, 8))
def test_stage_sum_arithmetic_matches_full_cycle(combo, b):
    g = star_graph(b, combo)
    z0 = central_multiplicity_from_sequences(b, [SEQS[t] for t in combo])
    if z0 is None:
        assert not is_rational(g)
    else:
        assert is_rational(g) and fc(g)[0] == z0


def test_single_vertex_maximum_is_six():
    res = search_single_vertex()
    assert res.maximum == 6
    for b, combo in res.witnesses[6]:
        assert fc(star_graph(b, combo))[0] == 6


@pytest.mark.parametrize(
    "b, combo, z0",
    [
        (3, [ConfigName(A, 4, 2)], 1),
        (3, [ConfigName(A, 4, 2), ConfigName(A, 3, 1), ConfigName(A, 3, 1)], 4),
        (3, [ConfigName(A, 1, 1), ConfigName(A, 10, 3)], 4),
    ],
)
def test_listed_multiplicity_four_examples(b, combo, z0):
    g = star_graph(b, combo)
    assert is_rational(g)
    assert fc(g)[0] == z0
    assert central_multiplicity_from_sequences(b, [local_sequence(c, "L", 12) for c in combo]) == z0


def test_degree6_two_threes_table():
    check = verify_degree6_two_threes()
    assert check.ok, check.render()


def test_degree6_single_mult4_list():
    check = verify_degree6_single_mult4()
    assert check.ok, check.render()


def test_degree8_t_joint_table():
    check = verify_degree8_t_joint()
    assert check.ok, check.render()


def test_chain_of_three_sequences():
    search = verify_chain_of_three(EnumerationCaps(max_chain=8))
    assert search.sequences.ok, search.sequences.render()


def test_printed_degree8_graphs():
    assert verify_printed_degree8().ok
    for g in printed_degree8_chains().values():
        z = fc(g)
        assert degree_of(g) == 8
        assert [z[i] for i, b in enumerate(g.weights) if b == 3] == [2, 2, 2]


def test_complexity_on_random_steepened_trees():
    from ratgraph.acceptance import steepened_rational_tree

    rng = random.Random(5)
    for _ in range(300):
        g = steepened_rational_tree(rng, rng.randint(1, 12))
        m = degree_of(g)
        if m >= 3:
            assert complexity(g) <= m - 2
