import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ratgraph.central import (
    central_fundamental_cycle,
    forced_stages,
    observed_multiplicity_sequence,
    stage_by_sequence,
)
from ratgraph.classify import central_multiplicity_from_sequences
from ratgraph.fundamental import NotRational, fc
from ratgraph.graph import GraphError

from conftest import chain, rational_trees, star


@settings(deadline=None)
@given(rational_trees(), st.data())
def test_stages_reach_fc(g, data):
    v = data.draw(st.integers(0, g.size - 1))
    trace = central_fundamental_cycle(g, v)
    z = fc(g)
    assert trace.final == z
    assert len(trace.stages) == z[v]
    assert [s.total for s in trace.stages] == stage_by_sequence(g, v)


@settings(deadline=None)
@given(rational_trees(), st.data())
def test_stage_sum_rule_predicts_central_coefficient(g, data):
    v = data.draw(st.integers(0, g.size - 1))
    trace = central_fundamental_cycle(g, v)
    b0 = g.weights[v]
    k = len(trace.stages)
    seqs = [
        observed_multiplicity_sequence(forced_stages(g, v, k + 2), c)
        for c in range(len(trace.components))
    ]
    assert central_multiplicity_from_sequences(b0, seqs) == k


def test_e6_around_its_branch_vertex():
    g = star(2, [[2], [2, 2], [2, 2]])
    trace = central_fundamental_cycle(g, 0)
    assert [s.m for s in trace.stages] == [(1, 1, 1), (0, 1, 1), (1, 0, 0)]
    assert trace.final == (3, 2, 2, 1, 2, 1)
    assert "stage 1" in trace.render()


def test_chain_sequence():
    # an A3 chain seen from its end gives three ones, then zero
    trace = forced_stages(chain(3, 2, 2, 2), 0, 4)
    assert observed_multiplicity_sequence(trace, 0) == [1, 1, 1, 0]
    assert trace.final == (4, 3, 2, 1)


def test_stage_sum_arithmetic():
    assert central_multiplicity_from_sequences(3, [[1, 1], [1, 1], [1, 1]]) == 1
    assert central_multiplicity_from_sequences(2, [[1, 1, 1], [1, 1, 0]]) == 1
    assert central_multiplicity_from_sequences(3, [[2, 1], [1, 1], [1, 0]]) == 2
    with pytest.raises(ValueError):
        central_multiplicity_from_sequences(3, [[2, 1], [1, 1], [1, 1]])
    assert central_multiplicity_from_sequences(3, [[2, 2], [2, 2]]) is None


def test_errors():
    with pytest.raises(NotRational):
        central_fundamental_cycle(star(2, [[3], [3], [3], [3]]), 0)
    trace = central_fundamental_cycle(chain(2, 2), 0)
    with pytest.raises(GraphError):
        observed_multiplicity_sequence(trace, 3)
    with pytest.raises(GraphError):
        trace.component_of(0)
