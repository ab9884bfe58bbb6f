import pytest
from hypothesis import assume, given

from ratgraph.acceptance import load_fixture
from ratgraph.fundamental import NotRational, degree, is_rational
from ratgraph.graph import GraphError, canonical_form, parse_graph
from ratgraph.model import (
    CanonicalModelGraph,
    almost_reduced_check,
    canonical_degree_of_model,
    canonical_model,
    minimal_tree,
    model_dot,
    resolution_dot,
    valency_criterion,
)

from conftest import chain, rational_trees, star


def test_karras_model_is_a_chain_of_five():
    g = parse_graph(load_fixture("karras.graph"))
    model = canonical_model(g)
    assert len(model.vertices) == 5
    assert len(model.edges) == 4 and not model.t_joints
    assert canonical_degree_of_model(model) + 2 == degree(g)


def test_t_joint_from_a_d_configuration():
    # one (-2) meeting three (-3)'s
    g = star(2, [[3], [3], [3]])
    model = canonical_model(g)
    assert model.t_joints == ((0, 1, 2),)
    assert model.rdp_records == ("A1",)
    assert canonical_form(minimal_tree(model)) == canonical_form(g)


@given(rational_trees())
def test_degree_formula(g):
    assume(any(b > 2 for b in g.weights))
    model = canonical_model(g)
    assert canonical_degree_of_model(model) + 2 == degree(g)


@given(rational_trees())
def test_minimal_tree_round_trip(g):
    assume(any(b > 2 for b in g.weights))
    model = canonical_model(g)
    again = canonical_model(minimal_tree(model))
    assert again.same_hypertree(model)


@given(rational_trees())
def test_valency_criterion_is_sufficient(g):
    if valency_criterion(g):
        assert almost_reduced_check(g)


def test_model_validation():
    with pytest.raises(GraphError):
        CanonicalModelGraph(((3, 1), (3, 1), (3, 1)), ((0, 1), (1, 2), (0, 2)), (), ())
    with pytest.raises(GraphError):
        CanonicalModelGraph(((3, 0),), (), (), ())
    with pytest.raises(NotRational):
        canonical_model(star(2, [[3], [3], [3], [3]]))


def test_dot_output():
    g = chain(3, 2, 3)
    assert "digraph" not in resolution_dot(g) and "--" in resolution_dot(g, (1, 1, 1))
    assert model_dot(canonical_model(g)).startswith("graph")
    assert is_rational(g)
