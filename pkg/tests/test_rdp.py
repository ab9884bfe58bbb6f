import pytest

from ratgraph.central import central_fundamental_cycle, observed_multiplicity_sequence
from ratgraph.fundamental import is_rational
from ratgraph.graph import ResolutionGraph
from ratgraph.rdp import (
    A,
    A11,
    D2,
    E6,
    A2K2,
    IA,
    IIA,
    ConfigName,
    NotADE,
    NoWitness,
    classify_component,
    dynkin_type,
    equivalent_configuration,
    find_rdp_components,
    local_sequence,
    max_attachment_multiplicity_bound,
    predicted_multiplicity_sequence,
    role_symmetries,
    table_rows,
    witness_graph,
)

from conftest import chain, star

ROWS = table_rows()

# maximal rows whose full sequence no rational witness exhibits
UNWITNESSED = {
    (ConfigName(A, 6, 2), "L"),
    (ConfigName(A, 8, 2), "L"),
    (ConfigName(A, 10, 2), "L"),
    (ConfigName(IIA, 5, 2), "M"),
    (ConfigName(IIA, 7, 2), "M"),
    (ConfigName(IIA, 9, 2), "M"),
}


def test_name_validation():
    with pytest.raises(ValueError):
        ConfigName(A, 2, 2)
    assert ConfigName(A11, 0).roles == ("L", "R")
    assert str(ConfigName(A, 3)) == "A[3]^{1}"


def test_dynkin_types():
    assert dynkin_type(chain(3, 2, 2, 2, 2, 2), [1, 2, 3, 4, 5]) == "A5"
    assert dynkin_type(star(2, [[2], [2], [2], [2]]), range(5)) is None
    e6 = star(2, [[2], [2, 2], [2, 2]])
    assert dynkin_type(e6, range(6)) == "E6"
    assert dynkin_type(star(2, [[2], [2], [2]]), range(4)) == "D4"


def test_non_ade_component_is_rejected():
    with pytest.raises(NotADE):
        find_rdp_components(ResolutionGraph.build([3] + [2] * 5, [(0, 1), (1, 2), (1, 3), (1, 4), (1, 5)]))


def test_classify_a1_chain_between_two_vertices():
    g = chain(3, 2, 3)
    (comp,) = find_rdp_components(g)
    cl = classify_component(g, comp)
    assert cl.name == ConfigName(A11, 1)
    assert set(cl.roles.values()) == {0, 2}


def test_classify_single_attachment():
    g = chain(3, 2, 2, 2)
    (comp,) = find_rdp_components(g)
    assert classify_component(g, comp).name == ConfigName(A, 3, 1)
    g = ResolutionGraph.build([3, 2, 2, 2], [(0, 2), (1, 2), (2, 3)])
    (comp,) = find_rdp_components(g)
    assert classify_component(g, comp).name == ConfigName(A, 3, 2)


@pytest.mark.parametrize("cfg, role", ROWS, ids=[c.render(r) for c, r in ROWS])
def test_table_sequence_matches_forced_stages(cfg, role):
    pred = predicted_multiplicity_sequence(cfg, role)
    length = pred.observation_length()
    assert local_sequence(cfg, role, length) == pred.prefix(length)


def _witness_params():
    out = []
    for cfg, role in ROWS:
        marks = ()
        if (cfg, role) in UNWITNESSED:
            marks = pytest.mark.xfail(raises=NoWitness, strict=True, reason="no rational witness exists")
        out.append(pytest.param(cfg, role, marks=marks, id=cfg.render(role)))
    return out


@pytest.mark.parametrize("cfg, role", _witness_params())
def test_witness_exhibits_sequence(cfg, role):
    pred = predicted_multiplicity_sequence(cfg, role)
    w = witness_graph(cfg, role)
    assert is_rational(w.graph)
    trace = central_fundamental_cycle(w.graph, w.central)
    probe = w.roles["body"][0] if w.roles["body"] else w.roles["R" if role == "L" else "L"]
    seen = observed_multiplicity_sequence(trace, trace.component_of(probe))
    assert seen == pred.prefix(pred.observation_length())


def test_simple_sequences():
    a3 = predicted_multiplicity_sequence(ConfigName(A, 3, 1))
    assert a3.prefix(9) == [1, 1, 1, 0, 1, 1, 1, 0, 1]
    assert predicted_multiplicity_sequence(ConfigName(A, 4, 2)).render() == "(2,1,1,2,0)"
    assert predicted_multiplicity_sequence(ConfigName(E6, 6)).finite
    with pytest.raises(ValueError):
        predicted_multiplicity_sequence(ConfigName(A, 3, 1), "R")


def test_equivalence_of_a_chain_is_itself_or_blank():
    eq = equivalent_configuration(ConfigName(A, 3, 1))
    assert eq is None or eq == [(ConfigName(A, 3, 1), 1)]


def test_role_symmetries():
    assert role_symmetries(ConfigName(A11, 2)) == [{"L": "R", "R": "L"}]
    assert role_symmetries(ConfigName(IA, 5, 3)) == []
    assert role_symmetries(ConfigName(A2K2, 3, 3)) == [{"L": "R", "M": "M", "R": "L"}]


def test_bound_is_sequence_length():
    assert max_attachment_multiplicity_bound(ConfigName(A, 3, 1)) is None
    assert max_attachment_multiplicity_bound(ConfigName(A, 4, 2)) == 5
    d = ConfigName(D2, 5)
    for role in d.roles:
        b = max_attachment_multiplicity_bound(d, role)
        assert b is None or b == len(predicted_multiplicity_sequence(d, role).head)
