import random
from importlib import resources

import pytest
from hypothesis import given, settings

from ratgraph.graph import (
    GraphError,
    ParseError,
    ResolutionGraph,
    canonical_form,
    genus,
    intersect,
    parse_graph,
    parse_graphs,
    reduced,
    render_graph,
    self_intersection,
)

from conftest import chain, trees


def test_parse_small_chain():
    g = parse_graph("v 0 3\nv 1 2\ne 0 1\n")
    assert g.weights == (3, 2)
    assert g.edges == {(0, 1): 1}


@pytest.mark.parametrize(
    "text, where",
    [
        ("v 0 3\nv 0 2\n", "line 2"),
        ("v 0 3\ne 0 1\n", "line 2"),
        ("v 0 3\nx 1\n", "line 2"),
        ("v 0 three\n", "line 1"),
        ("v 0 3\nv 1 3\ne 0 1 0\n", "line 3"),
    ],
)
def test_parse_errors_carry_line_numbers(text, where):
    with pytest.raises(ParseError, match=where):
        parse_graph(text)


def test_disconnected_graph_rejected():
    with pytest.raises(GraphError, match="connected"):
        parse_graph("v 0 3\nv 1 3\n")


def test_parse_graphs_blocks_and_offsets():
    text = "# first\nv 0 3\n\n# second\nv 0 4\nv 1 3\ne 0 1\n"
    assert [g.size for g in parse_graphs(text)] == [1, 2]
    with pytest.raises(ParseError, match="line 5"):
        parse_graphs("v 0 3\n\nv 0 3\nv 1 3\ne 0 5\n")


def test_render_round_trip_on_bundled_files():
    data = resources.files("ratgraph").joinpath("data")
    for item in data.iterdir():
        if item.name.endswith(".graph"):
            for g in parse_graphs(item.read_text()):
                assert parse_graph(render_graph(g)) == g


def test_karras_file_has_forty_vertices():
    g = parse_graph(resources.files("ratgraph").joinpath("data", "karras.graph").read_text())
    assert g.size == 40


def test_intersection_numbers():
    g = chain(3, 2)
    e = reduced(g)
    assert self_intersection(g, e) == -3 - 2 + 2
    assert intersect(g, (1, 0), (0, 1)) == 1
    assert genus(g, e) == 0


def test_genus_of_single_curve():
    # p_a(E) = 1 + (E^2 + E.K)/2 with E.K = b - 2 + 2g
    g = ResolutionGraph.build([2], [], genera=[1])
    assert genus(g, (1,)) == 1


@given(trees())
def test_intersection_is_symmetric_bilinear(g):
    rng = random.Random(g.size)
    a = tuple(rng.randint(0, 3) for _ in range(g.size))
    b = tuple(rng.randint(0, 3) for _ in range(g.size))
    assert intersect(g, a, b) == intersect(g, b, a)
    s = tuple(x + y for x, y in zip(a, b))
    assert self_intersection(g, s) == self_intersection(g, a) + 2 * intersect(g, a, b) + self_intersection(g, b)


@settings(max_examples=200)
@given(trees())
def test_canonical_form_ignores_vertex_order(g):
    rng = random.Random(g.size * 7 + sum(g.weights))
    perm = list(range(g.size))
    rng.shuffle(perm)
    h = ResolutionGraph.build([g.weights[perm.index(i)] for i in range(g.size)],
                              [(perm[i], perm[j]) for i, j in g.edges])
    assert canonical_form(h) == canonical_form(g)


def test_canonical_form_sees_weights():
    assert canonical_form(chain(3, 2, 2)) != canonical_form(chain(2, 3, 2))
    assert canonical_form(chain(3, 2, 2)) == canonical_form(chain(2, 2, 3))


def test_canonical_form_rejects_cycles():
    tri = ResolutionGraph.build([3, 3, 3], [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(GraphError):
        canonical_form(tri)


def test_genus_of_star_with_four_steep_legs():
    g = ResolutionGraph.build([2, 3, 3, 3, 3], [(0, 1), (0, 2), (0, 3), (0, 4)])
    z = (2, 1, 1, 1, 1)
    assert genus(g, z) == 1
    # additivity along E0 + (E0 + legs)
    first = (1, 0, 0, 0, 0)
    rest = (1, 1, 1, 1, 1)
    assert genus(g, first) + genus(g, rest) + intersect(g, first, rest) - 1 == 1


@given(trees())
def test_genus_is_additive(g):
    rng = random.Random(g.size + 7)
    a = tuple(rng.randint(0, 3) for _ in range(g.size))
    b = tuple(rng.randint(0, 3) for _ in range(g.size))
    s = tuple(x + y for x, y in zip(a, b))
    assert genus(g, s) == genus(g, a) + genus(g, b) + intersect(g, a, b) - 1
