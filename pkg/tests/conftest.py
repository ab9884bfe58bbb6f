import random

from hypothesis import strategies as st

from ratgraph.graph import ResolutionGraph
from ratgraph.fundamental import is_rational, steepen


@st.composite
def trees(draw, max_size=9, max_weight=5):
    n = draw(st.integers(1, max_size))
    weights = draw(st.lists(st.integers(2, max_weight), min_size=n, max_size=n))
    parents = [draw(st.integers(0, v - 1)) for v in range(1, n)]
    return ResolutionGraph.build(weights, [(p, v) for v, p in enumerate(parents, 1)])


@st.composite
def rational_trees(draw, max_size=9):
    g = draw(trees(max_size, 4))
    rng = random.Random(draw(st.integers(0, 2**32)))
    while not is_rational(g):
        g = steepen(g, {rng.randrange(g.size): 1})
    return g


def chain(*weights):
    return ResolutionGraph.build(list(weights), [(i, i + 1) for i in range(len(weights) - 1)])


def star(center, legs):
    weights = [center]
    edges = []
    for leg in legs:
        prev = 0
        for b in leg:
            weights.append(b)
            edges.append((prev, len(weights) - 1))
            prev = len(weights) - 1
    return ResolutionGraph.build(weights, edges)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import HEADLINES
    except ImportError:
        return
    if HEADLINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(HEADLINES):
            terminalreporter.write_line(HEADLINES[n])
