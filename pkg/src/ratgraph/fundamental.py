"""Fundamental cycles, Laufer's rationality test and related operations."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence, Union

from .graph import (
    Cycle,
    GraphError,
    ResolutionGraph,
    VertexData,
    format_cycle,
    reduced,
    row_value,
    self_intersection,
    valency,
)
from .lattice import check_negative_definite


class NotNegativeDefinite(GraphError):
    pass


class NotRational(GraphError):
    pass


class BoxExhausted(Exception):
    """No anti-nef cycle has all coefficients inside the search box."""


@dataclass(frozen=True)
class Step:
    vertex: int
    cycle: Cycle
    trigger: int


@dataclass(frozen=True)
class ComputationTrace:
    start: Cycle
    steps: tuple[Step, ...]
    result: Cycle
    rationality_violation: int | None = None

    def render(self) -> str:
        lines = [f"start -> {format_cycle(self.start)}"]
        lines += [f"+{s.vertex} -> {format_cycle(s.cycle)}" for s in self.steps]
        return "\n".join(lines)


def run_sequence(
    graph: ResolutionGraph,
    start: Sequence[int],
    allowed: Iterable[int] | None = None,
) -> tuple[Cycle, list[Step]]:
    """Laufer computation sequence from ``start``.

    Repeatedly adds the lowest-index vertex in ``allowed`` (default: all)
    meeting the current cycle positively.  Vertices outside ``allowed``
    are never added and their row values are ignored.
    """
    verts = sorted(set(range(graph.size)) if allowed is None else set(allowed))
    z = list(start)
    steps: list[Step] = []
    weights = [v.weight for v in graph.vertices]
    nbrs = [[(j, graph.edge_weight(i, j)) for j in graph.neighbors(i)] for i in range(graph.size)]

    def rv(i):
        return -weights[i] * z[i] + sum(w * z[j] for j, w in nbrs[i])

    # bound on the number of steps guards against non-definite input
    limit = 10_000_000
    while True:
        for i in verts:
            t = rv(i)
            if t > 0:
                z[i] += 1
                steps.append(Step(i, tuple(z), t))
                break
        else:
            return tuple(z), steps
        if len(steps) > limit:
            raise NotNegativeDefinite("computation sequence does not terminate")


def fundamental_cycle(graph: ResolutionGraph) -> tuple[Cycle, ComputationTrace]:
    rep = check_negative_definite(graph)
    if not rep:
        raise NotNegativeDefinite(
            f"intersection form is not negative definite (leading minor {rep.failing_minor})"
        )
    start = reduced(graph)
    z, steps = run_sequence(graph, start)
    violation = next((k for k, s in enumerate(steps) if s.trigger > 1), None)
    return z, ComputationTrace(start, tuple(steps), z, violation)


def fc(graph: ResolutionGraph) -> Cycle:
    """Just the fundamental cycle."""
    return fundamental_cycle(graph)[0]


def is_anti_nef(graph: ResolutionGraph, a: Sequence[int]) -> bool:
    return all(row_value(graph, a, i) <= 0 for i in range(graph.size))


# ---------------------------------------------------------------------------
# independent oracle


def brute_force_fundamental_cycle(graph: ResolutionGraph, box: int) -> Cycle:
    """Infimum of all anti-nef cycles with coefficients in ``1..box``.

    On trees the search over the box is factored along the tree: for a
    vertex ``v`` hanging below ``p`` the only coupling with the rest of the
    graph is through ``a_p``, so the least feasible value of each subtree
    is tabulated for every value of its parent.  Other graphs are
    enumerated directly.  Raises :class:`BoxExhausted` when no anti-nef
    cycle fits in the box.
    """
    if box < 1:
        raise ValueError("box must be positive")
    if not check_negative_definite(graph):
        raise NotNegativeDefinite("oracle needs a negative definite graph")
    if graph.is_tree():
        return _tree_box_infimum(graph, box)
    return enumerate_box_infimum(graph, box)


def enumerate_box_infimum(graph: ResolutionGraph, box: int) -> Cycle:
    """Literal enumeration of ``{1..box}^r``; only for small graphs."""
    best = None
    for a in itertools.product(range(1, box + 1), repeat=graph.size):
        if is_anti_nef(graph, a):
            best = a if best is None else tuple(map(min, best, a))
    if best is None:
        raise BoxExhausted(f"no anti-nef cycle with coefficients <= {box}")
    return best


def _tree_box_infimum(graph: ResolutionGraph, box: int) -> Cycle:
    r = graph.size
    b = graph.weights
    values = range(1, box + 1)
    memo: dict[tuple[int, int], dict[int, int | None]] = {}

    def least(v: int, parent: int) -> dict[int, int | None]:
        # least[x] = smallest a_v in the box such that the subtree at v
        # (away from parent) admits a feasible assignment when a_parent = x
        key = (v, parent)
        if key in memo:
            return memo[key]
        children = [u for u in graph.neighbors(v) if u != parent]
        tables = [least(u, v) for u in children]
        w_par = graph.edge_weight(v, parent)
        need = {}
        for y in values:
            s = 0
            for u, t in zip(children, tables):
                m = t[y]
                if m is None:
                    s = None
                    break
                s += graph.edge_weight(u, v) * m
            need[y] = s
        out: dict[int, int | None] = {}
        for x in values:
            out[x] = next(
                (y for y in values if need[y] is not None and b[v] * y >= w_par * x + need[y]),
                None,
            )
        memo[key] = out
        return out

    result = []
    for i in range(r):
        tables = [(u, least(u, i)) for u in graph.neighbors(i)]
        found = None
        for x in values:
            s = 0
            for u, t in tables:
                m = t[x]
                if m is None:
                    s = None
                    break
                s += graph.edge_weight(u, i) * m
            if s is not None and b[i] * x >= s:
                found = x
                break
        if found is None:
            raise BoxExhausted(f"no anti-nef cycle with coefficients <= {box}")
        result.append(found)
    return tuple(result)


# ---------------------------------------------------------------------------
# rationality


class Reason(Enum):
    GENUS_WEIGHT = "genus weight nonzero"
    NOT_NEGATIVE_DEFINITE = "not negative definite"
    NOT_SIMPLE_TREE = "not a tree with simple edges"
    LAUFER_VIOLATION = "Laufer violation"
    PASSES = "passes"


@dataclass(frozen=True)
class RationalityReport:
    is_rational: bool
    reason: Reason
    step: int | None = None
    detail: str = ""

    def __bool__(self):
        return self.is_rational

    def describe(self) -> str:
        if self.is_rational:
            return "rational"
        text = f"not rational: {self.reason.value}"
        if self.step is not None:
            text += f" at step {self.step}"
        if self.detail:
            text += f" ({self.detail})"
        return text


def is_rational(graph: ResolutionGraph) -> RationalityReport:
    bad = [i for i, v in enumerate(graph.vertices) if v.genus]
    if bad:
        return RationalityReport(False, Reason.GENUS_WEIGHT, detail=f"vertex {bad[0]}")
    rep = check_negative_definite(graph)
    if not rep:
        return RationalityReport(
            False, Reason.NOT_NEGATIVE_DEFINITE, detail=f"leading minor {rep.failing_minor}"
        )
    if not (graph.is_tree() and graph.is_simple()):
        # then p_a(E) > 0 already at the start of the sequence
        return RationalityReport(False, Reason.NOT_SIMPLE_TREE)
    _, trace = fundamental_cycle(graph)
    if trace.rationality_violation is not None:
        k = trace.rationality_violation
        report = RationalityReport(
            False,
            Reason.LAUFER_VIOLATION,
            step=k,
            detail=f"vertex {trace.steps[k].vertex} meets Z_k with {trace.steps[k].trigger}",
        )
    else:
        report = RationalityReport(True, Reason.PASSES)
    return report


def degree(graph: ResolutionGraph) -> int:
    """``-Z^2`` of a rational graph."""
    rep = is_rational(graph)
    if not rep:
        raise NotRational(rep.describe())
    return -self_intersection(graph, fc(graph))


# ---------------------------------------------------------------------------
# blow-ups


@dataclass(frozen=True)
class FreePoint:
    vertex: int


@dataclass(frozen=True)
class EdgePoint:
    i: int
    j: int


Site = Union[FreePoint, EdgePoint]


def blow_up(graph: ResolutionGraph, site: Site) -> tuple[ResolutionGraph, int]:
    """Blow up a point; the new (-1)-curve gets the next free index."""
    r = graph.size
    weights = list(graph.weights)
    edges = dict(graph.edges)
    if isinstance(site, FreePoint):
        graph._check_index(site.vertex)
        weights[site.vertex] += 1
        edges[(site.vertex, r)] = 1
    elif isinstance(site, EdgePoint):
        key = (min(site.i, site.j), max(site.i, site.j))
        if graph.edges.get(key) != 1:
            raise GraphError(f"no simple edge {key} to blow up")
        del edges[key]
        weights[site.i] += 1
        weights[site.j] += 1
        edges[(site.i, r)] = 1
        edges[(site.j, r)] = 1
    else:
        raise GraphError(f"invalid blow-up site {site!r}")
    verts = tuple(
        VertexData(b, v.genus, v.label) for b, v in zip(weights, graph.vertices)
    ) + (VertexData(1),)
    return ResolutionGraph(verts, edges), r


def pull_back(
    old: ResolutionGraph, new: ResolutionGraph, site: Site, a: Sequence[int]
) -> Cycle:
    if blow_up(old, site)[0] != new:
        raise GraphError("graph is not the blow-up of the given graph at this site")
    if len(a) != old.size:
        raise GraphError("cycle length does not match graph")
    if isinstance(site, FreePoint):
        mult = a[site.vertex]
    else:
        mult = a[site.i] + a[site.j]
    return tuple(a) + (mult,)


def steepen(graph: ResolutionGraph, deltas: Mapping[int, int]) -> ResolutionGraph:
    """Increase ``b_i`` by ``deltas[i]``."""
    weights = list(graph.weights)
    for i, d in deltas.items():
        graph._check_index(i)
        if d < 1:
            raise GraphError(f"steepening amount must be positive, got {d}")
        weights[i] += d
    return graph.with_weights(weights)


def complexity(graph: ResolutionGraph) -> int:
    return sum(
        max(0, valency(graph, i) - 2) for i in range(graph.size) if valency(graph, i) >= 3
    )
