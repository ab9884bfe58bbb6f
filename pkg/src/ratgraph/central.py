"""Computing the fundamental cycle stage by stage around a central vertex.

Each stage raises the coefficient of the central vertex ``E0`` by one and
adds, for every component ``G_i`` of the graph minus ``E0``, a cycle
``Y_i`` supported on ``G_i``.  The coefficients of the ``Y_i`` next to
``E0`` form the multiplicity sequence of that component.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fundamental import NotRational, fc, is_rational, run_sequence
from .graph import (
    Cycle,
    GraphError,
    ResolutionGraph,
    components_without,
    row_value,
)


@dataclass(frozen=True)
class StageRecord:
    s: int
    contributions: tuple[Cycle, ...]
    m: tuple[int, ...]
    total: Cycle


@dataclass(frozen=True)
class CentralTrace:
    central: int
    components: tuple[tuple[int, ...], ...]
    stages: tuple[StageRecord, ...]
    final: Cycle

    def component_of(self, v: int) -> int:
        for k, comp in enumerate(self.components):
            if v in comp:
                return k
        raise GraphError(f"vertex {v} is the central vertex or absent")

    def render(self) -> str:
        out = []
        for st in self.stages:
            coeffs = " ".join(
                f"[{c}]" if i == self.central else str(c) for i, c in enumerate(st.total)
            )
            ms = ", ".join(str(x) for x in st.m)
            out.append(f"stage {st.s}: {coeffs}   m = ({ms})")
        return "\n".join(out)


def _fc_on(graph: ResolutionGraph, keep: list[int]) -> dict[int, int]:
    sub, index = graph.subgraph(keep)
    z = fc(sub)
    return {v: z[k] for k, v in enumerate(index)}


def _zero_part(graph, z, comp, central) -> list[int]:
    """Connected piece of ``{E in comp : Z.E = 0}`` touching the central vertex."""
    zero = {v for v in comp if row_value(graph, z, v) == 0}
    seeds = [v for v in graph.neighbors(central) if v in zero]
    seen = set(seeds)
    stack = list(seeds)
    while stack:
        v = stack.pop()
        for u in graph.neighbors(v):
            if u in zero and u not in seen:
                seen.add(u)
                stack.append(u)
    return sorted(seen)


def central_fundamental_cycle(graph: ResolutionGraph, central: int) -> CentralTrace:
    graph._check_index(central)
    rep = is_rational(graph)
    if not rep:
        raise NotRational(rep.describe())
    comps = components_without(graph, [central])
    r = graph.size
    adjacent = [
        [v for v in graph.neighbors(central) if v in set(comp)] for comp in comps
    ]
    z = [0] * r
    stages: list[StageRecord] = []
    s = 0
    while s == 0 or row_value(graph, z, central) > 0:
        s += 1
        stages.append(_stage(graph, z, central, comps, adjacent, s))
    return CentralTrace(central, tuple(tuple(c) for c in comps), tuple(stages), tuple(z))


def _stage(graph, z, central, comps, adjacent, s) -> StageRecord:
    """Run stage ``s`` in place on ``z``."""
    r = graph.size
    if len(comps) == 1:
        ys = [_sequence_contribution(graph, z, central, comps[0])]
    else:
        ys = []
        for comp in comps:
            part = list(comp) if s == 1 else _zero_part(graph, z, comp, central)
            y = [0] * r
            if part:
                cyc = _fc_on(graph, [central] + part)
                if cyc[central] != 1:
                    raise AssertionError("stage cycle is not reduced at the central vertex")
                for v in part:
                    y[v] = cyc[v]
            ys.append(tuple(y))
    z[central] += 1
    for y in ys:
        for v in range(r):
            z[v] += y[v]
    m = tuple(sum(y[v] for v in adj) for y, adj in zip(ys, adjacent))
    return StageRecord(s, tuple(ys), m, tuple(z))


def forced_stages(graph: ResolutionGraph, central: int, count: int) -> CentralTrace:
    """Run exactly ``count`` stages whatever ``Z.E0`` is.

    The contribution of a component at a stage depends only on that
    component and the central coefficient, so this gives the sequence a
    component produces inside any graph where the computation lasts that
    long.  No rationality check is made.
    """
    graph._check_index(central)
    comps = components_without(graph, [central])
    adjacent = [[v for v in graph.neighbors(central) if v in set(c)] for c in comps]
    z = [0] * graph.size
    stages = [_stage(graph, z, central, comps, adjacent, s) for s in range(1, count + 1)]
    return CentralTrace(central, tuple(tuple(c) for c in comps), tuple(stages), tuple(z))


def _sequence_contribution(graph, z, central, comp) -> Cycle:
    start = list(z)
    start[central] += 1
    after, _ = run_sequence(graph, start, allowed=comp)
    return tuple(a - b for a, b in zip(after, start))


def stage_by_sequence(graph: ResolutionGraph, central: int) -> list[Cycle]:
    """Totals after each stage, computed by adding ``E0`` and then running a
    computation sequence that never adds ``E0``.  Independent second route
    for the stage totals of :func:`central_fundamental_cycle`."""
    others = [v for v in range(graph.size) if v != central]
    z = [0] * graph.size
    totals = []
    while not totals or row_value(graph, z, central) > 0:
        z[central] += 1
        z = list(run_sequence(graph, z, allowed=others)[0])
        totals.append(tuple(z))
    return totals


def observed_multiplicity_sequence(trace: CentralTrace, component: int) -> list[int]:
    if not 0 <= component < len(trace.components):
        raise GraphError(f"component {component} out of range")
    return [st.m[component] for st in trace.stages]
