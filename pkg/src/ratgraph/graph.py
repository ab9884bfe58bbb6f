"""Weighted resolution graphs, cycles and the intersection form.

A cycle is a tuple of Python ints, one coefficient per vertex, in vertex
order.  Rational cycles are tuples of :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Cycle = tuple[int, ...]
RationalCycle = tuple[Fraction, ...]


class GraphError(ValueError):
    """Raised for structurally invalid graphs or mismatched cycles."""


class ParseError(GraphError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class VertexData:
    weight: int
    genus: int = 0
    label: str | None = None

    def __post_init__(self):
        if self.weight < 1:
            raise GraphError(f"vertex weight must be >= 1, got {self.weight}")
        if self.genus < 0:
            raise GraphError(f"genus must be >= 0, got {self.genus}")


def _edge_key(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class ResolutionGraph:
    """Connected weighted graph; vertex ``i`` stands for a curve with ``E_i^2 = -b_i``.

    ``edges`` maps an ordered pair ``(i, j)`` with ``i < j`` to the
    intersection number ``E_i . E_j``.
    """

    vertices: tuple[VertexData, ...]
    edges: Mapping[tuple[int, int], int] = field(default_factory=dict)
    _adj: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        r = len(self.vertices)
        if r == 0:
            raise GraphError("graph has no vertices")
        norm: dict[tuple[int, int], int] = {}
        for (i, j), w in self.edges.items():
            if not (0 <= i < r and 0 <= j < r):
                raise GraphError(f"edge ({i}, {j}) references a missing vertex")
            if i == j:
                raise GraphError(f"loop at vertex {i}")
            if w < 1:
                raise GraphError(f"edge ({i}, {j}) has non-positive weight {w}")
            key = _edge_key(i, j)
            if key in norm:
                raise GraphError(f"duplicate edge {key}")
            norm[key] = w
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", dict(sorted(norm.items())))
        adj: list[list[int]] = [[] for _ in range(r)]
        for i, j in norm:
            adj[i].append(j)
            adj[j].append(i)
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adj))
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for u in self._adj[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        if len(seen) != r:
            missing = min(set(range(r)) - seen)
            raise GraphError(f"graph is disconnected (vertex {missing} unreachable from 0)")

    def __hash__(self):
        return hash((self.vertices, tuple(self.edges.items())))

    @classmethod
    def build(
        cls,
        weights: Sequence[int],
        edges: Iterable[tuple[int, int]] = (),
        genera: Sequence[int] | None = None,
    ) -> "ResolutionGraph":
        """Convenience constructor from a weight list and simple edges."""
        genera = genera or [0] * len(weights)
        verts = tuple(VertexData(b, g) for b, g in zip(weights, genera))
        emap: dict[tuple[int, int], int] = {}
        for e in edges:
            i, j = e[0], e[1]
            w = e[2] if len(e) > 2 else 1
            key = _edge_key(i, j)
            if key in emap:
                raise GraphError(f"duplicate edge {key}")
            emap[key] = w
        return cls(verts, emap)

    @property
    def size(self) -> int:
        return len(self.vertices)

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(v.weight for v in self.vertices)

    def neighbors(self, i: int) -> tuple[int, ...]:
        self._check_index(i)
        return self._adj[i]

    def edge_weight(self, i: int, j: int) -> int:
        return self.edges.get(_edge_key(i, j), 0)

    def is_tree(self) -> bool:
        return len(self.edges) == self.size - 1

    def is_simple(self) -> bool:
        """True when every edge has weight one."""
        return all(w == 1 for w in self.edges.values())

    def matrix(self) -> list[list[int]]:
        """The intersection matrix ``(E_i . E_j)``."""
        r = self.size
        m = [[0] * r for _ in range(r)]
        for i, v in enumerate(self.vertices):
            m[i][i] = -v.weight
        for (i, j), w in self.edges.items():
            m[i][j] = m[j][i] = w
        return m

    def subgraph(self, keep: Sequence[int]) -> tuple["ResolutionGraph", list[int]]:
        """Induced subgraph on ``keep`` (in the given order) and the index map."""
        index = {v: k for k, v in enumerate(keep)}
        verts = tuple(self.vertices[v] for v in keep)
        emap = {
            (index[i], index[j]): w
            for (i, j), w in self.edges.items()
            if i in index and j in index
        }
        return ResolutionGraph(verts, emap), list(keep)

    def with_weights(self, weights: Sequence[int]) -> "ResolutionGraph":
        verts = tuple(
            VertexData(b, v.genus, v.label) for b, v in zip(weights, self.vertices)
        )
        return ResolutionGraph(verts, self.edges)

    def _check_index(self, i: int) -> None:
        if not 0 <= i < self.size:
            raise GraphError(f"vertex index {i} out of range 0..{self.size - 1}")


def components_without(graph: ResolutionGraph, removed: Iterable[int]) -> list[list[int]]:
    """Connected components of the graph after deleting ``removed``.

    Components are sorted lists, ordered by their smallest vertex.
    """
    gone = set(removed)
    seen = set(gone)
    comps = []
    for start in range(graph.size):
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        stack = [start]
        while stack:
            v = stack.pop()
            for u in graph.neighbors(v):
                if u not in seen:
                    seen.add(u)
                    comp.append(u)
                    stack.append(u)
        comps.append(sorted(comp))
    return comps


def _check_cycle(graph: ResolutionGraph, a: Sequence) -> None:
    if len(a) != graph.size:
        raise GraphError(f"cycle has {len(a)} coefficients, graph has {graph.size} vertices")


def unit(graph: ResolutionGraph, i: int) -> Cycle:
    graph._check_index(i)
    return tuple(1 if k == i else 0 for k in range(graph.size))


def reduced(graph: ResolutionGraph) -> Cycle:
    """The reduced exceptional cycle ``E = sum E_i``."""
    return (1,) * graph.size


def row_value(graph: ResolutionGraph, a: Sequence, i: int):
    """``A . E_i``."""
    _check_cycle(graph, a)
    graph._check_index(i)
    total = -graph.vertices[i].weight * a[i]
    for j in graph._adj[i]:
        total += graph.edge_weight(i, j) * a[j]
    return total


def row_values(graph: ResolutionGraph, a: Sequence) -> list:
    return [row_value(graph, a, i) for i in range(graph.size)]


def intersect(graph: ResolutionGraph, a: Sequence, b: Sequence):
    _check_cycle(graph, a)
    _check_cycle(graph, b)
    total = 0
    for i, v in enumerate(graph.vertices):
        total -= v.weight * a[i] * b[i]
    for (i, j), w in graph.edges.items():
        total += w * (a[i] * b[j] + a[j] * b[i])
    return total


def self_intersection(graph: ResolutionGraph, a: Sequence):
    return intersect(graph, a, a)


def canonical_pairing(graph: ResolutionGraph, a: Sequence):
    """``A . K`` from the adjunction values ``E_i . K = 2 g_i - 2 + b_i``."""
    _check_cycle(graph, a)
    return sum(c * (2 * v.genus - 2 + v.weight) for c, v in zip(a, graph.vertices))


def genus(graph: ResolutionGraph, a: Sequence) -> int:
    """Arithmetic genus ``p_a(A) = 1 + (A.A + A.K)/2``."""
    twice = self_intersection(graph, a) + canonical_pairing(graph, a)
    if twice % 2:
        raise GraphError("A.A + A.K is odd; cycle is not integral")
    return 1 + twice // 2


def valency(graph: ResolutionGraph, i: int) -> int:
    graph._check_index(i)
    return sum(graph.edge_weight(i, j) for j in graph._adj[i])


def add(a: Sequence[int], b: Sequence[int]) -> Cycle:
    return tuple(x + y for x, y in zip(a, b))


def leq(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x <= y for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# canonical forms of weighted trees (AHU)


def tree_centers(graph: ResolutionGraph) -> list[int]:
    n = graph.size
    if n <= 2:
        return list(range(n))
    deg = [len(graph.neighbors(i)) for i in range(n)]
    leaves = [i for i in range(n) if deg[i] <= 1]
    left = n
    while left > 2:
        left -= len(leaves)
        nxt = []
        for v in leaves:
            for u in graph.neighbors(v):
                deg[u] -= 1
                if deg[u] == 1:
                    nxt.append(u)
            deg[v] = 0
        leaves = nxt
    return sorted(leaves)


def _encode(graph: ResolutionGraph, v: int, parent: int | None) -> str:
    kids = sorted(_encode(graph, u, v) for u in graph.neighbors(v) if u != parent)
    vd = graph.vertices[v]
    tag = f"{vd.weight}g{vd.genus}" if vd.genus else str(vd.weight)
    return f"{tag}({''.join(kids)})"


def canonical_form(graph: ResolutionGraph) -> str:
    """AHU string of a weighted tree rooted at its center; for two
    centers the smaller of the two rootings."""
    if not graph.is_tree():
        raise GraphError("canonical form is only defined for trees")
    return min(_encode(graph, c, None) for c in tree_centers(graph))


# ---------------------------------------------------------------------------
# text format


def parse_graph(text: str) -> ResolutionGraph:
    """Parse ``v <index> <b> [genus]`` / ``e <i> <j> [weight]`` lines."""
    verts: dict[int, VertexData] = {}
    emap: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind, args = parts[0], parts[1:]
        try:
            nums = [int(x) for x in args]
        except ValueError:
            raise ParseError(lineno, f"non-integer field in {line!r}") from None
        if kind == "v":
            if len(nums) not in (2, 3):
                raise ParseError(lineno, "expected 'v <index> <b> [genus]'")
            idx = nums[0]
            if idx in verts:
                raise ParseError(lineno, f"duplicate vertex index {idx}")
            try:
                verts[idx] = VertexData(nums[1], nums[2] if len(nums) == 3 else 0)
            except GraphError as exc:
                raise ParseError(lineno, str(exc)) from None
        elif kind == "e":
            if len(nums) not in (2, 3):
                raise ParseError(lineno, "expected 'e <i> <j> [weight]'")
            i, j = nums[0], nums[1]
            for end in (i, j):
                if end not in verts:
                    raise ParseError(lineno, f"edge endpoint {end} not declared")
            if i == j:
                raise ParseError(lineno, f"loop at vertex {i}")
            w = nums[2] if len(nums) == 3 else 1
            if w < 1:
                raise ParseError(lineno, f"edge weight must be positive, got {w}")
            key = _edge_key(i, j)
            if key in emap:
                raise ParseError(lineno, f"duplicate edge {key}")
            emap[key] = w
        else:
            raise ParseError(lineno, f"unknown record type {kind!r}")
    if not verts:
        raise GraphError("no vertices declared")
    if sorted(verts) != list(range(len(verts))):
        raise GraphError(f"vertex indices must be 0..{len(verts) - 1}")
    return ResolutionGraph(tuple(verts[i] for i in range(len(verts))), emap)


def parse_graphs(text: str) -> list[ResolutionGraph]:
    """Parse several graphs separated by blank lines; comment-only blocks
    are skipped and line numbers in errors refer to the whole text."""
    out = []
    block: list[str] = []
    start = 1
    for lineno, raw in enumerate(text.splitlines() + [""], 1):
        if raw.strip():
            if not block:
                start = lineno
            block.append(raw)
            continue
        if any(b.split("#", 1)[0].strip() for b in block):
            try:
                out.append(parse_graph("\n".join(block)))
            except ParseError as exc:
                raise ParseError(start + exc.lineno - 1, str(exc).split(": ", 1)[1]) from None
            except GraphError as exc:
                raise ParseError(start, str(exc)) from None
        block = []
    return out


def render_graph(graph: ResolutionGraph) -> str:
    lines = []
    for i, v in enumerate(graph.vertices):
        lines.append(f"v {i} {v.weight}" + (f" {v.genus}" if v.genus else ""))
    for (i, j), w in graph.edges.items():
        lines.append(f"e {i} {j}" + (f" {w}" if w != 1 else ""))
    return "\n".join(lines) + "\n"


def format_cycle(a: Sequence) -> str:
    return "(" + ", ".join(str(x) for x in a) + ")"
