"""Canonical models: the hypertree left after contracting all (-2)-configurations."""

from __future__ import annotations

from dataclasses import dataclass

from .fundamental import NotRational, fc, is_rational
from .graph import GraphError, ResolutionGraph, components_without
from .rdp import dynkin_type


@dataclass(frozen=True)
class CanonicalModelGraph:
    """Non-(-2) curves as ``(b, z)`` pairs, with edges for normal crossings
    and T-joints for three curves through one point.  ``sources`` maps
    each model vertex back to its index in the resolution graph."""

    vertices: tuple[tuple[int, int], ...]
    edges: tuple[tuple[int, int], ...]
    t_joints: tuple[tuple[int, int, int], ...]
    rdp_records: tuple[str, ...]
    sources: tuple[int, ...] = ()

    def __post_init__(self):
        n = len(self.vertices)
        if any(z < 1 for _, z in self.vertices):
            raise GraphError("model multiplicities must be positive")
        for e in self.edges + self.t_joints:
            if len(set(e)) != len(e) or any(not 0 <= v < n for v in e):
                raise GraphError(f"bad hyperedge {e}")
        if n and not _is_hypertree(n, self.edges + self.t_joints):
            raise GraphError("model is not a hypertree")

    def same_hypertree(self, other: CanonicalModelGraph) -> bool:
        """Equality up to renumbering the model's vertices in source order."""
        return (
            [b for b, _ in self.vertices] == [b for b, _ in other.vertices]
            and sorted(self.edges) == sorted(other.edges)
            and sorted(self.t_joints) == sorted(other.t_joints)
        )


def _is_hypertree(n: int, hyperedges) -> bool:
    # a connected hypergraph is a hypertree iff its incidence graph is a tree
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in hyperedges:
        roots = {find(v) for v in e}
        if len(roots) != len(e):
            return False
        r0 = roots.pop()
        for r in roots:
            parent[r] = r0
    return len({find(v) for v in range(n)}) == 1


def canonical_model(graph: ResolutionGraph) -> CanonicalModelGraph:
    rep = is_rational(graph)
    if not rep:
        raise NotRational(rep.describe())
    z = fc(graph)
    keep = [i for i, v in enumerate(graph.vertices) if v.weight != 2]
    pos = {v: k for k, v in enumerate(keep)}
    edges, joints, records = [], [], []
    for i, j in graph.edges:
        if i in pos and j in pos:
            edges.append((pos[i], pos[j]))
    for comp in components_without(graph, keep):
        records.append(dynkin_type(graph, comp) or "?")
        attached = sorted({pos[u] for v in comp for u in graph.neighbors(v) if u in pos})
        if len(attached) == 2:
            edges.append(tuple(attached))
        elif len(attached) == 3:
            joints.append(tuple(attached))
        elif len(attached) > 3:
            raise GraphError(
                f"configuration {sorted(comp)} meets {len(attached)} curves; not a hypertree joint"
            )
    verts = tuple((graph.vertices[i].weight, z[i]) for i in keep)
    return CanonicalModelGraph(
        verts, tuple(sorted(edges)), tuple(sorted(joints)), tuple(records), tuple(keep)
    )


def minimal_tree(model: CanonicalModelGraph) -> ResolutionGraph:
    """Smallest tree with the given model: each T-joint becomes one (-2)."""
    n = len(model.vertices)
    if n == 0:
        raise GraphError("empty model has no tree")
    weights = [b for b, _ in model.vertices]
    edges = list(model.edges)
    for joint in model.t_joints:
        weights.append(2)
        edges.extend((v, len(weights) - 1) for v in joint)
    return ResolutionGraph.build(weights, edges)


def almost_reduced_check(graph: ResolutionGraph) -> bool:
    """True iff the fundamental cycle is 1 at every non-(-2)."""
    z = fc(graph)
    return all(c == 1 for c, v in zip(z, graph.vertices) if v.weight > 2)


def valency_criterion(graph: ResolutionGraph) -> bool:
    """Sufficient test for an almost reduced fundamental cycle: at every
    non-(-2), valency plus the number of adjacent (-2)'s is at most b."""
    for i, v in enumerate(graph.vertices):
        if v.weight > 2:
            nb = graph.neighbors(i)
            twos = sum(1 for u in nb if graph.vertices[u].weight == 2)
            if len(nb) + twos > v.weight:
                return False
    return True


def canonical_degree_of_model(model: CanonicalModelGraph) -> int:
    return sum(z * (b - 2) for b, z in model.vertices)


# ---------------------------------------------------------------------------
# DOT


def resolution_dot(graph: ResolutionGraph, z=None, name: str = "G") -> str:
    """Squares for non-(-2)'s labelled ``b/z``, circles for (-2)'s."""
    lines = [f"graph {name} {{"]
    for i, v in enumerate(graph.vertices):
        if v.weight == 2:
            label = str(z[i]) if z is not None else ""
            lines.append(f'  v{i} [shape=circle, label="{label}"];')
        else:
            label = f"-{v.weight}" + (f"/{z[i]}" if z is not None else "")
            lines.append(f'  v{i} [shape=box, label="{label}"];')
    for (i, j), w in graph.edges.items():
        extra = f' [label="{w}"]' if w != 1 else ""
        lines.append(f"  v{i} -- v{j}{extra};")
    lines.append("}")
    return "\n".join(lines)


def model_dot(model: CanonicalModelGraph, name: str = "M") -> str:
    """T-joints become an anonymous point node joined to three squares."""
    lines = [f"graph {name} {{"]
    for k, (b, z) in enumerate(model.vertices):
        label = f"-{b}" + (f"/{z}" if z != 1 else "")
        lines.append(f'  v{k} [shape=box, label="{label}"];')
    for i, j in model.edges:
        lines.append(f"  v{i} -- v{j};")
    for t, joint in enumerate(model.t_joints):
        lines.append(f'  t{t} [shape=point, label=""];')
        lines.extend(f"  t{t} -- v{v};" for v in joint)
    lines.append("}")
    return "\n".join(lines)
