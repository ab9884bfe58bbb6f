"""Exact linear algebra on the intersection lattice."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .graph import (
    GraphError,
    RationalCycle,
    ResolutionGraph,
    intersect,
)


class SingularMatrixError(GraphError):
    pass


@dataclass(frozen=True)
class DefinitenessReport:
    is_negative_definite: bool
    # 1-based size of the first leading minor with the wrong sign
    failing_minor: int | None = None
    minor_value: int | None = None

    def __post_init__(self):
        if not self.is_negative_definite and self.failing_minor is None:
            raise ValueError("a failed definiteness report needs a witness")

    def __bool__(self):
        return self.is_negative_definite


def leading_minors(matrix: Sequence[Sequence[int]]) -> list[int]:
    """All leading principal minors by fraction-free (Bareiss) elimination.

    Stops early and returns the minors computed so far when a pivot
    vanishes, since later minors then need pivoting to evaluate.
    """
    n = len(matrix)
    m = [list(row) for row in matrix]
    minors = []
    prev = 1
    for k in range(n):
        pivot = m[k][k]
        minors.append(pivot)
        if pivot == 0:
            break
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
        prev = pivot
    return minors


def check_negative_definite(graph: ResolutionGraph) -> DefinitenessReport:
    minors = leading_minors(graph.matrix())
    for k, d in enumerate(minors, 1):
        if (-1) ** k * d <= 0:
            return DefinitenessReport(False, k, d)
    return DefinitenessReport(True)


def solve(matrix: Sequence[Sequence[int]], rhs: Sequence) -> list[Fraction]:
    """Solve ``matrix @ x = rhs`` exactly; raises on a singular matrix."""
    n = len(matrix)
    aug = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise SingularMatrixError("intersection matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col] / p
                row, prow = aug[r], aug[col]
                for c in range(col, n + 1):
                    row[c] -= f * prow[c]
    return [aug[i][n] / aug[i][i] for i in range(n)]


def canonical_cycle(graph: ResolutionGraph) -> RationalCycle:
    """The rational cycle ``K`` with ``E_i.(E_i+K) = 2 p_a(E_i) - 2``."""
    rhs = [2 * v.genus - 2 + v.weight for v in graph.vertices]
    return tuple(solve(graph.matrix(), rhs))


def canonical_degree(graph: ResolutionGraph, z: Sequence[int]) -> int:
    """``Z.K = sum z_i (b_i - 2)`` for genus-zero graphs."""
    if any(v.genus for v in graph.vertices):
        raise GraphError("canonical degree formula needs all genus weights zero")
    if len(z) != graph.size:
        raise GraphError("cycle length does not match graph")
    return sum(c * (v.weight - 2) for c, v in zip(z, graph.vertices))


def canonical_degree_via_k(graph: ResolutionGraph, z: Sequence[int]) -> Fraction:
    """``Z.K`` evaluated against the solved canonical cycle."""
    return intersect(graph, z, canonical_cycle(graph))
