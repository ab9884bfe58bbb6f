"""Rational double point configurations: detection, naming and their
multiplicity sequences.

A configuration is a maximal connected subgraph of (-2)-vertices.  On a
rational graph with almost reduced fundamental cycle it is one of a
finite list of shapes, attached to one, two or three non-(-2)-vertices.
Each shape is identified by a :class:`ConfigName` and can be rebuilt
from it, which is how the witness graphs for the sequence tables are
produced.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil
from typing import Sequence

from .graph import GraphError, ResolutionGraph, components_without

# family keys
A = "A"          # A^k_n, one attachment
ID = "ID"        # I D^2_n
IID = "IID"      # II D^k_n, k = n // 2
E6 = "E6"
E7 = "E7"
A11 = "A11"      # A^{1,1}_n, n >= 0
IA = "IA"        # I A^{2,k}_n
IIA = "IIA"      # II A^{k,2}_n
D2 = "D2"        # D^{k+1,2}_{2k+1} and D^{k,2}_{2k}
A2K2 = "A2K2"    # A^{2,k,2}_n

SINGLE = (A, ID, IID, E6, E7)
ROLES = {
    A: ("L",), ID: ("L",), IID: ("L",), E6: ("L",), E7: ("L",),
    A11: ("L", "R"), IA: ("L", "M"), IIA: ("M", "R"), D2: ("L", "R"),
    A2K2: ("L", "M", "R"),
}


@dataclass(frozen=True, order=True)
class ConfigName:
    """A configuration from the tables; ``k`` is the distinguished
    multiplicity where the family has one (``A``, ``IA``, ``IIA``,
    ``A2K2``), otherwise derived from ``n``."""

    family: str
    n: int
    k: int = 1

    def __post_init__(self):
        problem = _name_problem(self.family, self.n, self.k)
        if problem:
            raise ValueError(f"invalid configuration {self.family}[{self.n}] k={self.k}: {problem}")

    @property
    def roles(self) -> tuple[str, ...]:
        return ROLES[self.family]

    @property
    def superscript(self) -> tuple[int, ...]:
        f, n, k = self.family, self.n, self.k
        if f == A:
            return (k,)
        if f == ID:
            return (2,)
        if f == IID:
            return (n // 2,)
        if f == E6:
            return (2,)
        if f == E7:
            return (3,)
        if f == A11:
            return (1, 1)
        if f == IA:
            return (2, k)
        if f == IIA:
            return (k, 2)
        if f == D2:
            return ((n + 1) // 2, 2)
        return (2, k, 2)

    def render(self, role: str | None = None) -> str:
        base = {A: "A", ID: "ID", IID: "IID", E6: "E", E7: "E", A11: "A",
                IA: "IA", IIA: "IIA", D2: "D", A2K2: "A"}[self.family]
        sup = ",".join(str(x) for x in self.superscript)
        prefix = role if role and len(self.roles) > 1 else ""
        return f"{prefix}{base}[{self.n}]^{{{sup}}}"

    def __str__(self):
        return self.render()


def _name_problem(f: str, n: int, k: int) -> str | None:
    if f == A:
        if k < 1 or n < 2 * k - 1:
            return "needs k >= 1 and n >= 2k-1"
    elif f == ID:
        if n < 4:
            return "needs n >= 4"
    elif f == IID:
        if n < 5:
            return "needs n >= 5"
        if n % 2 == 0 and n // 2 <= 2:
            return "even n needs k > 2"
    elif f == E6:
        if n != 6:
            return "n must be 6"
    elif f == E7:
        if n != 7:
            return "n must be 7"
    elif f == A11:
        if n < 0:
            return "needs n >= 0"
    elif f == IA:
        if k < 2 or n < 2 * k - 2:
            return "needs k >= 2 and n >= 2k-2"
    elif f == IIA:
        if k < 2 or n < 2 * k - 2 or n < 1:
            return "needs k >= 2 and n >= 2k-2"
    elif f == D2:
        if n < 4:
            return "needs n >= 4"
    elif f == A2K2:
        if k < 2 or n < max(1, 2 * k - 3):
            return "needs k >= 2 and n >= 2k-3"
    else:
        return "unknown family"
    return None


def name(family: str, n: int, k: int | None = None) -> ConfigName:
    if k is None:
        k = {A: 1, IA: 2, IIA: 2, A2K2: 2}.get(family, 1)
    return ConfigName(family, n, k)


# ---------------------------------------------------------------------------
# shapes


@dataclass(frozen=True)
class Shape:
    """A configuration as a (-2)-tree with attachment points per role."""

    size: int
    edges: tuple[tuple[int, int], ...]
    attach: dict = field(hash=False)


def _chain(n: int) -> list[tuple[int, int]]:
    return [(i, i + 1) for i in range(n - 1)]


def shape(cfg: ConfigName) -> Shape:
    f, n, k = cfg.family, cfg.n, cfg.k
    if f == A:
        return Shape(n, tuple(_chain(n)), {"L": k - 1})
    if f in (ID, IID, D2):
        # arm 0..n-3 ending in the branch vertex n-3, leaves n-2 and n-1
        edges = _chain(n - 2) + [(n - 3, n - 2), (n - 3, n - 1)]
        if f == ID:
            att = {"L": 0}
        elif f == IID:
            att = {"L": n - 2}
        else:
            att = {"L": n - 2, "R": 0}
        return Shape(n, tuple(edges), att)
    if f in (E6, E7):
        # branch 0; arm of length 1: vertex 1; arm 2..; arm ..
        if f == E6:
            edges = [(0, 1), (0, 2), (2, 3), (0, 4), (4, 5)]
            return Shape(6, tuple(edges), {"L": 5})
        edges = [(0, 1), (0, 2), (2, 3), (0, 4), (4, 5), (5, 6)]
        return Shape(7, tuple(edges), {"L": 6})
    if f == A11:
        if n == 0:
            return Shape(0, (), {"L": None, "R": None})
        return Shape(n, tuple(_chain(n)), {"L": 0, "R": n - 1})
    if f == IA:
        return Shape(n, tuple(_chain(n)), {"L": 0, "M": k - 2})
    if f == IIA:
        return Shape(n, tuple(_chain(n)), {"M": k - 1, "R": n - 1})
    if f == A2K2:
        return Shape(n, tuple(_chain(n)), {"L": 0, "M": k - 2, "R": n - 1})
    raise ValueError(f)


def dynkin_of(cfg: ConfigName) -> str:
    if cfg.family in (ID, IID, D2):
        return f"D{cfg.n}"
    if cfg.family == E6:
        return "E6"
    if cfg.family == E7:
        return "E7"
    return f"A{cfg.n}"


# ---------------------------------------------------------------------------
# detection and classification


@dataclass(frozen=True)
class RdpComponent:
    vertices: tuple[int, ...]
    dynkin_type: str
    attachments: tuple[tuple[int, int], ...]  # (external, internal)


def dynkin_type(graph: ResolutionGraph, verts: Sequence[int]) -> str | None:
    """ADE type of an induced (-2)-tree, or None."""
    vs = set(verts)
    deg = {v: sum(1 for u in graph.neighbors(v) if u in vs) for v in vs}
    n = len(vs)
    if sum(deg.values()) != 2 * (n - 1):
        return None
    branch = [v for v in vs if deg[v] >= 3]
    if not branch:
        return f"A{n}"
    if len(branch) > 1 or deg[branch[0]] > 3:
        return None
    arms = sorted(_arm_lengths(graph, branch[0], vs))
    if arms[0] == 1 and arms[1] == 1:
        return f"D{n}"
    if arms[0] == 1 and arms[1] == 2 and arms[2] in (2, 3, 4):
        return f"E{n}"
    return None


def _arm_lengths(graph, b, vs) -> list[int]:
    out = []
    for start in graph.neighbors(b):
        if start not in vs:
            continue
        length, prev, cur = 1, b, start
        while True:
            nxt = [u for u in graph.neighbors(cur) if u in vs and u != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        out.append(length)
    return out


class NotADE(GraphError):
    pass


def find_rdp_components(graph: ResolutionGraph) -> list[RdpComponent]:
    minus_two = {i for i, v in enumerate(graph.vertices) if v.weight == 2}
    others = [i for i in range(graph.size) if i not in minus_two]
    out = []
    for comp in components_without(graph, others):
        t = dynkin_type(graph, comp)
        if t is None:
            raise NotADE(f"(-2)-component {comp} is not an ADE diagram")
        atts = tuple(
            sorted((u, v) for v in comp for u in graph.neighbors(v) if u not in minus_two)
        )
        out.append(RdpComponent(tuple(comp), t, atts))
    return out


@dataclass(frozen=True)
class Classification:
    name: ConfigName | None
    roles: dict = field(default_factory=dict, hash=False)  # role -> external vertex
    reason: str = ""

    def __bool__(self):
        return self.name is not None


def _path_order(graph, verts) -> list[int]:
    vs = set(verts)
    if len(vs) == 1:
        return list(verts)
    ends = [v for v in vs if sum(1 for u in graph.neighbors(v) if u in vs) == 1]
    order = [min(ends)]
    prev = None
    while len(order) < len(vs):
        cur = order[-1]
        nxt = [u for u in graph.neighbors(cur) if u in vs and u != prev]
        prev = cur
        order.append(nxt[0])
    return order


def classify_component(graph: ResolutionGraph, comp: RdpComponent) -> Classification:
    atts = list(comp.attachments)
    for ext, _ in atts:
        if graph.vertices[ext].weight < 3:
            return Classification(None, reason=f"attached vertex {ext} has weight < 3")
    if not atts:
        return Classification(None, reason="no attached non-(-2) vertex")
    t = comp.dynkin_type
    n = len(comp.vertices)
    if t.startswith("A"):
        return _classify_chain(graph, comp, atts, n)
    if t.startswith("D"):
        return _classify_d(graph, comp, atts, n)
    if t == "E6" or t == "E7":
        if len(atts) != 1:
            return Classification(None, reason=f"{t} attached to more than one vertex")
        b = next(v for v in comp.vertices if sum(1 for u in graph.neighbors(v) if u in comp.vertices) == 3)
        vs = set(comp.vertices)
        ext, internal = atts[0]
        arm = _arm_containing(graph, b, vs, internal)
        want = 2 if t == "E6" else 3
        if arm is None or arm[-1] != internal or len(arm) != want:
            return Classification(None, reason=f"{t} attached at a vertex of multiplicity > 1 or not at the table position")
        return Classification(ConfigName(E6 if t == "E6" else E7, n), {"L": ext})
    return Classification(None, reason=f"{t} cannot carry an attachment")


def _arm_containing(graph, b, vs, target):
    for start in graph.neighbors(b):
        if start not in vs:
            continue
        arm, prev, cur = [start], b, start
        while True:
            nxt = [u for u in graph.neighbors(cur) if u in vs and u != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            arm.append(cur)
        if target in arm:
            return arm
    return None


def _classify_chain(graph, comp, atts, n) -> Classification:
    order = _path_order(graph, comp.vertices)
    pos = {v: i for i, v in enumerate(order)}
    p = sorted((pos[i], e) for e, i in atts)
    if len(p) == 1:
        q, e = p[0]
        q = min(q, n - 1 - q)
        return Classification(ConfigName(A, n, q + 1), {"L": e})
    if len(p) == 2:
        (q1, e1), (q2, e2) = p
        if n == 1 or (q1 == 0 and q2 == n - 1):
            return Classification(ConfigName(A11, n), {"L": e1, "R": e2})
        # one attachment must sit at an end; orient so it is position 0
        if q1 == 0:
            end_e, other_q, other_e = e1, q2, e2
        elif q2 == n - 1:
            end_e, other_q, other_e = e2, n - 1 - q1, e1
        else:
            return Classification(None, reason="two attachments, neither at an end of the chain")
        # I A^{2,k}: M at position k-2 from L; II A^{k,2}: M at n-k from R.
        # At n = 2k-2 both describe the same graph and the II name is used.
        k_i = other_q + 2
        if n >= 2 * k_i - 1:
            return Classification(ConfigName(IA, n, k_i), {"L": end_e, "M": other_e})
        k_ii = n - other_q
        if k_ii >= 2 and n >= 2 * k_ii - 2:
            return Classification(ConfigName(IIA, n, k_ii), {"M": other_e, "R": end_e})
        return Classification(None, reason="second attachment at a vertex of multiplicity > 1")
    if len(p) == 3:
        qs = [q for q, _ in p]
        if qs[0] != 0 or qs[2] != n - 1:
            return Classification(None, reason="three attachments but not at both ends")
        (q0, e0), (qm, em), (q2, e2) = p
        if n == 1:
            return Classification(ConfigName(A2K2, 1, 2), {"L": e0, "M": em, "R": e2})
        dl, dr = qm, n - 1 - qm
        if dl <= dr:
            left, right = e0, e2
            d = dl
        else:
            left, right = e2, e0
            d = dr
        return Classification(ConfigName(A2K2, n, d + 2), {"L": left, "M": em, "R": right})
    return Classification(None, reason=f"{len(p)} attachments on one chain")


def _classify_d(graph, comp, atts, n) -> Classification:
    vs = set(comp.vertices)
    b = next(v for v in vs if sum(1 for u in graph.neighbors(v) if u in vs) == 3)
    arms = []
    for start in graph.neighbors(b):
        if start in vs:
            arms.append(_arm_containing(graph, b, vs, start))
    arms.sort(key=len)
    short = {arms[0][-1], arms[1][-1]}
    far = arms[2][-1]
    internal = {}
    for e, i in atts:
        internal.setdefault(i, []).append(e)
    if any(len(v) > 1 for v in internal.values()):
        return Classification(None, reason="two vertices attached to the same D-vertex")
    if n == 4:
        # all leaves alike; treat any attached leaf as the far end
        leaves = [a[-1] for a in arms]
        used = [l for l in leaves if l in internal]
        if len(used) == len(internal):
            far = used[-1] if len(used) == 1 else used[0]
            short = set(leaves) - {far}
    for i in internal:
        if i != far and i not in short:
            return Classification(None, reason="D attached at a vertex of multiplicity 2")
    if len(internal) == 1:
        (i, (e,)), = internal.items()
        if i == far:
            return Classification(ConfigName(ID, n), {"L": e})
        if n % 2 == 0 and n // 2 <= 2:
            return Classification(ConfigName(ID, n), {"L": e})
        return Classification(ConfigName(IID, n), {"L": e})
    if len(internal) == 2:
        if far not in internal:
            return Classification(None, reason="D attached at both short legs")
        e_r = internal[far][0]
        e_l = next(es[0] for i, es in internal.items() if i != far)
        return Classification(ConfigName(D2, n), {"L": e_l, "R": e_r})
    return Classification(None, reason="D attached to three vertices")


# ---------------------------------------------------------------------------
# multiplicity sequences (closed forms)


@dataclass(frozen=True)
class MultiplicitySequence:
    head: tuple[int, ...]
    period: tuple[int, ...] = ()

    def prefix(self, length: int) -> list[int]:
        out = list(self.head[:length])
        while len(out) < length:
            if not self.period:
                out.append(0)
            else:
                out.extend(self.period)
        return out[:length]

    @property
    def finite(self) -> bool:
        return not self.period

    def observation_length(self) -> int:
        if self.finite:
            return len(self.head)
        return len(self.head) + len(self.period)

    def render(self) -> str:
        h = ",".join(map(str, self.head))
        if self.period:
            p = ",".join(map(str, self.period))
            return f"({h}{',' if h else ''}_{p}_...)"
        return f"({h})"


def _seq(*parts, period=()) -> MultiplicitySequence:
    head = []
    for p in parts:
        head.extend(p if isinstance(p, (list, tuple)) else [p])
    return MultiplicitySequence(tuple(head), tuple(period))


def _split_a(n: int, k: int) -> tuple[int, int]:
    """Write ``n = (l+1)k + r - 1`` with ``l >= 1`` and ``0 <= r <= k-1``."""
    m = n + 1 - k
    return m // k, m % k


def predicted_multiplicity_sequence(cfg: ConfigName, role: str = "L") -> MultiplicitySequence:
    if role not in cfg.roles:
        raise ValueError(f"{cfg} has no role {role}")
    f, n, k = cfg.family, cfg.n, cfg.k
    if f == A:
        if k == 1:
            return _seq(period=[1] * n + [0])
        l, r = _split_a(n, k)
        if r < k - 1:
            return _seq([k] * l, r)
        if k > 2:
            return _seq([k] * l, k - 1, 1)
        return _seq([2] * l, 1, 1, [2] * l, 0)
    if f == ID:
        return _seq(2, 0)
    if f == IID:
        kk = n // 2
        if n % 2 == 0:
            return _seq(kk, 0)
        if kk == 2:
            return _seq(2, 1, 2, 0)
        return _seq(kk, 1)
    if f == E6:
        return _seq(2, 2, 0)
    if f == E7:
        return _seq(3, 0)
    if f == A11:
        return _seq([1] * (n + 1), period=[0] + [1] * n)
    if f == IA:
        if role == "L" or k == 2:
            return _seq(2, [1] * (n - k), 0)
        l, r = divmod(n - (k - 1), k - 1)
        return _seq(k, [k - 1] * (l - 1), r)
    if f == IIA:
        if role == "R":
            return _seq(2, [1] * (k - 2), 0)
        l, r = _split_ii(n, k)
        if r < k - 1:
            return _seq([k] * l, r)
        if k > 2:
            return _seq([k] * l, k - 1, 1)
        return _seq([2] * l, period=[1, 1] + [2] * (l - 1))
    if f == D2:
        kk = n // 2
        if role == "R" or (n == 4):
            return _seq(2, period=[1])
        if n % 2 == 1:
            return _seq(kk + 1, 0)
        return _seq(kk, 1)
    if f == A2K2:
        if role == "R":
            return _seq(2, [1] * (k - 2), 0)
        if role == "L" or k == 2:
            return _seq(2, [1] * (n - k + 1), 0)
        l, r = _split_a2k2(n, k)
        return _seq(k, [k - 1] * (l - 1), r)
    raise ValueError(f)


def _split_ii(n: int, k: int) -> tuple[int, int]:
    """Write ``n = (l+1)k + r - 2`` with ``l >= 1`` and ``0 <= r <= k-1``."""
    m = n + 2 - k
    return m // k, m % k


def _split_a2k2(n: int, k: int) -> tuple[int, int]:
    """Write ``n = (l+1)(k-1) - 1 + r`` with ``0 <= r <= k-2``."""
    m = n + 1
    return m // (k - 1) - 1, m % (k - 1)


def other_multiplicities(cfg: ConfigName, role: str) -> dict:
    """The table's value for the configuration vertex next to each other
    attached vertex: an int, or a function of the stage ``s``."""
    f, n, k = cfg.family, cfg.n, cfg.k
    if f == A11:
        return {"R" if role == "L" else "L": lambda s: ceil((n + s) / (n + 1))}
    if f == IA:
        if role == "L" or k == 2:
            return {"M" if role == "L" else "L": n - k + 2}
        return {"L": ceil(n / (k - 1))}
    if f == IIA:
        if role == "R":
            return {"M": k if k > 2 else 2}
        l, r = _split_ii(n, k)
        if r < k - 1:
            return {"R": 2}
        if k > 2:
            return {"R": 3}
        return {"R": lambda s: ceil((l + 1 + s) / (l + 1))}
    if f == D2:
        if role == "R" or n == 4:
            if n % 2 == 1:
                return {"L": lambda s: ceil((n - 1 + s) / 2)}
            return {"L": lambda s: (n + s) // 2}
        return {"R": 2 if n % 2 == 1 else 3}
    if f == A2K2:
        if role == "L" or (role == "M" and k == 2):
            o = "M" if role == "L" else "L"
            return {o: n - k + 3, "R": 2}
        if role == "M":
            return {"L": ceil((n + 1) / (k - 1)), "R": 2}
        return {"L": 2, "M": k}
    return {}


# equivalences: list of (ConfigName, count); LA^{1,1}_m appear with role L
def equivalent_configuration(cfg: ConfigName, role: str = "L"):
    """The tabulated equivalent combination as ``[(name, count), ...]``,
    or ``None`` when the table leaves the entry blank."""
    f, n, k = cfg.family, cfg.n, cfg.k
    a1 = lambda m: ConfigName(A, m, 1)  # noqa: E731
    l11 = lambda m: ConfigName(A11, m)  # noqa: E731

    def combo(*pairs):
        return [(c, m) for c, m in pairs if m > 0]

    if f == A:
        if k == 1:
            return None
        l, r = _split_a(n, k)
        if r < k - 1:
            return combo((a1(l), k - r), (a1(l + 1), r))
        if k > 2:
            return combo((a1(l), 1), (a1(l + 1), k - 1))
        return None
    if f == ID:
        return combo((a1(1), 2))
    if f == IID:
        kk = n // 2
        if n % 2 == 0:
            return combo((a1(1), kk))
        if kk == 2:
            return combo((a1(1), 1), (a1(3), 1))
        return combo((a1(1), kk - 1), (a1(2), 1))
    if f == E6:
        return combo((a1(2), 2))
    if f == E7:
        return combo((a1(1), 3))
    if f == A11:
        return None
    if f == IA:
        if role == "L" or k == 2:
            return combo((l11(0), 1), (a1(n - k + 1), 1))
        l, r = divmod(n - (k - 1), k - 1)
        return combo((l11(0), 1), (a1(l), k - 1 - r), (a1(l + 1), r))
    if f == IIA:
        if role == "R":
            return combo((l11(0), 1), (a1(k - 1), 1))
        l, r = _split_ii(n, k)
        if r < k - 1:
            return combo((l11(l - 1), 1), (a1(l + 1), r), (a1(l), k - 1 - r))
        if k > 2 and l > 1:
            return combo((l11(l - 1), 1), (a1(l + 1), k - 1))
        if k > 2:
            return combo((l11(1), 1), (a1(1), 1), (a1(2), k - 2))
        return combo((l11(l), 1), (a1(l), 1))
    if f == D2:
        kk = n // 2
        if role == "R" or n == 4:
            return combo((l11(1), 1), (a1(1), 1))
        if n % 2 == 1:
            return combo((l11(0), 1), (a1(1), kk))
        return combo((a1(1), kk - 2), (a1(2), 1), (l11(0), 1))
    return None


def table_rows(max_k: int = 5, max_l: int = 4, max_n: int = 16):
    """Every (configuration, role) pair of the sequence tables within caps."""
    rows = []
    seen = set()

    def add(cfg, role):
        if cfg.n <= max_n and (cfg, role) not in seen:
            seen.add((cfg, role))
            rows.append((cfg, role))

    for n in range(1, max_n + 1):
        add(ConfigName(A, n, 1), "L")
    for k in range(2, max_k + 1):
        for l in range(1, max_l + 1):
            for r in range(k):
                add(ConfigName(A, (l + 1) * k + r - 1, k), "L")
    for n in range(4, max_n + 1):
        add(ConfigName(ID, n), "L")
    for n in range(5, max_n + 1):
        if n % 2 == 1 or n // 2 > 2:
            add(ConfigName(IID, n), "L")
    add(ConfigName(E6, 6), "L")
    add(ConfigName(E7, 7), "L")
    for n in range(0, max_n + 1):
        add(ConfigName(A11, n), "L")
    for k in range(2, max_k + 1):
        for n in range(2 * k - 2, max_n + 1):
            add(ConfigName(IA, n, k), "L")
            if k > 2:
                l, _ = divmod(n - (k - 1), k - 1)
                if 1 <= l <= max_l:
                    add(ConfigName(IA, n, k), "M")
            add(ConfigName(IIA, n, k), "R")
            l, _ = _split_ii(n, k)
            if 1 <= l <= max_l:
                add(ConfigName(IIA, n, k), "M")
    for k in range(2, max_k + 1):
        add(ConfigName(D2, 2 * k + 1), "L")
        add(ConfigName(D2, 2 * k + 1), "R")
        add(ConfigName(D2, 2 * k), "R")
        if k > 2:
            add(ConfigName(D2, 2 * k), "L")
    for k in range(3, max_k + 1):
        for l in range(1, max_l + 1):
            for r in range(k - 1):
                n = (l + 1) * (k - 1) - 1 + r
                for role in ("L", "M", "R"):
                    add(ConfigName(A2K2, n, k), role)
    return rows


# ---------------------------------------------------------------------------
# witness graphs


class NoWitness(Exception):
    """The auxiliary components cannot be chosen to realise a sequence."""


@dataclass
class _Builder:
    weights: list = field(default_factory=list)
    edges: list = field(default_factory=list)

    def vertex(self, b: int) -> int:
        self.weights.append(b)
        return len(self.weights) - 1

    def chain(self, at: int, length: int) -> int:
        prev = at
        first = None
        for _ in range(length):
            v = self.vertex(2)
            self.edges.append((prev, v))
            first = v if first is None else first
            prev = v
        return first

    def graph(self) -> ResolutionGraph:
        return ResolutionGraph.build(self.weights, self.edges)


def attach(builder: _Builder, cfg: ConfigName, role: str, at: int, steep: int) -> dict:
    """Attach ``cfg`` to vertex ``at`` in the given role; every other role
    gets a fresh leaf of weight ``steep``.  Returns role -> vertex, with the
    configuration vertices under the key ``"body"``."""
    sh = shape(cfg)
    base = len(builder.weights)
    for _ in range(sh.size):
        builder.vertex(2)
    builder.edges.extend((base + i, base + j) for i, j in sh.edges)
    out = {role: at, "body": list(range(base, base + sh.size))}
    for ro in cfg.roles:
        if ro != role:
            out[ro] = builder.vertex(steep)
    if cfg.family == A11 and cfg.n == 0:
        other = out["R" if role == "L" else "L"]
        builder.edges.append((at, other))
        return out
    for ro in cfg.roles:
        builder.edges.append((out[ro], base + sh.attach[ro]))
    return out


def local_sequence(cfg: ConfigName, role: str, stages: int, steep: int | None = None) -> list[int]:
    """The sequence ``cfg`` produces at a central vertex, over ``stages``
    stages, computed on the configuration alone."""
    from .central import forced_stages

    steep = steep if steep is not None else 4 * stages + 8
    bld = _Builder()
    c = bld.vertex(steep)
    attach(bld, cfg, role, c, steep)
    trace = forced_stages(bld.graph(), c, stages)
    return [st.m[0] for st in trace.stages]


@dataclass(frozen=True)
class AuxPlan:
    """Auxiliary components at the central vertex: a leaf of weight
    ``leaf`` (0 for none), ``A^1`` chains of the given lengths and
    ``long`` chains that stay constant over the observed stages."""

    leaf: int
    chains: tuple[int, ...]
    long: int
    long_length: int
    central_weight: int


def plan_auxiliary(seq: Sequence[int]) -> AuxPlan:
    """Choose auxiliary components so the stage sums at a central vertex
    are ``b0+1`` at the first stage, ``b0`` up to the last observed stage
    and below ``b0`` there, given the sequence ``seq`` of one component.

    Each auxiliary component starts at 1.  A chain ``A^1_m`` drops to 0
    exactly at multiples of ``m+1`` and a leaf of weight ``p`` is 1
    exactly at stages ``1 mod p``; the drops have to make up for the
    stages where ``seq`` does not drop.
    """
    L = len(seq)
    c1 = seq[0]
    for s in range(2, L):
        if seq[s - 1] not in (c1, c1 - 1):
            raise NoWitness(f"stage {s} value {seq[s - 1]} is neither {c1} nor {c1 - 1}")
    need = {s for s in range(2, L) if seq[s - 1] == c1}
    inner = range(2, L)
    for p in [0] + list(range(2, L + 1)):
        leaf_drops = {s for s in inner if p and (s - 1) % p != 0}
        if not leaf_drops <= need:
            continue
        rest = need - leaf_drops
        covered: set = set()
        periods = []
        ok = True
        for s in sorted(rest):
            if s in covered:
                continue
            mult = set(range(s, L, s))
            if not mult <= rest or mult & covered:
                ok = False
                break
            covered |= mult
            periods.append(s)
        if not ok or covered != rest:
            continue
        drops_at_end = (1 if p and (L - 1) % p != 0 else 0) + sum(1 for q in periods if L % q == 0)
        extra = max(0, seq[L - 1] - c1 + 2 - drops_at_end) if L > 1 else 0
        periods += [L] * extra
        atoms = (1 if p else 0) + len(periods)
        long = 0
        while atoms + long + c1 - 1 < 3:
            long += 1
        return AuxPlan(p, tuple(q - 1 for q in periods), long, L, atoms + long + c1 - 1)
    raise NoWitness("no combination of chains and a leaf matches the drops")


@dataclass(frozen=True)
class Witness:
    graph: ResolutionGraph
    central: int
    roles: dict = field(hash=False)
    plan: AuxPlan | None = None


def witness_graph(
    cfg: ConfigName, role: str = "L", stages: int | None = None
) -> Witness:
    """A rational graph where ``cfg`` hangs off a central vertex in the
    given role and the stage computation at that vertex runs for exactly
    ``stages`` stages (default: the predicted observation length)."""
    if stages is None:
        stages = predicted_multiplicity_sequence(cfg, role).observation_length()
    steep = 4 * stages + 8
    seq = local_sequence(cfg, role, stages, steep)
    plan = plan_auxiliary(seq)
    bld = _Builder()
    c = bld.vertex(plan.central_weight)
    roles = attach(bld, cfg, role, c, steep)
    if plan.leaf:
        v = bld.vertex(plan.leaf)
        bld.edges.append((c, v))
    for m in plan.chains:
        bld.chain(c, m)
    for _ in range(plan.long):
        bld.chain(c, plan.long_length)
    g = bld.graph()
    return Witness(g, c, roles, plan)


def witness_with_replacement(w: Witness, cfg: ConfigName, role: str, combo) -> Witness:
    """The same witness with the configuration replaced by ``combo``
    (``[(name, count), ...]``, all attached in role ``L``)."""
    keep = [v for v in range(w.graph.size) if v not in _config_part(w, cfg, role)]
    sub, index = w.graph.subgraph(keep)
    pos = {v: i for i, v in enumerate(index)}
    bld = _Builder(list(sub.weights), list(sub.edges))
    c = pos[w.central]
    steep = 4 * w.plan.long_length + 8 if w.plan else 40
    for part, count in combo:
        for _ in range(count):
            attach(bld, part, "L", c, steep)
    return Witness(bld.graph(), c, {}, w.plan)


def _config_part(w: Witness, cfg: ConfigName, role: str) -> set:
    part = set(w.roles["body"])
    for ro in cfg.roles:
        if ro != role:
            part.add(w.roles[ro])
    return part


# ---------------------------------------------------------------------------
# configurations between several non-(-2) vertices


@dataclass(frozen=True)
class AttachmentProfile:
    """Data around the attached vertices of one configuration.

    ``n_delta[role]``: coefficient, next to that vertex, of the fundamental
    cycle on the configuration plus its attached vertices.
    ``n_outer[role]``: ``(n^(1), n^(2))``, summed multiplicities next to the
    vertex of the first two stages computed on the vertex and its outer
    components (the components not reached through the configuration).
    ``deficiency[role]``: ``b + 1 - n_delta - n^(1)``; zero exactly for a
    bad vertex.
    """

    n_delta: dict
    n_outer: dict
    deficiency: dict = field(default_factory=dict)

    def __post_init__(self):
        # the deficiency may be negative
        for d in (self.n_delta, self.n_outer):
            for v in d.values():
                vals = v if isinstance(v, tuple) else (v,)
                if any(x < 0 for x in vals):
                    raise ValueError("profile entries must be non-negative")


def attachment_profile(
    graph: ResolutionGraph, comp: RdpComponent, roles: dict
) -> AttachmentProfile:
    from .central import forced_stages
    from .fundamental import fc

    body = set(comp.vertices)
    attached = set(roles.values())
    keep = sorted(body | attached)
    sub, index = graph.subgraph(keep)
    # the attached vertices are made steep so they stay reduced: this is
    # the cycle of the configuration as listed with its attachments
    steep = sub.with_weights(
        [w if v in body else max(w, 2 * len(keep) + 4) for v, w in zip(index, sub.weights)]
    )
    z = dict(zip(index, fc(steep)))
    n_delta, n_outer, deficiency = {}, {}, {}
    outer_comps = components_without(graph, sorted(body | attached))
    for role, v in roles.items():
        # with an empty configuration the attached vertices are adjacent
        near = body if body else attached
        n_delta[role] = sum(z[u] for u in graph.neighbors(v) if u in near)
        mine = [c for c in outer_comps if any(u in c for u in graph.neighbors(v))]
        if not mine:
            n_outer[role] = (0, 0)
        else:
            verts = sorted({v} | {u for c in mine for u in c})
            sg, idx = graph.subgraph(verts)
            tr = forced_stages(sg, idx.index(v), 2)
            n_outer[role] = tuple(sum(st.m) for st in tr.stages)
        deficiency[role] = graph.vertices[v].weight + 1 - n_delta[role] - n_outer[role][0]
    return AttachmentProfile(n_delta, n_outer, deficiency)


def is_bad_vertex(profile: AttachmentProfile, role: str, b: int) -> bool:
    if role not in profile.n_delta or role not in profile.n_outer:
        raise KeyError(f"profile has no data for role {role}")
    return profile.n_delta[role] + profile.n_outer[role][0] == b + 1


@dataclass(frozen=True)
class ConstraintResult:
    satisfied: bool
    system: str | None
    reason: str

    def __bool__(self):
        return self.satisfied


class NotCovered(ValueError):
    pass


def _by_n(n, cases):
    """``cases``: list of (predicate on n, offset)."""
    for pred, off in cases:
        if pred(n):
            return off
    raise AssertionError("no case applies")


def _systems(cfg: ConfigName):
    """Inequality systems as ``(label, [(role, stage, op, offset), ...])``:
    ``n_role^(stage) op b_role + offset``."""
    f, n, k = cfg.family, cfg.n, cfg.k
    if f == A11:
        return [("L bad", [("L", 1, "=", 0), ("L", 2, "<=", -2), ("R", 1, "=", -1), ("R", 2, "<=", -1)])]
    if f == IA:
        m2 = _by_n(n, [(lambda n: n <= 3 * k - 4, -k + 1), (lambda n: n == 3 * k - 3, -k), (lambda n: True, -k - 1)])
        l2 = -2 if n == 2 * k - 1 else -3
        return [
            ("M bad", [("L", 1, "=", -2), ("L", 2, "<=", -2), ("M", 1, "=", -k + 1), ("M", 2, "<=", m2)]),
            ("L bad", [("L", 1, "=", -1), ("L", 2, "<=", l2), ("M", 1, "=", -k), ("M", 2, "<=", -k)]),
        ]
    if f == IIA:
        m2 = _by_n(n, [(lambda n: n <= 3 * k - 5, -k + 1), (lambda n: n == 3 * k - 4, -k), (lambda n: True, -k - 1)])
        return [("", [("M", 1, "=", -k + 1), ("M", 2, "<=", m2), ("R", 1, "=", -1), ("R", 2, "<=", -2)])]
    if f == D2:
        if n % 2 == 1:
            kk = (n - 1) // 2
            return [("", [("L", 1, "=", -kk), ("L", 2, "<=", -kk), ("R", 1, "=", -1), ("R", 2, "<=", -3)])]
        kk = n // 2
        second = ("s=2", [("L", 1, "=", -kk), ("L", 2, "<=", -kk), ("R", 1, "=", -1), ("R", 2, "<=", -2)])
        if kk == 2:
            return [second]
        first = ("s=1", [("L", 1, "=", -kk + 1), ("L", 2, "<=", -kk + 1), ("R", 1, "=", -2), ("R", 2, "<=", -2)])
        return [first, second]
    if f == A2K2:
        out = []
        if k > 2:
            m2 = _by_n(n, [(lambda n: n <= 3 * k - 6, -k + 1), (lambda n: True, -k)])
            out.append(("R bad", [("L", 1, "<=", -3), ("M", 1, "=", -k + 1), ("M", 2, "<=", m2),
                                  ("R", 1, "=", -1), ("R", 2, "<=", -2)]))
            m2 = _by_n(n, [(lambda n: n <= 3 * k - 5, -k + 1), (lambda n: n == 3 * k - 4, -k), (lambda n: True, -k - 1)])
            out.append(("M bad, R reduced", [("L", 1, "=", -2), ("L", 2, "<=", -2), ("M", 1, "=", -k + 1),
                                             ("M", 2, "<=", m2), ("R", 1, "<=", -2)]))
            m2 = _by_n(n, [(lambda n: n <= 3 * k - 6, -k + 1), (lambda n: n == 3 * k - 5, -k), (lambda n: True, -k - 1)])
            out.append(("M bad, all two", [("L", 1, "=", -2), ("L", 2, "<=", -2), ("M", 1, "=", -k + 1),
                                           ("M", 2, "<=", m2), ("R", 1, "=", -1), ("R", 2, "<=", -2)]))
        out.append(("M reduced", [("L", 1, "=", -1), ("L", 2, "<=", -2), ("M", 1, "=", -k - 1),
                                  ("R", 1, "=", -1), ("R", 2, "<=", -2)]))
        l2 = -2 if n == 2 * k - 3 else -3
        out.append(("M not bad, all two", [("L", 1, "=", -1), ("L", 2, "<=", l2), ("M", 1, "=", -k),
                                           ("M", 2, "<=", -k), ("R", 1, "=", -1), ("R", 2, "<=", -2)]))
        return out
    raise NotCovered(f"{cfg} is not a configuration with several attached vertices")


def role_symmetries(cfg: ConfigName) -> list[dict]:
    """Role permutations, other than the identity, under which the
    configuration with its attached vertices looks the same."""
    from itertools import permutations

    from .graph import canonical_form

    roles = cfg.roles

    def form(weights: dict) -> str:
        bld = _Builder()
        at = {ro: bld.vertex(weights[ro]) for ro in roles}
        sh = shape(cfg)
        base = len(bld.weights)
        for _ in range(sh.size):
            bld.vertex(2)
        bld.edges.extend((base + i, base + j) for i, j in sh.edges)
        if cfg.family == A11 and cfg.n == 0:
            bld.edges.append((at["L"], at["R"]))
        else:
            bld.edges.extend((at[ro], base + sh.attach[ro]) for ro in roles)
        return canonical_form(bld.graph())

    marked = {ro: 10 + i for i, ro in enumerate(roles)}
    target = form(marked)
    out = []
    for perm in permutations(roles):
        swap = dict(zip(roles, perm))
        if any(a != b for a, b in swap.items()):
            if form({ro: marked[swap[ro]] for ro in roles}) == target:
                out.append(swap)
    return out


def multiplicity_two_constraints(
    cfg: ConfigName, profile: AttachmentProfile, weights: dict
) -> ConstraintResult:
    systems = _systems(cfg)
    swaps = [None] + role_symmetries(cfg)
    failures = []
    for swap in swaps:
        for label, conds in systems:
            why = None
            for role, stage, op, off in conds:
                ro = swap[role] if swap else role
                have = profile.n_outer[ro][stage - 1]
                bound = weights[ro] + off
                if (op == "=" and have != bound) or (op == "<=" and have > bound):
                    why = f"n_{ro}^({stage}) = {have}, need {op} {bound}"
                    break
            tag = label + (" (mirrored)" if swap else "")
            if why is None:
                return ConstraintResult(True, tag, "all conditions hold")
            failures.append(f"{tag or 'system'}: {why}")
    return ConstraintResult(False, None, "; ".join(failures))


def max_attachment_multiplicity_bound(cfg: ConfigName, role: str = "L") -> int | None:
    """Largest multiplicity the vertex in ``role`` can reach through this
    configuration, or None when the sequence never forces a stop."""
    seq = predicted_multiplicity_sequence(cfg, role)
    if not seq.finite:
        return None
    return len(seq.head)
