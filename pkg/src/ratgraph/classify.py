"""Bounded enumeration of rational graphs and verification of the
classification tables by exhaustive search."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .fundamental import fc, is_rational
from .lattice import check_negative_definite
from .graph import ResolutionGraph, canonical_form, self_intersection
from .model import almost_reduced_check, valency_criterion
from .rdp import (
    A,
    A11,
    A2K2,
    D2,
    E6,
    E7,
    IA,
    ID,
    IIA,
    IID,
    ConfigName,
    _Builder,
    attach,
    equivalent_configuration,
    local_sequence,
    role_symmetries,
    shape,
    table_rows,
)


@dataclass(frozen=True)
class EnumerationCaps:
    max_chain: int = 12
    max_components_per_vertex: int = 6
    max_weight: int = 10
    max_vertices: int = 12

    def __post_init__(self):
        for k, v in self.__dict__.items():
            if v < 1:
                raise ValueError(f"cap {k} must be at least 1")


def dedupe(graphs: Iterable[ResolutionGraph]) -> list[ResolutionGraph]:
    seen = {}
    for g in graphs:
        seen.setdefault(canonical_form(g), g)
    return [seen[k] for k in sorted(seen)]


# ---------------------------------------------------------------------------
# hypertrees and minimal representatives


@dataclass(frozen=True)
class Hypertree:
    size: int
    edges: tuple[tuple[int, int], ...]
    joints: tuple[tuple[int, int, int], ...]

    def tree(self, weights: Sequence[int]) -> ResolutionGraph:
        w = list(weights)
        edges = list(self.edges)
        for j in self.joints:
            w.append(2)
            edges += [(v, len(w) - 1) for v in j]
        return ResolutionGraph.build(w, edges)

    def valency(self, v: int) -> int:
        return sum(1 for e in self.edges + self.joints if v in e)


def hypertrees(max_size: int) -> list[Hypertree]:
    """All hypertrees with edges and T-joints on at most ``max_size``
    vertices, up to isomorphism."""
    found = {}
    frontier = [Hypertree(1, (), ())]
    while frontier:
        nxt = []
        for h in frontier:
            key = canonical_form(h.tree([3] * h.size))
            if key in found:
                continue
            found[key] = h
            for v in range(h.size):
                if h.size + 1 <= max_size:
                    nxt.append(Hypertree(h.size + 1, h.edges + ((v, h.size),), h.joints))
                if h.size + 2 <= max_size:
                    nxt.append(
                        Hypertree(h.size + 2, h.edges, h.joints + ((v, h.size, h.size + 1),))
                    )
        frontier = nxt
    return [found[k] for k in sorted(found)]


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def reduced_models(m: int) -> Iterator[tuple[Hypertree, tuple[int, ...]]]:
    """Hypertrees with weights ``b_i >= 3`` and ``sum(b_i - 2) = m - 2``."""
    for h in hypertrees(m - 2):
        for extra in _compositions(m - 2 - h.size, h.size):
            yield h, tuple(3 + e for e in extra)


def enumerate_minimal_representatives(m: int) -> list[ResolutionGraph]:
    if m < 3:
        raise ValueError("degree must be at least 3")
    out = []
    for h, weights in reduced_models(m):
        g = h.tree(weights)
        if valency_criterion(g) and is_rational(g) and almost_reduced_check(g):
            if -self_intersection(g, fc(g)) != m:
                raise AssertionError("degree differs from canonical-degree count")
            out.append(g)
    return dedupe(out)


# ---------------------------------------------------------------------------
# one vertex with many configurations: stage-sum arithmetic


def central_multiplicity_from_sequences(b0: int, seqs: Sequence[Sequence[int]]) -> int | None:
    """Multiplicity of a central vertex of weight ``b0`` whose components
    have the given sequences; None when a stage sum shows the graph is not
    rational (``Z.E0 > 1`` before adding ``E0``)."""
    length = min(len(s) for s in seqs) if seqs else 1
    value = 0
    for s in range(length):
        value += sum(q[s] for q in seqs) - b0
        if value > 1:
            return None
        if value <= 0:
            return s + 1
    raise ValueError("sequences too short to decide")


def single_vertex_types(max_a1: int = 8, max_l: int = 6) -> list[ConfigName]:
    return [ConfigName(A, n, 1) for n in range(1, max_a1 + 1)] + [
        ConfigName(A, 2 * l, 2) for l in range(2, max_l + 1)
    ]


@dataclass(frozen=True)
class SingleVertexResult:
    maximum: int
    witnesses: dict = field(hash=False)  # multiplicity -> list of (b, combination)
    searched: int = 0


def search_single_vertex(
    max_a1: int = 8, max_l: int = 6, max_parts: int = 6, weights: Iterable[int] = range(3, 11)
) -> SingleVertexResult:
    """Every multiset of ``A^1_n`` and ``A^2_{2l}`` at one vertex."""
    types = single_vertex_types(max_a1, max_l)
    horizon = 16
    seq = {t: local_sequence(t, "L", horizon) for t in types}
    witnesses: dict[int, list] = {}
    best = 0
    count = 0
    weights = list(weights)
    for size in range(1, max_parts + 1):
        for combo in itertools.combinations_with_replacement(types, size):
            seqs = [seq[t] for t in combo]
            for b in weights:
                count += 1
                z = central_multiplicity_from_sequences(b, seqs)
                if z is None:
                    continue
                if z >= 5:
                    witnesses.setdefault(z, []).append((b, combo))
                best = max(best, z)
    return SingleVertexResult(best, witnesses, count)


def star_graph(b0: int, combo: Sequence[ConfigName]) -> ResolutionGraph:
    """A vertex of weight ``b0`` with the given single-attachment configurations."""
    bld = _Builder()
    c = bld.vertex(b0)
    for cfg in combo:
        attach(bld, cfg, "L", c, 0)
    return bld.graph()


def combo_name(combo: Sequence[ConfigName]) -> str:
    counts = Counter(combo)
    return "+".join(
        (f"{k}" if k > 1 else "") + cfg.render() for cfg, k in sorted(counts.items())
    )


# ---------------------------------------------------------------------------
# combinations of configurations and their first multiplicities


@dataclass(frozen=True)
class SequenceClass:
    """``C(m1, m2)``, or ``C(m1, <=m2)`` when ``at_most``: every
    combination whose first two stage sums are ``m1`` and ``m2``."""

    m1: int
    m2: int
    at_most: bool = False

    def pairs(self) -> list[tuple[int, int]]:
        if self.at_most:
            return [(self.m1, c) for c in range(0, min(self.m2, self.m1) + 1)]
        return [(self.m1, self.m2)]

    def render(self) -> str:
        return f"C({self.m1},{'<=' if self.at_most else ''}{self.m2})"

    __str__ = render


def C(text: str) -> SequenceClass:
    """``C("2,<=1")`` is ``C(2, <=1)``."""
    a, b = (x.strip() for x in text.split(","))
    if b.startswith("<="):
        return SequenceClass(int(a), int(b[2:]), True)
    return SequenceClass(int(a), int(b))


@dataclass(frozen=True)
class ConfigCombination:
    """A multiset of single-attachment configurations at one vertex."""

    parts: tuple[ConfigName, ...] = ()

    def __post_init__(self):
        if any(len(p.roles) != 1 for p in self.parts):
            raise ValueError("combinations hold single-attachment configurations only")
        object.__setattr__(self, "parts", tuple(sorted(self.parts)))

    def stage_sums(self, stages: int) -> tuple[int, ...]:
        seqs = [local_sequence(p, "L", stages) for p in self.parts]
        return tuple(sum(s[i] for s in seqs) for i in range(stages))

    def render(self) -> str:
        return combo_name(self.parts) if self.parts else "0"

    __str__ = render


def representative(pair: tuple[int, int]) -> ConfigCombination:
    """``c`` copies of ``A^1_2`` and ``a - c`` of ``A^1_1`` realise the
    first stage sums ``(a, c)``."""
    a, c = pair
    if not 0 <= c <= a:
        raise ValueError(f"no combination has first sums {pair}")
    return ConfigCombination((ConfigName(A, 2, 1),) * c + (ConfigName(A, 1, 1),) * (a - c))


def outer_pairs(max_first: int) -> list[tuple[int, int]]:
    return [(a, c) for a in range(max_first + 1) for c in range(a + 1)]


def assemble(
    core_weights: Sequence[int],
    bridges: Sequence[tuple[ConfigName, dict]],
    outer: dict,
) -> ResolutionGraph:
    """Core vertices ``0..p-1`` with the given weights, configurations
    joining them (``(cfg, {role: core index})``) and a combination hung
    from each core vertex (``{core index: ConfigCombination}``)."""
    bld = _Builder()
    for b in core_weights:
        bld.vertex(b)
    for cfg, placed in bridges:
        sh = shape(cfg)
        base = len(bld.weights)
        for _ in range(sh.size):
            bld.vertex(2)
        bld.edges.extend((base + i, base + j) for i, j in sh.edges)
        if cfg.family == A11 and cfg.n == 0:
            bld.edges.append((placed["L"], placed["R"]))
        else:
            bld.edges.extend((placed[ro], base + sh.attach[ro]) for ro in cfg.roles)
    for at, combo in sorted(outer.items()):
        for part in combo.parts:
            attach(bld, part, "L", at, 0)
    return bld.graph()


def core_multiplicities(graph: ResolutionGraph, cores: Sequence[int]) -> tuple[int, ...] | None:
    """Fundamental-cycle coefficients at ``cores``; None if not rational."""
    if not is_rational(graph):
        return None
    z = fc(graph)
    return tuple(z[c] for c in cores)


def _orbit_key(cfg: ConfigName, assign: dict) -> tuple:
    """Smallest role assignment over the symmetries of ``cfg``."""
    options = [tuple(assign[ro] for ro in cfg.roles)]
    for swap in role_symmetries(cfg):
        options.append(tuple(assign[swap[ro]] for ro in cfg.roles))
    return (cfg, min(options))


@dataclass
class RowCheck:
    label: str
    realized: bool
    witness: ResolutionGraph | None = None
    note: str = ""


@dataclass
class TableCheck:
    """Outcome of a two-sided table comparison within caps."""

    name: str
    rows: list[RowCheck]
    extra: list[str]
    missing: list[str]
    caps: str = ""

    @property
    def ok(self) -> bool:
        """Every row realized and nothing realized outside the table;
        ``missing`` lists table entries without a witness, for rows
        that only claim some ``n``."""
        return all(r.realized for r in self.rows) and not self.extra

    def render(self) -> str:
        out = [f"{self.name}  ({self.caps})"]
        for r in self.rows:
            mark = "PASS" if r.realized else "FAIL"
            out.append(f"  {mark}  {r.label}" + (f"  [{r.note}]" if r.note else ""))
        for e in self.extra:
            out.append(f"  EXTRA {e}")
        for m in self.missing:
            out.append(f"  MISSING {m}")
        out.append(f"  {'PASS' if self.ok else 'FAIL'}  {self.name}")
        return "\n".join(out)


def _expand(cfgs, classes_by_role) -> set:
    keys = set()
    for cfg in cfgs:
        roles = cfg.roles
        for combo in itertools.product(*(classes_by_role[i].pairs() for i in range(len(roles)))):
            keys.add(_orbit_key(cfg, dict(zip(roles, combo))))
    return keys


def _row_cfgs(family: str, k: int, n_min: int, n_max: int | None, cap: int) -> list[ConfigName]:
    top = cap if n_max is None else min(n_max, cap)
    return [ConfigName(family, n, k) for n in range(n_min, top + 1)]


def _compare(name, table, realized, cap, caps_text) -> TableCheck:
    """``table``: rows ``(family, k, n_min, n_max, classes[, mode])``;
    ``realized``: key -> witness graph.  A row written with ``>=`` must
    hold for every ``n`` in range (mode ``"all"``); a row written with a
    bare ``n`` (mode ``"some"``) needs one ``n``, and the others are
    listed in the row note."""
    rows, expected = [], set()
    for row in table:
        family, k, n_min, n_max, classes = row[:5]
        mode = row[5] if len(row) > 5 else "all"
        cfgs = _row_cfgs(family, k, n_min, n_max, cap)
        good, bad, witness = [], [], None
        for cfg in cfgs:
            keys = _expand([cfg], classes)
            expected |= keys
            if all(x in realized for x in keys):
                good.append(cfg.n)
                witness = witness or realized[min(keys, key=repr)]
            else:
                bad.append(cfg.n)
        ok = bool(good) and (not bad or mode == "some")
        span = f"{n_min}" if n_max == n_min else f"{n_min}..{n_max if n_max else cap}"
        label = f"{ConfigName(family, n_min, k).render()} n={span}: " + " / ".join(
            c.render() for c in classes
        )
        note = f"not realized for n in {bad}" if bad else ""
        rows.append(RowCheck(label, ok, witness, note))
    extra = [_key_text(x) for x in sorted(set(realized) - expected, key=repr)]
    missing = [_key_text(x) for x in sorted(expected - set(realized), key=repr)]
    return TableCheck(name, rows, extra, missing, caps_text)


def _key_text(key) -> str:
    cfg, pairs = key
    return cfg.render() + " " + " / ".join(f"{ro}{p}" for ro, p in zip(cfg.roles, pairs))


def two_role_bridges(max_n: int, max_k: int = 5) -> list[ConfigName]:
    """Configurations joining two vertices, within caps; the I name at
    ``n = 2k-2`` is left out since it is the II configuration."""
    out = [ConfigName(A11, n) for n in range(0, max_n + 1)]
    for k in range(2, max_k + 1):
        out += [ConfigName(IA, n, k) for n in range(2 * k - 1, max_n + 1)]
        out += [ConfigName(IIA, n, k) for n in range(max(1, 2 * k - 2), max_n + 1)]
    out += [ConfigName(D2, n) for n in range(4, max_n + 1)]
    return out


# two (-3)'s of multiplicity two joined by one configuration; classes per role
DEGREE6_TWO_THREES = [
    (A11, 1, 0, None, (C("3,<=1"), C("2,<=2"))),
    (IA, 2, 3, 3, (C("2,<=1"), C("1,<=1"))),
    (IA, 2, 4, None, (C("2,0"), C("1,<=1"))),
    (IA, 3, 5, 5, (C("2,<=1"), C("0,0"))),
    (IA, 3, 6, None, (C("2,0"), C("0,0"))),
    (IA, 3, 5, 5, (C("1,<=1"), C("1,<=1"))),
    (IA, 3, 6, 6, (C("1,<=1"), C("1,0"))),
    (IA, 4, 7, 7, (C("1,<=1"), C("0,0"))),
    (IA, 4, 8, 8, (C("1,<=1"), C("0,0"))),
    (IIA, 2, 2, 2, (C("2,<=1"), C("2,<=1"))),
    (IIA, 2, 3, None, (C("2,0"), C("2,<=1"))),
    (IIA, 3, 4, 4, (C("1,<=1"), C("2,<=1"))),
    (IIA, 3, 5, 5, (C("1,0"), C("2,<=1"))),
    (IIA, 4, 6, 6, (C("0,0"), C("2,<=1"))),
    (IIA, 4, 7, 7, (C("0,0"), C("2,<=1"))),
    (D2, 1, 4, 4, (C("1,<=1"), C("2,<=1"))),
    (D2, 1, 5, 5, (C("1,<=1"), C("2,0"))),
    (D2, 1, 6, 6, (C("0,0"), C("2,<=1"))),
    (D2, 1, 6, 6, (C("1,<=1"), C("1,<=1"))),
    (D2, 1, 7, 7, (C("0,0"), C("2,0"))),
    (D2, 1, 8, 8, (C("0,0"), C("1,<=1"))),
]


def verify_degree6_two_threes(caps: EnumerationCaps = EnumerationCaps(max_chain=9)) -> TableCheck:
    """Every graph of two (-3)'s joined by one configuration (within
    caps), with representative combinations of every first-sum pair at
    both ends; those where both (-3)'s have multiplicity 2 are compared
    with the table in both directions."""
    b = 3
    realized = {}
    for cfg in two_role_bridges(caps.max_chain):
        r1, r2 = cfg.roles
        for p in outer_pairs(b + 1):
            for q in outer_pairs(b + 1):
                g = assemble([b, b], [(cfg, {r1: 0, r2: 1})], {0: representative(p), 1: representative(q)})
                if core_multiplicities(g, (0, 1)) == (2, 2):
                    realized.setdefault(_orbit_key(cfg, {r1: p, r2: q}), g)
    return _compare(
        "two (-3)'s of multiplicity 2", DEGREE6_TWO_THREES, realized, caps.max_chain,
        f"bridges n <= {caps.max_chain}, k <= 5, first sums <= {b + 1}",
    )


# ---------------------------------------------------------------------------
# one (-3) of multiplicity 4


def single_attachment_types(max_n: int, max_k: int = 5) -> list[ConfigName]:
    out = []
    for k in range(1, max_k + 1):
        out += [ConfigName(A, n, k) for n in range(2 * k - 1, max_n + 1)]
    out += [ConfigName(ID, n) for n in range(4, max_n + 1)]
    out += [ConfigName(IID, n) for n in range(5, max_n + 1) if n % 2 or n // 2 > 2]
    out += [ConfigName(E6, 6), ConfigName(E7, 7)]
    return out


def normal_form(combo: Sequence[ConfigName]) -> tuple[ConfigName, ...]:
    """Replace every configuration by its equivalent combination until
    none has one."""
    out = []
    todo = list(combo)
    while todo:
        cfg = todo.pop()
        eq = equivalent_configuration(cfg, "L")
        if eq is None:
            out.append(cfg)
        else:
            for part, count in eq:
                todo.extend([part] * count)
    return tuple(sorted(out))


def combinations_with_multiplicity(
    b: int, z0: int, max_n: int, max_parts: int = 6
) -> list[tuple[ConfigName, ...]]:
    """Multisets of single-attachment configurations (within caps) that
    give a vertex of weight ``b`` multiplicity exactly ``z0``, found by
    stage-sum arithmetic."""
    horizon = z0 + 2
    types = single_attachment_types(max_n)
    seq = {t: local_sequence(t, "L", horizon) for t in types}
    found = []

    def grow(start: int, chosen: list, first: int):
        if first == b + 1 and chosen:
            if central_multiplicity_from_sequences(b, [seq[t] for t in chosen]) == z0:
                found.append(tuple(chosen))
            return
        if len(chosen) == max_parts:
            return
        for i in range(start, len(types)):
            m1 = seq[types[i]][0]
            if first + m1 <= b + 1:
                grow(i, chosen + [types[i]], first + m1)

    if z0 == 1:
        raise ValueError("multiplicity one needs no stage computation")
    grow(0, [], 0)
    return found


def _a1(n: int) -> ConfigName:
    return ConfigName(A, n, 1)


def single_mult4_printed(max_n: int) -> list[tuple[ConfigName, ...]]:
    """The printed list for one (-3) of multiplicity 4, with each
    ``A^1_{>=3}`` expanded up to ``max_n``."""
    a42, a62, a72, a82 = (ConfigName(A, n, 2) for n in (4, 6, 7, 8))
    d5 = ConfigName(IID, 5)
    fixed = [
        (a42, _a1(3), _a1(3)),
        (a42, a72),
        (d5, a62),
        (_a1(1), _a1(2), a82),
        (_a1(1), ConfigName(A, 10, 3)),
        (_a1(1), _a1(2), a72),
    ]
    open_ended = [
        (_a1(1), a62),
        (_a1(1), _a1(2), _a1(3)),
        (d5, _a1(2)),
    ]
    out = [tuple(sorted(c)) for c in fixed]
    for base in open_ended:
        out += [tuple(sorted(base + (_a1(n),))) for n in range(3, max_n + 1)]
    return out


def verify_degree6_single_mult4(caps: EnumerationCaps = EnumerationCaps()) -> TableCheck:
    """All combinations at one (-3) giving multiplicity 4, compared with
    the printed list after reducing both to normal form.  Each printed
    combination is also confirmed by a full fundamental cycle."""
    b, z0 = 3, 4
    found = combinations_with_multiplicity(b, z0, caps.max_chain, caps.max_components_per_vertex)
    printed = single_mult4_printed(caps.max_chain)
    found_nf = {normal_form(c) for c in found}
    printed_nf = {normal_form(c) for c in printed}
    rows = []
    for combo in printed:
        g = star_graph(b, combo)
        z = core_multiplicities(g, (0,))
        rows.append(RowCheck(combo_name(combo), z == (z0,), g, "" if z == (z0,) else f"multiplicity {z}"))
    extra = [
        combo_name(c) + "  (normal form " + combo_name(normal_form(c)) + ")"
        for c in found
        if normal_form(c) not in printed_nf
    ]
    missing = [combo_name(c) for c in sorted(printed_nf - found_nf)]
    return TableCheck(
        "one (-3) of multiplicity 4", rows, extra, missing,
        f"single-attachment configurations with n <= {caps.max_chain}, k <= 5, "
        f"<= {caps.max_components_per_vertex} per vertex",
    )


# ---------------------------------------------------------------------------
# degree 8: three (-3)'s of multiplicity 2

DEGREE8_T_JOINT = [
    (A2K2, 2, 1, 1, (C("2,<=1"), C("1,<=1"), C("2,<=1"))),
    (A2K2, 2, 2, None, (C("2,0"), C("1,<=1"), C("2,<=1")), "some"),
    (A2K2, 3, 3, 3, (C("2,<=1"), C("0,0"), C("2,<=1"))),
    (A2K2, 3, 4, None, (C("2,0"), C("0,0"), C("2,<=1")), "some"),
    (A2K2, 3, 3, 3, (C("1,<=1"), C("1,<=1"), C("2,<=1"))),
    (A2K2, 3, 4, None, (C("1,<=1"), C("1,0"), C("2,<=1")), "some"),
    (A2K2, 4, 5, 5, (C("1,<=1"), C("0,0"), C("2,<=1"))),
    (A2K2, 4, 6, 6, (C("1,<=1"), C("0,0"), C("2,<=1"))),
]


def t_joint_bridges(max_n: int, max_k: int = 5) -> list[ConfigName]:
    return [
        ConfigName(A2K2, n, k)
        for k in range(2, max_k + 1)
        for n in range(max(1, 2 * k - 3), max_n + 1)
    ]


def verify_degree8_t_joint(caps: EnumerationCaps = EnumerationCaps(max_chain=8)) -> TableCheck:
    b = 3
    realized = {}
    pairs = outer_pairs(b)
    for cfg in t_joint_bridges(caps.max_chain):
        roles = cfg.roles
        for combo in itertools.product(pairs, repeat=3):
            assign = dict(zip(roles, combo))
            key = _orbit_key(cfg, assign)
            if key in realized:
                continue
            g = assemble(
                [b] * 3,
                [(cfg, {ro: i for i, ro in enumerate(roles)})],
                {i: representative(p) for i, p in enumerate(combo)},
            )
            if core_multiplicities(g, (0, 1, 2)) == (2, 2, 2):
                realized[key] = g
    return _compare(
        "three (-3)'s of multiplicity 2 at one A^{2,k,2}", DEGREE8_T_JOINT, realized,
        caps.max_chain, f"n <= {caps.max_chain}, k <= 5, first sums <= {b}",
    )


@dataclass(frozen=True)
class ChainPiece:
    """One side of a chain ``E_L - E_M - E_R``: a configuration joining
    ``E_M`` (in ``centre_role``) to the end vertex, with a combination of
    first sums ``outer`` at the end vertex.  ``sequence`` is what the
    side contributes at ``E_M`` in the first two stages, ``end`` the
    coefficient of the end vertex after them."""

    cfg: ConfigName
    centre_role: str
    end_role: str
    outer: tuple[int, int]
    sequence: tuple[int, int]
    end: int
    bad: bool
    bad_by_stage: bool

    def render(self) -> str:
        return f"{self.cfg.render(self.centre_role)}+{representative(self.outer)}"


def chain_pieces(max_n: int, b: int = 3) -> list[ChainPiece]:
    from .central import forced_stages
    from .rdp import RdpComponent, attachment_profile, is_bad_vertex

    out = []
    for cfg in two_role_bridges(max_n):
        for rho in cfg.roles:
            (other,) = [ro for ro in cfg.roles if ro != rho]
            if rho == other:
                continue
            for p in outer_pairs(b + 1):
                g = assemble([b, b], [(cfg, {rho: 0, other: 1})], {1: representative(p)})
                side, _ = g.subgraph(range(1, g.size))
                if not check_negative_definite(side).is_negative_definite:
                    continue
                tr = forced_stages(g, 0, 2)
                body = tuple(range(2, 2 + shape(cfg).size))
                prof = attachment_profile(g, RdpComponent(body, "", ()), {rho: 0, other: 1})
                y1_end = tr.stages[0].total[1]
                out.append(ChainPiece(
                    cfg, rho, other, p,
                    tuple(st.m[0] for st in tr.stages), tr.final[1],
                    is_bad_vertex(prof, other, b), y1_end == 2,
                ))
    return out


def chain_graph(left: ChainPiece, middle: tuple[int, int], right: ChainPiece, b: int = 3) -> ResolutionGraph:
    """Core vertices 0, 1, 2 are ``E_L``, ``E_M``, ``E_R``."""
    return assemble(
        [b] * 3,
        [(left.cfg, {left.centre_role: 1, left.end_role: 0}),
         (right.cfg, {right.centre_role: 1, right.end_role: 2})],
        {0: representative(left.outer), 1: representative(middle), 2: representative(right.outer)},
    )


CHAIN_SEQUENCES = [
    (C("3,<=1"), C("0,0"), C("1,1")),
    (C("2,<=2"), C("0,0"), C("2,0")),
    (C("2,1"), C("0,0"), C("2,1")),
    (C("2,0"), C("1,<=1"), C("1,1")),
    (C("2,1"), C("1,0"), C("1,1")),
    (C("1,1"), C("2,0"), C("1,1")),
]


def _side_key(s_l, s_m, s_r):
    return max((s_l, s_m, s_r), (s_r, s_m, s_l))


@dataclass
class ChainSearch:
    pieces: list
    triples: dict          # normalised (sL, sM, sR) -> (left piece, middle pair, right piece, graph)
    sequences: TableCheck
    attachments: TableCheck


def _chain_triples(pieces, b: int, tries: int = 6) -> dict:
    by_seq: dict = {}
    for pc in pieces:
        if pc.end == 2:
            by_seq.setdefault(pc.sequence, []).append(pc)
    triples = {}
    for s_l, s_r in itertools.product(sorted(by_seq), repeat=2):
        for s_m in outer_pairs(b + 1):
            if s_l[0] + s_m[0] + s_r[0] != b + 1 or s_l[1] + s_m[1] + s_r[1] > b - 1:
                continue
            key = _side_key(s_l, s_m, s_r)
            if key in triples:
                continue
            for left, right in itertools.islice(itertools.product(by_seq[s_l], by_seq[s_r]), tries):
                g = chain_graph(left, s_m, right, b)
                if core_multiplicities(g, (0, 1, 2)) == (2, 2, 2):
                    triples[key] = (left, s_m, right, g)
                    break
    return triples


# attachments at E_L: (sequence at E_M, E_L bad, family, k, n_min, n_max, class at E_L)
CHAIN_END_ATTACHMENTS = [
    ((1, 1), False, A11, 1, 0, None, C("2,<=2")),
    ((2, 0), True, A11, 1, 0, None, C("3,<=1")),
    ((2, 1), True, IIA, 2, 2, 2, C("2,<=1")),
    ((2, 1), True, IIA, 2, 3, 3, C("2,0")),
    ((2, 1), True, IIA, 3, 4, 4, C("1,<=1")),
    ((2, 1), True, IIA, 3, 5, 5, C("1,0")),
    ((2, 1), True, IIA, 4, 6, 6, C("0,0")),
    ((2, 1), True, IIA, 4, 7, 7, C("0,0")),
    ((2, 1), False, IA, 2, 3, 3, C("1,<=1")),
    ((2, 1), False, D2, 1, 4, 4, C("1,<=1")),
    ((2, 1), False, IA, 3, 5, 5, C("0,0")),
    ((2, 1), False, D2, 1, 6, 6, C("0,0")),
    ((2, 2), True, IIA, 2, 3, None, C("2,<=2")),
    ((2, 2), True, D2, 1, 5, 5, C("1,<=1")),
    ((2, 2), False, IA, 2, 4, None, C("1,<=1")),
    ((2, 2), False, IA, 3, 6, None, C("0,0")),
    ((2, 2), True, D2, 1, 7, 7, C("0,0")),
    ((3, 0), True, IA, 2, 3, 3, C("2,0")),
    ((3, 0), True, D2, 1, 4, 4, C("2,<=1")),
    ((3, 0), True, IA, 3, 5, 5, C("1,0")),
    ((3, 0), True, D2, 1, 6, 6, C("1,<=1")),
    ((3, 0), True, IA, 4, 7, 7, C("0,0")),
    ((3, 0), True, D2, 1, 8, 8, C("0,0")),
    ((3, 1), True, IA, 2, 4, None, C("2,0")),
    ((3, 1), True, IIA, 3, 4, 4, C("2,0")),
    ((3, 1), True, D2, 1, 5, 5, C("2,0")),
    ((3, 1), True, IA, 3, 6, 6, C("1,0")),
    ((3, 1), True, IA, 4, 8, 8, C("0,0")),
    ((3, 1), False, IA, 3, 5, 5, C("1,<=1")),
    ((3, 1), False, D2, 1, 6, 6, C("1,<=1")),
]


def _piece_key(pc: ChainPiece) -> tuple:
    return (pc.cfg, pc.outer, pc.sequence, pc.bad)


def _piece_key_text(key) -> str:
    cfg, outer, seq, bad = key
    return f"{seq} {'bad' if bad else 'not bad'}: {cfg.render()}+{representative(outer)}"


def verify_chain_of_three(caps: EnumerationCaps = EnumerationCaps(max_chain=9)) -> ChainSearch:
    b = 3
    pieces = chain_pieces(caps.max_chain, b)
    triples = _chain_triples(pieces, b)
    caps_text = f"configurations n <= {caps.max_chain}, k <= 5, first sums <= {b + 1}"

    expected = {}
    for classes in CHAIN_SEQUENCES:
        for combo in itertools.product(*(c.pairs() for c in classes)):
            expected[_side_key(*combo)] = " / ".join(c.render() for c in classes)
    rows = []
    for classes in CHAIN_SEQUENCES:
        keys = {_side_key(*combo) for combo in itertools.product(*(c.pairs() for c in classes))}
        miss = [k for k in keys if k not in triples]
        hit = [triples[k][3] for k in sorted(keys) if k in triples]
        rows.append(RowCheck(" / ".join(c.render() for c in classes), not miss,
                             hit[0] if hit else None, f"not realized: {miss}" if miss else ""))
    extra = [str(k) for k in sorted(set(triples) - set(expected))]
    missing = [str(k) for k in sorted(set(expected) - set(triples))]
    seq_check = TableCheck("chain of three (-3)'s: sequences at the middle vertex",
                           rows, extra, missing, caps_text)

    # attachments at an end vertex, each confirmed inside a full chain
    by_side: dict = {}
    for left, s_m, right, _ in triples.values():
        by_side.setdefault(left.sequence, (s_m, right, False))
        by_side.setdefault(right.sequence, (s_m, left, True))
    realized = {}
    for pc in pieces:
        if pc.end != 2 or pc.sequence not in by_side or _piece_key(pc) in realized:
            continue
        s_m, partner, swap = by_side[pc.sequence]
        g = chain_graph(partner, s_m, pc, b) if swap else chain_graph(pc, s_m, partner, b)
        if core_multiplicities(g, (0, 1, 2)) == (2, 2, 2):
            if pc.bad != pc.bad_by_stage:
                raise AssertionError(f"bad-vertex routes disagree on {pc.render()}")
            realized[_piece_key(pc)] = g
    rows, table_keys = [], set()
    for seq, bad, family, k, n_min, n_max, cls in CHAIN_END_ATTACHMENTS:
        keys = {(cfg, pair, seq, bad) for cfg in _row_cfgs(family, k, n_min, n_max, caps.max_chain)
                for pair in cls.pairs()}
        table_keys |= keys
        miss = [x for x in keys if x not in realized]
        hit = [realized[x] for x in sorted(keys, key=repr) if x in realized]
        span = f"{n_min}" if n_max == n_min else f"{n_min}..{n_max if n_max else caps.max_chain}"
        label = f"{seq} {'bad' if bad else 'not bad'}: {ConfigName(family, n_min, k).render()} n={span} + {cls}"
        rows.append(RowCheck(label, bool(keys) and not miss, hit[0] if hit else None,
                             f"{len(miss)} of {len(keys)} not realized" if miss else ""))
    extra = [_piece_key_text(x) for x in sorted(set(realized) - table_keys, key=repr)]
    missing = [_piece_key_text(x) for x in sorted(table_keys - set(realized), key=repr)]
    att_check = TableCheck("chain of three (-3)'s: attachments at an end vertex",
                           rows, extra, missing, caps_text)
    return ChainSearch(pieces, triples, seq_check, att_check)


def printed_degree8_chains() -> dict[str, ResolutionGraph]:
    """The three drawn chains of three (-3)'s, with single (-2)'s hung
    from the squares: (3, 0, 3), (3, 1, 2) and (2, 2, 2) of them."""
    a11_0 = ConfigName(A11, 0)
    out = {}
    for label, counts in (("first", (3, 0, 3)), ("second", (3, 1, 2)), ("third", (2, 2, 2))):
        out[label] = assemble(
            [3, 3, 3],
            [(a11_0, {"L": 0, "R": 1}), (a11_0, {"L": 1, "R": 2})],
            {i: ConfigCombination((_a1(1),) * c) for i, c in enumerate(counts)},
        )
    return out


def verify_printed_degree8() -> TableCheck:
    from .fundamental import degree

    rows = []
    for label, g in printed_degree8_chains().items():
        z = core_multiplicities(g, (0, 1, 2))
        ok = z == (2, 2, 2) and degree(g) == 8
        rows.append(RowCheck(f"{label} drawn graph", ok, g,
                             "" if ok else f"multiplicities {z}"))
    return TableCheck("drawn degree-8 chains", rows, [], [], "as drawn")


def verify_degree8_triple(caps: EnumerationCaps = EnumerationCaps(max_chain=8)) -> list[TableCheck]:
    chain = verify_chain_of_three(caps)
    return [verify_degree8_t_joint(caps), chain.sequences, chain.attachments, verify_printed_degree8()]


# ---------------------------------------------------------------------------
# almost reduced fundamental cycle


def _load(cfg: ConfigName) -> dict:
    """Neighbour multiplicity each role puts on its non-(-2)."""
    return dict(zip(cfg.roles, cfg.superscript))


def _placements(cfg: ConfigName, targets: Sequence[int]) -> list[dict]:
    """Role assignments onto ``targets``, one per orbit of the symmetries."""
    seen, out = set(), []
    for perm in itertools.permutations(targets):
        assign = dict(zip(cfg.roles, perm))
        key = _orbit_key(cfg, assign)
        if key not in seen:
            seen.add(key)
            out.append(assign)
    return out


def _outer_choices(budget: int, room: int, types: Sequence[ConfigName], max_parts: int):
    """Multisets of single-attachment types with total load at most
    ``budget`` and at most ``room`` vertices."""

    def grow(start, chosen, load, size):
        yield ConfigCombination(tuple(chosen)), size
        if len(chosen) == max_parts:
            return
        for i in range(start, len(types)):
            t = types[i]
            if load + t.superscript[0] <= budget and size + t.n <= room:
                yield from grow(i, chosen + [t], load + t.superscript[0], size + t.n)

    yield from grow(0, [], 0, 0)


def enumerate_almost_reduced(
    m: int, caps: EnumerationCaps = EnumerationCaps(max_chain=4, max_vertices=8)
) -> Iterator[ResolutionGraph]:
    """Graphs of degree ``m`` with almost reduced fundamental cycle, built
    from weighted hypertrees by putting a configuration on each T-joint,
    optionally on edges, and hanging configurations from vertices, as long
    as the neighbours of every vertex carry total multiplicity at most its
    weight.  Each graph is yielded once."""
    if m < 3:
        raise ValueError("degree must be at least 3")
    k_cap = (caps.max_chain + 3) // 2
    edge_opts = [c for c in two_role_bridges(caps.max_chain, k_cap) if c.n <= caps.max_chain]
    joint_opts = t_joint_bridges(caps.max_chain, k_cap)
    singles = [t for t in single_attachment_types(caps.max_chain, k_cap) if t.n <= caps.max_chain]
    seen = set()
    for h, weights in reduced_models(m):
        if max(weights) > caps.max_weight or h.size > caps.max_vertices:
            continue
        if any(weights[v] < h.valency(v) for v in range(h.size)):
            continue
        slots = [(e, edge_opts) for e in h.edges] + [(j, joint_opts) for j in h.joints]

        def bridges(i, chosen, load, size):
            if i == len(slots):
                yield list(chosen), load, size
                return
            targets, opts = slots[i]
            for cfg in opts:
                if size + cfg.n > caps.max_vertices:
                    continue
                for assign in _placements(cfg, targets):
                    new = list(load)
                    for ro, amount in _load(cfg).items():
                        new[assign[ro]] += amount
                    if all(new[v] <= weights[v] for v in targets):
                        yield from bridges(i + 1, chosen + [(cfg, assign)], new, size + cfg.n)

        for chosen, load, size in bridges(0, [], [0] * h.size, h.size):

            def outers(v, acc, size):
                if v == h.size:
                    yield dict(acc)
                    return
                for combo, used in _outer_choices(
                    weights[v] - load[v], caps.max_vertices - size, singles,
                    caps.max_components_per_vertex,
                ):
                    acc[v] = combo
                    yield from outers(v + 1, acc, size + used)
                del acc[v]

            for outer in outers(0, {}, size):
                g = assemble(weights, chosen, outer)
                key = canonical_form(g)
                if key in seen:
                    continue
                seen.add(key)
                if not (is_rational(g) and almost_reduced_check(g)):
                    raise AssertionError(f"construction left the class: {key}")
                if -self_intersection(g, fc(g)) != m:
                    raise AssertionError("degree differs from canonical-degree count")
                yield g


# ---------------------------------------------------------------------------
# configurations meeting at most one non-reduced vertex


@dataclass(frozen=True)
class Design:
    """Core weights, configurations between cores, and combinations hung
    from cores; :func:`assemble` turns it into a graph."""

    weights: tuple[int, ...]
    bridges: tuple[tuple[ConfigName, tuple[tuple[str, int], ...]], ...]
    outer: tuple[ConfigCombination, ...]

    def graph(self) -> ResolutionGraph:
        return assemble(
            self.weights,
            [(cfg, dict(assign)) for cfg, assign in self.bridges],
            {v: c for v, c in enumerate(self.outer) if c.parts},
        )


def _basic_singles(max_n: int) -> list[ConfigName]:
    return [_a1(n) for n in range(1, max_n + 1)] + [
        ConfigName(A, 2 * l, 2) for l in range(2, max_n // 2 + 1)
    ]


def _first_sum(cfg: ConfigName, role: str) -> int:
    return _load(cfg)[role]


def _independent_sets(h: Hypertree) -> Iterator[tuple[int, ...]]:
    for r in range(1, h.size + 1):
        for vs in itertools.combinations(range(h.size), r):
            if all(len(set(e) & set(vs)) <= 1 for e in h.edges + h.joints):
                yield vs


def _prescriptions(m: int, h: Hypertree, caps: EnumerationCaps):
    """Weights and non-reduced multiplicities with ``sum z(b-2) = m-2``."""
    for nonred in _independent_sets(h):
        for zs in itertools.product(range(2, m - 1), repeat=len(nonred)):
            z = [1] * h.size
            for v, zv in zip(nonred, zs):
                z[v] = zv

            def weights(v, rest):
                if v == h.size:
                    if rest == 0:
                        yield ()
                    return
                for b in range(3, caps.max_weight + 1):
                    if z[v] * (b - 2) > rest:
                        break
                    for tail in weights(v + 1, rest - z[v] * (b - 2)):
                        yield (b,) + tail

            for w in weights(0, m - 2):
                yield w, tuple(z)


def _equivalence_moves(max_n: int) -> list[tuple[ConfigName, str, list]]:
    """(configuration, role at the non-reduced vertex, equivalent parts)."""
    moves = []
    for cfg, role in table_rows(max_k=(max_n + 3) // 2, max_l=max_n, max_n=max_n):
        if cfg.family == A2K2:
            continue
        eq = equivalent_configuration(cfg, role)
        if eq:
            moves.append((cfg, role, [p for p, c in eq for _ in range(c)]))
    return moves


def _expansions(d: Design, nonred: Sequence[int], moves) -> Iterator[Design]:
    """Designs obtained by one replacement of tabulated parts at a
    non-reduced vertex by their equivalent configuration."""
    for v in nonred:
        have = Counter(d.outer[v].parts)
        for cfg, role, parts in moves:
            singles = Counter(p for p in parts if p.family != A11)
            bridge = [p for p in parts if p.family == A11]
            if any(have[p] < c for p, c in singles.items()):
                continue
            rest = have - singles
            new_outer = list(d.outer)
            new_outer[v] = ConfigCombination(tuple(rest.elements()))
            if not bridge:
                new_outer[v] = ConfigCombination(new_outer[v].parts + (cfg,))
                yield Design(d.weights, d.bridges, tuple(new_outer))
                continue
            for i, (bcfg, assign) in enumerate(d.bridges):
                ends = dict(assign)
                if bcfg != bridge[0] or v not in ends.values():
                    continue
                (u,) = [x for x in ends.values() if x != v]
                (other,) = [ro for ro in cfg.roles if ro != role]
                placed = tuple(sorted({role: v, other: u}.items()))
                bridges = d.bridges[:i] + ((cfg, placed),) + d.bridges[i + 1:]
                yield Design(d.weights, bridges, tuple(new_outer))


def enumerate_single_nonreduced(
    m: int, caps: EnumerationCaps = EnumerationCaps(max_chain=4, max_vertices=8)
) -> Iterator[ResolutionGraph]:
    """Rational graphs of degree ``m`` with at least one non-(-2) of
    multiplicity above one, where no configuration meets two such
    vertices.  Built from ``A^1_n``, ``A^2_2l``, ``A^{1,1}_n`` and
    ``L A^{2,2,2}_n`` and closed under the tabulated equivalences at the
    non-reduced vertices; each graph is yielded once, after checking its
    fundamental cycle against the prescribed multiplicities."""
    if m < 3:
        raise ValueError("degree must be at least 3")
    singles = _basic_singles(caps.max_chain)
    moves = _equivalence_moves(caps.max_chain)
    edge_opts = [ConfigName(A11, n) for n in range(caps.max_chain + 1)]
    joint_opts = [ConfigName(A2K2, n, 2) for n in range(1, caps.max_chain + 1)]
    seen = set()
    for h in hypertrees(m - 2):
        for weights, z in _prescriptions(m, h, caps):
            nonred = [v for v in range(h.size) if z[v] > 1]
            slots = [(e, edge_opts) for e in h.edges] + [(j, joint_opts) for j in h.joints]

            def bridges(i, chosen, first, size):
                if i == len(slots):
                    yield tuple(chosen), first, size
                    return
                targets, opts = slots[i]
                for cfg in opts:
                    if size + cfg.n > caps.max_vertices:
                        continue
                    for assign in _placements(cfg, targets):
                        if any(z[assign[ro]] > 1 for ro in cfg.roles if ro != "L"):
                            continue
                        new = list(first)
                        for ro in cfg.roles:
                            # a plain edge carries the other end's multiplicity
                            if cfg.n == 0:
                                (o,) = [x for x in cfg.roles if x != ro]
                                new[assign[ro]] += z[assign[o]]
                            else:
                                new[assign[ro]] += _first_sum(cfg, ro)
                        if all(new[t] <= weights[t] + 1 for t in targets):
                            placed = tuple(sorted(assign.items()))
                            yield from bridges(i + 1, chosen + [(cfg, placed)], new, size + cfg.n)

            for chosen, first, size in bridges(0, [], [0] * h.size, h.size):
                # reduced vertices take at most b, non-reduced exactly b+1 at stage one
                def outers(v, acc, size):
                    if v == h.size:
                        yield tuple(acc)
                        return
                    budget = weights[v] + (1 if z[v] > 1 else 0) - first[v]
                    for combo, used in _outer_choices(
                        budget, caps.max_vertices - size, singles, caps.max_components_per_vertex
                    ):
                        load = sum(p.superscript[0] for p in combo.parts)
                        if z[v] > 1 and load != budget:
                            continue
                        yield from outers(v + 1, acc + [combo], size + used)

                for outer in outers(0, [], size):
                    todo = [Design(weights, chosen, outer)]
                    done = set()
                    while todo:
                        d = todo.pop()
                        if d in done:
                            continue
                        done.add(d)
                        todo.extend(_expansions(d, nonred, moves))
                        g = d.graph()
                        if g.size > caps.max_vertices:
                            continue
                        key = canonical_form(g)
                        if key in seen:
                            continue
                        if core_multiplicities(g, range(h.size)) != z:
                            continue
                        seen.add(key)
                        yield g
