"""Command line: ``ratgraph <subcommand> ...``."""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .central import central_fundamental_cycle, observed_multiplicity_sequence
from .classify import (
    EnumerationCaps,
    enumerate_almost_reduced,
    enumerate_minimal_representatives,
    enumerate_single_nonreduced,
)
from .fundamental import complexity, fundamental_cycle, is_rational
from .graph import (
    GraphError,
    ResolutionGraph,
    format_cycle,
    parse_graph,
    render_graph,
    self_intersection,
)
from .lattice import canonical_degree, check_negative_definite
from .model import canonical_model, model_dot, resolution_dot
from .rdp import NotADE, classify_component, find_rdp_components, predicted_multiplicity_sequence


class CommandError(Exception):
    """A problem with the input; reported without a traceback."""


def _load(path: str) -> ResolutionGraph:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CommandError(f"{path}: {exc.strerror}") from None
    try:
        return parse_graph(text)
    except GraphError as exc:
        raise CommandError(f"{path}: {exc}") from None


def cmd_check(args, out) -> int:
    g = _load(args.file)
    rep = check_negative_definite(g)
    if rep:
        out.write("negative definite\n")
    else:
        out.write(f"not negative definite (leading minor {rep.failing_minor})\n")
    rat = is_rational(g)
    out.write(rat.describe() + "\n")
    return 0


def cmd_fc(args, out) -> int:
    g = _load(args.file)
    if not check_negative_definite(g):
        raise CommandError(f"{args.file}: intersection form is not negative definite")
    if args.central is not None:
        if not 0 <= args.central < g.size:
            raise CommandError(f"central vertex {args.central} out of range 0..{g.size - 1}")
        if not is_rational(g):
            raise CommandError(f"{args.file}: {is_rational(g).describe()}; the stage method needs a rational graph")
        trace = central_fundamental_cycle(g, args.central)
        out.write(trace.render() + "\n")
        for k, comp in enumerate(trace.components):
            seq = observed_multiplicity_sequence(trace, k)
            out.write(f"component {k} {list(comp)}: sequence {format_cycle(seq)}\n")
        z = trace.final
    else:
        z, trace = fundamental_cycle(g)
        if args.trace:
            out.write(f"start {format_cycle(trace.start)}\n")
            for k, st in enumerate(trace.steps):
                out.write(f"step {k + 1}: add E{st.vertex} (Z.E = {st.trigger}) -> {format_cycle(st.cycle)}\n")
    for i, c in enumerate(z):
        out.write(f"z{i} = {c}\n")
    rat = is_rational(g)
    if rat:
        out.write(f"degree {-self_intersection(g, z)}\n")
        if not any(v.genus for v in g.vertices):
            out.write(f"canonical degree {canonical_degree(g, z)}\n")
        out.write(f"complexity {complexity(g)}\n")
    else:
        out.write(rat.describe() + "\n")
    return 0


def cmd_classify(args, out) -> int:
    g = _load(args.file)
    try:
        comps = find_rdp_components(g)
    except NotADE as exc:
        raise CommandError(str(exc)) from None
    if not comps:
        out.write("no (-2)-configurations\n")
    for comp in comps:
        cl = classify_component(g, comp)
        verts = list(comp.vertices)
        if not cl:
            out.write(f"{comp.dynkin_type} {verts}: not in the tables ({cl.reason})\n")
            continue
        roles = ", ".join(f"{ro}={v}" for ro, v in sorted(cl.roles.items()))
        out.write(f"{comp.dynkin_type} {verts}: {cl.name} [{roles}]\n")
        for ro in cl.name.roles:
            seq = predicted_multiplicity_sequence(cl.name, ro)
            out.write(f"  sequence at {ro}: {seq.render()}\n")
    return 0


def cmd_canonical_model(args, out) -> int:
    g = _load(args.file)
    try:
        model = canonical_model(g)
    except GraphError as exc:
        raise CommandError(f"{args.file}: {exc}") from None
    if args.dot:
        out.write(model_dot(model) + "\n")
        return 0
    for k, (b, z) in enumerate(model.vertices):
        out.write(f"v {k} {b}" + (f" z={z}" if z != 1 else "") + f"  (vertex {model.sources[k]})\n")
    for i, j in model.edges:
        out.write(f"e {i} {j}\n")
    for joint in model.t_joints:
        out.write("t " + " ".join(map(str, joint)) + "\n")
    out.write("configurations: " + (", ".join(model.rdp_records) or "none") + "\n")
    return 0


def cmd_enumerate(args, out) -> int:
    if args.degree < 3:
        raise CommandError("--degree must be at least 3")
    caps = EnumerationCaps(
        max_chain=args.max_chain,
        max_components_per_vertex=args.max_components,
        max_weight=args.max_weight,
        max_vertices=args.max_vertices,
    )
    if args.minimal:
        stream = iter(enumerate_minimal_representatives(args.degree))
    elif args.almost_reduced:
        stream = enumerate_almost_reduced(args.degree, caps)
    else:
        stream = enumerate_single_nonreduced(args.degree, caps)
    count = 0
    for g in stream:
        if not args.count_only:
            if count:
                out.write("\n")
            out.write(render_graph(g))
        count += 1
    if args.count_only:
        out.write(f"{count}\n")
    return 0


def cmd_verify_paper(args, out) -> int:
    from .acceptance import CRITERIA, SECTIONS

    numbers = SECTIONS[args.section] if args.section else tuple(CRITERIA)
    # independent sections may run side by side; output stays in order
    with ThreadPoolExecutor() as pool:
        results = list(pool.map(lambda n: CRITERIA[n](), numbers))
    for res in results:
        out.write(res.render() + "\n")
    failed = [r.number for r in results if not r.passed]
    out.write(f"{len(results) - len(failed)} of {len(results)} criteria pass"
              + (f"; failing: {', '.join(map(str, failed))}" if failed else "") + "\n")
    return 1 if failed else 0


def cmd_export_dot(args, out) -> int:
    g = _load(args.file)
    z = fundamental_cycle(g)[0] if check_negative_definite(g) else None
    out.write(resolution_dot(g, z) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ratgraph", description="Rational resolution graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", help="definiteness and rationality report")
    s.add_argument("file")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("fc", help="fundamental cycle")
    s.add_argument("file")
    s.add_argument("--trace", action="store_true", help="print the computation sequence")
    s.add_argument("--central", type=int, metavar="V", help="compute in stages around vertex V")
    s.set_defaults(func=cmd_fc)

    s = sub.add_parser("classify", help="(-2)-configurations and their sequences")
    s.add_argument("file")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("canonical-model", help="hypertree of the canonical model")
    s.add_argument("file")
    s.add_argument("--dot", action="store_true")
    s.set_defaults(func=cmd_canonical_model)

    s = sub.add_parser("enumerate", help="enumerate rational graphs of a degree")
    s.add_argument("--degree", type=int, required=True)
    kind = s.add_mutually_exclusive_group(required=True)
    kind.add_argument("--minimal", action="store_true")
    kind.add_argument("--almost-reduced", action="store_true")
    kind.add_argument("--single-nonreduced", action="store_true")
    s.add_argument("--max-chain", type=int, default=4)
    s.add_argument("--max-components", type=int, default=6)
    s.add_argument("--max-weight", type=int, default=10)
    s.add_argument("--max-vertices", type=int, default=8)
    s.add_argument("--count-only", action="store_true")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("verify-paper", help="run the acceptance checks")
    s.add_argument("--section", choices=["1", "2", "3", "5", "6", "7", "8"])
    s.set_defaults(func=cmd_verify_paper)

    s = sub.add_parser("export-dot", help="graph in DOT with fundamental-cycle labels")
    s.add_argument("file")
    s.set_defaults(func=cmd_export_dot)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (CommandError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
