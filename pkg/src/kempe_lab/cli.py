"""Command-line entry point: ``kempe-lab {check,survey,witness,examples,selfcheck,corpus}``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path

from . import structure
from .coloring import ListAssignment, instance_from_json, is_proper_L_coloring
from .constructive import build_example1_cycle, build_gallai_plus_edge
from .errors import CapacityError, KempeLabError
from .graph import (
    Graph,
    encode_graph6,
    make_complete,
    make_cycle,
    make_k4_plus,
    make_theta,
    make_wheel,
    parse_graph6,
)
from .reconfig import DEFAULT_CAP, component_labels, is_L_swappable, kempe_equivalent

EXIT_OK, EXIT_NO, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _load_json_arg(text: str):
    """Inline JSON, or ``@path`` to read it from a file."""
    if text.startswith("@"):
        text = Path(text[1:]).read_text()
    return json.loads(text)


def _emit(obj, out=None) -> None:
    text = json.dumps(obj, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


# -- check / witness ----------------------------------------------------------

def cmd_check(args) -> int:
    g = parse_graph6(args.graph6)
    lists, _ = instance_from_json(_load_json_arg(args.lists))
    report = is_L_swappable(g, lists, cap=args.cap_colorings)
    _emit(report.to_json())
    return EXIT_OK if report.swappable else EXIT_NO


def cmd_witness(args) -> int:
    g = parse_graph6(args.graph6)
    lists, _ = instance_from_json(_load_json_arg(args.lists))
    phi1 = tuple(int(c) for c in _load_json_arg(args.coloring1))
    phi2 = tuple(int(c) for c in _load_json_arg(args.coloring2))
    for name, phi in (("coloring1", phi1), ("coloring2", phi2)):
        if len(phi) != g.n or not is_proper_L_coloring(g, lists, phi):
            raise UsageError(f"{name} is not an L-coloring")
    seq = kempe_equivalent(g, lists, phi1, phi2, cap=args.cap_colorings)
    if seq is None:
        ids = component_labels(g, lists, [phi1, phi2], cap=args.cap_colorings)
        _emit({"result": "separated", "component_ids": ids})
        return EXIT_NO
    _emit({"result": "sequence", "length": len(seq), "moves": seq.to_json()})
    return EXIT_OK


# -- examples -----------------------------------------------------------------

def _two_triangles() -> tuple[Graph, int, int]:
    return Graph(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]), 0, 3


def _chorded_cycle(n: int) -> tuple[Graph, int, int]:
    # even n-cycle with chord 0-2 (odd cycles of lengths 3 and n-1) minus the edge 3-4
    if n < 6 or n % 2:
        raise UsageError("chorded-cycle needs an even n >= 6")
    edges = [(i, (i + 1) % n) for i in range(n) if i != 3] + [(0, 2)]
    return Graph(n, edges), 3, 4


def example_instance(name: str) -> dict:
    """Instance JSON for a named construction (see ``kempe-lab examples --help``)."""
    kind, _, arg = name.partition(":")
    lists = None
    if kind == "cycle":
        g, lists = build_example1_cycle(int(arg))
    elif kind == "gallai-plus-edge":
        if arg in ("", "triangles"):
            tree, x, y = _two_triangles()
        elif arg.startswith("chorded-cycle"):
            tree, x, y = _chorded_cycle(int(arg.partition(",")[2] or 6))
        else:
            g6, _, pair = arg.rpartition(":")
            if not g6:
                raise UsageError("gallai-plus-edge takes triangles, chorded-cycle[,N] or GRAPH6:X,Y")
            x, y = (int(t) for t in pair.split(","))
            tree = parse_graph6(g6)
        g, lists = build_gallai_plus_edge(tree, x, y)
    elif kind == "k4plus":
        g = make_k4_plus(int(arg or 2))
    elif kind == "w4":
        if arg:
            raise UsageError("w4 takes no argument")
        g = make_wheel(4)
    elif kind == "theta":
        parts = [int(t) for t in arg.split(",")]
        if len(parts) != 3:
            raise UsageError("theta needs three path lengths, e.g. theta:2,2,2")
        g = make_theta(*parts)
    elif kind == "complete":
        g = make_complete(int(arg))
    elif kind == "cycle-plain":
        g = make_cycle(int(arg))
    else:
        raise UsageError(f"unknown example {name!r}")
    return {
        "name": name,
        "graph6": encode_graph6(g),
        "n": g.n,
        "edges": [list(e) for e in g.sorted_edges()],
        "lists": lists.to_json() if lists is not None else None,
    }


def cmd_examples(args) -> int:
    try:
        obj = example_instance(args.name)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(obj, args.out)
    return EXIT_OK


# -- survey / corpus ----------------------------------------------------------

def _default_jobs() -> int:
    env = os.environ.get("KEMPE_LAB_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"KEMPE_LAB_JOBS must be an integer, got {env!r}") from None
    return 1


def cmd_survey(args) -> int:
    from .survey import load_corpus, parse_mode, run_survey

    mode = parse_mode(args.mode, palette=args.palette, samples=args.samples, seed=args.seed,
                      max_classes=args.max_classes, skip_identical=args.skip_identical)
    graphs = load_corpus(args.corpus)
    jobs = args.jobs if args.jobs is not None else _default_jobs()
    result = run_survey(graphs, mode, args.cap_colorings, args.cap_seconds, jobs,
                        structures=not args.no_structures, timing=args.timing)
    if args.format == "csv":
        text = result.to_csv(args.timing)
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
        print(json.dumps(result.summary(), indent=2), file=sys.stderr)
    else:
        _emit(result.to_json(args.timing), args.out)
    return EXIT_OK


def cmd_corpus(args) -> int:
    from .generate import connected_graphs, regular_graphs

    lines = []
    for n in range(args.min_n, args.max_n + 1):
        if args.family == "connected":
            graphs = list(connected_graphs(n))
        else:
            graphs = regular_graphs(n, {"cubic": 3, "quartic": 4}[args.family])
        lines.extend(encode_graph6(g) for g in graphs)
    text = "".join(line + "\n" for line in lines)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- selfcheck ----------------------------------------------------------------

def _suite_gallai_crosscheck() -> None:
    from .generate import connected_graphs

    for n in range(1, 7):
        for g in connected_graphs(n):
            gallai = structure.is_gallai_tree(g)
            if gallai == structure.brute_force_degree_choosable(g):
                raise AssertionError(f"{encode_graph6(g)}: Gallai test disagrees with brute force")
            if (structure.find_good_cycle(g) is None) != gallai:
                raise AssertionError(f"{encode_graph6(g)}: good cycle search disagrees with Gallai test")


def _suite_example_cycles() -> None:
    for n in (4, 5, 6, 8):
        g, lists = build_example1_cycle(n)
        rep = is_L_swappable(g, lists)
        if (rep.coloring_count, rep.component_count, rep.move_count) != (2, 2, 0):
            raise AssertionError(f"cycle {n}: got {rep.to_json()}")


def _suite_exceptional_graphs() -> None:
    from .graph import make_prism

    k4 = is_L_swappable(make_complete(4), ListAssignment.uniform(4, (1, 2, 3)))
    prism = is_L_swappable(make_prism(), ListAssignment.uniform(6, (1, 2, 3)))
    if k4.coloring_count != 0 or prism.swappable:
        raise AssertionError("K4 / prism verdicts are wrong for identical 3-lists")
    mixed = ListAssignment.from_lists([{1, 2, 3}] * 5 + [{1, 2, 4}])
    if not is_L_swappable(make_prism(), mixed).swappable:
        raise AssertionError("prism with one different list should be swappable")


def _suite_gadgets() -> None:
    checks = [
        (make_theta(2, 2, 2), structure.find_induced_theta),
        (make_k4_plus(3), structure.find_induced_K4_plus),
        (make_wheel(4), structure.find_induced_W4),
    ]
    for g, finder in checks:
        w = finder(g)
        if w is None or not structure.verify_witness(g, w):
            raise AssertionError(f"{finder.__name__} failed on its own gadget")
    tree, x, y = _two_triangles()
    g, lists = build_gallai_plus_edge(tree, x, y)
    if is_L_swappable(g, lists).swappable or structure.is_gallai_tree(g):
        raise AssertionError("Gallai-plus-edge instance should be choosable but not swappable")


SUITES = [
    ("gallai-vs-brute-force n<=6", _suite_gallai_crosscheck),
    ("example cycles", _suite_example_cycles),
    ("K4 and prism", _suite_exceptional_graphs),
    ("gadget detectors", _suite_gadgets),
]


def run_selfcheck(stream=None) -> bool:
    stream = stream or sys.stdout
    ok = True
    for name, suite in SUITES:
        t0 = time.perf_counter()
        try:
            suite()
            status = "PASS"
        except AssertionError as exc:
            status = f"FAIL ({exc})"
            ok = False
        print(f"{status[:4]}  {name}  {time.perf_counter() - t0:.2f}s"
              + (f"  {status[5:]}" if status != "PASS" else ""), file=stream)
    return ok


def cmd_selfcheck(args) -> int:
    return EXIT_OK if run_selfcheck() else EXIT_NO


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kempe-lab", description="Kempe-swap reconfiguration of list colorings.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="decide L-swappability (exit 0 swappable, 1 not, 2 error)")
    c.add_argument("graph6")
    c.add_argument("lists", help='JSON lists, e.g. \'[[1,2],[2,3]]\' or {"lists": ...}; @FILE reads a file')
    c.add_argument("--cap-colorings", type=int, default=DEFAULT_CAP)
    c.set_defaults(func=cmd_check)

    w = sub.add_parser("witness", help="shortest swap sequence between two colorings, or 'separated'")
    w.add_argument("graph6")
    w.add_argument("lists")
    w.add_argument("coloring1")
    w.add_argument("coloring2")
    w.add_argument("--cap-colorings", type=int, default=DEFAULT_CAP)
    w.set_defaults(func=cmd_witness)

    e = sub.add_parser("examples", help="emit a named construction",
                       description="Names: cycle:N, gallai-plus-edge:{triangles|chorded-cycle[,N]|GRAPH6:X,Y}, "
                                   "k4plus:LEN, w4, theta:A,B,C, complete:N")
    e.add_argument("name")
    e.add_argument("--out")
    e.set_defaults(func=cmd_examples)

    s = sub.add_parser("survey", help="survey a graph6 corpus")
    s.add_argument("--corpus", required=True, help="graph6 file, or bundled:cubic / bundled:quartic")
    s.add_argument("--mode", default="identical-k",
                   help="identical-k | canonical-degree | canonical-k:PALETTE | random-k:SAMPLES:SEED "
                        "(k is a number or the letter k for the maximum degree)")
    s.add_argument("--palette", type=int)
    s.add_argument("--samples", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--max-classes", type=int, default=10**5)
    s.add_argument("--skip-identical", action="store_true", help="drop assignments identical everywhere")
    s.add_argument("--cap-colorings", type=int, default=DEFAULT_CAP)
    s.add_argument("--cap-seconds", type=float, default=60.0)
    s.add_argument("--out")
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.add_argument("--jobs", type=int, help="worker processes (default: $KEMPE_LAB_JOBS or 1)")
    s.add_argument("--no-structures", action="store_true", help="skip induced-structure detection")
    s.add_argument("--timing", action="store_true", help="include per-instance elapsed seconds")
    s.set_defaults(func=cmd_survey)

    g = sub.add_parser("corpus", help="generate a graph6 corpus with the built-in generator")
    g.add_argument("family", choices=("connected", "cubic", "quartic"))
    g.add_argument("--min-n", type=int, default=1)
    g.add_argument("--max-n", type=int, required=True)
    g.add_argument("--out")
    g.set_defaults(func=cmd_corpus)

    sc = sub.add_parser("selfcheck", help="run the built-in consistency suites")
    sc.set_defaults(func=cmd_selfcheck)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (UsageError, KempeLabError, ValueError, OSError, CapacityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
