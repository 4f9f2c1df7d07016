"""Command-line driver: ``bisection solve|gen|verify|bench``.

Exit codes: 0 success, 1 verification failure, 2 unreadable or invalid
input, 3 infeasible (vertex-cover budget too small, oracle size cap),
4 not a line graph.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path

from . import bench as bench_mod
from . import generators as gen_mod
from .decomposition import (
    TDFormatError,
    emit_td,
    heuristic_td,
    make_nice,
    parse_td,
    validate_td,
)
from .graph import A, Graph, GraphFormatError, cut_value, emit_graph, parse_graph
from .line import (
    NotLineGraphError,
    WeightedLineGraphError,
    _certificate,
    check_certificate,
    line_graph,
    reconstruct_root,
    root_from_graph,
    solve_root,
)
from .oracle import OracleCapError, brute_bisection
from .treewidth import join_cost_report, solve_max, solve_min
from .vertex_cover import max_bisection_vc, min_bisection_vc, minimum_vertex_cover, vertex_cover

log = logging.getLogger("bisection")

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_NOT_LINE = 0, 1, 2, 3, 4
THREADS_ENV = "BISECTION_THREADS"


class CLIError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


@dataclass
class RunReport:
    """Machine-readable solve result. Every key is present for every solver."""

    solver: str
    objective: str
    n: int
    m: int
    value: int
    witness: str                 # one character per vertex (1..n), "A" or "B"
    wall_time: float
    width: int | None = None
    nodes: int | None = None
    join_cost: int | None = None
    join_bound: int | None = None
    cover_size: int | None = None
    certificate_ok: bool | None = None

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    def summary(self) -> str:
        lines = [f"{self.objective} bisection = {self.value}  ({self.solver}, n={self.n}, "
                 f"m={self.m}, {self.wall_time:.3f}s)",
                 f"side A: {' '.join(str(i + 1) for i, c in enumerate(self.witness) if c == 'A')}"]
        if self.width is not None:
            lines.append(f"width {self.width}, {self.nodes} nice nodes, "
                         f"join cost {self.join_cost} <= {self.join_bound}")
        if self.cover_size is not None:
            lines.append(f"vertex cover size {self.cover_size}")
        if self.certificate_ok is not None:
            lines.append(f"clique certificate {'ok' if self.certificate_ok else 'FAILED'}")
        return "\n".join(lines)


def witness_string(side) -> str:
    return "".join("A" if s == A else "B" for s in side)


def side_from_witness(witness: str, n: int) -> tuple[int, ...]:
    if len(witness) != n or set(witness) - {"A", "B"}:
        raise CLIError(f"witness must be {n} characters from {{A, B}}", EXIT_INPUT)
    return tuple(0 if c == "A" else 1 for c in witness)


def _read_text(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CLIError(f"cannot read {path}: {exc.strerror}", EXIT_INPUT) from exc


def load_graph(path) -> Graph:
    try:
        return parse_graph(_read_text(path))
    except GraphFormatError as exc:
        raise CLIError(f"{path}: {exc}", EXIT_INPUT) from exc


def load_td(path, g: Graph):
    try:
        td, n = parse_td(_read_text(path))
    except TDFormatError as exc:
        raise CLIError(f"{path}: {exc}", EXIT_INPUT) from exc
    if n != g.n:
        raise CLIError(f"{path}: decomposition is for {n} vertices, graph has {g.n}", EXIT_INPUT)
    return td


def load_report(path) -> dict:
    try:
        data = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise CLIError(f"{path}: not JSON ({exc.msg})", EXIT_INPUT) from exc
    for key in ("value", "witness"):
        if key not in data:
            raise CLIError(f"{path}: missing field {key!r}", EXIT_INPUT)
    return data


def _describe(v) -> str:
    # violations carry 0-based ids; files are 1-based
    if v.kind == "edge-uncovered":
        return f"edge-uncovered: edge {v.witness[0] + 1}-{v.witness[1] + 1} is in no bag"
    if v.kind in ("vertex-uncovered", "disconnected"):
        what = "is in no bag" if v.kind == "vertex-uncovered" else "has disconnected bags"
        return f"{v.kind}: vertex {v.witness[0] + 1} {what}"
    return f"{v.kind}: {v.message}"


# -- solve -------------------------------------------------------------------

def _solve_tw(g, args, report):
    if args.td:
        td = load_td(args.td, g)
        bad = validate_td(g, td)
        if bad:
            raise CLIError("invalid decomposition: " + _describe(bad[0]), EXIT_INPUT)
    else:
        td = heuristic_td(g)
        log.warning("no --td given; heuristic decomposition has width %d", td.width)
    nd = make_nice(td, g)
    res = (solve_max if args.objective == "max" else solve_min)(g, nd)
    cost = join_cost_report(nd)
    report.update(width=nd.width, nodes=len(nd.nodes), join_cost=cost.total,
                  join_bound=cost.bound)
    return res.value, res.bisection


def _solve_vc(g, args, report):
    if args.k is not None:
        cover = vertex_cover(g, args.k)
        if cover is None:
            raise CLIError(f"no vertex cover of size <= {args.k}", EXIT_INFEASIBLE)
    else:
        cover = minimum_vertex_cover(g)
    report["cover_size"] = cover.k
    fn = max_bisection_vc if args.objective == "max" else min_bisection_vc
    return fn(g, cover, threads=args.threads)


def _solve_line(g, args, report):
    if args.objective != "max":
        raise CLIError("the line-graph solver computes maximum bisections only", EXIT_INPUT)
    if not g.is_unit_weight():
        raise CLIError(str(WeightedLineGraphError("line-graph solver needs unit weights")),
                       EXIT_INPUT)
    try:
        root = root_from_graph(g) if args.root_graph else reconstruct_root(g)
    except NotLineGraphError as exc:
        raise CLIError(f"not a line graph: {exc}", EXIT_NOT_LINE) from exc
    value, bis, cert = solve_root(root)
    if args.root_graph:
        # the bisection lives on L(g); report it against the line graph
        report["n"], report["m"] = g.m, line_graph(g).m
        report["certificate_ok"] = check_certificate(line_graph(g), bis, cert)
    else:
        report["certificate_ok"] = check_certificate(g, bis, cert)
    return value, bis


def _solve_brute(g, args, report):
    try:
        return brute_bisection(g, args.objective)
    except OracleCapError as exc:
        raise CLIError(str(exc), EXIT_INFEASIBLE) from exc


SOLVERS = {"tw": _solve_tw, "vc": _solve_vc, "line": _solve_line, "brute": _solve_brute}


def run_solve(args) -> RunReport:
    g = load_graph(args.graph)
    extra = {"n": g.n, "m": g.m}
    t0 = time.perf_counter()
    value, bis = SOLVERS[args.solver](g, args, extra)
    elapsed = time.perf_counter() - t0
    n, m = extra.pop("n"), extra.pop("m")
    return RunReport(args.solver, args.objective, n, m, int(value), witness_string(bis.side),
                     round(elapsed, 6), **extra)


def cmd_solve(args) -> int:
    report = run_solve(args)
    if args.format == "json":
        print(report.to_json())
    else:
        print(report.summary())
    return EXIT_OK


# -- gen ---------------------------------------------------------------------

def _write(path, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_gen(args) -> int:
    kind = args.family
    if kind == "ktree":
        try:
            g, td = gen_mod.random_partial_ktree(args.n, args.k, args.keep, args.seed)
        except ValueError as exc:
            raise CLIError(str(exc), EXIT_INPUT) from exc
        header = [f"partial {args.k}-tree n={args.n} keep={args.keep} seed={args.seed}"]
        _write(args.out, emit_graph(g, header))
        if args.td_out:
            _write(args.td_out, emit_td(td, g.n, header))
        return EXIT_OK
    if kind == "path-gadget":
        if args.seq:
            try:
                seq = gen_mod.SequenceTriple.from_json(_read_text(args.seq))
            except (ValueError, KeyError) as exc:
                raise CLIError(f"{args.seq}: bad sequence file ({exc})", EXIT_INPUT) from exc
        else:
            import random

            rng = random.Random(args.seed)
            seq = gen_mod.SequenceTriple(*([rng.randint(-args.max_value, args.max_value)
                                            for _ in range(size)]
                                           for size in (args.n, args.n, 2 * args.n)))
        gadget = gen_mod.build_path_gadget(seq)
        _write(args.out, emit_graph(gadget.graph, [
            f"path gadget n={seq.n} W={gadget.W} threshold={gadget.threshold}",
            f"sequences {seq.to_json()}"]))
        if args.names_out:
            _write(args.names_out, gadget.names_json() + "\n")
        return EXIT_OK
    if kind == "bipartite-gadget":
        base = (load_graph(args.graph) if args.graph
                else gen_mod.circulant(2 * args.n, (1, 2)))
        try:
            gadget = gen_mod.bipartite_gadget(base)
        except ValueError as exc:
            raise CLIError(str(exc), EXIT_INPUT) from exc
        _write(args.out, emit_graph(gadget, [f"bipartite gadget of a 4-regular graph on {base.n}"]))
        return EXIT_OK
    if kind == "maxcut-reduction":
        g = load_graph(args.graph)
        _write(args.out, emit_graph(gen_mod.maxcut_to_maxbisection(g),
                                    [f"max-cut instance padded with {g.n} isolated vertices"]))
        return EXIT_OK
    raise CLIError(f"unknown generator {kind}", EXIT_INPUT)


# -- verify ------------------------------------------------------------------

def cmd_verify(args) -> int:
    g = load_graph(args.graph)
    if args.what == "td":
        bad = validate_td(g, load_td(args.file, g))
        for v in bad:
            print(_describe(v))
        if not bad:
            print("decomposition ok")
        return EXIT_VIOLATION if bad else EXIT_OK
    data = load_report(args.file)
    if args.what == "solution":
        side = side_from_witness(data["witness"], g.n)
        problems = []
        a = side.count(0)
        if abs(2 * a - g.n) > 1:
            problems.append(f"not balanced: |A|={a}, |B|={g.n - a}")
        actual = cut_value(g, side)
        if actual != data["value"]:
            problems.append(f"value mismatch: reported {data['value']}, witness gives {actual}")
        for p in problems:
            print(p)
        if not problems:
            print(f"solution ok: value {actual}")
        return EXIT_VIOLATION if problems else EXIT_OK
    # certificate: g is the line graph the witness labels
    side = side_from_witness(data["witness"], g.n)
    try:
        root = reconstruct_root(g)
    except NotLineGraphError as exc:
        raise CLIError(f"not a line graph: {exc}", EXIT_NOT_LINE) from exc
    cert = _certificate(root.clique_partition(), side)
    ok = check_certificate(g, side, cert, allow_parity_defect=args.allow_parity_defect)
    if ok:
        print("certificate ok")
        return EXIT_OK
    for c, imb in zip(cert.cliques, cert.imbalances):
        if abs(imb) > 1:
            print(f"clique {{{', '.join(str(x + 1) for x in sorted(c))}}} has imbalance {imb}")
    return EXIT_VIOLATION


# -- bench -------------------------------------------------------------------

def cmd_bench(args) -> int:
    try:
        rows = bench_mod.run_bench(args.family, args.n, args.k, args.seed, args.repeat)
    except ValueError as exc:
        raise CLIError(str(exc), EXIT_INPUT) from exc
    _write(args.out, bench_mod.rows_to_csv(rows))
    return EXIT_OK


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bisection", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve Min or Max Bisection on a graph file")
    s.add_argument("graph")
    s.add_argument("--solver", choices=sorted(SOLVERS), default="tw")
    s.add_argument("--objective", choices=("min", "max"), default="max")
    s.add_argument("--td", help="tree decomposition file (tw solver)")
    s.add_argument("--k", type=int, help="vertex cover budget (vc solver); default: minimum")
    s.add_argument("--root-graph", action="store_true",
                   help="input is the root graph G; solve on L(G) (line solver)")
    s.add_argument("--format", choices=("json", "text"), default="json")
    s.add_argument("--threads", type=int, default=_default_threads(),
                   help=f"worker threads for the vc solver (env {THREADS_ENV}, default 1)")
    s.set_defaults(func=cmd_solve)

    gp = sub.add_parser("gen", help="write generated instances")
    gsub = gp.add_subparsers(dest="family", required=True)
    kt = gsub.add_parser("ktree", help="random partial k-tree with its decomposition")
    kt.add_argument("--n", type=int, required=True)
    kt.add_argument("--k", type=int, required=True)
    kt.add_argument("--keep", type=float, default=1.0, help="edge keep probability")
    kt.add_argument("--seed", type=int, default=0)
    kt.add_argument("--out", help="graph file (default stdout)")
    kt.add_argument("--td-out", help="decomposition file")
    pg = gsub.add_parser("path-gadget", help="weighted path from a sequence triple")
    pg.add_argument("--seq", help='JSON file {"a": [...], "b": [...], "c": [...]}')
    pg.add_argument("--n", type=int, default=4, help="random triple length when --seq is absent")
    pg.add_argument("--max-value", type=int, default=5)
    pg.add_argument("--seed", type=int, default=0)
    pg.add_argument("--out")
    pg.add_argument("--names-out", help="JSON map of named vertices (1-based) and W")
    bg = gsub.add_parser("bipartite-gadget", help="subdivide a 4-regular graph, add pendants")
    bg.add_argument("--graph", help="4-regular input; default circulant C_2n(1,2)")
    bg.add_argument("--n", type=int, default=5)
    bg.add_argument("--out")
    mc = gsub.add_parser("maxcut-reduction", help="pad a graph with n isolated vertices")
    mc.add_argument("graph")
    mc.add_argument("--out")
    gp.set_defaults(func=cmd_gen)

    vp = sub.add_parser("verify", help="check a decomposition, solution, or certificate")
    vp.add_argument("what", choices=("td", "solution", "certificate"))
    vp.add_argument("graph")
    vp.add_argument("file", help="td file, or a solve JSON report")
    vp.add_argument("--allow-parity-defect", action="store_true",
                    help="certificate: accept one +-2 clique where parity forces it")
    vp.set_defaults(func=cmd_verify)

    bp = sub.add_parser("bench", help="time the treewidth DP; CSV on stdout")
    bp.add_argument("--family", choices=bench_mod.FAMILIES, default="path")
    bp.add_argument("--n", type=int, nargs="+", default=[500, 1000, 2000])
    bp.add_argument("--k", type=int, nargs="+", default=[1])
    bp.add_argument("--seed", type=int, default=0)
    bp.add_argument("--repeat", type=int, default=1)
    bp.add_argument("--out")
    bp.set_defaults(func=cmd_bench)
    return p


def _setup_logging(verbose: bool):
    # own handler so the warning reaches the current stderr even when embedded
    log.handlers.clear()
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.INFO if verbose else logging.WARNING)
    log.propagate = False


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    _setup_logging(args.verbose)
    try:
        return args.func(args)
    except CLIError as exc:
        print(f"bisection: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
