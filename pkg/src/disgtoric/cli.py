"""Command-line interface: ``disgtoric check | pair | scan``.

Exit codes: 0 success, 2 unreadable or malformed input, 3 species mismatch,
4 realization graph not weakly reversible (or not a valid candidate),
5 enumeration too large.
"""

from __future__ import annotations

import argparse
import sys
import time
import warnings
from pathlib import Path

from . import __version__
from .dimensions import NotWeaklyReversibleWarning, analyze_pair, realizability_blocks
from .network import EGraph, SpeciesMismatchError, is_weakly_reversible
from .parser import (
    DuplicateReactionWarning,
    ParseError,
    format_complex,
    read_network,
    serialize_network,
)
from .report import build_document, dumps, graph_summary, pair_payload, rational, scan_payload
from .scan import CandidateError, EnumerationTooLarge, scan

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_SPECIES = 3
EXIT_NOT_WR = 4
EXIT_TOO_LARGE = 5


class CliError(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


def _load(path: str, strict: bool) -> EGraph:
    p = Path(path)
    if not p.is_file():
        raise CliError(EXIT_INPUT, f"{path}: file not found")
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", DuplicateReactionWarning)
            g = read_network(p, strict=strict)
    except ParseError as e:
        raise CliError(EXIT_INPUT, f"{path}:{e.line}:{e.column}: {e.message} [{e.kind}]") from e
    for w in caught:
        print(f"{path}: warning: {w.message}", file=sys.stderr)
    return g


def _reconcile(g: EGraph, h: EGraph, what: str) -> EGraph:
    if h.species == g.species:
        return h
    try:
        return h.reorder_species(g.species)
    except SpeciesMismatchError as e:
        raise CliError(EXIT_SPECIES, f"{what}: {e}") from e


def _emit(args, doc: dict) -> None:
    if args.json is None:
        return
    text = dumps(doc)
    if args.json == "-":
        sys.stdout.write(text)
    else:
        Path(args.json).write_text(text, encoding="utf-8")


def _matrix_lines(m, indent: str = "    ") -> list[str]:
    if m.rows == 0 or m.cols == 0:
        return [f"{indent}(empty {m.rows}x{m.cols})"]
    cells = [[str(m[i, j]) for j in range(m.cols)] for i in range(m.rows)]
    width = max(len(c) for row in cells for c in row)
    return [indent + "[ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in cells]


def _fmt(x) -> str:
    return "undefined" if x is None else str(x)


# ---------------------------------------------------------------------------


def cmd_check(args) -> int:
    t0 = time.perf_counter()
    g = _load(args.file, args.strict)
    summary = graph_summary(g, bases=args.bases)
    if args.json != "-":
        print(f"species: {' '.join(g.species)}")
        print(f"vertices: {summary['vertex_count']}  edges: {summary['edge_count']}  "
              f"linkage classes: {summary['linkage_classes']}")
        print(f"weakly reversible: {str(summary['weakly_reversible']).lower()}")
        print(f"dim S = {summary['stoich_dim']}")
        print(f"dim D0 = {summary['dynamics_kernel_dim']}")
        print(f"dim J0 = {summary['balance_kernel_dim']}")
        if args.bases:
            for name, key in (("D0", "dynamics_kernel_basis"), ("J0", "balance_kernel_basis")):
                print(f"{name} basis:")
                for v in summary[key]:
                    print("  (" + ", ".join(v) + ")")
    doc = build_document("check", [args.file], {"bases": args.bases, "strict": args.strict},
                         summary, (time.perf_counter() - t0) * 1000)
    _emit(args, doc)
    return EXIT_OK


def cmd_pair(args) -> int:
    t0 = time.perf_counter()
    g = _load(args.g, args.strict)
    gp = _reconcile(g, _load(args.gprime, args.strict), args.gprime)
    if not is_weakly_reversible(gp) and not args.allow_nonwr:
        raise CliError(EXIT_NOT_WR, f"{args.gprime}: realization graph is not weakly reversible "
                                    "(use --allow-nonwr to report it anyway)")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NotWeaklyReversibleWarning)
        report = analyze_pair(g, gp)
    text = args.json != "-"
    if args.trace and text:
        for b in realizability_blocks(g, gp):
            label = format_complex(b.coords, g.species)
            print(f"vertex {label}:")
            print("  A_y =")
            print("\n".join(_matrix_lines(b.complement)))
            print("  B_y =")
            print("\n".join(_matrix_lines(b.directions)))
            print("  A_y B_y =")
            print("\n".join(_matrix_lines(b.product)))
    if text:
        print("vertex        p  q  ker")
        for r in report.vertex_rows:
            label = format_complex(r.coords, g.species)
            print(f"{label:<12} {r.p:>2} {r.q:>2} {r.kernel_dim:>4}")
        print("kernel dims: " + ",".join(str(r.kernel_dim) for r in report.vertex_rows))
        print(f"realizable flux dim = {report.realizable_flux_dim}")
        print(f"vertices = {report.vertex_count}  linkage classes = {report.linkage_classes}")
        print(f"balanced realizable flux dim = {_fmt(report.balanced_flux_dim)}")
        print(f"dim S = {report.stoich_dim}  dim D0(G) = {report.dynamics_kernel_dim}  "
              f"dim J0(G') = {report.balance_kernel_dim}")
        print(f"balanced flux gate: {'feasible' if report.balanced_flux_gate else 'infeasible'}")
        print(f"toric gate: {'feasible' if report.toric_gate else 'infeasible'}")
        if args.witness:
            for name, cert in (("balanced flux", report.balanced_flux_gate),
                               ("toric (flux, rates)", report.toric_gate)):
                if cert.feasible:
                    print(f"{name} witness: (" + ", ".join(rational(x) for x in cert.witness) + ")")
        print(f"real locus dim = {_fmt(report.real_locus_dim)}")
        print(f"locus dim = {_fmt(report.locus_dim)}")
    payload = pair_payload(g, gp, report, witness=args.witness)
    doc = build_document("pair", [args.g, args.gprime],
                         {"allow_nonwr": args.allow_nonwr, "strict": args.strict,
                          "witness": args.witness},
                         payload, (time.perf_counter() - t0) * 1000)
    _emit(args, doc)
    return EXIT_OK


def _read_candidates(directory: str, g: EGraph, strict: bool) -> list[EGraph]:
    d = Path(directory)
    if not d.is_dir():
        raise CliError(EXIT_INPUT, f"{directory}: not a directory")
    files = sorted(d.glob("*.crn"))
    if not files:
        raise CliError(EXIT_INPUT, f"{directory}: no .crn files")
    return [_reconcile(g, _load(str(f), strict), str(f)) for f in files]


def cmd_scan(args) -> int:
    t0 = time.perf_counter()
    g = _load(args.file, args.strict)
    cands = _read_candidates(args.candidates, g, args.strict) if args.candidates else None
    try:
        result = scan(g, vertex_set=args.vertex_set, cap=args.cap, candidates=cands,
                      jobs=args.jobs, early_exit=not args.no_early_exit)
    except EnumerationTooLarge as e:
        raise CliError(EXIT_TOO_LARGE, str(e)) from e
    except CandidateError as e:
        raise CliError(EXIT_NOT_WR, str(e)) from e
    elapsed = (time.perf_counter() - t0) * 1000
    if args.json != "-":
        print(f"ambient dim |E| = {result.ambient_dim}")
        print(f"real locus dim = {_fmt(result.real_locus_dim)}")
        print(f"locus dim = {_fmt(result.locus_dim)}")
        print(f"candidates evaluated = {result.candidates_evaluated} ({result.enumeration_mode})")
        print(f"early exit = {str(result.early_exit).lower()}")
        print(f"wall clock = {int(elapsed)} ms")
        for c in result.locus_witnesses:
            print(f"witness ({len(c.graph.edges)} edges, locus dim {c.report.locus_dim}):")
            for line in serialize_network(c.graph).splitlines()[1:]:
                print("  " + line)
    doc = build_document(
        "scan", [args.file],
        {"vertex_set": args.vertex_set, "cap": args.cap,
         "candidates": args.candidates, "early_exit": not args.no_early_exit,
         "strict": args.strict},
        scan_payload(result), elapsed)
    _emit(args, doc)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="disgtoric",
        description="Dimensions of disguised toric loci of mass-action reaction networks.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--json", nargs="?", const="-", default=None, metavar="PATH",
                        help="write the JSON report to PATH (stdout if PATH is omitted)")
        sp.add_argument("--strict", action="store_true",
                        help="treat repeated reactions as errors")

    c = sub.add_parser("check", help="summarize one network")
    c.add_argument("file")
    c.add_argument("--bases", action="store_true", help="print D0 and J0 basis vectors")
    common(c)
    c.set_defaults(func=cmd_check)

    pr = sub.add_parser("pair", help="analyze a network against one realization graph")
    pr.add_argument("g")
    pr.add_argument("gprime")
    pr.add_argument("--witness", action="store_true", help="include LP witnesses")
    pr.add_argument("--trace", action="store_true", help="print A_y, B_y and A_y B_y per vertex")
    pr.add_argument("--allow-nonwr", action="store_true",
                    help="report a non weakly reversible realization graph as gated-absent")
    common(pr)
    pr.set_defaults(func=cmd_pair)

    s = sub.add_parser("scan", help="maximize over weakly reversible subgraphs of the complete graph")
    s.add_argument("file")
    s.add_argument("--vertex-set", choices=("sources", "all"), default="sources")
    s.add_argument("--cap", type=int, default=None, help="evaluate at most N candidates")
    s.add_argument("--candidates", metavar="DIR", default=None,
                   help="evaluate the .crn files in DIR instead of enumerating")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--no-early-exit", action="store_true")
    common(s)
    s.set_defaults(func=cmd_scan)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"disgtoric: error: {e}", file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
