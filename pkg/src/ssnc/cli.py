"""Command-line front end.

Exit codes: 0 ok, 1 usage or parse error, 2 Seymour-conjecture counterexample
(or any hunt counterexample), 3 precondition violated, 4 proof divergence.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from . import __version__
from .core import Digraph
from .errors import DigraphError
from .formats import DIGRAPH6_MAX_N, emit, emit_digraph6, parse_any
from .generators import Filter, GenSpec, Kind, Target, hunt_counterexamples
from .properties import find_k_quasi_transitivity_violation, find_k_transitivity_violation, is_m_free, profile
from .prover import TraceError, TraceErrorKind, find_seymour_constructive
from .seymour import lambda_ratio_check, seymour_report

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_COUNTEREXAMPLE = 2
EXIT_PRECONDITION = 3
EXIT_DIVERGENCE = 4

log = logging.getLogger("ssnc")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_input(spec: str) -> tuple[str, str]:
    if spec == "-":
        return sys.stdin.read(), "<stdin>"
    return Path(spec).read_text(), spec


def _describe(D: Digraph, source: str, fmt: str) -> dict:
    return {
        "source": source,
        "format": fmt,
        "n": D.n,
        "m_arcs": D.m_arcs,
        "digraph6": emit_digraph6(D) if D.n <= DIGRAPH6_MAX_N else None,
    }


def _report(command: str, started: float, **payload) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "tool": "ssnc",
        "tool_version": __version__,
        "command": command,
    }
    doc.update(payload)
    doc["timing"] = {"elapsed_seconds": round(time.perf_counter() - started, 6)}
    return doc


def _write(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load(args) -> tuple[Digraph, dict]:
    text, source = _read_input(args.input)
    fmt = args.format or ("digraph6" if text.lstrip().startswith(("&", ">>digraph6<<")) else "edgelist")
    D = parse_any(text, fmt)
    return D, _describe(D, source, fmt)


# -- subcommands -------------------------------------------------------------


def cmd_check(args) -> int:
    started = time.perf_counter()
    D, desc = _load(args)
    ks = sorted(set(args.k or [])) or list(range(2, 7))
    prof = profile(D, ks)
    payload = {"input": desc, "profile": prof.to_dict()}
    if args.m is not None:
        payload["m_free"] = {"m": args.m, "holds": is_m_free(D, args.m)}
    payload["transitivity"] = [
        {
            "k": k,
            "k_transitive_violation": _opt(find_k_transitivity_violation(D, k)),
            "k_quasi_transitive_violation": _opt(find_k_quasi_transitivity_violation(D, k)),
        }
        for k in ks
    ]
    code = EXIT_OK
    if D.n:
        sr = seymour_report(D)
        lam = lambda_ratio_check(D)
        payload["seymour"] = sr.to_dict()
        payload["lambda_check"] = {
            "max_ratio": None if lam.max_ratio is None else str(lam.max_ratio),
            "passes": lam.passes,
            "marginal": lam.marginal,
            "witness": lam.witness,
        }
        if not sr.has_seymour_vertex:
            code = EXIT_COUNTEREXAMPLE
    else:
        payload["seymour"] = None
    _write(_report("check", started, **payload), args.out)
    return code


def _opt(w):
    return None if w is None else w.to_dict()


def cmd_trace(args) -> int:
    started = time.perf_counter()
    D, desc = _load(args)
    try:
        trace = find_seymour_constructive(D, args.k, skip_precheck=args.skip_precheck)
    except TraceError as exc:
        payload = {"input": desc, "k": args.k, "ok": False, "error": exc.to_dict()}
        _write(_report("trace", started, **payload), args.out)
        print(f"trace failed: {exc}", file=sys.stderr)
        return {
            TraceErrorKind.PRECONDITION_VIOLATED: EXIT_PRECONDITION,
            TraceErrorKind.PROOF_DIVERGENCE: EXIT_DIVERGENCE,
            TraceErrorKind.FALLBACK_EXHAUSTED: EXIT_COUNTEREXAMPLE,
        }[exc.kind]
    payload = {
        "input": desc,
        "k": args.k,
        "ok": True,
        "trace": trace.to_dict(),
        "seymour": seymour_report(D).to_dict(),
    }
    _write(_report("trace", started, **payload), args.out)
    return EXIT_OK


def _progress(rep) -> None:
    print(f"progress: {rep.summary()}", file=sys.stderr, flush=True)


def _run_hunt(command: str, spec: GenSpec, target: str, out: str | None, every: int) -> int:
    started = time.perf_counter()
    rep = hunt_counterexamples(spec, Target(target), progress=_progress, progress_every=every)
    print(rep.summary(), file=sys.stderr)
    _write(_report(command, started, hunt=rep.to_dict()), out)
    return EXIT_OK if rep.ok else EXIT_COUNTEREXAMPLE


def cmd_enumerate(args) -> int:
    spec = GenSpec(
        Kind.EXHAUSTIVE,
        args.n,
        filters=tuple(Filter.parse(f) for f in args.filter or ()),
        limit=args.limit,
    )
    return _run_hunt("enumerate", spec, args.target, args.out, args.progress_every)


def cmd_hunt(args) -> int:
    spec = GenSpec(
        Kind(args.kind),
        args.n,
        seed=args.seed,
        p_arc=args.p,
        connection_set=tuple(args.connection or ()),
        filters=tuple(Filter.parse(f) for f in args.filter or ()),
        limit=args.limit,
        max_attempts=args.max_attempts,
        delta=args.delta,
    )
    return _run_hunt("hunt", spec, args.target, args.out, args.progress_every)


def cmd_convert(args) -> int:
    D, _ = _load(args)
    text = emit(D, args.to)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ssnc", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"ssnc {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def graph_input(sp):
        sp.add_argument("input", help="graph file, or - for stdin")
        sp.add_argument("--format", choices=["edgelist", "digraph6"], help="default: sniff")
        sp.add_argument("--out", help="write the JSON report here instead of stdout")

    sp = sub.add_parser("check", help="class profile and Seymour report for one digraph")
    graph_input(sp)
    sp.add_argument("--k", type=int, action="append", help="anti-transitivity probe (repeatable)")
    sp.add_argument("--m", type=int, help="also test m-freeness")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("trace", help="run the constructive Seymour-vertex finder")
    graph_input(sp)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--skip-precheck", action="store_true")
    sp.set_defaults(func=cmd_trace)

    def hunt_opts(sp):
        sp.add_argument("--target", choices=[t.value for t in Target], default="ssnc")
        sp.add_argument("--filter", action="append", help="e.g. m_free=3, k_anti_transitive=7, min_out_deg=2")
        sp.add_argument("--limit", type=int)
        sp.add_argument("--out")
        sp.add_argument("--progress-every", type=int, default=10000)

    sp = sub.add_parser("enumerate", help="exhaustive sweep over labeled oriented graphs")
    sp.add_argument("--n", type=int, required=True)
    hunt_opts(sp)
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("hunt", help="counterexample hunt over a generated stream")
    sp.add_argument("--kind", choices=[k.value for k in Kind], default="random")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float, default=0.5, help="arc probability (--kind random) or extra-arc probability (--kind planted)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--connection", type=int, nargs="*", help="circulant connection set")
    sp.add_argument("--max-attempts", type=int)
    sp.add_argument("--delta", type=int, default=3, help="planted minimum out-degree for --kind planted")
    hunt_opts(sp)
    sp.set_defaults(func=cmd_hunt)

    sp = sub.add_parser("convert", help="convert between edge list and digraph6")
    graph_input(sp)
    sp.add_argument("--to", choices=["edgelist", "digraph6"], required=True)
    sp.set_defaults(func=cmd_convert)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except (DigraphError, OSError) as exc:
        print(f"ssnc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
