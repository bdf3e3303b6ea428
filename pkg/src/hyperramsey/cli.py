"""Command-line front end.

Exit codes: 0 success, 1 a valid but negative answer (UNSAT, invalid
coloring, timeout), 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import os
import secrets
import sys
import time
from pathlib import Path
from typing import Sequence

from . import bounds as B
from .direct import EdgeColoring, build_direct_cnf, coloring_from_assignment, verify_certificate
from .pasting import PcvColoring, build_pasting_cnf, decode_coloring, verify_pasting_coloring
from .pcv import enum_pp, enum_qq, enum_vk
from .sat import Status, export_dimacs, format_assignment, parse_dimacs, solve_complete
from .sat.local_search import LocalSearchParams, NeighborRelation, solve_local_search

WORKERS_ENV = "HYPERRAMSEY_WORKERS"


class UsageError(Exception):
    pass


def _pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'P,Q', got {text!r}") from None
    return a, b


def _quad(text: str) -> tuple[int, int, int, int]:
    try:
        k, p, q, v = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'K,P,Q,VALUE', got {text!r}") from None
    return k, p, q, v


def _add_search_flags(ap: argparse.ArgumentParser) -> None:
    ap.add_argument("--seed", type=int, help="local-search seed (generated and printed if omitted)")
    ap.add_argument("--cutoff", type=int, default=1_000_000, help="flips per restart")
    ap.add_argument("--restarts", type=int, default=1000, help="maximum restarts")
    ap.add_argument("--time-limit", type=float, help="wall-clock limit in seconds")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hyperramsey", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    e = sub.add_parser("enum", help="print a PCV family")
    e.add_argument("--family", choices=["V", "P", "Q"], required=True)
    e.add_argument("--s", type=int, required=True, help="total (k, p or q)")
    e.add_argument("--d", type=int, required=True, help="maximum number of parts")

    p = sub.add_parser("paste", help="build (and optionally solve) a pasting CNF")
    for name in ("k", "p", "q", "d"):
        p.add_argument(f"--{name}", type=int, required=True)
    p.add_argument("--dimacs", type=Path, help="write the CNF in DIMACS format")
    p.add_argument("--solve", choices=["complete", "local"])
    p.add_argument("--budget", type=int, help="decision-node limit for the complete solver")
    p.add_argument("--out", type=Path, help="write the decoded coloring here instead of stdout")
    _add_search_flags(p)

    d = sub.add_parser("direct", help="build the direct CNF for r_k(k+1,k+1) > n or search for a certificate")
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--k", type=int, required=True)
    d.add_argument("--dimacs", type=Path)
    d.add_argument("--search", action="store_true", help="run local search")
    d.add_argument("--out", type=Path, help="write the certificate here instead of stdout")
    _add_search_flags(d)

    s = sub.add_parser("solve", help="solve a DIMACS file")
    s.add_argument("file", type=Path)
    s.add_argument("--solver", choices=["complete", "local"], default="complete")
    s.add_argument("--budget", type=int)
    s.add_argument("--hypergraph", type=_pair, metavar="N,K",
                   help="variables are colex-ranked k-subsets of [n]; neighbors share an endpoint")
    _add_search_flags(s)

    v = sub.add_parser("verify", help="check a pcv-coloring or ramsey-cert file")
    v.add_argument("file", type=Path)
    v.add_argument("--p", type=int)
    v.add_argument("--q", type=int)
    v.add_argument("--d", type=int, help="block count for a pcv-coloring (default: the file's d)")

    b = sub.add_parser("bounds", help="compute lower-bound tables")
    b.add_argument("--k", type=int, help="single edge size")
    b.add_argument("--k-min", type=int)
    b.add_argument("--k-max", type=int)
    b.add_argument("--p-max", type=int)
    b.add_argument("--q-max", type=int)
    b.add_argument("--cell", type=_pair, metavar="P,Q", help="print one cell with its derivation")
    b.add_argument("--cert", type=Path, action="append", default=[], help="certificate file (repeatable)")
    b.add_argument("--assume", type=_quad, action="append", default=[], metavar="K,P,Q,VALUE",
                   help="unverified seed fact (repeatable)")
    b.add_argument("--extend", type=int, action="append", default=[], metavar="K",
                   help="try to add a d=p-1 rule for k > 25 by solving pasting CNFs")
    b.add_argument("--format", choices=["text", "csv"], default="text")
    b.add_argument("--config", type=Path, help="JSON file with default limits, certificates, assumptions")
    return ap


def _read(path: Path) -> str:
    try:
        return path.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: Path, text: str) -> None:
    try:
        path.write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def _seed(args, out) -> int:
    if args.seed is not None:
        return args.seed
    seed = secrets.randbelow(2**31)
    print(f"seed={seed}", file=out)
    return seed


def _progress_printer(err):
    last = [0.0]

    def report(flips: int, unsat: int, restart: int) -> None:
        now = time.monotonic()
        if now - last[0] >= 5.0:
            last[0] = now
            print(f"flips={flips} unsat={unsat} restart={restart}", file=err, flush=True)

    return report


def _local(cnf, neighbors, args, out, err):
    params = LocalSearchParams(seed=_seed(args, out), cutoff_flips=args.cutoff,
                               max_restarts=args.restarts, time_limit=args.time_limit)
    return solve_local_search(cnf, neighbors, params, progress=_progress_printer(err))


def _cmd_enum(args, out, err) -> int:
    if args.family == "V":
        fam = enum_vk(args.s, args.d)
    elif args.family == "P":
        fam = enum_pp(args.s, args.d)
    else:
        fam = enum_qq(args.s, args.d)
    for v in fam:
        print(v, file=out)
    return 0


def _cmd_paste(args, out, err) -> int:
    instance, cnf = build_pasting_cnf(args.k, args.p, args.q, args.d)
    if args.dimacs:
        _write(args.dimacs, export_dimacs(cnf))
    if not args.solve:
        print(f"variables={cnf.variable_count} clauses={len(cnf)}", file=out)
        for i, v in enumerate(instance.variables, 1):
            print(f"x{i} {v}", file=out)
        return 0
    if args.solve == "complete":
        result = solve_complete(cnf, args.budget)
    else:
        result = _local(cnf, NeighborRelation.clause_sharing(cnf), args, out, err)
    print(result.status, file=out)
    if not result.is_sat:
        return 1
    chi = decode_coloring(instance, result.assignment)
    verdict = verify_pasting_coloring(chi, args.p, args.q, args.d)
    if not verdict.valid:
        raise AssertionError(f"decoded coloring failed verification: {verdict}")
    text = chi.to_text(args.d)
    if args.out:
        _write(args.out, text)
    else:
        out.write(text)
    return 0


def _cmd_direct(args, out, err) -> int:
    cnf, neighbors = build_direct_cnf(args.n, args.k)
    if args.dimacs:
        _write(args.dimacs, export_dimacs(cnf))
    if not args.search:
        print(f"variables={cnf.variable_count} clauses={len(cnf)}", file=out)
        return 0
    result = _local(cnf, neighbors, args, out, err)
    print(result.status, file=out)
    if not result.is_sat:
        return 1
    coloring = coloring_from_assignment(result.assignment, args.n, args.k)
    verdict = verify_certificate(coloring, args.k + 1, args.k + 1)
    if not verdict.valid:
        raise AssertionError(f"local-search coloring failed verification: {verdict}")
    text = coloring.to_text(args.k + 1, args.k + 1)
    if args.out:
        _write(args.out, text)
    else:
        out.write(text)
    return 0


def _cmd_solve(args, out, err) -> int:
    cnf = parse_dimacs(_read(args.file))
    if args.solver == "complete":
        result = solve_complete(cnf, args.budget)
    else:
        if args.hypergraph:
            n, k = args.hypergraph
            direct, neighbors = build_direct_cnf(n, k)
            if neighbors.variable_count != cnf.variable_count:
                raise UsageError(f"--hypergraph {n},{k} has {neighbors.variable_count} variables, "
                                 f"the CNF has {cnf.variable_count}")
        else:
            neighbors = NeighborRelation.clause_sharing(cnf)
        result = _local(cnf, neighbors, args, out, err)
    print(result.status, file=out)
    if not result.is_sat:
        return 1
    out.write(format_assignment(result.assignment))
    return 0


def _cmd_verify(args, out, err) -> int:
    text = _read(args.file)
    header = text.lstrip().split("\n", 1)[0]
    if header.startswith("pcv-coloring"):
        chi, d = PcvColoring.from_text(text)
        if args.p is None or args.q is None:
            raise UsageError("--p and --q are required to verify a pcv-coloring")
        verdict = verify_pasting_coloring(chi, args.p, args.q, args.d or d)
    elif header.startswith("ramsey-cert"):
        coloring, p, q = EdgeColoring.from_text(text)
        verdict = verify_certificate(coloring, args.p or p, args.q or q)
    else:
        raise UsageError(f"{args.file}: unrecognised header {header!r}")
    print(verdict, file=out)
    return 0 if verdict.valid else 1


def _cmd_bounds(args, out, err) -> int:
    cfg = B.load_config(args.config) if args.config else {}
    k_min = args.k if args.k is not None else (args.k_min if args.k_min is not None else cfg.get("k_min", 4))
    k_max = args.k if args.k is not None else (args.k_max if args.k_max is not None else cfg.get("k_max", k_min))
    p_max = args.p_max or cfg.get("p_max")
    q_max = args.q_max or cfg.get("q_max")
    if args.cell:
        p_max = max(p_max or 0, *args.cell)
        q_max = max(q_max or 0, *args.cell)
    p_max = p_max or k_max + 4
    q_max = q_max or k_max + 4
    limits = B.Limits(k_max, p_max, q_max, k_min)
    certs = list(cfg.get("certificates", [])) + [str(c) for c in args.cert]
    for c in certs:
        if not Path(c).is_file():
            raise UsageError(f"cannot read certificate {c}")
    assumed = [tuple(a) for a in cfg.get("assume", [])] + list(args.assume)
    try:
        facts = B.seed_facts(limits, certs, assumed)
    except B.CertificateRejected as exc:
        print(str(exc), file=out)
        return 1
    rules = B.builtin_rules()
    for k in args.extend:
        outcome = B.extend_rules(k)
        print(outcome, file=err)
        if outcome.rule:
            rules.append(outcome.rule)
    table = B.compute_table(facts, rules, limits)
    if args.cell:
        if args.k is None and k_min != k_max:
            raise UsageError("--cell needs a single --k")
        fact = table[(k_min, *args.cell)]
        print(fact, file=out)
        out.write(B.derivation(fact))
    elif args.format == "csv":
        out.write(table.to_csv())
    else:
        out.write(table.to_text())
    return 0


_COMMANDS = {
    "enum": _cmd_enum,
    "paste": _cmd_paste,
    "direct": _cmd_direct,
    "solve": _cmd_solve,
    "verify": _cmd_verify,
    "bounds": _cmd_bounds,
}


def _configure_workers() -> None:
    raw = os.environ.get(WORKERS_ENV)
    if not raw:
        return
    try:
        workers = int(raw)
    except ValueError:
        raise UsageError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None
    import numba

    numba.set_num_threads(max(1, min(workers, numba.config.NUMBA_NUM_THREADS)))


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _configure_workers()
        return _COMMANDS[args.command](args, out, err)
    except (UsageError, ValueError, KeyError) as exc:
        print(f"hyperramsey {args.command}: error: {exc}", file=err)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
