"""Command-line front end.

Exit status: 0 on success or when a property holds, 1 when a counterexample
was found, 2 on any error.
"""

from __future__ import annotations

import argparse
import inspect
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .adversary import (
    GADGETS,
    AttackError,
    KFailures,
    Touring,
    VerifyConfig,
    VerifyError,
    attack_complete_r,
    gadget,
    k7_cyclic_pattern,
    parse_mode,
    replay,
    touring_fig_pattern,
    verify,
)
from .classifier import ROW_FIELDS, MinorBudget, classify
from .forwarding import PatternError, dumps, loads
from .graph import GraphError, complete, format_edge_text
from .patterns import GENERATORS, gen_ham_tour, gen_outerplanar_tour, ham_decompose
from .report import FORMATS, ExportError, IngestError, ReportConfig, export, ingest_file, load_dataset, run_report

OK, FOUND, ERROR = 0, 1, 2

log = logging.getLogger("failover")


def _emit(obj) -> None:
    print(json.dumps(obj, indent=1, sort_keys=True))


def _graph(path):
    return ingest_file(path)[1]


def _budget(args) -> MinorBudget:
    return MinorBudget(max_states=args.budget, seed=args.seed)


# subcommands ------------------------------------------------------------


def cmd_ingest(args) -> int:
    d = load_dataset(args.dir)
    out = Path(args.out) if args.out else None
    if out:
        out.mkdir(parents=True, exist_ok=True)
    for e in d.entries:
        print(f"{e.name}\tn={e.graph.n}\tm={e.graph.m}\t{'; '.join(e.notes) or 'clean'}")
        if out:
            (out / f"{e.name}.txt").write_text(format_edge_text(e.graph))
    print(f"# {len(d)} entries, sha256 {d.digest()}")
    return OK


def cmd_classify(args) -> int:
    name, g, notes = ingest_file(args.file)
    c = classify(g, _budget(args), name=name)
    row = c.row()
    if args.json:
        _emit(dict(row, notes=list(notes) + list(c.notes)))
    else:
        print(",".join(ROW_FIELDS))
        print(",".join(_csv_cell(row[f]) for f in ROW_FIELDS))
    return OK


def _csv_cell(x) -> str:
    s = str(x)
    return '"' + s.replace('"', '""') + '"' if any(ch in s for ch in ',"\n') else s


def cmd_verify(args) -> int:
    g = _graph(args.graph)
    p = loads(Path(args.pattern).read_text(), g)
    cfg = VerifyConfig(args.exhaustive_max_edges, args.samples, args.seed, args.workers)
    v = verify(g, p, parse_mode(args.mode), args.budget, cfg)
    _emit(v.to_dict(g))
    return FOUND if v.kind == "counterexample" else OK


def _call_generator(name: str, g, s, t):
    if name not in GENERATORS:
        raise PatternError(f"unknown generator {name!r}; choose from {', '.join(GENERATORS)}")
    fn = GENERATORS[name]
    params = [p for p in inspect.signature(fn).parameters if p not in ("emb",)]
    kw = {}
    if "s" in params:
        if s is None:
            raise PatternError(f"{name} needs --s")
        kw["s"] = s
    if "t" in params:
        if t is None:
            raise PatternError(f"{name} needs --t")
        kw["t"] = t
    return fn(g, **kw)


def cmd_pattern_gen(args) -> int:
    g = _graph(args.graph)
    p = _call_generator(args.alg, g, args.s, args.t)
    text = dumps(p)
    if args.out:
        Path(args.out).write_text(text + "\n")
        print(f"wrote {args.out}")
    else:
        print(text)
    return OK


def cmd_attack(args) -> int:
    if args.gadget:
        gd = gadget(args.gadget)
        info = {
            "gadget": gd.name,
            "graph": {"n": gd.graph.n, "edges": [list(e) for e in gd.graph.edges]},
            "roles": gd.roles,
            "failed": {k: [list(e) for e in f.edges(gd.graph)] for k, f in gd.failures.items()},
            "survivors": [list(e) for e in gd.survivors()],
            "note": gd.note,
        }
        p = None
        if args.pattern:
            p = loads(Path(args.pattern).read_text(), gd.graph)
        elif gd.name == "k7_source_dest":
            p = k7_cyclic_pattern()
        elif gd.name in ("k4_tour", "k23_tour"):
            p = touring_fig_pattern(gd.name)
        if p is None:
            _emit(info)
            return OK
        start = p.s if p.s is not None else gd.roles.get("v1", 0)
        out = replay(gd.graph, p, gd.failure, start)
        info["outcome"] = out.to_dict()
        _emit(info)
        defeated = not (out.complete if hasattr(out, "complete") else out.reached)
        return FOUND if defeated else OK
    r = args.complete_r
    n = 3 + 5 * r
    if args.pattern:
        p = loads(Path(args.pattern).read_text())
    else:
        p = _call_generator(args.alg, complete(n), args.s, args.t)
    res = attack_complete_r(p, r, args.max_tries)
    _emit({
        "graph": f"K{n}",
        "pattern": dict(p.provenance),
        "s": p.s,
        "t": p.t,
        "failed_edges": [list(e) for e in res.failure.edges(p.graph)],
        "failures": len(res.failure),
        "connectivity": res.connectivity,
        "blocks": [dict(b, block=list(b["block"])) for b in res.blocks],
        "spare": res.spare,
        "outcome": res.outcome.to_dict(),
    })
    return FOUND


def cmd_tour(args) -> int:
    g = _graph(args.graph)
    cfg = VerifyConfig(args.exhaustive_max_edges, args.samples, args.seed, args.workers)
    if args.k is not None:
        if args.k < 1:
            raise VerifyError("--k must be at least 1")
        d = ham_decompose(g)
        if len(d.cycles) < args.k:
            raise VerifyError(f"only {len(d.cycles)} edge-disjoint Hamiltonian cycles available")
        p = gen_ham_tour(d, g)
        mode = KFailures(args.k - 1)
    else:
        p = gen_outerplanar_tour(g)
        mode = Touring()
    v = verify(g, p, mode, None, cfg)
    res = v.to_dict(g)
    res["pattern"] = dict(p.provenance)
    res["mode"] = str(mode)
    _emit(res)
    return FOUND if v.kind == "counterexample" else OK


def cmd_report(args) -> int:
    if args.format == "dot-gadgets":
        paths = export(None, "dot-gadgets", args.out)
        for p in paths:
            print(p)
        return OK
    d = load_dataset(args.dir)
    rep = run_report(d, ReportConfig(_budget(args), args.workers))
    for p in export(rep, args.format, args.out, timing=args.timing):
        print(p)
    for k in ("touring", "destination", "source_destination"):
        shares = ", ".join(f"{st} {rep.aggregates[f'{k}.{st}.percent']}%" for st in
                           ("Possible", "Impossible", "Sometimes", "Unknown"))
        print(f"{k}: {shares}")
    print(f"planar not outerplanar: {rep.aggregates['planar_not_outerplanar.percent']}%")
    print(f"mean sometimes fraction: {rep.aggregates['sometimes.mean_fraction_percent']}%")
    return OK


# parser -----------------------------------------------------------------


def _search_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="seed for sampled failure sets")
    p.add_argument("--samples", type=int, default=20000, help="sampled failure sets on large graphs")
    p.add_argument("--exhaustive-max-edges", type=int, default=16)
    p.add_argument("--workers", type=int, default=None, help="worker processes (default: $FAILOVER_WORKERS or 1)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="failover", description="Static failover routing: patterns, verification, classification.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="normalize a directory of GraphML or edge-list files")
    p.add_argument("dir")
    p.add_argument("--out", help="write normalized edge lists here")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("classify", help="classify one topology for all three routing models")
    p.add_argument("file")
    p.add_argument("--budget", type=int, default=20000, help="minor-search state budget")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", help="search failure sets against a pattern")
    p.add_argument("graph")
    p.add_argument("pattern", help="pattern JSON as written by 'pattern gen'")
    p.add_argument("--mode", required=True, help="perfect | tolerance:R | kfail:K | tour")
    p.add_argument("--budget", type=int, default=None,
                   help="stop after this many failure sets (the verdict is then inconclusive unless a counterexample turned up)")
    _search_opts(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("pattern", help="pattern generators")
    psub = p.add_subparsers(dest="pattern_cmd", required=True)
    g = psub.add_parser("gen", help="generate a pattern as JSON")
    g.add_argument("alg", choices=sorted(GENERATORS))
    g.add_argument("graph")
    g.add_argument("--s", type=int)
    g.add_argument("--t", type=int)
    g.add_argument("--out")
    g.set_defaults(func=cmd_pattern_gen)

    p = sub.add_parser("attack", help="replay a proof gadget or attack a pattern on K_{3+5r}")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--gadget", choices=GADGETS + ["r_minor_counterexample_3"])
    which.add_argument("--complete-r", type=int)
    p.add_argument("--pattern", help="pattern JSON to attack instead of a built-in one")
    p.add_argument("--alg", default="distance2", choices=["distance2", "ham-route", "round-robin", "alg1-k5"])
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--max-tries", type=int, default=20000)
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("tour", help="build and verify a touring pattern")
    p.add_argument("graph")
    p.add_argument("--k", type=int, help="use k edge-disjoint Hamiltonian cycles; verifies up to k-1 failures")
    _search_opts(p)
    p.set_defaults(func=cmd_tour)

    p = sub.add_parser("report", help="classify a dataset directory and export the summary")
    p.add_argument("dir")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=FORMATS, default="csv")
    p.add_argument("--budget", type=int, default=20000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--timing", action="store_true", help="add wall time per row (breaks byte-identical output)")
    p.set_defaults(func=cmd_report)
    return ap


ERRORS = (GraphError, PatternError, VerifyError, AttackError, IngestError, ExportError, OSError, ValueError, KeyError)


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return OK if e.code == 0 else ERROR
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
