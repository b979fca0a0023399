"""Command-line front end.

Subcommands:
  verify PATH        run the init/safety checks and the inductiveness check
  bench MANIFEST     run every system in a manifest, emit a result table
  sample-check PATH  randomized one-sided falsification oracle

Exit codes for verify: 0 proved (and init/safety hold), 1 falsified or
init/safety failure, 2 unknown, 3 error.
"""

from __future__ import annotations

import argparse
import json
import sys as _sys

from . import config
from .driver import check_inductiveness, check_init_condition, check_safety_condition, sample_check
from .errors import IndinvError

EXIT_PROVED = 0
EXIT_FALSIFIED = 1
EXIT_UNKNOWN = 2
EXIT_ERROR = 3


def _load_with_overrides(path: str, args) -> "config.SystemSpec":
    import os
    try:
        with open(path) as f:
            doc = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise IndinvError(f"cannot load {path}: {e}") from e
    if not isinstance(doc, dict):
        raise IndinvError(f"{path}: top level must be an object")
    opts = dict(doc.get("options") or {})
    for flag, key in (("bound_method", "bound_method"), ("split", "split"),
                      ("max_splits", "max_splits"), ("min_width", "min_width"),
                      ("epsilon", "epsilon")):
        v = getattr(args, flag, None)
        if v is not None:
            opts[key] = v
    doc["options"] = opts
    spec = config.parse_system(doc, os.path.dirname(os.path.abspath(path)))
    if getattr(args, "emit_smtlib", None):
        from dataclasses import replace
        spec = replace(spec, options=replace(spec.options,
                                             smtlib_dir=args.emit_smtlib))
    return spec


def _print_verify(sys_spec, init_ok, safe_ok, outcome, fmt: str):
    if fmt == "structured":
        doc = {"name": sys_spec.name}
        if init_ok is not None:
            doc["init_condition"] = init_ok
            doc["safety_condition"] = safe_ok
        doc.update(outcome.to_dict())
        print(json.dumps(doc, indent=1))
        return
    print(f"system: {sys_spec.name}")
    if init_ok is not None:
        print(f"init => candidate: {'holds' if init_ok else 'FAILS'}")
        print(f"candidate => safe: {'holds' if safe_ok else 'FAILS'}")
    print(f"inductiveness: {outcome.verdict}")
    if outcome.verdict == "proved":
        print(f"bridge clauses: {len(outcome.bridge.clauses)}")
    elif outcome.verdict == "falsified":
        print(f"falsifying state region: {list(outcome.fstate.lo)} .. "
              f"{list(outcome.fstate.hi)}")
        print(f"falsifying action region: {list(outcome.fpred.lo)} .. "
              f"{list(outcome.fpred.hi)}")
        if outcome.witness:
            s, a, sp = outcome.witness
            print(f"witness: s={list(s)} a={list(a)} s'={list(sp)}")
        else:
            print("witness: none (region-level refutation only)")
    elif outcome.reason:
        print(f"reason: {outcome.reason}")
    st = outcome.stats
    print(f"stats: splits={st.splits} smt_queries={st.smt_queries} "
          f"nnv_queries={st.nnv_queries} wall_time_s={st.wall_time:.3f}")


def cmd_verify(args) -> int:
    try:
        spec = _load_with_overrides(args.path, args)
    except IndinvError as e:
        print(f"error: {e}", file=_sys.stderr)
        return EXIT_ERROR
    init_ok = safe_ok = None
    if not args.skip_init_safe:
        init_ok = check_init_condition(spec)
        safe_ok = check_safety_condition(spec)
    outcome = check_inductiveness(spec)
    _print_verify(spec, init_ok, safe_ok, outcome, args.format)
    if outcome.verdict == "unknown":
        return EXIT_UNKNOWN
    if outcome.verdict == "falsified" or init_ok is False or safe_ok is False:
        return EXIT_FALSIFIED
    return EXIT_PROVED


def run_bench(paths: list[str], args=None) -> list[dict]:
    rows = []
    for path in paths:
        row = {"name": path, "verified": "E", "wall_time_s": None,
               "splits": None, "smt_queries": None, "nnv_queries": None}
        try:
            spec = _load_with_overrides(path, args) if args is not None \
                else config.load_system(path)
            outcome = check_inductiveness(spec)
            row["name"] = spec.name
            row["verified"] = {"proved": "T", "falsified": "F",
                               "unknown": "U"}[outcome.verdict]
            row["wall_time_s"] = round(outcome.stats.wall_time, 3)
            row["splits"] = outcome.stats.splits
            row["smt_queries"] = outcome.stats.smt_queries
            row["nnv_queries"] = outcome.stats.nnv_queries
        except (IndinvError, OSError) as e:
            row["error"] = str(e)
        rows.append(row)
    return rows


def cmd_bench(args) -> int:
    try:
        with open(args.manifest) as f:
            doc = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        print(f"error: cannot load manifest: {e}", file=_sys.stderr)
        return EXIT_ERROR
    paths = doc["systems"] if isinstance(doc, dict) else doc
    import os
    base = os.path.dirname(os.path.abspath(args.manifest))
    paths = [p if os.path.isabs(p) else os.path.join(base, p) for p in paths]
    rows = run_bench(paths, args)
    if args.format == "structured":
        print(json.dumps(rows, indent=1))
        return EXIT_PROVED
    header = f"{'name':30} {'Verified?':9} {'time(s)':>8} {'#Splits':>8} " \
             f"{'#SMT':>6} {'#NNV':>6}"
    print(header)
    print("-" * len(header))
    for r in rows:
        if "error" in r:
            print(f"{r['name']:30} {'ERROR':9} {r['error']}")
        else:
            print(f"{r['name']:30} {r['verified']:9} {r['wall_time_s']:>8} "
                  f"{r['splits']:>8} {r['smt_queries']:>6} {r['nnv_queries']:>6}")
    return EXIT_PROVED


def cmd_sample_check(args) -> int:
    try:
        spec = config.load_system(args.path)
        report = sample_check(spec, args.n, seed=args.seed)
    except IndinvError as e:
        print(f"error: {e}", file=_sys.stderr)
        return EXIT_ERROR
    if args.format == "structured":
        print(json.dumps({"name": spec.name, **report.to_dict()}, indent=1))
    else:
        print(f"system: {spec.name}")
        print(f"samples: {report.samples}  violations: {report.violations}  "
              f"no_successor: {report.no_successor}")
        for s, a, sp in report.examples:
            print(f"  violation: s={list(s)} a={list(a)} s'={list(sp)}")
    return EXIT_PROVED if report.violations == 0 else EXIT_FALSIFIED


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="indinv",
                                 description="Inductiveness checking for "
                                             "NN-controlled systems")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--bound-method", dest="bound_method",
                       choices=["ibp", "crown"], default=None)
        p.add_argument("--split", choices=["all-dims", "longest-dim"], default=None)
        p.add_argument("--max-splits", dest="max_splits", type=int, default=None)
        p.add_argument("--min-width", dest="min_width", type=float, default=None)
        p.add_argument("--epsilon", type=float, default=None)
        p.add_argument("--format", choices=["table", "structured"], default="table")

    pv = sub.add_parser("verify", help="check a single system")
    pv.add_argument("path")
    common(pv)
    pv.add_argument("--emit-smtlib", dest="emit_smtlib", metavar="DIR", default=None)
    pv.add_argument("--skip-init-safe", action="store_true")
    pv.set_defaults(func=cmd_verify)

    pb = sub.add_parser("bench", help="run a manifest of systems")
    pb.add_argument("manifest")
    common(pb)
    pb.set_defaults(func=cmd_bench)

    ps = sub.add_parser("sample-check", help="randomized falsification oracle")
    ps.add_argument("path")
    ps.add_argument("n", type=int)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--format", choices=["table", "structured"], default="table")
    ps.set_defaults(func=cmd_sample_check)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
