"""Command-line entry point: ``exotic-hecke <command> ...``.

Every command builds a JSON report ``{"suite", "checks": [{"name", "status",
"detail"}]}``; ``--format text`` renders that report, it never recomputes.
Exit status: 0 all checks passed, 1 some check failed, 2 usage error,
3 I/O or network error.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
DATA_DIR = Path(__file__).resolve().parent / "data"

log = logging.getLogger("exotic_hecke")


class UsageError(Exception):
    pass


def _check(name: str, ok: bool | None, detail=None) -> dict:
    status = "skip" if ok is None else "pass" if ok else "fail"
    return {"name": name, "status": status, "detail": detail}


def _jsonable(x):
    from fractions import Fraction
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


# -- suites -----------------------------------------------------------------------


def suite_lemma_bl(args) -> list[dict]:
    from .exotic_groups import KINDS, build_group, verify_bl
    checks = []
    for kind in KINDS:
        rep = verify_bl(build_group(kind))
        checks.append(_check(f"c-values {kind}", rep.passed, rep.to_json()))
    return checks


def suite_densities(args) -> list[dict]:
    from .dirichlet import q_density_table
    from .exotic_groups import KINDS, PROJ_TYPE
    from .rep_engine import REFERENCE_DENSITIES, REFERENCE_R2_SPLIT, build_twist, densities
    checks = []
    for kind in KINDS:
        rep = densities(build_twist(kind, 1))
        want = REFERENCE_DENSITIES[PROJ_TYPE[kind]]
        ok = rep.r_counts == want and (rep.r2_split is None or rep.r2_split == REFERENCE_R2_SPLIT)
        checks.append(_check(f"projective order densities {kind}", ok, _jsonable(rep.to_json())))
    for kind in KINDS:
        for m in (2, 4, 8, 12):
            rep = densities(build_twist(kind, m))
            checks.append(_check(f"partition identities {kind} m={m}", rep.passed, _jsonable(rep.to_json())))
    for row in q_density_table(args.max_d):
        checks.append(_check(f"Q_{row['l']}^{row['e']} density d={row['d']}", row["ok"], _jsonable(row)))
    return checks


def suite_theorems(args) -> list[dict]:
    from .rep_engine import theorem_sweep
    workers = 1 if args.serial else args.workers
    rep = theorem_sweep(args.max_twist, workers=workers, elementwise=not args.skip_elementwise)
    checks = []
    for r in rep.results:
        v = r["verdict"]
        ok = None if v["status"] == "out-of-hypothesis" else v["status"] == "pass"
        checks.append(_check(f"field {v['kind']} m={v['m']}", ok, v))
    missing = rep.missing_coverage()
    checks.append(_check("coverage", not missing, {"realized_even_d": rep.coverage(), "missing": missing}))
    checks.append(_check("refinement cross-check", not rep.refinement_disagreements,
                         rep.refinement_disagreements))
    if not args.skip_elementwise:
        checks.append(_check("elementwise Q(a_p) formula", not rep.elementwise_failures,
                             {"checked": rep.elementwise_checked, "failures": rep.elementwise_failures[:20]}))
    checks.append(_check("containment lower bounds", not rep.containment_failures, rep.containment_failures))
    checks.append(_check("partition identities", not rep.density_failures, rep.density_failures))
    return checks


def suite_squarefree(args) -> list[dict]:
    from .rep_engine import allowed_squarefree_orders
    want = {"A4": {6}, "S4": {2, 4, 6, 12}, "A5": {2, 6, 10, 30}}
    checks = []
    for t, w in want.items():
        got = allowed_squarefree_orders(t)
        checks.append(_check(f"square-free orders {t}", set(got) == w, sorted(got)))
    return checks


def cmd_verify(args) -> tuple[str, list[dict]]:
    suites = {"lemma-bl": suite_lemma_bl, "densities": suite_densities,
              "theorems": suite_theorems, "squarefree-orders": suite_squarefree}
    return f"verify {args.suite}", suites[args.suite](args)


def cmd_classify(args) -> tuple[str, list[dict]]:
    from .newform_classify import check_prediction, classify_type, load_newforms
    checks = []
    for rec in load_newforms(args.fixture):
        res = classify_type(rec, n_min=args.n_min)
        detail = res.to_json()
        ok = None
        if res.predicted is not None:
            chk = check_prediction(rec, res, n_split=args.n_split)
            detail = res.to_json()
            detail["check"] = chk.to_json()
            ok = chk.status == "pass"
        checks.append(_check(f"classify {rec.label}", ok, detail))
    return "classify", checks


def cmd_tables(args) -> tuple[str, list[dict]]:
    from .newform_classify import build_tables, load_metadata
    tables = build_tables(load_metadata(args.metadata), args.level_bound)
    args._text = tables.to_text()
    checks = [_check(f"table {k}", None, t) for k, t in tables.tables.items()]
    checks.append(_check("anomalies", not tables.anomalies, tables.anomalies))
    return "tables", checks


def cmd_fetch(args) -> tuple[str, list[dict]]:
    from .lmfdb import fetch_metadata
    recs = fetch_metadata(args.level_bound, base_url=args.base_url, cache_dir=args.cache_dir)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"metadata_le{args.level_bound}.jsonl"
    with open(path, "w", encoding="utf-8") as fh:
        for r in recs:
            fh.write(json.dumps(r.to_json(), sort_keys=True) + "\n")
    return "fetch", [_check("fetch", True, {"records": len(recs), "path": str(path)})]


def cmd_predict(args) -> tuple[str, list[dict]]:
    from .rep_engine import predicted_field
    try:
        F = predicted_field(args.type, args.d, args.branch)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    N = F.normalized()
    args._text = f"{N.describe()}  (conductor {N.conductor}, degree {N.degree})\n"
    return "predict", [_check("predict", True, {"type": args.type.upper(), "d": args.d, "branch": args.branch,
                                                 "field": N.describe(), "conductor": N.conductor,
                                                 "degree": N.degree, "subfield": N.to_json()})]


# -- wiring -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--no-timestamp", action="store_true", help="omit the timestamp from JSON reports")
    common.add_argument("-o", "--output", help="write the report here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="exotic-hecke", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=("lemma-bl", "densities", "theorems", "squarefree-orders"))
    v.add_argument("--max-twist", type=int, default=60)
    v.add_argument("--max-d", type=int, default=60, help="largest d for the Q-set density table")
    v.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    v.add_argument("--serial", action="store_true", help="run in one process")
    v.add_argument("--skip-elementwise", action="store_true", help="skip the elementwise field check")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("classify", parents=[common], help="classify exact-trace newform fixtures")
    c.add_argument("fixture", nargs="?", default=str(DATA_DIR / "newforms.jsonl"))
    c.add_argument("--n-min", type=int, default=20)
    c.add_argument("--n-split", type=int, default=500)
    c.set_defaults(func=cmd_classify)

    t = sub.add_parser("tables", parents=[common], help="census tables from metadata")
    t.add_argument("metadata")
    t.add_argument("--level-bound", type=int, default=4000)
    t.set_defaults(func=cmd_tables)

    f = sub.add_parser("fetch", parents=[common], help="download metadata from the LMFDB API")
    f.add_argument("--level-bound", type=int, required=True)
    f.add_argument("--out", required=True)
    f.add_argument("--base-url", default=None, help="defaults to $EXOTIC_HECKE_LMFDB_URL or the public API")
    f.add_argument("--cache-dir", default=None)
    f.set_defaults(func=cmd_fetch)

    r = sub.add_parser("predict", parents=[common], help="predicted Hecke field")
    r.add_argument("--type", required=True, type=str.upper, choices=("A4", "S4", "A5"))
    r.add_argument("--d", required=True, type=int)
    r.add_argument("--branch", choices=("sgn_equal", "sgn_distinct"))
    r.set_defaults(func=cmd_predict)
    return p


def render_text(report: dict) -> str:
    lines = [f"# {report['suite']}"]
    for ch in report["checks"]:
        lines.append(f"{ch['status'].upper():5} {ch['name']}")
    n_fail = sum(ch["status"] == "fail" for ch in report["checks"])
    lines.append(f"{len(report['checks'])} checks, {n_fail} failed")
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    from .lmfdb import NetworkError, SchemaDriftError
    from .newform_classify import MalformedRecord
    args._text = None
    try:
        suite, checks = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, NetworkError, SchemaDriftError, MalformedRecord) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    report = {"suite": suite, "checks": checks}
    if not args.no_timestamp:
        report["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    if args.format == "json":
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    else:
        text = (args._text or "") + render_text(report)
    try:
        if args.output:
            Path(args.output).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_FAIL if any(ch["status"] == "fail" for ch in checks) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
