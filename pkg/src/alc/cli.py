"""Command-line front end: ``alc <group> <command> [options]``.

Exit codes: 0 success, 1 a reproduced value disagrees with the reference
data, 2 usage error.  JSON output has sorted keys and rationals as "p/q".
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import expected
from .classical import classical_report
from .engine import BOTH, CORRELATED, PRODUCT, default_jobs, fmt_q, search_perfect
from .quantum import quantum_report, seesaw
from .selfcheck import run_all
from .spekkens import spekkens_report
from .squarebit import (
    D8_LABELS,
    MODEL_NAMES,
    _normalize_name,
    compute_table3,
    compute_table4,
    compute_table5,
    table3_invalid_cells,
)

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return fmt_q(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def dump_json(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n"


def _cell(v) -> str:
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else fmt_q(v)
    return str(v)


# --- tables ---------------------------------------------------------------


def _compare(grid, reference) -> tuple[int, list[dict]]:
    total, diffs = 0, []
    for j, (row, ref_row) in enumerate(zip(grid, reference)):
        for i, (v, r) in enumerate(zip(row, ref_row)):
            total += 1
            if v != r:
                diffs.append({"row": j, "col": i, "computed": v, "reference": r})
    return total, diffs


def table3_result(check: bool, errata: bool) -> tuple[dict, bool]:
    grid = compute_table3()
    invalid = table3_invalid_cells(grid)
    out = {
        "table": "III",
        "rows": "states 0..23",
        "cols": "effects 0..23",
        "grid": grid,
        "invalid_cells": [{"state": j, "effect": i, "value": v} for j, i, v in invalid],
    }
    ok = True
    if check:
        reference = expected.corrected(expected.TABLE3, expected.TABLE3_ERRATA) if errata else expected.TABLE3
        total, diffs = _compare(grid, reference)
        flagged = {(j, i) for j, i, _ in invalid}
        values_ok = all(v in (Fraction(-1, 2), Fraction(3, 2)) for _, _, v in invalid)
        shaded_ok = flagged == set(expected.TABLE3_SHADED) and values_ok
        out["check"] = {
            "reference": "errata-corrected" if errata else "verbatim",
            "errata_applied": len(expected.TABLE3_ERRATA) if errata else 0,
            "matched": total - len(diffs),
            "total": total,
            "mismatches": diffs,
            "invalid_flagged": len(flagged),
            "invalid_match_shaded": shaded_ok,
        }
        ok = not diffs and shaded_ok
    return out, ok


def table4_result(check: bool, errata: bool) -> tuple[dict, bool]:
    grid = compute_table4()
    out = {"table": "IV", "rows": "states 0..15", "cols": "effects 0..15", "grid": grid}
    ok = True
    if check:
        reference = expected.corrected(expected.TABLE4, expected.TABLE4_ERRATA) if errata else expected.TABLE4
        total, diffs = _compare(grid, reference)
        out["check"] = {
            "reference": "errata-corrected" if errata else "verbatim",
            "errata_applied": len(expected.TABLE4_ERRATA) if errata else 0,
            "matched": total - len(diffs),
            "total": total,
            "mismatches": diffs,
        }
        ok = not diffs
    return out, ok


def table5_result(check: bool, errata: bool) -> tuple[dict, bool]:
    grid = compute_table5()
    out = {"table": "V", "rows": "Bob op " + " ".join(D8_LABELS), "cols": "Alice op " + " ".join(D8_LABELS),
           "grid": grid}
    ok = True
    if check:
        total, diffs = _compare(grid, expected.TABLE5)
        # same sign on both sides keeps Omega16 inside {16..19}
        sign_ok = all(
            (grid[b][a] in range(16, 20)) == ((a < 4) == (b < 4)) for a in range(8) for b in range(8)
        )
        out["check"] = {"matched": total - len(diffs), "total": total, "mismatches": diffs,
                        "sign_rule_holds": sign_ok}
        ok = not diffs and sign_ok
    return out, ok


_TABLES = {"table3": table3_result, "table4": table4_result, "table5": table5_result}


def render_table(result: dict, fmt: str) -> str:
    grid = result["grid"]
    if fmt == "json":
        return dump_json(result)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["state"] + list(range(len(grid[0]))))
        for j, row in enumerate(grid):
            w.writerow([j] + [_cell(v) for v in row])
        return buf.getvalue()
    width = max(len(_cell(v)) for row in grid for v in row) + 1
    lines = [f"Table {result['table']}  rows: {result['rows']}  cols: {result['cols']}"]
    lines.append("    " + "".join(f"{i:>{width}}" for i in range(len(grid[0]))))
    for j, row in enumerate(grid):
        lines.append(f"{j:>3} " + "".join(f"{_cell(v):>{width}}" for v in row))
    if "check" in result:
        c = result["check"]
        lines.append(f"check: {c['matched']}/{c['total']} entries match"
                     + (f" ({c['reference']})" if "reference" in c else ""))
        if "invalid_flagged" in c:
            lines.append(f"invalid entries flagged: {c['invalid_flagged']}"
                         f" (match shaded cells: {c['invalid_match_shaded']})")
        if "sign_rule_holds" in c:
            lines.append(f"sign rule holds: {c['sign_rule_holds']}")
    return "\n".join(lines) + "\n"


# --- commands -------------------------------------------------------------


def _write(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_classical(args) -> int:
    rep = classical_report()
    if args.format == "json":
        _write(args, dump_json(rep))
    else:
        lines = [
            f"classical optimum: {rep['optimum']} (expected {rep['expected_optimum']})",
            f"maximizers: {rep['maximizers']}",
            f"reference strategy among maximizers: {rep['reference_is_maximizer']}",
            f"perfect strategy exists: {rep['perfect_exists']}",
        ]
        for row in rep["table1"]:
            lines.append(f"Table I row {row['row']}: p_avg {row['p_avg']} (expected {row['expected']})")
        _write(args, "\n".join(lines) + "\n")
    return EXIT_OK if rep["match"] else EXIT_MISMATCH


def cmd_quantum_verify(args) -> int:
    rep = quantum_report(run_seesaw=False)
    ok = rep["bell_success_is_one"] and rep["overlaps_are_binary"] and abs(rep["classical_embedding"] - 13 / 16) <= 1e-12
    if args.format == "json":
        _write(args, dump_json(rep))
    else:
        lines = [f"Bell protocol overall success: {rep['bell_protocol']['overall']:.15f}"]
        lines += [f"  ({k[0]},{k[1]}): {v:.15f}" for k, v in rep["bell_protocol"]["per_pair"].items()]
        lines.append(f"Bell overlaps are 0/1: {rep['overlaps_are_binary']}")
        lines.append(f"classical embedding success: {rep['classical_embedding']:.15f}")
        _write(args, "\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_quantum_seesaw(args) -> int:
    res = seesaw(args.seed, args.restarts, args.iterations, args.jobs)
    d = res.to_dict()
    if args.format == "json":
        _write(args, dump_json(d))
    else:
        _write(args, "\n".join(f"{k}: {v}" for k, v in sorted(d.items())) + "\n")
    return EXIT_OK if res.monotone and res.valid_decoders else EXIT_MISMATCH


def cmd_table(args) -> int:
    result, ok = _TABLES[args.command](args.check, args.errata)
    _write(args, render_table(result, args.format))
    if args.check and args.format == "csv":
        c = result["check"]
        print(f"check: {c['matched']}/{c['total']} entries match", file=sys.stderr)
    return EXIT_OK if ok else EXIT_MISMATCH


def _search_pretty(rep: dict) -> str:
    lines = [
        f"model: {rep['model']}  n_strings: {rep['n_strings']}  families: {rep['families']}",
        f"strategies examined: {rep['strategies_examined']}",
        f"pruned by collision: {rep['collisions_pruned']}",
        f"LP checks: {rep['lp_checks']} ({rep['distinct_lp_systems']} distinct systems)",
    ]
    if rep["perfect"] is None:
        lines.append("perfect: none")
    else:
        lines.append("perfect: found")
        lines.append("  strategy: " + json.dumps(rep["perfect"]["strategy"], sort_keys=True))
        lines.append("  decoder: " + json.dumps(rep["perfect"]["decoder"], sort_keys=True))
    if rep["best_value"] is not None:
        lines.append(f"best decoder value: {rep['best_value']} ({rep['best_value_scope']})")
    if "audit" in rep:
        a = rep["audit"]
        lines.append(f"audit: {a['pruned_samples_checked']} pruned samples, "
                     f"{len(a['pruned_sample_failures'])} failures; "
                     f"{a['lp_systems_verified']} LP certificates, {a['lp_certificate_failures']} failures")
    if "wall_time" in rep:
        lines.append(f"wall time: {rep['wall_time']}s")
    return "\n".join(lines) + "\n"


def cmd_search(args) -> int:
    report = search_perfect(
        args.model, args.n_strings, args.families, jobs=args.jobs,
        audit_rate=args.audit, seed=args.seed, best_scope=args.best_scope,
        include_certificates=args.certificates,
    )
    d = report.to_dict(include_timing=args.timing)
    _write(args, dump_json(d) if args.format == "json" else _search_pretty(d))
    if report.audit and (report.audit["pruned_sample_failures"] or report.audit["lp_certificate_failures"]):
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_spekkens(args) -> int:
    rep = spekkens_report()
    if args.format == "json":
        _write(args, dump_json(rep))
    else:
        lines = ["composition table (Alice k, Bob k'):"]
        lines += [f"  U{k[0]} o U{k[1]}[psi0] = {v}" for k, v in rep["composition_table"].items()]
        lines.append(f"success with M: {rep['success_M']}")
        lines.append(f"success with M': {rep['success_M_prime']}")
        lines.append(f"mismatches: {len(rep['composition_mismatches'])}")
        _write(args, "\n".join(lines) + "\n")
    return EXIT_OK if rep["match"] else EXIT_MISMATCH


# no-go claims checked by the report: model -> (families, best scope)
REPORT_SEARCHES = [
    ("hs", PRODUCT, "all"),
    ("pr", BOTH, "survivors"),
    ("hybrid-a", BOTH, "survivors"),
    ("hybrid-b", BOTH, "survivors"),
] + [(f"frozen-{n}", BOTH, "survivors") for n in range(16, 24)]


def build_report(seed: int = 0, jobs: int = 1, searches: bool = True, errata: bool = False) -> tuple[dict, bool]:
    checks: dict[str, bool] = {}
    rep: dict = {}

    rep["classical"] = classical_report()
    checks["classical"] = rep["classical"]["match"]

    q = quantum_report(seed=seed, jobs=jobs)
    rep["quantum"] = q
    checks["quantum_bell"] = q["bell_success_is_one"] and q["overlaps_are_binary"]

    for name, fn in _TABLES.items():
        verbatim, ok_v = fn(True, False)
        fixed, ok_e = fn(True, True) if name != "table5" else (verbatim, ok_v)
        rep[name] = {"verbatim": verbatim["check"], "errata_corrected": fixed["check"]}
        if "invalid_cells" in verbatim:
            rep[name]["invalid_cells"] = verbatim["invalid_cells"]
        checks[name] = ok_e if errata else ok_v

    rep["spekkens"] = spekkens_report()
    checks["spekkens"] = rep["spekkens"]["match"]

    if searches:
        found = {}
        for model, fam, scope in REPORT_SEARCHES:
            r = search_perfect(model, 4, fam, jobs=jobs, seed=seed, best_scope=scope).to_dict()
            found[model] = r
        for model in ("classical-bit", "hs"):
            r = search_perfect(model, 2, PRODUCT, jobs=1, seed=seed, best_scope="none").to_dict()
            found[f"{model}/n=2"] = r
        rep["searches"] = found
        checks["no_go"] = all(found[m]["perfect"] is None for m, _, _ in REPORT_SEARCHES)
        checks["one_bit_positive"] = all(found[f"{m}/n=2"]["perfect"] is not None for m in ("classical-bit", "hs"))

    rep["properties"] = run_all(seed, jobs)
    checks["properties"] = rep["properties"]["passed"]
    rep["checks"] = checks
    ok = all(checks.values())
    rep["all_passed"] = ok
    return rep, ok


def cmd_report(args) -> int:
    rep, ok = build_report(args.seed, args.jobs, searches=not args.skip_search, errata=args.errata)
    if args.format == "json":
        _write(args, dump_json(rep))
    else:
        lines = [f"{k}: {'PASS' if v else 'FAIL'}" for k, v in rep["checks"].items()]
        t3 = rep["table3"]["verbatim"]
        lines.append(f"table3 verbatim: {t3['matched']}/{t3['total']}; "
                     f"errata-corrected: {rep['table3']['errata_corrected']['matched']}/{t3['total']}")
        _write(args, "\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_MISMATCH


# --- parser ---------------------------------------------------------------


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _rate(text: str) -> float:
    v = float(text)
    if not 0 <= v <= 1:
        raise argparse.ArgumentTypeError("must lie in [0, 1]")
    return v


def _model(text: str) -> str:
    try:
        return _normalize_name(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    def common(fmt_choices, fmt_default):
        p = argparse.ArgumentParser(add_help=False)
        p.add_argument("--format", choices=fmt_choices, default=fmt_default)
        p.add_argument("--output", "-o", metavar="PATH", help="write to PATH instead of stdout")
        return p

    jobs_default = default_jobs()
    parser = argparse.ArgumentParser(prog="alc", description="Reproduce the ALC game results.")
    parser.add_argument("-v", "--verbose", action="store_true")
    groups = parser.add_subparsers(dest="group", required=True)

    cl = groups.add_parser("classical").add_subparsers(dest="command", required=True)
    cl.add_parser("search", parents=[common(["json", "pretty"], "json")])

    qu = groups.add_parser("quantum").add_subparsers(dest="command", required=True)
    qu.add_parser("verify", parents=[common(["json", "pretty"], "json")])
    ss = qu.add_parser("seesaw", parents=[common(["json", "pretty"], "json")])
    ss.add_argument("--seed", type=int, default=0)
    ss.add_argument("--restarts", type=_positive, default=50)
    ss.add_argument("--iterations", type=int, default=100)
    ss.add_argument("--jobs", type=_positive, default=jobs_default)

    sq = groups.add_parser("squarebit").add_subparsers(dest="command", required=True)
    for name in _TABLES:
        t = sq.add_parser(name, parents=[common(["json", "csv", "pretty"], "csv")])
        t.add_argument("--check", action="store_true", help="compare against the reference table")
        t.add_argument("--errata", action="store_true", help="compare against the errata-corrected table")
    se = sq.add_parser("search", parents=[common(["json", "pretty"], "pretty")])
    se.add_argument("--model", type=_model, required=True, help=", ".join(MODEL_NAMES))
    se.add_argument("--n-strings", type=int, choices=[2, 4], default=4)
    se.add_argument("--families", choices=[PRODUCT, CORRELATED, BOTH], default=BOTH)
    se.add_argument("--jobs", type=_positive, default=jobs_default)
    se.add_argument("--audit", type=_rate, default=0.0, metavar="RATE",
                    help="fraction of pruned strategies to re-verify")
    se.add_argument("--seed", type=int, default=0)
    se.add_argument("--best-scope", choices=["survivors", "all", "none"], default="survivors")
    se.add_argument("--certificates", action="store_true", help="include Farkas vectors")
    se.add_argument("--timing", action="store_true", help="include wall time (breaks byte-identity)")

    sp = groups.add_parser("spekkens").add_subparsers(dest="command", required=True)
    sp.add_parser("verify", parents=[common(["json", "pretty"], "json")])

    pa = groups.add_parser("paper").add_subparsers(dest="command", required=True)
    rp = pa.add_parser("report", parents=[common(["json", "pretty"], "json")])
    rp.add_argument("--seed", type=int, default=0)
    rp.add_argument("--jobs", type=_positive, default=jobs_default)
    rp.add_argument("--skip-search", action="store_true")
    rp.add_argument("--errata", action="store_true", help="judge tables against the errata-corrected data")
    return parser


_DISPATCH = {
    ("classical", "search"): cmd_classical,
    ("quantum", "verify"): cmd_quantum_verify,
    ("quantum", "seesaw"): cmd_quantum_seesaw,
    ("squarebit", "table3"): cmd_table,
    ("squarebit", "table4"): cmd_table,
    ("squarebit", "table5"): cmd_table,
    ("squarebit", "search"): cmd_search,
    ("spekkens", "verify"): cmd_spekkens,
    ("paper", "report"): cmd_report,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return _DISPATCH[(args.group, args.command)](args)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
