#!/usr/bin/env python3
"""
nnrank.py

Command-line front end for the exact nonnegative-rank certificate: verifies
the certificate end to end, dumps the constants, classifies factor zero
patterns, explores supporting polygons, replays the type-4 refutation and runs
the numeric NMF experiment.

Every run prints one JSON report on stdout and a short summary on stderr.
Exit status: 0 all checks passed, 2 a check failed, 1 error.

Usage
-----

    python nnrank.py verify [--mutate Weps:1,2:1/1000000] [--constraints table.csv] [--report out.json]
    python nnrank.py constants dump [--json] [--out-dir DIR] [--xlsx constants.xlsx]
    python nnrank.py classify --matrix L.mat
    python nnrank.py geometry --plane xy --start 2-1s
    python nnrank.py geometry --plane xz --sweep 0 1 65
    python nnrank.py propagate [--constraints table.csv] [--mode script|fixpoint] [--table trace.xlsx]
    python nnrank.py nmf --dim 5 [--restarts 32] [--seed 0] [--compare-w] [--config job.yaml]
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import pandas as pd

try:
    import yaml  # optional
except Exception:
    yaml = None

from boundprop import DEFAULT_SCRIPT, replay_type4_proof, run_fixpoint
from exactnum import format_entry, parse_entry, to_json
from linalg import read_matrix, to_float, write_matrix
from nestedgeom import (PLANES, THRESHOLD, Point2, exclude_types_2_3, inner_triangle, lemma41_threshold_check,
                        lemma42_threshold_check, perturbed_q2_witness, plane_polygon, supporting_polygon,
                        sweep_thresholds, verify_type1_uniqueness)
from numnmf import SolveConfig, align_to_reference, decimate, nmf_solve
from paperdata import (CheckResult, ConstraintTable, PaperConstants, dump_constants, exact_constraints,
                       figure4_constraints, mutate, paper_constants, verify_certificate)
from typeclass import classify, feasible_profiles

SCHEMA_VERSION = 1
LOG_LEVELS = ["debug", "info", "warning", "error", "critical"]
CONFIG_SECTIONS = {"nmf"}
R_POINTS = {f"r{k}" for k in range(1, 7)}

log = logging.getLogger("nnrank")


def configure_logging(level: str) -> None:
    lvl = getattr(logging, level.upper(), logging.INFO)
    logging.basicConfig(format="%(asctime)s %(name)s %(levelname)s: %(message)s", level=lvl)


def default_seed() -> int:
    raw = os.environ.get("NNRANK_SEED")
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        sys.exit(f"ERROR: NNRANK_SEED must be an integer, got {raw!r}")


# ────────────────────────── config

def load_config(path: Path) -> Dict[str, Any]:
    if not path.is_file():
        sys.exit(f"ERROR: config file not found: {path}")
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() in (".yaml", ".yml"):
        if yaml is None:
            sys.exit("ERROR: pyyaml is not installed; cannot load YAML config.")
        cfg = yaml.safe_load(text)
    else:
        cfg = json.loads(text)
    if not isinstance(cfg, dict):
        raise SystemExit("Config root must be an object/dict.")
    unknown = sorted(set(cfg) - CONFIG_SECTIONS)
    if unknown:
        raise SystemExit(f"Unknown config section(s): {', '.join(unknown)}")
    if "nmf" in cfg and not isinstance(cfg["nmf"], dict):
        raise SystemExit("Config section 'nmf' must be an object/dict.")
    return cfg


def override_config(cfg: Dict[str, Any], args: argparse.Namespace) -> Dict[str, Any]:
    nmf = dict(cfg.get("nmf") or {})
    if args.dim is not None: nmf["inner_dim"] = args.dim
    if args.restarts is not None: nmf["restarts"] = args.restarts
    if args.max_iters is not None: nmf["max_iters"] = args.max_iters
    if args.tol is not None: nmf["tol"] = args.tol
    if args.seed is not None: nmf["seed"] = args.seed
    nmf.setdefault("seed", default_seed())
    cfg["nmf"] = nmf
    return cfg


# ────────────────────────── report

def new_report(command: str) -> Dict[str, Any]:
    return {"schema_version": SCHEMA_VERSION, "command": command, "status": "pass",
            "checks": [], "timing_ms": 0.0}


def guarded(check_id: str, description: str, fn: Callable[[], Optional[str]]) -> Dict[str, Any]:
    """Run one check; a returned string or a ValueError is the defect."""
    try:
        defect = fn()
    except (ValueError, ArithmeticError) as exc:
        defect = f"{type(exc).__name__}: {exc}"
    return CheckResult(check_id, description, defect is None, defect).to_dict()


def finish(report: Dict[str, Any], started: float, report_path: Optional[Path] = None) -> int:
    if report["status"] != "error":
        report["status"] = "pass" if all(c["status"] == "pass" for c in report["checks"]) else "fail"
    report["timing_ms"] = round((time.perf_counter() - started) * 1000, 3)
    json.dump(report, sys.stdout, indent=2)
    print()
    if report_path:
        with report_path.open("w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2)
    print_summary(report)
    return {"pass": 0, "fail": 2}.get(report["status"], 1)


def print_summary(report: Dict[str, Any]) -> None:
    cnt = {"PASS": 0, "FAIL": 0}
    for c in report["checks"]:
        cnt["PASS" if c["status"] == "pass" else "FAIL"] += 1
    title = f"{report['command'].capitalize()} Summary"
    err = sys.stderr
    print(f"\n{title}\n{'=' * len(title)}", file=err)
    print(f"PASS : {cnt['PASS']}", file=err)
    print(f"FAIL : {cnt['FAIL']}", file=err)
    for c in report["checks"]:
        if c["status"] != "pass":
            print(f"  {c['id']}: {c['defect']}", file=err)
    if report.get("error"):
        print(f"ERROR: {report['error']}", file=err)
    print(f"STATUS : {report['status']}", file=err)
    print("=" * len(title) + "\n", file=err)


def read_constraints(path: Optional[Path]) -> ConstraintTable:
    if path is None:
        return figure4_constraints()
    if not path.is_file():
        sys.exit(f"ERROR: constraint table not found: {path}")
    try:
        if path.suffix.lower() in (".xls", ".xlsx"):
            return ConstraintTable.from_frame(pd.read_excel(path, dtype=str).fillna(""))
        return ConstraintTable.read_csv(path)
    except ValueError as exc:
        sys.exit(f"ERROR loading constraint table: {exc}")


# ────────────────────────── verify

def _threshold_defect(check) -> Optional[str]:
    if not check.identity_holds:
        return f"elimination {format_entry(check.elimination.inequality)} != closed form {format_entry(check.closed_form)}"
    if not check.consistent:
        return f"verdict {check.verdict} disagrees with inequality {format_entry(check.elimination.inequality)}"
    return None


def geometry_checks() -> List[Dict[str, Any]]:
    def lemma(fn, u, want: str) -> Callable[[], Optional[str]]:
        def run() -> Optional[str]:
            chk = fn(u)
            return _threshold_defect(chk) or (None if chk.verdict == want else
                                              f"expected {want}, got {chk.support.vertex_count} vertices")
        return run

    def exclusion() -> Optional[str]:
        rep = exclude_types_2_3()
        bad = [i.name for i in rep.instances if i.feasible or not (i.certificate and i.certificate.verify())]
        return f"not excluded: {', '.join(bad)}" if bad else None

    def uniqueness() -> Optional[str]:
        rep = verify_type1_uniqueness()
        if not all(rep.triangles_match.values()):
            return f"supporting triangles differ from q*: {rep.triangles_match}"
        if rep.missing_witnesses:
            return f"{len(rep.missing_witnesses)} sampled triangles without witness, first {rep.missing_witnesses[0]}"
        w = perturbed_q2_witness()
        return None if w is not None and w.point in R_POINTS else "perturbed q2 keeps every r point inside"

    return [
        guarded("lemma41_threshold", "xy face: u = 2-sqrt2 gives the triangle q1* q3* q2*",
                lemma(lemma41_threshold_check, THRESHOLD, "three_vertices")),
        guarded("lemma41_small_u", "xy face: u = 1/8 needs more than three vertices",
                lemma(lemma41_threshold_check, Fraction(1, 8), "more_than_three")),
        guarded("lemma42_threshold", "xz face: u = 2-sqrt2 gives the triangle q1* q5* q4*",
                lemma(lemma42_threshold_check, THRESHOLD, "three_vertices")),
        guarded("lemma42_large_u", "xz face: u = 7/8 needs more than three vertices",
                lemma(lemma42_threshold_check, Fraction(7, 8), "more_than_three")),
        guarded("types_2_3", "no triangle on (0,0), (1,0) covers the required inner points", exclusion),
        guarded("type1_unique", "the type-1 triangles are unique", uniqueness),
    ]


def typeclass_checks(pc: PaperConstants) -> List[Dict[str, Any]]:
    def w_type() -> Optional[str]:
        prof = classify(pc.W)
        return None if prof.type_tag == 1 else f"W has profile {prof.profile}"

    def profiles() -> Optional[str]:
        got = feasible_profiles(4)
        return None if got == {(2, 1, 1)} else f"inner dimension 4 admits {sorted(got)}"

    return [
        guarded("w_type1", "W has the type-1 zero pattern", w_type),
        guarded("dim4_profiles", "inner dimension 4 only admits type 2 or 3", profiles),
    ]


def replay_check(check_id: str, description: str, table: ConstraintTable) -> Dict[str, Any]:
    def run() -> Optional[str]:
        out = replay_type4_proof(table)
        if out.refuted:
            return None
        return out.error or f"replay ended {out.status}"
    return guarded(check_id, description, run)


def cmd_verify(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    report = new_report("verify")
    pc = paper_constants()
    for spec in args.mutate or []:
        try:
            pc = mutate(pc, spec)
        except (ValueError, KeyError, IndexError) as exc:
            sys.exit(f"ERROR: bad --mutate {spec!r}: {exc}")
    table = read_constraints(args.constraints)

    cert = verify_certificate(pc, table)
    report["checks"] += [c.to_dict() for c in cert.checks]
    report["checks"] += geometry_checks()
    report["checks"] += typeclass_checks(pc)
    report["checks"].append(replay_check("type4_table", "type-4 refutation under the constraint table", table))

    try:
        report["checks"].append(replay_check("type4_weps", "type-4 refutation under the entries of W_eps",
                                             exact_constraints(pc.Weps)))
    except ValueError as exc:
        report["checks"].append(CheckResult("type4_weps", "type-4 refutation under the entries of W_eps",
                                            False, str(exc)).to_dict())
    return finish(report, started, args.report)


# ────────────────────────── constants

def matrix_json(A) -> Dict[str, Any]:
    return {"rows": A.rows, "cols": A.cols,
            "entries": [[to_json(A[i, j]) for j in range(A.cols)] for i in range(A.rows)]}


def cmd_constants(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    pc = paper_constants()
    mats = pc.matrices()
    if args.out_dir:
        args.out_dir.mkdir(parents=True, exist_ok=True)
        for name, A in mats.items():
            write_matrix(A, args.out_dir / f"{name}.mat")
        log.info(f"wrote {len(mats)} matrices to {args.out_dir}")
    if args.xlsx:
        with pd.ExcelWriter(args.xlsx, engine="openpyxl") as writer:
            for name, A in mats.items():
                pd.DataFrame([[format_entry(x) for x in A.row(i)] for i in range(A.rows)]).to_excel(
                    writer, sheet_name=name, index=False, header=False)
        log.info(f"wrote workbook {args.xlsx}")
    if args.json:
        report = new_report("constants")
        report["result"] = {name: matrix_json(A) for name, A in mats.items()}
        return finish(report, started)
    sys.stdout.write(dump_constants(pc))
    return 0


# ────────────────────────── classify

def cmd_classify(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    report = new_report("classify")
    if not args.matrix.is_file():
        sys.exit(f"ERROR: matrix file not found: {args.matrix}")
    try:
        prof = classify(read_matrix(args.matrix))
    except ValueError as exc:
        report["status"], report["error"] = "error", str(exc)
        return finish(report, started)
    report["result"] = prof.to_dict()
    return finish(report, started)


# ────────────────────────── geometry

def cmd_geometry(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    report = new_report("geometry")
    inner, outer = inner_triangle(args.plane), plane_polygon(args.plane)
    try:
        if args.sweep:
            a, b, n = parse_entry(args.sweep[0]), parse_entry(args.sweep[1]), int(args.sweep[2])
            report["result"] = {"plane": args.plane, "samples": [
                {"u": to_json(u), **res.to_json()} for u, res in sweep_thresholds(args.plane, a, b, n)]}
        else:
            u = parse_entry(args.start)
            if 0 <= u <= 1:
                fn = lemma41_threshold_check if args.plane == "xy" else lemma42_threshold_check
                chk = fn(u)
                report["result"] = chk.to_json()
                report["checks"].append(CheckResult(
                    "lemma", "elimination agrees with the closed form and the supporting polygon",
                    chk.identity_holds and chk.consistent, _threshold_defect(chk)).to_dict())
            else:
                res = supporting_polygon(inner, outer, Point2(u, Fraction(0)))
                report["result"] = {"plane": args.plane, "u": to_json(u), "support": res.to_json()}
    except ValueError as exc:
        report["status"], report["error"] = "error", f"{type(exc).__name__}: {exc}"
    return finish(report, started)


# ────────────────────────── propagate

def write_trace_table(trace: List[Dict[str, Any]], path: Path) -> None:
    rows = [{"step": e["step"], "branch": e["branch"], "rule": e["rule"], "cell": e["cell"],
             "lo_before": e["before"]["lo"], "up_before": e["before"]["up"],
             "lo_after": e["after"]["lo"], "up_after": e["after"]["up"], "claim": e["claim"] or ""}
            for e in trace]
    df = pd.DataFrame(rows, columns=["step", "branch", "rule", "cell", "lo_before", "up_before",
                                     "lo_after", "up_after", "claim"])
    if path.suffix.lower() in (".xls", ".xlsx"):
        with pd.ExcelWriter(path, engine="openpyxl") as writer:
            df.to_excel(writer, sheet_name="trace", index=False)
    else:
        df.to_csv(path, index=False)


def cmd_propagate(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    report = new_report("propagate")
    table = read_constraints(args.constraints)
    if args.mode == "script":
        if not args.script.is_file():
            sys.exit(f"ERROR: proof script not found: {args.script}")
        try:
            outcome = replay_type4_proof(table, args.script).to_dict()
        except (ValueError, SyntaxError) as exc:
            sys.exit(f"ERROR in proof script {args.script}: {exc}")
    else:
        outcome = run_fixpoint(table).to_dict()
    report["result"] = outcome
    report["checks"].append(CheckResult(
        "contradiction", f"{args.mode} mode closes every branch", outcome["status"] == "contradiction",
        None if outcome["status"] == "contradiction" else outcome.get("error") or f"status {outcome['status']}",
    ).to_dict())
    if args.table:
        write_trace_table(outcome["trace"], args.table)
    return finish(report, started)


# ────────────────────────── nmf

def cmd_nmf(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    report = new_report("nmf")
    cfg = load_config(args.config) if args.config else {}
    cfg = override_config(cfg, args)
    if "inner_dim" not in cfg["nmf"]:
        sys.exit("ERROR: --dim is required (or nmf.inner_dim in --config)")
    try:
        solve_cfg = SolveConfig.from_mapping(cfg["nmf"])
    except (ValueError, TypeError) as exc:
        raise SystemExit(f"Invalid nmf settings: {exc}")
    pc = paper_constants()
    if args.matrix:
        if not args.matrix.is_file():
            sys.exit(f"ERROR: matrix file not found: {args.matrix}")
        V = to_float(read_matrix(args.matrix))
    else:
        V = to_float(pc.M)
    try:
        res = nmf_solve(V, solve_cfg)
    except ValueError as exc:
        report["status"], report["error"] = "error", f"{type(exc).__name__}: {exc}"
        return finish(report, started)
    result: Dict[str, Any] = {
        "inner_dim": solve_cfg.inner_dim, "seed": solve_cfg.seed, "restarts": solve_cfg.restarts,
        "best_residual": res.residual, "best_restart": res.restart,
        "iterations": len(res.history) - 1, "restart_residuals": res.restart_residuals,
        "history": decimate(res.history),
    }
    if args.compare_w:
        try:
            al = align_to_reference(res.W, to_float(pc.W))
            result["alignment"] = {"permutation": [p + 1 for p in al.permutation],
                                   "scalings": al.scalings, "max_abs_deviation": al.max_abs_deviation}
        except ValueError as exc:
            result["alignment"] = {"error": str(exc)}
    report["result"] = result
    return finish(report, started)


# ────────────────────────── CLI

def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    p = argparse.ArgumentParser(description="Exact checks for the nonnegative-rank certificate.")
    p.add_argument("--log-level", default="info", choices=LOG_LEVELS)
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run every exact check")
    v.add_argument("--mutate", action="append", metavar="NAME:i,j:delta",
                   help="shift one constant entry before checking (repeatable)")
    v.add_argument("--constraints", type=Path, help="constraint table (CSV or XLSX)")
    v.add_argument("--report", type=Path, help="also write the JSON report to this path")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("constants", help="dump the constants")
    c.add_argument("action", choices=["dump"])
    c.add_argument("--json", action="store_true", help="JSON report instead of matrix text")
    c.add_argument("--out-dir", type=Path, help="write one .mat file per matrix")
    c.add_argument("--xlsx", type=Path, help="write one sheet per matrix")
    c.set_defaults(func=cmd_constants)

    k = sub.add_parser("classify", help="zero-pattern type of a 6-row factor")
    k.add_argument("--matrix", type=Path, required=True)
    k.set_defaults(func=cmd_classify)

    g = sub.add_parser("geometry", help="supporting polygons on a face of P")
    g.add_argument("--plane", choices=list(PLANES), required=True)
    where = g.add_mutually_exclusive_group(required=True)
    where.add_argument("--start", help="start (u, 0) on the bottom edge, u in the entry grammar")
    where.add_argument("--sweep", nargs=3, metavar=("A", "B", "N"), help="N starts from A to B")
    g.set_defaults(func=cmd_geometry)

    pr = sub.add_parser("propagate", help="type-4 bound propagation")
    pr.add_argument("--constraints", type=Path, help="constraint table (CSV or XLSX)")
    pr.add_argument("--mode", choices=["script", "fixpoint"], default="script")
    pr.add_argument("--script", type=Path, default=DEFAULT_SCRIPT)
    pr.add_argument("--table", type=Path, help="write the trace as CSV or XLSX")
    pr.set_defaults(func=cmd_propagate)

    n = sub.add_parser("nmf", help="numeric NMF with restarts")
    n.add_argument("--matrix", type=Path, help="matrix file (default: M)")
    n.add_argument("--dim", type=int)
    n.add_argument("--restarts", type=int)
    n.add_argument("--seed", type=int, help="default: NNRANK_SEED or 0")
    n.add_argument("--max-iters", type=int)
    n.add_argument("--tol", type=float)
    n.add_argument("--compare-w", action="store_true", help="align the best left factor with W")
    n.add_argument("--config", type=Path, help="JSON or YAML job config with an 'nmf' section")
    n.set_defaults(func=cmd_nmf)
    return p.parse_args(argv)


def main(argv: Optional[List[str]] = None) -> int:
    args = parse_args(argv)
    configure_logging(args.log_level)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
