"""Command-line interface.

    uavshare eval SCENARIO --target p1 --estimator both
    uavshare sweep SCENARIO --param uav_deployment.altitude --start 50 --stop 500 --step 50 --out h.csv
    uavshare optimize SCENARIO --floor 0.615 --out tc.csv
    uavshare validate SCENARIO --heights 50 100 200 400 --n 200000 --out check.csv

Exit status: 0 success, 1 analytic/Monte Carlo disagreement (``validate``),
2 configuration or I/O error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass

from . import config
from .analytic import IntegrationError, p1_coverage, p2_coverage
from .capacity import optimize_height, transmission_capacity
from .config import ConfigError, ScenarioFile
from .montecarlo import estimate_coverage

EXIT_OK = 0
EXIT_DISAGREE = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

SWEEP_HEADER = [
    "param", "p1_analytic", "p1_mc", "p1_mc_stderr",
    "p2_analytic", "p2_mc", "p2_mc_stderr", "tc", "feasible",
]
VALIDATE_HEADER = [
    "h", "p1_analytic", "p1_mc", "p1_mc_stderr", "p1_agree",
    "p2_analytic", "p2_mc", "p2_mc_stderr", "p2_agree",
]


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    return repr(float(x))


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ConfigError(f"cannot write {path}: {exc}") from exc


@dataclass
class Estimates:
    p1: object = None
    p2: object = None
    p1_mc: object = None
    p2_mc: object = None


def evaluate(doc: ScenarioFile, estimator: str, need_p1=True, need_p2=True) -> Estimates:
    scenario = doc.to_scenario()
    out = Estimates()
    if estimator in ("analytic", "both"):
        if need_p1:
            out.p1 = p1_coverage(scenario)
        if need_p2:
            out.p2 = p2_coverage(scenario)
    if estimator in ("mc", "both"):
        out.p1_mc, out.p2_mc = estimate_coverage(scenario, doc.to_mc())
    return out


def run_scenario(doc: ScenarioFile, target: str, estimator: str) -> list[list[str]]:
    """Rows ``[target, method, value, stderr, n]`` for one scenario."""
    need_p1 = target in ("p1", "all")
    need_p2 = target in ("p2", "tc", "all")
    est = evaluate(doc, estimator, need_p1, need_p2)
    rows = []
    if need_p1:
        rows += _est_rows("p1", est.p1, est.p1_mc)
    if target in ("p2", "all"):
        rows += _est_rows("p2", est.p2, est.p2_mc)
    if target in ("tc", "all"):
        scenario = doc.to_scenario()
        log_base = doc.search.log_base
        for e in (est.p2, est.p2_mc):
            if e is not None:
                tc = transmission_capacity(scenario, log_base, p2=e.value)
                rows.append(["tc", e.method, fmt(tc), "", fmt(e.n) if e.n else ""])
    return rows


def _est_rows(name, analytic, mc):
    rows = []
    for e in (analytic, mc):
        if e is not None:
            rows.append([name, e.method, fmt(e.value), fmt(e.stderr) if e.n else "",
                         str(e.n) if e.n else ""])
    return rows


def sweep_documents(doc: ScenarioFile, param: str, values, density_mode: str):
    for v in values:
        if param == "uav_deployment.vertical_range":
            yield v, config.with_vertical_range(doc, v, density_mode)
        else:
            yield v, config.with_param(doc, param, v)


def run_sweep(doc: ScenarioFile, param: str, values, estimator: str = "analytic",
              density_mode: str = "volumetric", log=None) -> str:
    """CSV text with one row per parameter value; failed rows carry ``nan``."""
    log = sys.stderr if log is None else log
    floor = doc.search.coverage_floor
    rows = []
    for v, d in sweep_documents(doc, param, values, density_mode):
        try:
            est = evaluate(d, estimator)
            p2_for_tc = est.p2 if est.p2 is not None else est.p2_mc
            p1_for_floor = est.p1 if est.p1 is not None else est.p1_mc
            tc = transmission_capacity(d.to_scenario(), d.search.log_base, p2=p2_for_tc.value)
            rows.append([
                fmt(v),
                fmt(est.p1.value) if est.p1 else "",
                fmt(est.p1_mc.value) if est.p1_mc else "",
                fmt(est.p1_mc.stderr) if est.p1_mc else "",
                fmt(est.p2.value) if est.p2 else "",
                fmt(est.p2_mc.value) if est.p2_mc else "",
                fmt(est.p2_mc.stderr) if est.p2_mc else "",
                fmt(tc),
                fmt(p1_for_floor.value >= floor),
            ])
        except IntegrationError as exc:
            print(f"warning: {param}={v}: {exc}", file=log)
            rows.append([fmt(v)] + ["nan"] * (len(SWEEP_HEADER) - 1))
    return _csv_text(SWEEP_HEADER, rows)


def run_validate(doc: ScenarioFile, heights, slack: float = 0.005, k: float = 3.0):
    """Paired analytic/Monte Carlo estimates per altitude; returns (csv_text, all_agree)."""
    rows = []
    ok = True
    for h in heights:
        d = config.with_param(doc, _altitude_path(doc), h)
        est = evaluate(d, "both")
        a1 = est.p1_mc.agrees_with(est.p1, slack, k)
        a2 = est.p2_mc.agrees_with(est.p2, slack, k)
        ok = ok and a1 and a2
        rows.append([fmt(h), fmt(est.p1.value), fmt(est.p1_mc.value), fmt(est.p1_mc.stderr), fmt(a1),
                     fmt(est.p2.value), fmt(est.p2_mc.value), fmt(est.p2_mc.stderr), fmt(a2)])
    return _csv_text(VALIDATE_HEADER, rows), ok


def _altitude_path(doc: ScenarioFile) -> str:
    if doc.uav_deployment.variant == "uav3d":
        return "uav_deployment.altitude_min"
    return "uav_deployment.altitude"


def optimize_csv(result) -> str:
    rows = [[fmt(r.h), fmt(r.p1), fmt(r.p2), fmt(r.tc), fmt(r.feasible)] for r in result.records]
    return _csv_text(["h", "p1", "p2", "tc", "feasible"], rows)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("scenario", nargs="?", default=None,
                        help="YAML/JSON scenario file (omit or '-' for all defaults)")
    common.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                        help="override a scenario field, e.g. uav_deployment.density=0")
    common.add_argument("--seed", type=int, help="Monte Carlo master seed")
    common.add_argument("--n", type=int, help="Monte Carlo realizations")
    common.add_argument("--rmax", type=float, help="Monte Carlo truncation radius in metres")
    common.add_argument("--workers", type=int, help="Monte Carlo worker processes")
    common.add_argument("--out", default=None, help="output CSV path (default stdout)")

    ap = argparse.ArgumentParser(prog="uavshare", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate one scenario")
    p.add_argument("--target", choices=["p1", "p2", "tc", "all"], default="all")
    p.add_argument("--estimator", choices=["analytic", "mc", "both"], default="analytic")

    p = sub.add_parser("sweep", parents=[common], help="sweep one parameter")
    p.add_argument("--param", required=True, help="dotted path, e.g. uav_deployment.altitude")
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--estimator", choices=["analytic", "mc", "both"], default="analytic")
    p.add_argument("--density-mode", choices=["volumetric", "projected"], default="volumetric",
                   help="what to hold fixed when sweeping uav_deployment.vertical_range")

    p = sub.add_parser("optimize", parents=[common], help="constrained altitude search")
    p.add_argument("--floor", type=float, help="coverage floor for the ground user")
    p.add_argument("--h-start", type=float)
    p.add_argument("--h-stop", type=float)
    p.add_argument("--h-step", type=float)
    p.add_argument("--log-base", choices=["natural", "base2"])

    p = sub.add_parser("validate", parents=[common], help="analytic vs Monte Carlo agreement")
    p.add_argument("--heights", type=float, nargs="+", default=[50.0, 100.0, 200.0, 400.0])
    p.add_argument("--slack", type=float, default=0.005,
                   help="absolute slack added to 3 standard errors")
    return ap


def _flag_overrides(args) -> list[str]:
    pairs = [
        ("montecarlo.master_seed", args.seed),
        ("montecarlo.n_realizations", args.n),
        ("montecarlo.truncation_radius", args.rmax),
        ("montecarlo.workers", args.workers),
    ]
    if args.command == "optimize":
        pairs += [
            ("search.coverage_floor", args.floor),
            ("search.h_start", args.h_start),
            ("search.h_stop", args.h_stop),
            ("search.h_step", args.h_step),
            ("search.log_base", args.log_base),
        ]
    return [f"{k}={v}" for k, v in pairs if v is not None]


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = config.load(args.scenario, list(args.overrides) + _flag_overrides(args))
        if args.command == "eval":
            rows = run_scenario(doc, args.target, args.estimator)
            for row in rows:
                target, method, value, stderr, n = row
                extra = f"  stderr={stderr}  n={n}" if stderr else ""
                print(f"{target:3s} {method:12s} {value}{extra}")
            if args.out:
                _write(args.out, _csv_text(["target", "method", "value", "stderr", "n"], rows))
        elif args.command == "sweep":
            values = config.linear_grid(args.start, args.stop, args.step)
            _write(args.out, run_sweep(doc, args.param, values, args.estimator, args.density_mode))
        elif args.command == "optimize":
            if doc.search.h_grid is not None and any(
                    v is not None for v in (args.h_start, args.h_stop, args.h_step)):
                doc = config.with_param(doc, "search.h_grid", None)
            result = optimize_height(doc.to_scenario(), doc.to_search())
            _write(args.out, optimize_csv(result))
            out = sys.stderr if args.out in (None, "-") else sys.stdout
            if result.best_feasible is None:
                print("no feasible altitude", file=out)
            else:
                b = result.best_feasible
                print(f"best altitude {fmt(b.h)} m: tc={fmt(b.tc)} p1={fmt(b.p1)} p2={fmt(b.p2)}",
                      file=out)
            for lo, hi in result.vacant_intervals:
                print(f"vacant interval [{fmt(lo)}, {fmt(hi)}] m", file=out)
        elif args.command == "validate":
            text, ok = run_validate(doc, args.heights, args.slack)
            _write(args.out, text)
            print("agreement: " + ("all within tolerance" if ok else "DISAGREEMENT"),
                  file=sys.stderr)
            if not ok:
                return EXIT_DISAGREE
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IntegrationError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
