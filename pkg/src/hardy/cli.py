"""``hardy`` command-line front end.

Exit codes: 0 success, 2 configuration error, 3 an inconclusive result is
present, 4 a property violation was detected.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .config import (
    build_function,
    build_problem,
    build_quad,
    build_quasi_norm,
    build_region,
    build_search,
    random_step_function,
    resolve_config,
)
from .core import compute_A, compute_A_p, verify_inequality
from .corollaries import PowerWeightParams, classify
from .errors import ConfigError, DomainError, HardyError, InconclusiveError
from .geometry import sphere_measure_mc
from .region import region_scan
from .sharpness import default_schedule, sharpness_study
from .values import State, jsonable

EXIT_OK, EXIT_CONFIG, EXIT_INCONCLUSIVE, EXIT_VIOLATION = 0, 2, 3, 4
SUBCOMMANDS = ("constant", "verify", "sharpness", "region", "corollary", "sphere-measure")


class Outcome:
    def __init__(self):
        self.results: dict = {}
        self.warnings: list[str] = []
        self.inconclusive = False
        self.violation = False
        self.csv: str | None = None

    def note_state(self, value, what: str):
        if value.state is State.INCONCLUSIVE:
            self.inconclusive = True
            self.warnings.append(f"{what} is inconclusive")

    @property
    def code(self) -> int:
        if self.violation:
            return EXIT_VIOLATION
        if self.inconclusive:
            return EXIT_INCONCLUSIVE
        return EXIT_OK


def _profile_csv(res) -> str:
    lines = ["R,log_phi"]
    lines += [f"{r:.12g},{lp:.15g}" for r, lp in zip(res.grid, res.log_phi)]
    return "\n".join(lines) + "\n"


def run_constant(cfg, base, out: Outcome):
    notes: dict = {}
    prob = build_problem(cfg, base, notes)
    quad, search = build_quad(cfg), build_search(cfg)
    res = compute_A_p(prob, quad, search) if prob.p is not None else compute_A(prob, quad, search)
    out.results = {"problem": prob.describe(), **notes, "constant": res.to_dict()}
    out.warnings += res.warnings
    if not res.factors_monotone:
        out.violation = True
        out.warnings.append("a factor of Phi is not monotone on the grid")
    out.note_state(res.A, "A")
    out.csv = _profile_csv(res)


def run_verify(cfg, base, out: Outcome):
    notes: dict = {}
    prob = build_problem(cfg, base, notes)
    quad, search = build_quad(cfg), build_search(cfg)
    sec = cfg["verify"]
    funcs = [build_function(f) for f in sec.get("functions") or []]
    rng = np.random.default_rng(cfg["seed"])
    funcs += [random_step_function(rng, int(sec.get("step_pieces", 3))) for _ in range(int(sec.get("random_steps", 0)))]
    if not funcs:
        raise ConfigError("[verify] lists no functions and generates none")
    res = compute_A(prob, quad, search)
    out.warnings += res.warnings
    out.note_state(res.A, "A")
    rows = [verify_inequality(prob, f, quad, A=res.A, slack=float(sec.get("slack", 1e-4))) for f in funcs]
    for i, r in enumerate(rows):
        if not r.passed:
            if r.note == "quadrature inconclusive":
                out.inconclusive = True
                out.warnings.append(f"function {i}: quadrature inconclusive")
            else:
                out.violation = True
                out.warnings.append(f"function {i}: ratio exceeds A beyond slack")
    out.results = {"problem": prob.describe(), **notes, "A": res.A.to_dict(), "rows": [r.to_dict() for r in rows]}


def run_sharpness(cfg, base, out: Outcome):
    notes: dict = {}
    prob = build_problem(cfg, base, notes)
    quad, search = build_quad(cfg), build_search(cfg)
    sec = cfg["sharpness"]
    schedule = sec.get("schedule")
    if schedule is None:
        schedule_arg = None
        res = compute_A(prob, quad, search)
        if res.A.is_finite:
            schedule_arg = default_schedule(res.argmax, tuple(int(n) for n in sec["ns"]))
    else:
        try:
            schedule_arg = [(float(R), int(n)) for R, n in schedule]
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"[sharpness] schedule must be a list of [R, n] pairs: {exc}") from exc
    study = sharpness_study(prob, schedule_arg, quad, search, float(sec["tolerance"]), float(sec["slack"]))
    out.results = {"problem": prob.describe(), **notes, "study": study.to_dict()}
    out.note_state(study.A, "A")
    if study.refused:
        out.warnings.append(f"sharpness study refused: {study.error}")
    elif not study.passed:
        out.violation = True
        out.warnings.append("sharpness study failed: " + (study.error or "ratio or floor check"))


def run_region(cfg, base, out: Outcome):
    spec, workers = build_region(cfg)
    report = region_scan(spec, build_quad(cfg), build_search(cfg), workers)
    out.results = {"region": report.summary()}
    out.csv = report.to_csv()
    if report.disagreements:
        out.violation = True
        out.warnings.append(f"{len(report.disagreements)} grid points disagree with the closed form")


def run_corollary(cfg, base, out: Outcome):
    sec = cfg.get("corollary")
    if not isinstance(sec, dict):
        raise ConfigError("config is missing the [corollary] block")
    kind = sec.get("geometry", "group")
    try:
        params = PowerWeightParams(
            float(sec["alpha"]), float(sec["beta"]), float(sec.get("q", 1.0)),
            float(sec["dimension"]), float(sec.get("curvature", 0.0)),
        )
        verdict = classify(params, kind, sec.get("sphere_measure"), float(sec.get("band", 1e-9)))
    except KeyError as exc:
        raise ConfigError(f"[corollary] needs {exc.args[0]}") from exc
    except (DomainError, ValueError, TypeError) as exc:
        raise ConfigError(f"invalid [corollary] block: {exc}") from exc
    out.results = {"corollary": {"geometry": kind, "params": params.__dict__, "classification": verdict.to_dict()}}


def run_sphere_measure(cfg, base, out: Outcome):
    sec = cfg.get("sphere_measure")
    if not isinstance(sec, dict):
        raise ConfigError("config is missing the [sphere_measure] block")
    qn = build_quasi_norm(sec)
    try:
        est = sphere_measure_mc(
            qn, sec.get("Q"), sec.get("box"), int(float(sec.get("samples", 1_000_000))),
            cfg["seed"], int(float(sec.get("chunk", 1_000_000))),
        )
    except DomainError as exc:
        raise ConfigError(f"invalid [sphere_measure] block: {exc}") from exc
    out.results = {"sphere_measure": est.to_dict()}


RUNNERS = {
    "constant": run_constant,
    "verify": run_verify,
    "sharpness": run_sharpness,
    "region": run_region,
    "corollary": run_corollary,
    "sphere-measure": run_sphere_measure,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hardy", description="Two-weight L^1 Hardy inequality toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="YAML config file")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config entry, e.g. problem.q=2")
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        p.add_argument("--csv", help="write the CSV (region grid or Phi profile) here")
        p.add_argument("--seed", type=int, help="override the seed")
    return parser


def make_report(cfg: dict, out: Outcome, elapsed_ms: float) -> dict:
    return {
        "version": __version__,
        "config": jsonable(cfg),
        "results": jsonable(out.results),
        "warnings": list(out.warnings),
        "timing_ms": round(elapsed_ms, 3),
    }


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    out = Outcome()
    try:
        cfg = resolve_config(args.config, args.set, seed=args.seed)
        base = Path(args.config).resolve().parent if args.config else None
        RUNNERS[args.command](cfg, base, out)
    except ConfigError as exc:
        print(f"hardy: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InconclusiveError as exc:
        print(f"hardy: inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except HardyError as exc:
        print(f"hardy: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    report = make_report(cfg, out, (time.perf_counter() - start) * 1e3)
    text = json.dumps(report, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.csv and out.csv is not None:
        Path(args.csv).write_text(out.csv)
    for w in out.warnings:
        print(f"hardy: warning: {w}", file=sys.stderr)
    return out.code


if __name__ == "__main__":
    sys.exit(main())
