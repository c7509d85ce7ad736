"""Scan of the (alpha, beta) plane: closed-form verdict against the numerical constant."""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .corollaries import PowerWeightParams, classify, power_weight_problem
from .core import SupSearchConfig, compute_A
from .quadrature import QuadConfig
from .values import State, jsonable

CSV_COLUMNS = (
    "alpha", "beta", "q", "n_or_Q", "geometry",
    "closed_form_finite", "numeric_finite", "boundary", "A_value",
)


@dataclass(frozen=True)
class RegionSpec:
    geometry: str = "hyperbolic"
    alpha_range: tuple[float, float] = (-2.0, 2.0)
    alpha_points: int = 21
    beta_range: tuple[float, float] = (0.0, 3.0)
    beta_points: int = 21
    dims: tuple[float, ...] = (2, 3)
    qs: tuple[float, ...] = (1.0, 2.0)
    curvature: float = 0.0
    sphere_measure: float | None = None
    band: float = 0.05

    def points(self) -> list[tuple]:
        """Grid points in output order: dimension, q, alpha, beta."""
        al = np.linspace(*self.alpha_range, self.alpha_points)
        be = np.linspace(*self.beta_range, self.beta_points)
        # round away linspace noise so that e.g. alpha = 0 is exactly zero
        al = np.round(al, 12) + 0.0
        be = np.round(be, 12) + 0.0
        return [
            (float(n), float(q), float(a), float(b))
            for n in self.dims for q in self.qs for a in al for b in be
        ]


@dataclass(frozen=True)
class RegionRow:
    alpha: float
    beta: float
    q: float
    n_or_Q: float
    geometry: str
    closed_form_finite: bool
    numeric_state: State
    boundary: bool
    A_value: float

    @property
    def agrees(self) -> bool:
        if self.numeric_state is State.INCONCLUSIVE:
            return False
        return self.closed_form_finite == (self.numeric_state is State.FINITE)

    def csv_fields(self) -> list[str]:
        numeric = {State.FINITE: "true", State.DIVERGENT: "false", State.INCONCLUSIVE: "inconclusive"}
        return [
            _fmt(self.alpha), _fmt(self.beta), _fmt(self.q), _fmt(self.n_or_Q), self.geometry,
            str(self.closed_form_finite).lower(), numeric[self.numeric_state],
            str(self.boundary).lower(), _fmt(self.A_value),
        ]

    def to_dict(self) -> dict:
        return jsonable(dict(zip(CSV_COLUMNS, self.csv_fields())))


def _fmt(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf"
    return format(x, ".12g")


@dataclass
class RegionReport:
    spec: RegionSpec
    rows: list = field(default_factory=list)

    @property
    def disagreements(self) -> list:
        return [r for r in self.rows if not r.boundary and not r.agrees]

    @property
    def compared(self) -> int:
        return sum(1 for r in self.rows if not r.boundary)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow(r.csv_fields())
        return buf.getvalue()

    def summary(self) -> dict:
        return jsonable({
            "points": len(self.rows),
            "compared": self.compared,
            "boundary": len(self.rows) - self.compared,
            "agreement": (self.compared - len(self.disagreements)) / self.compared if self.compared else 1.0,
            "disagreements": [r.to_dict() for r in self.disagreements],
        })


def _evaluate(task) -> RegionRow:
    spec, cfg, search, (n, q, a, b) = task
    params = PowerWeightParams(a, b, q, n, spec.curvature)
    verdict = classify(params, spec.geometry, spec.sphere_measure, spec.band)
    res = compute_A(power_weight_problem(params, spec.geometry, spec.sphere_measure), cfg, search).A
    if res.is_finite:
        value = res.value if res.log_value < 709.0 else math.inf
    else:
        value = math.inf if res.state is State.DIVERGENT else math.nan
    return RegionRow(a, b, q, n, spec.geometry, verdict.finite, res.state, verdict.boundary, value)


def region_scan(
    spec: RegionSpec,
    cfg: QuadConfig | None = None,
    search: SupSearchConfig | None = None,
    workers: int | None = None,
) -> RegionReport:
    """Classify every grid point both ways; row order is fixed by the grid."""
    cfg = cfg or QuadConfig()
    search = search or SupSearchConfig()
    tasks = [(spec, cfg, search, pt) for pt in spec.points()]
    if workers is None or workers <= 0:
        workers = os.cpu_count() or 1
    if workers == 1 or len(tasks) < 2:
        rows = [_evaluate(t) for t in tasks]
    else:
        chunk = max(1, len(tasks) // (8 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_evaluate, tasks, chunksize=chunk))
    return RegionReport(spec, rows)
