"""Extremising test functions and certificates that the constant ``A`` is best.

For a radius ``R`` and slack ``1/n`` the witness is the indicator of the
set where ``1/v`` exceeds ``S(R) - 1/n`` inside the ball (direct problems)
or outside it (conjugate problems). Its inequality ratio is at least
``mass(R)^(1/q) * (S(R) - 1/n)``, which tends to ``Phi(R)`` as ``n`` grows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .core import (
    DEFAULT_SLACK,
    Direction,
    HardyProblem,
    RadialTestFunction,
    SupSearchConfig,
    VerificationRow,
    ball_mass_u,
    compute_A,
    tail_mass_U,
    verify_inequality,
)
from .errors import DomainError, HardyError, ResolutionError
from .quadrature import QuadConfig
from .values import ExtendedValue, State, jsonable
from .weights import Monotonicity, RadialWeight, WeightFamily, sup_inv_on_ball, sup_inv_on_exterior

DEFAULT_SHARPNESS_TOL = 1e-2
DEFAULT_NS = (10, 100, 1000, 10000)
MONOTONE_TOL = 1e-6


@dataclass(frozen=True)
class WitnessSpec:
    """Resolved near-supremum set ``(lo, hi]`` for one ``(R, n)`` pair."""

    R: float
    n: int
    resolved_set: tuple[float, float]
    sup_inverse: float
    threshold: float
    components: int = 1
    measure_deficit: float = 0.0
    capped: bool = False

    def to_dict(self) -> dict:
        return jsonable(self.__dict__)


@dataclass
class Certificate:
    spec: WitnessSpec
    ratio_achieved: float
    A_computed: ExtendedValue
    gap: float
    analytic_floor: float
    tolerance_used: float
    row: VerificationRow

    @property
    def floor_ok(self) -> bool:
        return self.ratio_achieved >= self.analytic_floor * (1.0 - self.tolerance_used)

    @property
    def upper_ok(self) -> bool:
        if not self.A_computed.is_finite:
            return True
        return self.ratio_achieved <= self.A_computed.value * (1.0 + self.tolerance_used)

    def to_dict(self) -> dict:
        return jsonable({
            "spec": self.spec.to_dict(),
            "ratio_achieved": self.ratio_achieved,
            "A": self.A_computed.to_dict(),
            "gap": self.gap,
            "analytic_floor": self.analytic_floor,
            "tolerance_used": self.tolerance_used,
            "floor_ok": self.floor_ok,
            "upper_ok": self.upper_ok,
        })


@dataclass
class SharpnessStudy:
    A: ExtendedValue
    certificates: list = field(default_factory=list)
    refused: bool = False
    error: str | None = None
    sharpness_tol: float = DEFAULT_SHARPNESS_TOL

    @property
    def best_ratio(self) -> float:
        return max((c.ratio_achieved for c in self.certificates), default=math.nan)

    @property
    def relative_gap(self) -> float:
        if not self.A.is_finite or not self.certificates:
            return math.nan
        return (self.A.value - self.best_ratio) / self.A.value

    @property
    def passed(self) -> bool:
        if self.refused or self.error or not self.certificates:
            return False
        ok = all(c.floor_ok and c.upper_ok for c in self.certificates)
        return ok and self.best_ratio >= (1.0 - self.sharpness_tol) * self.A.value

    def monotone_in_n(self) -> dict:
        """Per radius: are the ratios nondecreasing along increasing ``n``?"""
        by_R: dict = {}
        for c in self.certificates:
            by_R.setdefault(c.spec.R, []).append((c.spec.n, c.ratio_achieved))
        out = {}
        for R, rows in by_R.items():
            ratios = [r for _, r in sorted(rows)]
            out[R] = all(b >= a * (1.0 - MONOTONE_TOL) for a, b in zip(ratios, ratios[1:]))
        return out

    def to_dict(self) -> dict:
        return jsonable({
            "A": self.A.to_dict(),
            "refused": self.refused,
            "error": self.error,
            "best_ratio": self.best_ratio,
            "relative_gap": self.relative_gap,
            "passed": self.passed,
            "monotone_in_n": {repr(k): v for k, v in self.monotone_in_n().items()},
            "certificates": [c.to_dict() for c in self.certificates],
        })


# -- near-supremum sets -----------------------------------------------------------


def _asinh_exp(y: float) -> float:
    if y <= 0:
        return math.asinh(math.exp(y))
    return y + math.log1p(math.sqrt(1.0 + math.exp(-2.0 * y)))


def _closed_form_crossing(w: RadialWeight, log_t: float) -> float:
    """Radius where ``log(1/w) = log_t`` for a closed-form family."""
    y = -log_t / w.exponent  # value of log r, log sinh r or log sinh(s r) there
    if w.family is WeightFamily.POWER:
        return math.exp(y)
    if w.family is WeightFamily.SINH_POWER:
        return _asinh_exp(y)
    return _asinh_exp(y) / w.scale


def _inverse_increasing(w: RadialWeight) -> bool | None:
    if w.monotonicity is Monotonicity.NON_INCREASING:
        return True
    if w.monotonicity is Monotonicity.NON_DECREASING:
        return False
    return None


def _table_components(w: RadialWeight, lo: float, hi: float, log_t: float):
    """Components of ``{log(1/w) > log_t}`` inside ``(lo, hi]`` for a tabulated ``w``."""
    pts = [lo] + [k for k in w.knots if lo < k < hi] + [hi]
    h = lambda r: -float(w.log_value(r)) - log_t
    vals = [h(p) for p in pts]
    comps, start = [], (lo if vals[0] > 0 else None)
    for (a, b), (ha, hb) in zip(zip(pts[:-1], pts[1:]), zip(vals[:-1], vals[1:])):
        if (ha > 0) != (hb > 0):
            x = brentq(h, a, b, xtol=1e-14 * max(1.0, b), rtol=4 * np.finfo(float).eps)
            if ha > 0:
                comps.append((start, x))
                start = None
            else:
                start = x
    if start is not None:
        comps.append((start, hi))
    return comps


def witness_spec(prob: HardyProblem, R: float, n: int) -> WitnessSpec:
    if not R > 0:
        raise DomainError("R must be positive")
    if int(n) != n or n < 1:
        raise DomainError("n must be a positive integer")
    n = int(n)
    w = prob.v
    direct = prob.direction is Direction.DIRECT
    S = sup_inv_on_ball(w, R) if direct else sup_inv_on_exterior(w, R)
    if not S.is_finite:
        raise DomainError(
            "the supremum of 1/v is infinite at this radius; no witness exists "
            "(A is divergent and is certified by the growth of Phi instead)"
        )
    s_val = S.value
    t = s_val - 1.0 / n
    if direct:
        lo_all, hi_all = 0.0, R
        if w.family is WeightFamily.TABULATED:
            lo_all = max(lo_all, w.support[0]) if w.outside == "error" else lo_all
    else:
        lo_all, hi_all = R, math.inf
        if w.family is WeightFamily.TABULATED:
            hi_all = w.support[1]

    components = 1
    deficit = 0.0
    if t <= 0:
        lo, hi = lo_all, hi_all
    else:
        log_t = math.log(t)
        incr = _inverse_increasing(w)
        if w.is_closed_form and w.exponent == 0.0:
            lo, hi = lo_all, hi_all
        elif w.is_closed_form:
            x = _closed_form_crossing(w, log_t)
            if incr:
                lo, hi = max(lo_all, x), hi_all
            else:
                lo, hi = lo_all, min(hi_all, x)
        else:
            if w.outside == "zero" and direct and R > w.support[1]:
                raise DomainError("1/v is infinite outside its table; no witness exists")
            a = max(lo_all, w.support[0]) if w.outside == "error" else lo_all
            comps = _table_components(w, max(a, w.support[0]), min(hi_all, w.support[1]), log_t)
            if not comps:
                raise ResolutionError(
                    f"near-supremum set is empty at working precision for n={n}; use a smaller n"
                )
            sizes = [b - a for a, b in comps]
            k = int(np.argmax(sizes))
            lo, hi = comps[k]
            components = len(comps)
            deficit = float(sum(sizes) - sizes[k])
    capped = False
    if math.isinf(hi):
        hi = 2.0 * max(R, lo)
        capped = True
    if not (hi > lo and hi - lo > 4.0 * math.ulp(hi)):
        raise ResolutionError(
            f"near-supremum set ({lo!r}, {hi!r}] is not resolved in double precision "
            f"for n={n}; use a smaller n"
        )
    return WitnessSpec(R, n, (float(lo), float(hi)), s_val, t, components, deficit, capped)


def witness_function(prob: HardyProblem, R: float, n: int) -> RadialTestFunction:
    """Indicator of the near-supremum set of ``1/v`` at radius ``R`` with slack ``1/n``."""
    lo, hi = witness_spec(prob, R, n).resolved_set
    return RadialTestFunction.indicator(lo, hi)


def _mass_root(prob: HardyProblem, R: float, cfg: QuadConfig) -> float:
    m = tail_mass_U(prob, R, cfg) if prob.direction is Direction.DIRECT else ball_mass_u(prob, R, cfg)
    if not m.is_finite:
        return math.inf
    return math.exp(m.log_value / prob.q)


def lower_bound_certificate(
    prob: HardyProblem,
    R: float,
    n: int,
    cfg: QuadConfig | None = None,
    A: ExtendedValue | None = None,
    slack: float = DEFAULT_SLACK,
) -> Certificate:
    cfg = cfg or QuadConfig()
    if A is None:
        A = compute_A(prob, cfg).A
    spec = witness_spec(prob, R, n)
    f = RadialTestFunction.indicator(*spec.resolved_set)
    row = verify_inequality(prob, f, cfg, A=A, slack=slack)
    ratio = row.ratio if row.ratio is not None else math.nan
    floor = _mass_root(prob, R, cfg) * max(spec.threshold, 0.0)
    gap = A.value - ratio if A.is_finite else math.inf
    return Certificate(spec, ratio, A, gap, floor, slack, row)


def default_schedule(R_star: float | None, ns=DEFAULT_NS) -> list:
    if R_star is None or not (0 < R_star < math.inf):
        R_star = 1.0
    return [(R, n) for R in (R_star / 10.0, R_star, R_star * 10.0) for n in ns]


def sharpness_study(
    prob: HardyProblem,
    schedule=None,
    cfg: QuadConfig | None = None,
    search: SupSearchConfig | None = None,
    sharpness_tol: float = DEFAULT_SHARPNESS_TOL,
    slack: float = DEFAULT_SLACK,
) -> SharpnessStudy:
    """Certificates over a schedule of ``(R, n)``; defaults around the computed argmax."""
    cfg = cfg or QuadConfig()
    res = compute_A(prob, cfg, search)
    A = res.A
    study = SharpnessStudy(A, sharpness_tol=sharpness_tol)
    if A.state is not State.FINITE:
        study.refused = True
        study.error = f"A is {A.state.value}; see its evidence"
        return study
    if schedule is None:
        schedule = default_schedule(res.argmax)
    schedule = list(schedule)
    if not schedule:
        raise DomainError("schedule must not be empty")
    for R, n in schedule:
        try:
            study.certificates.append(lower_bound_certificate(prob, R, n, cfg, A, slack))
        except HardyError as exc:
            study.error = f"(R={R!r}, n={n!r}): {exc}"
            break
    return study
