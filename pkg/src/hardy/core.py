"""Characterisation constants and both sides of the L^1 Hardy inequality.

For radial weights ``u, v`` on a space with radial density ``Lambda`` the
direct inequality

    ( int (int_{B(|x|)} |f|)^q u dx )^(1/q)  <=  C int |f| v dx

holds iff ``A = sup_R U(R)^(1/q) S(R)`` is finite, where ``U(R)`` is the
u-mass outside the ball of radius ``R`` and ``S(R)`` the supremum of
``1/v`` on it; then ``C = A`` is sharp. The conjugate inequality swaps
ball and exterior. For ``1 < p <= q`` the constant is
``sup_R U(R)^(1/q) V(R)^(1/p')`` with ``V`` the ball mass of
``v**(1-p')``.

All quantities are evaluated through ``log`` so that hyperbolic problems
at radii up to 1e12 stay representable.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DivergenceError, DomainError, InconclusiveError, InconsistencyError
from .geometry import PolarGeometry
from .quadrature import (
    QuadConfig,
    integrate_half_line,
    integrate_interval,
    integrate_tail,
    log_lower_table,
    log_upper_table,
)
from .values import ExtendedValue, State, jsonable
from .weights import RadialWeight, log_sup_inv_on_ball, log_sup_inv_on_exterior, _golden_max

DEFAULT_SLACK = 1e-4


class Direction(str, enum.Enum):
    DIRECT = "direct"
    CONJUGATE = "conjugate"


@dataclass(frozen=True)
class HardyProblem:
    geometry: PolarGeometry
    u: RadialWeight
    v: RadialWeight
    q: float
    p: float | None = None
    direction: Direction = Direction.DIRECT

    def __post_init__(self):
        object.__setattr__(self, "direction", Direction(self.direction))
        if not self.q >= 1:
            raise DomainError(f"q must be >= 1, got {self.q!r}")
        if self.p is not None and not 1 < self.p <= self.q:
            raise DomainError(f"need 1 < p <= q, got p={self.p!r}, q={self.q!r}")

    @property
    def p_conjugate(self) -> float:
        if self.p is None:
            raise DomainError("problem has no exponent p")
        return self.p / (self.p - 1.0)

    def log_u_mass_density(self, r):
        return self.u.log_value(r) + self.geometry.log_density(r)

    def log_v_mass_density(self, r):
        return self.v.log_value(r) + self.geometry.log_density(r)

    @property
    def weight_knots(self) -> tuple[float, ...]:
        return tuple(sorted(set(self.u.knots) | set(self.v.knots)))

    def describe(self) -> dict:
        d = {
            "geometry": self.geometry.describe(),
            "u": self.u.describe(),
            "v": self.v.describe(),
            "q": self.q,
            "direction": self.direction.value,
        }
        if self.p is not None:
            d["p"] = self.p
        return d


# -- radial test functions ------------------------------------------------------


class FunctionKind(str, enum.Enum):
    STEP = "step"
    CLOSED_FORM = "closed_form"
    INDICATOR = "indicator"


@dataclass(frozen=True)
class RadialTestFunction:
    """Nonnegative radial function ``f``.

    * ``INDICATOR``: ``coefficient`` on ``(a, b]``.
    * ``STEP``: level ``levels[j]`` on ``(t_j, t_{j+1}]`` for breakpoints
      ``t_0 < ... < t_m``, all scaled by ``coefficient``.
    * ``CLOSED_FORM``: ``coefficient * r**power * exp(-decay * r)`` on
      ``(a, b]`` where ``b`` may be infinite.
    """

    kind: FunctionKind
    breakpoints: tuple[float, ...]
    levels: tuple[float, ...] = ()
    coefficient: float = 1.0
    power: float = 0.0
    decay: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", FunctionKind(self.kind))
        bps = tuple(float(x) for x in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "levels", tuple(float(x) for x in self.levels))
        if not self.coefficient >= 0:
            raise DomainError("coefficient must be nonnegative (moduli are taken first)")
        if len(bps) < 2 or bps[0] < 0 or any(b <= a for a, b in zip(bps[:-1], bps[1:])):
            raise DomainError("breakpoints must be increasing and start at r >= 0")
        if self.kind is FunctionKind.STEP:
            if len(self.levels) != len(bps) - 1 or any(c < 0 for c in self.levels):
                raise DomainError("a step function needs one nonnegative level per piece")
        elif len(bps) != 2:
            raise DomainError(f"{self.kind.value} functions take a single support interval")
        if self.kind is not FunctionKind.CLOSED_FORM and math.isinf(bps[-1]):
            raise DomainError("step functions and indicators need bounded support")
        if self.kind is FunctionKind.CLOSED_FORM and self.decay < 0:
            raise DomainError("decay rate must be nonnegative")

    @classmethod
    def indicator(cls, a: float, b: float, coefficient: float = 1.0) -> "RadialTestFunction":
        return cls(FunctionKind.INDICATOR, (a, b), (), coefficient)

    @classmethod
    def step(cls, breakpoints: Sequence[float], levels: Sequence[float]) -> "RadialTestFunction":
        return cls(FunctionKind.STEP, tuple(breakpoints), tuple(levels))

    @classmethod
    def closed_form(
        cls, coefficient=1.0, power=0.0, decay=0.0, support=(0.0, math.inf)
    ) -> "RadialTestFunction":
        return cls(FunctionKind.CLOSED_FORM, tuple(support), (), coefficient, power, decay)

    @classmethod
    def zero(cls) -> "RadialTestFunction":
        return cls.indicator(0.0, 1.0, 0.0)

    @property
    def support(self) -> tuple[float, float]:
        return self.breakpoints[0], self.breakpoints[-1]

    @property
    def inner_breakpoints(self) -> tuple[float, ...]:
        return self.breakpoints[1:-1]

    @property
    def is_zero(self) -> bool:
        if self.coefficient == 0:
            return True
        return self.kind is FunctionKind.STEP and all(c == 0 for c in self.levels)

    def scaled(self, c: float) -> "RadialTestFunction":
        return RadialTestFunction(
            self.kind, self.breakpoints, self.levels, self.coefficient * c, self.power, self.decay
        )

    def log_value(self, r):
        r = np.asarray(r, dtype=float)
        lo, hi = self.support
        inside = (r > lo) & (r <= hi)
        with np.errstate(divide="ignore"):
            log_c = math.log(self.coefficient) if self.coefficient > 0 else -math.inf
            if self.kind is FunctionKind.INDICATOR:
                out = np.full(r.shape, log_c)
            elif self.kind is FunctionKind.STEP:
                idx = np.clip(np.searchsorted(self.breakpoints, r, side="left") - 1, 0, len(self.levels) - 1)
                out = log_c + np.log(np.asarray(self.levels))[idx]
            else:
                out = log_c + self.power * np.log(r) - self.decay * r
        out = np.where(inside, out, -np.inf)
        return out if out.ndim else float(out)

    def __call__(self, r):
        return np.exp(self.log_value(r))

    def describe(self) -> dict:
        d = {"kind": self.kind.value, "breakpoints": list(self.breakpoints)}
        if self.kind is FunctionKind.STEP:
            d["levels"] = list(self.levels)
        if self.coefficient != 1.0:
            d["coefficient"] = self.coefficient
        if self.kind is FunctionKind.CLOSED_FORM:
            d["power"], d["decay"] = self.power, self.decay
        return jsonable(d)


# -- integrals of radial functions ------------------------------------------------


def _integral(g_log, lo: float, hi: float, cfg: QuadConfig, bps=()) -> ExtendedValue:
    """``int_lo^hi g`` for any ``0 <= lo <= hi <= inf``; never raises on divergence."""
    if hi <= lo:
        return ExtendedValue.finite(-math.inf)
    bps = tuple(x for x in bps if lo < x < hi)
    try:
        if math.isinf(hi):
            if lo == 0:
                return integrate_half_line(g_log, cfg, bps)
            return integrate_tail(g_log, lo, cfg, bps)
        return integrate_interval(g_log, lo, hi, cfg, bps)
    except DivergenceError as exc:
        return ExtendedValue.divergent(exc.evidence)
    except InconclusiveError as exc:
        return ExtendedValue.inconclusive(exc.evidence)


def _log_product(*terms: float) -> float:
    """Sum of logs with the measure-theoretic convention ``0 * inf = 0``."""
    if any(t == -math.inf for t in terms):
        return -math.inf
    return float(sum(terms))


def tail_mass_U(prob: HardyProblem, R: float, cfg: QuadConfig | None = None) -> ExtendedValue:
    """u-mass of the exterior of the ball of radius ``R``."""
    cfg = cfg or QuadConfig()
    if not R > 0:
        raise DomainError("R must be positive")
    return integrate_tail(prob.log_u_mass_density, R, cfg, prob.u.knots)


def ball_mass_u(prob: HardyProblem, R: float, cfg: QuadConfig | None = None) -> ExtendedValue:
    """u-mass of the ball of radius ``R`` (the conjugate counterpart of ``U``)."""
    cfg = cfg or QuadConfig()
    if not R > 0:
        raise DomainError("R must be positive")
    return _integral(prob.log_u_mass_density, 0.0, R, cfg, prob.u.knots)


def _log_v_dual_density(prob: HardyProblem):
    pc = prob.p_conjugate

    def g(r):
        return (1.0 - pc) * prob.v.log_value(r) + prob.geometry.log_density(r)

    return g


def ball_mass_V(prob: HardyProblem, R: float, cfg: QuadConfig | None = None) -> ExtendedValue:
    """``int_{B(R)} v**(1-p')``; needs ``prob.p``."""
    cfg = cfg or QuadConfig()
    if prob.p is None:
        raise DomainError("ball_mass_V needs a problem with exponent p")
    if not R > 0:
        raise DomainError("R must be positive")
    return _integral(_log_v_dual_density(prob), 0.0, R, cfg, prob.v.knots)


# -- supremum search ----------------------------------------------------------------


@dataclass(frozen=True)
class SupSearchConfig:
    """Grid and refinement settings for ``sup_R Phi(R)``.

    The grid is log-spaced on ``[r_min, r_max]``; a boundary where ``Phi``
    still rises is pushed out by 1, 2, 4, ... decades up to the caps.
    ``flat_tol`` is the per-decade rise of ``log Phi`` below which a
    boundary counts as flat; ``golden_tol`` bounds the final bracket width
    in ``log R``.
    """

    r_min: float = 1e-6
    r_max: float = 1e6
    points_per_decade: int = 20
    cap_min: float = 1e-12
    cap_max: float = 1e12
    flat_tol: float = 1e-9
    golden_tol: float = 1e-5
    decel_ratio: float = 0.8

    def __post_init__(self):
        if not 0 < self.cap_min <= self.r_min < self.r_max <= self.cap_max:
            raise DomainError("need 0 < cap_min <= r_min < r_max <= cap_max")
        if self.points_per_decade < 2:
            raise DomainError("points_per_decade must be at least 2")
        if not (self.flat_tol > 0 and self.golden_tol > 0 and 0 < self.decel_ratio < 1):
            raise DomainError("search tolerances must be positive and decel_ratio in (0, 1)")


@dataclass
class _Factor:
    """One factor of ``Phi``: an upper/lower integral or a closed-form function."""

    kind: str
    fn: Callable
    power: float
    expect: int
    breakpoints: tuple = ()
    name: str = ""

    def table(self, grid: np.ndarray, cfg: QuadConfig):
        if self.kind == "closed":
            return State.FINITE, np.asarray(self.fn(grid), dtype=float), {}
        if self.kind == "upper":
            state, logs, _, ev = log_upper_table(self.fn, grid, cfg, self.breakpoints)
            return state, logs, ev
        try:
            logs, _ = log_lower_table(self.fn, grid, cfg, self.breakpoints)
        except DivergenceError as exc:
            return State.DIVERGENT, np.full(grid.shape, np.inf), exc.evidence
        except InconclusiveError as exc:
            return State.INCONCLUSIVE, np.full(grid.shape, np.nan), exc.evidence
        return State.FINITE, logs, {}

    def at(self, R: float, grid: np.ndarray, logs: np.ndarray, cfg: QuadConfig) -> float:
        if self.kind == "closed":
            return float(self.fn(np.array([R]))[0])
        if self.kind == "upper":
            j = int(np.searchsorted(grid, R))
            if j >= grid.size:
                _, lg, _, _ = log_upper_table(self.fn, [R], cfg, self.breakpoints)
                return float(lg[0])
            piece = _integral(self.fn, R, float(grid[j]), cfg, self.breakpoints)
            return float(np.logaddexp(logs[j], piece.log_value))
        j = int(np.searchsorted(grid, R)) - 1
        if j < 0:
            lg, _ = log_lower_table(self.fn, [R], cfg, self.breakpoints)
            return float(lg[0])
        piece = _integral(self.fn, float(grid[j]), R, cfg, self.breakpoints)
        return float(np.logaddexp(logs[j], piece.log_value))


@dataclass
class SupResult:
    """Outcome of ``sup_R Phi(R)`` together with the evaluated profile."""

    A: ExtendedValue
    grid: np.ndarray
    log_phi: np.ndarray
    log_factors: list
    factor_names: list
    factors_monotone: bool
    warnings: list = field(default_factory=list)

    @property
    def argmax(self) -> float | None:
        return self.A.argmax

    @property
    def phi(self) -> np.ndarray:
        return np.exp(self.log_phi)

    def to_dict(self) -> dict:
        return {
            "A": self.A.to_dict(),
            "argmax": self.argmax,
            "grid_min": float(self.grid[0]) if self.grid.size else None,
            "grid_max": float(self.grid[-1]) if self.grid.size else None,
            "grid_points": int(self.grid.size),
            "factors_monotone": self.factors_monotone,
            "warnings": list(self.warnings),
        }


def _log_grid(lo_dec: float, hi_dec: float, ppd: int) -> np.ndarray:
    n = int(round((hi_dec - lo_dec) * ppd)) + 1
    return 10.0 ** np.linspace(lo_dec, hi_dec, n)


def _combine_profile(factors, tables):
    stack = np.array([f.power * np.where(np.isinf(t) & (t < 0), -np.inf, t) for f, t in zip(factors, tables)])
    has_zero = np.any(stack == -np.inf, axis=0)
    with np.errstate(invalid="ignore"):
        total = stack.sum(axis=0)
    return np.where(has_zero, -np.inf, total)


def _monotone(tables, factors, tol=1e-10) -> bool:
    for f, t in zip(factors, tables):
        d = np.diff(t[np.isfinite(t)]) * f.expect
        scale = np.maximum(1.0, np.abs(t[np.isfinite(t)][1:]))
        if np.any(d < -tol * scale):
            return False
    return True


def _boundary_trend(lp: np.ndarray, ppd: int, left: bool, search: SupSearchConfig):
    """Classify how ``log Phi`` behaves toward one end of the grid.

    Returns ``("flat", None)``, ``("divergent", evidence)``,
    ``("converging", (extra_log, err, evidence))`` or
    ``("unclear", evidence)``.
    """
    idx = np.arange(0, lp.size, ppd)
    if not left:
        idx = (lp.size - 1) - idx
    samples = lp[idx][:5]
    # increments per decade, outermost first
    inc = samples[:-1] - samples[1:]
    if inc.size == 0 or not np.isfinite(inc[0]) or inc[0] <= search.flat_tol:
        return "flat", None
    outward = inc[::-1]
    evidence = {
        "side": "origin" if left else "infinity",
        "log_phi_increment_per_decade": [float(x) for x in outward],
        "log_slope": float(outward[-1] / math.log(10.0)),
    }
    if outward.size < 3 or not np.all(np.isfinite(outward)):
        return "unclear", evidence
    if np.all(outward > search.flat_tol) and np.all(outward[1:] >= 0.99 * outward[:-1]):
        evidence["reason"] = "Phi grows without deceleration toward the boundary"
        return "divergent", evidence
    if np.all(outward > 0):
        rho = outward[1:] / outward[:-1]
        if np.all(rho[-2:] <= search.decel_ratio) and abs(rho[-1] - rho[-2]) <= 0.05:
            r = float(rho[-1])
            extra = float(outward[-1]) * r / (1.0 - r)
            err = extra * abs(float(rho[-1] - rho[-2])) / (1.0 - r) + 1e-12
            evidence["reason"] = "Phi approaches a finite limit at the boundary"
            evidence["extrapolated_log_increment"] = extra
            return "converging", (extra, err, evidence)
    evidence["reason"] = "growth at the boundary neither settles nor persists"
    return "unclear", evidence


def _sup_search(factors, search: SupSearchConfig, cfg: QuadConfig, warnings=None) -> SupResult:
    ppd = search.points_per_decade
    lo_dec, hi_dec = math.log10(search.r_min), math.log10(search.r_max)
    cap_lo, cap_hi = math.log10(search.cap_min), math.log10(search.cap_max)
    step_lo = step_hi = 1
    names = [f.name for f in factors]
    warnings = list(warnings or [])

    while True:
        grid = _log_grid(lo_dec, hi_dec, ppd)
        tables = []
        for f in factors:
            state, logs, ev = f.table(grid, cfg)
            if state is not State.FINITE:
                ev = dict(ev, factor=f.name)
                A = (ExtendedValue.divergent(ev) if state is State.DIVERGENT
                     else ExtendedValue.inconclusive(ev))
                return SupResult(A, grid, np.full(grid.shape, np.nan), [logs], names, True, warnings)
            tables.append(logs)
        lp = _combine_profile(factors, tables)
        mono = _monotone(tables, factors)
        if np.any(lp == np.inf):
            i = int(np.argmax(lp == np.inf))
            ev = {"reason": "a factor is infinite while the others are nonzero", "at_R": float(grid[i])}
            return SupResult(ExtendedValue.divergent(ev), grid, lp, tables, names, mono, warnings)
        extend_lo = _boundary_trend(lp, ppd, True, search)[0] != "flat" and lo_dec > cap_lo
        extend_hi = _boundary_trend(lp, ppd, False, search)[0] != "flat" and hi_dec < cap_hi
        if not (extend_lo or extend_hi):
            break
        if extend_lo:
            lo_dec = max(lo_dec - step_lo, cap_lo)
            step_lo *= 2
        if extend_hi:
            hi_dec = min(hi_dec + step_hi, cap_hi)
            step_hi *= 2

    best_log = -math.inf
    best_at = None
    best_err = 0.0
    for left in (True, False):
        verdict, info = _boundary_trend(lp, ppd, left, search)
        if verdict == "divergent":
            return SupResult(ExtendedValue.divergent(info), grid, lp, tables, names, mono, warnings)
        if verdict == "unclear":
            return SupResult(ExtendedValue.inconclusive(info), grid, lp, tables, names, mono, warnings)
        if verdict == "converging":
            extra, err, ev = info
            end = 0 if left else -1
            cand = float(lp[end]) + extra
            if cand > best_log:
                best_log, best_err = cand, err
                best_at = 0.0 if left else math.inf
            warnings.append(f"supremum approached at the {ev['side']} boundary; value extrapolated")

    finite = np.isfinite(lp)
    if not finite.any():
        if best_at is None:
            return SupResult(ExtendedValue.finite(-math.inf, argmax=float(grid[0])), grid, lp, tables, names, mono, warnings)
    else:
        top = float(lp[finite].max())
        plateau = np.flatnonzero(finite & (lp >= top - 1e-10 * max(1.0, abs(top))))
        i = int(plateau[np.argmin(np.abs(np.log10(grid[plateau])))])
        at, val = float(grid[i]), top
        if plateau.size == 1 and 0 < i < grid.size - 1:
            def log_phi_at(t):
                R = math.exp(t)
                return _log_product(*(f.power * f.at(R, grid, tab, cfg) for f, tab in zip(factors, tables)))

            t_best, v_best = _golden_max(
                log_phi_at, math.log(grid[i - 1]), math.log(grid[i + 1]), tol=search.golden_tol / 10
            )
            if v_best > val:
                at, val = math.exp(t_best), v_best
        if val >= best_log:
            best_log, best_at, best_err = val, at, 0.0
    rel = best_err + cfg.rel_tol * 10
    return SupResult(
        ExtendedValue.finite(best_log, rel, argmax=best_at), grid, lp, tables, names, mono, warnings
    )


def _hypothesis_warnings(prob: HardyProblem, cfg: QuadConfig, search: SupSearchConfig) -> list:
    out = []
    if prob.direction is Direction.DIRECT:
        loc = _integral(prob.log_v_mass_density, 0.0, 1.0, cfg, prob.v.knots)
        if loc.state is not State.FINITE:
            out.append("v does not appear locally integrable near the centre (v not in L1_loc)")
    else:
        tail = integrate_tail(prob.log_v_mass_density, 1.0, cfg, prob.v.knots)
        loc = _integral(prob.log_u_mass_density, 0.0, 1.0, cfg, prob.u.knots)
        if loc.state is not State.FINITE:
            out.append("u does not appear locally integrable near the centre (u not in L1_loc)")
        del tail
    return out


def _direct_factors(prob: HardyProblem):
    return [
        _Factor("upper", prob.log_u_mass_density, 1.0 / prob.q, -1, prob.u.knots, "U"),
        _Factor("closed", lambda R: log_sup_inv_on_ball(prob.v, R), 1.0, +1, (), "S"),
    ]


def _conjugate_factors(prob: HardyProblem):
    return [
        _Factor("lower", prob.log_u_mass_density, 1.0 / prob.q, +1, prob.u.knots, "U_ball"),
        _Factor("closed", lambda R: log_sup_inv_on_exterior(prob.v, R), 1.0, -1, (), "S_ext"),
    ]


def compute_A(
    prob: HardyProblem, cfg: QuadConfig | None = None, search: SupSearchConfig | None = None
) -> SupResult:
    """The characterisation constant ``A`` (and best constant) for ``p = 1``."""
    cfg = cfg or QuadConfig()
    search = search or SupSearchConfig()
    if prob.direction is Direction.DIRECT:
        factors = _direct_factors(prob)
    else:
        factors = _conjugate_factors(prob)
    return _sup_search(factors, search, cfg, _hypothesis_warnings(prob, cfg, search))


def compute_A_p(
    prob: HardyProblem, cfg: QuadConfig | None = None, search: SupSearchConfig | None = None
) -> SupResult:
    """``sup_R U(R)^(1/q) V(R)^(1/p')`` for ``1 < p <= q``."""
    cfg = cfg or QuadConfig()
    search = search or SupSearchConfig()
    if prob.p is None:
        raise DomainError("compute_A_p needs 1 < p <= q; the problem has no p")
    factors = [
        _Factor("upper", prob.log_u_mass_density, 1.0 / prob.q, -1, prob.u.knots, "U"),
        _Factor("lower", _log_v_dual_density(prob), 1.0 / prob.p_conjugate, +1, prob.v.knots, "V"),
    ]
    return _sup_search(factors, search, cfg)


# -- both sides of the inequality -----------------------------------------------


def _f_mass_density(prob: HardyProblem, f: RadialTestFunction):
    def g(r):
        return f.log_value(r) + prob.geometry.log_density(r)

    return g


def _outer_breakpoints(prob: HardyProblem, f: RadialTestFunction):
    return tuple(sorted(set(f.breakpoints) | set(prob.u.knots)))


def hardy_lhs(prob: HardyProblem, f: RadialTestFunction, cfg: QuadConfig | None = None) -> ExtendedValue:
    """Left-hand side of the direct or conjugate inequality for radial ``f``."""
    cfg = cfg or QuadConfig()
    if f.is_zero:
        return ExtendedValue.finite(-math.inf)
    q = prob.q
    g_f = _f_mass_density(prob, f)
    lo, hi = f.support
    inner_bps = f.inner_breakpoints
    outer_bps = _outer_breakpoints(prob, f)
    parts = []

    if prob.direction is Direction.DIRECT:
        def outer(x):
            x = np.asarray(x, dtype=float)
            logF, _ = log_lower_table(g_f, x, cfg, inner_bps, start=lo)
            return q * logF + prob.log_u_mass_density(x)

        parts.append(_integral(outer, lo, hi, cfg, outer_bps))
        if math.isfinite(hi):
            mass = _integral(g_f, lo, hi, cfg, inner_bps)
            U = tail_mass_U(prob, hi, cfg)
            parts.append(_scaled_mass(mass, q, U))
    else:
        def outer(x):
            x = np.asarray(x, dtype=float)
            state, logG, _, ev = log_upper_table(g_f, x, cfg, inner_bps, stop=hi)
            if state is not State.FINITE:
                raise DivergenceError("inner exterior integral diverges", ev)
            return q * logG + prob.log_u_mass_density(x)

        if lo > 0:
            mass = _integral(g_f, lo, hi, cfg, inner_bps)
            parts.append(_scaled_mass(mass, q, ball_mass_u(prob, lo, cfg)))
        try:
            parts.append(_integral(outer, lo, hi, cfg, outer_bps))
        except DivergenceError as exc:
            parts.append(ExtendedValue.divergent(exc.evidence))
    return _root(_sum(parts), q)


def _scaled_mass(mass: ExtendedValue, q: float, other: ExtendedValue) -> ExtendedValue:
    """``mass**q * other`` in log form."""
    if mass.is_finite and mass.log_value == -math.inf:
        return ExtendedValue.finite(-math.inf)
    for x in (mass, other):
        if not x.is_finite:
            return x
    return ExtendedValue.finite(
        _log_product(q * mass.log_value, other.log_value), q * mass.rel_error + other.rel_error
    )


def _sum(parts: Sequence[ExtendedValue]) -> ExtendedValue:
    for p in parts:
        if p.state is State.DIVERGENT:
            return p
    for p in parts:
        if p.state is State.INCONCLUSIVE:
            return p
    logs = [p.log_value for p in parts]
    total = float(np.logaddexp.reduce(logs)) if logs else -math.inf
    if total == -math.inf:
        return ExtendedValue.finite(-math.inf)
    err = sum(math.exp(p.log_value - total) * p.rel_error for p in parts if p.log_value > -math.inf)
    return ExtendedValue.finite(total, err)


def _root(x: ExtendedValue, q: float) -> ExtendedValue:
    if not x.is_finite:
        return x
    return ExtendedValue.finite(x.log_value / q, x.rel_error / q)


def hardy_rhs(prob: HardyProblem, f: RadialTestFunction, cfg: QuadConfig | None = None) -> ExtendedValue:
    """``int f v dx`` for radial ``f``."""
    cfg = cfg or QuadConfig()
    if f.is_zero:
        return ExtendedValue.finite(-math.inf)
    lo, hi = f.support

    def g(r):
        return f.log_value(r) + prob.log_v_mass_density(r)

    bps = tuple(sorted(set(f.inner_breakpoints) | set(prob.v.knots)))
    return _integral(g, lo, hi, cfg, bps)


def minkowski_bound(prob: HardyProblem, f: RadialTestFunction, cfg: QuadConfig | None = None) -> ExtendedValue:
    """``int f(z) U(|z|)^(1/q) dz``, obtained from Minkowski's integral inequality.

    It sits between the two sides: ``lhs <= bound <= A * rhs``.
    """
    cfg = cfg or QuadConfig()
    if prob.direction is not Direction.DIRECT:
        raise DomainError("the Minkowski bound is defined for direct problems only")
    if f.is_zero:
        return ExtendedValue.finite(-math.inf)
    lo, hi = f.support
    q = prob.q

    def g(r):
        r = np.asarray(r, dtype=float)
        state, logU, _, ev = log_upper_table(prob.log_u_mass_density, r, cfg, prob.u.knots)
        if state is not State.FINITE:
            raise DivergenceError("u-mass of the exterior diverges", ev)
        return f.log_value(r) + logU / q + prob.geometry.log_density(r)

    bps = tuple(sorted(set(f.inner_breakpoints) | set(prob.u.knots)))
    try:
        return _integral(g, lo, hi, cfg, bps)
    except DivergenceError as exc:
        return ExtendedValue.divergent(exc.evidence)


@dataclass(frozen=True)
class VerificationRow:
    function: dict
    lhs: ExtendedValue
    rhs: ExtendedValue
    ratio: float | None
    A: float
    passed: bool
    vacuous: bool
    note: str = ""

    def to_dict(self) -> dict:
        return jsonable({
            "function": self.function,
            "lhs": self.lhs.to_dict(),
            "rhs": self.rhs.to_dict(),
            "ratio": self.ratio,
            "A": self.A,
            "passed": self.passed,
            "vacuous": self.vacuous,
            "note": self.note,
        })


def verify_inequality(
    prob: HardyProblem,
    f: RadialTestFunction,
    cfg: QuadConfig | None = None,
    A: float | ExtendedValue | None = None,
    slack: float = DEFAULT_SLACK,
    search: SupSearchConfig | None = None,
) -> VerificationRow:
    """Evaluate both sides for ``f`` and compare ``lhs/rhs`` with ``A``."""
    cfg = cfg or QuadConfig()
    if A is None:
        A = compute_A(prob, cfg, search).A
    if isinstance(A, ExtendedValue):
        A_val = A.value if A.state is not State.INCONCLUSIVE else math.nan
    else:
        A_val = float(A)
    desc = f.describe()
    if f.is_zero:
        zero = ExtendedValue.finite(-math.inf)
        return VerificationRow(desc, zero, zero, None, A_val, True, True, "f = 0")
    rhs = hardy_rhs(prob, f, cfg)
    lhs = hardy_lhs(prob, f, cfg)
    if rhs.state is State.DIVERGENT:
        return VerificationRow(desc, lhs, rhs, None, A_val, True, True, "right-hand side infinite")
    if not (lhs.state is not State.INCONCLUSIVE and rhs.is_finite):
        return VerificationRow(desc, lhs, rhs, None, A_val, False, False, "quadrature inconclusive")
    if rhs.log_value == -math.inf:
        if lhs.is_finite and lhs.log_value == -math.inf:
            return VerificationRow(desc, lhs, rhs, None, A_val, True, True, "both sides vanish")
        raise InconsistencyError("right-hand side vanishes while the left-hand side does not")
    if lhs.state is State.DIVERGENT:
        return VerificationRow(desc, lhs, rhs, math.inf, A_val, math.isinf(A_val), False, "lhs infinite")
    ratio = math.exp(lhs.log_value - rhs.log_value)
    passed = bool(math.isnan(A_val) is False and ratio <= A_val * (1.0 + slack))
    return VerificationRow(desc, lhs, rhs, ratio, A_val, passed, False)
